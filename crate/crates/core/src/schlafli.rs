//! Schläfli pairs, splitting schemes and the matrix of a splitting.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Error, Result};
use crate::polynomial::SplittingPolynomial;

/// A validated hyperbolic pair `{p,q}` with `h = floor(q/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SchlafliPair {
    pub p: u32,
    pub q: u32,
    pub h: u32,
}

impl SchlafliPair {
    pub fn q_is_odd(&self) -> bool {
        self.q % 2 == 1
    }
}

impl fmt::Display for SchlafliPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.p, self.q)
    }
}

pub fn validate(p: i64, q: i64) -> Result<SchlafliPair> {
    if p < 3 || q < 3 {
        return Err(Error::DegenerateInput { p, q });
    }
    // 1/p + 1/q < 1/2  <=>  pq > 2(p + q)
    let (pp, qq) = (i128::from(p), i128::from(q));
    if pp * qq <= 2 * (pp + qq) {
        return Err(Error::NotHyperbolic { p, q });
    }
    let (p, q) = match (u32::try_from(p), u32::try_from(q)) {
        (Ok(p), Ok(q)) => (p, q),
        _ => return Err(Error::InvalidInput(format!("{{{p},{q}}} is out of range"))),
    };
    Ok(SchlafliPair { p, q, h: q / 2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    EvenQ,
    OddLegacy,
    OddV1,
    OddV2,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::EvenQ,
        Scheme::OddLegacy,
        Scheme::OddV1,
        Scheme::OddV2,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::EvenQ => "even-q",
            Scheme::OddLegacy => "odd-legacy",
            Scheme::OddV1 => "odd-v1",
            Scheme::OddV2 => "odd-v2",
        }
    }

    pub fn needs_odd_q(&self) -> bool {
        !matches!(self, Scheme::EvenQ)
    }

    /// Every scheme that accepts the parity of `q`.
    pub fn applicable(pair: &SchlafliPair) -> Vec<Scheme> {
        if pair.q_is_odd() {
            vec![Scheme::OddLegacy, Scheme::OddV1, Scheme::OddV2]
        } else {
            vec![Scheme::EvenQ]
        }
    }

    /// What `auto` expands to: the even scheme, or both new odd variants.
    pub fn auto(pair: &SchlafliPair) -> Vec<Scheme> {
        if pair.q_is_odd() {
            vec![Scheme::OddV1, Scheme::OddV2]
        } else {
            vec![Scheme::EvenQ]
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown scheme `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionKind {
    #[serde(rename = "S0")]
    S0,
    #[serde(rename = "S0'")]
    S0Prime,
    #[serde(rename = "S1")]
    S1,
}

impl RegionKind {
    pub const ORDER: [RegionKind; 3] = [RegionKind::S0, RegionKind::S0Prime, RegionKind::S1];

    pub fn label(&self) -> &'static str {
        match self {
            RegionKind::S0 => "S0",
            RegionKind::S0Prime => "S0'",
            RegionKind::S1 => "S1",
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A block of consecutive copies of one region sharing a vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub vertex: String,
    pub kind: RegionKind,
    #[serde(with = "bigjson")]
    pub size: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Child {
    pub kind: RegionKind,
    #[serde(with = "bigjson")]
    pub multiplicity: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingRule {
    pub parent: RegionKind,
    pub children: Vec<Child>,
    pub fans: Vec<Fan>,
}

impl SplittingRule {
    pub fn multiplicity(&self, kind: RegionKind) -> BigInt {
        self.children
            .iter()
            .filter(|c| c.kind == kind)
            .map(|c| c.multiplicity.clone())
            .sum()
    }

    pub fn total_children(&self) -> BigInt {
        self.children.iter().map(|c| c.multiplicity.clone()).sum()
    }

    pub fn fan_total(&self) -> BigInt {
        self.fans.iter().map(|f| f.size.clone()).sum()
    }
}

impl fmt::Display for SplittingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.parent)?;
        for (i, c) in self.children.iter().enumerate() {
            let sep = if i == 0 { " " } else { " + " };
            if c.kind == RegionKind::S1 && c.multiplicity.is_one() {
                write!(f, "{sep}{}", c.kind)?;
            } else {
                write!(f, "{sep}{}.{}", c.multiplicity, c.kind)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingSystem {
    pub scheme: Scheme,
    pub pair: SchlafliPair,
    pub rules: Vec<SplittingRule>,
    pub seed: RegionKind,
    /// Number of seed copies around a vertex that cover the plane.
    pub seed_copies: u32,
}

impl SplittingSystem {
    /// Regions present, in matrix order.
    pub fn regions(&self) -> Vec<RegionKind> {
        RegionKind::ORDER
            .into_iter()
            .filter(|k| self.rules.iter().any(|r| r.parent == *k))
            .collect()
    }

    pub fn rule(&self, kind: RegionKind) -> Result<&SplittingRule> {
        self.rules
            .iter()
            .find(|r| r.parent == kind)
            .ok_or(Error::UnknownRegion(kind))
    }

    pub fn index_of(&self, kind: RegionKind) -> Option<usize> {
        self.regions().iter().position(|k| *k == kind)
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn child(kind: RegionKind, m: BigInt) -> Child {
    Child {
        kind,
        multiplicity: m,
    }
}

fn fan(vertex: String, kind: RegionKind, size: BigInt) -> Fan {
    Fan { vertex, kind, size }
}

/// Fans `R_1..R_{p-3}` of the basic region, at `V_2..V_{p-2}`.
fn s0_fans(p: i64, h: i64, kind: RegionKind, scale: i64) -> Vec<Fan> {
    (2..=p - 2)
        .map(|i| fan(format!("V{i}"), kind, big(scale * (h - 1))))
        .collect()
}

/// Fans of the `S1` splitting: `h-2` at `V_2`, `h-1` at `V_3..V_{p-2}`,
/// `h-2` at `V_1`.
fn s1_fans(p: i64, h: i64, kind: RegionKind, scale: i64) -> Vec<Fan> {
    let mut fans = vec![fan("V2".into(), kind, big(scale * (h - 2)))];
    fans.extend((3..=p - 2).map(|i| fan(format!("V{i}"), kind, big(scale * (h - 1)))));
    fans.push(fan("V1".into(), kind, big(scale * (h - 2))));
    fans
}

pub fn build_system(pair: SchlafliPair, scheme: Scheme) -> Result<SplittingSystem> {
    if scheme.needs_odd_q() != pair.q_is_odd() {
        return Err(Error::SchemeParityMismatch { scheme, q: pair.q });
    }
    if pair.p < 4 {
        return Err(Error::UnsupportedCase(format!(
            "{pair}: the fan decomposition needs p >= 4"
        )));
    }
    if scheme.needs_odd_q() && pair.h < 2 {
        return Err(Error::UnsupportedCase(format!(
            "{pair}: odd-q splittings need h >= 2"
        )));
    }
    let p = i64::from(pair.p);
    let h = i64::from(pair.h);
    let a = big((p - 3) * (h - 1));
    let c = big((p - 2) * (h - 1) - 2);
    let one = BigInt::one;
    use RegionKind::*;

    let (rules, seed, seed_copies) = match scheme {
        Scheme::EvenQ | Scheme::OddLegacy => (
            vec![
                SplittingRule {
                    parent: S0,
                    children: vec![child(S0, a.clone()), child(S1, one())],
                    fans: s0_fans(p, h, S0, 1),
                },
                SplittingRule {
                    parent: S1,
                    children: vec![child(S0, c.clone()), child(S1, one())],
                    fans: s1_fans(p, h, S0, 1),
                },
            ],
            S0,
            pair.q,
        ),
        Scheme::OddV1 => {
            let mut s0 = s0_fans(p, h, S0, 1);
            s0.push(fan("M1".into(), S0Prime, one()));
            (
                vec![
                    SplittingRule {
                        parent: S0,
                        children: vec![
                            child(S0, a.clone()),
                            child(S0Prime, one()),
                            child(S1, one()),
                        ],
                        fans: s0,
                    },
                    SplittingRule {
                        parent: S0Prime,
                        children: vec![child(S0, a.clone()), child(S1, one())],
                        fans: s0_fans(p, h, S0, 1),
                    },
                    SplittingRule {
                        parent: S1,
                        children: vec![child(S0, c.clone()), child(S1, one())],
                        fans: s1_fans(p, h, S0, 1),
                    },
                ],
                S0,
                pair.q,
            )
        }
        Scheme::OddV2 => (
            vec![
                SplittingRule {
                    parent: S0Prime,
                    children: vec![child(S0Prime, &a * 2), child(S1, one())],
                    fans: s0_fans(p, h, S0Prime, 2),
                },
                SplittingRule {
                    parent: S1,
                    children: vec![child(S0Prime, &c * 2), child(S1, one())],
                    fans: s1_fans(p, h, S0Prime, 2),
                },
            ],
            S0Prime,
            2 * pair.q,
        ),
    };
    Ok(SplittingSystem {
        scheme,
        pair,
        rules,
        seed,
        seed_copies,
    })
}

/// Square integer matrix with labelled rows and columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerMatrix {
    pub labels: Vec<RegionKind>,
    #[serde(with = "bigjson::matrix")]
    pub entries: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn new(labels: Vec<RegionKind>, entries: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(labels.len(), entries.len());
        assert!(entries.iter().all(|r| r.len() == labels.len()));
        Self { labels, entries }
    }

    pub fn from_i64(labels: Vec<RegionKind>, rows: &[&[i64]]) -> Self {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        Self::new(labels, entries)
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn row_sum(&self, i: usize) -> BigInt {
        self.entries[i].iter().sum()
    }

    pub fn determinant(&self) -> BigInt {
        let m: Vec<Vec<SplittingPolynomial>> = self
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| SplittingPolynomial::new(vec![v.clone()]))
                    .collect()
            })
            .collect();
        laplace(&m).constant_term().clone()
    }

    /// Row vector times matrix.
    pub fn left_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.order())
            .map(|j| {
                v.iter()
                    .enumerate()
                    .map(|(i, x)| x * &self.entries[i][j])
                    .sum()
            })
            .collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|v| v.to_i64()).collect())
            .collect()
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, row) in self.labels.iter().zip(&self.entries) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{label:>3} [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn splitting_matrix(system: &SplittingSystem) -> IntegerMatrix {
    let labels = system.regions();
    let entries = labels
        .iter()
        .map(|&row| {
            let rule = system.rule(row).expect("regions() lists only ruled kinds");
            labels.iter().map(|&col| rule.multiplicity(col)).collect()
        })
        .collect();
    IntegerMatrix::new(labels, entries)
}

/// Cofactor expansion along the first row of a matrix of polynomials.
fn laplace(m: &[Vec<SplittingPolynomial>]) -> SplittingPolynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = SplittingPolynomial::from_i64(&[0]);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SplittingPolynomial>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&laplace(&minor));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// `det(X I - M)`, exact.
pub fn characteristic_polynomial(matrix: &IntegerMatrix) -> SplittingPolynomial {
    let n = matrix.order();
    let m: Vec<Vec<SplittingPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = -matrix.entry(i, j).clone();
                    if i == j {
                        SplittingPolynomial::new(vec![BigInt::one(), v])
                    } else {
                        SplittingPolynomial::new(vec![v])
                    }
                })
                .collect()
        })
        .collect();
    laplace(&m)
}

/// Checks the structural invariants of a rule set; returns a description of
/// the first violation.
pub fn check_rules(system: &SplittingSystem) -> std::result::Result<(), String> {
    for rule in &system.rules {
        let s0_total = rule.multiplicity(RegionKind::S0) + rule.multiplicity(RegionKind::S0Prime);
        if s0_total != rule.fan_total() {
            return Err(format!(
                "{}: fan sizes do not sum to the S0 multiplicities",
                rule.parent
            ));
        }
        let s1: Vec<_> = rule
            .children
            .iter()
            .filter(|c| c.kind == RegionKind::S1)
            .collect();
        if s1.len() != 1 || !s1[0].multiplicity.is_one() {
            return Err(format!("{}: expected exactly one S1 child", rule.parent));
        }
        if rule.children.iter().any(|c| c.multiplicity.is_negative())
            || rule.fans.iter().any(|f| f.size.is_negative())
        {
            return Err(format!("{}: negative multiplicity", rule.parent));
        }
    }
    Ok(())
}

/// Zero multiplicities that are valid but worth pointing out.
pub fn zero_multiplicity_warnings(system: &SplittingSystem) -> Vec<String> {
    system
        .rules
        .iter()
        .flat_map(|r| {
            r.children
                .iter()
                .filter(|c| c.multiplicity.is_zero())
                .map(move |c| format!("rule {} has zero copies of {}", r.parent, c.kind))
        })
        .collect()
}
