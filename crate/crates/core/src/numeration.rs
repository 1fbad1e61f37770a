//! Numeration systems built on the splitting recurrence.
//!
//! Terms are indexed from the least significant end (`t_0 = 1`); digit
//! strings are always written most significant first.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Error, Result};
use crate::polynomial::SplittingPolynomial;
use crate::schlafli::{
    build_system, characteristic_polynomial, splitting_matrix, Scheme, SchlafliPair,
};
use crate::tree::{generate, level_counts};

/// Largest value a language sample may range over.
pub const LANGUAGE_VALUE_CAP: u64 = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSequence {
    #[serde(with = "bigjson::vec")]
    pub terms: Vec<BigInt>,
    /// `c_0..c_{d-1}` with `t_{n+d} = sum c_i t_{n+i}`.
    #[serde(with = "bigjson::vec")]
    pub recurrence: Vec<BigInt>,
    pub origin: String,
}

impl BasisSequence {
    /// Seeds a sequence with `initial` and checks it against the recurrence.
    pub fn from_initial(
        initial: Vec<BigInt>,
        poly: &SplittingPolynomial,
        origin: impl Into<String>,
    ) -> Result<Self> {
        let seq = Self {
            terms: initial,
            recurrence: poly.recurrence_coefficients(),
            origin: origin.into(),
        };
        seq.check_monotone()?;
        Ok(seq)
    }

    fn check_monotone(&self) -> Result<()> {
        if let Some(first) = self.terms.first() {
            if !first.is_one() {
                return Err(Error::NonMonotoneBasis { index: 0 });
            }
        }
        match self.terms.windows(2).position(|w| w[0] >= w[1]) {
            Some(i) => Err(Error::NonMonotoneBasis { index: i + 1 }),
            None => Ok(()),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Grows the sequence to `n` terms.
    pub fn extended(mut self, n: usize) -> Result<Self> {
        let d = self.recurrence.len();
        if self.terms.len() < d && n > self.terms.len() {
            return Err(Error::InvalidInput(format!(
                "{} seed terms cannot be extended by an order {d} recurrence",
                self.terms.len()
            )));
        }
        while self.terms.len() < n {
            let k = self.terms.len();
            let next: BigInt = (0..d)
                .map(|i| &self.recurrence[i] * &self.terms[k - d + i])
                .sum();
            self.terms.push(next);
        }
        self.check_monotone()?;
        Ok(self)
    }

    /// Grows the sequence until its last term exceeds `value`.
    pub fn extended_past(self, value: u64) -> Result<Self> {
        let target = BigInt::from(value);
        let mut seq = self;
        while seq.terms.last().is_some_and(|t| *t <= target) {
            let n = seq.terms.len() + 1;
            seq = seq.extended(n)?;
        }
        Ok(seq)
    }

    /// Terms not exceeding `value`, as machine integers.
    pub fn terms_up_to(&self, value: u64) -> Vec<u64> {
        self.terms
            .iter()
            .map_while(|t| t.to_u64().filter(|&t| t <= value))
            .collect()
    }
}

/// First `n` terms: the spanning-tree level counts `u_0..u_{d-1}`, then the
/// recurrence of the splitting polynomial.
pub fn basis(pair: SchlafliPair, scheme: Scheme, n: usize) -> Result<BasisSequence> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "a basis needs at least one term".into(),
        ));
    }
    let system = build_system(pair, scheme)?;
    let poly = characteristic_polynomial(&splitting_matrix(&system));
    let d = poly.degree();
    let tree = generate(&system, (d - 1) as u32, u64::MAX)?;
    let initial = level_counts(&tree).counts;
    let origin = format!(
        "spanning-tree level counts u_0..u_{}, then the recurrence of {poly}",
        d - 1
    );
    let seq = BasisSequence::from_initial(initial, &poly, origin)?.extended(n)?;
    Ok(BasisSequence {
        terms: seq.terms[..n].to_vec(),
        ..seq
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Representation {
    /// Most significant first.
    pub digits: Vec<u64>,
    pub value: u64,
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().map(|d| d.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn decode(rep: &Representation, basis: &BasisSequence, b: u64) -> Result<BigInt> {
    if let Some(&digit) = rep.digits.iter().find(|&&d| d > b) {
        return Err(Error::DigitOutOfRange { digit, bound: b });
    }
    let basis = if basis.len() < rep.digits.len() {
        basis.clone().extended(rep.digits.len())?
    } else {
        basis.clone()
    };
    Ok(rep
        .digits
        .iter()
        .rev()
        .zip(&basis.terms)
        .map(|(d, t)| BigInt::from(*d) * t)
        .sum())
}

pub fn represent_greedy(value: u64, basis: &BasisSequence, b: u64) -> Result<Representation> {
    if value == 0 {
        return Ok(Representation {
            digits: vec![0],
            value,
        });
    }
    let terms = basis.clone().extended_past(value)?.terms_up_to(value);
    let mut rest = value;
    let mut digits = Vec::with_capacity(terms.len());
    for &t in terms.iter().rev() {
        let d = (rest / t).min(b);
        rest -= d * t;
        digits.push(d);
    }
    if rest != 0 {
        return Err(Error::Unrepresentable { value, bound: b });
    }
    Ok(Representation { digits, value })
}

/// Representation counts for every value up to a bound, used to answer
/// maximal-representation queries.
///
/// `ways[k][v]` is the number of digit strings over positions `0..k` with
/// digits in `0..=b` summing to `v` (saturating).
#[derive(Debug, Clone)]
pub struct MaximalTable {
    terms: Vec<u64>,
    b: u64,
    bound: u64,
    ways: Vec<Vec<u64>>,
}

impl MaximalTable {
    pub fn new(basis: &BasisSequence, b: u64, bound: u64) -> Result<Self> {
        let terms = basis.clone().extended_past(bound)?.terms_up_to(bound);
        let size = bound as usize + 1;
        let mut ways = vec![{
            let mut w = vec![0u64; size];
            w[0] = 1;
            w
        }];
        for &t in &terms {
            let prev = ways.last().unwrap();
            let mut next = vec![0u64; size];
            for (v, slot) in next.iter_mut().enumerate() {
                let mut acc = 0u64;
                let mut d = 0u64;
                while d <= b && d * t <= v as u64 {
                    acc = acc.saturating_add(prev[v - (d * t) as usize]);
                    d += 1;
                }
                *slot = acc;
            }
            ways.push(next);
        }
        Ok(Self {
            terms,
            b,
            bound,
            ways,
        })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Length of the longest representation of `value`, if any.
    pub fn max_length(&self, value: u64) -> Option<usize> {
        assert!(value <= self.bound, "value beyond the table bound");
        if value == 0 {
            return Some(1);
        }
        (1..=self.terms.len())
            .rev()
            .find(|&k| self.leading_options(value, k).next().is_some())
    }

    fn leading_options(&self, value: u64, k: usize) -> impl Iterator<Item = u64> + '_ {
        let t = self.terms[k - 1];
        let ways = &self.ways[k - 1];
        (1..=self.b)
            .take_while(move |d| d * t <= value)
            .filter(move |d| ways[(value - d * t) as usize] > 0)
    }

    /// Number of distinct representations of maximal length (saturating).
    pub fn maximal_count(&self, value: u64) -> u64 {
        if value == 0 {
            return 1;
        }
        let Some(k) = self.max_length(value) else {
            return 0;
        };
        let t = self.terms[k - 1];
        self.leading_options(value, k)
            .map(|d| self.ways[k - 1][(value - d * t) as usize])
            .fold(0u64, |a, x| a.saturating_add(x))
    }

    /// The lexicographically smallest representation among the longest.
    pub fn maximal(&self, value: u64) -> Result<Representation> {
        if value == 0 {
            return Ok(Representation {
                digits: vec![0],
                value,
            });
        }
        let k = self.max_length(value).ok_or(Error::Unrepresentable {
            value,
            bound: self.b,
        })?;
        let lead = self
            .leading_options(value, k)
            .next()
            .expect("max_length found one");
        let mut digits = vec![lead];
        let mut rest = value - lead * self.terms[k - 1];
        for j in (0..k - 1).rev() {
            let t = self.terms[j];
            let d = (0..=self.b)
                .take_while(|d| d * t <= rest)
                .find(|d| self.ways[j][(rest - d * t) as usize] > 0)
                .expect("remainder is reachable");
            digits.push(d);
            rest -= d * t;
        }
        debug_assert_eq!(rest, 0);
        Ok(Representation { digits, value })
    }
}

/// Longest representation of `value` with digits in `0..=b`, ties broken
/// by the lexicographically smallest digit string.
pub fn represent_maximal(value: u64, basis: &BasisSequence, b: u64) -> Result<Representation> {
    MaximalTable::new(basis, b, value)?.maximal(value)
}

/// Maximal representations of length at most `max_len`, sorted by length
/// then lexicographically.
pub fn enumerate_language(basis: &BasisSequence, b: u64, max_len: usize) -> Result<Vec<Vec<u64>>> {
    if max_len == 0 {
        return Ok(Vec::new());
    }
    let basis = basis.clone().extended(max_len)?;
    let reach: BigInt = basis.terms[..max_len].iter().sum::<BigInt>() * b;
    let bound = reach
        .to_u64()
        .filter(|&v| v <= LANGUAGE_VALUE_CAP)
        .ok_or_else(|| Error::CapExceeded {
            needed: reach.to_string(),
            cap: LANGUAGE_VALUE_CAP,
        })?;
    let table = MaximalTable::new(&basis, b, bound)?;
    let mut out: Vec<Vec<u64>> = (0..=bound)
        .filter_map(|v| table.maximal(v).ok())
        .map(|r| r.digits)
        .filter(|d| d.len() <= max_len)
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.dedup();
    Ok(out)
}

/// Exhaustive search for all representations of `value` with exactly
/// `len` digits (leading digit nonzero). Independent of `MaximalTable`.
pub fn brute_force_representations(value: u64, terms: &[u64], b: u64, len: usize) -> Vec<Vec<u64>> {
    fn go(
        pos: usize,
        rest: u64,
        terms: &[u64],
        suffix_max: &[u64],
        b: u64,
        cur: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if pos == usize::MAX {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if suffix_max[pos] < rest {
            return;
        }
        let lo = if cur.is_empty() { 1 } else { 0 };
        for d in lo..=b {
            let Some(used) = d.checked_mul(terms[pos]) else {
                break;
            };
            if used > rest {
                break;
            }
            cur.push(d);
            go(
                pos.wrapping_sub(1),
                rest - used,
                terms,
                suffix_max,
                b,
                cur,
                out,
            );
            cur.pop();
        }
    }
    if value == 0 {
        return if len == 1 { vec![vec![0]] } else { Vec::new() };
    }
    if len == 0 || len > terms.len() {
        return Vec::new();
    }
    // suffix_max[i] = b * (t_0 + ... + t_i)
    let mut suffix_max = Vec::with_capacity(len);
    let mut acc = 0u64;
    for &t in &terms[..len] {
        acc = acc.saturating_add(b.saturating_mul(t));
        suffix_max.push(acc);
    }
    let mut out = Vec::new();
    go(
        len - 1,
        value,
        terms,
        &suffix_max,
        b,
        &mut Vec::new(),
        &mut out,
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schlafli::validate;
    use proptest::prelude::*;

    fn pentagrid() -> BasisSequence {
        basis(validate(5, 4).unwrap(), Scheme::EvenQ, 6).unwrap()
    }

    fn rep(d: &[u64]) -> Vec<u64> {
        d.to_vec()
    }

    #[test]
    fn bases() {
        let b = pentagrid();
        assert_eq!(b.terms, [1, 3, 8, 21, 55, 144].map(BigInt::from).to_vec());
        let b = basis(validate(5, 7).unwrap(), Scheme::OddV1, 5).unwrap();
        assert_eq!(b.terms, [1, 6, 34, 194, 1106].map(BigInt::from).to_vec());
        let b = basis(validate(7, 4).unwrap(), Scheme::EvenQ, 1).unwrap();
        assert_eq!(b.terms, vec![BigInt::one()]);
    }

    #[test]
    fn non_monotone_is_reported() {
        let p = SplittingPolynomial::from_i64(&[1, -1, 0]);
        let err = BasisSequence::from_initial(vec![BigInt::one(), BigInt::one()], &p, "test")
            .unwrap_err();
        assert_eq!(err, Error::NonMonotoneBasis { index: 1 });
    }

    #[test]
    fn greedy_examples() {
        let b = pentagrid();
        assert_eq!(represent_greedy(0, &b, 2).unwrap().digits, rep(&[0]));
        assert_eq!(represent_greedy(4, &b, 2).unwrap().digits, rep(&[1, 1]));
        assert_eq!(represent_greedy(7, &b, 2).unwrap().digits, rep(&[2, 1]));
    }

    #[test]
    fn maximal_examples() {
        let b = pentagrid();
        assert_eq!(represent_maximal(0, &b, 2).unwrap().digits, rep(&[0]));
        assert_eq!(represent_maximal(3, &b, 2).unwrap().digits, rep(&[1, 0]));
        assert_eq!(represent_maximal(2, &b, 2).unwrap().digits, rep(&[2]));
        assert_eq!(represent_maximal(7, &b, 2).unwrap().digits, rep(&[2, 1]));
    }

    #[test]
    fn decode_examples() {
        let b = pentagrid();
        let r = |d: &[u64]| Representation {
            digits: d.to_vec(),
            value: 0,
        };
        assert_eq!(decode(&r(&[1, 0]), &b, 2).unwrap(), BigInt::from(3));
        assert_eq!(decode(&r(&[0]), &b, 2).unwrap(), BigInt::from(0));
        assert_eq!(decode(&r(&[2, 1]), &b, 2).unwrap(), BigInt::from(7));
        assert_eq!(
            decode(&r(&[3]), &b, 2).unwrap_err(),
            Error::DigitOutOfRange { digit: 3, bound: 2 }
        );
    }

    #[test]
    fn language_samples() {
        let b = pentagrid();
        let lang = enumerate_language(&b, 2, 2).unwrap();
        assert!(lang.contains(&rep(&[1, 0])));
        assert!(lang.contains(&rep(&[2, 1])));
        assert_eq!(
            enumerate_language(&b, 2, 1).unwrap(),
            vec![rep(&[0]), rep(&[1]), rep(&[2])]
        );
        let sorted = lang
            .windows(2)
            .all(|w| (w[0].len(), &w[0]) < (w[1].len(), &w[1]));
        assert!(sorted);
    }

    #[test]
    fn non_regular_basis_has_gaps() {
        // {4,5} under the first odd scheme: basis 1, 3, 6, 11, ... with b = 1
        let b = basis(validate(4, 5).unwrap(), Scheme::OddV1, 5).unwrap();
        assert_eq!(b.terms, [1, 3, 6, 11, 19].map(BigInt::from).to_vec());
        assert_eq!(
            represent_maximal(2, &b, 1).unwrap_err(),
            Error::Unrepresentable { value: 2, bound: 1 }
        );
        let lang = enumerate_language(&b, 1, 4).unwrap();
        for digits in &lang {
            assert!(digits.iter().all(|&d| d <= 1));
        }
    }

    #[test]
    fn brute_force_agrees_on_small_values() {
        let b = pentagrid().extended(10).unwrap();
        let terms = b.terms_up_to(10_000);
        let table = MaximalTable::new(&b, 2, 300).unwrap();
        for v in 0..=300 {
            let m = table.maximal(v).unwrap();
            let found = brute_force_representations(v, &terms, 2, m.digits.len());
            assert!(found.contains(&m.digits), "{v}");
            assert_eq!(found.len() as u64, table.maximal_count(v));
            assert!(brute_force_representations(v, &terms, 2, m.digits.len() + 1).is_empty());
        }
    }

    proptest! {
        #[test]
        fn round_trip(v in 0u64..20_000) {
            let b = pentagrid();
            let m = represent_maximal(v, &b, 2).unwrap();
            prop_assert_eq!(decode(&m, &b, 2).unwrap(), BigInt::from(v));
            let g = represent_greedy(v, &b, 2).unwrap();
            prop_assert_eq!(decode(&g, &b, 2).unwrap(), BigInt::from(v));
            prop_assert!(g.digits.len() <= m.digits.len());
            prop_assert!(m.digits[0] != 0 || m.digits == vec![0]);
        }
    }
}
