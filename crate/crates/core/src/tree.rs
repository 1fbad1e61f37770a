//! Spanning trees generated by applying a splitting as a substitution.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bigjson;
use crate::error::{Error, Result};
use crate::polynomial::SplittingPolynomial;
use crate::schlafli::{splitting_matrix, RegionKind, SplittingSystem};

pub const DEFAULT_NODE_CAP: u64 = 10_000_000;
pub const NODE_CAP_ENV: &str = "HYPQ_NODE_CAP";

/// Node cap from the environment, falling back to the default.
pub fn node_cap_from_env() -> Result<u64> {
    match std::env::var(NODE_CAP_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("{NODE_CAP_ENV}={v} is not a count"))),
        Err(_) => Ok(DEFAULT_NODE_CAP),
    }
}

/// Children of one region in tree order: fans left to right, then `S1`.
pub fn expand(kind: RegionKind, system: &SplittingSystem) -> Result<Vec<RegionKind>> {
    let rule = system.rule(kind)?;
    let mut out = Vec::new();
    for fan in &rule.fans {
        let n = fan.size.to_usize().ok_or_else(|| Error::CapExceeded {
            needed: fan.size.to_string(),
            cap: usize::MAX as u64,
        })?;
        out.extend(std::iter::repeat(fan.kind).take(n));
    }
    for c in rule.children.iter().filter(|c| c.kind == RegionKind::S1) {
        let n = c.multiplicity.to_usize().unwrap_or(0);
        out.extend(std::iter::repeat(RegionKind::S1).take(n));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub id: u64,
    pub kind: RegionKind,
    pub level: u32,
    pub parent: Option<u64>,
    pub children: Vec<u64>,
}

/// Breadth-first numbered tree. Node `id` lives at index `id - 1`; the
/// children of a node are the consecutive ids starting at its first child.
#[derive(Debug, Clone)]
pub struct SpanningTree {
    kinds: Vec<u8>,
    parent: Vec<u32>,
    first_child: Vec<u32>,
    level_starts: Vec<usize>,
}

const KINDS: [RegionKind; 3] = RegionKind::ORDER;

fn kind_code(k: RegionKind) -> u8 {
    KINDS.iter().position(|x| *x == k).unwrap() as u8
}

impl SpanningTree {
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn depth(&self) -> u32 {
        (self.level_starts.len() - 2) as u32
    }

    pub fn kind(&self, id: u64) -> RegionKind {
        KINDS[self.kinds[(id - 1) as usize] as usize]
    }

    pub fn level_of(&self, id: u64) -> u32 {
        let i = (id - 1) as usize;
        (self.level_starts.partition_point(|&s| s <= i) - 1) as u32
    }

    pub fn parent(&self, id: u64) -> Option<u64> {
        let p = self.parent[(id - 1) as usize];
        (p != 0).then_some(u64::from(p))
    }

    pub fn children(&self, id: u64) -> std::ops::Range<u64> {
        let i = (id - 1) as usize;
        let start = u64::from(self.first_child[i]);
        let end = u64::from(self.first_child[i + 1]);
        start..end
    }

    pub fn node(&self, id: u64) -> TreeNode {
        TreeNode {
            id,
            kind: self.kind(id),
            level: self.level_of(id),
            parent: self.parent(id),
            children: self.children(id).collect(),
        }
    }

    /// Ids on a level, left to right.
    pub fn level(&self, n: u32) -> std::ops::Range<u64> {
        let n = n as usize;
        (self.level_starts[n] as u64 + 1)..(self.level_starts[n + 1] as u64 + 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = TreeNode> + '_ {
        (1..=self.len() as u64).map(|id| self.node(id))
    }

    /// Node counts per level, split by region kind in matrix order.
    pub fn level_vectors(&self, regions: &[RegionKind]) -> Vec<Vec<BigInt>> {
        (0..=self.depth())
            .map(|n| {
                let mut v = vec![0u64; regions.len()];
                for id in self.level(n) {
                    let k = self.kind(id);
                    if let Some(j) = regions.iter().position(|r| *r == k) {
                        v[j] += 1;
                    }
                }
                v.into_iter().map(BigInt::from).collect()
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph spanning_tree {\n");
        for id in 1..=self.len() as u64 {
            let _ = writeln!(
                out,
                "  {id} [label=\"{}/{}\"];",
                self.kind(id),
                self.level_of(id)
            );
        }
        for id in 1..=self.len() as u64 {
            for c in self.children(id) {
                let _ = writeln!(out, "  {id} -> {c};");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Node totals per level predicted by the matrix: `seed * M^n`.
pub fn predicted_level_vectors(system: &SplittingSystem, depth: u32) -> Vec<Vec<BigInt>> {
    let m = splitting_matrix(system);
    let mut v: Vec<BigInt> = m
        .labels
        .iter()
        .map(|k| {
            if *k == system.seed {
                BigInt::from(1)
            } else {
                BigInt::zero()
            }
        })
        .collect();
    let mut out = vec![v.clone()];
    for _ in 0..depth {
        v = m.left_mul(&v);
        out.push(v.clone());
    }
    out
}

pub fn predicted_level_counts(system: &SplittingSystem, depth: u32) -> LevelCounts {
    LevelCounts {
        counts: predicted_level_vectors(system, depth)
            .into_iter()
            .map(|v| v.into_iter().sum())
            .collect(),
    }
}

/// Generates the tree of the given depth rooted at the seed region.
pub fn generate(system: &SplittingSystem, depth: u32, cap: u64) -> Result<SpanningTree> {
    let total: BigInt = predicted_level_counts(system, depth).counts.iter().sum();
    // ids must fit the u32 links as well as the cap
    let limit = cap.min(u64::from(u32::MAX) - 1);
    if total > BigInt::from(limit) {
        return Err(Error::CapExceeded {
            needed: total.to_string(),
            cap,
        });
    }
    let total = total.to_usize().expect("bounded by the cap");

    let expansions: Vec<Vec<u8>> = KINDS
        .iter()
        .map(|k| match system.rule(*k) {
            Ok(_) => expand(*k, system).map(|v| v.into_iter().map(kind_code).collect()),
            Err(_) => Ok(Vec::new()),
        })
        .collect::<Result<_>>()?;

    let mut kinds = Vec::with_capacity(total);
    let mut parent = Vec::with_capacity(total);
    let mut first_child = Vec::with_capacity(total + 1);
    let mut level_starts = vec![0, 1];
    kinds.push(kind_code(system.seed));
    parent.push(0u32);
    for _ in 0..depth {
        let (start, end) = (
            level_starts[level_starts.len() - 2],
            level_starts[level_starts.len() - 1],
        );
        for i in start..end {
            first_child.push(kinds.len() as u32 + 1);
            let id = i as u32 + 1;
            for &c in &expansions[kinds[i] as usize] {
                kinds.push(c);
                parent.push(id);
            }
        }
        level_starts.push(kinds.len());
    }
    // leaves, then the sentinel
    while first_child.len() <= kinds.len() {
        first_child.push(kinds.len() as u32 + 1);
    }
    Ok(SpanningTree {
        kinds,
        parent,
        first_child,
        level_starts,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    #[serde(with = "bigjson::vec")]
    pub counts: Vec<BigInt>,
}

impl LevelCounts {
    pub fn from_u64(v: &[u64]) -> Self {
        Self {
            counts: v.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn to_u64(&self) -> Option<Vec<u64>> {
        self.counts.iter().map(|c| c.to_u64()).collect()
    }
}

impl std::fmt::Display for LevelCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

pub fn level_counts(tree: &SpanningTree) -> LevelCounts {
    LevelCounts {
        counts: (0..=tree.depth())
            .map(|n| {
                let r = tree.level(n);
                BigInt::from(r.end - r.start)
            })
            .collect(),
    }
}

/// Checks `u_{n+d} = sum c_i u_{n+i}` on every window.
pub fn recurrence_check(counts: &LevelCounts, poly: &SplittingPolynomial) -> Result<bool> {
    let d = poly.degree();
    if counts.counts.len() <= d {
        return Err(Error::TooFewLevels {
            have: counts.counts.len(),
            need: d,
        });
    }
    let c = poly.recurrence_coefficients();
    Ok(counts.counts.windows(d + 1).all(|w| {
        let rhs: BigInt = (0..d).map(|i| &c[i] * &w[i]).sum();
        rhs == w[d]
    }))
}
