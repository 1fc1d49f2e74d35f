//! Seeded DAG generators for tests and benchmarks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Dag;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphKind {
    Gnp,
    Layered,
    PathPlusIsolated,
    ChainOfAntichains,
}

impl GraphKind {
    pub const ALL: [GraphKind; 4] = [
        GraphKind::Gnp,
        GraphKind::Layered,
        GraphKind::PathPlusIsolated,
        GraphKind::ChainOfAntichains,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Gnp => "gnp",
            GraphKind::Layered => "layered",
            GraphKind::PathPlusIsolated => "path_plus_isolated",
            GraphKind::ChainOfAntichains => "chain_of_antichains",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GraphKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown graph kind {s:?}")))
    }
}

fn check_p(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::BadParams(format!("edge probability {p} not in [0, 1]")))
    }
}

fn check_widths(widths: &[usize]) -> Result<()> {
    if widths.is_empty() || widths.contains(&0) {
        return Err(Error::BadParams("widths must be non-empty and positive".into()));
    }
    Ok(())
}

/// Erdős–Rényi graph with every edge oriented from the lower to the higher
/// index.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Dag> {
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Dag::new(n, &edges)
}

/// Consecutive layers of the given widths; each pair of vertices in adjacent
/// layers is joined with probability `p`.
pub fn layered(widths: &[usize], p: f64, seed: u64) -> Result<Dag> {
    check_widths(widths)?;
    check_p(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut start = 0;
    for w in widths.windows(2) {
        let next = start + w[0];
        for u in start..next {
            for v in next..next + w[1] {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        start = next;
    }
    Dag::new(widths.iter().sum(), &edges)
}

/// A chain `0 -> 1 -> ... -> n-t-1` followed by `t` isolated vertices.
pub fn path_plus_isolated(n: usize, t: usize) -> Result<Dag> {
    if t > n {
        return Err(Error::BadParams(format!("t = {t} exceeds n = {n}")));
    }
    let edges: Vec<_> = (1..n - t).map(|i| (i - 1, i)).collect();
    Dag::new(n, &edges)
}

/// Antichains of the given widths with every vertex of one layer joined to
/// every vertex of the next.
pub fn chain_of_antichains(widths: &[usize]) -> Result<Dag> {
    check_widths(widths)?;
    let mut edges = Vec::new();
    let mut start = 0;
    for w in widths.windows(2) {
        let next = start + w[0];
        for u in start..next {
            for v in next..next + w[1] {
                edges.push((u, v));
            }
        }
        start = next;
    }
    Dag::new(widths.iter().sum(), &edges)
}

/// Random layer widths summing to `n`, each at least one.
pub fn random_widths(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut widths = Vec::new();
    let mut left = n;
    while left > 0 {
        let w = rng.gen_range(1..=left.min(4));
        widths.push(w);
        left -= w;
    }
    widths
}
