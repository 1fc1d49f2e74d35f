//! Sorting under partial information.
//!
//! Extract a longest path of the DAG, then repeatedly take a source of the
//! remaining graph and finger-search it into the path, starting from its
//! latest in-neighbour on the path. The loop only compares with the oracle
//! inside finger searches and in the head check for vertices without
//! in-neighbours.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finger_tree::FingerTree;
use crate::graph::{compute_levels, extract_longest_path, residual_with_sources, Dag};
use crate::oracle::LinearOracle;
use crate::order_index::OrderIndex;

/// Which residual source the loop removes next. Any choice is correct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SourcePolicy {
    #[default]
    Fifo,
    Random(u64),
}

/// One iteration of the insertion loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertRecord {
    /// The inserted vertex.
    pub x: usize,
    /// Finger the search started from; `None` is the dummy head, which only
    /// stays the finger when the head check placed `x` first.
    pub p: Option<usize>,
    /// Predecessor `x` was inserted after; `None` is the dummy head.
    pub q: Option<usize>,
    /// Vertices on the path from `p` to `q` inclusive, at insertion time.
    pub d: u64,
    pub search_queries: u64,
    pub head_query_used: bool,
}

impl InsertRecord {
    pub fn queries(&self) -> u64 {
        self.search_queries + u64::from(self.head_query_used)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Totals {
    pub queries: u64,
    pub compare_max: u64,
    pub rebalance_steps: u64,
    pub index_work: u64,
}

/// Complete instrumentation of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunTrace {
    pub n: usize,
    pub m: usize,
    /// Number of inserted vertices, `n - path.len()`.
    pub k: usize,
    /// The extracted longest path.
    pub path: Vec<usize>,
    pub inserts: Vec<InsertRecord>,
    pub totals: Totals,
    /// 1-based position of every vertex in the output.
    pub pi_star: Vec<usize>,
}

impl RunTrace {
    pub fn sum_log2_d(&self) -> f64 {
        self.inserts.iter().map(|r| (r.d as f64).log2()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct SortOutput {
    pub order: Vec<usize>,
    pub trace: RunTrace,
}

/// Sorts with the FIFO source policy.
pub fn sort(g: &Dag, oracle: &mut LinearOracle) -> Result<SortOutput> {
    sort_under_partial_information(g, oracle, SourcePolicy::Fifo)
}

pub fn sort_under_partial_information(
    g: &Dag,
    oracle: &mut LinearOracle,
    policy: SourcePolicy,
) -> Result<SortOutput> {
    oracle.validate_extension(g)?;
    let n = g.n();
    let start_queries = oracle.query_count();
    if n == 0 {
        return Ok(SortOutput {
            order: Vec::new(),
            trace: RunTrace {
                n,
                m: 0,
                k: 0,
                path: Vec::new(),
                inserts: Vec::new(),
                totals: Totals::default(),
                pi_star: Vec::new(),
            },
        });
    }

    let levels = compute_levels(g);
    let path = extract_longest_path(g, &levels);
    let sentinel = n;
    let mut seq = Vec::with_capacity(path.len() + 1);
    seq.push(sentinel);
    seq.extend_from_slice(&path);
    let mut tree = FingerTree::from_path(&seq, n + 1)?;
    let mut index = OrderIndex::from_path(&seq, n + 1)?;

    let mut residual = residual_with_sources(g, &path);
    let mut sources = SourceSet::new(policy, &residual.sources);
    let mut head = path[0];
    let mut inserts = Vec::with_capacity(n - path.len());

    while let Some(x) = sources.pop() {
        let mut finger = sentinel;
        for &u in g.in_neighbors(x) {
            if residual.in_residual[u] {
                return Err(Error::InternalInvariantViolation(format!(
                    "vertex {x} popped before its in-neighbour {u} was placed"
                )));
            }
            finger = index.compare_max(finger, u)?;
        }

        residual.in_residual[x] = false;
        for &y in g.out_neighbors(x) {
            if residual.in_residual[y] {
                residual.indegree[y] -= 1;
                if residual.indegree[y] == 0 {
                    sources.push(y);
                }
            }
        }

        let mut record = InsertRecord {
            x,
            p: None,
            q: None,
            d: 1,
            search_queries: 0,
            head_query_used: false,
        };
        if finger == sentinel {
            record.head_query_used = true;
            if oracle.precedes(x, head)? {
                finger = sentinel;
            } else {
                finger = head;
            }
        }
        let pred = if finger == sentinel {
            sentinel
        } else {
            let found = tree.finger_search(finger, x, oracle)?;
            record.p = Some(finger);
            record.q = Some(found.target);
            record.search_queries = found.queries;
            found.target
        };

        tree.finger_insert(pred, x)?;
        index.insert_after(pred, x)?;
        if pred == sentinel {
            head = x;
        }
        inserts.push(record);
    }

    let mut order = tree.to_vec();
    if order.first() != Some(&sentinel) || order.len() != n + 1 {
        return Err(Error::InternalInvariantViolation(format!(
            "finished with {} of {} vertices placed",
            order.len().saturating_sub(1),
            n
        )));
    }
    order.remove(0);

    let mut pi_star = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pi_star[v] = i + 1;
    }
    fill_distances(&path, &mut inserts, &pi_star);

    let totals = Totals {
        queries: oracle.query_count() - start_queries,
        compare_max: index.compare_calls(),
        rebalance_steps: tree.rebalance_steps(),
        index_work: index.work(),
    };
    let accounted: u64 = inserts.iter().map(InsertRecord::queries).sum();
    if accounted != totals.queries {
        return Err(Error::InternalInvariantViolation(format!(
            "{} oracle queries made, {accounted} attributed to inserts",
            totals.queries
        )));
    }

    Ok(SortOutput {
        order,
        trace: RunTrace {
            n,
            m: g.m(),
            k: inserts.len(),
            path,
            inserts,
            totals,
            pi_star,
        },
    })
}

enum SourceSet {
    Fifo(VecDeque<usize>),
    Random(Vec<usize>, Box<ChaCha8Rng>),
}

impl SourceSet {
    fn new(policy: SourcePolicy, initial: &[usize]) -> Self {
        match policy {
            SourcePolicy::Fifo => SourceSet::Fifo(initial.iter().copied().collect()),
            SourcePolicy::Random(seed) => {
                SourceSet::Random(initial.to_vec(), Box::new(ChaCha8Rng::seed_from_u64(seed)))
            }
        }
    }

    fn push(&mut self, v: usize) {
        match self {
            SourceSet::Fifo(q) => q.push_back(v),
            SourceSet::Random(s, _) => s.push(v),
        }
    }

    fn pop(&mut self) -> Option<usize> {
        match self {
            SourceSet::Fifo(q) => q.pop_front(),
            SourceSet::Random(s, rng) if !s.is_empty() => {
                let i = rng.gen_range(0..s.len());
                Some(s.swap_remove(i))
            }
            SourceSet::Random(..) => None,
        }
    }
}

/// Recovers each `d_i` offline: the vertices between `p_i` and `q_i` at
/// insertion time are exactly those with final positions in
/// `[pi*(p_i), pi*(q_i)]` that were already placed, which a Fenwick tree
/// over final positions counts in O(log n).
fn fill_distances(path: &[usize], inserts: &mut [InsertRecord], pi_star: &[usize]) {
    let mut placed = Fenwick::new(pi_star.len());
    for &v in path {
        placed.add(pi_star[v]);
    }
    for rec in inserts.iter_mut() {
        if let (Some(p), Some(q)) = (rec.p, rec.q) {
            rec.d = placed.range(pi_star[p], pi_star[q]);
        }
        placed.add(pi_star[rec.x]);
    }
}

struct Fenwick(Vec<u64>);

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick(vec![0; n + 1])
    }

    fn add(&mut self, mut i: usize) {
        while i < self.0.len() {
            self.0[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, mut i: usize) -> u64 {
        let mut s = 0;
        while i > 0 {
            s += self.0[i];
            i -= i & i.wrapping_neg();
        }
        s
    }

    fn range(&self, lo: usize, hi: usize) -> u64 {
        self.prefix(hi) - self.prefix(lo - 1)
    }
}

/// True iff `output` is the oracle's order and respects every edge of `g`.
pub fn replay_verify(g: &Dag, oracle: &LinearOracle, output: &[usize]) -> bool {
    let n = g.n();
    if output.len() != n || oracle.n() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in output.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    output.iter().enumerate().all(|(i, &v)| oracle.rank(v) == i)
        && g.edges().all(|(u, v)| pos[u] < pos[v])
}
