//! DAG storage, level computation and longest-path extraction.
//!
//! Vertices are the indices `0..n`. Adjacency lists are kept sorted in both
//! directions, which makes "smallest index first" tie-breaking free.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A validated directed acyclic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    m: usize,
}

impl Dag {
    /// Builds a DAG over `0..n` from an edge list.
    ///
    /// Duplicate edges are merged. Self-loops, out-of-range endpoints and
    /// cycles are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out_adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            out_adj[u].push(v);
        }
        let mut in_adj = vec![Vec::new(); n];
        let mut m = 0;
        for (u, outs) in out_adj.iter_mut().enumerate() {
            outs.sort_unstable();
            outs.dedup();
            m += outs.len();
            for &v in outs.iter() {
                in_adj[v].push(u);
            }
        }
        // in-lists come out sorted because u is visited in ascending order
        let dag = Dag { out_adj, in_adj, m };
        if dag.topological_order().len() != n {
            return Err(Error::CycleDetected);
        }
        Ok(dag)
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].binary_search(&v).is_ok()
    }

    /// Kahn's algorithm. Returns fewer than `n` vertices iff the graph has a
    /// cycle (only possible before validation finishes).
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.n();
        let mut indeg: Vec<usize> = self.in_adj.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in &self.out_adj[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    queue.push_back(v);
                }
            }
        }
        order
    }

    /// Parses the edge-list text format: a header line `n m`, then `m` lines
    /// `u v`. Lines starting with `#` and blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 0,
            msg: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l)?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header announces {m} edges, found {}", edges.len()),
            });
        }
        Dag::new(n, &edges)
    }

    /// Renders the graph in the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or(Error::Parse {
            line,
            msg: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(Error::Parse {
            line,
            msg: "trailing tokens".into(),
        });
    }
    Ok(pair)
}

/// Per-vertex longest-path lengths and the level histogram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelData {
    /// Number of vertices on a longest directed path starting at each vertex
    /// (at least 1).
    pub ell: Vec<usize>,
    /// `level_counts[i]` is the number of vertices with `ell == i`; index 0
    /// is unused and always zero.
    pub level_counts: Vec<usize>,
}

impl LevelData {
    pub fn max_level(&self) -> usize {
        self.level_counts.len() - 1
    }
}

pub fn compute_levels(g: &Dag) -> LevelData {
    let mut ell = vec![1usize; g.n()];
    for &u in g.topological_order().iter().rev() {
        if let Some(best) = g.out_neighbors(u).iter().map(|&v| ell[v]).max() {
            ell[u] = best + 1;
        }
    }
    let max = ell.iter().copied().max().unwrap_or(0);
    let mut level_counts = vec![0; max + 1];
    for &l in &ell {
        level_counts[l] += 1;
    }
    LevelData { ell, level_counts }
}

/// Extracts a longest directed path, smallest index first on ties.
pub fn extract_longest_path(g: &Dag, levels: &LevelData) -> Vec<usize> {
    let max = levels.max_level();
    let Some(mut cur) = (0..g.n()).find(|&v| levels.ell[v] == max) else {
        return Vec::new();
    };
    let mut path = Vec::with_capacity(max);
    path.push(cur);
    while levels.ell[cur] > 1 {
        // out-lists are sorted, so the first hit is the smallest index
        cur = *g
            .out_neighbors(cur)
            .iter()
            .find(|&&v| levels.ell[v] + 1 == levels.ell[cur])
            .expect("ell > 1 implies a successor one level down");
        path.push(cur);
    }
    path
}

/// The residual graph `H = G - path` as seen by the insertion loop.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub in_residual: Vec<bool>,
    /// In-degree counting only edges with both endpoints in `H`; zero for
    /// path vertices.
    pub indegree: Vec<usize>,
    /// Sources of `H` in ascending index order.
    pub sources: Vec<usize>,
}

pub fn residual_with_sources(g: &Dag, path: &[usize]) -> Residual {
    let n = g.n();
    let mut in_residual = vec![true; n];
    for &v in path {
        in_residual[v] = false;
    }
    let mut indegree = vec![0; n];
    for (u, v) in g.edges() {
        if in_residual[u] && in_residual[v] {
            indegree[v] += 1;
        }
    }
    let sources = (0..n)
        .filter(|&v| in_residual[v] && indegree[v] == 0)
        .collect();
    Residual {
        in_residual,
        indegree,
        sources,
    }
}
