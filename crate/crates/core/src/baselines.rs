//! Structure-oblivious comparison sorts used as query-count reference points.

use crate::error::Result;
use crate::graph::Dag;
use crate::oracle::LinearOracle;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineOutcome {
    pub order: Vec<usize>,
    pub queries: u64,
}

/// Kahn's topological sort with the current sources in a binary min-heap
/// ordered by oracle comparisons.
pub fn heap_toposort(g: &Dag, oracle: &mut LinearOracle) -> Result<BaselineOutcome> {
    let before = oracle.query_count();
    let n = g.n();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_neighbors(v).len()).collect();
    let mut heap = OracleHeap::default();
    for v in (0..n).filter(|&v| indeg[v] == 0) {
        heap.push(v, oracle)?;
    }
    let mut order = Vec::with_capacity(n);
    while let Some(u) = heap.pop(oracle)? {
        order.push(u);
        for &v in g.out_neighbors(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                heap.push(v, oracle)?;
            }
        }
    }
    Ok(BaselineOutcome {
        order,
        queries: oracle.query_count() - before,
    })
}

#[derive(Default)]
struct OracleHeap {
    items: Vec<usize>,
}

impl OracleHeap {
    fn push(&mut self, v: usize, oracle: &mut LinearOracle) -> Result<()> {
        self.items.push(v);
        let mut i = self.items.len() - 1;
        while i > 0 {
            let parent = (i - 1) / 2;
            if !oracle.precedes(self.items[i], self.items[parent])? {
                break;
            }
            self.items.swap(i, parent);
            i = parent;
        }
        Ok(())
    }

    fn pop(&mut self, oracle: &mut LinearOracle) -> Result<Option<usize>> {
        if self.items.is_empty() {
            return Ok(None);
        }
        let top = self.items.swap_remove(0);
        let len = self.items.len();
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            if l >= len {
                break;
            }
            let child = if r < len && oracle.precedes(self.items[r], self.items[l])? {
                r
            } else {
                l
            };
            if !oracle.precedes(self.items[child], self.items[i])? {
                break;
            }
            self.items.swap(i, child);
            i = child;
        }
        Ok(Some(top))
    }
}

/// Binary insertion sort over `elements`, ignoring any partial order.
pub fn binary_insertion_sort(
    elements: &[usize],
    oracle: &mut LinearOracle,
) -> Result<BaselineOutcome> {
    let before = oracle.query_count();
    let mut sorted: Vec<usize> = Vec::with_capacity(elements.len());
    for &x in elements {
        // first position whose element comes after x
        let (mut lo, mut hi) = (0, sorted.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if oracle.precedes(x, sorted[mid])? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        sorted.insert(lo, x);
    }
    Ok(BaselineOutcome {
        order: sorted,
        queries: oracle.query_count() - before,
    })
}
