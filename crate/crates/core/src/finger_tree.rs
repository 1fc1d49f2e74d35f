//! Level-linked (2,4)-tree over a sequence, with rightward finger search.
//!
//! Leaves hold the elements left to right; every node is linked to its
//! neighbours on the same level and remembers the element of its leftmost
//! leaf (`min`). Inserting after an existing leaf never changes the `min` of
//! any existing node, so `min` is maintained in O(1) per split.
//!
//! Search from finger `p` for key `x` (with `p` before `x`) climbs while the
//! right neighbour of the current node still starts before `x`, then descends
//! with a binary search over at most three candidate children per level.
//! After climbing `h` levels at least `2^(h-1)` leaves lie strictly between
//! `p` and the answer, so a search over distance `d` uses at most
//! `3 * floor(log2(d - 1)) + 4` comparisons (and one when `d = 1`).

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::oracle::LinearOracle;

const NIL: u32 = u32::MAX;

/// Comparison bound constants: a search over distance `d` uses at most
/// `SEARCH_A * ceil(log2(d + 1)) + SEARCH_B` oracle queries.
pub const SEARCH_A: u64 = 4;
pub const SEARCH_B: u64 = 4;

/// Splits (including root growth) never exceed initial size plus insertions.
pub const REBALANCE_PER_ELEMENT: u64 = 1;

pub fn search_bound(d: u64) -> u64 {
    SEARCH_A * ceil_log2(d + 1) + SEARCH_B
}

pub fn ceil_log2(x: u64) -> u64 {
    if x <= 1 {
        0
    } else {
        64 - u64::from((x - 1).leading_zeros())
    }
}

#[derive(Debug, Clone)]
struct Node {
    parent: u32,
    left: u32,
    right: u32,
    /// Element stored in the leftmost leaf of the subtree.
    min: u32,
    height: u32,
    children: ArrayVec<u32, 5>,
}

/// Result of a finger search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Last element before the key.
    pub target: usize,
    /// Oracle queries spent by this search.
    pub queries: u64,
}

#[derive(Debug, Clone)]
pub struct FingerTree {
    nodes: Vec<Node>,
    leaf_of: Vec<u32>,
    root: u32,
    leaves: usize,
    initial: usize,
    splits: u64,
}

impl FingerTree {
    /// Balanced tree over `path` in O(|path|). Internal nodes get 2 or 3
    /// children so that no node starts out full.
    pub fn from_path(path: &[usize], capacity: usize) -> Result<Self> {
        if path.is_empty() {
            return Err(Error::InternalInvariantViolation(
                "finger tree needs a non-empty path".into(),
            ));
        }
        let mut t = FingerTree {
            nodes: Vec::with_capacity(2 * capacity),
            leaf_of: vec![NIL; capacity],
            root: NIL,
            leaves: 0,
            initial: path.len(),
            splits: 0,
        };
        let mut level: Vec<u32> = Vec::with_capacity(path.len());
        for &e in path {
            if e >= capacity {
                return Err(Error::ElementAbsent(e));
            }
            if t.leaf_of[e] != NIL {
                return Err(Error::DuplicateElement(e));
            }
            let id = t.push_node(e as u32, 0);
            t.leaf_of[e] = id;
            level.push(id);
        }
        t.leaves = path.len();
        t.link_level(&level);
        let mut height = 0;
        while level.len() > 1 {
            height += 1;
            let mut parents = Vec::with_capacity(level.len() / 2);
            let mut rest = &level[..];
            while !rest.is_empty() {
                let take = match rest.len() {
                    2 | 4 => 2,
                    _ => 3,
                };
                let (chunk, tail) = rest.split_at(take);
                let pid = t.push_node(t.nodes[chunk[0] as usize].min, height);
                for &c in chunk {
                    t.nodes[c as usize].parent = pid;
                    t.nodes[pid as usize].children.push(c);
                }
                parents.push(pid);
                rest = tail;
            }
            t.link_level(&parents);
            level = parents;
        }
        t.root = level[0];
        Ok(t)
    }

    fn push_node(&mut self, min: u32, height: u32) -> u32 {
        let id = self.nodes.len() as u32;
        self.nodes.push(Node {
            parent: NIL,
            left: NIL,
            right: NIL,
            min,
            height,
            children: ArrayVec::new(),
        });
        id
    }

    fn link_level(&mut self, level: &[u32]) {
        for w in level.windows(2) {
            self.nodes[w[0] as usize].right = w[1];
            self.nodes[w[1] as usize].left = w[0];
        }
    }

    pub fn len(&self) -> usize {
        self.leaves
    }

    pub fn is_empty(&self) -> bool {
        self.leaves == 0
    }

    pub fn height(&self) -> u32 {
        self.nodes[self.root as usize].height
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.leaf_of.len() && self.leaf_of[e] != NIL
    }

    /// Node splits performed so far, root growth included.
    pub fn rebalance_steps(&self) -> u64 {
        self.splits
    }

    pub fn insertions(&self) -> usize {
        self.leaves - self.initial
    }

    fn leaf(&self, e: usize) -> Result<u32> {
        match self.leaf_of.get(e) {
            Some(&l) if l != NIL => Ok(l),
            _ => Err(Error::ElementAbsent(e)),
        }
    }

    /// Finds the last element before `key`, starting from `finger`, which must
    /// itself precede `key`. Only elements strictly after the first leaf are
    /// ever compared, so a sentinel stored first is never shown to the oracle.
    pub fn finger_search(
        &self,
        finger: usize,
        key: usize,
        oracle: &mut LinearOracle,
    ) -> Result<SearchOutcome> {
        let start = self.leaf(finger)?;
        if self.contains(key) {
            return Err(Error::DuplicateElement(key));
        }
        // uncounted precondition check; never influences the answer
        if oracle.rank(finger) > oracle.rank(key) {
            return Err(Error::FingerNotBefore { finger, key });
        }
        let before = oracle.query_count();
        let mut less = |e: u32| oracle.precedes(e as usize, key);

        // climb
        let mut v = start;
        let mut anchor = NIL;
        loop {
            let r = self.nodes[v as usize].right;
            if r == NIL || !less(self.nodes[r as usize].min)? {
                break;
            }
            anchor = r;
            v = self.nodes[r as usize].parent;
        }

        // descend; `lo` indexes a child whose min is known to precede the key
        while self.nodes[v as usize].height > 0 {
            let children = &self.nodes[v as usize].children;
            let mut lo = if anchor == NIL {
                0
            } else {
                children.iter().position(|&c| c == anchor).expect("anchor is a child")
            };
            let mut hi = children.len();
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if less(self.nodes[children[mid] as usize].min)? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            v = children[lo];
            anchor = NIL;
        }
        Ok(SearchOutcome {
            target: self.nodes[v as usize].min as usize,
            queries: oracle.query_count() - before,
        })
    }

    /// Inserts `x` as the immediate successor of `q`.
    pub fn finger_insert(&mut self, q: usize, x: usize) -> Result<()> {
        let ql = self.leaf(q)?;
        if x >= self.leaf_of.len() {
            self.leaf_of.resize(x + 1, NIL);
        }
        if self.leaf_of[x] != NIL {
            return Err(Error::DuplicateElement(x));
        }
        let xl = self.push_node(x as u32, 0);
        self.leaf_of[x] = xl;
        self.leaves += 1;
        self.add_right_sibling(ql, xl);
        debug_assert!(self.ancestors_ok(xl));
        Ok(())
    }

    /// Links `new` as the level neighbour and sibling right after `node`,
    /// splitting full parents on the way up.
    fn add_right_sibling(&mut self, node: u32, new: u32) {
        let mut node = node;
        let mut new = new;
        loop {
            let right = self.nodes[node as usize].right;
            self.nodes[new as usize].left = node;
            self.nodes[new as usize].right = right;
            self.nodes[node as usize].right = new;
            if right != NIL {
                self.nodes[right as usize].left = new;
            }

            let parent = self.nodes[node as usize].parent;
            if parent == NIL {
                let height = self.nodes[node as usize].height + 1;
                let root = self.push_node(self.nodes[node as usize].min, height);
                self.nodes[root as usize].children.extend([node, new]);
                self.nodes[node as usize].parent = root;
                self.nodes[new as usize].parent = root;
                self.root = root;
                self.splits += 1;
                return;
            }
            self.nodes[new as usize].parent = parent;
            let pos = self.nodes[parent as usize]
                .children
                .iter()
                .position(|&c| c == node)
                .expect("child of its parent");
            self.nodes[parent as usize].children.insert(pos + 1, new);
            if self.nodes[parent as usize].children.len() < 5 {
                return;
            }

            // 5 children: keep two, move three to a fresh right neighbour
            self.splits += 1;
            let moved: ArrayVec<u32, 5> = self.nodes[parent as usize].children.drain(2..).collect();
            let height = self.nodes[parent as usize].height;
            let split = self.push_node(self.nodes[moved[0] as usize].min, height);
            for &c in &moved {
                self.nodes[c as usize].parent = split;
            }
            self.nodes[split as usize].children = moved;
            node = parent;
            new = split;
        }
    }

    fn ancestors_ok(&self, leaf: u32) -> bool {
        let mut v = self.nodes[leaf as usize].parent;
        let mut h = 1;
        while v != NIL {
            let n = &self.nodes[v as usize];
            if n.height != h || !(2..=4).contains(&n.children.len()) {
                return false;
            }
            v = n.parent;
            h += 1;
        }
        true
    }

    fn leftmost_leaf(&self) -> u32 {
        let mut v = self.root;
        while self.nodes[v as usize].height > 0 {
            v = self.nodes[v as usize].children[0];
        }
        v
    }

    /// Elements in leaf order, following the leaf-level links.
    pub fn to_vec(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaves);
        let mut v = self.leftmost_leaf();
        while v != NIL {
            out.push(self.nodes[v as usize].min as usize);
            v = self.nodes[v as usize].right;
        }
        out
    }

    /// Number of leaves from `p` to `q` inclusive, walking the leaf links.
    /// O(distance); meant for tests and diagnostics.
    pub fn distance(&self, p: usize, q: usize) -> Result<usize> {
        let (mut v, target) = (self.leaf(p)?, self.leaf(q)?);
        let mut d = 1;
        while v != target {
            v = self.nodes[v as usize].right;
            if v == NIL {
                return Err(Error::InternalInvariantViolation(format!(
                    "{q} does not follow {p}"
                )));
            }
            d += 1;
        }
        Ok(d)
    }

    /// Full structural check: degrees, uniform leaf depth, parent pointers,
    /// `min` fields and level links. O(n).
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InternalInvariantViolation(m));
        if self.nodes[self.root as usize].parent != NIL {
            return fail("root has a parent".into());
        }
        let mut level = vec![self.root];
        loop {
            for w in level.windows(2) {
                if self.nodes[w[0] as usize].right != w[1] || self.nodes[w[1] as usize].left != w[0]
                {
                    return fail(format!("level link broken between {} and {}", w[0], w[1]));
                }
            }
            let (first, last) = (level[0], level[level.len() - 1]);
            if self.nodes[first as usize].left != NIL || self.nodes[last as usize].right != NIL {
                return fail("level ends are linked outward".into());
            }
            let h = self.nodes[first as usize].height;
            if h == 0 {
                break;
            }
            let mut next = Vec::new();
            for &v in &level {
                let n = &self.nodes[v as usize];
                if n.height != h {
                    return fail(format!("node {v} at wrong height"));
                }
                if !(2..=4).contains(&n.children.len()) {
                    return fail(format!("node {v} has {} children", n.children.len()));
                }
                if n.min != self.nodes[n.children[0] as usize].min {
                    return fail(format!("node {v} has a stale min"));
                }
                for &c in &n.children {
                    if self.nodes[c as usize].parent != v {
                        return fail(format!("child {c} has wrong parent"));
                    }
                }
                next.extend(n.children.iter().copied());
            }
            level = next;
        }
        if level.len() != self.leaves {
            return fail(format!("{} leaves reachable, {} expected", level.len(), self.leaves));
        }
        for &l in &level {
            if self.leaf_of[self.nodes[l as usize].min as usize] != l {
                return fail(format!("leaf map stale for leaf {l}"));
            }
        }
        Ok(())
    }
}
