//! Order-maintenance list: "which of p, q is later" in O(1) and insert-after
//! in amortized O(1), without ever consulting the oracle.
//!
//! Two-level labelling. Elements live in groups of at most [`GROUP_CAP`]
//! consecutive items, each with a 64-bit label local to its group. Groups
//! carry labels from a 62-bit space that is rebalanced with the
//! density-threshold scheme of Bender et al.: on a collision the smallest
//! aligned label range around the insertion point whose density is below
//! `(2/T)^i` is relabelled evenly. A group split happens at most once per
//! `GROUP_CAP / 2` insertions, which pays for the O(log n) amortized cost of
//! the top level.

use crate::error::{Error, Result};

const NIL: u32 = u32::MAX;
const GROUP_CAP: usize = 64;
const GROUP_FILL: usize = GROUP_CAP / 2;
const TOP_BITS: u32 = 62;
const TOP_END: u64 = 1 << TOP_BITS;
/// Density parameter `T` of the top-level rebalancing, in (1, 2).
const TOP_T: f64 = 1.5;

/// Upper bound on `work()` per element for any sequence of operations on a
/// list of at most `2^24` elements (asserted in tests).
pub const WORK_PER_ELEMENT: u64 = 8;

#[derive(Debug, Clone, Copy)]
struct Item {
    elem: u32,
    group: u32,
    label: u64,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone, Copy)]
struct Group {
    label: u64,
    first: u32,
    len: u32,
    prev: u32,
    next: u32,
}

#[derive(Debug, Clone)]
pub struct OrderIndex {
    items: Vec<Item>,
    groups: Vec<Group>,
    slot: Vec<u32>,
    head: u32,
    work: u64,
    compares: u64,
}

impl OrderIndex {
    /// Index over `path` in order. Elements are ids in `0..capacity`.
    pub fn from_path(path: &[usize], capacity: usize) -> Result<Self> {
        let mut idx = OrderIndex {
            items: Vec::with_capacity(capacity),
            groups: Vec::with_capacity(capacity / GROUP_FILL + 1),
            slot: vec![NIL; capacity],
            head: NIL,
            work: 0,
            compares: 0,
        };
        if path.is_empty() {
            return Err(Error::InternalInvariantViolation(
                "order index needs a non-empty path".into(),
            ));
        }
        for &e in path {
            if e >= capacity {
                return Err(Error::ElementAbsent(e));
            }
            if idx.slot[e] != NIL {
                return Err(Error::DuplicateElement(e));
            }
            let i = idx.items.len() as u32;
            idx.slot[e] = i;
            idx.items.push(Item {
                elem: e as u32,
                group: NIL,
                label: 0,
                prev: if i == 0 { NIL } else { i - 1 },
                next: NIL,
            });
            if i > 0 {
                idx.items[i as usize - 1].next = i;
            }
        }
        idx.head = 0;
        let n_groups = path.len().div_ceil(GROUP_FILL);
        let spacing = TOP_END / (n_groups as u64 + 1);
        for gi in 0..n_groups {
            let start = gi * GROUP_FILL;
            let len = GROUP_FILL.min(path.len() - start);
            idx.groups.push(Group {
                label: (gi as u64 + 1) * spacing,
                first: start as u32,
                len: len as u32,
                prev: if gi == 0 { NIL } else { gi as u32 - 1 },
                next: if gi + 1 == n_groups { NIL } else { gi as u32 + 1 },
            });
            for it in &mut idx.items[start..start + len] {
                it.group = gi as u32;
            }
            idx.relabel_group(gi as u32);
        }
        idx.work = 0;
        Ok(idx)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.slot.len() && self.slot[e] != NIL
    }

    /// Items visited by relabelling since construction.
    pub fn work(&self) -> u64 {
        self.work
    }

    pub fn compare_calls(&self) -> u64 {
        self.compares
    }

    fn item_of(&self, e: usize) -> Result<u32> {
        match self.slot.get(e) {
            Some(&s) if s != NIL => Ok(s),
            _ => Err(Error::ElementAbsent(e)),
        }
    }

    fn key(&self, i: u32) -> (u64, u64) {
        let it = &self.items[i as usize];
        (self.groups[it.group as usize].label, it.label)
    }

    /// True iff `a` comes strictly before `b`.
    pub fn is_before(&self, a: usize, b: usize) -> Result<bool> {
        let (ia, ib) = (self.item_of(a)?, self.item_of(b)?);
        Ok(self.key(ia) < self.key(ib))
    }

    /// Returns whichever of `p`, `q` is later in the list.
    pub fn compare_max(&mut self, p: usize, q: usize) -> Result<usize> {
        self.compares += 1;
        Ok(if self.is_before(p, q)? { q } else { p })
    }

    /// Inserts `x` immediately after `q`.
    pub fn insert_after(&mut self, q: usize, x: usize) -> Result<()> {
        let qi = self.item_of(q)?;
        if x >= self.slot.len() {
            self.slot.resize(x + 1, NIL);
        }
        if self.slot[x] != NIL {
            return Err(Error::DuplicateElement(x));
        }
        let g = self.items[qi as usize].group;
        let label = match self.gap_label(qi) {
            Some(l) => l,
            None => {
                self.relabel_group(g);
                self.gap_label(qi).expect("fresh labels leave gaps")
            }
        };
        let xi = self.items.len() as u32;
        let next = self.items[qi as usize].next;
        self.items.push(Item {
            elem: x as u32,
            group: g,
            label,
            prev: qi,
            next,
        });
        self.items[qi as usize].next = xi;
        if next != NIL {
            self.items[next as usize].prev = xi;
        }
        self.slot[x] = xi;
        self.groups[g as usize].len += 1;
        if self.groups[g as usize].len as usize > GROUP_CAP {
            self.split_group(g);
        }
        Ok(())
    }

    fn gap_label(&self, qi: u32) -> Option<u64> {
        let it = self.items[qi as usize];
        let upper = match it.next {
            NIL => u64::MAX,
            nx if self.items[nx as usize].group == it.group => self.items[nx as usize].label,
            _ => u64::MAX,
        };
        (upper - it.label >= 2).then(|| it.label + (upper - it.label) / 2)
    }

    fn relabel_group(&mut self, g: u32) {
        let Group { first, len, .. } = self.groups[g as usize];
        let spacing = u64::MAX / (len as u64 + 1);
        let mut cur = first;
        for j in 0..len as u64 {
            let it = &mut self.items[cur as usize];
            it.label = (j + 1) * spacing;
            cur = it.next;
        }
        self.work += len as u64;
    }

    fn split_group(&mut self, g: u32) {
        let len = self.groups[g as usize].len;
        let keep = len / 2;
        let mut cur = self.groups[g as usize].first;
        for _ in 0..keep {
            cur = self.items[cur as usize].next;
        }
        let ng = self.groups.len() as u32;
        let old_next = self.groups[g as usize].next;
        self.groups.push(Group {
            label: 0,
            first: cur,
            len: len - keep,
            prev: g,
            next: old_next,
        });
        self.groups[g as usize].len = keep;
        self.groups[g as usize].next = ng;
        if old_next != NIL {
            self.groups[old_next as usize].prev = ng;
        }
        for _ in 0..len - keep {
            let it = &mut self.items[cur as usize];
            it.group = ng;
            cur = it.next;
        }
        self.relabel_group(g);
        self.relabel_group(ng);
        self.place_group_after(g, ng);
    }

    /// Gives the freshly linked group `ng` (right after `g`) a top label.
    fn place_group_after(&mut self, g: u32, ng: u32) {
        let lower = self.groups[g as usize].label;
        let upper = match self.groups[ng as usize].next {
            NIL => TOP_END,
            nx => self.groups[nx as usize].label,
        };
        if upper - lower >= 2 {
            self.groups[ng as usize].label = lower + (upper - lower) / 2;
            return;
        }
        // Grow an aligned range around `lower` until it is sparse enough.
        // `left..=right` are the groups with labels in the range, `ng` included.
        let (mut left, mut right) = (g, ng);
        let mut count: u64 = 2;
        for i in 1..=TOP_BITS {
            let size = 1u64 << i;
            let base = lower & !(size - 1);
            let end = base + size;
            loop {
                let p = self.groups[left as usize].prev;
                if p == NIL || self.groups[p as usize].label < base {
                    break;
                }
                left = p;
                count += 1;
            }
            loop {
                let nx = self.groups[right as usize].next;
                if nx == NIL || self.groups[nx as usize].label >= end {
                    break;
                }
                right = nx;
                count += 1;
            }
            self.work += count;
            let threshold = (2.0 / TOP_T).powi(i as i32);
            if (count as f64) <= threshold {
                let spacing = size / count;
                let mut cur = left;
                for j in 0..count {
                    self.groups[cur as usize].label = base + j * spacing;
                    cur = self.groups[cur as usize].next;
                }
                return;
            }
        }
        panic!("order index label space exhausted");
    }

    /// Elements in list order.
    pub fn to_vec(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.items.len());
        let mut cur = self.head;
        while cur != NIL {
            out.push(self.items[cur as usize].elem as usize);
            cur = self.items[cur as usize].next;
        }
        out
    }

    /// Full structural check; O(n).
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InternalInvariantViolation(m));
        let mut cur = self.head;
        let mut prev_key = None;
        let mut seen = 0;
        while cur != NIL {
            let k = self.key(cur);
            if prev_key.is_some_and(|p| p >= k) {
                return fail(format!("labels not increasing at item {cur}"));
            }
            prev_key = Some(k);
            seen += 1;
            cur = self.items[cur as usize].next;
        }
        if seen != self.items.len() {
            return fail("list does not reach every item".into());
        }
        for (gi, g) in self.groups.iter().enumerate() {
            if g.len as usize > GROUP_CAP || g.len == 0 {
                return fail(format!("group {gi} has size {}", g.len));
            }
            if g.label >= TOP_END {
                return fail(format!("group {gi} label out of range"));
            }
        }
        Ok(())
    }
}
