//! Row-reduced F2 bases and Gray-code walks over their spans.

use fixedbitset::FixedBitSet;

/// Reduced row echelon form over F2. Pivots are the lowest set index of each
/// row, strictly increasing, and every pivot column is clear in all other rows.
/// Each row optionally carries a tag that is transformed alongside it, which is
/// how preimages and kernel vectors are tracked.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    len: usize,
    rows: Vec<FixedBitSet>,
    pivots: Vec<usize>,
    tags: Vec<FixedBitSet>,
}

impl Echelon {
    pub fn new(len: usize) -> Echelon {
        Echelon {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[FixedBitSet] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn tags(&self) -> &[FixedBitSet] {
        &self.tags
    }

    /// Reduces `v` (and its tag) against the current rows.
    pub fn reduce_tagged(&self, v: &mut FixedBitSet, tag: &mut FixedBitSet) {
        for (r, &p) in self.pivots.iter().enumerate() {
            if v.contains(p) {
                v.symmetric_difference_with(&self.rows[r]);
                if !self.tags.is_empty() {
                    tag.symmetric_difference_with(&self.tags[r]);
                }
            }
        }
    }

    pub fn reduce(&self, v: &mut FixedBitSet) {
        for (r, &p) in self.pivots.iter().enumerate() {
            if v.contains(p) {
                v.symmetric_difference_with(&self.rows[r]);
            }
        }
    }

    pub fn contains(&self, v: &FixedBitSet) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_clear()
    }

    /// Adds `v` to the span. If it is already in the span, returns the reduced
    /// tag (which then encodes a dependency) and leaves the basis unchanged.
    pub fn insert_tagged(&mut self, mut v: FixedBitSet, mut tag: FixedBitSet) -> Option<FixedBitSet> {
        debug_assert_eq!(v.len(), self.len);
        self.reduce_tagged(&mut v, &mut tag);
        let Some(p) = v.minimum() else {
            return Some(tag);
        };
        for r in 0..self.rows.len() {
            if self.rows[r].contains(p) {
                self.rows[r].symmetric_difference_with(&v);
                self.tags[r].symmetric_difference_with(&tag);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        self.tags.insert(at, tag);
        None
    }

    pub fn insert(&mut self, v: FixedBitSet) -> bool {
        self.insert_tagged(v, FixedBitSet::new()).is_none()
    }
}

/// Gray-code walk over `base + span(rows)`.
///
/// `state` holds membership flags and `mass` the weighted size of `base`;
/// each visited element is reported as `(combination, mass, state)` where bit
/// `j` of `combination` says whether row `j` is included. The callback returns
/// `false` to stop early. `state` and `mass` are restored before returning.
pub(crate) fn walk_span<F>(rows: &[Vec<usize>], weights: &[u64], state: &mut [bool], mass: &mut u64, mut visit: F)
where
    F: FnMut(u64, u64, &[bool]) -> bool,
{
    assert!(rows.len() < 64, "span too large to walk");
    let mut gray = 0u64;
    if visit(gray, *mass, state) {
        let total = 1u64 << rows.len();
        for t in 1..total {
            let j = t.trailing_zeros() as usize;
            flip(&rows[j], weights, state, mass);
            gray ^= 1 << j;
            if !visit(gray, *mass, state) {
                break;
            }
        }
    }
    for (j, row) in rows.iter().enumerate() {
        if gray >> j & 1 == 1 {
            flip(row, weights, state, mass);
        }
    }
}

#[inline]
pub(crate) fn flip(row: &[usize], weights: &[u64], state: &mut [bool], mass: &mut u64) {
    for &i in row {
        if state[i] {
            *mass -= weights[i];
        } else {
            *mass += weights[i];
        }
        state[i] = !state[i];
    }
}

pub(crate) fn support(v: &FixedBitSet) -> Vec<usize> {
    v.ones().collect()
}

pub(crate) fn unit(len: usize, i: usize) -> FixedBitSet {
    let mut v = FixedBitSet::with_capacity(len);
    v.insert(i);
    v
}
