use fixedbitset::FixedBitSet;

use crate::error::{HdxError, Result};

/// An F2 cochain: a set of `k`-faces of one specific complex, stored as a bit
/// set over the canonical face order. Addition is symmetric difference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    complex: u64,
    dim: i32,
    bits: FixedBitSet,
}

impl Cochain {
    pub(crate) fn new(complex: u64, dim: i32, len: usize) -> Cochain {
        Cochain {
            complex,
            dim,
            bits: FixedBitSet::with_capacity(len),
        }
    }

    pub fn complex_id(&self) -> u64 {
        self.complex
    }

    pub fn dim(&self) -> i32 {
        self.dim
    }

    /// Number of faces in the ambient level, not the number of members.
    pub fn level_len(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub fn insert(&mut self, i: usize) {
        self.bits.insert(i);
    }

    pub fn remove(&mut self, i: usize) {
        self.bits.set(i, false);
    }

    pub fn toggle(&mut self, i: usize) {
        self.bits.toggle(i);
    }

    pub(crate) fn fill(&mut self) {
        self.bits.insert_range(..);
    }

    pub fn clear(&mut self) {
        self.bits.clear();
    }

    /// Member indices in increasing order.
    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.members().collect()
    }

    fn compatible(&self, other: &Cochain) -> Result<()> {
        if self.complex != other.complex || self.dim != other.dim {
            Err(HdxError::ComplexMismatch)
        } else {
            Ok(())
        }
    }

    /// `self + other` over F2.
    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Cochain) -> Result<()> {
        self.compatible(other)?;
        self.bits.symmetric_difference_with(&other.bits);
        Ok(())
    }

    pub fn union(&self, other: &Cochain) -> Result<Cochain> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.bits.union_with(&other.bits);
        Ok(out)
    }

    pub fn intersection(&self, other: &Cochain) -> Result<Cochain> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.bits.intersect_with(&other.bits);
        Ok(out)
    }

    pub fn difference(&self, other: &Cochain) -> Result<Cochain> {
        self.compatible(other)?;
        let mut out = self.clone();
        out.bits.difference_with(&other.bits);
        Ok(out)
    }

    pub fn is_subset(&self, other: &Cochain) -> bool {
        self.complex == other.complex && self.dim == other.dim && self.bits.is_subset(&other.bits)
    }

    /// Canonical total order on cochains of one level: compare member lists
    /// lexicographically.
    pub fn canonical_cmp(&self, other: &Cochain) -> std::cmp::Ordering {
        self.members().cmp(other.members())
    }
}
