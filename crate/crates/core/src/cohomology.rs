//! Coboundary maps, cocycle and coboundary spaces, cosystoles, and
//! brute-force coboundary/cocycle expansion.
//!
//! Expansion searches enumerate the cosets of the relevant subspace `W`
//! (`B^k` or `Z^k`) using the non-pivot coordinates of its reduced basis as
//! canonical coset representatives, then walk `W` inside each coset to find
//! the minimum-norm representative. `‖δA‖` is constant on a coset because `δ`
//! vanishes on `W`.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::complex::Complex;
use crate::error::{HdxError, Result};
use crate::f2::{flip, support, unit, walk_span, Echelon};
use crate::rational::{rat_u, Extended, Rat};

/// `δA`: the `(k+1)`-faces containing an odd number of members of `A`.
pub fn coboundary(x: &Complex, a: &Cochain) -> Result<Cochain> {
    x.check_cochain(a)?;
    let k = a.dim();
    if k >= x.dim() as i32 {
        return Err(HdxError::BadDimension(format!(
            "coboundary of a {k}-cochain in a {}-complex",
            x.dim()
        )));
    }
    let mut out = x.empty_cochain(k + 1);
    for i in a.members() {
        for &c in x.cofacets(k, i) {
            out.toggle(c);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Cocycles,
    Coboundaries,
}

/// Row-reduced basis of `Z^k` or `B^k`.
#[derive(Clone, Debug)]
pub struct F2Basis {
    k: i32,
    kind: SpaceKind,
    complex: u64,
    echelon: Echelon,
}

impl F2Basis {
    pub fn k(&self) -> i32 {
        self.k
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.echelon.dim()
    }

    fn to_cochain(&self, k: i32, v: &FixedBitSet) -> Cochain {
        let mut c = Cochain::new(self.complex, k, v.len());
        for i in v.ones() {
            c.insert(i);
        }
        c
    }

    pub fn rows(&self) -> Vec<Cochain> {
        self.echelon.rows().iter().map(|r| self.to_cochain(self.k, r)).collect()
    }

    /// Leading (lowest) face index of each row, strictly increasing.
    pub fn pivots(&self) -> &[usize] {
        self.echelon.pivots()
    }

    /// For a coboundary basis, `(k-1)`-cochains `c_j` with `δc_j = row_j`.
    pub fn preimages(&self) -> Option<Vec<Cochain>> {
        match self.kind {
            SpaceKind::Coboundaries => Some(
                self.echelon
                    .tags()
                    .iter()
                    .map(|t| self.to_cochain(self.k - 1, t))
                    .collect(),
            ),
            SpaceKind::Cocycles => None,
        }
    }

    pub(crate) fn row_supports(&self) -> Vec<Vec<usize>> {
        self.echelon.rows().iter().map(support).collect()
    }

    pub(crate) fn echelon(&self) -> &Echelon {
        &self.echelon
    }

    fn bits_of(a: &Cochain) -> FixedBitSet {
        let mut v = FixedBitSet::with_capacity(a.level_len());
        for i in a.members() {
            v.insert(i);
        }
        v
    }

    pub fn contains(&self, a: &Cochain) -> bool {
        a.complex_id() == self.complex && a.dim() == self.k && self.echelon.contains(&Self::bits_of(a))
    }

    /// Canonical coset representative: `a` reduced against the basis.
    pub fn reduce(&self, a: &Cochain) -> Result<Cochain> {
        if a.complex_id() != self.complex || a.dim() != self.k {
            return Err(HdxError::ComplexMismatch);
        }
        let mut v = Self::bits_of(a);
        self.echelon.reduce(&mut v);
        Ok(self.to_cochain(self.k, &v))
    }
}

fn cofacet_bits(x: &Complex, k: i32, i: usize) -> FixedBitSet {
    let mut v = FixedBitSet::with_capacity(x.num_faces(k + 1));
    for &c in x.cofacets(k, i) {
        v.toggle(c);
    }
    v
}

/// Echelon basis of `Z^k = ker δ^k` or `B^k = im δ^{k-1}`.
pub fn space_basis(x: &Complex, k: i32, kind: SpaceKind) -> Result<F2Basis> {
    x.check_dim(k)?;
    let n = x.num_faces(k);
    let echelon = match kind {
        SpaceKind::Cocycles => {
            let mut kernel = Echelon::new(n);
            if k == x.dim() as i32 {
                for i in 0..n {
                    kernel.insert(unit(n, i));
                }
            } else {
                let mut images = Echelon::new(x.num_faces(k + 1));
                for i in 0..n {
                    if let Some(dep) = images.insert_tagged(cofacet_bits(x, k, i), unit(n, i)) {
                        kernel.insert(dep);
                    }
                }
            }
            kernel
        }
        SpaceKind::Coboundaries => {
            if k < 0 {
                return Err(HdxError::BadDimension("B^-1 is not defined".into()));
            }
            let m = x.num_faces(k - 1);
            let mut image = Echelon::new(n);
            for j in 0..m {
                image.insert_tagged(cofacet_bits(x, k - 1, j), unit(m, j));
            }
            image
        }
    };
    Ok(F2Basis {
        k,
        kind,
        complex: x.id(),
        echelon,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyDims {
    pub k: i32,
    pub cocycles: usize,
    pub coboundaries: usize,
    pub cohomology: usize,
}

pub fn cohomology_dims(x: &Complex, k: i32) -> Result<CohomologyDims> {
    let z = space_basis(x, k, SpaceKind::Cocycles)?.dim();
    let b = if k >= 0 {
        space_basis(x, k, SpaceKind::Coboundaries)?.dim()
    } else {
        0
    };
    Ok(CohomologyDims {
        k,
        cocycles: z,
        coboundaries: b,
        cohomology: z - b,
    })
}

pub(crate) fn check_cap(what: &str, log2_required: usize, cap: u64) -> Result<()> {
    if log2_required >= 64 || (1u64 << log2_required) > cap {
        Err(HdxError::too_large(what, log2_required as u32, cap))
    } else {
        Ok(())
    }
}

fn check_proper_dim(x: &Complex, k: i32) -> Result<()> {
    if k < 0 || k >= x.dim() as i32 {
        Err(HdxError::BadDimension(format!(
            "need 0 <= k <= d-1 = {}, got {k}",
            x.dim() as i32 - 1
        )))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CosystoleReport {
    pub k: i32,
    pub value: Extended,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<Cochain>,
}

pub(crate) fn ser_witness<S: serde::Serializer>(w: &Option<Cochain>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match w {
        Some(c) => s.collect_seq(c.members()),
        None => s.serialize_none(),
    }
}

/// `Syst^k(X) = min { ‖z‖ : z ∈ Z^k \ B^k }`, or infinite when `Z^k = B^k`.
/// `k = d` is accepted: there `Z^d = C^d`.
pub fn cosystole(x: &Complex, k: i32, cap: u64) -> Result<CosystoleReport> {
    if k < 0 || k > x.dim() as i32 {
        return Err(HdxError::BadDimension(format!("need 0 <= k <= d = {}, got {k}", x.dim())));
    }
    let z = space_basis(x, k, SpaceKind::Cocycles)?;
    let b = space_basis(x, k, SpaceKind::Coboundaries)?;
    check_cap("cosystole enumeration of Z^k", z.dim(), cap)?;
    let mut extra = Echelon::new(x.num_faces(k));
    for row in z.echelon().rows() {
        let mut v = row.clone();
        b.echelon().reduce(&mut v);
        if !v.is_clear() {
            extra.insert(v);
        }
    }
    if extra.dim() == 0 {
        return Ok(CosystoleReport {
            k,
            value: Extended::Infinite,
            witness: None,
        });
    }
    let outer: Vec<Vec<usize>> = extra.rows().iter().map(support).collect();
    let inner = b.row_supports();
    let scan = CosetScan {
        x,
        k,
        outer: &outer,
        inner: &inner,
        track_delta: false,
    };
    let best = scan.run(|a, b| a.min_mass < b.min_mass).expect("nonempty");
    let witness = x.cochain_from_indices(k, best.witness_indices());
    Ok(CosystoleReport {
        k,
        value: Extended::Finite(rat_u(best.min_mass as u128, x.weight_denominator(k))),
        witness: Some(witness),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpansionMode {
    Coboundary,
    Cocycle,
}

impl ExpansionMode {
    fn space(self) -> SpaceKind {
        match self {
            ExpansionMode::Coboundary => SpaceKind::Coboundaries,
            ExpansionMode::Cocycle => SpaceKind::Cocycles,
        }
    }
}

impl std::str::FromStr for ExpansionMode {
    type Err = HdxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coboundary" | "b" => Ok(ExpansionMode::Coboundary),
            "cocycle" | "z" => Ok(ExpansionMode::Cocycle),
            _ => Err(HdxError::BadParam(format!("unknown expansion mode {s:?}"))),
        }
    }
}

/// `Exp_b^k` or `Exp_z^k` together with a witness attaining it.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    pub k: i32,
    pub mode: ExpansionMode,
    pub value: Extended,
    #[serde(serialize_with = "ser_witness")]
    pub witness: Option<Cochain>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub coboundary_norm: Option<Rat>,
    #[serde(serialize_with = "ser_opt_rat")]
    pub distance: Option<Rat>,
}

pub(crate) fn ser_opt_rat<S: serde::Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => crate::rational::RatJson(r).serialize(s),
        None => s.serialize_none(),
    }
}

/// Brute-force `Exp^k(X) = min ‖δA‖ / dist(A, W)` over `A ∉ W`, with
/// `W = B^k` (coboundary mode) or `W = Z^k` (cocycle mode).
pub fn expansion(x: &Complex, k: i32, mode: ExpansionMode, cap: u64) -> Result<ExpansionReport> {
    check_proper_dim(x, k)?;
    let n = x.num_faces(k);
    check_cap("expansion enumeration of C^k", n, cap)?;
    let w = space_basis(x, k, mode.space())?;
    let pivots = w.pivots();
    let outer: Vec<Vec<usize>> = (0..n)
        .filter(|i| pivots.binary_search(i).is_err())
        .map(|i| vec![i])
        .collect();
    if outer.is_empty() {
        return Ok(ExpansionReport {
            k,
            mode,
            value: Extended::Infinite,
            witness: None,
            coboundary_norm: None,
            distance: None,
        });
    }
    let inner = w.row_supports();
    let scan = CosetScan {
        x,
        k,
        outer: &outer,
        inner: &inner,
        track_delta: true,
    };
    // δa/ma < δb/mb  <=>  δa·mb < δb·ma
    let best = scan
        .run(|a, b| (a.delta_mass as u128) * (b.min_mass as u128) < (b.delta_mass as u128) * (a.min_mass as u128))
        .expect("nonempty");
    let dn = x.weight_denominator(k);
    let dn1 = x.weight_denominator(k + 1);
    let delta = rat_u(best.delta_mass as u128, dn1);
    let dist = rat_u(best.min_mass as u128, dn);
    Ok(ExpansionReport {
        k,
        mode,
        value: Extended::Finite(&delta / &dist),
        witness: Some(x.cochain_from_indices(k, best.witness_indices())),
        coboundary_norm: Some(delta),
        distance: Some(dist),
    })
}

/// Minimum over the nonzero cosets `c + W`, `c ∈ span(outer) \ {0}`, of the
/// minimum-mass element of each coset.
struct CosetScan<'a> {
    x: &'a Complex,
    k: i32,
    outer: &'a [Vec<usize>],
    inner: &'a [Vec<usize>],
    track_delta: bool,
}

#[derive(Clone, Debug)]
struct CosetMin {
    coset: u64,
    delta_mass: u64,
    min_mass: u64,
    witness: Vec<bool>,
}

impl CosetMin {
    fn witness_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.witness.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }
}

struct ScanState {
    state: Vec<bool>,
    mass: u64,
    parity: Vec<bool>,
    delta_mass: u64,
}

impl CosetScan<'_> {
    fn toggle_outer(&self, j: usize, s: &mut ScanState) {
        let w = self.x.top_counts(self.k);
        flip(&self.outer[j], w, &mut s.state, &mut s.mass);
        if self.track_delta {
            let w1 = self.x.top_counts(self.k + 1);
            for &i in &self.outer[j] {
                for &c in self.x.cofacets(self.k, i) {
                    if s.parity[c] {
                        s.delta_mass -= w1[c];
                    } else {
                        s.delta_mass += w1[c];
                    }
                    s.parity[c] = !s.parity[c];
                }
            }
        }
    }

    fn run<F>(&self, better: F) -> Option<CosetMin>
    where
        F: Fn(&CosetMin, &CosetMin) -> bool + Sync,
    {
        let h = self.outer.len();
        assert!(h < 64);
        let total = 1u64 << h;
        let chunk_bits = h.saturating_sub(8);
        let chunk = 1u64 << chunk_bits;
        let pick = |a: Option<CosetMin>, b: Option<CosetMin>| match (a, b) {
            (None, b) => b,
            (a, None) => a,
            (Some(a), Some(b)) => {
                if better(&b, &a) || (!better(&a, &b) && b.coset < a.coset) {
                    Some(b)
                } else {
                    Some(a)
                }
            }
        };
        (0..total.div_ceil(chunk))
            .into_par_iter()
            .map(|c| self.run_chunk(c * chunk, ((c + 1) * chunk).min(total), &better))
            .reduce(|| None, pick)
    }

    fn run_chunk<F>(&self, start: u64, end: u64, better: &F) -> Option<CosetMin>
    where
        F: Fn(&CosetMin, &CosetMin) -> bool,
    {
        let n = self.x.num_faces(self.k);
        let n1 = if self.track_delta { self.x.num_faces(self.k + 1) } else { 0 };
        let mut s = ScanState {
            state: vec![false; n],
            mass: 0,
            parity: vec![false; n1],
            delta_mass: 0,
        };
        let mut gray = start ^ (start >> 1);
        for j in 0..self.outer.len() {
            if gray >> j & 1 == 1 {
                self.toggle_outer(j, &mut s);
            }
        }
        let weights = self.x.top_counts(self.k);
        let mut best: Option<CosetMin> = None;
        for t in start..end {
            if t > start {
                let j = t.trailing_zeros() as usize;
                self.toggle_outer(j, &mut s);
                gray ^= 1 << j;
            }
            if gray == 0 {
                continue;
            }
            let mut min_mass = u64::MAX;
            let mut witness = Vec::new();
            let mut mass = s.mass;
            walk_span(self.inner, weights, &mut s.state, &mut mass, |_, m, st| {
                if m < min_mass {
                    min_mass = m;
                    witness = st.to_vec();
                }
                true
            });
            let cand = CosetMin {
                coset: gray,
                delta_mass: s.delta_mass,
                min_mass,
                witness,
            };
            best = match best {
                None => Some(cand),
                Some(b) => {
                    if better(&cand, &b) || (!better(&b, &cand) && cand.coset < b.coset) {
                        Some(cand)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }
}

/// `min_{b ∈ W} ‖A + b‖` by walking the span of `W`.
pub fn distance_to(x: &Complex, a: &Cochain, w: &F2Basis, cap: u64) -> Result<Rat> {
    x.check_cochain(a)?;
    if w.complex != x.id() || w.k != a.dim() {
        return Err(HdxError::ComplexMismatch);
    }
    check_cap("distance enumeration", w.dim(), cap)?;
    let weights = x.top_counts(a.dim());
    let mut state: Vec<bool> = (0..a.level_len()).map(|i| a.contains(i)).collect();
    let mut mass = x.mass(a);
    let mut min = mass;
    walk_span(&w.row_supports(), weights, &mut state, &mut mass, |_, m, _| {
        min = min.min(m);
        true
    });
    Ok(rat_u(min as u128, x.weight_denominator(a.dim())))
}
