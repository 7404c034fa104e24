//! Test corpus and independent brute-force oracles.
//!
//! Nothing here calls the library's linear algebra, coboundary or search
//! code: weights are recounted from the top faces, coboundaries from subset
//! tests, and every minimum comes from a flat scan of all `2^|X(k)|` cochains.

#![allow(dead_code)]

pub mod criteria;

use std::collections::HashMap;

use hdx::generators;
use hdx::{Cochain, Complex, Extended, Face, Rat};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ratio(num: u128, den: u128) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn choose(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn subsets(n: u32, size: usize) -> Vec<Vec<u32>> {
    fn rec(start: u32, n: u32, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// A random pure `d`-complex with `1 ≤ d ≤ max_d` on at most `max_n` vertices.
pub fn random_complex(rng: &mut TestRng, max_d: usize, max_n: u32) -> Complex {
    let d = rng.gen_range(1..=max_d);
    let n = rng.gen_range(d as u32 + 2..=max_n.max(d as u32 + 2));
    let cands = subsets(n, d + 1);
    let p: f64 = rng.gen_range(0.1..0.6);
    let mut tops: Vec<Vec<String>> = cands
        .iter()
        .filter(|_| rng.gen_bool(p))
        .map(|f| f.iter().map(|v| format!("v{v}")).collect())
        .collect();
    if tops.is_empty() {
        let f = cands.choose(rng).unwrap();
        tops.push(f.iter().map(|v| format!("v{v}")).collect());
    }
    Complex::from_labeled_faces(&tops).unwrap()
}

pub fn random_corpus(seed: u64, count: usize, max_d: usize, max_n: u32) -> Vec<Complex> {
    let mut r = rng(seed);
    (0..count).map(|_| random_complex(&mut r, max_d, max_n)).collect()
}

/// Outputs of every generator, kept small enough for exact work.
pub fn generator_corpus() -> Vec<(String, Complex)> {
    let mut out = Vec::new();
    for (n, d) in [(3, 1), (4, 2), (5, 2), (6, 2), (5, 3), (6, 3)] {
        out.push((format!("complete({n},{d})"), generators::complete(n, d).unwrap()));
    }
    for (d, m) in [(1, 2), (1, 3), (2, 2), (2, 3), (3, 2)] {
        out.push((format!("complete_partite({d},{m})"), generators::complete_partite(d, m).unwrap()));
    }
    for n in 3..=8 {
        out.push((format!("cycle({n})"), generators::cycle(n).unwrap()));
    }
    for (q, n) in [(2, 3), (3, 3), (2, 4)] {
        out.push((format!("projective_flag({q},{n})"), generators::projective_flag(q, n).unwrap()));
    }
    for (n, d, seed) in [(8, 2, 1), (9, 2, 7), (7, 3, 3)] {
        let g = generators::linial_meshulam(n, d, 1, 2, seed).unwrap();
        out.push((format!("linial_meshulam({n},{d},1/2,{seed})"), g.complex));
    }
    out
}

pub fn random_cochain(x: &Complex, k: i32, rng: &mut TestRng) -> Cochain {
    let p: f64 = rng.gen_range(0.05..0.7);
    x.cochain_from_indices(k, (0..x.num_faces(k)).filter(|_| rng.gen_bool(p)))
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|v| b.contains(v))
}

/// Number of top faces containing `f`, recounted from scratch.
pub fn top_count(x: &Complex, f: &Face) -> u64 {
    x.top_faces().iter().filter(|t| is_subset(f.vertices(), t.vertices())).count() as u64
}

/// `w(σ)` straight from its definition.
pub fn weight(x: &Complex, f: &Face) -> Rat {
    let d = x.dim() as u64;
    ratio(top_count(x, f) as u128, choose(d + 1, f.len() as u64) * x.top_faces().len() as u128)
}

pub fn norm(x: &Complex, faces: &[Face]) -> Rat {
    faces.iter().fold(Rat::zero(), |acc, f| acc + weight(x, f))
}

/// Everything about `C^k(X)` needed by the flat scans, indexed by bitmask.
pub struct Flat {
    pub k: i32,
    pub n: usize,
    /// Level denominators `D_k` and `D_(k+1)`.
    pub den: (u128, u128),
    pub mass: Vec<u64>,
    /// Mass of `δA`; zero at the top dimension.
    pub cob_mass: Vec<u64>,
    pub in_z: Vec<bool>,
    pub in_b: Vec<bool>,
}

pub const FLAT_LIMIT: usize = 16;

impl Flat {
    pub fn new(x: &Complex, k: i32) -> Option<Flat> {
        let n = x.num_faces(k);
        if n > FLAT_LIMIT {
            return None;
        }
        let d = x.dim() as i32;
        let tops = x.top_faces().len() as u128;
        let den = |j: i32| choose(d as u64 + 1, (j + 1) as u64) * tops;
        let level = |j: i32| -> Vec<Vec<u32>> { x.faces(j).iter().map(|f| f.vertices().to_vec()).collect() };
        let here = level(k);
        let tc: Vec<u64> = x.faces(k).iter().map(|f| top_count(x, f)).collect();
        let size = 1usize << n;
        let mut mass = vec![0u64; size];
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            mass[m] = mass[m & (m - 1)] + tc[low];
        }

        let mut cob_mass = vec![0u64; size];
        let mut in_z = vec![true; size];
        if k < d {
            let up = level(k + 1);
            let up_tc: Vec<u64> = x.faces(k + 1).iter().map(|f| top_count(x, f)).collect();
            let words = up.len().div_ceil(64);
            let cols: Vec<Vec<u64>> = here
                .iter()
                .map(|f| {
                    let mut c = vec![0u64; words];
                    for (j, t) in up.iter().enumerate() {
                        if is_subset(f, t) {
                            c[j / 64] |= 1 << (j % 64);
                        }
                    }
                    c
                })
                .collect();
            let mut cob = vec![vec![0u64; words]; size];
            for m in 1..size {
                let low = m.trailing_zeros() as usize;
                let prev = m & (m - 1);
                let v: Vec<u64> = cob[prev].iter().zip(&cols[low]).map(|(a, b)| a ^ b).collect();
                cob_mass[m] = (0..up.len()).filter(|&j| v[j / 64] >> (j % 64) & 1 == 1).map(|j| up_tc[j]).sum();
                in_z[m] = v.iter().all(|&w| w == 0);
                cob[m] = v;
            }
        }

        let mut in_b = vec![false; size];
        in_b[0] = true;
        if k >= 0 {
            let index: HashMap<&[u32], usize> = here.iter().enumerate().map(|(i, f)| (f.as_slice(), i)).collect();
            for f in level(k - 1) {
                let mut g = 0usize;
                for t in &here {
                    if is_subset(&f, t) {
                        g |= 1 << index[t.as_slice()];
                    }
                }
                let prev = in_b.clone();
                for m in 0..size {
                    if prev[m] {
                        in_b[m ^ g] = true;
                    }
                }
            }
        }
        Some(Flat {
            k,
            n,
            den: (den(k), if k < d { den(k + 1) } else { 1 }),
            mass,
            cob_mass,
            in_z,
            in_b,
        })
    }

    pub fn mask(a: &Cochain) -> usize {
        a.members().fold(0, |m, i| m | 1 << i)
    }

    pub fn cochain(&self, x: &Complex, m: usize) -> Cochain {
        x.cochain_from_indices(self.k, (0..self.n).filter(|i| m >> i & 1 == 1))
    }

    fn basis(set: &[bool]) -> Vec<usize> {
        let mut basis: Vec<usize> = Vec::new();
        for (m, &inside) in set.iter().enumerate() {
            if !inside {
                continue;
            }
            let mut r = m;
            for &b in &basis {
                r = r.min(r ^ b);
            }
            if r != 0 {
                basis.push(r);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis
    }

    /// `min_{w ∈ W} mass(A + w)` for every `A`.
    pub fn dist_mass(&self, w: &[bool]) -> Vec<u64> {
        let mut dist = self.mass.clone();
        for g in Flat::basis(w) {
            for m in 0..dist.len() {
                let other = dist[m ^ g];
                if other < dist[m] {
                    dist[m] = other;
                }
            }
        }
        dist
    }

    pub fn norm(&self, m: usize) -> Rat {
        ratio(self.mass[m] as u128, self.den.0)
    }

    /// `min ‖δA‖ / dist(A, W)` over `A ∉ W`.
    pub fn expansion(&self, cocycle: bool) -> Extended {
        let w = if cocycle { &self.in_z } else { &self.in_b };
        let dist = self.dist_mass(w);
        let mut best: Option<Rat> = None;
        for m in 0..dist.len() {
            if w[m] {
                continue;
            }
            let r = ratio(self.cob_mass[m] as u128 * self.den.0, dist[m] as u128 * self.den.1);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
        best.map_or(Extended::Infinite, Extended::Finite)
    }

    pub fn cosystole(&self) -> Extended {
        (0..self.mass.len())
            .filter(|&m| self.in_z[m] && !self.in_b[m])
            .map(|m| self.mass[m])
            .min()
            .map_or(Extended::Infinite, |m| Extended::Finite(ratio(m as u128, self.den.0)))
    }

    pub fn is_minimal(&self, dist_b: &[u64], m: usize) -> bool {
        dist_b[m] == self.mass[m]
    }

    /// A minimum-mass member of the coset `A + B^k`.
    pub fn minimal_representative(&self, m: usize) -> usize {
        let mut best = m;
        for b in 0..self.in_b.len() {
            if self.in_b[b] && self.mass[m ^ b] < self.mass[best] {
                best = m ^ b;
            }
        }
        best
    }

    pub fn h_dim(&self) -> u32 {
        let z = self.in_z.iter().filter(|&&b| b).count();
        let b = self.in_b.iter().filter(|&&b| b).count();
        (z / b).trailing_zeros()
    }
}

/// Fat faces recomputed from link norms: `S^k = A` and `σ ∈ S^(i-1)` iff
/// `‖I_σ(S^i)‖_σ ≥ η^(2^(k-i))`.
pub fn fat_oracle(x: &Complex, a: &Cochain, eta: &Rat) -> Vec<Vec<Face>> {
    let k = a.dim();
    let mut levels: Vec<Vec<Face>> = vec![Vec::new(); (k + 2) as usize];
    levels[(k + 1) as usize] = x.cochain_faces(a);
    for i in (0..=k).rev() {
        let upper = levels[(i + 1) as usize].clone();
        let threshold = hdx::fat::eta_power(eta, (k - i) as u32);
        let mut fat = Vec::new();
        for sigma in x.faces(i - 1) {
            let link = x.link(sigma).unwrap();
            let loc: Vec<Face> = upper
                .iter()
                .filter(|t| is_subset(sigma.vertices(), t.vertices()))
                .map(|t| t.difference(sigma))
                .collect();
            let c = link.cochain_from_faces(i - sigma.len() as i32, &loc).unwrap();
            if link.norm(&c).unwrap() >= threshold {
                fat.push(sigma.clone());
            }
        }
        levels[i as usize] = fat;
    }
    levels
}

/// `L(A, σ)`: members of `A` reachable from `σ` through fat faces of every
/// intermediate dimension.
pub fn ladder_oracle(levels: &[Vec<Face>], sigma: &Face, k: i32) -> Vec<Face> {
    let fat = |f: &Face| levels[f.len()].contains(f);
    if !fat(sigma) {
        return Vec::new();
    }
    fn reach(levels: &[Vec<Face>], from: &Face, to: &Face) -> bool {
        if from == to {
            return true;
        }
        to.vertices()
            .iter()
            .filter(|v| !from.contains_vertex(**v))
            .any(|&v| {
                let next = from.union(&Face::vertex(v));
                levels[next.len()].contains(&next) && reach(levels, &next, to)
            })
    }
    levels[(k + 1) as usize]
        .iter()
        .filter(|t| is_subset(sigma.vertices(), t.vertices()) && reach(levels, sigma, t))
        .cloned()
        .collect()
}

/// `(k+1)`-faces containing two fat faces of equal size whose intersection
/// is a non-fat face of codimension one.
pub fn upsilon_oracle(x: &Complex, levels: &[Vec<Face>], k: i32) -> Vec<Face> {
    let mut out = Vec::new();
    for p in x.faces(k + 1) {
        let inside: Vec<&Face> = levels.iter().flatten().filter(|f| !f.is_empty() && is_subset(f.vertices(), p.vertices())).collect();
        let degenerate = inside.iter().enumerate().any(|(i, s)| {
            inside[i + 1..].iter().any(|t| {
                if s.len() != t.len() {
                    return false;
                }
                let m = s.intersection(t);
                m.len() + 1 == s.len() && !levels[m.len()].contains(&m)
            })
        });
        if degenerate {
            out.push(p.clone());
        }
    }
    out
}

/// Cochains `A ⊂ X(k)` of `C^k` that are minimal in their coset, found by the
/// flat scan.
pub fn minimal_samples(x: &Complex, f: &Flat, rng: &mut TestRng, count: usize) -> Vec<Cochain> {
    (0..count)
        .map(|_| {
            let m = rng.gen_range(0..1usize << f.n);
            f.cochain(x, f.minimal_representative(m))
        })
        .collect()
}
