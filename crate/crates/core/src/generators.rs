//! Example complexes: complete complexes, complete partite complexes, cycles,
//! flag complexes of projective spaces over prime fields, and Linial–Meshulam
//! random complexes.

use std::sync::Arc;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, Face, VertexTable};
use crate::error::{HdxError, Result};
use crate::rational::binomial;
use crate::DEFAULT_CAP;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GenSpec {
    Complete { n: u64, d: u64 },
    CompletePartite { d: u64, m: u64 },
    Cycle { n: u64 },
    ProjectiveFlag { q: u64, n: u64 },
    LinialMeshulam { n: u64, d: u64, p_num: u64, p_den: u64, seed: u64 },
}

/// A generated complex, its vertex types when the construction provides them
/// (indexed by vertex id), and faces removed to make the output pure.
#[derive(Clone, Debug)]
pub struct Generated {
    pub complex: Complex,
    pub types: Option<Vec<usize>>,
    pub dropped: Vec<Vec<String>>,
}

impl Generated {
    fn plain(complex: Complex) -> Generated {
        Generated {
            complex,
            types: None,
            dropped: Vec::new(),
        }
    }
}

pub fn generate(spec: &GenSpec, cap: u64) -> Result<Generated> {
    match *spec {
        GenSpec::Complete { n, d } => complete_capped(n, d, cap).map(Generated::plain),
        GenSpec::CompletePartite { d, m } => partite(d, m, cap),
        GenSpec::Cycle { n } => cycle(n).map(Generated::plain),
        GenSpec::ProjectiveFlag { q, n } => flag(q, n, cap),
        GenSpec::LinialMeshulam {
            n,
            d,
            p_num,
            p_den,
            seed,
        } => lm(n, d, p_num, p_den, seed, cap),
    }
}

fn guard(what: &str, count: u128, cap: u64) -> Result<()> {
    if count > cap as u128 {
        return Err(HdxError::TooLarge {
            what: what.into(),
            required: count.to_string(),
            cap,
        });
    }
    Ok(())
}

fn numbered(n: u64) -> Arc<VertexTable> {
    Arc::new(VertexTable::from_labels((0..n).map(|i| i.to_string())))
}

/// Lexicographic `r`-subsets of `0..n`.
fn subsets(n: u32, r: usize, mut f: impl FnMut(&[u32])) {
    if r as u64 > n as u64 {
        return;
    }
    let mut c: Vec<u32> = (0..r as u32).collect();
    loop {
        f(&c);
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if c[i] < n - (r - i) as u32 {
                break;
            }
            if i == 0 {
                return;
            }
        }
        c[i] += 1;
        for j in i + 1..r {
            c[j] = c[j - 1] + 1;
        }
    }
}

/// All `(d+1)`-subsets of `n` vertices labelled `0..n`.
pub fn complete(n: u64, d: u64) -> Result<Complex> {
    complete_capped(n, d, DEFAULT_CAP)
}

fn complete_capped(n: u64, d: u64, cap: u64) -> Result<Complex> {
    if n <= d {
        return Err(HdxError::BadParam(format!("complete needs n > d, got n = {n}, d = {d}")));
    }
    guard("complete complex top faces", binomial(n, d + 1), cap)?;
    let table = numbered(n);
    let mut tops = Vec::new();
    subsets(n as u32, d as usize + 1, |s| tops.push(Face::new(s.to_vec())));
    Complex::from_faces(table, tops)
}

/// The complete `(d+1)`-partite `d`-complex with parts of size `m`.
pub fn complete_partite(d: u64, m: u64) -> Result<Complex> {
    Ok(partite(d, m, DEFAULT_CAP)?.complex)
}

fn partite(d: u64, m: u64, cap: u64) -> Result<Generated> {
    if m == 0 {
        return Err(HdxError::BadParam("complete_partite needs m >= 1".into()));
    }
    let count = (m as u128).checked_pow(d as u32 + 1).unwrap_or(u128::MAX);
    guard("complete partite top faces", count, cap)?;
    let parts = d as usize + 1;
    let label = |p: usize, j: u64| format!("v{p}_{j}");
    let table = Arc::new(VertexTable::from_labels(
        (0..parts).flat_map(|p| (0..m).map(move |j| label(p, j))),
    ));
    let ids: Vec<Vec<u32>> = (0..parts)
        .map(|p| (0..m).map(|j| table.id(&label(p, j)).unwrap()).collect())
        .collect();
    let mut types = vec![0; table.len()];
    for (p, vs) in ids.iter().enumerate() {
        for &v in vs {
            types[v as usize] = p;
        }
    }
    let mut tops = Vec::new();
    let mut pick = vec![0u64; parts];
    'outer: loop {
        tops.push(Face::new((0..parts).map(|p| ids[p][pick[p] as usize]).collect()));
        for p in (0..parts).rev() {
            pick[p] += 1;
            if pick[p] < m {
                continue 'outer;
            }
            pick[p] = 0;
        }
        break;
    }
    Ok(Generated {
        complex: Complex::from_faces(table, tops)?,
        types: Some(types),
        dropped: Vec::new(),
    })
}

/// The cycle `C_n` as a 1-complex.
pub fn cycle(n: u64) -> Result<Complex> {
    if n < 3 {
        return Err(HdxError::BadParam(format!("cycle needs n >= 3, got {n}")));
    }
    let table = numbered(n);
    let tops = (0..n as u32).map(|i| Face::new(vec![i, (i + 1) % n as u32])).collect();
    Complex::from_faces(table, tops)
}

pub fn is_prime(q: u64) -> bool {
    q >= 2 && (2..).take_while(|i| i * i <= q).all(|i| !q.is_multiple_of(i))
}

/// Reduced row echelon form over `F_q`; zero rows are dropped.
fn rref(mut rows: Vec<Vec<u64>>, q: u64) -> Vec<Vec<u64>> {
    let n = rows.first().map_or(0, Vec::len);
    let inv = |a: u64| {
        let mut r = 1u64;
        let (mut b, mut e) = (a % q, q - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % q;
            }
            b = b * b % q;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let s = inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = *x * s % q;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..n {
                    rows[r][c] = (rows[r][c] + q - f * rows[rank][c] % q) % q;
                }
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Every `k`-dimensional subspace of `F_q^n`, as RREF matrices.
fn subspaces(q: u64, n: usize, k: usize) -> Vec<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    subsets(n as u32, k, |pivots| {
        // free entries: row r, column c > pivot r, c not a pivot
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                ((pivots[r] as usize + 1)..n)
                    .filter(|c| !pivots.contains(&(*c as u32)))
                    .map(move |c| (r, c))
            })
            .collect();
        let total = q.pow(free.len() as u32);
        for mut code in 0..total {
            let mut m = vec![vec![0u64; n]; k];
            for (r, &p) in pivots.iter().enumerate() {
                m[r][p as usize] = 1;
            }
            for &(r, c) in &free {
                m[r][c] = code % q;
                code /= q;
            }
            out.push(m);
        }
    });
    out
}

fn flag_label(q: u64, m: &[Vec<u64>]) -> String {
    let sep = if q <= 10 { "" } else { "," };
    let rows: Vec<String> = m
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(sep))
        .collect();
    format!("{}:{}", m.len(), rows.join("."))
}

/// The flag complex of `F_q^n`: proper nonzero subspaces, faces are chains.
pub fn projective_flag(q: u64, n: u64) -> Result<Complex> {
    Ok(flag(q, n, DEFAULT_CAP)?.complex)
}

fn flag(q: u64, n: u64, cap: u64) -> Result<Generated> {
    if !is_prime(q) {
        return Err(HdxError::NotPrime(q));
    }
    if n < 2 {
        return Err(HdxError::BadParam(format!("projective_flag needs n >= 2, got {n}")));
    }
    let size = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    guard("projective_flag vector enumeration q^n", size, cap)?;
    let n = n as usize;
    let by_dim: Vec<Vec<Vec<Vec<u64>>>> = (0..n).map(|k| if k == 0 { Vec::new() } else { subspaces(q, n, k) }).collect();
    let labels: Vec<Vec<String>> = by_dim.iter().map(|l| l.iter().map(|m| flag_label(q, m)).collect()).collect();
    let table = Arc::new(VertexTable::from_labels(labels.iter().flatten().cloned()));
    let ids: Vec<Vec<u32>> = labels
        .iter()
        .map(|l| l.iter().map(|s| table.id(s).unwrap()).collect())
        .collect();
    let mut types = vec![0; table.len()];
    for (k, vs) in ids.iter().enumerate() {
        for &v in vs {
            types[v as usize] = k - 1;
        }
    }
    // up[k][i]: indices of (k+1)-subspaces containing the i-th k-subspace
    let mut up: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
    for k in 1..n.saturating_sub(1) {
        up[k] = vec![Vec::new(); by_dim[k].len()];
        for (j, big) in by_dim[k + 1].iter().enumerate() {
            for (i, small) in by_dim[k].iter().enumerate() {
                let mut stacked = big.clone();
                stacked.extend(small.iter().cloned());
                if rref(stacked, q).len() == k + 1 {
                    up[k][i].push(j);
                }
            }
        }
    }
    let mut tops = Vec::new();
    let mut chain = Vec::with_capacity(n - 1);
    fn extend(k: usize, i: usize, n: usize, up: &[Vec<Vec<usize>>], ids: &[Vec<u32>], chain: &mut Vec<u32>, tops: &mut Vec<Face>) {
        chain.push(ids[k][i]);
        if k == n - 1 {
            tops.push(Face::new(chain.clone()));
        } else {
            for &j in &up[k][i] {
                extend(k + 1, j, n, up, ids, chain, tops);
            }
        }
        chain.pop();
    }
    for i in 0..by_dim[1].len() {
        extend(1, i, n, &up, &ids, &mut chain, &mut tops);
    }
    Ok(Generated {
        complex: Complex::from_faces(table, tops)?,
        types: Some(types),
        dropped: Vec::new(),
    })
}

/// Linial–Meshulam `Y_d(n, p)` with `p = p_num / p_den`.
///
/// The `d`-subsets of `0..n` are visited in lexicographic order; each draws
/// one SplitMix64 output `x` (seeded with `seed`) and is kept iff
/// `floor(x · p_den / 2^64) < p_num`. The result is the downward closure of
/// the kept `d`-faces; lower faces of the full `(d-1)`-skeleton that lose
/// every top face are listed in `dropped`.
pub fn linial_meshulam(n: u64, d: u64, p_num: u64, p_den: u64, seed: u64) -> Result<Generated> {
    lm(n, d, p_num, p_den, seed, DEFAULT_CAP)
}

fn lm(n: u64, d: u64, p_num: u64, p_den: u64, seed: u64, cap: u64) -> Result<Generated> {
    if d == 0 || n <= d {
        return Err(HdxError::BadParam(format!("linial_meshulam needs 1 <= d < n, got n = {n}, d = {d}")));
    }
    if p_den == 0 || p_num > p_den {
        return Err(HdxError::BadParam(format!("probability {p_num}/{p_den} outside [0, 1]")));
    }
    guard("linial_meshulam candidate faces", binomial(n, d + 1), cap)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut kept = Vec::new();
    subsets(n as u32, d as usize + 1, |s| {
        let x = rng.next_u64();
        if ((x as u128 * p_den as u128) >> 64) < p_num as u128 {
            kept.push(Face::new(s.to_vec()));
        }
    });
    if kept.is_empty() {
        return Err(HdxError::BadParam("no d-faces survived; the pure part is empty".into()));
    }
    let full = numbered(n);
    let complex = Complex::from_faces(full.clone(), kept.clone())?;
    let mut dropped = Vec::new();
    for r in 1..=d as usize {
        subsets(n as u32, r, |s| {
            let f = Face::new(s.to_vec());
            if !complex.contains_face(&f) {
                dropped.push(s.iter().map(|v| v.to_string()).collect());
            }
        });
    }
    // relabel over the surviving vertices only
    let labeled: Vec<Vec<String>> = kept
        .iter()
        .map(|f| f.vertices().iter().map(|v| full.label(*v).to_string()).collect())
        .collect();
    Ok(Generated {
        complex: Complex::from_labeled_faces(&labeled)?,
        types: None,
        dropped,
    })
}
