//! Type-induced bipartite graphs, normalized non-trivial eigenvalues, the
//! one-sided mixing inequality and skeleton-expansion constants.

mod jacobi;
mod regular;

pub use jacobi::{symmetric_eigen, Eigen};
pub use regular::{infer_typing, regularity, Regularity, RegularEntry, RegularStructure, RegularityViolation, Typing};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{Complex, Face, VertexId};
use crate::error::{HdxError, Result};
use crate::rational::{to_f64, Rat};

/// Slack used when comparing an exact left side with a floating right side.
pub const MIX_SLACK: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct BipartiteTypeGraph {
    pub i: usize,
    pub j: usize,
    pub left: Vec<VertexId>,
    pub right: Vec<VertexId>,
    /// Positions into `left` and `right`.
    pub edges: Vec<(usize, usize)>,
    pub degrees: (usize, usize),
}

pub fn type_graph(x: &Complex, r: &RegularStructure, i: usize, j: usize) -> Result<BipartiteTypeGraph> {
    let side = |t: usize| -> Vec<VertexId> {
        x.vertex_ids().into_iter().filter(|&v| r.typing.get(v) == Some(t)).collect()
    };
    let (left, right) = (side(i), side(j));
    let mut edges = Vec::new();
    if x.dim() >= 1 {
        for e in x.faces(1) {
            let (u, v) = (e.vertices()[0], e.vertices()[1]);
            let (u, v) = if r.typing.get(u) == Some(i) && r.typing.get(v) == Some(j) {
                (u, v)
            } else if r.typing.get(v) == Some(i) && r.typing.get(u) == Some(j) {
                (v, u)
            } else {
                continue;
            };
            edges.push((left.binary_search(&u).unwrap(), right.binary_search(&v).unwrap()));
        }
    }
    let mut dl = vec![0usize; left.len()];
    let mut dr = vec![0usize; right.len()];
    for &(a, b) in &edges {
        dl[a] += 1;
        dr[b] += 1;
    }
    let k = dl.first().copied().unwrap_or(0);
    let kk = dr.first().copied().unwrap_or(0);
    if dl.iter().any(|&c| c != k) || dr.iter().any(|&c| c != kk) || k == 0 {
        return Err(HdxError::NotBiregular(i, j));
    }
    Ok(BipartiteTypeGraph {
        i,
        j,
        left,
        right,
        edges,
        degrees: (k, kk),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub pair: [usize; 2],
    pub lambda2_norm: f64,
    pub lambda1: f64,
    pub expected_lambda1: f64,
    pub residual: f64,
    /// The top eigenvalue is repeated, so the graph is disconnected.
    pub disconnected: bool,
}

/// Normalized second largest eigenvalue `max(λ_2, 0) / λ_1` of the adjacency
/// matrix.
pub fn lambda2(g: &BipartiteTypeGraph) -> SpectralReport {
    let nl = g.left.len();
    let n = nl + g.right.len();
    let mut m = vec![vec![0.0; n]; n];
    for &(a, b) in &g.edges {
        m[a][nl + b] = 1.0;
        m[nl + b][a] = 1.0;
    }
    let e = symmetric_eigen(&m);
    let l1 = e.values[0];
    let l2 = e.values.get(1).copied().unwrap_or(0.0);
    SpectralReport {
        pair: [g.i, g.j],
        lambda2_norm: l2.max(0.0) / l1,
        lambda1: l1,
        expected_lambda1: ((g.degrees.0 * g.degrees.1) as f64).sqrt(),
        residual: e.residual(&m),
        disconnected: (l1 - l2).abs() < 1e-9,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub lambda: f64,
    pub pairs: Vec<SpectralReport>,
}

/// `λ(X) = max_{i<j} λ(X_(i,j))`; zero for a 0-dimensional complex.
pub fn lambda_max(x: &Complex, r: &RegularStructure) -> Result<LambdaReport> {
    let d = x.dim();
    let pairs: Vec<(usize, usize)> = (0..=d).flat_map(|i| (i + 1..=d).map(move |j| (i, j))).collect();
    let reports: Vec<SpectralReport> = pairs
        .par_iter()
        .map(|&(i, j)| type_graph(x, r, i, j).map(|g| lambda2(&g)))
        .collect::<Result<_>>()?;
    Ok(LambdaReport {
        lambda: reports.iter().map(|s| s.lambda2_norm).fold(0.0, f64::max),
        pairs: reports,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Marginal,
    Fail,
}

fn verdict(lhs: f64, rhs: f64) -> Verdict {
    if lhs <= rhs {
        Verdict::Pass
    } else if lhs <= rhs + MIX_SLACK {
        Verdict::Marginal
    } else {
        Verdict::Fail
    }
}

fn mixing_rhs(d: usize, a: f64, b: f64, lambda: f64) -> f64 {
    2.0 * (d as f64 + 1.0) / d as f64 * (a * b + lambda * (a * b).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    #[serde(with = "crate::rational::serde_rat")]
    pub lhs: Rat,
    pub rhs: f64,
    pub lambda: f64,
    pub verdict: Verdict,
}

/// `‖E(A,B)‖ ≤ 2((d+1)/d)·(‖A‖·‖B‖ + λ·√(‖A‖·‖B‖))`.
pub fn mixing_check(x: &Complex, lambda: f64, a: &[VertexId], b: &[VertexId]) -> Result<MixingReport> {
    let e = x.edges_between(a, b)?;
    let na = x.norm(&x.cochain_from_faces(0, &a.iter().map(|&v| Face::vertex(v)).collect::<Vec<_>>())?)?;
    let nb = x.norm(&x.cochain_from_faces(0, &b.iter().map(|&v| Face::vertex(v)).collect::<Vec<_>>())?)?;
    let lhs = x.norm(&e)?;
    let rhs = mixing_rhs(x.dim(), to_f64(&na), to_f64(&nb), lambda);
    Ok(MixingReport {
        verdict: verdict(to_f64(&lhs), rhs),
        lhs,
        rhs,
        lambda,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveMixing {
    pub lambda: f64,
    pub pairs: u64,
    pub pass: u64,
    pub marginal: u64,
    pub fail: u64,
    /// Largest `lhs - rhs` seen and the vertex sets attaining it.
    pub worst_gap: f64,
    pub worst: (Vec<String>, Vec<String>),
}

struct Graph {
    n: usize,
    /// `(neighbour position, edge id)` per vertex position.
    adj: Vec<Vec<(usize, usize)>>,
    ew: Vec<u64>,
    vw: Vec<u64>,
    d0: u128,
    d1: u128,
    vertices: Vec<VertexId>,
}

impl Graph {
    fn of(x: &Complex) -> Graph {
        let vertices = x.vertex_ids();
        let n = vertices.len();
        let mut adj = vec![Vec::new(); n];
        let mut ew = Vec::new();
        if x.dim() >= 1 {
            for (i, e) in x.faces(1).iter().enumerate() {
                let u = vertices.binary_search(&e.vertices()[0]).unwrap();
                let v = vertices.binary_search(&e.vertices()[1]).unwrap();
                adj[u].push((v, i));
                adj[v].push((u, i));
                ew.push(x.top_count(1, i));
            }
        }
        Graph {
            n,
            adj,
            ew,
            vw: x.top_counts(0).to_vec(),
            d0: x.weight_denominator(0),
            d1: if x.dim() >= 1 { x.weight_denominator(1) } else { 1 },
            vertices,
        }
    }

    fn labels(&self, x: &Complex, mask: u64) -> Vec<String> {
        (0..self.n).filter(|i| mask >> i & 1 == 1).map(|i| x.label(self.vertices[i]).to_string()).collect()
    }
}

/// Checks the mixing inequality for every pair `(A, B)` of vertex sets.
pub fn mixing_exhaustive(x: &Complex, lambda: f64, cap: u64) -> Result<ExhaustiveMixing> {
    let g = Graph::of(x);
    crate::cohomology::check_cap("exhaustive mixing over vertex-set pairs", 2 * g.n, cap)?;
    let total = 1u64 << g.n;
    let d = x.dim().max(1);
    let (d0, d1) = (g.d0 as f64, g.d1 as f64);
    let per_a: Vec<(u64, u64, u64, f64, u64, u64)> = (0..total)
        .into_par_iter()
        .map(|amask| {
            let ma: u64 = (0..g.n).filter(|i| amask >> i & 1 == 1).map(|i| g.vw[i]).sum();
            let na = ma as f64 / d0;
            let (mut pass, mut marg, mut fail) = (0u64, 0u64, 0u64);
            let mut worst = f64::NEG_INFINITY;
            let mut worst_b = 0u64;
            // cover[e] counts the orientations of edge e running from A into B
            let mut cover = vec![0u8; g.ew.len()];
            let (mut bmask, mut mb, mut emass) = (0u64, 0u64, 0u64);
            for t in 0..total {
                if t > 0 {
                    let v = t.trailing_zeros() as usize;
                    let adding = bmask >> v & 1 == 0;
                    bmask ^= 1 << v;
                    if adding {
                        mb += g.vw[v];
                    } else {
                        mb -= g.vw[v];
                    }
                    for &(u, e) in &g.adj[v] {
                        if amask >> u & 1 == 0 {
                            continue;
                        }
                        if adding {
                            cover[e] += 1;
                            if cover[e] == 1 {
                                emass += g.ew[e];
                            }
                        } else {
                            cover[e] -= 1;
                            if cover[e] == 0 {
                                emass -= g.ew[e];
                            }
                        }
                    }
                }
                let lhs = emass as f64 / d1;
                let rhs = mixing_rhs(d, na, mb as f64 / d0, lambda);
                match verdict(lhs, rhs) {
                    Verdict::Pass => pass += 1,
                    Verdict::Marginal => marg += 1,
                    Verdict::Fail => fail += 1,
                }
                if lhs - rhs > worst {
                    worst = lhs - rhs;
                    worst_b = bmask;
                }
            }
            (pass, marg, fail, worst, amask, worst_b)
        })
        .collect();
    let mut out = ExhaustiveMixing {
        lambda,
        pairs: total * total,
        pass: 0,
        marginal: 0,
        fail: 0,
        worst_gap: f64::NEG_INFINITY,
        worst: (Vec::new(), Vec::new()),
    };
    let mut wa = (0, 0);
    for (p, m, f, w, a, b) in per_a {
        out.pass += p;
        out.marginal += m;
        out.fail += f;
        if w > out.worst_gap {
            out.worst_gap = w;
            wa = (a, b);
        }
    }
    out.worst = (g.labels(x, wa.0), g.labels(x, wa.1));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaMode {
    Exhaustive,
    Spectral,
}

impl std::str::FromStr for AlphaMode {
    type Err = HdxError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(AlphaMode::Exhaustive),
            "spectral" => Ok(AlphaMode::Spectral),
            _ => Err(HdxError::BadParam(format!("unknown alpha mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaReport {
    pub mode: AlphaMode,
    pub alpha: f64,
    /// Exact `α*` in exhaustive mode.
    #[serde(serialize_with = "crate::cohomology::ser_opt_rat")]
    pub exact: Option<Rat>,
    /// A vertex set attaining `α*`, empty when `α* = 0`.
    pub witness: Option<Vec<String>>,
}

/// Default limit for exhaustive `α*`: `2^20` vertex subsets.
pub const ALPHA_CAP: u64 = 1 << 20;

/// Least `α ≥ 0` with `‖E(A,A)‖ ≤ 4(‖A‖² + α‖A‖)` for every vertex set `A`.
pub fn exact_alpha(x: &Complex, cap: u64) -> Result<(Rat, u64)> {
    let g = Graph::of(x);
    crate::cohomology::check_cap("exhaustive skeleton alpha over vertex subsets", g.n, cap)?;
    let (d0, d1) = (g.d0 as i128, g.d1 as i128);
    // value(A) = (e·D0² − 4·D1·a²) / (4·D1·D0·a) with a, e the vertex and edge masses
    let mut best: (i128, i128) = (0, 1);
    let mut best_mask = 0u64;
    let better = |num: i128, den: i128, best: &(i128, i128)| -> bool {
        match (num.checked_mul(best.1), best.0.checked_mul(den)) {
            (Some(l), Some(r)) => l > r,
            _ => Rat::new(num.into(), den.into()) > Rat::new(best.0.into(), best.1.into()),
        }
    };
    let (mut mask, mut a, mut e) = (0u64, 0i128, 0i128);
    for t in 1..(1u64 << g.n) {
        let v = t.trailing_zeros() as usize;
        let adding = mask >> v & 1 == 0;
        mask ^= 1 << v;
        let sign = if adding { 1 } else { -1 };
        a += sign * g.vw[v] as i128;
        for &(u, id) in &g.adj[v] {
            if mask >> u & 1 == 1 {
                e += sign * g.ew[id] as i128;
            }
        }
        if a == 0 {
            continue;
        }
        let num = e * d0 * d0 - 4 * d1 * a * a;
        let den = 4 * d1 * d0 * a;
        if num > 0 && better(num, den, &best) {
            best = (num, den);
            best_mask = mask;
        }
    }
    Ok((Rat::new(best.0.into(), best.1.into()), best_mask))
}

pub fn skeleton_alpha(x: &Complex, mode: AlphaMode, typing: Option<&Typing>, cap: u64) -> Result<AlphaReport> {
    match mode {
        AlphaMode::Exhaustive => {
            let (alpha, mask) = exact_alpha(x, cap)?;
            let g = Graph::of(x);
            Ok(AlphaReport {
                mode,
                alpha: to_f64(&alpha),
                exact: Some(alpha),
                witness: Some(g.labels(x, mask)),
            })
        }
        AlphaMode::Spectral => {
            let r = regularity(x, typing)?.structure()?;
            Ok(AlphaReport {
                mode,
                alpha: lambda_max(x, &r)?.lambda,
                exact: None,
                witness: None,
            })
        }
    }
}

/// Exact `α*` of `X_σ` for every face with `0 ≤ |σ| ≤ d-1`; `σ = ∅` is `X`.
pub fn link_alphas(x: &Complex, cap: u64) -> Result<Vec<(Face, Rat)>> {
    let mut faces = Vec::new();
    for k in -1..x.dim() as i32 - 1 {
        faces.extend(x.faces(k).iter().cloned());
    }
    faces
        .par_iter()
        .map(|f| {
            let alpha = if f.is_empty() {
                exact_alpha(x, cap)?.0
            } else {
                exact_alpha(x.link(f)?.complex(), cap)?.0
            };
            Ok((f.clone(), alpha))
        })
        .collect()
}
