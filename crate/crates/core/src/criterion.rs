//! Constants of the cosystolic expansion criterion and an end-to-end check of
//! its hypotheses and conclusions on a concrete complex.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cochain::Cochain;
use crate::cohomology::{coboundary, cosystole, expansion, ExpansionMode};
use crate::complex::{Complex, Face};
use crate::error::{HdxError, Result};
use crate::minimize::is_locally_minimal;
use crate::rational::{int, log2, pow, rat_u, to_f64, Extended, Rat, RatJson};
use crate::spectral::link_alphas;

/// Exact rational with its base-2 logarithm, for values too small for f64.
#[derive(Clone, Debug)]
pub struct Tiny(pub Rat);

impl Serialize for Tiny {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Tiny", 3)?;
        st.serialize_field("exact", &RatJson(&self.0))?;
        st.serialize_field("log2", &if self.0.is_zero() { f64::NEG_INFINITY } else { log2(&self.0) })?;
        st.serialize_field("approx", &to_f64(&self.0))?;
        st.end()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    pub d: u32,
    #[serde(with = "crate::rational::serde_rat")]
    pub beta: Rat,
    #[serde(rename = "Q")]
    pub q_degree: u64,
    pub q: Option<u64>,
    pub c0: Tiny,
    pub mu_bar: Tiny,
    pub eps_bar: Tiny,
    pub mu: Tiny,
    pub eps: Tiny,
    /// `μ^(1 + 1/2^(d+1))`. Since `μ` is a `2^(d+1)`-th power this is the
    /// rational `base^(2^(d+1) + 1)`.
    pub alpha: Tiny,
    pub alpha_exponent: [u64; 2],
    pub theta_d: String,
    pub log2_q_dq: Option<f64>,
    pub ramanujan_lambda_bound: Option<f64>,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `θ_d = max(2^d·(d+1)!, 192·11!)`.
pub fn theta(d: u32) -> BigInt {
    let a = (BigInt::one() << d) * factorial(d as u64 + 1);
    let b = BigInt::from(192) * factorial(11);
    a.max(b)
}

/// `(c0, base)` with `c0 = β/((d+2)·2^(d+2))` and
/// `base = c0^d / (3(d+2)·2^(d+3))`, so that `μ = base^(2^(d+1))`.
fn bases(d: u32, beta: &Rat) -> (Rat, Rat) {
    let c0 = beta / int((d as u128 + 2) << (d + 2));
    let base = pow(&c0, d as i64) / int(3 * ((d as u128 + 2) << (d + 3)));
    (c0, base)
}

pub fn constants(d: u32, beta: &Rat, q_degree: u64, q: Option<u64>) -> Result<ConstantsReport> {
    if d < 1 {
        return Err(HdxError::BadParam("constants need d >= 1".into()));
    }
    if beta <= &Rat::zero() {
        return Err(HdxError::BadParam(format!("beta must be positive, got {beta}")));
    }
    if q_degree < 1 {
        return Err(HdxError::BadParam("Q must be at least 1".into()));
    }
    if let Some(q) = q {
        if q < 2 {
            return Err(HdxError::BadParam(format!("q must be at least 2, got {q}")));
        }
    }
    let (c0, base) = bases(d, beta);
    let e = 1i64 << (d + 1);
    let mu = pow(&base, e);
    let eps_bar = pow(&c0, d as i64) / int(3);
    let inv_q = rat_u(1, q_degree as u128);
    let eps = if inv_q < mu { inv_q } else { mu.clone() };
    let alpha = pow(&base, e + 1);
    let th = theta(d);
    Ok(ConstantsReport {
        d,
        beta: beta.clone(),
        q_degree,
        q,
        c0: Tiny(c0),
        mu_bar: Tiny(mu.clone()),
        eps_bar: Tiny(eps_bar),
        mu: Tiny(mu),
        eps: Tiny(eps),
        alpha: Tiny(alpha),
        alpha_exponent: [e as u64 + 1, e as u64],
        theta_d: th.to_string(),
        log2_q_dq: q.map(|q| {
            let t: f64 = th.to_string().parse().unwrap();
            t * (((d as f64) + 1.0) * (q as f64 + 1.0)).log2()
        }),
        ramanujan_lambda_bound: q.map(|q| 2f64.powi(d as i32) * (q as f64).powf(-(d as f64 - 1.0) / 2.0)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkBeta {
    pub sigma: Vec<String>,
    pub k: i32,
    pub value: Extended,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkAlpha {
    pub sigma: Vec<String>,
    #[serde(with = "crate::rational::serde_rat")]
    pub alpha: Rat,
    pub meets_required: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConclusionRow {
    pub k: i32,
    pub value: Extended,
    pub required: Tiny,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoRow {
    pub k: i32,
    /// Cochains with `‖A‖ ≤ μ̄` that were enumerated.
    pub small_cochains: u64,
    pub locally_minimal: u64,
    pub violations: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Conclusions {
    /// Cocycle expansion is promised for `0 ≤ k ≤ d-2`, the systole bound
    /// for `0 ≤ r ≤ d-1`.
    pub expansion: Vec<ConclusionRow>,
    pub systole: Vec<ConclusionRow>,
    pub isoperimetric: Vec<IsoRow>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub d: usize,
    #[serde(rename = "Q")]
    pub q_degree: u64,
    pub beta_star: Extended,
    pub beta_witness: Option<LinkBeta>,
    pub link_betas: Vec<LinkBeta>,
    #[serde(with = "crate::rational::serde_rat")]
    pub beta_used: Rat,
    pub link_alphas: Vec<LinkAlpha>,
    #[serde(with = "crate::rational::serde_rat")]
    pub alpha_star_max: Rat,
    pub constants: Option<ConstantsReport>,
    pub hypotheses_met: bool,
    pub verdict: String,
    pub notes: Vec<String>,
    pub conclusions: Option<Conclusions>,
}

fn context(what: &str) -> impl Fn(HdxError) -> HdxError + '_ {
    move |e| match e {
        HdxError::TooLarge { what: w, required, cap } => HdxError::TooLarge {
            what: format!("{what}: {w}"),
            required,
            cap,
        },
        other => other,
    }
}

/// Every `A ∈ C^k` with mass at most `budget`, in index order.
fn small_cochains(x: &Complex, k: i32, budget: u64, cap: u64, mut visit: impl FnMut(&Cochain) -> Result<()>) -> Result<u64> {
    let w = x.top_counts(k);
    let mut a = x.empty_cochain(k);
    let mut seen = 0u64;
    fn rec(
        i: usize,
        left: u64,
        w: &[u64],
        a: &mut Cochain,
        seen: &mut u64,
        cap: u64,
        visit: &mut dyn FnMut(&Cochain) -> Result<()>,
    ) -> Result<()> {
        *seen += 1;
        if *seen > cap {
            return Err(HdxError::TooLarge {
                what: "small cochain enumeration".into(),
                required: format!("more than {cap}"),
                cap,
            });
        }
        visit(a)?;
        for j in i..w.len() {
            if w[j] <= left {
                a.insert(j);
                rec(j + 1, left - w[j], w, a, seen, cap, visit)?;
                a.remove(j);
            }
        }
        Ok(())
    }
    rec(0, budget, w, &mut a, &mut seen, cap, &mut visit)?;
    Ok(seen)
}

/// Measures the criterion's hypotheses on `X` and, only when they hold,
/// verifies its conclusions by brute force.
pub fn criterion_report(x: &Complex, cap: u64, alpha_cap: u64) -> Result<CriterionReport> {
    let d = x.dim();
    if d < 1 {
        return Err(HdxError::BadDimension("criterion needs d >= 1".into()));
    }
    let q_degree = x.max_vertex_link_size() as u64;

    // (b) coboundary expansion of proper links, 1 <= |σ| <= d-1
    let mut jobs: Vec<(Face, i32)> = Vec::new();
    for s in 0..d as i32 - 1 {
        for f in x.faces(s) {
            let link_dim = d as i32 - f.len() as i32;
            for k in 0..link_dim {
                jobs.push((f.clone(), k));
            }
        }
    }
    let link_betas: Vec<LinkBeta> = jobs
        .par_iter()
        .map(|(f, k)| {
            let link = x.link(f)?;
            let r = expansion(&link, *k, ExpansionMode::Coboundary, cap).map_err(context("link coboundary expansion"))?;
            Ok(LinkBeta {
                sigma: x.face_labels(f),
                k: *k,
                value: r.value,
            })
        })
        .collect::<Result<_>>()?;
    let beta_witness = link_betas.iter().min_by(|a, b| a.value.cmp(&b.value)).cloned();
    let beta_star = beta_witness.as_ref().map_or(Extended::Infinite, |w| w.value.clone());
    let beta_used = match &beta_star {
        Extended::Finite(b) if b < &Rat::one() => b.clone(),
        _ => Rat::one(),
    };

    // (c) skeleton expansion of X and every link with |σ| <= d-1
    let alphas = link_alphas(x, alpha_cap).map_err(context("skeleton alpha"))?;
    let alpha_star_max = alphas.iter().map(|(_, a)| a.clone()).max().unwrap_or_else(Rat::zero);

    let mut notes = Vec::new();
    let constants = if beta_star.is_positive() {
        Some(constants(d as u32, &beta_used, q_degree.max(1), None)?)
    } else {
        notes.push("a proper link has vanishing coboundary expansion; no beta > 0 is available".into());
        None
    };
    if beta_star.is_infinite() {
        notes.push("no proper links with 1 <= |sigma| <= d-1; the coboundary hypothesis is vacuous".into());
    }
    notes.push("beta_used = min(beta*, 1)".into());
    notes.push("conclusions cover Exp_z^k for 0 <= k <= d-2 and Syst^r for 0 <= r <= d-1".into());

    let required_alpha = constants.as_ref().map(|c| c.alpha.0.clone());
    let link_alphas: Vec<LinkAlpha> = alphas
        .iter()
        .map(|(f, a)| LinkAlpha {
            sigma: x.face_labels(f),
            alpha: a.clone(),
            meets_required: required_alpha.as_ref().is_some_and(|r| a <= r),
        })
        .collect();
    let hypotheses_met = constants.is_some() && link_alphas.iter().all(|l| l.meets_required);

    let conclusions = if hypotheses_met {
        let c = constants.as_ref().unwrap();
        let expansion_rows: Vec<ConclusionRow> = (0..d as i32 - 1)
            .map(|k| {
                let r = expansion(x, k, ExpansionMode::Cocycle, cap).map_err(context("cocycle expansion of X"))?;
                Ok(ConclusionRow {
                    k,
                    pass: r.value >= Extended::Finite(c.eps.0.clone()),
                    value: r.value,
                    required: c.eps.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let systole_rows: Vec<ConclusionRow> = (0..d as i32)
            .map(|r| {
                let s = cosystole(x, r, cap).map_err(context("cosystole of X"))?;
                Ok(ConclusionRow {
                    k: r,
                    pass: s.value >= Extended::Finite(c.mu.0.clone()),
                    value: s.value,
                    required: c.mu.clone(),
                })
            })
            .collect::<Result<_>>()?;
        let mut iso_rows = Vec::new();
        for k in 0..d as i32 {
            // mass ≤ μ̄·D_k
            let bound = &c.mu_bar.0 * int(x.weight_denominator(k));
            let budget = (bound.numer() / bound.denom()).try_into().unwrap_or(u64::MAX);
            let (mut lm, mut bad) = (0u64, 0u64);
            let n = small_cochains(x, k, budget, cap, |a| {
                if is_locally_minimal(x, a, cap)? {
                    lm += 1;
                    let lhs = x.norm(&coboundary(x, a)?)?;
                    if lhs < &c.eps_bar.0 * x.norm(a)? {
                        bad += 1;
                    }
                }
                Ok(())
            })
            .map_err(context("isoperimetric scan"))?;
            iso_rows.push(IsoRow {
                k,
                small_cochains: n,
                locally_minimal: lm,
                violations: bad,
                pass: bad == 0,
            });
        }
        let pass = expansion_rows.iter().all(|r| r.pass) && systole_rows.iter().all(|r| r.pass) && iso_rows.iter().all(|r| r.pass);
        Some(Conclusions {
            expansion: expansion_rows,
            systole: systole_rows,
            isoperimetric: iso_rows,
            pass,
        })
    } else {
        None
    };
    let verdict = if hypotheses_met {
        "hypotheses met".to_string()
    } else {
        "hypotheses unmet; theorem silent".to_string()
    };
    Ok(CriterionReport {
        d,
        q_degree,
        beta_star,
        beta_witness,
        link_betas,
        beta_used,
        link_alphas,
        alpha_star_max,
        constants,
        hypotheses_met,
        verdict,
        notes,
        conclusions,
    })
}
