//! Fat faces, fat ladders and degenerate faces of a cochain, plus exact
//! evaluation of the two inequalities that drive the isoperimetric bound.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::cochain::Cochain;
use crate::cohomology::coboundary;
use crate::complex::{Complex, Face};
use crate::error::{HdxError, Result};
use crate::minimize::is_locally_minimal;
use crate::rational::{binomial, int, pow, Rat, RatJson};

#[derive(Clone, Debug)]
pub struct FatProfile {
    pub k: i32,
    pub eta: Rat,
    /// `fat[i + 1]` is `S^i` for `i = -1..=k`.
    pub fat: Vec<Cochain>,
    /// `ladders[i + 1]` is `L(A, i)` for `i = -1..=k`.
    pub ladders: Vec<Cochain>,
    pub upsilon: Cochain,
}

impl FatProfile {
    pub fn fat_faces(&self, i: i32) -> &Cochain {
        &self.fat[(i + 1) as usize]
    }

    pub fn ladder(&self, i: i32) -> &Cochain {
        &self.ladders[(i + 1) as usize]
    }

    pub fn to_json(&self, x: &Complex) -> serde_json::Value {
        let norm = |c: &Cochain| serde_json::to_value(RatJson(&x.norm(c).unwrap())).unwrap();
        let level = |cs: &[Cochain]| -> Vec<serde_json::Value> {
            cs.iter()
                .enumerate()
                .map(|(j, c)| {
                    serde_json::json!({
                        "i": j as i32 - 1,
                        "members": c.to_indices(),
                        "norm": norm(c),
                    })
                })
                .collect()
        };
        serde_json::json!({
            "k": self.k,
            "eta": RatJson(&self.eta),
            "fat": level(&self.fat),
            "ladders": level(&self.ladders),
            "upsilon": {"members": self.upsilon.to_indices(), "norm": norm(&self.upsilon)},
        })
    }
}

fn check_eta(eta: &Rat) -> Result<()> {
    if eta <= &Rat::zero() || eta >= &Rat::one() {
        return Err(HdxError::BadEta(eta.to_string()));
    }
    Ok(())
}

/// `η^(2^e)`.
pub fn eta_power(eta: &Rat, e: u32) -> Rat {
    pow(eta, 1i64 << e)
}

pub fn fat_profile(x: &Complex, a: &Cochain, eta: &Rat) -> Result<FatProfile> {
    x.check_cochain(a)?;
    check_eta(eta)?;
    let k = a.dim();
    let d = x.dim() as i32;
    if k < 0 || k > d - 1 {
        return Err(HdxError::BadDimension(format!("fat profile needs 0 <= k <= d-1 = {}, got {k}", d - 1)));
    }
    // fat[i+1] for i = k down to -1
    let mut fat = vec![x.empty_cochain(-1); (k + 2) as usize];
    fat[(k + 1) as usize] = a.clone();
    for i in (0..=k).rev() {
        let thr = eta_power(eta, (k - i) as u32);
        let upper = &fat[(i + 1) as usize];
        // Σ tc(τ) over fat i-faces τ ⊃ σ, per (i-1)-face σ
        let mut sums = vec![0u64; x.num_faces(i - 1)];
        for t in upper.members() {
            for &s in x.facets(i, t) {
                sums[s] += x.top_count(i, t);
            }
        }
        let mut below = x.empty_cochain(i - 1);
        for (s, &sum) in sums.iter().enumerate() {
            if sum == 0 {
                continue;
            }
            let den = (d - i + 1) as u128 * x.top_count(i - 1, s) as u128;
            if int(sum as u128) >= &thr * int(den) {
                below.insert(s);
            }
        }
        fat[i as usize] = below;
    }
    let ladders = (-1..=k).map(|i| climb(x, &fat, fat[(i + 1) as usize].clone())).collect();
    let upsilon = degenerate(x, &fat, k)?;
    Ok(FatProfile {
        k,
        eta: eta.clone(),
        fat,
        ladders,
        upsilon,
    })
}

/// Faces of `A` reachable from `start` by chains of fat faces growing one
/// vertex at a time.
fn climb(x: &Complex, fat: &[Cochain], start: Cochain) -> Cochain {
    let k = fat.len() as i32 - 2;
    let mut cur = start;
    for j in cur.dim()..k {
        let mut next = x.empty_cochain(j + 1);
        for s in cur.members() {
            for &t in x.cofacets(j, s) {
                if fat[(j + 2) as usize].contains(t) {
                    next.insert(t);
                }
            }
        }
        cur = next;
    }
    cur
}

/// `L_η(A, σ)` for a fat face `σ`; empty when `σ` is not fat.
pub fn ladder_from(x: &Complex, profile: &FatProfile, sigma: &Face) -> Result<Cochain> {
    let i = sigma.dim();
    if i > profile.k {
        return Err(HdxError::BadDimension(format!("face above dimension {}", profile.k)));
    }
    let s = x.require_face(sigma)?;
    let mut start = x.empty_cochain(i);
    if profile.fat_faces(i).contains(s) {
        start.insert(s);
    }
    Ok(climb(x, &profile.fat, start))
}

/// `(k+1)`-faces containing a dead end: two fat `j`-faces meeting in a
/// non-fat `(j-1)`-face.
fn degenerate(x: &Complex, fat: &[Cochain], k: i32) -> Result<Cochain> {
    let mut out = x.empty_cochain(k + 1);
    for j in 0..=k {
        let below = &fat[j as usize];
        let here = &fat[(j + 1) as usize];
        let mut ends = x.empty_cochain(j + 1);
        for r in 0..x.num_faces(j - 1) {
            if below.contains(r) {
                continue;
            }
            let ups: Vec<usize> = x.cofacets(j - 1, r).iter().copied().filter(|&t| here.contains(t)).collect();
            for (p, &s) in ups.iter().enumerate() {
                for &t in &ups[p + 1..] {
                    if let Some(u) = x.face_index(&x.faces(j)[s].union(&x.faces(j)[t])) {
                        ends.insert(u);
                    }
                }
            }
        }
        out = out.union(&x.container(&ends, k + 1)?)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeepRow {
    pub i: i32,
    #[serde(with = "crate::rational::serde_rat")]
    pub lhs: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub rhs: Rat,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeepReport {
    pub k: i32,
    #[serde(with = "crate::rational::serde_rat")]
    pub eta: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub beta: Rat,
    pub rows: Vec<SeepRow>,
    pub pass: bool,
}

/// Evaluates, for every `0 ≤ i ≤ k`,
/// `β/C(k+2,i+1)·‖L(A,i)‖ ≤ ‖δA‖ + (k+2)·‖L(A,i-1)‖ + ‖Υ(A)‖`.
///
/// `beta` is taken on trust as a lower bound for the coboundary expansion of
/// the proper links; local minimality of `A` is checked.
pub fn verify_seep(x: &Complex, a: &Cochain, eta: &Rat, beta: &Rat, cap: u64) -> Result<SeepReport> {
    let profile = fat_profile(x, a, eta)?;
    if !is_locally_minimal(x, a, cap)? {
        return Err(HdxError::PreconditionUnverified("cochain is not locally minimal".into()));
    }
    let k = a.dim();
    let da = x.norm(&coboundary(x, a)?)?;
    let ups = x.norm(&profile.upsilon)?;
    let rows: Vec<SeepRow> = (0..=k)
        .map(|i| {
            let lhs = beta / int(binomial((k + 2) as u64, (i + 1) as u64)) * x.norm(profile.ladder(i)).unwrap();
            let rhs = &da + int((k + 2) as u128) * x.norm(profile.ladder(i - 1)).unwrap() + &ups;
            SeepRow {
                i,
                pass: lhs <= rhs,
                lhs,
                rhs,
            }
        })
        .collect();
    Ok(SeepReport {
        k,
        eta: eta.clone(),
        beta: beta.clone(),
        pass: rows.iter().all(|r| r.pass),
        rows,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct UpsilonReport {
    pub k: i32,
    #[serde(with = "crate::rational::serde_rat")]
    pub eta: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub alpha_max: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub alpha_allowed: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub lhs: Rat,
    #[serde(with = "crate::rational::serde_rat")]
    pub rhs: Rat,
    pub pass: bool,
}

/// Checks `‖Υ(A)‖ ≤ (k+2)·2^(k+4)·η·‖A‖` after confirming every supplied link
/// constant satisfies `α* ≤ η^(2^(k+1))`.
///
/// `link_alphas` should cover every link `X_σ` with `0 ≤ |σ| ≤ d-1`.
pub fn verify_upsilon_bound(x: &Complex, a: &Cochain, eta: &Rat, link_alphas: &[(Face, Rat)]) -> Result<UpsilonReport> {
    let profile = fat_profile(x, a, eta)?;
    let k = a.dim();
    let allowed = eta_power(eta, (k + 1) as u32);
    let mut alpha_max = Rat::zero();
    for (sigma, alpha) in link_alphas {
        if alpha > &allowed {
            return Err(HdxError::HypothesisFailed(format!(
                "link at {:?} has alpha {} > eta^(2^{}) = {}",
                x.face_labels(sigma),
                alpha,
                k + 1,
                allowed
            )));
        }
        if alpha > &alpha_max {
            alpha_max = alpha.clone();
        }
    }
    let lhs = x.norm(&profile.upsilon)?;
    let rhs = int((k + 2) as u128) * int(1u128 << (k + 4)) * eta * x.norm(a)?;
    Ok(UpsilonReport {
        k,
        eta: eta.clone(),
        alpha_max,
        alpha_allowed: allowed,
        pass: lhs <= rhs,
        lhs,
        rhs,
    })
}
