//! Minimal and locally minimal cochains, and local minimization by link
//! coboundary moves.

use serde::Serialize;

use crate::cochain::Cochain;
use crate::cohomology::{coboundary, space_basis, SpaceKind};
use crate::complex::{Complex, Face};
use crate::error::{HdxError, Result};
use crate::f2::walk_span;
use crate::rational::{rat_u, Rat, RatJson};

/// `‖A‖ ≤ ‖A + b‖` for every `b ∈ B^k`, by enumerating `B^k`.
pub fn is_minimal(x: &Complex, a: &Cochain, cap: u64) -> Result<bool> {
    x.check_cochain(a)?;
    if a.dim() < 0 {
        return Ok(true);
    }
    let b = space_basis(x, a.dim(), SpaceKind::Coboundaries)?;
    crate::cohomology::check_cap("minimality check over B^k", b.dim(), cap)?;
    let mut state: Vec<bool> = (0..a.level_len()).map(|i| a.contains(i)).collect();
    let mut mass = x.mass(a);
    let start = mass;
    let mut minimal = true;
    walk_span(&b.row_supports(), x.top_counts(a.dim()), &mut state, &mut mass, |_, m, _| {
        minimal = m >= start;
        minimal
    });
    Ok(minimal)
}

/// Everything needed to test and improve `I_σ(A)` for one `σ` without
/// touching the link complex again.
struct LinkMoves {
    sigma: Face,
    /// parent `k`-face index of each link `(k-|σ|)`-face
    up: Vec<usize>,
    /// parent `(k-1)`-face index of each link `(k-|σ|-1)`-face
    up_lower: Vec<usize>,
    weights: Vec<u64>,
    rows: Vec<Vec<usize>>,
    preimages: Vec<Vec<usize>>,
}

impl LinkMoves {
    fn build(x: &Complex, j: i32, i: usize, k: i32, cap: u64) -> Result<LinkMoves> {
        let sigma = x.faces(j)[i].clone();
        let link = x.link(&sigma)?;
        let kl = k - sigma.len() as i32;
        let lift = |dim: i32| -> Vec<usize> {
            link.faces(dim)
                .iter()
                .map(|f| x.face_index(&f.union(&sigma)).expect("lifted face"))
                .collect()
        };
        let basis = space_basis(&link, kl, SpaceKind::Coboundaries)?;
        crate::cohomology::check_cap("local minimality check over a link B^k", basis.dim(), cap)?;
        let preimages = basis
            .preimages()
            .unwrap_or_default()
            .iter()
            .map(|c| c.to_indices())
            .collect();
        Ok(LinkMoves {
            up: lift(kl),
            up_lower: lift(kl - 1),
            weights: link.top_counts(kl).to_vec(),
            rows: basis.row_supports(),
            preimages,
            sigma,
        })
    }

    /// Smallest combination index of basis rows that strictly lowers
    /// `‖I_σ(A) + δ_σ(c)‖_σ`.
    fn first_improvement(&self, a: &Cochain) -> Option<u64> {
        let mut state: Vec<bool> = self.up.iter().map(|&t| a.contains(t)).collect();
        let mut mass: u64 = state
            .iter()
            .zip(&self.weights)
            .filter(|(s, _)| **s)
            .map(|(_, w)| *w)
            .sum();
        let start = mass;
        let mut best: Option<u64> = None;
        walk_span(&self.rows, &self.weights, &mut state, &mut mass, |g, m, _| {
            if m < start && best.is_none_or(|b| g < b) {
                best = Some(g);
            }
            true
        });
        best
    }

    /// `I^σ(c)` for the link cochain `c` whose coboundary is combination `g`.
    fn lifted_preimage(&self, x: &Complex, k: i32, g: u64) -> Cochain {
        let mut c = x.empty_cochain(k - 1);
        for (j, pre) in self.preimages.iter().enumerate() {
            if g >> j & 1 == 1 {
                for &f in pre {
                    c.toggle(self.up_lower[f]);
                }
            }
        }
        c
    }
}

fn moves(x: &Complex, k: i32, cap: u64) -> Result<Vec<LinkMoves>> {
    let mut out = Vec::new();
    for j in 0..k {
        for i in 0..x.num_faces(j) {
            out.push(LinkMoves::build(x, j, i, k, cap)?);
        }
    }
    Ok(out)
}

fn check_k(x: &Complex, a: &Cochain) -> Result<()> {
    x.check_cochain(a)?;
    if a.dim() < 0 {
        return Err(HdxError::BadDimension("local minimality needs k >= 0".into()));
    }
    Ok(())
}

/// `I_σ(A)` is minimal in `X_σ` for every nonempty face `σ`.
///
/// Faces with `|σ| > k` localize `A` to dimension `-1` or lower, where the
/// coboundary space is trivial, so only `1 ≤ |σ| ≤ k` are examined.
pub fn is_locally_minimal(x: &Complex, a: &Cochain, cap: u64) -> Result<bool> {
    check_k(x, a)?;
    Ok(moves(x, a.dim(), cap)?.iter().all(|m| m.first_improvement(a).is_none()))
}

#[derive(Clone, Debug)]
pub struct MinimizeStep {
    pub sigma: Face,
    /// `I^σ(c)` as a `(k-1)`-cochain of `X`.
    pub lifted: Cochain,
    pub norm_after: Rat,
}

#[derive(Clone, Debug)]
pub struct MinimizeTrace {
    pub initial: Cochain,
    pub final_cochain: Cochain,
    pub gamma: Cochain,
    pub steps: Vec<MinimizeStep>,
    /// `N(initial) = C(d+1, k+1)·|X(d)|·‖initial‖`, which bounds the step count.
    pub potential: u64,
    pub q: usize,
}

/// Applies improving link moves, canonically first each time, until `A` is
/// locally minimal. Returns the trace with `final = initial + δ(gamma)`.
pub fn locally_minimize(x: &Complex, a: &Cochain, cap: u64) -> Result<MinimizeTrace> {
    check_k(x, a)?;
    let k = a.dim();
    let table = moves(x, k, cap)?;
    // which σ see each k-face, to re-examine only what a move touched
    let mut watchers: Vec<Vec<usize>> = vec![Vec::new(); x.num_faces(k)];
    for (s, m) in table.iter().enumerate() {
        for &t in &m.up {
            watchers[t].push(s);
        }
    }
    let mut settled = vec![false; table.len()];
    let mut cur = a.clone();
    let mut gamma = x.empty_cochain(k - 1);
    let mut steps = Vec::new();
    let mut s = 0;
    while s < table.len() {
        if settled[s] {
            s += 1;
            continue;
        }
        match table[s].first_improvement(&cur) {
            None => {
                settled[s] = true;
                s += 1;
            }
            Some(g) => {
                let lifted = table[s].lifted_preimage(x, k, g);
                let delta = coboundary(x, &lifted)?;
                cur.add_assign(&delta)?;
                gamma.add_assign(&lifted)?;
                for t in delta.members() {
                    for &w in &watchers[t] {
                        settled[w] = false;
                    }
                }
                steps.push(MinimizeStep {
                    sigma: table[s].sigma.clone(),
                    lifted,
                    norm_after: x.norm(&cur)?,
                });
                s = 0;
            }
        }
    }
    Ok(MinimizeTrace {
        potential: x.mass(a),
        q: x.max_vertex_link_size(),
        initial: a.clone(),
        final_cochain: cur,
        gamma,
        steps,
    })
}

impl MinimizeTrace {
    pub fn to_json(&self, x: &Complex) -> serde_json::Value {
        #[derive(Serialize)]
        struct Step<'a> {
            sigma: Vec<String>,
            lifted: Vec<usize>,
            norm_after: RatJson<'a>,
        }
        let norm = |c: &Cochain| serde_json::to_value(RatJson(&x.norm(c).expect("own cochain"))).unwrap();
        let steps: Vec<Step> = self
            .steps
            .iter()
            .map(|s| Step {
                sigma: x.face_labels(&s.sigma),
                lifted: s.lifted.to_indices(),
                norm_after: RatJson(&s.norm_after),
            })
            .collect();
        serde_json::json!({
            "k": self.initial.dim(),
            "initial": self.initial.to_indices(),
            "final": self.final_cochain.to_indices(),
            "gamma": self.gamma.to_indices(),
            "initial_norm": norm(&self.initial),
            "final_norm": norm(&self.final_cochain),
            "gamma_norm": norm(&self.gamma),
            "q": self.q,
            "potential": self.potential,
            "steps": steps,
        })
    }

    /// `‖gamma‖ ≤ Q·‖initial‖`.
    pub fn gamma_bound_holds(&self, x: &Complex) -> bool {
        let q = rat_u(self.q as u128, 1);
        x.norm(&self.gamma).unwrap() <= q * x.norm(&self.initial).unwrap()
    }
}
