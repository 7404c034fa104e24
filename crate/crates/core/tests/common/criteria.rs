//! The acceptance checks, each returning a one-line outcome.

use std::time::{Duration, Instant};

use hdx::cohomology::{coboundary, cohomology_dims, cosystole, expansion, ExpansionMode};
use hdx::criterion::{constants, criterion_report, theta};
use hdx::fat::{eta_power, fat_profile, ladder_from, verify_seep, verify_upsilon_bound};
use hdx::generators::{complete, complete_partite, cycle, projective_flag};
use hdx::minimize::{is_locally_minimal, is_minimal, locally_minimize};
use hdx::rational::{dyadic_root_ceil, pow};
use hdx::spectral::{
    exact_alpha, lambda2, lambda_max, link_alphas, mixing_exhaustive, regularity, type_graph, ALPHA_CAP,
};
use hdx::{Cochain, Complex, Extended, Face, Rat, DEFAULT_CAP};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::*;

pub struct Outcome {
    pub checks: u64,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl Outcome {
    fn new(budget_secs: u64) -> Outcome {
        Outcome {
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
            budget: Duration::from_secs(budget_secs),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.budget
    }

    pub fn line(&self, n: u32, name: &str) -> String {
        let mut s = format!(
            "criterion {n} ({name}): {} [{} checks, {:.1}s of {}s",
            if self.pass() { "PASS" } else { "FAIL" },
            self.checks,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        );
        for note in &self.notes {
            s.push_str("; ");
            s.push_str(note);
        }
        s.push(']');
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(" first failure: {f}"));
        }
        s
    }
}

fn timed(budget_secs: u64, body: impl FnOnce(&mut Outcome)) -> Outcome {
    let mut out = Outcome::new(budget_secs);
    let start = Instant::now();
    body(&mut out);
    out.elapsed = start.elapsed();
    out
}

fn identity_corpus(seed: u64, count: usize) -> Vec<(String, Complex)> {
    let mut all: Vec<(String, Complex)> = random_corpus(seed, count, 3, 12)
        .into_iter()
        .enumerate()
        .map(|(i, x)| (format!("random#{i}"), x))
        .collect();
    all.extend(generator_corpus());
    all
}

fn sample_faces(x: &Complex, rng: &mut TestRng, max_dim: i32, limit: usize) -> Vec<Face> {
    let mut faces: Vec<Face> = (-1..=max_dim).flat_map(|k| x.faces(k).iter().cloned()).collect();
    while faces.len() > limit {
        let i = rng.gen_range(0..faces.len());
        faces.swap_remove(i);
    }
    faces
}

fn restrict(x: &Complex, a: &Cochain, sigma: &Face) -> Cochain {
    let k = a.dim();
    x.cochain_from_indices(k, a.members().filter(|&i| sigma.is_subset_of(&x.faces(k)[i])))
}

fn identities_on(name: &str, x: &Complex, rng: &mut TestRng, out: &mut Outcome, triggered: &mut u64) {
    let d = x.dim() as i32;
    for k in -1..=d {
        let total = x.faces(k).iter().fold(Rat::zero(), |acc, f| acc + weight(x, f));
        out.check(total.is_one(), || format!("{name}: weights at level {k} sum to {total}"));
        for f in x.faces(k) {
            out.check(x.weight(f).unwrap() == weight(x, f), || format!("{name}: weight of {f:?}"));
        }
        out.check(x.norm(&x.full_cochain(k)).unwrap().is_one(), || format!("{name}: norm of X({k})"));
    }

    for k in -1..=d - 2 {
        let a = random_cochain(x, k, rng);
        let dd = coboundary(x, &coboundary(x, &a).unwrap()).unwrap();
        out.check(dd.is_empty(), || format!("{name}: δδ ≠ 0 at level {k}"));
    }

    for k in -1..=d {
        let a = random_cochain(x, k, rng);
        let na = x.norm(&a).unwrap();
        for r in k..=d {
            let g = x.norm(&x.container(&a, r).unwrap()).unwrap();
            let c = Rat::from_integer(BigInt::from(choose((r + 1) as u64, (k + 1) as u64)));
            out.check(na <= g && g <= &c * &na, || format!("{name}: container sandwich k={k} r={r}"));
        }
    }

    for sigma in sample_faces(x, rng, d - 1, 24) {
        let link = x.link(&sigma).unwrap();
        let s = sigma.len() as i32;
        let ld = d - s;
        let ws = weight(x, &sigma);
        for j in -1..=ld {
            let b = random_cochain(&link, j, rng);
            let up = x.lift(&link, &b).unwrap();
            out.check(x.localize(&link, &up).unwrap() == b, || format!("{name}: I_σ I^σ ≠ id at {sigma:?}, j={j}"));
            let factor = Rat::from_integer(BigInt::from(choose((s + j + 1) as u64, (j + 1) as u64)));
            let lhs = x.norm(&up).unwrap();
            let rhs = factor * &ws * link.norm(&b).unwrap();
            out.check(lhs == rhs, || format!("{name}: global/local norm at {sigma:?}, j={j}: {lhs} vs {rhs}"));
            if j < ld {
                let l = coboundary(x, &up).unwrap();
                let r = x.lift(&link, &coboundary(&link, &b).unwrap()).unwrap();
                out.check(l == r, || format!("{name}: δ I^σ ≠ I^σ δ_σ at {sigma:?}, j={j}"));
            }
            let b2 = random_cochain(&link, j, rng);
            let local = link.norm(&b).unwrap() <= link.norm(&b2).unwrap();
            let global = x.norm(&up).unwrap() <= x.norm(&x.lift(&link, &b2).unwrap()).unwrap();
            out.check(local == global, || format!("{name}: lifting does not preserve order at {sigma:?}"));

            let a = random_cochain(x, j + s, rng);
            let back = x.lift(&link, &x.localize(&link, &a).unwrap()).unwrap();
            out.check(back == restrict(x, &a, &sigma), || format!("{name}: I^σ I_σ at {sigma:?}, j={j}"));

            let moved = a.add(&x.lift(&link, &b).unwrap()).unwrap();
            if x.norm(&a).unwrap() <= x.norm(&moved).unwrap() {
                *triggered += 1;
                let ia = x.localize(&link, &a).unwrap();
                let l = link.norm(&ia).unwrap();
                let r = link.norm(&ia.add(&b).unwrap()).unwrap();
                out.check(l <= r, || format!("{name}: norm inequality at {sigma:?}, j={j}"));
            }
        }
    }

    for k in 0..=d {
        let a = random_cochain(x, k, rng);
        let na = x.norm(&a).unwrap();
        for j in -1..=k {
            let total = x.faces(j).iter().fold(Rat::zero(), |acc, s| acc + x.norm(&restrict(x, &a, s)).unwrap());
            let c = Rat::from_integer(BigInt::from(choose((k + 1) as u64, (j + 1) as u64)));
            out.check(c * &na == total, || format!("{name}: link sum k={k} j={j}"));
        }
    }

    for k in 0..=d {
        let sk = x.skeleton(k).unwrap();
        let q = Rat::from_integer(BigInt::from(x.max_top_count(k)));
        for t in 0..=k {
            let a = random_cochain(x, t, rng);
            let na = x.norm(&a).unwrap();
            let ns = sk.norm(&sk.cochain_from_faces(t, &x.cochain_faces(&a)).unwrap()).unwrap();
            let lo = &na / (&q * Rat::from_integer(BigInt::from(choose((d - t) as u64, (k - t) as u64))));
            let hi = &q * Rat::from_integer(BigInt::from(choose((d + 1) as u64, (k + 1) as u64))) * &na;
            out.check(lo <= ns && ns <= hi, || format!("{name}: skeleton comparability k={k} t={t}"));
        }
    }
}

pub fn identities(seed: u64, count: usize) -> Outcome {
    timed(120, |out| {
        let corpus = identity_corpus(seed, count);
        let mut r = rng(seed ^ 0x1d);
        let mut triggered = 0;
        for (name, x) in &corpus {
            identities_on(name, x, &mut r, out, &mut triggered);
        }
        out.note(format!("{} complexes", corpus.len()));
        out.note(format!("{triggered} norm-inequality premises met"));
    })
}

fn two_triangles() -> Complex {
    Complex::from_labeled_faces(&[vec!["a", "b", "c"], vec!["d", "e", "f"]]).unwrap()
}

pub fn cohomology(seed: u64, count: usize) -> Outcome {
    timed(120, |out| {
        for n in 3..=8u64 {
            let c = cycle(n).unwrap();
            let s = cosystole(&c, 1, DEFAULT_CAP).unwrap().value;
            out.check(s == Extended::Finite(ratio(1, n as u128)), || format!("Syst^1(C_{n}) = {s}"));
            out.check(cohomology_dims(&c, 1).unwrap().cohomology == 1, || format!("dim H^1(C_{n}) ≠ 1"));
        }
        let t = two_triangles();
        let s = cosystole(&t, 0, DEFAULT_CAP).unwrap().value;
        out.check(s == Extended::Finite(ratio(1, 2)), || format!("Syst^0 of two triangles = {s}"));
        let e = Complex::from_labeled_faces(&[vec!["u", "v"]]).unwrap();
        let v = expansion(&e, 0, ExpansionMode::Coboundary, DEFAULT_CAP).unwrap().value;
        out.check(v == Extended::Finite(ratio(2, 1)), || format!("Exp_b^0 of an edge = {v}"));

        let mut corpus: Vec<(String, Complex)> = random_corpus(seed, count, 3, 9)
            .into_iter()
            .enumerate()
            .map(|(i, x)| (format!("random#{i}"), x))
            .collect();
        corpus.extend(generator_corpus());
        corpus.push(("two triangles".into(), t));
        let mut instances = 0;
        for (name, x) in &corpus {
            let d = x.dim() as i32;
            for k in 0..=d {
                let Some(f) = Flat::new(x, k) else { continue };
                instances += 1;
                let s = cosystole(x, k, DEFAULT_CAP).unwrap().value;
                let o = f.cosystole();
                out.check(s == o, || format!("{name}: Syst^{k} = {s}, flat scan {o}"));
                let h = cohomology_dims(x, k).unwrap().cohomology as u32;
                out.check(h == f.h_dim(), || format!("{name}: dim H^{k} = {h}, flat scan {}", f.h_dim()));
                if k < d {
                    for (mode, cocycle) in [(ExpansionMode::Coboundary, false), (ExpansionMode::Cocycle, true)] {
                        let rep = expansion(x, k, mode, DEFAULT_CAP).unwrap();
                        let o = f.expansion(cocycle);
                        out.check(rep.value == o, || format!("{name}: Exp^{k} {mode:?} = {}, flat scan {o}", rep.value));
                        if let (Some(w), Some(v)) = (&rep.witness, rep.value.finite()) {
                            let m = Flat::mask(w);
                            let wv = ratio(f.cob_mass[m] as u128 * f.den.0, f.dist_mass(if cocycle { &f.in_z } else { &f.in_b })[m] as u128 * f.den.1);
                            out.check(&wv == v, || format!("{name}: Exp^{k} witness does not attain the value"));
                        }
                    }
                    let positive = expansion(x, k, ExpansionMode::Coboundary, DEFAULT_CAP).unwrap().value.is_positive();
                    out.check(positive == (h == 0), || format!("{name}: Exp_b^{k} > 0 disagrees with H^{k} = 0"));
                }
            }
        }
        out.note(format!("{instances} flat-scanned (X, k) instances"));
    })
}

fn vertex_degree_bound(x: &Complex) -> u64 {
    let mut best = 0;
    for v in x.faces(0) {
        let c = (0..=x.dim() as i32)
            .map(|k| x.faces(k).iter().filter(|f| v.is_subset_of(f)).count())
            .sum::<usize>();
        best = best.max(c as u64);
    }
    best
}

fn all_subsets(a: &Cochain, rng: &mut TestRng) -> Vec<Cochain> {
    let members = a.to_indices();
    let build = |m: u64| {
        let mut c = a.clone();
        c.clear();
        for (b, &i) in members.iter().enumerate() {
            if m >> b & 1 == 1 {
                c.insert(i);
            }
        }
        c
    };
    if members.len() <= 8 {
        (0..1u64 << members.len()).map(build).collect()
    } else {
        (0..256).map(|_| build(rng.gen::<u64>())).collect()
    }
}

pub fn minimization(seed: u64, samples: usize) -> Outcome {
    timed(300, |out| {
        let mut r = rng(seed);
        let mut done = 0;
        let mut minimal_checked = 0;
        let mut subsets_checked = 0u64;
        let mut max_ratio = Rat::zero();
        while done < samples {
            let x = random_complex(&mut r, 3, 12);
            let d = x.dim() as i32;
            let k = r.gen_range(0..d);
            let a = random_cochain(&x, k, &mut r);
            done += 1;
            let tr = locally_minimize(&x, &a, DEFAULT_CAP).unwrap();
            let fin = &tr.final_cochain;
            out.check(is_locally_minimal(&x, fin, DEFAULT_CAP).unwrap(), || format!("sample {done}: output not locally minimal"));
            let (ni, nf) = (x.norm(&a).unwrap(), x.norm(fin).unwrap());
            out.check(nf <= ni, || format!("sample {done}: norm rose from {ni} to {nf}"));
            let shifted = a.add(&coboundary(&x, &tr.gamma).unwrap()).unwrap();
            out.check(&shifted == fin, || format!("sample {done}: final ≠ initial + δγ"));
            let q = vertex_degree_bound(&x);
            let ng = x.norm(&tr.gamma).unwrap();
            let bound = Rat::from_integer(BigInt::from(q)) * &ni;
            if !ni.is_zero() {
                let ratio = &ng / &ni;
                if ratio > max_ratio {
                    max_ratio = ratio;
                }
            }
            out.check(ng <= bound, || format!("sample {done}: ‖γ‖ = {ng} > Q‖A‖ = {bound}"));
            out.check(tr.steps.len() as u64 <= x.mass(&a), || format!("sample {done}: {} steps > N = {}", tr.steps.len(), x.mass(&a)));

            let Some(f) = Flat::new(&x, k) else { continue };
            let dist_b = f.dist_mass(&f.in_b);
            let m = Flat::mask(&a);
            out.check(is_minimal(&x, &a, DEFAULT_CAP).unwrap() == f.is_minimal(&dist_b, m), || format!("sample {done}: is_minimal disagrees with the flat scan"));
            for mc in minimal_samples(&x, &f, &mut r, 3) {
                minimal_checked += 1;
                out.check(is_minimal(&x, &mc, DEFAULT_CAP).unwrap(), || format!("sample {done}: flat-minimal cochain rejected"));
                out.check(is_locally_minimal(&x, &mc, DEFAULT_CAP).unwrap(), || format!("sample {done}: minimal cochain not locally minimal"));
                for sub in all_subsets(&mc, &mut r) {
                    subsets_checked += 1;
                    out.check(f.is_minimal(&dist_b, Flat::mask(&sub)), || format!("sample {done}: subset of a minimal cochain is not minimal"));
                }
            }
        }
        out.note(format!("{samples} samples, {minimal_checked} minimal cochains, {subsets_checked} subsets"));
        out.note(format!("max ‖γ‖/‖A‖ = {max_ratio}"));
    })
}

fn eta_grid() -> Vec<Rat> {
    [(1, 2), (1, 3), (2, 3), (1, 4), (3, 4), (1, 8), (1, 16), (9, 10), (99, 100)]
        .iter()
        .map(|&(n, d)| ratio(n, d))
        .collect()
}

fn link_beta(x: &Complex) -> Rat {
    let d = x.dim() as i32;
    let mut best: Option<Rat> = None;
    for s in 0..d - 1 {
        for f in x.faces(s) {
            let link = x.link(f).unwrap();
            for j in 0..link.dim() as i32 {
                if let Extended::Finite(v) = expansion(&link, j, ExpansionMode::Coboundary, DEFAULT_CAP).unwrap().value {
                    if best.as_ref().is_none_or(|b| v < *b) {
                        best = Some(v);
                    }
                }
            }
        }
    }
    best.expect("proper links with finite expansion")
}

fn fat_triple(x: &Complex, a: &Cochain, eta: &Rat, out: &mut Outcome, stats: &mut [u64; 3]) {
    let k = a.dim();
    let p = fat_profile(x, a, eta).unwrap();
    let levels = fat_oracle(x, a, eta);
    let na = x.norm(a).unwrap();
    for i in -1..=k {
        let ours = x.cochain_faces(p.fat_faces(i));
        let mut theirs = levels[(i + 1) as usize].clone();
        theirs.sort_by_key(|s| x.face_index(s));
        out.check(ours == theirs, || format!("fat faces of dimension {i} differ from the link oracle"));
        let ns = x.norm(p.fat_faces(i)).unwrap();
        let bound = pow(eta, -(1i64 << (k - i))) * &na;
        out.check(ns <= bound, || format!("‖S^{i}‖ = {ns} > {bound}"));

        let mut ladder: Vec<Face> = levels[(i + 1) as usize].iter().flat_map(|s| ladder_oracle(&levels, s, k)).collect();
        ladder.sort_by_key(|t| x.face_index(t));
        ladder.dedup();
        out.check(x.cochain_faces(p.ladder(i)) == ladder, || format!("ladder L(A,{i}) differs from the oracle"));
    }
    if na < eta_power(eta, (k + 1) as u32) {
        stats[0] += 1;
        out.check(!p.fat_faces(-1).contains(0), || "empty face fat for a small cochain".into());
    }
    let mut ups = upsilon_oracle(x, &levels, k);
    ups.sort_by_key(|t| x.face_index(t));
    out.check(x.cochain_faces(&p.upsilon) == ups, || "degenerate faces differ from the oracle".into());

    let members = x.cochain_faces(a);
    for i in -1..=k {
        for sigma in &levels[(i + 1) as usize] {
            for t in ladder_oracle(&levels, sigma, k) {
                for tp in &members {
                    let u = t.union(tp);
                    if u.len() as i32 > k + 2 {
                        continue;
                    }
                    let meet = tp.intersection(sigma);
                    let on_ladder = ladder_from(x, &p, &meet).unwrap().contains(x.face_index(tp).unwrap());
                    for q in x.faces(k + 1).iter().filter(|q| u.is_subset_of(q)) {
                        stats[1] += 1;
                        let deg = p.upsilon.contains(x.face_index(q).unwrap());
                        out.check(on_ladder || deg, || format!("ladder disjunction fails at σ={sigma:?}, t={t:?}, t'={tp:?}, p={q:?}"));
                    }
                }
            }
        }
    }
}

pub fn fat(seed: u64, triples: usize, seep_samples: usize) -> Outcome {
    timed(600, |out| {
        let mut r = rng(seed);
        let grid = eta_grid();
        let mut stats = [0u64; 3];
        for _ in 0..triples {
            let x = random_complex(&mut r, 3, 10);
            let k = r.gen_range(0..x.dim() as i32);
            let a = random_cochain(&x, k, &mut r);
            let eta = grid[r.gen_range(0..grid.len())].clone();
            fat_triple(&x, &a, &eta, out, &mut stats);
        }

        let bases = [complete(5, 2).unwrap(), complete(6, 2).unwrap()];
        let betas: Vec<Rat> = bases.iter().map(link_beta).collect();
        let alphas: Vec<Vec<(Face, Rat)>> = bases.iter().map(|x| link_alphas(x, ALPHA_CAP).unwrap()).collect();
        let mut seep_pass = 0;
        let mut ups_pass = 0;
        for s in 0..seep_samples {
            let b = s % 2;
            let x = &bases[b];
            let k = r.gen_range(0..x.dim() as i32);
            let a = random_cochain(x, k, &mut r);
            let fin = locally_minimize(x, &a, DEFAULT_CAP).unwrap().final_cochain;
            let eta = grid[r.gen_range(0..grid.len())].clone();
            let rep = verify_seep(x, &fin, &eta, &betas[b], DEFAULT_CAP).unwrap();
            seep_pass += rep.pass as u64;
            out.check(rep.pass, || format!("seep fails on sample {s} with η = {eta}"));
            fat_triple(x, &fin, &eta, out, &mut stats);

            let amax = alphas[b].iter().map(|(_, v)| v.clone()).max().unwrap();
            let ue = dyadic_root_ceil(&amax, (k + 1) as u32, 20);
            match verify_upsilon_bound(x, &fin, &ue, &alphas[b]) {
                Ok(u) => {
                    ups_pass += u.pass as u64;
                    out.check(u.pass, || format!("upsilon bound fails on sample {s}: {} > {}", u.lhs, u.rhs));
                }
                Err(e) => out.check(false, || format!("upsilon check refused on sample {s}: {e}")),
            }
        }
        out.note(format!("{triples} random triples"));
        out.note(format!("β = {} / {}", betas[0], betas[1]));
        out.note(format!("seep {seep_pass}/{seep_samples}, upsilon {ups_pass}/{seep_samples}"));
        out.note(format!("{} small-cochain premises, {} ladder configurations", stats[0], stats[1]));
    })
}

pub fn complete_bipartite(a: usize, b: usize) -> Complex {
    let faces: Vec<Vec<String>> = (0..a)
        .flat_map(|i| (0..b).map(move |j| vec![format!("l{i}"), format!("r{j}")]))
        .collect();
    Complex::from_labeled_faces(&faces).unwrap()
}

fn nalgebra_lambda(g: &hdx::spectral::BipartiteTypeGraph) -> f64 {
    let nl = g.left.len();
    let n = nl + g.right.len();
    let mut m = nalgebra::DMatrix::<f64>::zeros(n, n);
    for &(a, b) in &g.edges {
        m[(a, nl + b)] = 1.0;
        m[(nl + b, a)] = 1.0;
    }
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev.get(1).copied().unwrap_or(0.0).max(0.0) / ev[0]
}

pub fn spectral() -> Outcome {
    timed(300, |out| {
        let mut regular: Vec<(String, Complex)> = Vec::new();
        for a in 1..=6 {
            for b in 1..=6 {
                regular.push((format!("K_{{{a},{b}}}"), complete_bipartite(a, b)));
            }
        }
        for n in [4u64, 6, 8, 10, 12] {
            regular.push((format!("cycle({n})"), cycle(n).unwrap()));
        }
        for (d, m) in [(1, 2), (1, 5), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
            regular.push((format!("complete_partite({d},{m})"), complete_partite(d, m).unwrap()));
        }
        for d in 1..=3u64 {
            regular.push((format!("simplex({d})"), complete(d + 1, d).unwrap()));
        }
        for (q, n) in [(2, 3), (3, 3), (2, 4)] {
            regular.push((format!("projective_flag({q},{n})"), projective_flag(q, n).unwrap()));
        }

        let mut exhaustive = 0;
        let mut pairs = 0u64;
        let mut marginal = 0u64;
        let mut compared = 0;
        for (name, x) in &regular {
            let rs = regularity(x, None).unwrap().structure().unwrap();
            let lam = lambda_max(x, &rs).unwrap();
            for p in &lam.pairs {
                out.check((p.lambda1 - p.expected_lambda1).abs() <= 1e-9, || format!("{name}: λ1 = {} vs {}", p.lambda1, p.expected_lambda1));
                let g = type_graph(x, &rs, p.pair[0], p.pair[1]).unwrap();
                let o = nalgebra_lambda(&g);
                out.check((o - lambda2(&g).lambda2_norm).abs() <= 1e-9, || format!("{name}: λ pair {:?} = {}, nalgebra {o}", p.pair, p.lambda2_norm));
            }
            if name.starts_with("K_") {
                out.check(lam.lambda.abs() <= 1e-9, || format!("{name}: λ = {}", lam.lambda));
            }
            if name == "projective_flag(2,3)" {
                let want = 2f64.sqrt() / 3.0;
                out.check((lam.lambda - want).abs() <= 1e-9, || format!("Heawood λ = {}", lam.lambda));
            }
            if x.num_faces(0) <= 12 {
                exhaustive += 1;
                let m = mixing_exhaustive(x, lam.lambda, DEFAULT_CAP).unwrap();
                pairs += m.pairs;
                marginal += m.marginal;
                out.check(m.fail == 0, || format!("{name}: {} mixing failures, worst gap {}", m.fail, m.worst_gap));
            }
            if x.dim() >= 1 && x.num_faces(0) < 64 && (1u64 << x.num_faces(0)) <= ALPHA_CAP {
                compared += 1;
                let (alpha, _) = exact_alpha(x, ALPHA_CAP).unwrap();
                let af = hdx::rational::to_f64(&alpha);
                out.check(af <= lam.lambda + 1e-9, || format!("{name}: α* = {af} > λ = {}", lam.lambda));
            }
        }
        out.note(format!("{} regular complexes", regular.len()));
        out.note(format!("{exhaustive} scanned exhaustively over {pairs} pairs ({marginal} marginal)"));
        out.note(format!("α* ≤ λ compared on {compared}"));
    })
}

fn mu_bar_oracle(d: u32, beta: &Rat) -> (Rat, Rat) {
    let two = |e: u32| Rat::from_integer(BigInt::one() << e);
    let c0 = beta / (Rat::from_integer(BigInt::from(d + 2)) * two(d + 2));
    let c0d = pow(&c0, d as i64);
    let eps = &c0d / Rat::from_integer(BigInt::from(3));
    let base = &c0d / (Rat::from_integer(BigInt::from(3 * (d + 2))) * two(d + 3));
    (pow(&base, 1i64 << (d + 1)), eps)
}

pub fn constants_suite(seed: u64) -> Outcome {
    timed(1, |out| {
        let mut r = rng(seed);
        for _ in 0..20 {
            let d = r.gen_range(1..=5u32);
            let beta = ratio(r.gen_range(1..=64), r.gen_range(1..=64)).min(Rat::one());
            let c = constants(d, &beta, 11, None).unwrap();
            out.check(c.mu.0 == c.mu_bar.0, || format!("μ ≠ μ̄ at d={d}, β={beta}"));
            let (mu_bar, eps_bar) = mu_bar_oracle(d, &beta);
            out.check(c.mu_bar.0 == mu_bar, || format!("μ̄ differs from its closed form at d={d}, β={beta}"));
            out.check(c.eps_bar.0 == eps_bar, || format!("ε̄ differs from its closed form at d={d}, β={beta}"));
            let base = &eps_bar / Rat::from_integer(BigInt::from((d + 2) as u64 * (1u64 << (d + 3))));
            let base_pow = pow(&base, (1i64 << (d + 1)) + 1);
            out.check(c.alpha.0 == base_pow, || format!("α differs from base^(2^(d+1)+1) at d={d}"));
        }
        let c = constants(2, &Rat::one(), 11, None).unwrap();
        out.check(c.eps_bar.0 == ratio(1, 12288), || format!("ε̄(2, 1) = {}", c.eps_bar.0));
        out.check(theta(2) == BigInt::from(7664025600u64), || format!("θ_2 = {}", theta(2)));
        let c = constants(3, &Rat::one(), 11, Some(256)).unwrap();
        let rb = c.ramanujan_lambda_bound.unwrap();
        out.check((rb - 1.0 / 32.0).abs() <= 1e-15, || format!("Ramanujan bound = {rb}"));
    })
}

fn json_rat(v: &serde_json::Value) -> bool {
    let part = |p: &serde_json::Value| p.is_i64() || p.as_str().is_some_and(|s| s.parse::<BigInt>().is_ok());
    v.get("num").is_some_and(part) && v.get("den").is_some_and(part)
}

fn json_extended(v: &serde_json::Value) -> bool {
    v.as_str() == Some("inf") || json_rat(v)
}

fn schema_errors(v: &serde_json::Value) -> Vec<String> {
    let mut errs = Vec::new();
    let mut need = |ok: bool, what: &str| {
        if !ok {
            errs.push(what.to_string());
        }
    };
    need(v["d"].is_u64(), "d");
    need(v["Q"].is_u64(), "Q");
    need(json_extended(&v["beta_star"]), "beta_star");
    need(json_rat(&v["beta_used"]), "beta_used");
    need(json_rat(&v["alpha_star_max"]), "alpha_star_max");
    need(v["hypotheses_met"].is_boolean(), "hypotheses_met");
    need(v["verdict"].is_string(), "verdict");
    need(v["notes"].is_array(), "notes");
    need(v["link_betas"].as_array().is_some_and(|a| a.iter().all(|b| b["sigma"].is_array() && json_extended(&b["value"]))), "link_betas");
    need(
        v["link_alphas"].as_array().is_some_and(|a| a.iter().all(|b| b["sigma"].is_array() && json_rat(&b["alpha"]) && b["meets_required"].is_boolean())),
        "link_alphas",
    );
    if let Some(c) = v["constants"].as_object() {
        for key in ["c0", "mu_bar", "eps_bar", "mu", "eps", "alpha"] {
            need(c.get(key).is_some_and(|t| json_rat(&t["exact"])), key);
        }
    } else {
        need(v["constants"].is_null(), "constants");
    }
    match v["conclusions"].as_object() {
        Some(c) => {
            for key in ["expansion", "systole"] {
                need(
                    c.get(key).and_then(|r| r.as_array()).is_some_and(|rows| {
                        rows.iter().all(|row| row["k"].is_i64() && json_extended(&row["value"]) && row["pass"].is_boolean())
                    }),
                    key,
                );
            }
            need(c.get("isoperimetric").is_some_and(|r| r.is_array()), "isoperimetric");
            need(c.get("pass").is_some_and(|p| p.is_boolean()), "conclusions.pass");
        }
        None => need(v["conclusions"].is_null(), "conclusions"),
    }
    errs
}

pub fn criterion_pipeline() -> Outcome {
    timed(600, |out| {
        let glued = Complex::from_labeled_faces(&[vec!["a", "b", "c"], vec!["a", "d", "e"]]).unwrap();
        let instances: Vec<(&str, Complex)> = vec![
            ("complete(5,2)", complete(5, 2).unwrap()),
            ("projective_flag(2,3)", projective_flag(2, 3).unwrap()),
            ("complete(4,2)", complete(4, 2).unwrap()),
            ("cycle(5)", cycle(5).unwrap()),
            ("glued triangles", glued),
        ];
        for (name, x) in &instances {
            let rep = match criterion_report(x, DEFAULT_CAP, ALPHA_CAP) {
                Ok(r) => r,
                Err(e) => {
                    out.check(false, || format!("{name}: {e}"));
                    continue;
                }
            };
            let v = serde_json::to_value(&rep).unwrap();
            let errs = schema_errors(&v);
            out.check(errs.is_empty(), || format!("{name}: schema problems in {errs:?}"));
            if rep.hypotheses_met {
                let ok = rep.conclusions.as_ref().is_some_and(|c| c.pass);
                out.check(ok, || format!("{name}: hypotheses met but conclusions fail"));
                out.check(rep.verdict == "hypotheses met", || format!("{name}: verdict {:?}", rep.verdict));
            } else {
                out.check(rep.conclusions.is_none(), || format!("{name}: conclusions reported under unmet hypotheses"));
                out.check(rep.verdict.contains("silent"), || format!("{name}: verdict {:?}", rep.verdict));
            }
            out.note(format!("{name}: {}", rep.verdict));
        }
    })
}
