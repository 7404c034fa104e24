mod args;
mod input;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::Parser;
use hdx::cohomology::{cohomology_dims, cosystole, expansion, ExpansionMode};
use hdx::criterion::{constants, criterion_report};
use hdx::fat::{fat_profile, verify_seep, verify_upsilon_bound};
use hdx::io::{format_complex, format_types, types_path};
use hdx::minimize::{is_locally_minimal, locally_minimize};
use hdx::rational::dyadic_root_ceil;
use hdx::spectral::{infer_typing, lambda_max, link_alphas, mixing_check, mixing_exhaustive, regularity, skeleton_alpha, AlphaMode, ALPHA_CAP};
use hdx::{Cochain, Complex, Extended, HdxError, Rat, DEFAULT_CAP};
use serde_json::{json, Value};

use args::{Cli, Format, Global, Verb};
use input::{load, load_cochain, parse_rat, vertex_set, Loaded};
use report::Report;

/// Exit status for "hypotheses unmet" and unverified preconditions.
const UNMET: u8 = 2;

fn faces_json(x: &Complex, c: &Cochain) -> Value {
    json!(x.cochain_faces(c).iter().map(|f| x.face_labels(f)).collect::<Vec<_>>())
}

fn with_witness(x: &Complex, mut v: Value, w: &Option<Cochain>) -> Value {
    if let Some(w) = w {
        v["witness_faces"] = faces_json(x, w);
    }
    v
}

fn cap_of(g: &Global) -> Result<u64> {
    match g.cap {
        Some(c) if c > DEFAULT_CAP && !g.exponential_ok => {
            bail!("--cap {c} exceeds the default 2^24; add --i-know-this-is-exponential to confirm")
        }
        Some(c) => Ok(c),
        None => Ok(DEFAULT_CAP),
    }
}

/// Smallest `β*` over proper links `1 ≤ |σ| ≤ d-1` and their dimensions.
fn measured_beta(x: &Complex, cap: u64) -> Result<Option<Rat>> {
    let mut best: Option<Rat> = None;
    for s in 0..x.dim() as i32 - 1 {
        for f in x.faces(s) {
            let link = x.link(f)?;
            for j in 0..link.dim() as i32 {
                if let Extended::Finite(v) = expansion(&link, j, ExpansionMode::Coboundary, cap)?.value {
                    if best.as_ref().is_none_or(|b| v < *b) {
                        best = Some(v);
                    }
                }
            }
        }
    }
    Ok(best)
}

fn typing_json(x: &Complex, t: &hdx::spectral::Typing) -> Value {
    let map: serde_json::Map<String, Value> = x
        .vertex_ids()
        .into_iter()
        .map(|v| (x.label(v).to_string(), json!(t.get(v))))
        .collect();
    Value::Object(map)
}

fn info(l: &Loaded) -> Result<Value> {
    let x = &l.complex;
    let d = x.dim() as i32;
    let cohomology: Vec<Value> = (0..=d).map(|k| cohomology_dims(x, k).map(|c| json!(c))).collect::<hdx::Result<_>>()?;
    let (typing, regular) = match &l.typing {
        Some(t) => (Some(t.clone()), regularity(x, Some(t)).ok()),
        None => match infer_typing(x) {
            Ok(t) => {
                let r = regularity(x, Some(&t)).ok();
                (Some(t), r)
            }
            Err(_) => (None, None),
        },
    };
    Ok(json!({
        "dim": d,
        "f_vector": (-1..=d).map(|k| x.num_faces(k)).collect::<Vec<_>>(),
        "Q": x.max_vertex_link_size(),
        "max_top_count": (0..=d).map(|k| x.max_top_count(k)).collect::<Vec<_>>(),
        "cohomology": cohomology,
        "typing": typing.as_ref().map(|t| typing_json(x, t)),
        "regular": regular.as_ref().map(|r| matches!(r, hdx::spectral::Regularity::Regular(_))),
        "dropped": l.dropped,
    }))
}

fn spectrum(l: &Loaded) -> Result<(Value, f64)> {
    let x = &l.complex;
    let typing = match &l.typing {
        Some(t) => t.clone(),
        None => infer_typing(x)?,
    };
    let r = regularity(x, Some(&typing))?.structure()?;
    let lam = lambda_max(x, &r)?;
    let v = json!({
        "typing": typing_json(x, &typing),
        "typing_source": if l.typing.is_some() { "given" } else { "inferred" },
        "regular_counts": r.entries(),
        "lambda": lam.lambda,
        "pairs": lam.pairs,
    });
    Ok((v, lam.lambda))
}

fn run(cli: &Cli) -> Result<(Report, u8)> {
    let g = &cli.global;
    let cap = cap_of(g)?;
    let verb = cli.verb.name();
    let mut options = serde_json::to_value(&cli.verb)?;
    let mut options = options.as_object_mut().and_then(|m| m.remove(verb)).unwrap_or(Value::Null);
    if options.is_null() {
        options = json!({});
    }
    options["global"] = serde_json::to_value(g)?;
    let mut exit = 0u8;

    let (result, loaded) = match &cli.verb {
        Verb::Constants { d, beta, degree, q } => {
            let c = constants(*d, &parse_rat(beta)?, *degree, *q)?;
            (serde_json::to_value(c)?, None)
        }
        Verb::Generate { src } => {
            if src.input.is_some() || src.kind.is_none() {
                bail!("generate needs --kind and no input file");
            }
            let l = load(src, cap)?;
            let x = &l.complex;
            let mut written = Vec::new();
            if let Some(path) = &g.out {
                fs::write(path, format_complex(x))?;
                written.push(path.display().to_string());
                if let Some(t) = &l.typing {
                    let tp = types_path(path);
                    fs::write(&tp, format_types(x, t))?;
                    written.push(tp.display().to_string());
                }
            }
            let v = json!({
                "spec": l.spec,
                "dim": x.dim(),
                "f_vector": (-1..=x.dim() as i32).map(|k| x.num_faces(k)).collect::<Vec<_>>(),
                "dropped": l.dropped,
                "written": written,
                "maximal_faces": x.labeled_top_faces(),
                "typing": l.typing.as_ref().map(|t| typing_json(x, t)),
            });
            (v, Some(l))
        }
        Verb::Info { src } => {
            let l = load(src, cap)?;
            (info(&l)?, Some(l))
        }
        Verb::Expansion { src, k, mode } => {
            let l = load(src, cap)?;
            let mode: ExpansionMode = mode.parse()?;
            let r = expansion(&l.complex, *k, mode, cap)?;
            (with_witness(&l.complex, serde_json::to_value(&r)?, &r.witness), Some(l))
        }
        Verb::Cosystole { src, k } => {
            let l = load(src, cap)?;
            let r = cosystole(&l.complex, *k, cap)?;
            (with_witness(&l.complex, serde_json::to_value(&r)?, &r.witness), Some(l))
        }
        Verb::Minimize { src, cochain } => {
            let mut l = load(src, cap)?;
            let x = &l.complex;
            let a = load_cochain(x, cochain, &mut l.aux_sha256)?;
            let tr = locally_minimize(x, &a, cap)?;
            let mut v = tr.to_json(x);
            v["final_faces"] = faces_json(x, &tr.final_cochain);
            v["locally_minimal"] = json!(is_locally_minimal(x, &tr.final_cochain, cap)?);
            v["gamma_bound_holds"] = json!(tr.gamma_bound_holds(x));
            (v, Some(l))
        }
        Verb::FatProfile { src, cochain, eta } => {
            let mut l = load(src, cap)?;
            let x = &l.complex;
            let a = load_cochain(x, cochain, &mut l.aux_sha256)?;
            let p = fat_profile(x, &a, &parse_rat(eta)?)?;
            let mut v = p.to_json(x);
            v["upsilon"]["faces"] = faces_json(x, &p.upsilon);
            (v, Some(l))
        }
        Verb::SeepCheck {
            src,
            cochain,
            eta,
            beta,
            minimize,
            upsilon,
            eta_upsilon,
        } => {
            let mut l = load(src, cap)?;
            let x = &l.complex;
            let mut a = load_cochain(x, cochain, &mut l.aux_sha256)?;
            if *minimize {
                a = locally_minimize(x, &a, cap)?.final_cochain;
            }
            let (beta, source) = match beta {
                Some(b) => (parse_rat(b)?, "given"),
                None => (
                    measured_beta(x, cap)?.ok_or_else(|| anyhow!("no proper link has finite coboundary expansion; pass --beta"))?,
                    "measured",
                ),
            };
            let seep = verify_seep(x, &a, &parse_rat(eta)?, &beta, cap)?;
            let mut v = json!({
                "beta_source": source,
                "cochain": a.to_indices(),
                "seep": seep,
            });
            if *upsilon {
                let alphas = link_alphas(x, ALPHA_CAP)?;
                let k = a.dim();
                let ue = match eta_upsilon {
                    Some(e) => parse_rat(e)?,
                    None => {
                        let amax = alphas.iter().map(|(_, v)| v.clone()).max().unwrap_or_default();
                        dyadic_root_ceil(&amax, (k + 1) as u32, 20)
                    }
                };
                v["upsilon"] = serde_json::to_value(verify_upsilon_bound(x, &a, &ue, &alphas)?)?;
            }
            (v, Some(l))
        }
        Verb::Spectrum { src } => {
            let l = load(src, cap)?;
            (spectrum(&l)?.0, Some(l))
        }
        Verb::MixingCheck { src, set_a, set_b, exhaustive } => {
            let l = load(src, cap)?;
            let (_, lambda) = spectrum(&l)?;
            let x = &l.complex;
            let v = if *exhaustive {
                serde_json::to_value(mixing_exhaustive(x, lambda, cap)?)?
            } else {
                if set_a.is_empty() || set_b.is_empty() {
                    bail!("mixing-check needs --set-a and --set-b, or --exhaustive");
                }
                let r = mixing_check(x, lambda, &vertex_set(x, set_a)?, &vertex_set(x, set_b)?)?;
                serde_json::to_value(r)?
            };
            (v, Some(l))
        }
        Verb::SkeletonAlpha { src, mode } => {
            let l = load(src, cap)?;
            let mode: AlphaMode = mode.parse()?;
            let alpha_cap = if g.cap.is_some() { cap } else { ALPHA_CAP };
            let r = skeleton_alpha(&l.complex, mode, l.typing.as_ref(), alpha_cap)?;
            (serde_json::to_value(r)?, Some(l))
        }
        Verb::Criterion { src, alpha_cap } => {
            let l = load(src, cap)?;
            let r = criterion_report(&l.complex, cap, alpha_cap.unwrap_or(ALPHA_CAP))?;
            if !r.hypotheses_met {
                exit = UNMET;
            }
            (serde_json::to_value(r)?, Some(l))
        }
    };

    let (input_sha256, aux) = match loaded {
        Some(l) => (Some(l.input_sha256), l.aux_sha256),
        None => (None, BTreeMap::new()),
    };
    Ok((
        Report {
            verb,
            options,
            input_sha256,
            aux_sha256: aux,
            result,
        },
        exit,
    ))
}

fn exit_for(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<HdxError>() {
        Some(HdxError::HypothesisFailed(_) | HdxError::PreconditionUnverified(_) | HdxError::NoValidTyping(_)) => UNMET,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok((report, code)) => {
            let text = match cli.global.format {
                Format::Json => report.render_json(),
                Format::Tsv => report.render_tsv(),
            };
            let written = match (&cli.global.out, &cli.verb) {
                (Some(path), v) if !matches!(v, Verb::Generate { .. }) => fs::write(path, text).map_err(anyhow::Error::from),
                _ => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(1);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_for(&e))
        }
    }
}
