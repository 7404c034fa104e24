use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use hdx::generators::{generate, GenSpec};
use hdx::io::{load_types, parse_complex, types_path};
use hdx::spectral::Typing;
use hdx::{Cochain, Complex, Face, Rat};
use sha2::{Digest, Sha256};

use crate::args::{CochainArg, Kind, Source};

pub fn sha256(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// `3/7`, `2` or `0.125`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            bail!("bad decimal {s:?}");
        }
        let den = format!("1{}", "0".repeat(frac.len()));
        return format!("{int}{frac}/{den}").parse().map_err(|_| anyhow!("bad decimal {s:?}"));
    }
    s.parse().map_err(|_| anyhow!("bad rational {s:?}"))
}

pub struct Loaded {
    pub complex: Complex,
    pub typing: Option<Typing>,
    pub spec: Option<GenSpec>,
    pub dropped: Vec<Vec<String>>,
    pub input_sha256: String,
    pub aux_sha256: BTreeMap<String, String>,
}

fn need(v: Option<u64>, flag: &str, kind: Kind) -> Result<u64> {
    v.ok_or_else(|| anyhow!("--kind {} needs --{flag}", serde_json::to_value(kind).unwrap().as_str().unwrap()))
}

pub fn gen_spec(src: &Source) -> Result<Option<GenSpec>> {
    let Some(kind) = src.kind else {
        for (flag, set) in [("n", src.n.is_some()), ("d", src.d.is_some()), ("m", src.m.is_some()), ("q", src.q.is_some()), ("p", src.p.is_some()), ("seed", src.seed.is_some())] {
            if set {
                bail!("--{flag} only applies with --kind");
            }
        }
        return Ok(None);
    };
    let spec = match kind {
        Kind::Complete => GenSpec::Complete {
            n: need(src.n, "n", kind)?,
            d: need(src.d, "d", kind)?,
        },
        Kind::CompletePartite => GenSpec::CompletePartite {
            d: need(src.d, "d", kind)?,
            m: need(src.m, "m", kind)?,
        },
        Kind::Cycle => GenSpec::Cycle { n: need(src.n, "n", kind)? },
        Kind::ProjectiveFlag => GenSpec::ProjectiveFlag {
            q: need(src.q, "q", kind)?,
            n: need(src.n, "n", kind)?,
        },
        Kind::LinialMeshulam => {
            let p = parse_rat(src.p.as_deref().ok_or_else(|| anyhow!("--kind linial_meshulam needs --p"))?)?;
            let num = u64::try_from(p.numer()).map_err(|_| anyhow!("--p must be a probability"))?;
            let den = u64::try_from(p.denom()).map_err(|_| anyhow!("--p denominator too large"))?;
            GenSpec::LinialMeshulam {
                n: need(src.n, "n", kind)?,
                d: need(src.d, "d", kind)?,
                p_num: num,
                p_den: den,
                seed: src.seed.unwrap_or(0),
            }
        }
    };
    Ok(Some(spec))
}

pub fn load(src: &Source, cap: u64) -> Result<Loaded> {
    let spec = gen_spec(src)?;
    let mut aux = BTreeMap::new();
    let (complex, mut typing, dropped, input_sha256) = match (&src.input, &spec) {
        (Some(_), Some(_)) => bail!("give either an input file or --kind, not both"),
        (None, None) => bail!("no input: give a .cx file or --kind"),
        (Some(path), None) => {
            let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
            let x = parse_complex(&text)?;
            let sidecar = types_path(path);
            let typing = if src.types.is_none() && sidecar.exists() {
                aux.insert("types".to_string(), sha256(&fs::read(&sidecar)?));
                Some(load_types(&sidecar, &x)?)
            } else {
                None
            };
            (x, typing, Vec::new(), sha256(&bytes))
        }
        (None, Some(spec)) => {
            let g = generate(spec, cap)?;
            let typing = g.types.as_deref().map(Typing::from_dense);
            let canonical = serde_json::to_vec(spec)?;
            (g.complex, typing, g.dropped, sha256(&canonical))
        }
    };
    if let Some(path) = &src.types {
        aux.insert("types".to_string(), sha256(&fs::read(path)?));
        typing = Some(load_types(path, &complex)?);
    }
    Ok(Loaded {
        complex,
        typing,
        spec,
        dropped,
        input_sha256,
        aux_sha256: aux,
    })
}

/// Reads a cochain file: one face per line as vertex tokens, `#` comments.
pub fn load_cochain(x: &Complex, arg: &CochainArg, aux: &mut BTreeMap<String, String>) -> Result<Cochain> {
    let path: &Path = &arg.cochain;
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    aux.insert("cochain".to_string(), sha256(&bytes));
    let text = String::from_utf8(bytes)?;
    let mut faces: Vec<Face> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = t.split_whitespace().collect();
        let f = x.face_from_labels(&tokens).with_context(|| format!("{}:{}", path.display(), n + 1))?;
        faces.push(f);
    }
    let k = match (arg.k, faces.first()) {
        (Some(k), Some(f)) if f.dim() != k => bail!("--k {k} but the cochain's first face has dimension {}", f.dim()),
        (Some(k), _) => k,
        (None, Some(f)) => f.dim(),
        (None, None) => bail!("empty cochain file needs --k"),
    };
    Ok(x.cochain_from_faces(k, &faces)?)
}

pub fn vertex_set(x: &Complex, labels: &[String]) -> Result<Vec<hdx::VertexId>> {
    labels
        .iter()
        .map(|l| {
            let f = x.face_from_labels(&[l.as_str()])?;
            Ok(f.vertices()[0])
        })
        .collect()
}
