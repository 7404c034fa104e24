//! The `.cx` complex format and the `.types` sidecar.
//!
//! A `.cx` file lists one maximal face per line as whitespace-separated vertex
//! tokens; blank lines and lines starting with `#` are ignored. A `.types`
//! file has lines `vertex_token type`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::complex::Complex;
use crate::error::{HdxError, Result};
use crate::spectral::Typing;

fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace().map(move |t| {
        let col = t.as_ptr() as usize - line.as_ptr() as usize + 1;
        (col, t)
    })
}

fn is_comment(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('#')
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    let mut faces: Vec<Vec<String>> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if is_comment(line) {
            continue;
        }
        let mut face: Vec<String> = Vec::new();
        for (col, t) in tokens(line) {
            if face.iter().any(|f| f == t) {
                return Err(HdxError::Parse {
                    line: n + 1,
                    column: col,
                    message: format!("vertex {t:?} repeated in one face"),
                });
            }
            face.push(t.to_string());
        }
        faces.push(face);
    }
    Complex::from_labeled_faces(&faces)
}

pub fn format_complex(x: &Complex) -> String {
    let mut out = format!("# pure {}-complex, {} maximal faces\n", x.dim(), x.num_faces(x.dim() as i32));
    for f in x.labeled_top_faces() {
        out.push_str(&f.join(" "));
        out.push('\n');
    }
    out
}

pub fn load_complex(path: impl AsRef<Path>) -> Result<Complex> {
    parse_complex(&fs::read_to_string(path)?)
}

pub fn save_complex(x: &Complex, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_complex(x))?;
    Ok(())
}

pub fn parse_types(text: &str, x: &Complex) -> Result<Typing> {
    let table = x.vertex_table();
    let mut types: Vec<Option<usize>> = vec![None; table.len()];
    for (n, line) in text.lines().enumerate() {
        if is_comment(line) {
            continue;
        }
        let parts: Vec<(usize, &str)> = tokens(line).collect();
        let err = |column: usize, message: String| HdxError::Parse {
            line: n + 1,
            column,
            message,
        };
        if parts.len() != 2 {
            return Err(err(1, format!("expected `vertex type`, found {} fields", parts.len())));
        }
        let (vc, v) = parts[0];
        let (tc, t) = parts[1];
        let id = table.id(v).ok_or_else(|| err(vc, format!("unknown vertex {v:?}")))?;
        let ty: usize = t.parse().map_err(|_| err(tc, format!("type {t:?} is not a non-negative integer")))?;
        if ty > x.dim() {
            return Err(err(tc, format!("type {ty} exceeds the dimension {}", x.dim())));
        }
        if types[id as usize].replace(ty).is_some() {
            return Err(err(vc, format!("vertex {v:?} typed twice")));
        }
    }
    for v in x.vertex_ids() {
        if types[v as usize].is_none() {
            return Err(HdxError::NoValidTyping(format!("vertex {:?} has no type", x.label(v))));
        }
    }
    Ok(Typing::new(types))
}

pub fn format_types(x: &Complex, typing: &Typing) -> String {
    let mut out = String::new();
    for v in x.vertex_ids() {
        if let Some(t) = typing.get(v) {
            let _ = writeln!(out, "{} {t}", x.label(v));
        }
    }
    out
}

pub fn load_types(path: impl AsRef<Path>, x: &Complex) -> Result<Typing> {
    parse_types(&fs::read_to_string(path)?, x)
}

pub fn save_types(x: &Complex, typing: &Typing, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_types(x, typing))?;
    Ok(())
}

/// `foo.cx` → `foo.types`.
pub fn types_path(cx: &Path) -> PathBuf {
    cx.with_extension("types")
}
