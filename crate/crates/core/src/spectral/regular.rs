//! Vertex typings and the regular-complex check.

use std::collections::HashMap;

use serde::Serialize;

use crate::complex::{Complex, VertexId};
use crate::error::{HdxError, Result};

/// Vertex types indexed by vertex id; `None` for ids the complex does not use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Typing(Vec<Option<usize>>);

impl Typing {
    pub fn new(types: Vec<Option<usize>>) -> Typing {
        Typing(types)
    }

    /// From a dense vector over the whole vertex table.
    pub fn from_dense(types: &[usize]) -> Typing {
        Typing(types.iter().map(|&t| Some(t)).collect())
    }

    pub fn get(&self, v: VertexId) -> Option<usize> {
        self.0.get(v as usize).copied().flatten()
    }

    pub fn as_slice(&self) -> &[Option<usize>] {
        &self.0
    }

    fn mask(&self, vs: &[VertexId]) -> Option<usize> {
        let mut m = 0usize;
        for &v in vs {
            let t = self.get(v)?;
            if m >> t & 1 == 1 {
                return None;
            }
            m |= 1 << t;
        }
        Some(m)
    }
}

/// Greedy typing: repeatedly take the first top face with exactly one untyped
/// vertex (its type is forced); failing that, the first top face with any
/// untyped vertex, whose untyped vertices receive the missing types in
/// increasing order.
pub fn infer_typing(x: &Complex) -> Result<Typing> {
    let d = x.dim();
    let mut types: Vec<Option<usize>> = vec![None; x.vertex_table().len()];
    let tops = x.top_faces();
    let untyped = |types: &[Option<usize>], f: &crate::complex::Face| {
        f.vertices().iter().filter(|v| types[**v as usize].is_none()).count()
    };
    loop {
        let pick = tops
            .iter()
            .find(|f| untyped(&types, f) == 1)
            .or_else(|| tops.iter().find(|f| untyped(&types, f) > 0));
        let Some(face) = pick else {
            break;
        };
        let used: Vec<usize> = face.vertices().iter().filter_map(|v| types[*v as usize]).collect();
        let mut missing = (0..=d).filter(|t| !used.contains(t));
        for &v in face.vertices() {
            if types[v as usize].is_none() {
                match missing.next() {
                    Some(t) => types[v as usize] = Some(t),
                    None => {
                        return Err(HdxError::NoValidTyping(format!(
                            "top face {:?} repeats a type",
                            x.face_labels(face)
                        )))
                    }
                }
            }
        }
    }
    let typing = Typing(types);
    for f in tops {
        if typing.mask(f.vertices()).is_none() {
            return Err(HdxError::NoValidTyping(format!(
                "top face {:?} repeats a type",
                x.face_labels(f)
            )));
        }
    }
    Ok(typing)
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularEntry {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub count: u64,
}

#[derive(Clone, Debug)]
pub struct RegularStructure {
    pub typing: Typing,
    pub part_sizes: Vec<usize>,
    /// `k_I^J` for every `I ⊆ J ⊆ [d]`, keyed by type bitmasks.
    pub table: HashMap<(usize, usize), u64>,
}

impl RegularStructure {
    pub fn k(&self, i: usize, j: usize) -> Option<u64> {
        self.table.get(&(i, j)).copied()
    }

    pub fn entries(&self) -> Vec<RegularEntry> {
        let bits = |m: usize| (0..usize::BITS as usize).filter(|b| m >> b & 1 == 1).collect();
        let mut keys: Vec<&(usize, usize)> = self.table.keys().collect();
        keys.sort();
        keys.into_iter()
            .map(|&(i, j)| RegularEntry {
                i: bits(i),
                j: bits(j),
                count: self.table[&(i, j)],
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityViolation {
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    pub face: Vec<String>,
    pub count: u64,
    pub expected: u64,
}

#[derive(Clone, Debug)]
pub enum Regularity {
    Regular(RegularStructure),
    Irregular(RegularityViolation),
}

impl Regularity {
    pub fn structure(self) -> Result<RegularStructure> {
        match self {
            Regularity::Regular(r) => Ok(r),
            Regularity::Irregular(v) => Err(HdxError::PreconditionUnverified(format!(
                "complex is not regular: face {:?} of type {:?} lies in {} faces of type {:?}, others in {}",
                v.face, v.i, v.count, v.j, v.expected
            ))),
        }
    }
}

/// Checks both regularity conditions for the given typing (or an inferred
/// one): every top face is transversal, and every `I`-typed face lies in the
/// same number of `J`-typed faces for all `I ⊆ J`.
pub fn regularity(x: &Complex, typing: Option<&Typing>) -> Result<Regularity> {
    let typing = match typing {
        Some(t) => t.clone(),
        None => infer_typing(x)?,
    };
    let d = x.dim();
    let full = (1usize << (d + 1)) - 1;
    let bits = |m: usize| (0..=d).filter(|b| m >> b & 1 == 1).collect::<Vec<_>>();
    // mask of every face, by level
    let mut masks: Vec<Vec<usize>> = Vec::new();
    for k in -1..=d as i32 {
        let mut lv = Vec::new();
        for f in x.faces(k) {
            match typing.mask(f.vertices()) {
                Some(m) if m <= full => lv.push(m),
                _ => {
                    return Ok(Regularity::Irregular(RegularityViolation {
                        i: Vec::new(),
                        j: (0..=d).collect(),
                        face: x.face_labels(f),
                        count: 0,
                        expected: 1,
                    }))
                }
            }
        }
        masks.push(lv);
    }
    // cnt[level][face][J] = J-typed faces containing the face
    let width = full + 1;
    let mut cnt: Vec<Vec<u64>> = (-1..=d as i32).map(|k| vec![0u64; x.num_faces(k) * width]).collect();
    for k in -1..=d as i32 {
        for (t, f) in x.faces(k).iter().enumerate() {
            let j = masks[(k + 1) as usize][t];
            for sub in f.subfaces() {
                let s = x.face_index(&sub).expect("subface");
                cnt[sub.len()][s * width + j] += 1;
            }
        }
    }
    let mut table = HashMap::new();
    for k in -1..=d as i32 {
        for (s, f) in x.faces(k).iter().enumerate() {
            let i = masks[(k + 1) as usize][s];
            let mut j = i;
            // every superset J of I
            loop {
                let c = cnt[(k + 1) as usize][s * width + j];
                let e = *table.entry((i, j)).or_insert(c);
                if e != c {
                    return Ok(Regularity::Irregular(RegularityViolation {
                        i: bits(i),
                        j: bits(j),
                        face: x.face_labels(f),
                        count: c,
                        expected: e,
                    }));
                }
                if j == full {
                    break;
                }
                j = (j + 1) | i;
            }
        }
    }
    let mut part_sizes = vec![0; d + 1];
    for f in x.faces(0) {
        part_sizes[typing.get(f.vertices()[0]).unwrap()] += 1;
    }
    Ok(Regularity::Regular(RegularStructure {
        typing,
        part_sizes,
        table,
    }))
}
