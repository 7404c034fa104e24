//! Pure simplicial complexes with exact top-face-count weights.
//!
//! Faces are stored per dimension, from the empty face (dimension -1) up to
//! the top dimension `d`. Within a dimension faces are sorted lexicographically
//! on their vertex ids, and cochain bit indices follow that order. Vertex ids
//! are dense integers assigned in natural-sort order of the vertex labels, so
//! reloading a saved complex reproduces the same ordering.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::ops::Deref;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::cochain::Cochain;
use crate::error::{HdxError, Result};
use crate::rational::{binomial, binomial_i, rat_u, Rat};

pub type VertexId = u32;

static NEXT_COMPLEX_ID: AtomicU64 = AtomicU64::new(1);

fn fresh_id() -> u64 {
    NEXT_COMPLEX_ID.fetch_add(1, AtomicOrdering::Relaxed)
}

/// A face given by its strictly increasing vertex ids. The empty face is allowed.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face(Vec<VertexId>);

impl Face {
    pub fn empty() -> Face {
        Face(Vec::new())
    }

    /// Sorts and deduplicates the given vertices.
    pub fn new(mut vertices: Vec<VertexId>) -> Face {
        vertices.sort_unstable();
        vertices.dedup();
        Face(vertices)
    }

    pub fn vertex(v: VertexId) -> Face {
        Face(vec![v])
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dim(&self) -> i32 {
        self.0.len() as i32 - 1
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                match w.cmp(v) {
                    Ordering::Less => continue,
                    Ordering::Equal => continue 'outer,
                    Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    pub fn is_disjoint(&self, other: &Face) -> bool {
        self.0.iter().all(|v| !other.contains_vertex(*v))
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut v = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                Ordering::Less => {
                    v.push(self.0[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    v.push(other.0[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    v.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        v.extend_from_slice(&self.0[i..]);
        v.extend_from_slice(&other.0[j..]);
        Face(v)
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| other.contains_vertex(*v)).collect())
    }

    pub fn difference(&self, other: &Face) -> Face {
        Face(self.0.iter().copied().filter(|v| !other.contains_vertex(*v)).collect())
    }

    /// The facet obtained by dropping the vertex at position `pos`.
    pub fn without(&self, pos: usize) -> Face {
        let mut v = self.0.clone();
        v.remove(pos);
        Face(v)
    }

    /// All subsets of this face, including the empty face and the face itself.
    pub fn subfaces(&self) -> impl Iterator<Item = Face> + '_ {
        let n = self.0.len();
        assert!(n < 32, "face too large to enumerate subfaces");
        (0u32..1 << n).map(move |mask| {
            Face(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| self.0[i])
                    .collect(),
            )
        })
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<Vec<VertexId>> for Face {
    fn from(v: Vec<VertexId>) -> Self {
        Face::new(v)
    }
}

/// Vertex labels shared between a complex and everything derived from it.
#[derive(Debug)]
pub struct VertexTable {
    labels: Vec<String>,
    lookup: HashMap<String, VertexId>,
}

impl VertexTable {
    /// Builds a table whose ids follow natural-sort order of the labels.
    pub fn from_labels<I, S>(labels: I) -> VertexTable
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        labels.sort_by(|a, b| label_order(a, b));
        labels.dedup();
        let lookup = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as VertexId))
            .collect();
        VertexTable { labels, lookup }
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v as usize]
    }

    pub fn id(&self, label: &str) -> Option<VertexId> {
        self.lookup.get(label).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// Natural order on vertex labels ("v2" < "v10"), ties broken bytewise.
pub fn label_order(a: &str, b: &str) -> Ordering {
    natord::compare(a, b).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug)]
struct Level {
    faces: Vec<Face>,
    index: HashMap<Face, usize>,
    top_count: Vec<u64>,
    /// Indices into the next level up.
    cofacets: Vec<Vec<usize>>,
    /// Indices into the next level down.
    facets: Vec<Vec<usize>>,
}

/// An immutable pure `d`-dimensional simplicial complex.
#[derive(Clone)]
pub struct Complex {
    id: u64,
    dim: usize,
    vertices: Arc<VertexTable>,
    levels: Vec<Level>,
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<usize> = self.levels.iter().map(|l| l.faces.len()).collect();
        f.debug_struct("Complex")
            .field("dim", &self.dim)
            .field("face_counts", &counts)
            .finish()
    }
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.labeled_top_faces() == other.labeled_top_faces()
    }
}

impl Complex {
    /// Downward closure of the given maximal faces, named by vertex labels.
    pub fn from_labeled_faces<S: AsRef<str>>(maximal: &[Vec<S>]) -> Result<Complex> {
        let table = VertexTable::from_labels(
            maximal.iter().flatten().map(|s| s.as_ref().to_string()),
        );
        let faces = maximal
            .iter()
            .map(|f| Face::new(f.iter().map(|s| table.id(s.as_ref()).unwrap()).collect()))
            .collect();
        Complex::from_faces(Arc::new(table), faces)
    }

    /// Downward closure of the given faces over an existing vertex table.
    ///
    /// Faces that are subsets of other faces are absorbed. Fails with `NotPure`
    /// when some maximal face has dimension below the top dimension.
    pub fn from_faces(vertices: Arc<VertexTable>, maximal: Vec<Face>) -> Result<Complex> {
        let top_len = maximal.iter().map(Face::len).max().ok_or(HdxError::EmptyInput)?;
        if top_len == 0 {
            return Err(HdxError::EmptyInput);
        }
        let mut tops: Vec<Face> = maximal.iter().filter(|f| f.len() == top_len).cloned().collect();
        tops.sort();
        tops.dedup();

        let mut counts: HashMap<Face, u64> = HashMap::new();
        for top in &tops {
            for sub in top.subfaces() {
                *counts.entry(sub).or_insert(0) += 1;
            }
        }
        for f in maximal.iter().filter(|f| f.len() < top_len) {
            if !counts.contains_key(f) {
                return Err(HdxError::NotPure {
                    face: f.vertices().iter().map(|v| vertices.label(*v).to_string()).collect(),
                    dim: f.dim(),
                    expected: top_len as i32 - 1,
                });
            }
        }
        Ok(Complex::from_counts(vertices, top_len - 1, counts))
    }

    fn from_counts(vertices: Arc<VertexTable>, dim: usize, counts: HashMap<Face, u64>) -> Complex {
        let mut by_level: Vec<Vec<(Face, u64)>> = vec![Vec::new(); dim + 2];
        for (f, c) in counts {
            by_level[f.len()].push((f, c));
        }
        let mut levels: Vec<Level> = by_level
            .into_iter()
            .map(|mut fs| {
                fs.sort_by(|a, b| a.0.cmp(&b.0));
                let index = fs.iter().enumerate().map(|(i, (f, _))| (f.clone(), i)).collect();
                let n = fs.len();
                let (faces, top_count) = fs.into_iter().unzip();
                Level {
                    faces,
                    index,
                    top_count,
                    cofacets: vec![Vec::new(); n],
                    facets: vec![Vec::new(); n],
                }
            })
            .collect();
        for l in 1..levels.len() {
            let (lower, upper) = levels.split_at_mut(l);
            let lower = &mut lower[l - 1];
            let upper = &mut upper[0];
            for (j, f) in upper.faces.iter().enumerate() {
                let mut fac: Vec<usize> = (0..f.len()).map(|p| lower.index[&f.without(p)]).collect();
                fac.sort_unstable();
                for &i in &fac {
                    lower.cofacets[i].push(j);
                }
                upper.facets[j] = fac;
            }
        }
        Complex {
            id: fresh_id(),
            dim,
            vertices,
            levels,
        }
    }

    /// Identity used to bind cochains; links and skeletons get fresh ids.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertex_table(&self) -> &Arc<VertexTable> {
        &self.vertices
    }

    pub fn label(&self, v: VertexId) -> &str {
        self.vertices.label(v)
    }

    pub fn face_labels(&self, f: &Face) -> Vec<String> {
        f.vertices().iter().map(|v| self.label(*v).to_string()).collect()
    }

    /// Resolves vertex labels to a face (which need not be in the complex).
    pub fn face_from_labels<S: AsRef<str>>(&self, labels: &[S]) -> Result<Face> {
        labels
            .iter()
            .map(|l| {
                self.vertices
                    .id(l.as_ref())
                    .ok_or_else(|| HdxError::UnknownVertex(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(Face::new)
    }

    fn level(&self, k: i32) -> &Level {
        &self.levels[(k + 1) as usize]
    }

    pub fn check_dim(&self, k: i32) -> Result<()> {
        if k < -1 || k > self.dim as i32 {
            Err(HdxError::BadDimension(format!(
                "dimension {k} outside -1..={}",
                self.dim
            )))
        } else {
            Ok(())
        }
    }

    /// Faces of dimension `k` in canonical order.
    pub fn faces(&self, k: i32) -> &[Face] {
        &self.level(k).faces
    }

    pub fn num_faces(&self, k: i32) -> usize {
        self.level(k).faces.len()
    }

    pub fn top_faces(&self) -> &[Face] {
        self.faces(self.dim as i32)
    }

    /// Top faces written with vertex labels, in canonical order.
    pub fn labeled_top_faces(&self) -> Vec<Vec<String>> {
        self.top_faces().iter().map(|f| self.face_labels(f)).collect()
    }

    pub fn face_index(&self, f: &Face) -> Option<usize> {
        if f.len() > self.dim + 1 {
            return None;
        }
        self.level(f.dim()).index.get(f).copied()
    }

    pub fn contains_face(&self, f: &Face) -> bool {
        self.face_index(f).is_some()
    }

    pub(crate) fn require_face(&self, f: &Face) -> Result<usize> {
        self.face_index(f).ok_or_else(|| HdxError::FaceNotInComplex(f.clone()))
    }

    /// Number of top faces containing the `i`-th face of dimension `k`.
    pub fn top_count(&self, k: i32, i: usize) -> u64 {
        self.level(k).top_count[i]
    }

    pub fn top_counts(&self, k: i32) -> &[u64] {
        &self.level(k).top_count
    }

    /// Indices of the `(k+1)`-faces containing the `i`-th `k`-face.
    pub fn cofacets(&self, k: i32, i: usize) -> &[usize] {
        &self.level(k).cofacets[i]
    }

    /// Indices of the `(k-1)`-faces of the `i`-th `k`-face.
    pub fn facets(&self, k: i32, i: usize) -> &[usize] {
        &self.level(k).facets[i]
    }

    /// Common denominator of all weights in dimension `k`:
    /// `C(d+1, k+1) * |X(d)|`.
    pub fn weight_denominator(&self, k: i32) -> u128 {
        binomial(self.dim as u64 + 1, (k + 1) as u64) * self.top_faces().len() as u128
    }

    /// `w(σ) = #{top faces ⊇ σ} / (C(d+1, |σ|) · |X(d)|)`.
    pub fn weight(&self, f: &Face) -> Result<Rat> {
        let i = self.require_face(f)?;
        let k = f.dim();
        Ok(rat_u(self.top_count(k, i) as u128, self.weight_denominator(k)))
    }

    pub(crate) fn check_cochain(&self, a: &Cochain) -> Result<()> {
        if a.complex_id() != self.id {
            Err(HdxError::ComplexMismatch)
        } else {
            Ok(())
        }
    }

    /// Sum of top counts over the members of `a`: the norm times the weight
    /// denominator, an exact integer.
    pub fn mass(&self, a: &Cochain) -> u64 {
        let tc = self.top_counts(a.dim());
        a.members().map(|i| tc[i]).sum()
    }

    pub fn norm(&self, a: &Cochain) -> Result<Rat> {
        self.check_cochain(a)?;
        Ok(rat_u(self.mass(a) as u128, self.weight_denominator(a.dim())))
    }

    pub fn empty_cochain(&self, k: i32) -> Cochain {
        Cochain::new(self.id, k, self.num_faces(k))
    }

    pub fn full_cochain(&self, k: i32) -> Cochain {
        let mut c = self.empty_cochain(k);
        c.fill();
        c
    }

    pub fn cochain_from_indices<I: IntoIterator<Item = usize>>(&self, k: i32, idx: I) -> Cochain {
        let mut c = self.empty_cochain(k);
        for i in idx {
            c.insert(i);
        }
        c
    }

    pub fn cochain_from_faces(&self, k: i32, faces: &[Face]) -> Result<Cochain> {
        self.check_dim(k)?;
        let mut c = self.empty_cochain(k);
        for f in faces {
            if f.dim() != k {
                return Err(HdxError::BadDimension(format!(
                    "face {f:?} has dimension {}, expected {k}",
                    f.dim()
                )));
            }
            c.insert(self.require_face(f)?);
        }
        Ok(c)
    }

    pub fn cochain_faces(&self, a: &Cochain) -> Vec<Face> {
        a.members().map(|i| self.faces(a.dim())[i].clone()).collect()
    }

    /// `Γ^r(A)`: the `r`-faces containing some member of `A`.
    pub fn container(&self, a: &Cochain, r: i32) -> Result<Cochain> {
        self.check_cochain(a)?;
        let k = a.dim();
        if r < k || r > self.dim as i32 {
            return Err(HdxError::BadDimension(format!(
                "container needs {k} <= r <= {}, got r = {r}",
                self.dim
            )));
        }
        let mut cur = a.clone();
        for j in k..r {
            let mut next = self.empty_cochain(j + 1);
            for i in cur.members() {
                for &c in self.cofacets(j, i) {
                    next.insert(c);
                }
            }
            cur = next;
        }
        Ok(cur)
    }

    /// The link `X_σ`, a pure `(d - |σ|)`-complex with its own weights.
    pub fn link(&self, sigma: &Face) -> Result<Link> {
        self.require_face(sigma)?;
        if sigma.len() > self.dim {
            return Err(HdxError::BadDimension(format!(
                "link of a top face {sigma:?} is the trivial complex"
            )));
        }
        let tops: Vec<Face> = self
            .top_faces()
            .iter()
            .filter(|t| sigma.is_subset_of(t))
            .map(|t| t.difference(sigma))
            .collect();
        let complex = Complex::from_faces(self.vertices.clone(), tops)?;
        Ok(Link {
            parent: self.id,
            sigma: sigma.clone(),
            complex,
        })
    }

    /// `I_σ(A) = {τ ∈ X_σ : τ ⊔ σ ∈ A}`.
    pub fn localize(&self, link: &Link, a: &Cochain) -> Result<Cochain> {
        self.check_cochain(a)?;
        self.check_link(link)?;
        let s = link.sigma.len() as i32;
        let k = a.dim();
        if k - s < -1 {
            return Err(HdxError::BadDimension(format!(
                "cannot localize a {k}-cochain at a face of size {s}"
            )));
        }
        let mut out = link.complex.empty_cochain(k - s);
        for t in a.members() {
            let tau = &self.faces(k)[t];
            if link.sigma.is_subset_of(tau) {
                let rho = tau.difference(&link.sigma);
                out.insert(link.complex.face_index(&rho).expect("link face"));
            }
        }
        Ok(out)
    }

    /// `I^σ(B) = {τ ⊔ σ : τ ∈ B}`.
    pub fn lift(&self, link: &Link, b: &Cochain) -> Result<Cochain> {
        self.check_link(link)?;
        link.complex.check_cochain(b)?;
        let s = link.sigma.len() as i32;
        let j = b.dim();
        let mut out = self.empty_cochain(j + s);
        for r in b.members() {
            let tau = link.complex.faces(j)[r].union(&link.sigma);
            out.insert(self.face_index(&tau).expect("lifted face"));
        }
        Ok(out)
    }

    fn check_link(&self, link: &Link) -> Result<()> {
        if link.parent != self.id {
            Err(HdxError::ComplexMismatch)
        } else {
            Ok(())
        }
    }

    /// The `k`-skeleton `X^(k)` as a pure `k`-complex with its own weights.
    pub fn skeleton(&self, k: i32) -> Result<Complex> {
        if k < 0 || k > self.dim as i32 {
            return Err(HdxError::BadDimension(format!(
                "skeleton dimension {k} outside 0..={}",
                self.dim
            )));
        }
        let mut counts = HashMap::new();
        for f in self.faces(k) {
            for sub in f.subfaces() {
                *counts.entry(sub).or_insert(0u64) += 1;
            }
        }
        Ok(Complex::from_counts(self.vertices.clone(), k as usize, counts))
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.faces(0).iter().map(|f| f.vertices()[0]).collect()
    }

    /// `E(A, B)`: edges with one endpoint in `A` and the other in `B`.
    pub fn edges_between(&self, a: &[VertexId], b: &[VertexId]) -> Result<Cochain> {
        if self.dim < 1 {
            return Err(HdxError::BadDimension("complex has no edges".into()));
        }
        let mut in_a = HashSet::new();
        let mut in_b = HashSet::new();
        for (src, set) in [(a, &mut in_a), (b, &mut in_b)] {
            for &v in src {
                if self.face_index(&Face::vertex(v)).is_none() {
                    let name = if (v as usize) < self.vertices.len() {
                        self.label(v).to_string()
                    } else {
                        format!("#{v}")
                    };
                    return Err(HdxError::UnknownVertex(name));
                }
                set.insert(v);
            }
        }
        let mut out = self.empty_cochain(1);
        for (i, e) in self.faces(1).iter().enumerate() {
            let (u, v) = (e.vertices()[0], e.vertices()[1]);
            if (in_a.contains(&u) && in_b.contains(&v)) || (in_a.contains(&v) && in_b.contains(&u)) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// `|X_v|` for the vertex `v`: the number of faces containing `v`
    /// (counting `{v}` itself, which corresponds to the empty face of the link).
    pub fn vertex_link_size(&self, v: VertexId) -> usize {
        (0..=self.dim as i32)
            .map(|k| self.faces(k).iter().filter(|f| f.contains_vertex(v)).count())
            .sum()
    }

    /// `max_v |X_v|`, the bounded-degree constant `Q`.
    pub fn max_vertex_link_size(&self) -> usize {
        let mut counts: HashMap<VertexId, usize> = HashMap::new();
        for k in 0..=self.dim as i32 {
            for f in self.faces(k) {
                for &v in f.vertices() {
                    *counts.entry(v).or_insert(0) += 1;
                }
            }
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// `max_{σ ∈ X(k)} |X_σ(d - |σ|)|`, the degree bound at dimension `k`.
    pub fn max_top_count(&self, k: i32) -> u64 {
        self.top_counts(k).iter().copied().max().unwrap_or(0)
    }

    /// Binomial helper for weight identities: `C(n, k)` with negative guards.
    pub fn choose(n: i64, k: i64) -> u128 {
        binomial_i(n, k)
    }
}

/// A link `X_σ` together with the face it was taken at.
#[derive(Clone, Debug)]
pub struct Link {
    parent: u64,
    sigma: Face,
    complex: Complex,
}

impl Link {
    pub fn sigma(&self) -> &Face {
        &self.sigma
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn into_complex(self) -> Complex {
        self.complex
    }
}

impl Deref for Link {
    type Target = Complex;

    fn deref(&self) -> &Complex {
        &self.complex
    }
}
