//! Finite simplicial complexes, vertex maps, face maps and barycentric points.
//!
//! Faces are `BTreeSet`s, so every face and every family of faces iterates in
//! the canonical order induced by the vertex type's `Ord`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Debug, Display};
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::TOLERANCE;

/// A face is a finite set of vertices.
pub type Face<V> = BTreeSet<V>;

/// Anything usable as a vertex identifier.
pub trait Vertex: Ord + Clone + Debug {}
impl<T: Ord + Clone + Debug> Vertex for T {}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComplexError {
    #[error("face list is not closed under inclusion: {missing} is missing but lies in {face}")]
    NotClosed { missing: String, face: String },
    #[error("vertex {0} is not assigned by the vertex map")]
    Unassigned(String),
    #[error("vertex {0} is not a vertex of the complex")]
    UnknownVertex(String),
    #[error("face {face} has image {image}, which is not a face of the target")]
    NotSimplicial { face: String, image: String },
    #[error("face map is not order preserving: {smaller} ⊆ {larger} but images are not nested")]
    NotOrderPreserving { smaller: String, larger: String },
    #[error("face map domain differs from the faces of its source complex")]
    DomainMismatch,
    #[error("maps do not share source and target complexes")]
    SourceMismatch,
    #[error("invalid realization point: {0}")]
    InvalidPoint(String),
}

fn show<V: Debug>(face: &Face<V>) -> String {
    format!("{{{}}}", face.iter().map(|v| format!("{v:?}")).join(","))
}

/// All subsets of `face`, including the empty set and `face` itself.
pub fn subsets<V: Vertex>(face: &Face<V>) -> impl Iterator<Item = Face<V>> + '_ {
    face.iter().cloned().powerset().map(|s| s.into_iter().collect())
}

/// A finite simplicial complex: a vertex set with an inclusion-closed family
/// of faces. The empty face is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Complex<V: Ord> {
    vertices: BTreeSet<V>,
    faces: BTreeSet<Face<V>>,
}

impl<V: Vertex> Complex<V> {
    /// Accepts `face_list` only if it is already closed under inclusion.
    /// The empty face is added if absent.
    pub fn validate(face_list: impl IntoIterator<Item = Face<V>>) -> Result<Self, ComplexError> {
        let mut faces: BTreeSet<Face<V>> = face_list.into_iter().collect();
        faces.insert(Face::new());
        // Closure under one-vertex removal implies closure under inclusion.
        for face in &faces {
            for v in face {
                let mut smaller = face.clone();
                smaller.remove(v);
                if !faces.contains(&smaller) {
                    return Err(ComplexError::NotClosed {
                        missing: show(&smaller),
                        face: show(face),
                    });
                }
            }
        }
        let vertices = faces.iter().flatten().cloned().collect();
        Ok(Self { vertices, faces })
    }

    /// The smallest complex containing every face of `face_list`.
    pub fn close_down(face_list: impl IntoIterator<Item = Face<V>>) -> Self {
        let mut faces = BTreeSet::new();
        faces.insert(Face::new());
        for face in face_list {
            if faces.contains(&face) {
                continue;
            }
            faces.extend(subsets(&face));
        }
        let vertices = faces.iter().flatten().cloned().collect();
        Self { vertices, faces }
    }

    /// The full simplex on `vertices`: every subset is a face.
    pub fn simplex(vertices: impl IntoIterator<Item = V>) -> Self {
        let top: Face<V> = vertices.into_iter().collect();
        Self::close_down([top])
    }

    pub fn vertices(&self) -> &BTreeSet<V> {
        &self.vertices
    }

    pub fn faces(&self) -> &BTreeSet<Face<V>> {
        &self.faces
    }

    pub fn contains(&self, face: &Face<V>) -> bool {
        self.faces.contains(face)
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Maximal faces in canonical order.
    pub fn facets(&self) -> Vec<Face<V>> {
        self.faces
            .iter()
            .filter(|face| {
                !self
                    .vertices
                    .iter()
                    .filter(|v| !face.contains(*v))
                    .any(|v| {
                        let mut larger = (*face).clone();
                        larger.insert(v.clone());
                        self.faces.contains(&larger)
                    })
            })
            .cloned()
            .collect()
    }

    /// Faces of size at most `m` (the `(m-1)`-skeleton).
    pub fn skeleton(&self, m: usize) -> Self {
        let faces: BTreeSet<Face<V>> =
            self.faces.iter().filter(|f| f.len() <= m).cloned().collect();
        let vertices = faces.iter().flatten().cloned().collect();
        Self { vertices, faces }
    }

    /// Join with `other`: faces are the subsets of the product vertex set whose
    /// two projections are faces.
    pub fn join<W: Vertex>(&self, other: &Complex<W>) -> Complex<(V, W)> {
        // A subset of V×W has face projections iff it lies in A×B for faces A, B,
        // so products of facets generate the join.
        let ours = self.facets();
        let theirs = other.facets();
        let generators = ours.iter().cartesian_product(theirs.iter()).map(|(a, b)| {
            a.iter()
                .cartesian_product(b.iter())
                .map(|(v, w)| (v.clone(), w.clone()))
                .collect::<Face<(V, W)>>()
        });
        Complex::close_down(generators)
    }
}

impl<V: Vertex + Display> Complex<V> {
    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            vertices: self.vertices.iter().map(ToString::to_string).collect(),
            faces: self
                .faces
                .iter()
                .map(|f| f.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

/// Text form of a complex: `{"vertices":[...],"faces":[[...],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDocument {
    pub vertices: Vec<String>,
    pub faces: Vec<Vec<String>>,
}

impl ComplexDocument {
    /// Rebuilds the complex over string vertices, rejecting documents whose
    /// face family is not inclusion closed or mentions undeclared vertices.
    pub fn to_complex(&self) -> Result<Complex<String>, ComplexError> {
        let declared: BTreeSet<&String> = self.vertices.iter().collect();
        for v in self.faces.iter().flatten() {
            if !declared.contains(v) {
                return Err(ComplexError::UnknownVertex(v.clone()));
            }
        }
        let complex =
            Complex::validate(self.faces.iter().map(|f| f.iter().cloned().collect::<Face<_>>()))?;
        if let Some(v) = self.vertices.iter().find(|v| !complex.vertices.contains(*v)) {
            return Err(ComplexError::UnknownVertex(v.clone()));
        }
        Ok(complex)
    }
}

/// A simplicial map given by a total assignment on source vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexMap<V: Ord, W: Ord> {
    source: Arc<Complex<V>>,
    target: Arc<Complex<W>>,
    assignment: BTreeMap<V, W>,
}

impl<V: Vertex, W: Vertex> VertexMap<V, W> {
    pub fn new(
        source: Arc<Complex<V>>,
        target: Arc<Complex<W>>,
        assignment: BTreeMap<V, W>,
    ) -> Result<Self, ComplexError> {
        if let Some(v) = source.vertices.iter().find(|v| !assignment.contains_key(*v)) {
            return Err(ComplexError::Unassigned(format!("{v:?}")));
        }
        if let Some(v) = assignment.keys().find(|v| !source.vertices.contains(*v)) {
            return Err(ComplexError::UnknownVertex(format!("{v:?}")));
        }
        let map = Self { source, target, assignment };
        for face in map.source.faces() {
            let image = map.image(face);
            if !map.target.contains(&image) {
                return Err(ComplexError::NotSimplicial { face: show(face), image: show(&image) });
            }
        }
        Ok(map)
    }

    pub fn source(&self) -> &Arc<Complex<V>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex<W>> {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<V, W> {
        &self.assignment
    }

    /// Image of a single vertex. Panics if `v` is not a source vertex.
    pub fn apply(&self, v: &V) -> &W {
        &self.assignment[v]
    }

    pub fn image(&self, face: &Face<V>) -> Face<W> {
        face.iter().map(|v| self.assignment[v].clone()).collect()
    }

    /// The face map `A ↦ {c(v) | v ∈ A}`.
    pub fn induced(&self) -> FaceMap<V, W> {
        FaceMap {
            source: self.source.clone(),
            target: self.target.clone(),
            image: self.source.faces().iter().map(|f| (f.clone(), self.image(f))).collect(),
        }
    }

    /// Geometric realization of the map: each target vertex collects the
    /// weight of its preimages.
    pub fn pushforward(&self, k: &RealizationPoint<V>) -> RealizationPoint<W> {
        let mut weights: BTreeMap<W, f64> = BTreeMap::new();
        for (v, w) in &k.weights {
            *weights.entry(self.assignment[v].clone()).or_insert(0.0) += w;
        }
        RealizationPoint { complex: self.target.clone(), weights }
    }
}

impl<V: Vertex + Display, W: Vertex + Serialize> VertexMap<V, W> {
    pub fn to_document(&self) -> VertexMapDocument<W> {
        VertexMapDocument {
            assignment: self.assignment.iter().map(|(v, w)| (v.to_string(), w.clone())).collect(),
        }
    }
}

/// Text form of a vertex map: `{"assignment":{v:w,...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMapDocument<W> {
    pub assignment: BTreeMap<String, W>,
}

/// An order preserving map between face families.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceMap<V: Ord, W: Ord> {
    source: Arc<Complex<V>>,
    target: Arc<Complex<W>>,
    image: BTreeMap<Face<V>, Face<W>>,
}

impl<V: Vertex, W: Vertex> FaceMap<V, W> {
    pub fn new(
        source: Arc<Complex<V>>,
        target: Arc<Complex<W>>,
        image: BTreeMap<Face<V>, Face<W>>,
    ) -> Result<Self, ComplexError> {
        if image.len() != source.len() || !image.keys().eq(source.faces().iter()) {
            return Err(ComplexError::DomainMismatch);
        }
        for (face, img) in &image {
            if !target.contains(img) {
                return Err(ComplexError::NotSimplicial { face: show(face), image: show(img) });
            }
            for v in face {
                let mut smaller = face.clone();
                smaller.remove(v);
                if !image[&smaller].is_subset(img) {
                    return Err(ComplexError::NotOrderPreserving {
                        smaller: show(&smaller),
                        larger: show(face),
                    });
                }
            }
        }
        Ok(Self { source, target, image })
    }

    /// Builds the map from a rule evaluated on every source face.
    pub fn from_fn(
        source: Arc<Complex<V>>,
        target: Arc<Complex<W>>,
        rule: impl Fn(&Face<V>) -> Face<W>,
    ) -> Result<Self, ComplexError> {
        let image = source.faces().iter().map(|f| (f.clone(), rule(f))).collect();
        Self::new(source, target, image)
    }

    pub fn source(&self) -> &Arc<Complex<V>> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Complex<W>> {
        &self.target
    }

    pub fn apply(&self, face: &Face<V>) -> Option<&Face<W>> {
        self.image.get(face)
    }

    pub fn images(&self) -> &BTreeMap<Face<V>, Face<W>> {
        &self.image
    }
}

fn same<T: PartialEq>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Specialization order: `f ≤ g` iff `f(A) ⊆ g(A)` for every face `A`.
pub fn leq_maps<V: Vertex, W: Vertex>(
    f: &FaceMap<V, W>,
    g: &FaceMap<V, W>,
) -> Result<bool, ComplexError> {
    if !same(&f.source, &g.source) || !same(&f.target, &g.target) {
        return Err(ComplexError::SourceMismatch);
    }
    Ok(f.image.iter().all(|(face, img)| img.is_subset(&g.image[face])))
}

/// A vertex map is a Sperner coloring for `f` when the face map it induces
/// specializes `f`.
pub fn is_sperner_coloring<V: Vertex, W: Vertex>(
    c: &VertexMap<V, W>,
    f: &FaceMap<V, W>,
) -> Result<bool, ComplexError> {
    leq_maps(&c.induced(), f)
}

/// A point of the geometric realization, as barycentric weights on vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationPoint<V: Ord> {
    complex: Arc<Complex<V>>,
    weights: BTreeMap<V, f64>,
}

impl<V: Vertex> RealizationPoint<V> {
    pub fn new(complex: Arc<Complex<V>>, weights: BTreeMap<V, f64>) -> Result<Self, ComplexError> {
        for (v, w) in &weights {
            if !complex.vertices.contains(v) {
                return Err(ComplexError::UnknownVertex(format!("{v:?}")));
            }
            if !w.is_finite() || *w < 0.0 {
                return Err(ComplexError::InvalidPoint(format!("weight {w} on {v:?}")));
            }
        }
        let total: f64 = weights.values().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(ComplexError::InvalidPoint(format!("weights sum to {total}")));
        }
        let point = Self { complex, weights };
        let support = point.support();
        if !point.complex.contains(&support) {
            return Err(ComplexError::InvalidPoint(format!(
                "support {} is not a face",
                show(&support)
            )));
        }
        Ok(point)
    }

    /// The point with all weight on `v`.
    pub fn vertex(complex: Arc<Complex<V>>, v: V) -> Result<Self, ComplexError> {
        Self::new(complex, BTreeMap::from([(v, 1.0)]))
    }

    /// Uniform weights over a nonempty face.
    pub fn barycenter(complex: Arc<Complex<V>>, face: &Face<V>) -> Result<Self, ComplexError> {
        if face.is_empty() {
            return Err(ComplexError::InvalidPoint("the empty face has no barycenter".into()));
        }
        let w = 1.0 / face.len() as f64;
        Self::new(complex, face.iter().map(|v| (v.clone(), w)).collect())
    }

    pub fn complex(&self) -> &Arc<Complex<V>> {
        &self.complex
    }

    pub fn weights(&self) -> &BTreeMap<V, f64> {
        &self.weights
    }

    pub fn weight(&self, v: &V) -> f64 {
        self.weights.get(v).copied().unwrap_or(0.0)
    }

    /// Vertices carrying positive weight.
    pub fn support(&self) -> Face<V> {
        self.weights.iter().filter(|(_, w)| **w > 0.0).map(|(v, _)| v.clone()).collect()
    }

    pub fn total(&self) -> f64 {
        self.weights.values().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn face(vs: &[&'static str]) -> Face<&'static str> {
        vs.iter().copied().collect()
    }

    #[test]
    fn full_edge_is_valid() {
        let k = Complex::validate([face(&[]), face(&["a"]), face(&["b"]), face(&["a", "b"])])
            .unwrap();
        assert_eq!(k.len(), 4);
        assert_eq!(k, Complex::simplex(["a", "b"]));
    }

    #[test]
    fn missing_singleton_is_rejected() {
        let err = Complex::validate([face(&[]), face(&["a", "b"])]).unwrap_err();
        assert_eq!(
            err,
            ComplexError::NotClosed { missing: "{\"b\"}".into(), face: "{\"a\",\"b\"}".into() }
        );
        let k = Complex::validate([face(&["a"]), face(&["b"])]).unwrap();
        assert_eq!(k.facets(), vec![face(&["a"]), face(&["b"])]);
    }

    #[test]
    fn skeleton_examples() {
        let tri = Complex::simplex(["a", "b", "c"]);
        let boundary = tri.skeleton(2);
        assert_eq!(boundary.len(), 7);
        assert!(!boundary.contains(&face(&["a", "b", "c"])));
        let empty = tri.skeleton(0);
        assert_eq!(empty.faces().len(), 1);
        assert!(empty.vertices().is_empty());
        let points = Complex::simplex(["a", "b", "c", "d"]).skeleton(1);
        assert_eq!(points.len(), 5);
        assert_eq!(points.facets().len(), 4);
    }

    #[test]
    fn simplex_counts() {
        assert_eq!(Complex::simplex([1, 2]).len(), 4);
        assert_eq!(Complex::<u8>::simplex([]).len(), 1);
        for n in 0..=10u32 {
            assert_eq!(Complex::simplex(0..n).len(), 1 << n);
        }
    }

    #[test]
    fn join_of_points() {
        let a = Complex::simplex(["a"]);
        let b = Complex::simplex(["b"]);
        assert_eq!(a.join(&b), Complex::simplex([("a", "b")]));

        // Two discrete two-point spaces: a face may not repeat a coordinate.
        let p = Complex::simplex([0, 1]).skeleton(1);
        let q = Complex::simplex(['x', 'y']).skeleton(1);
        let j = p.join(&q);
        assert_eq!(j.vertices().len(), 4);
        assert_eq!(j.len(), 5);
    }

    #[test]
    fn leq_maps_reflexive_and_strict() {
        let k = Arc::new(Complex::simplex(["u", "v"]));
        let t = Arc::new(Complex::simplex([1, 2]));
        let id = FaceMap::from_fn(k.clone(), t.clone(), |f| {
            f.iter().map(|v| if *v == "u" { 1 } else { 2 }).collect()
        })
        .unwrap();
        assert!(leq_maps(&id, &id).unwrap());
        let constant = FaceMap::from_fn(k.clone(), t.clone(), |f| {
            if f.is_empty() { Face::new() } else { Face::from([2]) }
        })
        .unwrap();
        assert!(!leq_maps(&constant, &id).unwrap());
        let other = Arc::new(Complex::simplex(["u"]));
        let small = FaceMap::from_fn(other, t, |f| f.iter().map(|_| 1).collect()).unwrap();
        assert_eq!(leq_maps(&small, &id), Err(ComplexError::SourceMismatch));
    }

    #[test]
    fn identity_coloring_of_undivided_simplex() {
        let k = Arc::new(Complex::simplex([1, 2, 3]));
        let c = VertexMap::new(k.clone(), k.clone(), (1..=3).map(|v| (v, v)).collect()).unwrap();
        let f = FaceMap::from_fn(k.clone(), k, |f| f.clone()).unwrap();
        assert!(is_sperner_coloring(&c, &f).unwrap());
    }

    #[test]
    fn vertex_map_must_be_simplicial() {
        let edge = Arc::new(Complex::simplex(["u", "v"]));
        let points = Arc::new(Complex::simplex([1, 2]).skeleton(1));
        let err = VertexMap::new(edge.clone(), points.clone(), BTreeMap::from([("u", 1), ("v", 2)]))
            .unwrap_err();
        assert!(matches!(err, ComplexError::NotSimplicial { .. }));
        let err = VertexMap::new(edge, points, BTreeMap::from([("u", 1)])).unwrap_err();
        assert!(matches!(err, ComplexError::Unassigned(_)));
    }

    #[test]
    fn pushforward_examples() {
        let edge = Arc::new(Complex::simplex(["u", "w"]));
        let colors = Arc::new(Complex::simplex([1, 2]));
        let c = VertexMap::new(edge.clone(), colors.clone(), BTreeMap::from([("u", 1), ("w", 1)]))
            .unwrap();
        let at_u = RealizationPoint::vertex(edge.clone(), "u").unwrap();
        assert_eq!(c.pushforward(&at_u).weights(), &BTreeMap::from([(1, 1.0)]));
        let mid = RealizationPoint::barycenter(edge, &face(&["u", "w"])).unwrap();
        let image = c.pushforward(&mid);
        assert_eq!(image.support(), Face::from([1]));
        assert!((image.weight(&1) - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn realization_point_validation() {
        let k = Arc::new(Complex::simplex([1, 2]).skeleton(1));
        let err = RealizationPoint::new(k.clone(), BTreeMap::from([(1, 0.5), (2, 0.5)])).unwrap_err();
        assert!(matches!(err, ComplexError::InvalidPoint(_)));
        let err = RealizationPoint::new(k.clone(), BTreeMap::from([(1, 0.9)])).unwrap_err();
        assert!(matches!(err, ComplexError::InvalidPoint(_)));
        assert!(RealizationPoint::new(k, BTreeMap::from([(1, 1.0), (2, 0.0)])).is_ok());
    }

    #[test]
    fn document_roundtrip() {
        let k = Complex::simplex(["a", "b"]).join(&Complex::simplex(["x"]));
        let doc = Complex::simplex(["a", "b", "c"]).skeleton(2).to_document();
        let text = serde_json::to_string(&doc).unwrap();
        assert!(text.starts_with("{\"vertices\":[\"a\",\"b\",\"c\"],\"faces\":[[],[\"a\"],"));
        let back: ComplexDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_complex().unwrap().len(), 7);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn document_rejects_unknown_vertices() {
        let doc = ComplexDocument { vertices: vec!["a".into()], faces: vec![vec!["b".into()]] };
        assert!(matches!(doc.to_complex(), Err(ComplexError::UnknownVertex(_))));
    }
}
