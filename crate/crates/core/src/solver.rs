//! Searching `K_{n,r}` for faces with enough colors under every coloring.
//!
//! A face `σ` is a *size solution* for sizes `m` when `|c_i(σ)| > m_i` for
//! every coloring `i`, and a *full solution* when additionally the color sets
//! jointly cover `N = [1, n]`. Both predicates are upward closed, so facets are
//! scanned first and each solution facet is shrunk to a minimal face.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{ColoringSpec, VertexColoring};
use crate::complex::{is_sperner_coloring, Face};
use crate::hypergraph::{ColorHypergraph, TreeShape};
use crate::partition::{Partition, PartitionComplex};

/// Lower bounds `m_i`: coloring `i` must show more than `m_i` colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SizeVector(pub Vec<usize>);

impl SizeVector {
    pub fn new(m: Vec<usize>) -> Self {
        Self(m)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// `Σ m_i = |N| - 1`, the balance under which a solution is guaranteed.
    pub fn is_balanced_for(&self, colors: usize) -> bool {
        self.sum() + 1 == colors
    }
}

/// All size vectors of length `parts` with entries summing to `total`, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<SizeVector> {
    fn extend(prefix: &mut Vec<usize>, left: usize, parts: usize, out: &mut Vec<SizeVector>) {
        if prefix.len() + 1 == parts {
            prefix.push(left);
            out.push(SizeVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            extend(prefix, left - v, parts, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(SizeVector(Vec::new()));
        }
        return out;
    }
    extend(&mut Vec::new(), total, parts, &mut out);
    out
}

/// `{c(v) : v ∈ σ}`.
pub fn color_set(c: &VertexColoring, face: &Face<Partition>) -> BTreeSet<usize> {
    c.image(face)
}

pub fn is_size_solution(
    face: &Face<Partition>,
    colorings: &[VertexColoring],
    m: &SizeVector,
) -> bool {
    !face.is_empty()
        && colorings.iter().zip(m.as_slice()).all(|(c, &mi)| color_set(c, face).len() > mi)
}

pub fn is_full_solution(
    face: &Face<Partition>,
    colorings: &[VertexColoring],
    m: &SizeVector,
    colors: &BTreeSet<usize>,
) -> bool {
    if !is_size_solution(face, colorings, m) {
        return false;
    }
    let union: BTreeSet<usize> = colorings.iter().flat_map(|c| color_set(c, face)).collect();
    &union == colors
}

pub fn hypergraph_of(
    face: &Face<Partition>,
    colorings: &[VertexColoring],
    colors: &BTreeSet<usize>,
) -> ColorHypergraph {
    ColorHypergraph::new(colors.clone(), colorings.iter().map(|c| color_set(c, face)).collect())
}

/// Everything needed to rebuild an instance whose search came back empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReproductionBundle {
    pub n: usize,
    pub r: u32,
    pub m: SizeVector,
    /// How the colorings were generated, when known.
    pub schemes: Vec<ColoringSpec>,
    pub tiebreaks: Vec<Vec<usize>>,
    /// Explicit vertex colors keyed by cut sequence, e.g. `"0,1,2,5"`.
    pub colorings: Vec<BTreeMap<String, usize>>,
}

impl ReproductionBundle {
    pub fn new(k: &PartitionComplex, colorings: &[VertexColoring], m: &SizeVector) -> Self {
        Self {
            n: k.n(),
            r: k.r(),
            m: m.clone(),
            schemes: Vec::new(),
            tiebreaks: Vec::new(),
            colorings: colorings
                .iter()
                .map(|c| c.assignment().iter().map(|(p, &l)| (p.to_string(), l)).collect())
                .collect(),
        }
    }

    pub fn with_schemes(mut self, schemes: &[ColoringSpec]) -> Self {
        self.tiebreaks = schemes.iter().map(ColoringSpec::tiebreak).collect();
        self.schemes = schemes.to_vec();
        self
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("{colorings} colorings but {sizes} sizes")]
    CountMismatch { colorings: usize, sizes: usize },
    #[error("coloring {0} is not a Sperner coloring of the partition complex")]
    NotSperner(usize),
    #[error("no face satisfies the size condition although Σm = n - 1 (theorem violation)")]
    NoSolution(Box<ReproductionBundle>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// One greedily minimized face per solution facet.
    #[default]
    Greedy,
    /// Every minimal solution face, by scanning all faces. Slow.
    Exhaustive,
}

/// One solution face with all flags recomputed from the face and colorings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub face: Vec<Partition>,
    pub color_sets: Vec<BTreeSet<usize>>,
    pub size_solution: bool,
    pub full_solution: bool,
    pub hypergraph: ColorHypergraph,
    /// Incidence-graph connectivity with every color of `N` covered.
    pub connected: bool,
    pub tree_shape: TreeShape,
    /// No single vertex can be dropped while keeping the same two flags.
    pub minimal: bool,
}

impl SolutionReport {
    pub fn evaluate(
        face: &Face<Partition>,
        colorings: &[VertexColoring],
        m: &SizeVector,
        colors: &BTreeSet<usize>,
    ) -> Self {
        let size_solution = is_size_solution(face, colorings, m);
        let full_solution = is_full_solution(face, colorings, m, colors);
        let hypergraph = hypergraph_of(face, colorings, colors);
        let minimal = face.iter().all(|v| {
            let mut smaller = face.clone();
            smaller.remove(v);
            is_size_solution(&smaller, colorings, m) != size_solution
                || is_full_solution(&smaller, colorings, m, colors) != full_solution
        });
        Self {
            face: face.iter().cloned().collect(),
            color_sets: hypergraph.edges.clone(),
            size_solution,
            full_solution,
            connected: hypergraph.is_connected(),
            tree_shape: hypergraph.tree_shape(),
            hypergraph,
            minimal,
        }
    }

    pub fn face_set(&self) -> Face<Partition> {
        self.face.iter().cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSearch {
    /// `Σm = n - 1`.
    pub theorem_instance: bool,
    pub facets_scanned: usize,
    pub size_solution_facets: usize,
    pub full_solution_facets: usize,
    /// Whether some full-solution facet has a connected color hypergraph.
    /// Connectivity only improves on larger faces, so this decides whether
    /// any full solution face is connected.
    pub connected_exists: bool,
    /// Minimal solution faces in canonical order.
    pub reports: Vec<SolutionReport>,
}

impl SolutionSearch {
    pub fn full_reports(&self) -> impl Iterator<Item = &SolutionReport> {
        self.reports.iter().filter(|r| r.full_solution)
    }
}

/// Drops vertices in canonical order while `keep` still holds. One pass
/// suffices because `keep` is upward closed.
fn minimize(face: &Face<Partition>, keep: impl Fn(&Face<Partition>) -> bool) -> Face<Partition> {
    let mut current = face.clone();
    for v in face {
        let mut smaller = current.clone();
        smaller.remove(v);
        if keep(&smaller) {
            current = smaller;
        }
    }
    current
}

fn check_inputs(
    k: &PartitionComplex,
    colorings: &[VertexColoring],
    m: &SizeVector,
) -> Result<(), SolveError> {
    if colorings.len() != m.len() {
        return Err(SolveError::CountMismatch { colorings: colorings.len(), sizes: m.len() });
    }
    let f = k.subdivision_face_map();
    for (i, c) in colorings.iter().enumerate() {
        if !matches!(is_sperner_coloring(c, &f), Ok(true)) {
            return Err(SolveError::NotSperner(i));
        }
    }
    Ok(())
}

/// Scans every facet of `k`, then reports minimal solution faces.
///
/// When `Σm = n - 1` and no facet is a size solution the search fails with
/// [`SolveError::NoSolution`] carrying a reproduction bundle.
pub fn find_solutions(
    k: &PartitionComplex,
    colorings: &[VertexColoring],
    m: &SizeVector,
    mode: SearchMode,
) -> Result<SolutionSearch, SolveError> {
    check_inputs(k, colorings, m)?;
    let colors: BTreeSet<usize> = (1..=k.n()).collect();
    let theorem_instance = m.is_balanced_for(k.n());

    let size = |f: &Face<Partition>| is_size_solution(f, colorings, m);
    let full = |f: &Face<Partition>| is_full_solution(f, colorings, m, &colors);

    // (is size, is full, connected full) per facet, in facet order.
    let scanned: Vec<(bool, bool, bool)> = k
        .facets()
        .par_iter()
        .map(|facet| {
            let s = size(facet);
            let f = s && full(facet);
            let connected = f && hypergraph_of(facet, colorings, &colors).is_connected();
            (s, f, connected)
        })
        .collect();
    let size_solution_facets = scanned.iter().filter(|t| t.0).count();
    let full_solution_facets = scanned.iter().filter(|t| t.1).count();
    let connected_exists = scanned.iter().any(|t| t.2);

    if size_solution_facets == 0 && theorem_instance {
        return Err(SolveError::NoSolution(Box::new(ReproductionBundle::new(k, colorings, m))));
    }

    let minimal_faces: BTreeSet<Face<Partition>> = match mode {
        SearchMode::Greedy => k
            .facets()
            .par_iter()
            .zip(scanned.par_iter())
            .filter(|(_, t)| t.0)
            .flat_map_iter(|(facet, t)| {
                let mut found = vec![minimize(facet, size)];
                if t.1 {
                    found.push(minimize(facet, full));
                }
                found
            })
            .collect(),
        SearchMode::Exhaustive => {
            let faces: Vec<&Face<Partition>> = k.complex().faces().iter().collect();
            faces
                .par_iter()
                .filter(|face| {
                    let is_minimal_for = |pred: &dyn Fn(&Face<Partition>) -> bool| {
                        pred(face)
                            && face.iter().all(|v| {
                                let mut smaller = (**face).clone();
                                smaller.remove(v);
                                !pred(&smaller)
                            })
                    };
                    is_minimal_for(&size) || is_minimal_for(&full)
                })
                .map(|face| (*face).clone())
                .collect()
        }
    };

    let reports = minimal_faces
        .iter()
        .map(|face| SolutionReport::evaluate(face, colorings, m, &colors))
        .collect();
    Ok(SolutionSearch {
        theorem_instance,
        facets_scanned: k.facets().len(),
        size_solution_facets,
        full_solution_facets,
        connected_exists,
        reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{ascending, random_sperner_coloring, scheme_example2};

    #[test]
    fn compositions_enumerate_in_order() {
        let all = compositions(2, 2);
        assert_eq!(all, vec![SizeVector(vec![0, 2]), SizeVector(vec![1, 1]), SizeVector(vec![2, 0])]);
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 0), vec![SizeVector(vec![])]);
        assert!(compositions(1, 0).is_empty());
    }

    #[test]
    fn classic_sperner_is_rainbow() {
        let k = PartitionComplex::build(3, 4).unwrap();
        let c = scheme_example2(ascending(3)).coloring(&k).unwrap();
        let m = SizeVector(vec![2]);
        for facet in k.facets() {
            let rainbow = color_set(&c, facet).len() == 3;
            assert_eq!(is_size_solution(facet, std::slice::from_ref(&c), &m), rainbow);
        }
        assert!(!is_size_solution(&Face::new(), std::slice::from_ref(&c), &SizeVector(vec![0])));
    }

    #[test]
    fn one_dimensional_sperner() {
        for r in 1..6 {
            let k = PartitionComplex::build(2, r).unwrap();
            for seed in 0..10 {
                let c = [random_sperner_coloring(&k, seed)];
                let found =
                    find_solutions(&k, &c, &SizeVector(vec![1]), SearchMode::Greedy).unwrap();
                assert!(found.size_solution_facets >= 1);
                for facet in k.facets() {
                    assert_eq!(color_set(&c[0], facet).len() == 2, is_size_solution(facet, &c, &SizeVector(vec![1])));
                }
                assert!(found.reports.iter().all(|r| r.full_solution && r.connected && r.minimal));
            }
        }
    }

    #[test]
    fn size_but_not_full() {
        let k = PartitionComplex::build(3, 3).unwrap();
        let c = scheme_example2(ascending(3)).coloring(&k).unwrap();
        let colors: BTreeSet<usize> = (1..=3).collect();
        // An edge with two colors under both (identical) colorings covers only two colors.
        let edge = k
            .complex()
            .faces()
            .iter()
            .find(|f| f.len() == 2 && color_set(&c, f).len() == 2)
            .unwrap()
            .clone();
        let both = [c.clone(), c];
        let m = SizeVector(vec![1, 1]);
        assert!(is_size_solution(&edge, &both, &m));
        assert!(!is_full_solution(&edge, &both, &m, &colors));
    }

    #[test]
    fn mismatched_inputs() {
        let k = PartitionComplex::build(3, 2).unwrap();
        let c = [random_sperner_coloring(&k, 1)];
        let err = find_solutions(&k, &c, &SizeVector(vec![1, 1]), SearchMode::Greedy).unwrap_err();
        assert_eq!(err, SolveError::CountMismatch { colorings: 1, sizes: 2 });
    }

    #[test]
    fn exploratory_sizes_may_have_no_solution() {
        let k = PartitionComplex::build(3, 2).unwrap();
        let c = [random_sperner_coloring(&k, 1)];
        let found = find_solutions(&k, &c, &SizeVector(vec![3]), SearchMode::Greedy).unwrap();
        assert!(!found.theorem_instance);
        assert!(found.reports.is_empty());
    }

    #[test]
    fn constant_colorings_are_not_sperner() {
        use crate::complex::VertexMap;
        let k = PartitionComplex::build(3, 2).unwrap();
        let assignment = k.vertices().map(|p| (p.clone(), 1)).collect();
        let c = VertexMap::new(k.complex().clone(), k.label_simplex().clone(), assignment).unwrap();
        let err = find_solutions(&k, &[c], &SizeVector(vec![2]), SearchMode::Greedy).unwrap_err();
        assert_eq!(err, SolveError::NotSperner(0));
    }
}
