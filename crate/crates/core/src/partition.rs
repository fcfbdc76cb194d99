//! The partition complex: vertices are the ways of cutting `r` ordered
//! objects into `n` (possibly empty) intervals, recorded as nondecreasing
//! cut sequences `0 = π(0) ≤ π(1) ≤ … ≤ π(n) = r`.
//!
//! A set of partitions is a face when every pair differs by a 0/1 vector of a
//! single sign. The complex subdivides the simplex on interval labels `[1, n]`;
//! a face maps to the labels of the intervals it ever makes nonempty.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::complex::{Complex, ComplexDocument, ComplexError, Face, FaceMap, RealizationPoint};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PartitionError {
    #[error("invalid partition {0:?}: must start at 0, be nondecreasing and have n >= 1")]
    Invalid(Vec<u32>),
    #[error("partitions with different (n, r) cannot share a face")]
    MixedParameters,
    #[error("the partition complex needs at least one interval (n >= 1)")]
    NoIntervals,
    #[error("the partition complex needs at least one object (r >= 1)")]
    NoObjects,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A cut sequence `[0, π(1), …, π(n-1), r]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    pi: Vec<u32>,
}

impl Partition {
    pub fn new(pi: Vec<u32>) -> Result<Self, PartitionError> {
        let ok = pi.len() >= 2 && pi[0] == 0 && pi.windows(2).all(|w| w[0] <= w[1]);
        if ok {
            Ok(Self { pi })
        } else {
            Err(PartitionError::Invalid(pi))
        }
    }

    /// Number of intervals.
    pub fn n(&self) -> usize {
        self.pi.len() - 1
    }

    /// Number of objects.
    pub fn r(&self) -> u32 {
        self.pi[self.pi.len() - 1]
    }

    pub fn cuts(&self) -> &[u32] {
        &self.pi
    }

    /// Size of interval `i` (1-based).
    pub fn interval_len(&self, i: usize) -> u32 {
        self.pi[i] - self.pi[i - 1]
    }

    pub fn is_nonempty(&self, i: usize) -> bool {
        self.pi[i] != self.pi[i - 1]
    }

    /// Labels of the nonempty intervals, ascending.
    pub fn nonempty_intervals(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n()).filter(|&i| self.is_nonempty(i))
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = PartitionError;
    fn try_from(pi: Vec<u32>) -> Result<Self, Self::Error> {
        Self::new(pi)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.pi
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pi.iter().join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Every partition of `r` objects into `n` intervals, in lexicographic order.
/// There are `C(r + n - 1, n - 1)` of them.
pub fn enumerate_partitions(n: usize, r: u32) -> Vec<Partition> {
    fn extend(prefix: &mut Vec<u32>, n: usize, r: u32, out: &mut Vec<Partition>) {
        if prefix.len() == n {
            prefix.push(r);
            out.push(Partition { pi: prefix.clone() });
            prefix.pop();
            return;
        }
        let last = *prefix.last().unwrap();
        for next in last..=r {
            prefix.push(next);
            extend(prefix, n, r, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    extend(&mut vec![0], n, r, &mut out);
    out
}

fn comparable(a: &Partition, b: &Partition) -> bool {
    let (mut up, mut down) = (false, false);
    for (x, y) in a.pi.iter().zip(&b.pi) {
        match i64::from(*x) - i64::from(*y) {
            0 => {}
            1 => up = true,
            -1 => down = true,
            _ => return false,
        }
    }
    !(up && down)
}

/// Face test: every pair of members differs by a vector in `{0,1}^n` or in
/// `{0,-1}^n`.
pub fn is_face<'a>(
    members: impl IntoIterator<Item = &'a Partition>,
) -> Result<bool, PartitionError> {
    let members: Vec<&Partition> = members.into_iter().collect();
    if let Some(first) = members.first() {
        if members.iter().any(|p| p.pi.len() != first.pi.len() || p.r() != first.r()) {
            return Err(PartitionError::MixedParameters);
        }
    }
    Ok(members.iter().tuple_combinations().all(|(a, b)| comparable(a, b)))
}

/// Interval labels that are nonempty in at least one member of `face`.
pub fn subdivision_map<'a>(face: impl IntoIterator<Item = &'a Partition>) -> BTreeSet<usize> {
    face.into_iter().flat_map(|p| p.nonempty_intervals().collect::<Vec<_>>()).collect()
}

/// The partition complex `K_{n,r}` with its facets and the simplex on
/// interval labels it subdivides.
#[derive(Clone, Debug)]
pub struct PartitionComplex {
    n: usize,
    r: u32,
    complex: Arc<Complex<Partition>>,
    facets: Vec<Face<Partition>>,
    labels: Arc<Complex<usize>>,
}

impl PartitionComplex {
    /// Builds the complex from its facets, the maximal chains
    /// `p, p + e_{σ(1)}, p + e_{σ(1)} + e_{σ(2)}, …` over interior coordinates.
    /// Facets come out ordered by their minimal vertex and then by the
    /// sequence of incremented coordinates.
    pub fn build(n: usize, r: u32) -> Result<Self, PartitionError> {
        if n == 0 {
            return Err(PartitionError::NoIntervals);
        }
        if r == 0 {
            return Err(PartitionError::NoObjects);
        }
        let mut facets = Vec::new();
        for start in enumerate_partitions(n, r) {
            for order in (1..n).permutations(n - 1) {
                let mut current = start.pi.clone();
                let mut chain = vec![start.clone()];
                let valid = order.iter().all(|&coord| {
                    current[coord] += 1;
                    let ok = current[coord] <= current[coord + 1];
                    chain.push(Partition { pi: current.clone() });
                    ok
                });
                if valid {
                    facets.push(chain.into_iter().collect::<Face<_>>());
                }
            }
        }
        let complex = Complex::close_down(facets.iter().cloned());
        Ok(Self { n, r, complex: Arc::new(complex), facets, labels: Arc::new(Complex::simplex(1..=n)) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn complex(&self) -> &Arc<Complex<Partition>> {
        &self.complex
    }

    /// Facets in generation order.
    pub fn facets(&self) -> &[Face<Partition>] {
        &self.facets
    }

    /// Vertices in canonical (lexicographic) order.
    pub fn vertices(&self) -> impl Iterator<Item = &Partition> {
        self.complex.vertices().iter()
    }

    /// The simplex on interval labels `[1, n]`.
    pub fn label_simplex(&self) -> &Arc<Complex<usize>> {
        &self.labels
    }

    /// The subdivision map as a face map onto the label simplex.
    pub fn subdivision_face_map(&self) -> FaceMap<Partition, usize> {
        FaceMap::from_fn(self.complex.clone(), self.labels.clone(), |f| subdivision_map(f))
            .expect("subdivision map is order preserving into the label simplex")
    }

    /// Barycentric coordinates of a vertex on the label simplex: interval
    /// lengths divided by `r`.
    pub fn realize_vertex(&self, p: &Partition) -> RealizationPoint<usize> {
        realize_vertex(self.labels.clone(), p)
    }

    /// The boundary of `|K_{3,r}|` as a closed cycle of `3r` vertices running
    /// corner 1 → corner 2 → corner 3 → corner 1. `None` unless `n == 3`.
    pub fn boundary_cycle(&self) -> Option<Vec<Partition>> {
        if self.n != 3 {
            return None;
        }
        let r = self.r;
        let mut cycle = Vec::with_capacity(3 * r as usize);
        // Interval 3 empty: (0, a, r, r) with a from r down to 1.
        cycle.extend((1..=r).rev().map(|a| Partition { pi: vec![0, a, r, r] }));
        // Interval 1 empty: (0, 0, b, r) with b from r down to 1.
        cycle.extend((1..=r).rev().map(|b| Partition { pi: vec![0, 0, b, r] }));
        // Interval 2 empty: (0, c, c, r) with c from 0 up to r - 1.
        cycle.extend((0..r).map(|c| Partition { pi: vec![0, c, c, r] }));
        Some(cycle)
    }

    pub fn to_document(&self) -> PartitionComplexDocument {
        PartitionComplexDocument { n: self.n, r: self.r, complex: self.complex.to_document() }
    }
}

/// Barycentric coordinates of `p` on the simplex over `[1, n]`.
pub fn realize_vertex(labels: Arc<Complex<usize>>, p: &Partition) -> RealizationPoint<usize> {
    let r = f64::from(p.r());
    let weights: BTreeMap<usize, f64> =
        (1..=p.n()).map(|i| (i, f64::from(p.interval_len(i)) / r)).collect();
    RealizationPoint::new(labels, weights).expect("interval lengths sum to r")
}

/// `{"n":n,"r":r,"vertices":[...],"faces":[...]}`; vertices are written as
/// comma-separated cut sequences such as `"0,1,2,5"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionComplexDocument {
    pub n: usize,
    pub r: u32,
    #[serde(flatten)]
    pub complex: ComplexDocument,
}
