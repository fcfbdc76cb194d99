//! Rating schemes and the Sperner colorings they induce on `K_{n,r}`.
//!
//! A scheme picks a best interval for every partition and never picks an
//! empty one, so the induced vertex coloring always specializes the
//! subdivision map.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::complex::VertexMap;
use crate::partition::{Partition, PartitionComplex};
use crate::rng::stream_rng;

/// A coloring of `K_{n,r}` by interval labels.
pub type VertexColoring = VertexMap<Partition, usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SchemeError {
    #[error("tiebreak {tiebreak:?} is not a permutation of 1..={n}")]
    BadTiebreak { tiebreak: Vec<usize>, n: usize },
    #[error("rank label {label} is outside 1..={n}")]
    BadRank { label: usize, n: usize },
}

/// Serialized as `{"kind":"ranked","ranks":[...],"tiebreak":[...]}` or
/// `{"kind":"longest","tiebreak":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum RatingScheme {
    /// Take the first nonempty interval of `ranks`, then fall through to the
    /// tiebreak order.
    Ranked { ranks: Vec<usize>, tiebreak: Vec<usize> },
    /// Take a longest interval; ties go to the earliest label in `tiebreak`.
    Longest { tiebreak: Vec<usize> },
}

impl RatingScheme {
    pub fn tiebreak(&self) -> &[usize] {
        match self {
            Self::Ranked { tiebreak, .. } | Self::Longest { tiebreak } => tiebreak,
        }
    }

    pub fn with_tiebreak(&self, order: Vec<usize>) -> Self {
        match self {
            Self::Ranked { ranks, .. } => Self::Ranked { ranks: ranks.clone(), tiebreak: order },
            Self::Longest { .. } => Self::Longest { tiebreak: order },
        }
    }

    /// Checks that the scheme is fully specified for `n` intervals.
    pub fn validate(&self, n: usize) -> Result<(), SchemeError> {
        let mut sorted = self.tiebreak().to_vec();
        sorted.sort_unstable();
        if !sorted.iter().copied().eq(1..=n) {
            return Err(SchemeError::BadTiebreak { tiebreak: self.tiebreak().to_vec(), n });
        }
        if let Self::Ranked { ranks, .. } = self {
            if let Some(&label) = ranks.iter().find(|&&l| l == 0 || l > n) {
                return Err(SchemeError::BadRank { label, n });
            }
        }
        Ok(())
    }

    /// Labels in tiebreak priority; labels missing from the tiebreak follow
    /// in ascending order.
    fn priority(&self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> =
            self.tiebreak().iter().copied().filter(|&l| (1..=n).contains(&l)).collect();
        for l in 1..=n {
            if !order.contains(&l) {
                order.push(l);
            }
        }
        order
    }

    /// The best interval of `p`. Always a nonempty interval when `r >= 1`.
    pub fn color_vertex(&self, p: &Partition) -> usize {
        let n = p.n();
        let priority = self.priority(n);
        match self {
            Self::Ranked { ranks, .. } => ranks
                .iter()
                .copied()
                .filter(|&l| (1..=n).contains(&l))
                .chain(priority)
                .find(|&l| p.is_nonempty(l))
                .expect("r >= 1 leaves some interval nonempty"),
            Self::Longest { .. } => {
                let longest = (1..=n).map(|i| p.interval_len(i)).max().unwrap_or(0);
                priority
                    .into_iter()
                    .find(|&l| p.interval_len(l) == longest)
                    .expect("some interval attains the maximum")
            }
        }
    }

    /// The coloring this scheme induces on `k`.
    pub fn coloring(&self, k: &PartitionComplex) -> Result<VertexColoring, SchemeError> {
        self.validate(k.n())?;
        let assignment: BTreeMap<Partition, usize> =
            k.vertices().map(|p| (p.clone(), self.color_vertex(p))).collect();
        Ok(VertexMap::new(k.complex().clone(), k.label_simplex().clone(), assignment)
            .expect("every coloring into the label simplex is simplicial"))
    }
}

/// `[1, 2, …, n]`.
pub fn ascending(n: usize) -> Vec<usize> {
    (1..=n).collect()
}

/// Prefers longer intervals: on `K_{3,r}` every vertex goes to its closest
/// corner of the triangle.
pub fn scheme_example2(tiebreak: Vec<usize>) -> RatingScheme {
    RatingScheme::Longest { tiebreak }
}

/// Coloring `i` of the four-interval cube family: interval `i`, else interval 4.
pub fn scheme_example3(i: usize, tiebreak: Vec<usize>) -> RatingScheme {
    RatingScheme::Ranked { ranks: vec![i, 4], tiebreak }
}

/// The three colorings of the four-interval path family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example4 {
    /// Interval 1, else interval 3.
    C1,
    /// Interval 2, else interval 4.
    C2,
    /// Longest interval.
    C3,
}

pub fn scheme_example4(which: Example4, tiebreak: Vec<usize>) -> RatingScheme {
    match which {
        Example4::C1 => RatingScheme::Ranked { ranks: vec![1, 3], tiebreak },
        Example4::C2 => RatingScheme::Ranked { ranks: vec![2, 4], tiebreak },
        Example4::C3 => RatingScheme::Longest { tiebreak },
    }
}

/// A uniformly random permutation of `[1, n]`.
pub fn random_tiebreak<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut order = ascending(n);
    order.shuffle(rng);
    order
}

/// Colors every vertex, in canonical order, with a uniformly chosen nonempty
/// interval drawn from `rng`.
pub fn random_coloring_with<R: Rng>(k: &PartitionComplex, rng: &mut R) -> VertexColoring {
    let assignment: BTreeMap<Partition, usize> = k
        .vertices()
        .map(|p| {
            let choices: Vec<usize> = p.nonempty_intervals().collect();
            (p.clone(), choices[rng.random_range(0..choices.len())])
        })
        .collect();
    VertexMap::new(k.complex().clone(), k.label_simplex().clone(), assignment)
        .expect("every coloring into the label simplex is simplicial")
}

/// Seeded random Sperner coloring (stream 0 of `seed`).
pub fn random_sperner_coloring(k: &PartitionComplex, seed: u64) -> VertexColoring {
    random_coloring_with(k, &mut stream_rng(seed, 0))
}

/// How one coloring of an instance was produced: a rating scheme, or a
/// uniform random draw from stream `stream` of `seed`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ColoringSpec {
    Scheme(RatingScheme),
    Random(RandomColoring),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomColoring {
    kind: RandomKind,
    pub seed: u64,
    pub stream: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
enum RandomKind {
    #[serde(rename = "random")]
    Random,
}

impl ColoringSpec {
    pub fn random(seed: u64, stream: u64) -> Self {
        Self::Random(RandomColoring { kind: RandomKind::Random, seed, stream })
    }

    /// The tiebreak permutation, empty for random colorings.
    pub fn tiebreak(&self) -> Vec<usize> {
        match self {
            Self::Scheme(s) => s.tiebreak().to_vec(),
            Self::Random(_) => Vec::new(),
        }
    }

    pub fn coloring(&self, k: &PartitionComplex) -> Result<VertexColoring, SchemeError> {
        match self {
            Self::Scheme(s) => s.coloring(k),
            Self::Random(r) => Ok(random_coloring_with(k, &mut stream_rng(r.seed, r.stream))),
        }
    }
}

impl From<RatingScheme> for ColoringSpec {
    fn from(s: RatingScheme) -> Self {
        Self::Scheme(s)
    }
}
