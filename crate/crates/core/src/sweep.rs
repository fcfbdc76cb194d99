//! Parameter sweeps hunting for instances where every full solution has a
//! disconnected color hypergraph.
//!
//! Each instance is written as one JSON line to an append-only log. A log can
//! be reopened and the sweep resumed: instances already recorded are skipped.

use std::collections::{BTreeSet, HashMap};
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coloring::{random_tiebreak, ColoringSpec, RatingScheme, VertexColoring};
use crate::partition::{PartitionComplex, PartitionError};
use crate::rng::stream_rng;
use crate::solver::{compositions, find_solutions, SearchMode, SizeVector, SolveError};

/// How the colorings of a seeded instance are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Each vertex gets a uniformly random nonempty interval.
    Random,
    /// Longest interval with a random tiebreak.
    Longest,
    /// A random full preference order with a random tiebreak.
    Ranked,
    /// Each coloring picks one of the three families above at random.
    Mixed,
}

impl Family {
    fn draw(self, n: usize, seed: u64, stream: u64) -> ColoringSpec {
        let mut rng = stream_rng(seed, stream);
        let family = match self {
            Self::Mixed => [Self::Random, Self::Longest, Self::Ranked][rng.random_range(0..3)],
            f => f,
        };
        match family {
            Self::Random | Self::Mixed => ColoringSpec::random(seed, stream),
            Self::Longest => RatingScheme::Longest { tiebreak: random_tiebreak(n, &mut rng) }.into(),
            Self::Ranked => {
                let mut ranks: Vec<usize> = (1..=n).collect();
                ranks.shuffle(&mut rng);
                let tiebreak = random_tiebreak(n, &mut rng);
                RatingScheme::Ranked { ranks, tiebreak }.into()
            }
        }
    }
}

/// The parameter grid of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n_values: Vec<usize>,
    pub r_values: Vec<u32>,
    /// Numbers of colorings `|I|` (ignored when `schemes` is set).
    pub coloring_counts: Vec<usize>,
    /// Explicit size vectors; otherwise every composition of `n - 1`.
    pub sizes: Option<Vec<SizeVector>>,
    pub families: Vec<Family>,
    pub seeds: Vec<u64>,
    /// Fixed schemes instead of seeded families.
    pub schemes: Option<Vec<RatingScheme>>,
    /// With fixed schemes: rerun under every tiebreak permutation of `[1, n]`.
    pub all_tiebreaks: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SweepInstance {
    pub n: usize,
    pub r: u32,
    pub m: SizeVector,
    pub schemes: Vec<ColoringSpec>,
    pub seed: u64,
}

impl SweepInstance {
    /// Identity of the instance in a log.
    fn key(&self) -> String {
        serde_json::to_string(self).expect("instances serialize")
    }
}

impl SweepGrid {
    fn sizes_for(&self, n: usize, count: usize) -> Vec<SizeVector> {
        match &self.sizes {
            Some(sizes) => sizes.iter().filter(|m| m.len() == count).cloned().collect(),
            None => compositions(n.saturating_sub(1), count),
        }
    }

    /// Every instance of the grid, in canonical order.
    pub fn instances(&self) -> Vec<SweepInstance> {
        let mut out = Vec::new();
        for (&n, &r) in self.n_values.iter().cartesian_product(&self.r_values) {
            if let Some(schemes) = &self.schemes {
                let variants: Vec<Vec<RatingScheme>> = if self.all_tiebreaks {
                    (1..=n)
                        .permutations(n)
                        .map(|t| schemes.iter().map(|s| s.with_tiebreak(t.clone())).collect())
                        .collect()
                } else {
                    vec![schemes.clone()]
                };
                for m in self.sizes_for(n, schemes.len()) {
                    for variant in &variants {
                        out.push(SweepInstance {
                            n,
                            r,
                            m: m.clone(),
                            schemes: variant.iter().cloned().map(ColoringSpec::from).collect(),
                            seed: 0,
                        });
                    }
                }
                continue;
            }
            for &count in &self.coloring_counts {
                for m in self.sizes_for(n, count) {
                    for &family in &self.families {
                        for &seed in &self.seeds {
                            let schemes =
                                (0..count as u64).map(|j| family.draw(n, seed, j)).collect();
                            out.push(SweepInstance { n, r, m: m.clone(), schemes, seed });
                        }
                    }
                }
            }
        }
        out
    }
}

/// One line of the sweep log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub n: usize,
    pub r: u32,
    pub m: SizeVector,
    pub schemes: Vec<ColoringSpec>,
    pub tiebreaks: Vec<Vec<usize>>,
    pub seed: u64,
    /// Facets that are full solutions.
    pub full_solutions: usize,
    pub connected_exists: bool,
    /// No full solution with a connected color hypergraph.
    pub candidate: bool,
}

impl SweepRecord {
    fn instance(&self) -> SweepInstance {
        SweepInstance {
            n: self.n,
            r: self.r,
            m: self.m.clone(),
            schemes: self.schemes.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("invalid scheme in instance {instance}: {reason}")]
    Scheme { instance: String, reason: String },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("sweep log: {0}")]
    Io(#[from] io::Error),
}

/// Evaluates one instance on a prebuilt complex.
pub fn run_instance(
    k: &PartitionComplex,
    instance: &SweepInstance,
) -> Result<SweepRecord, SweepError> {
    let colorings: Vec<VertexColoring> = instance
        .schemes
        .iter()
        .map(|s| s.coloring(k))
        .collect::<Result<_, _>>()
        .map_err(|e| SweepError::Scheme { instance: instance.key(), reason: e.to_string() })?;
    let search = match find_solutions(k, &colorings, &instance.m, SearchMode::Greedy) {
        Err(SolveError::NoSolution(bundle)) => {
            return Err(SolveError::NoSolution(Box::new(bundle.with_schemes(&instance.schemes)))
                .into())
        }
        other => other?,
    };
    Ok(SweepRecord {
        n: instance.n,
        r: instance.r,
        m: instance.m.clone(),
        tiebreaks: instance.schemes.iter().map(ColoringSpec::tiebreak).collect(),
        schemes: instance.schemes.clone(),
        seed: instance.seed,
        full_solutions: search.full_solution_facets,
        connected_exists: search.connected_exists,
        candidate: !search.connected_exists,
    })
}

/// Append-only JSON-lines log of sweep records.
pub struct SweepLog {
    path: PathBuf,
    done: BTreeSet<String>,
    records: Vec<SweepRecord>,
}

impl SweepLog {
    /// Opens (or creates) the log and loads every record already in it.
    /// Lines that are not records, such as headers, are kept but ignored.
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut records = Vec::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                if let Ok(record) = serde_json::from_str::<SweepRecord>(&line?) {
                    records.push(record);
                }
            }
        }
        let done = records.iter().map(|r| r.instance().key()).collect();
        Ok(Self { path, done, records })
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[SweepRecord] {
        &self.records
    }

    fn contains(&self, instance: &SweepInstance) -> bool {
        self.done.contains(&instance.key())
    }

    /// Appends a raw line, e.g. a header record.
    pub fn append_line(&mut self, line: &str) -> io::Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{line}")
    }

    fn append(&mut self, batch: &[SweepRecord]) -> io::Result<()> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        for record in batch {
            writeln!(file, "{}", serde_json::to_string(record).expect("records serialize"))?;
            self.done.insert(record.instance().key());
            self.records.push(record.clone());
        }
        file.flush()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub instances: usize,
    /// Instances already present in the log and not rerun.
    pub resumed: usize,
    pub evaluated: usize,
    /// Instances without any full-solution facet.
    pub without_full_solution: usize,
    pub candidates: Vec<SweepRecord>,
}

/// Instances per batch between log flushes.
const BATCH: usize = 256;

/// Runs every instance of `grid` not already in `log`, `jobs` at a time.
/// Records are written in grid order whatever the parallelism.
pub fn conjecture_sweep(
    grid: &SweepGrid,
    jobs: usize,
    mut log: Option<&mut SweepLog>,
) -> Result<SweepSummary, SweepError> {
    let instances = grid.instances();
    let mut complexes: HashMap<(usize, u32), Arc<PartitionComplex>> = HashMap::new();
    for inst in &instances {
        if let std::collections::hash_map::Entry::Vacant(e) = complexes.entry((inst.n, inst.r)) {
            e.insert(Arc::new(PartitionComplex::build(inst.n, inst.r)?));
        }
    }
    let pending: Vec<&SweepInstance> = instances
        .iter()
        .filter(|inst| !log.as_ref().is_some_and(|l| l.contains(inst)))
        .collect();
    let resumed = instances.len() - pending.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool");
    let mut evaluated = Vec::with_capacity(pending.len());
    for chunk in pending.chunks(BATCH) {
        let results: Vec<Result<SweepRecord, SweepError>> = pool.install(|| {
            chunk.par_iter().map(|inst| run_instance(&complexes[&(inst.n, inst.r)], inst)).collect()
        });
        let mut batch = Vec::with_capacity(results.len());
        let mut failure = None;
        for result in results {
            match result {
                Ok(record) => batch.push(record),
                Err(e) => {
                    failure = Some(e);
                    break;
                }
            }
        }
        if let Some(log) = log.as_deref_mut() {
            log.append(&batch)?;
        }
        evaluated.extend(batch);
        if let Some(e) = failure {
            return Err(e);
        }
    }

    Ok(SweepSummary {
        instances: instances.len(),
        resumed,
        evaluated: evaluated.len(),
        without_full_solution: evaluated.iter().filter(|r| r.full_solutions == 0).count(),
        candidates: evaluated.into_iter().filter(|r| r.candidate).collect(),
    })
}
