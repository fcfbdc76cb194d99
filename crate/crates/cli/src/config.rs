//! Run configurations and their parsing from command-line flags.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sperner_core::coloring::{
    ascending, scheme_example3, scheme_example4, ColoringSpec, Example4, RatingScheme,
};
use sperner_core::solver::{compositions, SearchMode, SizeVector};
use sperner_core::sweep::{Family, SweepGrid};

use crate::args::Shared;
use crate::Failure;

/// Everything needed to reproduce a run. Written as the header record of
/// every output file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub tool: String,
    #[serde(flatten)]
    pub params: Params,
    pub jobs: usize,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Params {
    Build {
        n: usize,
        r: u32,
    },
    Solve {
        n: usize,
        r: u32,
        m: SizeVector,
        schemes: Vec<ColoringSpec>,
        mode: SearchMode,
    },
    VerifyMaps {
        samples: u64,
        seed: u64,
        /// The winding check runs only for `n = 3`.
        n: usize,
        r: u32,
        m: SizeVector,
        schemes: Vec<ColoringSpec>,
        trace: Option<PathBuf>,
    },
    Sweep {
        grid: SweepGrid,
    },
}

impl RunConfig {
    pub fn new(params: Params, shared: &Shared) -> Self {
        let jobs = shared
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        Self {
            tool: format!("sperner-lab {}", env!("CARGO_PKG_VERSION")),
            params,
            jobs: jobs.max(1),
            out: shared.out.clone(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn number<T: std::str::FromStr>(flag: &str, s: &str) -> Result<T, Failure> {
    s.trim().parse().map_err(|_| usage(format!("--{flag}: cannot parse {s:?}")))
}

/// `"3"`, `"1,2,5"` or the inclusive range `"2..4"`.
pub fn parse_list<T>(flag: &str, s: &str) -> Result<Vec<T>, Failure>
where
    T: std::str::FromStr + Copy + Into<u64> + TryFrom<u64>,
{
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: T = number(flag, lo)?;
        let hi: T = number(flag, hi.trim_start_matches('='))?;
        let (lo, hi) = (lo.into(), hi.into());
        if lo > hi {
            return Err(usage(format!("--{flag}: empty range {s:?}")));
        }
        return Ok((lo..=hi).filter_map(|v| T::try_from(v).ok()).collect());
    }
    s.split(',').map(|part| number(flag, part)).collect()
}

fn single<T>(flag: &str, value: &Option<String>, default: Option<T>) -> Result<T, Failure>
where
    T: std::str::FromStr,
{
    match (value, default) {
        (Some(s), _) => number(flag, s),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(usage(format!("--{flag} is required"))),
    }
}

fn parse_permutation(s: &str, n: usize) -> Result<Vec<usize>, Failure> {
    let order: Vec<usize> = s.split(',').map(|p| number("tiebreak", p)).collect::<Result<_, _>>()?;
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if !sorted.iter().copied().eq(1..=n) {
        return Err(usage(format!("--tiebreak {s:?} is not a permutation of 1..{n}")));
    }
    Ok(order)
}

/// Parses one `--scheme` value. Random colorings use stream `index` of `seed`.
pub fn parse_scheme(
    s: &str,
    n: usize,
    tiebreak: &[usize],
    seed: u64,
    index: usize,
) -> Result<ColoringSpec, Failure> {
    let t = tiebreak.to_vec();
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let scheme = match (name, arg) {
        ("longest" | "example2", "") => RatingScheme::Longest { tiebreak: t },
        ("ranked", ranks) => RatingScheme::Ranked {
            ranks: if ranks.is_empty() { Vec::new() } else { parse_list::<u64>("scheme", ranks)?.into_iter().map(|v| v as usize).collect() },
            tiebreak: t,
        },
        ("example3", i) => scheme_example3(number("scheme", i)?, t),
        ("example4", which) => {
            let which = match which {
                "c1" => Example4::C1,
                "c2" => Example4::C2,
                "c3" => Example4::C3,
                other => return Err(usage(format!("--scheme example4 takes c1, c2 or c3, not {other:?}"))),
            };
            scheme_example4(which, t)
        }
        ("random", "") => return Ok(ColoringSpec::random(seed, index as u64)),
        _ => return Err(usage(format!("unknown scheme {s:?}"))),
    };
    scheme.validate(n).map_err(|e| usage(format!("--scheme {s}: {e}")))?;
    Ok(ColoringSpec::Scheme(scheme))
}

fn schemes(shared: &Shared, n: usize, default: &[&str]) -> Result<Vec<ColoringSpec>, Failure> {
    let tiebreak = match shared.tiebreak.as_deref() {
        None => ascending(n),
        Some("all") => return Err(usage("--tiebreak all is only meaningful for sweep")),
        Some(s) => parse_permutation(s, n)?,
    };
    let names: Vec<&str> = if shared.scheme.is_empty() {
        default.to_vec()
    } else {
        shared.scheme.iter().map(String::as_str).collect()
    };
    names
        .iter()
        .enumerate()
        .map(|(index, s)| parse_scheme(s, n, &tiebreak, shared.seed, index))
        .collect()
}

/// `--m`, or `(n - 1)` for a single coloring.
fn sizes(shared: &Shared, n: usize, count: usize) -> Result<SizeVector, Failure> {
    let m = match &shared.m {
        Some(s) => SizeVector(parse_list::<u64>("m", s)?.into_iter().map(|v| v as usize).collect()),
        None if count == 1 => SizeVector(vec![n.saturating_sub(1)]),
        None => return Err(usage(format!("--m is required with {count} colorings"))),
    };
    if m.len() != count {
        return Err(usage(format!("--m has {} entries for {count} colorings", m.len())));
    }
    Ok(m)
}

fn positive_n(n: usize) -> Result<usize, Failure> {
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    Ok(n)
}

fn positive_r(r: u32) -> Result<u32, Failure> {
    if r == 0 {
        return Err(usage("--r must be at least 1"));
    }
    Ok(r)
}

pub fn build(shared: &Shared) -> Result<Params, Failure> {
    let n = positive_n(single("n", &shared.n, None)?)?;
    let r = positive_r(single("r", &shared.r, None)?)?;
    Ok(Params::Build { n, r })
}

pub fn solve(shared: &Shared, exhaustive: bool) -> Result<Params, Failure> {
    let n = positive_n(single("n", &shared.n, None)?)?;
    let r = positive_r(single("r", &shared.r, None)?)?;
    let schemes = schemes(shared, n, &["longest"])?;
    let m = sizes(shared, n, schemes.len())?;
    let mode = if exhaustive { SearchMode::Exhaustive } else { SearchMode::Greedy };
    Ok(Params::Solve { n, r, m, schemes, mode })
}

pub fn verify_maps(shared: &Shared, trace: Option<PathBuf>) -> Result<Params, Failure> {
    let n = positive_n(single("n", &shared.n, Some(3))?)?;
    let r = positive_r(single("r", &shared.r, Some(4))?)?;
    let schemes = schemes(shared, n, &["longest"])?;
    let m = sizes(shared, n, schemes.len())?;
    let samples = shared.samples.unwrap_or(10_000);
    Ok(Params::VerifyMaps { samples, seed: shared.seed, n, r, m, schemes, trace })
}

pub fn sweep(shared: &Shared, count: &str, family: &str) -> Result<Params, Failure> {
    let n_values: Vec<usize> = parse_list::<u64>("n", shared.n.as_deref().ok_or_else(|| usage("--n is required"))?)?
        .into_iter()
        .map(|v| positive_n(v as usize))
        .collect::<Result<_, _>>()?;
    let r_values: Vec<u32> = parse_list::<u32>("r", shared.r.as_deref().ok_or_else(|| usage("--r is required"))?)?
        .into_iter()
        .map(positive_r)
        .collect::<Result<_, _>>()?;
    let families = family
        .split(',')
        .map(|f| match f.trim() {
            "random" => Ok(Family::Random),
            "longest" => Ok(Family::Longest),
            "ranked" => Ok(Family::Ranked),
            "mixed" => Ok(Family::Mixed),
            other => Err(usage(format!("unknown family {other:?}"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let samples = shared.samples.unwrap_or(100);
    let seeds: Vec<u64> = (0..samples).map(|k| shared.seed + k).collect();

    let all_tiebreaks = shared.tiebreak.as_deref() == Some("all");
    let fixed = if shared.scheme.is_empty() {
        None
    } else {
        let n = match n_values.as_slice() {
            [n] => *n,
            _ => return Err(usage("fixed --scheme sweeps need a single --n")),
        };
        let tiebreak = match shared.tiebreak.as_deref() {
            None | Some("all") => ascending(n),
            Some(s) => parse_permutation(s, n)?,
        };
        let parsed = shared
            .scheme
            .iter()
            .enumerate()
            .map(|(i, s)| match parse_scheme(s, n, &tiebreak, shared.seed, i)? {
                ColoringSpec::Scheme(scheme) => Ok(scheme),
                ColoringSpec::Random(_) => Err(usage("use --family random instead of --scheme random in sweeps")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Some(parsed)
    };
    if all_tiebreaks && fixed.is_none() {
        return Err(usage("--tiebreak all needs fixed --scheme values"));
    }

    let coloring_counts: Vec<usize> = match &fixed {
        Some(s) => vec![s.len()],
        None => parse_list::<u64>("count", count)?.into_iter().map(|v| v as usize).collect(),
    };
    let sizes = match &shared.m {
        Some(s) => {
            let m = SizeVector(parse_list::<u64>("m", s)?.into_iter().map(|v| v as usize).collect());
            if !coloring_counts.contains(&m.len()) {
                return Err(usage("--m length matches no coloring count"));
            }
            Some(vec![m])
        }
        None => {
            if coloring_counts.contains(&0) || n_values.iter().any(|&n| {
                coloring_counts.iter().any(|&c| compositions(n - 1, c).is_empty())
            }) {
                return Err(usage("--count must be at least 1"));
            }
            None
        }
    };
    let grid = SweepGrid {
        n_values,
        r_values,
        coloring_counts,
        sizes,
        families,
        seeds,
        schemes: fixed,
        all_tiebreaks,
    };
    Ok(Params::Sweep { grid })
}
