//! Seeded property suite for `J`, `H` and `ρ` over random points of `X` and `Y`.
//!
//! Sample `s` draws everything from stream `s` of the run seed, so results do
//! not depend on how samples are spread over threads.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::maps::{homotopy_point, in_x, in_y, map_h, map_j, map_rho, threshold, NonnegGrid};
use crate::rng::stream_rng;
use crate::solver::{compositions, SizeVector};
use crate::TOLERANCE;

/// Colors per sampled grid.
pub const COLOR_RANGE: std::ops::RangeInclusive<usize> = 2..=6;
/// Rows (colorings) per sampled grid.
pub const INDEX_RANGE: std::ops::RangeInclusive<usize> = 1..=3;
/// Homotopy parameters `t = k / HOMOTOPY_STEPS`.
pub const HOMOTOPY_STEPS: u32 = 10;

fn random_row<R: Rng>(colors: usize, support: usize, mass: f64, rng: &mut R) -> Vec<f64> {
    let mut row = vec![0.0; colors];
    let mut slots: Vec<usize> = (0..colors).collect();
    slots.shuffle(rng);
    let raw: Vec<f64> = (0..support).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    for (&slot, w) in slots.iter().zip(raw) {
        row[slot] = mass * w / total;
    }
    row
}

/// A random point of `Y`: row `i` has at most `m_i` positive entries and the
/// grid sums to one.
pub fn sample_y<R: Rng>(colors: usize, m: &SizeVector, rng: &mut R) -> NonnegGrid {
    loop {
        let rows: Vec<Vec<f64>> = m
            .as_slice()
            .iter()
            .map(|&mi| {
                let support = rng.random_range(0..=mi.min(colors));
                random_row(colors, support, rng.random_range(0.05..1.0), rng)
            })
            .collect();
        let total: f64 = rows.iter().flatten().sum();
        if total > 0.0 {
            let rows: Vec<Vec<f64>> =
                rows.into_iter().map(|r| r.into_iter().map(|v| v / total).collect()).collect();
            return NonnegGrid::from_rows(&rows).expect("finite nonnegative rows");
        }
    }
}

/// A random point of `X`: stochastic rows, one of them with at most `m_i`
/// positive entries. `None` when every `m_i` is zero, since `X` is then empty.
pub fn sample_x<R: Rng>(colors: usize, m: &SizeVector, rng: &mut R) -> Option<NonnegGrid> {
    let small: Vec<usize> = (0..m.len()).filter(|&i| m.get(i) >= 1).collect();
    let forced = *small.choose(rng)?;
    let rows: Vec<Vec<f64>> = (0..m.len())
        .map(|i| {
            let cap = if i == forced { m.get(i).min(colors) } else { colors };
            random_row(colors, rng.random_range(1..=cap), 1.0, rng)
        })
        .collect();
    Some(NonnegGrid::from_rows(&rows).expect("finite nonnegative rows"))
}

/// Outcome of one property over the whole run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    /// Logged-only properties never fail the run.
    pub asserted: bool,
    pub pass: bool,
    pub samples: u64,
    pub violations: u64,
    /// Largest deviation seen, or the failure rate for membership properties.
    pub worst: f64,
    /// Sample (stream) index where `worst` was attained.
    pub worst_sample: u64,
    pub tolerance: f64,
}

#[derive(Clone, Copy, Default)]
struct Worst {
    value: f64,
    sample: u64,
    violations: u64,
    samples: u64,
}

impl Worst {
    fn record(&mut self, value: f64, violated: bool, sample: u64) {
        if value > self.value || self.samples == 0 {
            self.value = self.value.max(value);
            self.sample = sample;
        }
        self.violations += u64::from(violated);
        self.samples += 1;
    }

    fn merge(self, other: Self) -> Self {
        let (value, sample) = if other.value > self.value || self.samples == 0 {
            (other.value, other.sample)
        } else {
            (self.value, self.sample)
        };
        Self {
            value,
            sample,
            violations: self.violations + other.violations,
            samples: self.samples + other.samples,
        }
    }
}

const PROPERTIES: [(&str, bool, f64); 9] = [
    ("H(J(y)) = y", true, TOLERANCE),
    ("J(y) in X", true, 0.0),
    ("S_i J(y) = 1", true, TOLERANCE),
    ("H(x) in Y", true, 0.0),
    ("rho(y) sums to 1", true, TOLERANCE),
    ("rho(y) has a zero coordinate", true, TOLERANCE),
    ("r_x(i) <= 1/(m_i+1)", true, TOLERANCE),
    ("r_x(i) <= 1/m_i", true, TOLERANCE),
    ("h(x,t) in X", false, 0.0),
];

fn measure(seed: u64, sample: u64) -> [Worst; 9] {
    let mut out = [Worst::default(); 9];
    let mut rng = stream_rng(seed, sample);
    let colors = rng.random_range(COLOR_RANGE);
    let count = rng.random_range(INDEX_RANGE);
    let m = compositions(colors - 1, count).choose(&mut rng).expect("colors >= 1").clone();

    let y = sample_y(colors, &m, &mut rng);
    let roundtrip = map_j(&y, &m)
        .and_then(|x| map_h(&x, &m).map(|back| back.max_abs_diff(&y)))
        .unwrap_or(f64::INFINITY);
    out[0].record(roundtrip, roundtrip > TOLERANCE, sample);
    match map_j(&y, &m) {
        Ok(x) => {
            out[1].record(f64::from(u8::from(!in_x(&x, &m))), !in_x(&x, &m), sample);
            let dev = x.sums().per_index.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max);
            out[2].record(dev, dev > TOLERANCE, sample);
        }
        Err(_) => {
            out[1].record(1.0, true, sample);
            out[2].record(f64::INFINITY, true, sample);
        }
    }
    let column_sums = y.sums().per_color;
    let sum_dev = (column_sums.iter().sum::<f64>() - 1.0).abs();
    out[4].record(sum_dev, sum_dev > TOLERANCE, sample);
    let min = column_sums.iter().copied().fold(f64::INFINITY, f64::min);
    out[5].record(min, min > TOLERANCE || map_rho(&y, &m).is_err(), sample);

    if let Some(x) = sample_x(colors, &m, &mut rng) {
        let ok = map_h(&x, &m).is_ok_and(|h| in_y(&h, &m));
        out[3].record(f64::from(u8::from(!ok)), !ok, sample);
        let (mut tight, mut loose) = (0.0f64, 0.0f64);
        for i in 0..count {
            let t = threshold(x.row(i), m.get(i));
            tight = tight.max(t - 1.0 / (m.get(i) + 1) as f64);
            if m.get(i) > 0 {
                loose = loose.max(t - 1.0 / m.get(i) as f64);
            }
        }
        out[6].record(tight.max(0.0), tight > TOLERANCE, sample);
        out[7].record(loose.max(0.0), loose > TOLERANCE, sample);
        for k in 0..=HOMOTOPY_STEPS {
            let t = f64::from(k) / f64::from(HOMOTOPY_STEPS);
            let inside = homotopy_point(&x, t, &m).is_ok_and(|h| in_x(&h, &m));
            out[8].record(f64::from(u8::from(!inside)), !inside, sample);
        }
    }
    out
}

/// Runs every property on `samples` random draws of `seed`, in the current
/// rayon pool.
pub fn proof_map_suite(samples: u64, seed: u64) -> Vec<PropertyCheck> {
    let merged = (0..samples)
        .into_par_iter()
        .map(|s| measure(seed, s))
        .reduce(
            || [Worst::default(); 9],
            |a, b| std::array::from_fn(|j| a[j].merge(b[j])),
        );
    PROPERTIES
        .iter()
        .zip(merged)
        .map(|(&(name, asserted, tolerance), w)| {
            let membership = tolerance == 0.0;
            let worst = if membership && w.samples > 0 {
                w.violations as f64 / w.samples as f64
            } else {
                w.value
            };
            PropertyCheck {
                property: name.to_string(),
                asserted,
                pass: !asserted || w.violations == 0,
                samples: w.samples,
                violations: w.violations,
                worst,
                worst_sample: w.sample,
                tolerance,
            }
        })
        .collect()
}
