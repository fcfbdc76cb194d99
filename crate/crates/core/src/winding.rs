//! Degree of `ρ ∘ H ∘ C` on the boundary of `|K_{3,r}|`.
//!
//! For three colors `∂|PN|` is a circle, so the degree is a winding number:
//! walk the boundary cycle of the subdivided triangle, push each sample through
//! `C`, `H` and `ρ`, and accumulate the turning angle of the image around the
//! barycenter of the triangle.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::coloring::VertexColoring;
use crate::complex::{Face, RealizationPoint};
use crate::maps::{in_x, map_c, map_h, map_rho, MapError};
use crate::partition::{Partition, PartitionComplex};
use crate::solver::SizeVector;

/// Deepest refinement tried: `2^MAX_DEPTH` samples per boundary edge.
pub const MAX_DEPTH: u32 = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WindingError {
    #[error("the winding check needs n = 3 intervals, got {0}")]
    NotTriangle(usize),
    #[error("need one size per coloring with Σm = 2, got {0:?}")]
    BadSizes(Vec<usize>),
    #[error("boundary face {0:?} is a size solution, so C leaves X there")]
    BoundarySolutionFound(Vec<Partition>),
    #[error("angular steps still exceed π/4 at depth {MAX_DEPTH}")]
    NotConverged,
    #[error(transparent)]
    Map(#[from] MapError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    /// Boundary edge index plus the fraction travelled along it.
    pub parameter: f64,
    /// Image angle around the triangle's barycenter, in `(-π, π]`.
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingReport {
    pub winding: i64,
    /// Winding at one further halving of the sample spacing.
    pub refined_winding: i64,
    /// Samples per boundary edge are `2^depth`.
    pub depth: u32,
    pub boundary_edges: usize,
    pub max_step: f64,
    pub trace: Vec<TracePoint>,
}

/// Angle of a barycentric point on the triangle with corners at 90°, 210° and
/// 330°, so that corners 1 → 2 → 3 run counterclockwise.
pub fn barycentric_angle(coords: &[f64]) -> f64 {
    let (mut x, mut y) = (0.0, 0.0);
    for (j, w) in coords.iter().enumerate() {
        let theta = FRAC_PI_2 + TAU * j as f64 / 3.0;
        x += w * theta.cos();
        y += w * theta.sin();
    }
    y.atan2(x)
}

fn wrap(delta: f64) -> f64 {
    let mut d = delta % TAU;
    if d > PI {
        d -= TAU;
    } else if d <= -PI {
        d += TAU;
    }
    d
}

struct Boundary<'a> {
    k: &'a PartitionComplex,
    colorings: &'a [VertexColoring],
    m: &'a SizeVector,
    cycle: Vec<Partition>,
}

impl Boundary<'_> {
    fn image_angle(&self, edge: usize, lambda: f64) -> Result<f64, WindingError> {
        let u = &self.cycle[edge];
        let v = &self.cycle[(edge + 1) % self.cycle.len()];
        let weights = BTreeMap::from([(u.clone(), 1.0 - lambda), (v.clone(), lambda)]);
        let point = RealizationPoint::new(self.k.complex().clone(), weights)
            .expect("consecutive boundary vertices span an edge");
        let x = map_c(&point, self.colorings);
        if !in_x(&x, self.m) {
            let support: Face<Partition> = point.support();
            return Err(WindingError::BoundarySolutionFound(support.into_iter().collect()));
        }
        let y = map_h(&x, self.m)?;
        Ok(barycentric_angle(map_rho(&y, self.m)?.coords()))
    }

    fn trace(&self, depth: u32) -> Result<Vec<TracePoint>, WindingError> {
        let steps = 1usize << depth;
        let mut out = Vec::with_capacity(self.cycle.len() * steps);
        for edge in 0..self.cycle.len() {
            for j in 0..steps {
                let lambda = j as f64 / steps as f64;
                out.push(TracePoint {
                    parameter: edge as f64 + lambda,
                    angle: self.image_angle(edge, lambda)?,
                });
            }
        }
        Ok(out)
    }
}

/// Largest wrapped step and the total turn, around the closed trace.
fn turning(trace: &[TracePoint]) -> (f64, f64) {
    let mut max_step: f64 = 0.0;
    let mut total = 0.0;
    for (a, b) in trace.iter().zip(trace.iter().cycle().skip(1)) {
        let d = wrap(b.angle - a.angle);
        max_step = max_step.max(d.abs());
        total += d;
    }
    (max_step, total)
}

/// Winding number of `ρ ∘ H ∘ C` around `∂|P[1,3]|` along the boundary of
/// `|K_{3,r}|`. Sampling starts at the vertices and doubles per edge until no
/// step turns by π/4 or more; the count is then repeated one level finer.
pub fn boundary_winding(
    k: &PartitionComplex,
    colorings: &[VertexColoring],
    m: &SizeVector,
) -> Result<WindingReport, WindingError> {
    let cycle = k.boundary_cycle().ok_or(WindingError::NotTriangle(k.n()))?;
    if colorings.len() != m.len() || m.sum() != 2 {
        return Err(WindingError::BadSizes(m.as_slice().to_vec()));
    }
    let boundary = Boundary { k, colorings, m, cycle };
    for depth in 0..MAX_DEPTH {
        let trace = boundary.trace(depth)?;
        let (max_step, total) = turning(&trace);
        if max_step < FRAC_PI_4 {
            let (_, refined) = turning(&boundary.trace(depth + 1)?);
            return Ok(WindingReport {
                winding: (total / TAU).round() as i64,
                refined_winding: (refined / TAU).round() as i64,
                depth,
                boundary_edges: boundary.cycle.len(),
                max_step,
                trace,
            });
        }
    }
    Err(WindingError::NotConverged)
}
