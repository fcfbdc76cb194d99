//! Nonnegative grids on `N × I` and the maps between the two spaces
//!
//! * `X`: every row sums to one and some row `i` has at most `m_i` positive
//!   entries;
//! * `Y`: the whole grid sums to one and every row `i` has at most `m_i`
//!   positive entries.
//!
//! Rows are indexed by colorings `i ∈ I` and columns by colors `n ∈ N`. Both
//! are 1-based in documents and 0-based in the API.

use serde::{Deserialize, Serialize};

use crate::coloring::VertexColoring;
use crate::complex::RealizationPoint;
use crate::partition::Partition;
use crate::solver::SizeVector;
use crate::TOLERANCE;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MapError {
    #[error("grid has {rows} rows but the size vector has {sizes} entries")]
    ShapeMismatch { rows: usize, sizes: usize },
    #[error("grid values must be finite and nonnegative")]
    NegativeValue,
    #[error("grid is not a point of X")]
    NotInX,
    #[error("grid is not a point of Y")]
    NotInY,
    #[error("every shifted value vanished; no normalizer exists")]
    DegenerateNormalizer,
    #[error("point is not on the boundary of the simplex: {0}")]
    NotOnBoundary(String),
}

/// A map `N × I → ℝ≥0`, stored row-major by index `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegGrid {
    colors: usize,
    indices: usize,
    values: Vec<f64>,
}

/// `{"N":[1..],"I":[1..],"values":[row-major]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    #[serde(rename = "N")]
    pub colors: Vec<usize>,
    #[serde(rename = "I")]
    pub indices: Vec<usize>,
    pub values: Vec<f64>,
}

/// The sums `S`, `S_i` (per row) and `S_n` (per column).
#[derive(Clone, Debug, PartialEq)]
pub struct GridSums {
    pub total: f64,
    pub per_index: Vec<f64>,
    pub per_color: Vec<f64>,
}

impl NonnegGrid {
    pub fn zeros(colors: usize, indices: usize) -> Self {
        Self { colors, indices, values: vec![0.0; colors * indices] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MapError> {
        let colors = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != colors) {
            return Err(MapError::ShapeMismatch { rows: rows.len(), sizes: colors });
        }
        let values: Vec<f64> = rows.iter().flatten().copied().collect();
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(MapError::NegativeValue);
        }
        Ok(Self { colors, indices: rows.len(), values })
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn indices(&self) -> usize {
        self.indices
    }

    pub fn get(&self, color: usize, index: usize) -> f64 {
        self.values[index * self.colors + color]
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.values[index * self.colors..(index + 1) * self.colors]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.colors.max(1)).take(self.indices)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Positive entries of row `index`.
    pub fn row_support(&self, index: usize) -> usize {
        self.row(index).iter().filter(|v| **v > 0.0).count()
    }

    pub fn sums(&self) -> GridSums {
        let per_index: Vec<f64> = self.rows().map(|r| r.iter().sum()).collect();
        let per_color: Vec<f64> =
            (0..self.colors).map(|n| self.rows().map(|r| r[n]).sum()).collect();
        GridSums { total: per_index.iter().sum(), per_index, per_color }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn to_document(&self) -> GridDocument {
        GridDocument {
            colors: (1..=self.colors).collect(),
            indices: (1..=self.indices).collect(),
            values: self.values.clone(),
        }
    }

    pub fn from_document(doc: &GridDocument) -> Result<Self, MapError> {
        let (colors, indices) = (doc.colors.len(), doc.indices.len());
        if doc.values.len() != colors * indices {
            return Err(MapError::ShapeMismatch { rows: indices, sizes: doc.values.len() });
        }
        let rows: Vec<Vec<f64>> =
            doc.values.chunks(colors.max(1)).take(indices).map(<[f64]>::to_vec).collect();
        if colors == 0 {
            return Ok(Self::zeros(0, indices));
        }
        Self::from_rows(&rows)
    }

    fn check_shape(&self, m: &SizeVector) -> Result<(), MapError> {
        if self.indices != m.len() {
            return Err(MapError::ShapeMismatch { rows: self.indices, sizes: m.len() });
        }
        Ok(())
    }
}

/// Every row sums to one and some row `i` has support at most `m_i`.
pub fn in_x(x: &NonnegGrid, m: &SizeVector) -> bool {
    x.indices == m.len()
        && x.sums().per_index.iter().all(|s| (s - 1.0).abs() <= TOLERANCE)
        && (0..x.indices).any(|i| x.row_support(i) <= m.get(i))
}

/// The grid sums to one and every row `i` has support at most `m_i`.
pub fn in_y(y: &NonnegGrid, m: &SizeVector) -> bool {
    y.indices == m.len()
        && (y.sums().total - 1.0).abs() <= TOLERANCE
        && (0..y.indices).all(|i| y.row_support(i) <= m.get(i))
}

/// `J : Y → X`. Each row is lifted by `s_y(i) = (max_j S_j y - S_i y) / |N|`
/// and the grid is scaled by `1 / max_j S_j y`, so every row sums to one. A row
/// of maximal sum keeps its support.
pub fn map_j(y: &NonnegGrid, m: &SizeVector) -> Result<NonnegGrid, MapError> {
    y.check_shape(m)?;
    if !in_y(y, m) {
        return Err(MapError::NotInY);
    }
    let row_sums = y.sums().per_index;
    let max = row_sums.iter().copied().fold(0.0, f64::max);
    let alpha = 1.0 / max;
    let width = y.colors as f64;
    let mut out = y.clone();
    for (i, &row_sum) in row_sums.iter().enumerate() {
        let shift = (max - row_sum) / width;
        for n in 0..y.colors {
            out.values[i * y.colors + n] = alpha * (y.get(n, i) + shift);
        }
    }
    Ok(out)
}

/// `r_x(i)`: the least threshold leaving at most `m_i` entries of row `i`
/// strictly above it, i.e. the `(m_i + 1)`-th largest entry (zero when the row
/// has at most `m_i` positive entries).
pub fn threshold(row: &[f64], m_i: usize) -> f64 {
    let mut sorted = row.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    sorted.get(m_i).copied().unwrap_or(0.0).max(0.0)
}

/// `H : X → Y`. Each row is lowered by `r_x(i)` and clipped at zero, then the
/// grid is normalized to total one.
pub fn map_h(x: &NonnegGrid, m: &SizeVector) -> Result<NonnegGrid, MapError> {
    x.check_shape(m)?;
    if !in_x(x, m) {
        return Err(MapError::NotInX);
    }
    let mut out = x.clone();
    for i in 0..x.indices {
        let r = threshold(x.row(i), m.get(i));
        for n in 0..x.colors {
            out.values[i * x.colors + n] = (x.get(n, i) - r).max(0.0);
        }
    }
    let mass: f64 = out.values.iter().sum();
    if mass <= 0.0 {
        return Err(MapError::DegenerateNormalizer);
    }
    let beta = 1.0 / mass;
    out.values.iter_mut().for_each(|v| *v *= beta);
    Ok(out)
}

/// A point of `∂|PN|`: barycentric coordinates with a vanishing coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPoint {
    coords: Vec<f64>,
}

impl BoundaryPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self, MapError> {
        if coords.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(MapError::NegativeValue);
        }
        let total: f64 = coords.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(MapError::NotOnBoundary(format!("coordinates sum to {total}")));
        }
        let min = coords.iter().copied().fold(f64::INFINITY, f64::min);
        if min > TOLERANCE {
            return Err(MapError::NotOnBoundary(format!("smallest coordinate is {min}")));
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// `ρ : Y → ∂|PN|`, the column sums.
pub fn map_rho(y: &NonnegGrid, m: &SizeVector) -> Result<BoundaryPoint, MapError> {
    y.check_shape(m)?;
    if !in_y(y, m) {
        return Err(MapError::NotInY);
    }
    BoundaryPoint::new(y.sums().per_color)
}

/// `C = ∏ |c_i|`: row `i` is the pushforward of `k` under coloring `i`.
pub fn map_c(k: &RealizationPoint<Partition>, colorings: &[VertexColoring]) -> NonnegGrid {
    let colors = colorings.first().map_or(0, |c| c.target().vertices().len());
    let mut grid = NonnegGrid::zeros(colors, colorings.len());
    for (i, c) in colorings.iter().enumerate() {
        for (label, w) in c.pushforward(k).weights() {
            grid.values[i * colors + (label - 1)] += w;
        }
    }
    grid
}

/// `h(x, t) = t·x + (1 - t)·J(H(x))`.
pub fn homotopy_point(x: &NonnegGrid, t: f64, m: &SizeVector) -> Result<NonnegGrid, MapError> {
    let back = map_j(&map_h(x, m)?, m)?;
    let mut out = x.clone();
    for (v, b) in out.values.iter_mut().zip(&back.values) {
        *v = t * *v + (1.0 - t) * b;
    }
    Ok(out)
}

/// `max |H(J(y)) - y|`.
pub fn roundtrip_check(y: &NonnegGrid, m: &SizeVector) -> Result<f64, MapError> {
    let back = map_h(&map_j(y, m)?, m)?;
    Ok(back.max_abs_diff(y))
}
