//! Normalization, delay embedding, Euclidean distances, distance rescaling
//! and radius thresholding.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CrqaError, Result};
use crate::plot::RecurrencePlot;
use crate::series::{SeriesKind, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    None,
    UnitInterval,
    Zscore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rescale {
    #[default]
    None,
    MeanDistance,
    MaxDistance,
}

/// Parameters of the embed-and-threshold stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub delay: usize,
    pub embed: usize,
    pub rescale: Rescale,
    pub normalize: Normalization,
    pub radius: f64,
}

impl Default for EmbeddingParams {
    fn default() -> Self {
        EmbeddingParams {
            delay: 1,
            embed: 1,
            rescale: Rescale::None,
            normalize: Normalization::None,
            radius: 0.0,
        }
    }
}

impl EmbeddingParams {
    pub fn validate(&self) -> Result<()> {
        if self.delay < 1 {
            return Err(CrqaError::invalid("delay must be at least 1"));
        }
        if self.embed < 1 {
            return Err(CrqaError::invalid("embedding dimension must be at least 1"));
        }
        if !self.radius.is_finite() || self.radius < 0.0 {
            return Err(CrqaError::invalid(format!(
                "radius must be a finite non-negative number, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    /// Whether a series of length `len` can be embedded with these parameters.
    pub fn feasible_for(&self, len: usize) -> bool {
        embedded_len(len, self.delay, self.embed).is_some()
    }
}

/// Number of delay vectors for a series of length `len`, if any.
pub fn embedded_len(len: usize, delay: usize, embed: usize) -> Option<usize> {
    let span = embed.checked_sub(1)?.checked_mul(delay)?;
    len.checked_sub(span).filter(|&n| n >= 1)
}

pub fn normalize(ts: &TimeSeries, mode: Normalization) -> Result<TimeSeries> {
    if mode == Normalization::None {
        return Ok(ts.clone());
    }
    if ts.kind() == SeriesKind::Categorical {
        return Err(CrqaError::invalid(
            "normalization is only defined for continuous series",
        ));
    }
    let values = ts.values();
    let out = match mode {
        Normalization::None => unreachable!(),
        Normalization::UnitInterval => {
            let (lo, hi) = min_max(values);
            let range = hi - lo;
            if range == 0.0 {
                vec![0.0; values.len()]
            } else {
                values.iter().map(|v| (v - lo) / range).collect()
            }
        }
        Normalization::Zscore => {
            if values.len() == 1 {
                vec![0.0]
            } else {
                let n = values.len() as f64;
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                let sd = var.sqrt();
                if sd == 0.0 {
                    return Err(CrqaError::DegenerateNormalization);
                }
                values.iter().map(|v| (v - mean) / sd).collect()
            }
        }
    };
    TimeSeries::continuous(out)
}

fn min_max(values: &[f64]) -> (f64, f64) {
    values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        })
}

/// Delay-coordinate vectors of a scalar series, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTrajectory {
    dim: usize,
    coords: Vec<f64>,
}

impl EmbeddedTrajectory {
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(CrqaError::invalid("trajectory points must share a non-zero dimension"));
        }
        Ok(EmbeddedTrajectory {
            dim,
            coords: points.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// Builds `point[i] = (x[i], x[i + delay], ..., x[i + (embed - 1) * delay])`.
pub fn embed(ts: &TimeSeries, delay: usize, embed: usize) -> Result<EmbeddedTrajectory> {
    if delay < 1 || embed < 1 {
        return Err(CrqaError::invalid("delay and embedding dimension must be at least 1"));
    }
    let x = ts.values();
    let n = embedded_len(x.len(), delay, embed).ok_or(CrqaError::TooShortToEmbed {
        len: x.len(),
        embed,
        delay,
    })?;
    let mut coords = Vec::with_capacity(n * embed);
    for i in 0..n {
        coords.extend((0..embed).map(|d| x[i + d * delay]));
    }
    Ok(EmbeddedTrajectory { dim: embed, coords })
}

#[inline]
pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense row-major distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(CrqaError::invalid("distance matrix must be non-empty and rectangular"));
        }
        Ok(DistanceMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks_exact(self.cols).map(<[f64]>::to_vec).collect()
    }
}

pub fn distance_matrix(a: &EmbeddedTrajectory, b: &EmbeddedTrajectory) -> Result<DistanceMatrix> {
    if a.dim != b.dim {
        return Err(CrqaError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let cols = b.len();
    let mut data = vec![0.0; a.len() * cols];
    data.par_chunks_mut(cols.max(1))
        .enumerate()
        .for_each(|(i, row)| {
            let p = a.point(i);
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = euclidean(p, b.point(j));
            }
        });
    Ok(DistanceMatrix {
        rows: a.len(),
        cols,
        data,
    })
}

/// Combines per-row `(sum, max)` summaries into the rescaling divisor.
///
/// The mean is the sequential sum of row sums over all cells, which fixes the
/// floating-point summation order for every code path that rescales.
pub(crate) fn rescale_divisor(mode: Rescale, row_stats: &[(f64, f64)], cells: usize) -> f64 {
    let divisor = match mode {
        Rescale::None => 1.0,
        Rescale::MeanDistance => {
            let total: f64 = row_stats.iter().map(|s| s.0).sum();
            total / cells as f64
        }
        Rescale::MaxDistance => row_stats.iter().map(|s| s.1).fold(0.0, f64::max),
    };
    // all-zero matrices are left unchanged
    if divisor > 0.0 {
        divisor
    } else {
        1.0
    }
}

pub(crate) fn row_summary(row: &[f64]) -> (f64, f64) {
    let mut sum = 0.0;
    let mut max = 0.0f64;
    for &d in row {
        sum += d;
        max = max.max(d);
    }
    (sum, max)
}

pub fn rescale_matrix(d: &DistanceMatrix, mode: Rescale) -> DistanceMatrix {
    if mode == Rescale::None {
        return d.clone();
    }
    let stats: Vec<(f64, f64)> = (0..d.rows).map(|i| row_summary(d.row(i))).collect();
    let divisor = rescale_divisor(mode, &stats, d.rows * d.cols);
    DistanceMatrix {
        rows: d.rows,
        cols: d.cols,
        data: d.data.iter().map(|v| v / divisor).collect(),
    }
}

/// Marks `cell(i, j)` recurrent iff `D(i, j) <= radius`.
pub fn threshold(d: &DistanceMatrix, radius: f64) -> Result<RecurrencePlot> {
    if radius.is_nan() || radius < 0.0 {
        return Err(CrqaError::invalid("radius must be non-negative"));
    }
    let words = d.cols.div_ceil(64);
    let mut bits = vec![0u64; d.rows * words];
    if words > 0 {
        bits.par_chunks_mut(words).enumerate().for_each(|(i, out)| {
            pack_row(d.row(i), radius, out);
        });
    }
    Ok(RecurrencePlot::from_packed_rows(d.rows, d.cols, bits))
}

fn pack_row(row: &[f64], radius: f64, out: &mut [u64]) {
    for (j, &v) in row.iter().enumerate() {
        if v <= radius {
            out[j / 64] |= 1 << (j % 64);
        }
    }
}

/// Distance, rescale and threshold without materializing the distance matrix.
///
/// Produces exactly the plot of
/// `threshold(&rescale_matrix(&distance_matrix(a, b)?, rescale), radius)`.
pub fn recurrence_plot(
    a: &EmbeddedTrajectory,
    b: &EmbeddedTrajectory,
    rescale: Rescale,
    radius: f64,
) -> Result<RecurrencePlot> {
    if a.dim != b.dim {
        return Err(CrqaError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    if radius.is_nan() || radius < 0.0 {
        return Err(CrqaError::invalid("radius must be non-negative"));
    }
    let (rows, cols) = (a.len(), b.len());
    let divisor = if rescale == Rescale::None {
        1.0
    } else {
        let stats: Vec<(f64, f64)> = (0..rows)
            .into_par_iter()
            .map_init(
                || vec![0.0; cols],
                |buf, i| {
                    fill_distances(a.point(i), b, buf);
                    row_summary(buf)
                },
            )
            .collect();
        rescale_divisor(rescale, &stats, rows * cols)
    };

    let words = cols.div_ceil(64);
    let mut bits = vec![0u64; rows * words];
    if words > 0 {
        bits.par_chunks_mut(words).enumerate().for_each_init(
            || vec![0.0; cols],
            |buf, (i, out)| {
                fill_distances(a.point(i), b, buf);
                if divisor != 1.0 {
                    for v in buf.iter_mut() {
                        *v /= divisor;
                    }
                }
                pack_row(buf, radius, out);
            },
        );
    }
    Ok(RecurrencePlot::from_packed_rows(rows, cols, bits))
}

fn fill_distances(p: &[f64], b: &EmbeddedTrajectory, out: &mut [f64]) {
    for (j, cell) in out.iter_mut().enumerate() {
        *cell = euclidean(p, b.point(j));
    }
}
