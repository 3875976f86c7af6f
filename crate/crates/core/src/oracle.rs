//! Direct O(n1 * n2) reference implementation of the CRQA pipeline.
//!
//! Shares no code with the optimized path beyond the public parameter types:
//! every cell is computed from the raw samples, every run is walked
//! explicitly. Used as the consistency reference in benchmarks and tests.

use std::collections::BTreeMap;

use crate::embedding::{Normalization, Rescale};
use crate::error::{CrqaError, Result};
use crate::measures::{CrqaMeasures, CrqaParams};
use crate::series::TimeSeries;

fn normalized(values: &[f64], mode: Normalization) -> Result<Vec<f64>> {
    let n = values.len() as f64;
    Ok(match mode {
        Normalization::None => values.to_vec(),
        Normalization::UnitInterval => {
            let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if hi == lo {
                vec![0.0; values.len()]
            } else {
                values.iter().map(|v| (v - lo) / (hi - lo)).collect()
            }
        }
        Normalization::Zscore => {
            if values.len() == 1 {
                return Ok(vec![0.0]);
            }
            let mean = values.iter().sum::<f64>() / n;
            let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            if sd == 0.0 {
                return Err(CrqaError::DegenerateNormalization);
            }
            values.iter().map(|v| (v - mean) / sd).collect()
        }
    })
}

/// The recurrence matrix as nested rows, computed cell by cell.
pub fn recurrence_matrix(
    ts1: &TimeSeries,
    ts2: &TimeSeries,
    params: &CrqaParams,
) -> Result<Vec<Vec<bool>>> {
    let e = &params.embedding;
    let x = normalized(ts1.values(), e.normalize)?;
    let y = normalized(ts2.values(), e.normalize)?;
    let span = (e.embed - 1) * e.delay;
    if x.len() <= span || y.len() <= span {
        return Err(CrqaError::TooShortToEmbed {
            len: x.len().min(y.len()),
            embed: e.embed,
            delay: e.delay,
        });
    }
    let (n1, n2) = (x.len() - span, y.len() - span);
    let dist = |i: usize, j: usize| -> f64 {
        if e.embed == 1 {
            return (x[i] - y[j]).abs();
        }
        let mut s = 0.0;
        for k in 0..e.embed {
            let d = x[i + k * e.delay] - y[j + k * e.delay];
            s += d * d;
        }
        s.sqrt()
    };

    let mut d = vec![vec![0.0; n2]; n1];
    for (i, row) in d.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = dist(i, j);
        }
    }
    let scale = match e.rescale {
        Rescale::None => 1.0,
        Rescale::MeanDistance => {
            let mut total = 0.0;
            for row in &d {
                let mut row_sum = 0.0;
                for &v in row {
                    row_sum += v;
                }
                total += row_sum;
            }
            total / (n1 * n2) as f64
        }
        Rescale::MaxDistance => d.iter().flatten().cloned().fold(0.0, f64::max),
    };
    let scale = if scale > 0.0 { scale } else { 1.0 };
    Ok(d.iter()
        .map(|row| {
            row.iter()
                .map(|&v| {
                    let v = if e.rescale == Rescale::None { v } else { v / scale };
                    v <= e.radius
                })
                .collect()
        })
        .collect())
}

fn runs(cells: impl Iterator<Item = bool>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut run = 0;
    for c in cells {
        if c {
            run += 1;
        } else if run > 0 {
            out.push(run);
            run = 0;
        }
    }
    if run > 0 {
        out.push(run);
    }
    out
}

/// Measures of a nested-row recurrence matrix, by explicit enumeration.
pub fn measures_of_matrix(m: &[Vec<bool>], min_diag: usize, min_vert: usize) -> CrqaMeasures {
    let n1 = m.len();
    let n2 = m.first().map_or(0, Vec::len);
    let total = m.iter().flatten().filter(|&&c| c).count();
    if total == 0 {
        return CrqaMeasures::default();
    }

    let mut diag_lengths: Vec<usize> = Vec::new();
    let mut lmax = 0;
    for offset in -(n1 as i64 - 1)..n2 as i64 {
        let cells = (0..n1 as i64).filter_map(|i| {
            let j = i + offset;
            (j >= 0 && j < n2 as i64).then(|| m[i as usize][j as usize])
        });
        for len in runs(cells).into_iter().filter(|&l| l >= min_diag) {
            diag_lengths.push(len);
            if offset != 0 && len > lmax {
                lmax = len;
            }
        }
    }

    let mut vert_lengths: Vec<usize> = Vec::new();
    for j in 0..n2 {
        let cells = m.iter().map(|row| row[j]);
        vert_lengths.extend(runs(cells).into_iter().filter(|&l| l >= min_vert));
    }

    let nrline = diag_lengths.len();
    let diag_points: usize = diag_lengths.iter().sum();
    let vert_points: usize = vert_lengths.iter().sum();

    let mut by_length: BTreeMap<usize, usize> = BTreeMap::new();
    for &l in &diag_lengths {
        *by_length.entry(l).or_default() += 1;
    }
    let mut entr = 0.0;
    for &count in by_length.values() {
        let p = count as f64 / nrline as f64;
        if p < 1.0 {
            entr -= p * p.ln();
        }
    }

    CrqaMeasures {
        rr: 100.0 * total as f64 / (n1 * n2) as f64,
        det: 100.0 * diag_points as f64 / total as f64,
        nrline,
        lmax,
        l: if nrline == 0 {
            0.0
        } else {
            diag_points as f64 / nrline as f64
        },
        entr,
        rel_entr: if nrline > 1 {
            entr / (nrline as f64).ln()
        } else {
            0.0
        },
        lam: 100.0 * vert_points as f64 / total as f64,
        tt: if vert_lengths.is_empty() {
            0.0
        } else {
            vert_points as f64 / vert_lengths.len() as f64
        },
    }
}

/// Reference CRQA of two series.
pub fn crqa(ts1: &TimeSeries, ts2: &TimeSeries, params: &CrqaParams) -> Result<CrqaMeasures> {
    let m = recurrence_matrix(ts1, ts2, params)?;
    Ok(measures_of_matrix(&m, params.mindiagline, params.minvertline))
}
