use rayon::prelude::*;

use crate::error::{CrqaError, Result};
use crate::series::TimeSeries;

/// Tolerances of the false-nearest-neighbour test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FnnTolerance {
    /// Relative distance growth beyond which a neighbour is false.
    pub rtol: f64,
    /// Absolute size, in units of the series standard deviation, of the
    /// (m+1)-dimensional distance beyond which a neighbour is false.
    pub atol: f64,
}

impl Default for FnnTolerance {
    fn default() -> Self {
        FnnTolerance {
            rtol: 10.0,
            atol: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FnnCurve {
    /// `fractions[m - 1]` is the false-neighbour fraction in dimension `m`.
    pub fractions: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Fraction of false nearest neighbours for dimensions `1..=max_embed`.
///
/// Dimension `m` needs `m + 1` delay coordinates for at least two points;
/// dimensions beyond that are dropped with a warning.
pub fn false_nearest_neighbors(
    ts: &TimeSeries,
    delay: usize,
    max_embed: usize,
    tol: FnnTolerance,
) -> Result<FnnCurve> {
    if delay < 1 || max_embed < 1 {
        return Err(CrqaError::invalid("delay and max_embed must be at least 1"));
    }
    let x = ts.values();
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();

    let mut fractions = Vec::new();
    let mut warnings = Vec::new();
    for m in 1..=max_embed {
        let points = match x.len().checked_sub(m * delay) {
            Some(p) if p >= 2 => p,
            _ => {
                warnings.push(format!(
                    "series of length {} supports false-neighbour test only up to dimension {}",
                    x.len(),
                    m - 1
                ));
                break;
            }
        };
        let coord = |i: usize, k: usize| x[i + k * delay];
        let false_count: usize = (0..points)
            .into_par_iter()
            .filter(|&i| {
                let mut best = f64::INFINITY;
                let mut best_j = usize::MAX;
                for j in 0..points {
                    if j == i {
                        continue;
                    }
                    let d2: f64 = (0..m).map(|k| (coord(i, k) - coord(j, k)).powi(2)).sum();
                    if d2 < best {
                        best = d2;
                        best_j = j;
                    }
                }
                let dist = best.sqrt();
                let extra = (coord(i, m) - coord(best_j, m)).abs();
                let grows = if dist == 0.0 {
                    extra > 0.0
                } else {
                    extra / dist > tol.rtol
                };
                let far = sd > 0.0 && (best + extra * extra).sqrt() / sd > tol.atol;
                grows || far
            })
            .count();
        fractions.push(false_count as f64 / points as f64);
    }
    if fractions.is_empty() {
        return Err(CrqaError::TooShortToEmbed {
            len: x.len(),
            embed: 2,
            delay,
        });
    }
    Ok(FnnCurve {
        fractions,
        warnings,
    })
}

/// First dimension where the false-neighbour fraction bottoms out: below
/// `floor`, or improving by less than `min_gain` in the next dimension.
pub fn bottom_out(fractions: &[f64], floor: f64, min_gain: f64) -> usize {
    for (k, &f) in fractions.iter().enumerate() {
        if f < floor {
            return k + 1;
        }
        if let Some(&next) = fractions.get(k + 1) {
            if f - next < min_gain {
                return k + 1;
            }
        }
    }
    fractions.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noise_does_not_unfold() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<f64> = (0..800).map(|_| rng.gen::<f64>()).collect();
        let curve = false_nearest_neighbors(&TimeSeries::continuous(x).unwrap(), 1, 6, FnnTolerance::default()).unwrap();
        assert_eq!(curve.fractions.len(), 6);
        for &f in &curve.fractions {
            assert!(f > 0.15, "{:?}", curve.fractions);
        }
    }

    #[test]
    fn sinusoid_unfolds_in_low_dimension() {
        let x: Vec<f64> = (0..800).map(|t| (t as f64 * 0.15).sin()).collect();
        let curve = false_nearest_neighbors(&TimeSeries::continuous(x).unwrap(), 10, 5, FnnTolerance::default()).unwrap();
        assert!(curve.fractions[1] < 0.01, "{:?}", curve.fractions);
        assert!(curve.fractions.iter().all(|f| (0.0..=1.0).contains(f)));
        assert!(bottom_out(&curve.fractions, 0.01, 0.001) <= 3);
    }

    #[test]
    fn short_series_truncates_range() {
        let x = TimeSeries::continuous(vec![0.0, 1.0, 0.5, 0.2, 0.9]).unwrap();
        let curve = false_nearest_neighbors(&x, 1, 10, FnnTolerance::default()).unwrap();
        assert_eq!(curve.fractions.len(), 3);
        assert_eq!(curve.warnings.len(), 1);
    }

    #[test]
    fn bottom_out_rules() {
        assert_eq!(bottom_out(&[0.9, 0.4, 0.005, 0.0], 0.01, 0.001), 3);
        assert_eq!(bottom_out(&[0.9, 0.5, 0.4995, 0.1], 0.01, 0.001), 2);
        assert_eq!(bottom_out(&[0.9, 0.5, 0.3], 0.01, 0.001), 3);
    }
}
