//! Diagonal-wise recurrence profiles, windowed profiles and the lagged
//! cross-correlation function.
//!
//! Lag convention, shared by every profile in this crate: at lag `d` sample
//! `t1[i]` is paired with `t2[i - d]`. If `t2` is a copy of `t1` delayed by
//! `k` samples (`t2[i] = t1[i - k]`), the profile peaks at `d = -k`; negative
//! lags therefore mean "the first series leads". On a recurrence plot with
//! rows indexing `t1`, lag `d` is the diagonal `j - i = -d`.

use serde::{Deserialize, Serialize};

use crate::error::{CrqaError, Result};
use crate::series::{check_same_kind, TimeSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileAxis {
    Lag,
    WindowStart,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceProfile {
    pub axis: ProfileAxis,
    pub positions: Vec<i64>,
    pub values: Vec<f64>,
    pub maxrec: f64,
    pub maxpos: i64,
    /// Positions whose value was undefined and reported as 0.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flagged: Vec<i64>,
}

impl RecurrenceProfile {
    /// Builds a profile; the maximum is ties-broken toward the smallest
    /// position.
    pub fn new(axis: ProfileAxis, positions: Vec<i64>, values: Vec<f64>) -> Self {
        debug_assert_eq!(positions.len(), values.len());
        let mut best: Option<(f64, i64)> = None;
        for (&p, &v) in positions.iter().zip(&values) {
            best = match best {
                Some((bv, bp)) if bv > v || (bv == v && bp <= p) => Some((bv, bp)),
                _ => Some((v, p)),
            };
        }
        let (maxrec, maxpos) = best.unwrap_or((0.0, 0));
        RecurrenceProfile {
            axis,
            positions,
            values,
            maxrec,
            maxpos,
            flagged: Vec::new(),
        }
    }

    pub fn value_at(&self, position: i64) -> Option<f64> {
        self.positions
            .iter()
            .position(|&p| p == position)
            .map(|k| self.values[k])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Index range of `t1` overlapping `t2` at lag `d` for common length `n`.
#[inline]
pub(crate) fn overlap(n: usize, lag: i64) -> std::ops::Range<usize> {
    if lag >= 0 {
        (lag as usize).min(n)..n
    } else {
        0..n.saturating_sub((-lag) as usize)
    }
}

/// Recurrence rate at one lag over equal-length slices.
fn lag_rate(x: &[f64], y: &[f64], lag: i64, radius: f64) -> f64 {
    let range = overlap(x.len(), lag);
    let len = range.len();
    if len == 0 {
        return 0.0;
    }
    let hits = range
        .filter(|&i| (x[i] - y[(i as i64 - lag) as usize]).abs() <= radius)
        .count();
    hits as f64 / len as f64
}

fn common_prefix<'a>(t1: &'a TimeSeries, t2: &'a TimeSeries) -> (&'a [f64], &'a [f64]) {
    let n = t1.len().min(t2.len());
    (&t1.values()[..n], &t2.values()[..n])
}

fn check_radius(radius: f64) -> Result<()> {
    if radius >= 0.0 && radius.is_finite() {
        Ok(())
    } else {
        Err(CrqaError::invalid("radius must be a finite non-negative number"))
    }
}

/// Diagonal-wise recurrence profile for lags `-ws..=ws`.
///
/// Series of different length are compared over the shorter length.
pub fn drpdfromts(t1: &TimeSeries, t2: &TimeSeries, ws: usize, radius: f64) -> Result<RecurrenceProfile> {
    check_same_kind(t1, t2)?;
    check_radius(radius)?;
    let (x, y) = common_prefix(t1, t2);
    if ws < 1 || 2 * ws + 1 > x.len() {
        return Err(CrqaError::invalid(format!(
            "lag range ws={ws} too large for series length {}",
            x.len()
        )));
    }
    let ws = ws as i64;
    let positions: Vec<i64> = (-ws..=ws).collect();
    let values = positions.iter().map(|&d| lag_rate(x, y, d, radius)).collect();
    Ok(RecurrenceProfile::new(ProfileAxis::Lag, positions, values))
}

/// Time course of recurrence: each window's diagonal profile over
/// `-lagwidth..=lagwidth`, averaged with equal weight per lag.
///
/// Windows start at `0, step, 2 * step, ...`; partial windows are dropped.
pub fn windowdrp(
    x: &TimeSeries,
    y: &TimeSeries,
    step: usize,
    windowsize: usize,
    lagwidth: usize,
    radius: f64,
) -> Result<RecurrenceProfile> {
    check_same_kind(x, y)?;
    check_radius(radius)?;
    let (a, b) = common_prefix(x, y);
    let n = a.len();
    if step < 1 || windowsize < 1 || windowsize > n || lagwidth >= windowsize {
        return Err(CrqaError::invalid(format!(
            "window geometry step={step}, windowsize={windowsize}, lagwidth={lagwidth} infeasible for length {n}"
        )));
    }
    let lw = lagwidth as i64;
    let mut positions = Vec::new();
    let mut values = Vec::new();
    for start in (0..=n - windowsize).step_by(step) {
        let wa = &a[start..start + windowsize];
        let wb = &b[start..start + windowsize];
        let sum: f64 = (-lw..=lw).map(|d| lag_rate(wa, wb, d, radius)).sum();
        positions.push(start as i64);
        values.push(sum / (2 * lagwidth + 1) as f64);
    }
    Ok(RecurrenceProfile::new(ProfileAxis::WindowStart, positions, values))
}

/// Pearson correlation of the overlapping segments at each lag in
/// `-maxlag..=maxlag`. Lags with a zero-variance segment report 0 and are
/// listed in `flagged`.
pub fn cross_correlation(x: &TimeSeries, y: &TimeSeries, maxlag: usize) -> Result<RecurrenceProfile> {
    let (a, b) = common_prefix(x, y);
    let n = a.len();
    if n < 3 || maxlag > n - 3 {
        return Err(CrqaError::invalid(format!(
            "maxlag={maxlag} leaves fewer than 3 overlapping samples for length {n}"
        )));
    }
    let ml = maxlag as i64;
    let mut positions = Vec::new();
    let mut values = Vec::new();
    let mut flagged = Vec::new();
    for d in -ml..=ml {
        let range = overlap(n, d);
        let xs: Vec<f64> = range.clone().map(|i| a[i]).collect();
        let ys: Vec<f64> = range.map(|i| b[(i as i64 - d) as usize]).collect();
        let r = pearson(&xs, &ys);
        positions.push(d);
        values.push(r.unwrap_or(0.0));
        if r.is_none() {
            flagged.push(d);
        }
    }
    let mut profile = RecurrenceProfile::new(ProfileAxis::Lag, positions, values);
    profile.flagged = flagged;
    Ok(profile)
}

/// Sample Pearson correlation, `None` when either side has zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{distance_matrix, embed, threshold};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn codes(v: &[i64]) -> TimeSeries {
        TimeSeries::from_codes(v).unwrap()
    }

    #[test]
    fn self_profile_is_one_at_zero_lag() {
        let x = codes(&[1, 2, 3, 1, 2, 2, 3, 1]);
        let p = drpdfromts(&x, &x, 3, 0.0).unwrap();
        assert_eq!(p.value_at(0), Some(1.0));
        assert_eq!(p.maxrec, 1.0);
        assert_eq!(p.maxpos, 0);
        assert_eq!(p.positions, (-3..=3).collect::<Vec<_>>());
    }

    #[test]
    fn constructed_shift_peaks_at_negative_delay() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base: Vec<i64> = (0..60).map(|_| rng.gen_range(0..5)).collect();
        // t2[i] = t1[i - 1]: the first series leads by one sample
        let t1 = codes(&base[1..]);
        let t2 = codes(&base[..base.len() - 1]);
        let p = drpdfromts(&t1, &t2, 5, 0.0).unwrap();
        assert_eq!(p.maxpos, -1);
        assert_eq!(p.maxrec, 1.0);
    }

    #[test]
    fn ws_too_large() {
        let x = codes(&[1, 2, 3, 4]);
        assert!(drpdfromts(&x, &x, 2, 0.0).is_err());
        assert!(drpdfromts(&x, &x, 1, 0.0).is_ok());
    }

    #[test]
    fn ties_break_toward_most_negative_position() {
        let p = RecurrenceProfile::new(ProfileAxis::Lag, vec![-1, 0, 1], vec![0.5, 0.2, 0.5]);
        assert_eq!((p.maxrec, p.maxpos), (0.5, -1));
        let p = RecurrenceProfile::new(ProfileAxis::Lag, vec![3, -2], vec![0.5, 0.5]);
        assert_eq!(p.maxpos, -2);
    }

    #[test]
    fn windowdrp_constant_series() {
        let x = TimeSeries::continuous(vec![2.0; 30]).unwrap();
        let p = windowdrp(&x, &x, 5, 10, 3, 0.0).unwrap();
        assert!(p.values.iter().all(|&v| v == 1.0));
        assert_eq!(p.positions, vec![0, 5, 10, 15, 20]);
    }

    #[test]
    fn windowdrp_non_overlapping_count() {
        let x = codes(&[1, 0, 1, 1, 0, 0, 1, 0]);
        let p = windowdrp(&x, &x, 4, 4, 1, 0.0).unwrap();
        assert_eq!(p.len(), 2);
        assert!(windowdrp(&x, &x, 4, 4, 4, 0.0).is_err());
        assert!(windowdrp(&x, &x, 0, 4, 1, 0.0).is_err());
    }

    #[test]
    fn correlation_identities() {
        let x = TimeSeries::continuous(vec![0.1, 1.3, -0.4, 2.2, 0.8, -1.0, 0.3]).unwrap();
        let neg = TimeSeries::continuous(x.values().iter().map(|v| -v).collect()).unwrap();
        let p = cross_correlation(&x, &x, 2).unwrap();
        assert!((p.value_at(0).unwrap() - 1.0).abs() < 1e-12);
        let q = cross_correlation(&x, &neg, 2).unwrap();
        assert!((q.value_at(0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_lags_are_flagged() {
        let x = TimeSeries::continuous(vec![1.0, 1.0, 1.0, 1.0, 2.0]).unwrap();
        let y = TimeSeries::continuous(vec![0.5, 1.5, 0.2, 0.9, 1.1]).unwrap();
        let p = cross_correlation(&x, &y, 1).unwrap();
        // at lag -1 the x segment is x[0..4], all ones
        assert_eq!(p.flagged, vec![-1]);
        assert_eq!(p.value_at(-1), Some(0.0));
        assert!(cross_correlation(&x, &y, 3).is_err());
    }

    proptest! {
        #[test]
        fn profile_matches_plot_diagonals(
            bits in prop::collection::vec(0i64..2, 12..40),
            other in prop::collection::vec(0i64..2, 12..40),
        ) {
            let n = bits.len().min(other.len());
            let x = codes(&bits[..n]);
            let y = codes(&other[..n]);
            let ws = (n - 1) / 2;
            let profile = drpdfromts(&x, &y, ws, 0.0).unwrap();
            let a = embed(&x, 1, 1).unwrap();
            let b = embed(&y, 1, 1).unwrap();
            let rp = threshold(&distance_matrix(&a, &b).unwrap(), 0.0).unwrap();
            for (&d, &v) in profile.positions.iter().zip(&profile.values) {
                prop_assert_eq!(Some(v), rp.diagonal_rate(-d));
            }
            prop_assert!(profile.values.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}
