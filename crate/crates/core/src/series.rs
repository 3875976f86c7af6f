//! Time series container and the two-series preparation steps shared by every
//! analysis: length alignment and categorical recoding.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{CrqaError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Categorical,
    Continuous,
}

/// A finite, non-empty sequence of samples.
///
/// Categorical series hold integer category codes stored as `f64`, so the
/// same distance machinery applies to both kinds.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    values: Vec<f64>,
    kind: SeriesKind,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, kind: SeriesKind) -> Result<Self> {
        if values.is_empty() {
            return Err(CrqaError::EmptySeries);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(CrqaError::NonFinite { index });
            }
            if kind == SeriesKind::Categorical && value.fract() != 0.0 {
                return Err(CrqaError::NonIntegral { index, value });
            }
        }
        Ok(TimeSeries { values, kind })
    }

    pub fn continuous(values: Vec<f64>) -> Result<Self> {
        Self::new(values, SeriesKind::Continuous)
    }

    pub fn categorical(values: Vec<f64>) -> Result<Self> {
        Self::new(values, SeriesKind::Categorical)
    }

    pub fn from_codes(codes: &[i64]) -> Result<Self> {
        Self::categorical(codes.iter().map(|&c| c as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn is_categorical(&self) -> bool {
        self.kind == SeriesKind::Categorical
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Category codes of a categorical series.
    pub fn codes(&self) -> Result<Vec<i64>> {
        if !self.is_categorical() {
            return Err(CrqaError::NotCategorical);
        }
        Ok(self.values.iter().map(|&v| v as i64).collect())
    }

    /// The contiguous sub-series `[start, start + len)`.
    pub fn slice(&self, start: usize, len: usize) -> Result<Self> {
        if len == 0 || start + len > self.values.len() {
            return Err(CrqaError::invalid(format!(
                "slice [{start}, {}) out of range for length {}",
                start + len,
                self.values.len()
            )));
        }
        Ok(TimeSeries {
            values: self.values[start..start + len].to_vec(),
            kind: self.kind,
        })
    }

    pub fn truncated(&self, len: usize) -> Result<Self> {
        self.slice(0, len.min(self.values.len()))
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Fails unless both series have the same kind.
pub fn check_same_kind(a: &TimeSeries, b: &TimeSeries) -> Result<SeriesKind> {
    if a.kind != b.kind {
        return Err(CrqaError::KindMismatch(a.kind, b.kind));
    }
    Ok(a.kind)
}

/// Truncates both series to the shorter length when their lengths differ by
/// at most `max_diff`.
pub fn align_lengths(
    a: &TimeSeries,
    b: &TimeSeries,
    max_diff: usize,
) -> Result<(TimeSeries, TimeSeries)> {
    let diff = a.len().abs_diff(b.len());
    if diff > max_diff {
        return Err(CrqaError::LengthMismatch {
            diff,
            max: max_diff,
        });
    }
    let n = a.len().min(b.len());
    Ok((a.truncated(n)?, b.truncated(n)?))
}

/// Sorted union of the category codes of two categorical series.
pub fn shared_alphabet(a: &TimeSeries, b: &TimeSeries) -> Result<Vec<i64>> {
    let mut set = BTreeSet::new();
    set.extend(a.codes()?);
    set.extend(b.codes()?);
    Ok(set.into_iter().collect())
}

/// Recodes both series onto `0..k` by rank in their shared sorted alphabet.
pub fn recode_shared(a: &TimeSeries, b: &TimeSeries) -> Result<(TimeSeries, TimeSeries)> {
    let alphabet = shared_alphabet(a, b)?;
    let rank: HashMap<i64, usize> = alphabet.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let recode = |ts: &TimeSeries| -> Result<TimeSeries> {
        let codes = ts.codes()?;
        TimeSeries::categorical(codes.iter().map(|c| rank[c] as f64).collect())
    };
    Ok((recode(a)?, recode(b)?))
}

/// Replaces the non-event code of each series with its own fresh code, so
/// that non-events never match across the two series.
///
/// The fresh codes are `max + 1` and `max + 2` over the shared alphabet.
/// Returns the recoded pair together with the two substituted codes.
pub fn recode_nonevents(
    a: &TimeSeries,
    b: &TimeSeries,
    nonevent: i64,
) -> Result<(TimeSeries, TimeSeries, [i64; 2])> {
    let alphabet = shared_alphabet(a, b)?;
    let top = alphabet.last().copied().unwrap_or(0).max(nonevent);
    let fresh = [top + 1, top + 2];
    let recode = |ts: &TimeSeries, code: i64| -> Result<TimeSeries> {
        let values = ts
            .codes()?
            .into_iter()
            .map(|c| if c == nonevent { code } else { c } as f64)
            .collect();
        TimeSeries::categorical(values)
    };
    Ok((recode(a, fresh[0])?, recode(b, fresh[1])?, fresh))
}
