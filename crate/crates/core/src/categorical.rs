//! Contingency-table recurrence and per-state phi coefficients for
//! categorical series.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{CrqaError, Result};
use crate::profiles::{overlap, ProfileAxis, RecurrenceProfile};
use crate::series::{align_lengths, shared_alphabet, TimeSeries};

/// Co-occurrence counts of category pairs at one lag.
///
/// `counts[r][c]` is the number of `t` with `x(t) = alphabet[r]` and
/// `y(t + lag) = alphabet[c]`. For negative lags the roles shift to
/// `x(t + |lag|)` and `y(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub lag: i64,
    pub alphabet: Vec<i64>,
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// Co-occurrences of identical states.
    pub fn trace(&self) -> u64 {
        (0..self.alphabet.len()).map(|k| self.counts[k][k]).sum()
    }

    /// Proportion of co-occurrences on identical states (0 for an empty table).
    pub fn recurrence(&self) -> f64 {
        match self.total() {
            0 => 0.0,
            total => self.trace() as f64 / total as f64,
        }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        (0..self.alphabet.len())
            .map(|c| self.counts.iter().map(|r| r[c]).sum())
            .collect()
    }

    pub fn get(&self, x_code: i64, y_code: i64) -> u64 {
        let r = self.alphabet.binary_search(&x_code);
        let c = self.alphabet.binary_search(&y_code);
        match (r, c) {
            (Ok(r), Ok(c)) => self.counts[r][c],
            _ => 0,
        }
    }
}

fn require_categorical(x: &TimeSeries, y: &TimeSeries) -> Result<()> {
    if x.is_categorical() && y.is_categorical() {
        Ok(())
    } else {
        Err(CrqaError::NotCategorical)
    }
}

fn table_with_alphabet(x: &[i64], y: &[i64], lag: i64, alphabet: &[i64]) -> ContingencyTable {
    let index: HashMap<i64, usize> = alphabet.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let k = alphabet.len();
    let mut counts = vec![vec![0u64; k]; k];
    let n = x.len().min(y.len());
    // pairs x(t), y(t + lag), i.e. y index j with x index j - lag
    for j in overlap(n, lag) {
        let i = (j as i64 - lag) as usize;
        counts[index[&x[i]]][index[&y[j]]] += 1;
    }
    ContingencyTable {
        lag,
        alphabet: alphabet.to_vec(),
        counts,
    }
}

/// Contingency table of two categorical series at `lag`, over the sorted
/// union of their categories. Series of different length are compared over
/// the shorter length.
pub fn contingency_table(x: &TimeSeries, y: &TimeSeries, lag: i64) -> Result<ContingencyTable> {
    require_categorical(x, y)?;
    let n = x.len().min(y.len());
    let (xs, ys) = (x.truncated(n)?, y.truncated(n)?);
    let alphabet = shared_alphabet(&xs, &ys)?;
    Ok(table_with_alphabet(&xs.codes()?, &ys.codes()?, lag, &alphabet))
}

/// Contingency tables at each profile lag, indexed like every other profile:
/// profile lag `d` pairs `ts1[i]` with `ts2[i - d]`, i.e. the table built at
/// lag `-d`.
pub fn ct_tables(
    ts1: &TimeSeries,
    ts2: &TimeSeries,
    lags: &[i64],
    thrshd: usize,
) -> Result<Vec<ContingencyTable>> {
    require_categorical(ts1, ts2)?;
    if lags.is_empty() {
        return Err(CrqaError::invalid("at least one lag is required"));
    }
    let (x, y) = align_lengths(ts1, ts2, thrshd)?;
    let alphabet = shared_alphabet(&x, &y)?;
    let (xc, yc) = (x.codes()?, y.codes()?);
    Ok(lags
        .iter()
        .map(|&d| table_with_alphabet(&xc, &yc, -d, &alphabet))
        .collect())
}

/// Categorical recurrence profile from contingency-table traces.
pub fn ctcrqa(ts1: &TimeSeries, ts2: &TimeSeries, lags: &[i64], thrshd: usize) -> Result<RecurrenceProfile> {
    let tables = ct_tables(ts1, ts2, lags, thrshd)?;
    let values = tables.iter().map(ContingencyTable::recurrence).collect();
    Ok(RecurrenceProfile::new(ProfileAxis::Lag, lags.to_vec(), values))
}

/// Phi coefficient of a 2x2 table `[[a, b], [c, d]]`; 0 when any marginal is
/// empty.
pub fn phi_coefficient(a: u64, b: u64, c: u64, d: u64) -> f64 {
    let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
    let denom = (a + b) * (c + d) * (a + c) * (b + d);
    if denom == 0.0 {
        return 0.0;
    }
    ((a * d - b * c) / denom.sqrt()).clamp(-1.0, 1.0)
}

/// Phi-coefficient profile for state `k` over lags `-ws..=ws`.
pub fn calcphi(t1: &TimeSeries, t2: &TimeSeries, ws: usize, k: i64) -> Result<RecurrenceProfile> {
    require_categorical(t1, t2)?;
    let n = t1.len().min(t2.len());
    let x = t1.truncated(n)?.codes()?;
    let y = t2.truncated(n)?.codes()?;
    if !x.contains(&k) && !y.contains(&k) {
        return Err(CrqaError::invalid(format!("state {k} occurs in neither series")));
    }
    if ws >= n {
        return Err(CrqaError::invalid(format!(
            "lag range ws={ws} too large for series length {n}"
        )));
    }
    let ws = ws as i64;
    let positions: Vec<i64> = (-ws..=ws).collect();
    let values = positions
        .iter()
        .map(|&d| {
            let (mut a, mut b, mut c, mut e) = (0, 0, 0, 0);
            for i in overlap(n, d) {
                let xk = x[i] == k;
                let yk = y[(i as i64 - d) as usize] == k;
                match (xk, yk) {
                    (true, true) => a += 1,
                    (true, false) => b += 1,
                    (false, true) => c += 1,
                    (false, false) => e += 1,
                }
            }
            phi_coefficient(a, b, c, e)
        })
        .collect();
    Ok(RecurrenceProfile::new(ProfileAxis::Lag, positions, values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::drpdfromts;
    use proptest::prelude::*;

    fn codes(v: &[i64]) -> TimeSeries {
        TimeSeries::from_codes(v).unwrap()
    }

    #[test]
    fn table_hand_enumeration() {
        let t = contingency_table(&codes(&[1, 1, 2]), &codes(&[1, 2, 2]), 0).unwrap();
        assert_eq!(t.alphabet, vec![1, 2]);
        assert_eq!(t.counts, vec![vec![1, 1], vec![0, 1]]);

        let t = contingency_table(&codes(&[1, 2]), &codes(&[1, 2]), 1).unwrap();
        assert_eq!(t.total(), 1);
        assert_eq!(t.get(1, 2), 1);

        let t = contingency_table(&codes(&[1, 2]), &codes(&[1, 2]), -1).unwrap();
        assert_eq!(t.get(2, 1), 1);
        assert_eq!(t.total(), 1);
    }

    #[test]
    fn self_table_is_diagonal() {
        let x = codes(&[3, 1, 3, 3, 2]);
        let t = contingency_table(&x, &x, 0).unwrap();
        assert_eq!(t.counts, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 3]]);
        assert_eq!(t.row_sums(), vec![1, 1, 3]);
    }

    #[test]
    fn continuous_input_rejected() {
        let x = TimeSeries::continuous(vec![1.0, 2.0]).unwrap();
        assert_eq!(contingency_table(&x, &x, 0), Err(CrqaError::NotCategorical));
    }

    #[test]
    fn ctcrqa_extremes() {
        let x = codes(&[1, 2, 3, 1, 2]);
        assert_eq!(ctcrqa(&x, &x, &[0], 0).unwrap().values, vec![1.0]);
        let y = codes(&[7, 8, 7, 8, 9]);
        let p = ctcrqa(&x, &y, &[-2, -1, 0, 1, 2], 0).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn ctcrqa_length_tolerance() {
        let x = codes(&[1, 2, 3, 1, 2, 3, 1]);
        let y = codes(&[1, 2, 3]);
        assert_eq!(
            ctcrqa(&x, &y, &[0], 2),
            Err(CrqaError::LengthMismatch { diff: 4, max: 2 })
        );
        assert!(ctcrqa(&x, &y, &[0], 4).is_ok());
    }

    #[test]
    fn phi_examples() {
        let x = codes(&[5, 1, 5, 2, 5, 3]);
        let p = calcphi(&x, &x, 2, 5).unwrap();
        assert_eq!(p.value_at(0), Some(1.0));
        assert_eq!(phi_coefficient(3, 0, 0, 0), 0.0);
        assert!(calcphi(&x, &x, 2, 9).is_err());
        assert!(calcphi(&x, &x, 6, 5).is_err());
    }

    proptest! {
        #[test]
        fn trace_identity(
            x in prop::collection::vec(0i64..4, 10..40),
            y in prop::collection::vec(0i64..4, 10..40),
        ) {
            let n = x.len().min(y.len());
            let (a, b) = (codes(&x[..n]), codes(&y[..n]));
            let ws = (n - 1) / 2;
            let lags: Vec<i64> = (-(ws as i64)..=ws as i64).collect();
            let ct = ctcrqa(&a, &b, &lags, 0).unwrap();
            let drp = drpdfromts(&a, &b, ws, 0.0).unwrap();
            prop_assert_eq!(ct.values, drp.values);
        }

        #[test]
        fn table_totals_and_marginals(
            x in prop::collection::vec(0i64..5, 1..30),
            y in prop::collection::vec(0i64..5, 1..30),
            lag in -10i64..10,
        ) {
            let n = x.len().min(y.len());
            let t = contingency_table(&codes(&x), &codes(&y), lag).unwrap();
            prop_assert_eq!(t.total() as usize, n.saturating_sub(lag.unsigned_abs() as usize));
            if lag == 0 {
                let freq = |s: &[i64], c: i64| s[..n].iter().filter(|&&v| v == c).count() as u64;
                for (k, &c) in t.alphabet.iter().enumerate() {
                    prop_assert_eq!(t.row_sums()[k], freq(&x, c));
                    prop_assert_eq!(t.col_sums()[k], freq(&y, c));
                }
            }
        }

        #[test]
        fn phi_swap_symmetry(
            x in prop::collection::vec(0i64..3, 8..30),
            y in prop::collection::vec(0i64..3, 8..30),
        ) {
            let n = x.len().min(y.len());
            let (a, b) = (codes(&x[..n]), codes(&y[..n]));
            let k = x[0];
            let ws = n / 2;
            let p = calcphi(&a, &b, ws, k).unwrap();
            let q = calcphi(&b, &a, ws, k).unwrap();
            for (&d, &v) in p.positions.iter().zip(&p.values) {
                prop_assert!((-1.0..=1.0).contains(&v));
                prop_assert_eq!(Some(v), q.value_at(-d));
            }
        }
    }
}
