use crate::error::{CrqaError, Result};

/// Binary cross-recurrence matrix stored as one packed bit row per point of
/// the first trajectory.
///
/// Row `i` indexes the first series, column `j` the second. Diagonal offset
/// `j - i = 0` is the line of coincidence.
#[derive(Clone, PartialEq, Eq)]
pub struct RecurrencePlot {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for RecurrencePlot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RecurrencePlot {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows.min(64) {
            let line: String = (0..self.cols.min(64))
                .map(|j| if self.get(i, j) { '#' } else { '.' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl RecurrencePlot {
    pub fn empty(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        RecurrencePlot {
            rows,
            cols,
            words_per_row,
            bits: vec![0; rows * words_per_row],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut rp = Self::empty(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    rp.set(i, j, true);
                }
            }
        }
        rp
    }

    /// Builds a plot from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(CrqaError::invalid("recurrence plot rows have unequal lengths"));
        }
        Ok(Self::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    pub(crate) fn from_packed_rows(rows: usize, cols: usize, bits: Vec<u64>) -> Self {
        let words_per_row = cols.div_ceil(64);
        debug_assert_eq!(bits.len(), rows * words_per_row);
        RecurrencePlot {
            rows,
            cols,
            words_per_row,
            bits,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn filled(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        let word = self.bits[i * self.words_per_row + j / 64];
        (word >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let idx = i * self.words_per_row + j / 64;
        let mask = 1u64 << (j % 64);
        if value {
            self.bits[idx] |= mask;
        } else {
            self.bits[idx] &= !mask;
        }
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    /// Number of recurrent points.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn cells(&self) -> usize {
        self.rows * self.cols
    }

    /// Fraction of recurrent cells, in `[0, 1]`; zero for a plot without cells.
    pub fn density(&self) -> f64 {
        if self.cells() == 0 {
            0.0
        } else {
            self.count() as f64 / self.cells() as f64
        }
    }

    /// Recurrence rate along the diagonal `j - i = offset`, or `None` when the
    /// diagonal lies outside the plot.
    pub fn diagonal_rate(&self, offset: i64) -> Option<f64> {
        let (i0, j0) = if offset >= 0 {
            (0usize, offset as usize)
        } else {
            ((-offset) as usize, 0usize)
        };
        if i0 >= self.rows || j0 >= self.cols {
            return None;
        }
        let len = (self.rows - i0).min(self.cols - j0);
        let hits = (0..len).filter(|&k| self.get(i0 + k, j0 + k)).count();
        Some(hits as f64 / len as f64)
    }

    /// The transposed plot (roles of the two series swapped).
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_access_across_word_boundaries() {
        let mut rp = RecurrencePlot::empty(3, 130);
        rp.set(2, 129, true);
        rp.set(1, 64, true);
        rp.set(0, 63, true);
        assert!(rp.get(2, 129) && rp.get(1, 64) && rp.get(0, 63));
        assert!(!rp.get(2, 128));
        assert_eq!(rp.count(), 3);
        rp.set(1, 64, false);
        assert_eq!(rp.count(), 2);
    }

    #[test]
    fn diagonal_rates() {
        let rp = RecurrencePlot::from_rows(&[
            vec![true, false, true],
            vec![false, true, false],
        ])
        .unwrap();
        assert_eq!(rp.diagonal_rate(0), Some(1.0));
        assert_eq!(rp.diagonal_rate(1), Some(0.0));
        assert_eq!(rp.diagonal_rate(2), Some(1.0));
        assert_eq!(rp.diagonal_rate(-1), Some(0.0));
        assert_eq!(rp.diagonal_rate(-2), None);
        assert_eq!(rp.diagonal_rate(3), None);
    }
}
