//! Diagonal and vertical line extraction from recurrence plots.
//!
//! All structures are collected in one row-major pass that keeps the current
//! run length per diagonal and per column.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CrqaError, Result};
use crate::plot::RecurrencePlot;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Diagonal,
    Vertical,
}

/// Number of maximal lines per exact length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineHistogram {
    pub orientation: Orientation,
    pub counts: BTreeMap<usize, usize>,
}

impl LineHistogram {
    pub fn new(orientation: Orientation) -> Self {
        LineHistogram {
            orientation,
            counts: BTreeMap::new(),
        }
    }

    pub fn add(&mut self, length: usize) {
        *self.counts.entry(length).or_insert(0) += 1;
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn lines(&self) -> usize {
        self.counts.values().sum()
    }

    /// Recurrent points covered by the histogram's lines.
    pub fn points(&self) -> usize {
        self.counts.iter().map(|(l, c)| l * c).sum()
    }

    pub fn max_length(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn mean_length(&self) -> f64 {
        let lines = self.lines();
        if lines == 0 {
            0.0
        } else {
            self.points() as f64 / lines as f64
        }
    }

    /// Shannon entropy (nats) of the distribution of lines over lengths.
    pub fn entropy(&self) -> f64 {
        let lines = self.lines() as f64;
        if lines == 0.0 {
            return 0.0;
        }
        let h: f64 = self
            .counts
            .values()
            .map(|&c| {
                let p = c as f64 / lines;
                -p * p.ln()
            })
            .sum();
        // a single length class gives -1 * ln 1 = -0.0
        h.max(0.0)
    }
}

/// Counts and mean length of maximal non-recurrent vertical segments.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WhiteLines {
    pub count: usize,
    pub mean_length: f64,
}

/// Everything one pass over a plot collects.
#[derive(Debug, Clone, PartialEq)]
pub struct LineScan {
    pub recurrent: usize,
    pub diagonal: LineHistogram,
    /// Longest qualifying diagonal line off the line of coincidence.
    pub longest_off_main: usize,
    pub vertical: LineHistogram,
    pub white: WhiteLines,
}

pub(crate) fn check_min_length(min: usize, what: &str) -> Result<()> {
    if min < 2 {
        return Err(CrqaError::invalid(format!(
            "minimum {what} line length must be at least 2, got {min}"
        )));
    }
    Ok(())
}

pub fn scan_lines(
    rp: &RecurrencePlot,
    min_diag: usize,
    min_vert: usize,
    min_white: usize,
) -> Result<LineScan> {
    check_min_length(min_diag, "diagonal")?;
    check_min_length(min_vert, "vertical")?;
    let (rows, cols) = (rp.rows(), rp.cols());

    let mut scan = LineScan {
        recurrent: 0,
        diagonal: LineHistogram::new(Orientation::Diagonal),
        longest_off_main: 0,
        vertical: LineHistogram::new(Orientation::Vertical),
        white: WhiteLines::default(),
    };
    if rows == 0 || cols == 0 {
        return Ok(scan);
    }

    let mut diagonal = scan.diagonal;
    let mut longest = 0usize;
    let mut close_diag = |len: usize, offset: i64| {
        if len >= min_diag {
            diagonal.add(len);
            if offset != 0 {
                longest = longest.max(len);
            }
        }
    };

    // diag[j]: run length of the diagonal ending at (i, j)
    let mut diag = vec![0usize; cols];
    let mut vert = vec![0usize; cols];
    let mut white = vec![0usize; cols];
    let mut white_lines = 0usize;
    let mut white_points = 0usize;
    let mut close_white = |len: usize| {
        if len >= min_white {
            white_lines += 1;
            white_points += len;
        }
    };

    let mut cell = vec![false; cols];
    for i in 0..rows {
        let words = rp.row_words(i);
        for (j, c) in cell.iter_mut().enumerate() {
            *c = (words[j / 64] >> (j % 64)) & 1 == 1;
        }
        scan.recurrent += cell.iter().filter(|&&c| c).count();

        let prev_row = i as i64 - 1;
        // the run ending in the last column of the previous row cannot grow
        if diag[cols - 1] > 0 {
            close_diag(diag[cols - 1], (cols - 1) as i64 - prev_row);
        }
        for j in (1..cols).rev() {
            let prev = diag[j - 1];
            if cell[j] {
                diag[j] = prev + 1;
            } else {
                if prev > 0 {
                    close_diag(prev, (j - 1) as i64 - prev_row);
                }
                diag[j] = 0;
            }
        }
        diag[0] = usize::from(cell[0]);

        for j in 0..cols {
            if cell[j] {
                vert[j] += 1;
                if white[j] > 0 {
                    close_white(white[j]);
                    white[j] = 0;
                }
            } else {
                white[j] += 1;
                if vert[j] > 0 {
                    if vert[j] >= min_vert {
                        scan.vertical.add(vert[j]);
                    }
                    vert[j] = 0;
                }
            }
        }
    }
    let last_row = rows as i64 - 1;
    for j in 0..cols {
        if diag[j] > 0 {
            close_diag(diag[j], j as i64 - last_row);
        }
        if vert[j] >= min_vert {
            scan.vertical.add(vert[j]);
        }
        if white[j] > 0 {
            close_white(white[j]);
        }
    }

    scan.diagonal = diagonal;
    scan.longest_off_main = longest;
    scan.white = WhiteLines {
        count: white_lines,
        mean_length: if white_lines == 0 {
            0.0
        } else {
            white_points as f64 / white_lines as f64
        },
    };
    Ok(scan)
}

/// Maximal diagonal runs of length at least `min_length`.
pub fn diagonal_lines(rp: &RecurrencePlot, min_length: usize) -> Result<LineHistogram> {
    Ok(scan_lines(rp, min_length, 2, 1)?.diagonal)
}

/// Maximal vertical runs (fixed column) of length at least `min_length`.
pub fn vertical_lines(rp: &RecurrencePlot, min_length: usize) -> Result<LineHistogram> {
    Ok(scan_lines(rp, 2, min_length, 1)?.vertical)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hist(pairs: &[(usize, usize)]) -> BTreeMap<usize, usize> {
        pairs.iter().copied().collect()
    }

    /// Run lengths along each of the `rows + cols - 1` diagonals, walked
    /// explicitly cell by cell.
    fn diagonal_runs_oracle(rp: &RecurrencePlot, min: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        let (r, c) = (rp.rows() as i64, rp.cols() as i64);
        for offset in -(r - 1)..c {
            let mut run = 0;
            let mut i = if offset < 0 { -offset } else { 0 };
            let mut j = i + offset;
            while i < r && j < c {
                if rp.get(i as usize, j as usize) {
                    run += 1;
                } else {
                    if run >= min {
                        *out.entry(run).or_insert(0) += 1;
                    }
                    run = 0;
                }
                i += 1;
                j += 1;
            }
            if run >= min {
                *out.entry(run).or_insert(0) += 1;
            }
        }
        out
    }

    fn vertical_runs_oracle(rp: &RecurrencePlot, min: usize) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for j in 0..rp.cols() {
            let column: Vec<bool> = (0..rp.rows()).map(|i| rp.get(i, j)).collect();
            for run in column.split(|&c| !c).map(<[bool]>::len) {
                if run >= min {
                    *out.entry(run).or_insert(0) += 1;
                }
            }
        }
        out
    }

    #[test]
    fn identity_plot_lines() {
        let rp = RecurrencePlot::identity(3);
        assert_eq!(diagonal_lines(&rp, 2).unwrap().counts, hist(&[(3, 1)]));
        assert!(vertical_lines(&rp, 2).unwrap().is_empty());
    }

    #[test]
    fn empty_and_full_plots() {
        let rp = RecurrencePlot::empty(4, 5);
        assert!(diagonal_lines(&rp, 2).unwrap().is_empty());
        assert!(vertical_lines(&rp, 2).unwrap().is_empty());

        let full = RecurrencePlot::filled(3, 3);
        assert_eq!(vertical_lines(&full, 2).unwrap().counts, hist(&[(3, 3)]));
    }

    #[test]
    fn minimum_length_is_validated() {
        let rp = RecurrencePlot::identity(2);
        assert!(diagonal_lines(&rp, 1).is_err());
        assert!(vertical_lines(&rp, 0).is_err());
    }

    #[test]
    fn random_plots_match_run_length_oracles() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..200 {
            let (r, c) = if trial == 0 {
                (10, 10)
            } else {
                (rng.gen_range(1..20), rng.gen_range(1..20))
            };
            let p = rng.gen_range(0.1..0.9);
            let rp = RecurrencePlot::from_fn(r, c, |_, _| rng.gen_bool(p));
            for min in 2..4 {
                assert_eq!(diagonal_lines(&rp, min).unwrap().counts, diagonal_runs_oracle(&rp, min));
                assert_eq!(vertical_lines(&rp, min).unwrap().counts, vertical_runs_oracle(&rp, min));
            }
        }
    }

    #[test]
    fn longest_excludes_line_of_coincidence() {
        let mut rp = RecurrencePlot::identity(6);
        rp.set(0, 1, true);
        rp.set(1, 2, true);
        let scan = scan_lines(&rp, 2, 2, 1).unwrap();
        assert_eq!(scan.diagonal.counts, hist(&[(2, 1), (6, 1)]));
        assert_eq!(scan.longest_off_main, 2);
    }

    #[test]
    fn white_vertical_segments() {
        let rp = RecurrencePlot::from_rows(&[
            vec![true, false],
            vec![false, false],
            vec![false, true],
        ])
        .unwrap();
        let scan = scan_lines(&rp, 2, 2, 1).unwrap();
        // column 0: one gap of 2; column 1: one gap of 2
        assert_eq!(scan.white.count, 2);
        assert_eq!(scan.white.mean_length, 2.0);
    }

    #[test]
    fn histogram_statistics() {
        let mut h = LineHistogram::new(Orientation::Diagonal);
        for l in [2, 2, 4] {
            h.add(l);
        }
        assert_eq!(h.lines(), 3);
        assert_eq!(h.points(), 8);
        assert_eq!(h.max_length(), 4);
        let p: [f64; 2] = [2.0 / 3.0, 1.0 / 3.0];
        let expected = -p.iter().map(|q| q * q.ln()).sum::<f64>();
        assert!((h.entropy() - expected).abs() < 1e-15);
    }
}
