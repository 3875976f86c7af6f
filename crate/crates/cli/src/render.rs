//! Recurrence-plot rasters: plain PGM or ASCII, origin at the bottom left.
//!
//! Plots larger than the pixel budget are max-pooled over square blocks, so
//! a pixel is recurrent when any cell in its block is.

use clap::ValueEnum;
use crqa_core::RecurrencePlot;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PlotFormat {
    Pgm,
    Txt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RasterInfo {
    pub format: PlotFormat,
    pub rows: usize,
    pub cols: usize,
    pub width: usize,
    pub height: usize,
    /// Side of the pooled block; 1 when no downsampling took place.
    pub block: usize,
}

/// Max-pooled pixel grid, `grid[r][c]` for plot row block `r`.
pub fn pool(rp: &RecurrencePlot, budget: usize) -> (Vec<Vec<bool>>, usize) {
    let budget = budget.max(1);
    let block = rp.rows().max(rp.cols()).div_ceil(budget).max(1);
    let height = rp.rows().div_ceil(block);
    let width = rp.cols().div_ceil(block);
    let mut grid = vec![vec![false; width]; height];
    for i in 0..rp.rows() {
        for j in 0..rp.cols() {
            if rp.get(i, j) {
                grid[i / block][j / block] = true;
            }
        }
    }
    (grid, block)
}

pub fn render_plot(rp: &RecurrencePlot, format: PlotFormat, budget: usize) -> (String, RasterInfo) {
    let (grid, block) = pool(rp, budget);
    let height = grid.len();
    let width = grid.first().map_or(0, Vec::len);
    let mut out = String::new();
    if format == PlotFormat::Pgm {
        out.push_str(&format!("P2 {width} {height} 1\n"));
    }
    // first plot row goes last so that it ends up at the bottom
    for row in grid.iter().rev() {
        let line: Vec<&str> = row
            .iter()
            .map(|&on| match (format, on) {
                (PlotFormat::Pgm, true) => "1",
                (PlotFormat::Pgm, false) => "0",
                (PlotFormat::Txt, true) => "#",
                (PlotFormat::Txt, false) => ".",
            })
            .collect();
        let sep = if format == PlotFormat::Pgm { " " } else { "" };
        out.push_str(&line.join(sep));
        out.push('\n');
    }
    let info = RasterInfo {
        format,
        rows: rp.rows(),
        cols: rp.cols(),
        width,
        height,
        block,
    };
    (out, info)
}
