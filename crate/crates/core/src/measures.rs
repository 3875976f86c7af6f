//! The CRQA measure bundle and the full analysis pipeline.

use serde::{Deserialize, Serialize};

use crate::embedding::{self, EmbeddingParams};
use crate::error::{CrqaError, Result};
use crate::lines::{self, WhiteLines};
use crate::plot::RecurrencePlot;
use crate::series::{check_same_kind, TimeSeries};

/// Measures extracted from one recurrence plot.
///
/// Percentages (`rr`, `det`, `lam`) are in `[0, 100]`. Undefined ratios are
/// reported as 0, never NaN.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CrqaMeasures {
    #[serde(rename = "RR")]
    pub rr: f64,
    #[serde(rename = "DET")]
    pub det: f64,
    #[serde(rename = "NRLINE")]
    pub nrline: usize,
    #[serde(rename = "Lmax")]
    pub lmax: usize,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "ENTR")]
    pub entr: f64,
    #[serde(rename = "relENTR")]
    pub rel_entr: f64,
    #[serde(rename = "LAM")]
    pub lam: f64,
    #[serde(rename = "TT")]
    pub tt: f64,
}

impl CrqaMeasures {
    pub const NAMES: [&'static str; 9] = [
        "RR", "DET", "NRLINE", "Lmax", "L", "ENTR", "relENTR", "LAM", "TT",
    ];

    /// Values in the order of [`CrqaMeasures::NAMES`].
    pub fn to_array(&self) -> [f64; 9] {
        [
            self.rr,
            self.det,
            self.nrline as f64,
            self.lmax as f64,
            self.l,
            self.entr,
            self.rel_entr,
            self.lam,
            self.tt,
        ]
    }
}

fn percent(part: usize, whole: usize) -> f64 {
    if whole == 0 {
        0.0
    } else {
        100.0 * part as f64 / whole as f64
    }
}

/// Entropy normalized by the log of the number of lines.
pub fn relative_entropy(entropy: f64, lines: usize) -> f64 {
    if lines > 1 {
        entropy / (lines as f64).ln()
    } else {
        0.0
    }
}

pub fn compute_measures(
    rp: &RecurrencePlot,
    min_diag: usize,
    min_vert: usize,
) -> Result<CrqaMeasures> {
    Ok(measures_with_white(rp, min_diag, min_vert)?.0)
}

fn measures_with_white(
    rp: &RecurrencePlot,
    min_diag: usize,
    min_vert: usize,
) -> Result<(CrqaMeasures, WhiteLines)> {
    let scan = lines::scan_lines(rp, min_diag, min_vert, min_vert)?;
    if scan.recurrent == 0 {
        return Ok((CrqaMeasures::default(), scan.white));
    }
    let total = scan.recurrent;
    let nrline = scan.diagonal.lines();
    let entr = scan.diagonal.entropy();
    let measures = CrqaMeasures {
        rr: percent(total, rp.cells()),
        det: percent(scan.diagonal.points(), total),
        nrline,
        lmax: scan.longest_off_main,
        l: scan.diagonal.mean_length(),
        entr,
        rel_entr: relative_entropy(entr, nrline),
        lam: percent(scan.vertical.points(), total),
        tt: scan.vertical.mean_length(),
    };
    Ok((measures, scan.white))
}

/// Everything the pipeline needs beyond the two series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrqaParams {
    #[serde(flatten)]
    pub embedding: EmbeddingParams,
    pub mindiagline: usize,
    pub minvertline: usize,
    pub whiteline: bool,
}

impl Default for CrqaParams {
    fn default() -> Self {
        CrqaParams {
            embedding: EmbeddingParams::default(),
            mindiagline: 2,
            minvertline: 2,
            whiteline: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrqaOutput {
    pub measures: CrqaMeasures,
    /// Present when `whiteline` was requested.
    pub white: Option<WhiteLines>,
    /// Present when the caller asked to keep the plot.
    pub plot: Option<RecurrencePlot>,
}

/// Builds the cross-recurrence plot: normalize, embed, distance, rescale,
/// threshold.
pub fn build_plot(ts1: &TimeSeries, ts2: &TimeSeries, params: &EmbeddingParams) -> Result<RecurrencePlot> {
    check_same_kind(ts1, ts2).map_err(|e| e.in_stage("input"))?;
    params.validate().map_err(|e| e.in_stage("parameters"))?;
    let x = embedding::normalize(ts1, params.normalize).map_err(|e| e.in_stage("normalize"))?;
    let y = embedding::normalize(ts2, params.normalize).map_err(|e| e.in_stage("normalize"))?;
    let a = embedding::embed(&x, params.delay, params.embed).map_err(|e| e.in_stage("embed"))?;
    let b = embedding::embed(&y, params.delay, params.embed).map_err(|e| e.in_stage("embed"))?;
    embedding::recurrence_plot(&a, &b, params.rescale, params.radius)
        .map_err(|e| e.in_stage("threshold"))
}

/// Full cross-recurrence quantification of two series.
pub fn crqa(
    ts1: &TimeSeries,
    ts2: &TimeSeries,
    params: &CrqaParams,
    keep_plot: bool,
) -> Result<CrqaOutput> {
    let rp = build_plot(ts1, ts2, &params.embedding)?;
    let mut out = crqa_from_plot(&rp, params)?;
    if keep_plot {
        out.plot = Some(rp);
    }
    Ok(out)
}

/// Measures of a precomputed recurrence plot; the embedding stage is skipped.
pub fn crqa_from_plot(rp: &RecurrencePlot, params: &CrqaParams) -> Result<CrqaOutput> {
    let (measures, white) = measures_with_white(rp, params.mindiagline, params.minvertline)
        .map_err(|e| e.in_stage("measures"))?;
    Ok(CrqaOutput {
        measures,
        white: params.whiteline.then_some(white),
        plot: None,
    })
}

/// Measures for one window of a windowed analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowMeasures {
    pub start: usize,
    #[serde(flatten)]
    pub measures: CrqaMeasures,
}

/// Sliding-window CRQA: the full measure bundle on each window
/// `[start, start + size)` for `start = 0, step, 2 * step, ...`.
///
/// Partial windows at the end are dropped. Both series must already have
/// equal length.
pub fn windowed_crqa(
    ts1: &TimeSeries,
    ts2: &TimeSeries,
    params: &CrqaParams,
    step: usize,
    size: usize,
) -> Result<Vec<WindowMeasures>> {
    if ts1.len() != ts2.len() {
        return Err(CrqaError::LengthMismatch {
            diff: ts1.len().abs_diff(ts2.len()),
            max: 0,
        });
    }
    let n = ts1.len();
    if step < 1 || size < 1 || size > n {
        return Err(CrqaError::invalid(format!(
            "window geometry step={step}, size={size} infeasible for length {n}"
        )));
    }
    (0..=n - size)
        .step_by(step)
        .map(|start| {
            let x = ts1.slice(start, size)?;
            let y = ts2.slice(start, size)?;
            let out = crqa(&x, &y, params, false)?;
            Ok(WindowMeasures {
                start,
                measures: out.measures,
            })
        })
        .collect()
}
