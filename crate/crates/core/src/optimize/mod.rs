//! Search for delay, embedding dimension and radius: delay from the first
//! sustained minimum of average mutual information, dimension from false
//! nearest neighbours, radius from a target recurrence-rate band.

mod ami;
mod fnn;

use serde::{Deserialize, Serialize};

pub use ami::{average_mutual_information, default_bins};
pub use fnn::{bottom_out, false_nearest_neighbors, FnnCurve, FnnTolerance};

use crate::embedding::{self, embedded_len, Normalization, Rescale};
use crate::error::{CrqaError, Result};
use crate::series::{check_same_kind, TimeSeries};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizeConfig {
    /// Largest lag of the mutual-information curve.
    pub lgm: usize,
    /// Look-ahead offsets a local minimum must hold against.
    pub steps: Vec<usize>,
    /// Candidate delays.
    pub cut_del: Vec<usize>,
    /// Accepted recurrence-rate band, in percent.
    pub target_rr: [f64; 2],
    pub max_embed: usize,
    /// Candidate radii; `None` uses `radius_grid_points` log-spaced values
    /// between 1% and 100% of the largest (rescaled) distance.
    pub radius_grid: Option<Vec<f64>>,
    pub radius_grid_points: usize,
    /// Histogram bins for mutual information; `None` means `ceil(sqrt(T))`.
    pub bins: Option<usize>,
    /// Two delays closer than this are averaged; `None` means
    /// `max(1, ceil(0.1 * max(d1, d2)))`.
    pub delay_closeness: Option<usize>,
    pub fnn_rtol: f64,
    pub fnn_atol: f64,
    /// False-neighbour fraction regarded as zero.
    pub fnn_floor: f64,
    /// Smallest improvement worth another dimension.
    pub fnn_min_gain: f64,
    pub rescale: Rescale,
    pub normalize: Normalization,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        OptimizeConfig {
            lgm: 100,
            steps: (1..=10).collect(),
            cut_del: (1..=40).collect(),
            target_rr: [1.0, 5.0],
            max_embed: 20,
            radius_grid: None,
            radius_grid_points: 64,
            bins: None,
            delay_closeness: None,
            fnn_rtol: 10.0,
            fnn_atol: 2.0,
            fnn_floor: 0.01,
            fnn_min_gain: 0.001,
            rescale: Rescale::None,
            normalize: Normalization::None,
        }
    }
}

impl OptimizeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.lgm < 2 {
            return Err(CrqaError::invalid("lgM must be at least 2"));
        }
        let [lo, hi] = self.target_rr;
        if !(lo > 0.0 && hi < 100.0 && lo <= hi) {
            return Err(CrqaError::invalid(format!(
                "target recurrence band [{lo}, {hi}] must lie within (0, 100)"
            )));
        }
        if self.steps.is_empty() || self.cut_del.is_empty() {
            return Err(CrqaError::invalid("steps and cut_del must be non-empty"));
        }
        if self.cut_del.contains(&0) {
            return Err(CrqaError::invalid("candidate delays must be at least 1"));
        }
        if self.max_embed < 1 {
            return Err(CrqaError::invalid("max_embed must be at least 1"));
        }
        if let Some(grid) = &self.radius_grid {
            if grid.is_empty() || grid.iter().any(|r| r.is_nan() || *r < 0.0) {
                return Err(CrqaError::invalid("radius grid must be non-empty and non-negative"));
            }
        } else if self.radius_grid_points < 2 {
            return Err(CrqaError::invalid("radius grid needs at least 2 points"));
        }
        Ok(())
    }

    pub fn closeness(&self, d1: usize, d2: usize) -> usize {
        self.delay_closeness
            .unwrap_or_else(|| ((0.1 * d1.max(d2) as f64).ceil() as usize).max(1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalParams {
    pub radius: f64,
    pub emddim: usize,
    pub delay: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayChoice {
    pub delay: usize,
    pub fallback: bool,
}

/// Delay of one series: the first candidate that is a local minimum of the
/// mutual-information curve and stays at or below every look-ahead value.
///
/// Without such a minimum, falls back to the first candidate where the
/// curve drops below `1/e` of its lag-0 value, else to the last candidate.
pub fn series_delay(ami: &[f64], cfg: &OptimizeConfig) -> DelayChoice {
    let maxlag = ami.len() - 1;
    let mut candidates: Vec<usize> = cfg.cut_del.iter().copied().filter(|&d| d <= maxlag).collect();
    candidates.sort_unstable();
    candidates.dedup();
    for &d in &candidates {
        if ami[d] >= ami[d - 1] {
            continue;
        }
        let ahead: Vec<f64> = cfg
            .steps
            .iter()
            .filter_map(|&s| ami.get(d + s).copied())
            .collect();
        if !ahead.is_empty() && ahead.iter().all(|&v| ami[d] <= v) {
            return DelayChoice {
                delay: d,
                fallback: false,
            };
        }
    }
    let cutoff = ami[0] / std::f64::consts::E;
    let delay = candidates
        .iter()
        .copied()
        .find(|&d| ami[d] < cutoff)
        .or(candidates.last().copied())
        .unwrap_or(1);
    DelayChoice {
        delay,
        fallback: true,
    }
}

/// Mean of close delays (rounded half up), otherwise the larger one.
pub fn combine_delays(d1: usize, d2: usize, closeness: usize) -> usize {
    if d1.abs_diff(d2) <= closeness {
        (d1 + d2).div_ceil(2)
    } else {
        d1.max(d2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DelaySelection {
    pub delay: usize,
    pub per_series: [usize; 2],
    pub closeness: usize,
    pub warnings: Vec<String>,
}

pub fn select_delay(ts1: &TimeSeries, ts2: &TimeSeries, cfg: &OptimizeConfig) -> Result<DelaySelection> {
    let mut warnings = Vec::new();
    let mut per_series = [0; 2];
    for (k, ts) in [ts1, ts2].into_iter().enumerate() {
        let mut maxlag = cfg.lgm;
        if maxlag >= ts.len() {
            maxlag = ts.len().saturating_sub(1);
            warnings.push(format!(
                "series {}: lgM reduced to {maxlag} for length {}",
                k + 1,
                ts.len()
            ));
        }
        if maxlag < 1 {
            return Err(CrqaError::invalid("series too short for mutual information"));
        }
        let bins = cfg.bins.unwrap_or_else(|| default_bins(ts.len()));
        let ami = average_mutual_information(ts, maxlag, bins)?;
        let choice = series_delay(&ami, cfg);
        if choice.fallback {
            warnings.push(format!(
                "series {}: no sustained mutual-information minimum, using delay {}",
                k + 1,
                choice.delay
            ));
        }
        per_series[k] = choice.delay;
    }
    let closeness = cfg.closeness(per_series[0], per_series[1]);
    Ok(DelaySelection {
        delay: combine_delays(per_series[0], per_series[1], closeness),
        per_series,
        closeness,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedSelection {
    pub emddim: usize,
    pub per_series: [usize; 2],
    pub fractions: [Vec<f64>; 2],
    pub warnings: Vec<String>,
}

/// Embedding dimension: the higher of the two series' bottoming-out
/// dimensions.
pub fn select_embed(ts1: &TimeSeries, ts2: &TimeSeries, delay: usize, cfg: &OptimizeConfig) -> Result<EmbedSelection> {
    let tol = FnnTolerance {
        rtol: cfg.fnn_rtol,
        atol: cfg.fnn_atol,
    };
    let a = false_nearest_neighbors(ts1, delay, cfg.max_embed, tol)?;
    let b = false_nearest_neighbors(ts2, delay, cfg.max_embed, tol)?;
    let m1 = bottom_out(&a.fractions, cfg.fnn_floor, cfg.fnn_min_gain);
    let m2 = bottom_out(&b.fractions, cfg.fnn_floor, cfg.fnn_min_gain);
    let mut warnings = a.warnings;
    warnings.extend(b.warnings);
    Ok(EmbedSelection {
        emddim: m1.max(m2),
        per_series: [m1, m2],
        fractions: [a.fractions, b.fractions],
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSelection {
    pub radius: f64,
    /// Recurrence rate (percent) at the chosen radius.
    pub rr: f64,
    pub in_band: bool,
    pub warnings: Vec<String>,
}

/// Scans radii in ascending order and returns the first whose recurrence
/// rate falls in the target band, else the radius closest to the band.
pub fn select_radius(
    ts1: &TimeSeries,
    ts2: &TimeSeries,
    delay: usize,
    emddim: usize,
    cfg: &OptimizeConfig,
) -> Result<RadiusSelection> {
    let x = embedding::normalize(ts1, cfg.normalize)?;
    let y = embedding::normalize(ts2, cfg.normalize)?;
    let a = embedding::embed(&x, delay, emddim)?;
    let b = embedding::embed(&y, delay, emddim)?;
    let d = embedding::rescale_matrix(&embedding::distance_matrix(&a, &b)?, cfg.rescale);
    let mut dist: Vec<f64> = (0..d.rows()).flat_map(|i| d.row(i).to_vec()).collect();
    dist.sort_unstable_by(f64::total_cmp);
    let max = *dist.last().expect("non-empty distance matrix");

    let mut grid = match &cfg.radius_grid {
        Some(g) => g.clone(),
        None => {
            if max == 0.0 {
                return Err(CrqaError::invalid("all distances are zero; no radius scale"));
            }
            let k = cfg.radius_grid_points;
            (0..k)
                .map(|i| max * 0.01 * 100f64.powf(i as f64 / (k - 1) as f64))
                .collect()
        }
    };
    grid.sort_unstable_by(f64::total_cmp);

    let rr_at = |r: f64| 100.0 * dist.partition_point(|&v| v <= r) as f64 / dist.len() as f64;
    let [lo, hi] = cfg.target_rr;
    let mut closest: Option<(f64, f64, f64)> = None;
    for &r in &grid {
        let rr = rr_at(r);
        if (lo..=hi).contains(&rr) {
            return Ok(RadiusSelection {
                radius: r,
                rr,
                in_band: true,
                warnings: Vec::new(),
            });
        }
        let gap = if rr < lo { lo - rr } else { rr - hi };
        if closest.is_none_or(|(g, _, _)| gap < g) {
            closest = Some((gap, r, rr));
        }
    }
    let (_, radius, rr) = closest.expect("non-empty radius grid");
    Ok(RadiusSelection {
        radius,
        rr,
        in_band: false,
        warnings: vec![format!(
            "no candidate radius reaches {lo}-{hi}% recurrence; closest gives {rr:.3}%"
        )],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeReport {
    pub params: OptimalParams,
    pub delay: DelaySelection,
    pub embed: EmbedSelection,
    pub radius: RadiusSelection,
}

impl OptimizeReport {
    pub fn warnings(&self) -> impl Iterator<Item = &String> {
        self.delay
            .warnings
            .iter()
            .chain(&self.embed.warnings)
            .chain(&self.radius.warnings)
    }
}

/// Delay, then embedding dimension, then radius.
pub fn optimize_param(ts1: &TimeSeries, ts2: &TimeSeries, cfg: &OptimizeConfig) -> Result<OptimizeReport> {
    check_same_kind(ts1, ts2).map_err(|e| e.in_stage("input"))?;
    cfg.validate().map_err(|e| e.in_stage("config"))?;
    let delay = select_delay(ts1, ts2, cfg).map_err(|e| e.in_stage("delay"))?;
    let embed = select_embed(ts1, ts2, delay.delay, cfg).map_err(|e| e.in_stage("embedding"))?;
    let shortest = ts1.len().min(ts2.len());
    if embedded_len(shortest, delay.delay, embed.emddim).is_none() {
        return Err(CrqaError::TooShortToEmbed {
            len: shortest,
            embed: embed.emddim,
            delay: delay.delay,
        }
        .in_stage("embedding"));
    }
    let radius = select_radius(ts1, ts2, delay.delay, embed.emddim, cfg).map_err(|e| e.in_stage("radius"))?;
    Ok(OptimizeReport {
        params: OptimalParams {
            radius: radius.radius,
            emddim: embed.emddim,
            delay: delay.delay,
        },
        delay,
        embed,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delay_combination_rules() {
        assert_eq!(combine_delays(5, 5, 1), 5);
        assert_eq!(combine_delays(4, 6, 2), 5);
        assert_eq!(combine_delays(3, 20, 2), 20);
        assert_eq!(combine_delays(4, 6, 1), 6);
        let cfg = OptimizeConfig::default();
        assert_eq!(cfg.closeness(4, 6), 1);
        assert_eq!(cfg.closeness(3, 20), 2);
    }

    #[test]
    fn first_sustained_minimum() {
        let cfg = OptimizeConfig {
            steps: vec![1, 2],
            cut_del: (1..=6).collect(),
            ..OptimizeConfig::default()
        };
        // dip at 2 is undercut at 4; the sustained minimum is 4
        let ami = [2.0, 1.0, 0.8, 0.9, 0.5, 0.6, 0.7];
        assert_eq!(
            series_delay(&ami, &cfg),
            DelayChoice {
                delay: 4,
                fallback: false
            }
        );
        let falling = [3.0, 2.0, 1.5, 1.0, 0.9, 0.8, 0.7];
        let choice = series_delay(&falling, &cfg);
        assert!(choice.fallback);
        assert_eq!(choice.delay, 3);
    }

    #[test]
    fn radius_band_edges() {
        let x = TimeSeries::continuous((0..60).map(|t| (t as f64 * 0.3).sin()).collect()).unwrap();
        let y = TimeSeries::continuous((0..60).map(|t| (t as f64 * 0.3 + 0.5).cos()).collect()).unwrap();
        let zero = OptimizeConfig {
            radius_grid: Some(vec![0.0]),
            ..OptimizeConfig::default()
        };
        let r = select_radius(&x, &y, 1, 1, &zero).unwrap();
        assert!(!r.in_band && r.rr < 1.0);
        let huge = OptimizeConfig {
            radius_grid: Some(vec![10.0]),
            ..OptimizeConfig::default()
        };
        let r = select_radius(&x, &y, 1, 1, &huge).unwrap();
        assert!(!r.in_band && r.rr == 100.0);
        let r = select_radius(&x, &y, 1, 1, &OptimizeConfig::default()).unwrap();
        assert!(r.in_band, "{r:?}");
    }

    #[test]
    fn invalid_config() {
        let cfg = OptimizeConfig {
            target_rr: [0.0, 5.0],
            ..OptimizeConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = OptimizeConfig {
            lgm: 1,
            ..OptimizeConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
