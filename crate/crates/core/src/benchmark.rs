//! Elapsed-time-versus-size benchmark of the CRQA pipeline, optionally
//! checked against the direct reference implementation.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::measures::{self, CrqaMeasures, CrqaParams};
use crate::oracle;
use crate::profiles::pearson;
use crate::simulator::{simulate_benchmark_set, DyadParams, SimulatedPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Optimized,
    Oracle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub size: usize,
    pub iteration: usize,
    pub seed: u64,
    pub engine: Engine,
    pub elapsed_seconds: f64,
    pub measures: CrqaMeasures,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub iterations: usize,
    pub dyad: DyadParams,
    pub crqa: CrqaParams,
    /// Also run the reference implementation on every pair.
    pub compare: bool,
    /// Run pairs concurrently. Timings are then not comparable across runs;
    /// meant for consistency checks only.
    pub parallel: bool,
}

impl BenchConfig {
    pub fn new(sizes: Vec<usize>, iterations: usize, seed: u64) -> Self {
        BenchConfig {
            sizes,
            iterations,
            dyad: DyadParams::benchmark(0, seed),
            crqa: CrqaParams::default(),
            compare: false,
            parallel: false,
        }
    }
}

fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, start.elapsed().as_secs_f64().max(1e-9)))
}

fn run_pair(pair: &SimulatedPair, cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let record = |engine, (measures, elapsed_seconds)| BenchRecord {
        size: pair.size,
        iteration: pair.iteration,
        seed: pair.seed,
        engine,
        elapsed_seconds,
        measures,
    };
    let mut out = Vec::with_capacity(2);
    let optimized = timed(|| Ok(measures::crqa(&pair.c, &pair.s, &cfg.crqa, false)?.measures))?;
    out.push(record(Engine::Optimized, optimized));
    if cfg.compare {
        let reference = timed(|| oracle::crqa(&pair.c, &pair.s, &cfg.crqa))?;
        out.push(record(Engine::Oracle, reference));
    }
    Ok(out)
}

/// Simulates every `(size, iteration)` pair, then times the pipeline on each.
/// Simulation is excluded from the timings.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    let pairs = simulate_benchmark_set(&cfg.sizes, cfg.iterations, &cfg.dyad)?;
    let nested: Vec<Vec<BenchRecord>> = if cfg.parallel {
        pairs.par_iter().map(|p| run_pair(p, cfg)).collect::<Result<_>>()?
    } else {
        pairs.iter().map(|p| run_pair(p, cfg)).collect::<Result<_>>()?
    };
    Ok(nested.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureAgreement {
    pub measure: String,
    pub pairs: usize,
    pub mean_abs_diff: f64,
    pub sd_abs_diff: f64,
    /// Pearson correlation across runs; `None` when either engine's values
    /// are constant and the two differ.
    pub correlation: Option<f64>,
    pub constant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizeTiming {
    pub size: usize,
    pub engine: Engine,
    pub runs: usize,
    pub mean_elapsed_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub agreement: Vec<MeasureAgreement>,
    pub timings: Vec<SizeTiming>,
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Per-measure agreement between the engines, matched by `(size, iteration)`,
/// and mean elapsed time per size and engine.
pub fn summarize(records: &[BenchRecord]) -> BenchSummary {
    let by_key = |engine: Engine| {
        let mut v: Vec<&BenchRecord> = records.iter().filter(|r| r.engine == engine).collect();
        v.sort_by_key(|r| (r.size, r.iteration));
        v
    };
    let optimized = by_key(Engine::Optimized);
    let reference = by_key(Engine::Oracle);
    let matched: Vec<(&BenchRecord, &BenchRecord)> = optimized
        .iter()
        .filter_map(|o| {
            reference
                .iter()
                .find(|r| r.size == o.size && r.iteration == o.iteration)
                .map(|r| (*o, *r))
        })
        .collect();

    let agreement = CrqaMeasures::NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let a: Vec<f64> = matched.iter().map(|(o, _)| o.measures.to_array()[k]).collect();
            let b: Vec<f64> = matched.iter().map(|(_, r)| r.measures.to_array()[k]).collect();
            let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).collect();
            let (mean_abs_diff, sd_abs_diff) = mean_sd(&diffs);
            let r = pearson(&a, &b);
            let correlation = match r {
                Some(r) => Some(r),
                None if a == b && !a.is_empty() => Some(1.0),
                None => None,
            };
            MeasureAgreement {
                measure: (*name).to_string(),
                pairs: matched.len(),
                mean_abs_diff,
                sd_abs_diff,
                correlation,
                constant: r.is_none(),
            }
        })
        .collect();

    let mut keys: Vec<(usize, Engine)> = records.iter().map(|r| (r.size, r.engine)).collect();
    keys.sort_unstable();
    keys.dedup();
    let timings = keys
        .into_iter()
        .map(|(size, engine)| {
            let times: Vec<f64> = records
                .iter()
                .filter(|r| r.size == size && r.engine == engine)
                .map(|r| r.elapsed_seconds)
                .collect();
            SizeTiming {
                size,
                engine,
                runs: times.len(),
                mean_elapsed_seconds: mean_sd(&times).0,
            }
        })
        .collect();

    BenchSummary { agreement, timings }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_run_populates_all_measures() {
        let records = run_benchmark(&BenchConfig::new(vec![100], 1, 5)).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].engine, Engine::Optimized);
        assert!(records[0].elapsed_seconds > 0.0);
        assert!(records[0].measures.rr > 0.0);
    }

    #[test]
    fn compare_mode_agrees_exactly() {
        let mut cfg = BenchConfig::new(vec![120, 250], 3, 17);
        cfg.compare = true;
        cfg.parallel = true;
        let records = run_benchmark(&cfg).unwrap();
        assert_eq!(records.len(), 12);
        let summary = summarize(&records);
        assert_eq!(summary.agreement.len(), 9);
        for row in &summary.agreement {
            assert_eq!(row.pairs, 6);
            if ["RR", "DET", "Lmax", "L"].contains(&row.measure.as_str()) {
                assert_eq!(row.mean_abs_diff, 0.0, "{}", row.measure);
            }
            assert!(row.mean_abs_diff < 1e-12);
            assert_eq!(row.correlation.map(|c| c > 0.999_999), Some(true), "{row:?}");
        }
        assert_eq!(summary.timings.len(), 4);
    }

    #[test]
    fn identical_constant_columns_are_flagged() {
        let rec = |engine, iteration| BenchRecord {
            size: 10,
            iteration,
            seed: 0,
            engine,
            elapsed_seconds: 1.0,
            measures: CrqaMeasures::default(),
        };
        let records = vec![
            rec(Engine::Optimized, 0),
            rec(Engine::Oracle, 0),
            rec(Engine::Optimized, 1),
            rec(Engine::Oracle, 1),
        ];
        let s = summarize(&records);
        assert!(s.agreement.iter().all(|a| a.constant && a.correlation == Some(1.0) && a.mean_abs_diff == 0.0));
    }
}
