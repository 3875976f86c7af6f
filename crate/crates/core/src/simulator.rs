//! Coupled dichotomous event series: a confederate C whose events raise the
//! chance of an event in a participant S on the following step.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CrqaError, Result};
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DyadParams {
    /// Base event rate of C.
    pub p_c: f64,
    /// Base event rate of S.
    pub p_s: f64,
    /// Probability that C repeats an event.
    pub p_cc: f64,
    /// Probability that S repeats an event.
    pub p_ss: f64,
    /// Probability that S emits an event after C did.
    pub p_sc: f64,
    pub length: usize,
    pub seed: u64,
}

impl DyadParams {
    /// Low-rate demonstration condition.
    pub fn low(length: usize, seed: u64) -> Self {
        DyadParams {
            p_c: 0.05,
            p_s: 0.05,
            p_cc: 0.2,
            p_ss: 0.2,
            p_sc: 0.25,
            length,
            seed,
        }
    }

    /// High-rate demonstration condition.
    pub fn high(length: usize, seed: u64) -> Self {
        DyadParams {
            p_c: 0.25,
            ..Self::low(length, seed)
        }
    }

    /// Parameters of the timing benchmark.
    pub fn benchmark(length: usize, seed: u64) -> Self {
        DyadParams {
            p_c: 0.08,
            p_s: 0.05,
            p_cc: 0.05,
            p_ss: 0.05,
            p_sc: 0.33,
            length,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let probs = [
            ("p_c", self.p_c),
            ("p_s", self.p_s),
            ("p_cc", self.p_cc),
            ("p_ss", self.p_ss),
            ("p_sc", self.p_sc),
        ];
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(CrqaError::invalid(format!("{name} = {p} is not a probability")));
            }
        }
        if self.length < 1 {
            return Err(CrqaError::invalid("length must be at least 1"));
        }
        Ok(())
    }
}

/// Generates `(C, S)`.
///
/// Each step, in order, with a fresh uniform draw per comparison:
/// C fires with `p_c`, else repeats a previous event with `p_cc`;
/// S fires with `p_sc` if C fired on the previous step, else with `p_s`,
/// else repeats a previous event with `p_ss`. Before the first step both
/// agents count as silent.
pub fn simulate_dyad(params: &DyadParams) -> Result<(TimeSeries, TimeSeries)> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut c = Vec::with_capacity(params.length);
    let mut s = Vec::with_capacity(params.length);
    let (mut prev_c, mut prev_s) = (false, false);
    for _ in 0..params.length {
        let cur_c = rng.gen::<f64>() < params.p_c || (rng.gen::<f64>() < params.p_cc && prev_c);
        let cur_s = (rng.gen::<f64>() < params.p_sc && prev_c)
            || rng.gen::<f64>() < params.p_s
            || (rng.gen::<f64>() < params.p_ss && prev_s);
        c.push(f64::from(u8::from(cur_c)));
        s.push(f64::from(u8::from(cur_s)));
        prev_c = cur_c;
        prev_s = cur_s;
    }
    Ok((TimeSeries::categorical(c)?, TimeSeries::categorical(s)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedPair {
    pub size: usize,
    pub iteration: usize,
    pub seed: u64,
    pub c: TimeSeries,
    pub s: TimeSeries,
}

/// Per-run seed: the base seed plus the run's position in size-major order.
pub fn run_seed(base: u64, size_index: usize, iteration: usize, iterations: usize) -> u64 {
    base.wrapping_add((size_index * iterations + iteration) as u64)
}

/// One simulated pair per `(size, iteration)`, sizes outermost.
pub fn simulate_benchmark_set(
    sizes: &[usize],
    iterations: usize,
    params: &DyadParams,
) -> Result<Vec<SimulatedPair>> {
    let mut out = Vec::with_capacity(sizes.len() * iterations);
    for (si, &size) in sizes.iter().enumerate() {
        for iteration in 0..iterations {
            let seed = run_seed(params.seed, si, iteration, iterations);
            let (c, s) = simulate_dyad(&DyadParams {
                length: size,
                seed,
                ..*params
            })?;
            out.push(SimulatedPair {
                size,
                iteration,
                seed,
                c,
                s,
            });
        }
    }
    Ok(out)
}

/// The timing grid: 11 sizes from 500 to 3000 in steps of 250.
pub fn benchmark_sizes() -> Vec<usize> {
    (2..=12).map(|k| 250 * k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturated_probabilities() {
        let p = DyadParams {
            p_c: 1.0,
            p_s: 0.0,
            p_cc: 0.0,
            p_ss: 0.0,
            p_sc: 1.0,
            length: 50,
            seed: 1,
        };
        let (c, s) = simulate_dyad(&p).unwrap();
        assert!(c.values().iter().all(|&v| v == 1.0));
        // S needs a previous C event, so the very first step stays silent
        assert_eq!(s.values()[0], 0.0);
        assert!(s.values()[1..].iter().all(|&v| v == 1.0));

        let all = DyadParams { p_s: 1.0, ..p };
        let (_, s) = simulate_dyad(&all).unwrap();
        assert!(s.values().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn silent_dyad() {
        let p = DyadParams {
            p_c: 0.0,
            p_s: 0.0,
            p_cc: 0.0,
            p_ss: 0.0,
            p_sc: 0.0,
            length: 40,
            seed: 9,
        };
        let (c, s) = simulate_dyad(&p).unwrap();
        assert!(c.values().iter().chain(s.values()).all(|&v| v == 0.0));
    }

    #[test]
    fn seeds_are_deterministic() {
        let p = DyadParams::high(300, 42);
        assert_eq!(simulate_dyad(&p).unwrap(), simulate_dyad(&p).unwrap());
        let q = DyadParams { seed: 43, ..p };
        assert_ne!(simulate_dyad(&p).unwrap(), simulate_dyad(&q).unwrap());
    }

    #[test]
    fn benchmark_grid() {
        let sizes = benchmark_sizes();
        assert_eq!(sizes.len(), 11);
        assert_eq!((sizes[0], sizes[10]), (500, 3000));
        let set = simulate_benchmark_set(&[100], 1, &DyadParams::benchmark(0, 3)).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set[0].c.len(), 100);
        assert_eq!(set[0].s.len(), 100);
    }

    #[test]
    fn invalid_probability() {
        let p = DyadParams {
            p_sc: 1.5,
            ..DyadParams::low(10, 0)
        };
        assert!(simulate_dyad(&p).is_err());
    }
}
