//! Inputs shared by the criterion benches.

use crqa_core::simulator::{simulate_dyad, DyadParams};
use crqa_core::TimeSeries;

/// A benchmark-condition dyad of the given length; fixed seed so every bench
/// sees the same series.
pub fn dyad(length: usize) -> (TimeSeries, TimeSeries) {
    simulate_dyad(&DyadParams::benchmark(length, 0x5eed)).expect("valid benchmark parameters")
}

/// Two noisy sinusoids with a phase offset.
pub fn sinusoids(length: usize) -> (TimeSeries, TimeSeries) {
    let wave = |phase: f64| {
        (0..length)
            .map(|t| {
                let t = t as f64;
                (0.07 * t + phase).sin() + 0.05 * (1.3 * t).sin()
            })
            .collect()
    };
    (
        TimeSeries::continuous(wave(0.0)).expect("finite"),
        TimeSeries::continuous(wave(0.5)).expect("finite"),
    )
}
