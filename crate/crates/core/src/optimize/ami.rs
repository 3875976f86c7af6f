use crate::error::{CrqaError, Result};
use crate::series::TimeSeries;

/// Default number of histogram bins: `ceil(sqrt(len))`.
pub fn default_bins(len: usize) -> usize {
    ((len as f64).sqrt().ceil() as usize).max(1)
}

/// Average mutual information between the series and its lagged copy for
/// lags `0..=maxlag`, in nats.
///
/// Probabilities come from an equal-width histogram over the full series
/// range. At lag 0 the value is the entropy of the marginal histogram.
pub fn average_mutual_information(ts: &TimeSeries, maxlag: usize, bins: usize) -> Result<Vec<f64>> {
    let x = ts.values();
    if maxlag >= x.len() {
        return Err(CrqaError::invalid(format!(
            "maximum lag {maxlag} must be smaller than series length {}",
            x.len()
        )));
    }
    if bins < 1 {
        return Err(CrqaError::invalid("at least one bin is required"));
    }
    let lo = x.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return Err(CrqaError::ZeroEntropy);
    }
    let width = (hi - lo) / bins as f64;
    let bin: Vec<usize> = x
        .iter()
        .map(|&v| (((v - lo) / width) as usize).min(bins - 1))
        .collect();

    let mut joint = vec![0u32; bins * bins];
    let mut left = vec![0u32; bins];
    let mut right = vec![0u32; bins];
    let mut out = Vec::with_capacity(maxlag + 1);
    for lag in 0..=maxlag {
        joint.fill(0);
        left.fill(0);
        right.fill(0);
        let pairs = x.len() - lag;
        for t in 0..pairs {
            let (a, b) = (bin[t], bin[t + lag]);
            joint[a * bins + b] += 1;
            left[a] += 1;
            right[b] += 1;
        }
        let n = pairs as f64;
        let mut mi = 0.0;
        for a in 0..bins {
            if left[a] == 0 {
                continue;
            }
            for b in 0..bins {
                let c = joint[a * bins + b];
                if c == 0 {
                    continue;
                }
                let p = c as f64 / n;
                mi += p * (c as f64 * n / (left[a] as f64 * right[b] as f64)).ln();
            }
        }
        out.push(mi.max(0.0));
    }
    Ok(out)
}
