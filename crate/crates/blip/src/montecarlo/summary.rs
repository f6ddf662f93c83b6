use std::time::Duration;

use serde::Serialize;

use crate::error::{Error, Result};

/// Aggregated statistics of one ladder point.
///
/// The wall time is informational and never written into result files, so
/// identical configurations produce byte-identical outputs.
#[derive(Debug, Clone, Serialize)]
pub struct SampleSummary {
    pub n: u32,
    pub replicas: u32,
    pub mean: f64,
    pub variance: f64,
    pub se: f64,
    pub median: f64,
    /// Fraction of samples with value >= epsilon.
    pub exceedance: f64,
    #[serde(skip)]
    pub wall: Duration,
}

/// Mean, unbiased sample variance, standard error, median, and the
/// exceedance fraction at `epsilon`, folded in sample order.
pub fn summarize(n: u32, samples: &[f64], epsilon: f64, wall: Duration) -> Result<SampleSummary> {
    if samples.is_empty() {
        return Err(Error::invalid("samples", "cannot summarize zero samples"));
    }
    let count = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / count;
    let variance = if samples.len() < 2 {
        0.0
    } else {
        samples.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0)
    };
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let exceedance = samples.iter().filter(|&&v| v >= epsilon).count() as f64 / count;
    Ok(SampleSummary {
        n,
        replicas: samples.len() as u32,
        mean,
        variance,
        se: (variance / count).sqrt(),
        median,
        exceedance,
        wall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_have_zero_variance() {
        let s = summarize(10, &[2.5; 40], 1.0, Duration::ZERO).unwrap();
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.se, 0.0);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.exceedance, 1.0);
    }

    #[test]
    fn median_and_exceedance() {
        let s = summarize(1, &[1.0, 3.0, 2.0, 10.0], 3.0, Duration::ZERO).unwrap();
        assert_eq!(s.median, 2.5);
        assert_eq!(s.exceedance, 0.5);
        assert!(summarize(1, &[], 0.1, Duration::ZERO).is_err());
    }

    #[test]
    fn unbiased_variance() {
        let s = summarize(1, &[1.0, 2.0, 3.0], 0.0, Duration::ZERO).unwrap();
        assert!((s.variance - 1.0).abs() < 1e-12);
        assert!((s.se - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
