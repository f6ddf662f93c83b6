//! Small statistical helpers shared by the tests and the experiments.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Chi-square goodness of fit of observed counts against a discrete law.
///
/// Cells are merged from the right until every expected count is at least 5;
/// the tail cell of `probs` is expected to aggregate the remaining mass so
/// the probabilities sum to one. Returns `(statistic, p_value)`.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> Result<(f64, f64)> {
    if observed.is_empty() || observed.len() != probs.len() {
        return Err(Error::invalid("observed", "counts and probabilities must align"));
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::invalid("observed", "no samples"));
    }
    let mass: f64 = probs.iter().sum();
    if (mass - 1.0).abs() > 1e-9 || probs.iter().any(|&p| p < 0.0) {
        return Err(Error::invalid("probs", format!("not a probability vector (sum {mass})")));
    }
    // greedy left-to-right merge to expected >= 5, remainder folded backwards
    let mut cells: Vec<(f64, f64)> = Vec::new(); // (observed, expected)
    let mut acc_o = 0.0;
    let mut acc_e = 0.0;
    for (&o, &p) in observed.iter().zip(probs) {
        acc_o += o as f64;
        acc_e += p * total as f64;
        if acc_e >= 5.0 {
            cells.push((acc_o, acc_e));
            acc_o = 0.0;
            acc_e = 0.0;
        }
    }
    if acc_e > 0.0 || acc_o > 0.0 {
        if let Some(last) = cells.last_mut() {
            last.0 += acc_o;
            last.1 += acc_e;
        } else {
            return Err(Error::invalid("probs", "fewer than one cell with expected count >= 5"));
        }
    }
    if cells.len() < 2 {
        return Err(Error::invalid("probs", "need at least two cells after merging"));
    }
    let stat: f64 = cells.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let df = (cells.len() - 1) as f64;
    let chi = ChiSquared::new(df).expect("positive dof");
    Ok((stat, 1.0 - chi.cdf(stat)))
}

/// Two-sided Mann-Whitney rank test p-value (normal approximation with tie
/// correction). Small p-values reject "same law".
pub fn rank_test_p(a: &[f64], b: &[f64]) -> Result<f64> {
    let (n1, n2) = (a.len(), b.len());
    if n1 < 8 || n2 < 8 {
        return Err(Error::invalid("samples", "rank test needs at least 8 samples per side"));
    }
    let mut all: Vec<(f64, usize)> = a
        .iter()
        .map(|&v| (v, 0usize))
        .chain(b.iter().map(|&v| (v, 1usize)))
        .collect();
    all.sort_by(|x, y| x.0.partial_cmp(&y.0).expect("finite samples"));
    let n = all.len();
    let mut rank_sum_a = 0.0;
    let mut tie_term = 0.0;
    let mut idx = 0usize;
    while idx < n {
        let mut end = idx + 1;
        while end < n && all[end].0 == all[idx].0 {
            end += 1;
        }
        let tied = (end - idx) as f64;
        let avg_rank = (idx + 1 + end) as f64 / 2.0; // ranks are 1-based
        for item in &all[idx..end] {
            if item.1 == 0 {
                rank_sum_a += avg_rank;
            }
        }
        tie_term += tied * tied * tied - tied;
        idx = end;
    }
    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let u = rank_sum_a - n1f * (n1f + 1.0) / 2.0;
    let mean = n1f * n2f / 2.0;
    let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
    if var <= 0.0 {
        // all observations tied: the two samples are indistinguishable
        return Ok(1.0);
    }
    let z = (u - mean).abs() / var.sqrt();
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    Ok(2.0 * (1.0 - normal.cdf(z)))
}

/// Joint standard error of a difference of two independent binomial
/// proportions estimated from `r` replicas each.
pub fn binomial_joint_se(p1: f64, p2: f64, r: u32) -> f64 {
    ((p1 * (1.0 - p1) + p2 * (1.0 - p2)) / r as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::WeightSource;

    #[test]
    fn fair_coin_has_zero_statistic() {
        let (stat, p) = chi_square_gof(&[5000, 5000], &[0.5, 0.5]).unwrap();
        assert_eq!(stat, 0.0);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn biased_counts_are_rejected() {
        let (stat, p) = chi_square_gof(&[9000, 1000], &[0.5, 0.5]).unwrap();
        assert!(stat > 1000.0);
        assert!(p < 1e-6);
    }

    #[test]
    fn sparse_tail_cells_get_merged() {
        // expected counts of the last cells are far below 5
        let probs = [0.9, 0.09, 0.009, 0.0009, 0.0001];
        let obs = [900u64, 90, 9, 1, 0];
        let (stat, p) = chi_square_gof(&obs, &probs).unwrap();
        assert!(stat.is_finite());
        assert!(p > 0.01);
    }

    #[test]
    fn gof_input_validation() {
        assert!(chi_square_gof(&[], &[]).is_err());
        assert!(chi_square_gof(&[1, 2], &[0.5]).is_err());
        assert!(chi_square_gof(&[0, 0], &[0.5, 0.5]).is_err());
        assert!(chi_square_gof(&[10, 10], &[0.7, 0.7]).is_err());
    }

    #[test]
    fn geometric_histogram_self_test() {
        // simulated geometric(q = 0.5) via the field sampler, 1e5 draws;
        // the exact law should not be rejected in at least 99 of 100 reps
        let params = crate::fields::ModelParams::new(0.5).unwrap();
        let mut passes = 0;
        for rep in 0..100u64 {
            let f = crate::fields::GeometricField::new(
                params,
                crate::fields::RngSpec::new(0x6E0, rep),
                crate::fields::GeomConvention::Unshifted,
            )
            .unwrap();
            let mut counts = vec![0u64; 12];
            for k in 0..100_000u32 {
                let w = f.weight(1 + k % 1000, 1 + k / 1000);
                counts[(w as usize).min(11)] += 1;
            }
            let mut probs: Vec<f64> = (0..11).map(|s| 0.5 * 0.5f64.powi(s)).collect();
            probs.push(1.0 - probs.iter().sum::<f64>());
            let (_, p) = chi_square_gof(&counts, &probs).unwrap();
            passes += (p > 0.01) as u32;
        }
        assert!(passes >= 99, "only {passes}/100 repetitions passed");
    }

    #[test]
    fn rank_test_accepts_same_law_and_rejects_shift() {
        let a: Vec<f64> = (0..200).map(|k| (k % 17) as f64).collect();
        let b: Vec<f64> = (0..200).map(|k| ((k + 5) % 17) as f64).collect();
        assert!(rank_test_p(&a, &b).unwrap() > 0.1);
        let shifted: Vec<f64> = a.iter().map(|v| v + 6.0).collect();
        assert!(rank_test_p(&a, &shifted).unwrap() < 1e-6);
        assert!(rank_test_p(&a[..3], &b).is_err());
    }
}
