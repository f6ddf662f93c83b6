use super::ladder::run_ladder;
use super::{ExperimentConfig, LadderResult};
use crate::error::{Error, Result};
use crate::fields::{GeomConvention, GeometricField};
use crate::passage::corner_growth;

/// Hard-edge first-order law for thin rectangles of shifted geometric
/// weights: per ladder point summarize
/// `(G(j, floor(y n^beta)) - mu j) / n^((1+beta)/2)` with `j = floor(c1 n)`,
/// against the reference `2 sigma sqrt(c1 y)` where `mu = 1/q` and
/// `sigma = sqrt(p)/q`.
pub fn hard_edge_check(cfg: &ExperimentConfig, c1: f64, y: f64, beta: f64) -> Result<LadderResult> {
    if !beta.is_finite() || beta <= 0.0 || beta >= 1.0 {
        return Err(Error::Config(format!("hard edge needs beta in (0, 1), got {beta}")));
    }
    if !c1.is_finite() || c1 <= 0.0 || !y.is_finite() || y < 0.0 {
        return Err(Error::Config(format!("hard edge needs c1 > 0 and y >= 0, got c1={c1} y={y}")));
    }
    if cfg.params.p() >= 1.0 {
        return Err(Error::Config("hard edge needs p < 1".into()));
    }
    let (p, q) = (cfg.params.p(), cfg.params.q());
    let mu = 1.0 / q;
    let sigma = p.sqrt() / q;
    let reference = 2.0 * sigma * (c1 * y).sqrt();
    for &n in &cfg.sizes {
        let (rows, cols) = strip_dims(n, c1, y, beta);
        cfg.guard_cells(rows as u64 * cols as u64)?;
    }
    run_ladder(cfg, "hard-edge", |_| reference, |n, _r, rng| {
        let (rows, cols) = strip_dims(n, c1, y, beta);
        let field = GeometricField::new(cfg.params, rng, GeomConvention::Shifted)?;
        let g = corner_growth(&field, rows, cols)?;
        Ok((g as f64 - mu * rows as f64) / (n as f64).powf((1.0 + beta) / 2.0))
    })
}

fn strip_dims(n: u32, c1: f64, y: f64, beta: f64) -> (u32, u32) {
    let rows = (c1 * n as f64).floor().max(1.0) as u32;
    let cols = (y * (n as f64).powf(beta)).floor().max(1.0) as u32;
    (rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::ModelParams;

    #[test]
    fn reference_constant_at_the_criterion_point() {
        let cfg = ExperimentConfig::new(ModelParams::new(0.5).unwrap(), 2)
            .with_sizes(&[200])
            .with_replicas(8);
        let res = hard_edge_check(&cfg, 1.0, 1.0, 0.5).unwrap();
        let expected = 2.0 * 2.0f64.sqrt();
        assert!((res.points[0].ref_value - expected).abs() < 1e-12);
    }

    #[test]
    fn vanishing_strip_concentrates_near_zero() {
        // y -> 0 degenerates to a single row: G is a plain sum with mean
        // mu * j, so the scaled statistic sits near the reference 0
        let cfg = ExperimentConfig::new(ModelParams::new(0.5).unwrap(), 9)
            .with_sizes(&[2000])
            .with_replicas(30);
        let res = hard_edge_check(&cfg, 1.0, 0.0, 0.5).unwrap();
        let s = &res.points[0].summary;
        assert_eq!(res.points[0].ref_value, 0.0);
        assert!(s.mean.abs() < 0.2, "mean {}", s.mean);
    }

    #[test]
    fn parameter_validation() {
        let cfg = ExperimentConfig::new(ModelParams::new(0.5).unwrap(), 2);
        assert!(hard_edge_check(&cfg, 1.0, 1.0, 0.0).is_err());
        assert!(hard_edge_check(&cfg, 1.0, 1.0, 1.0).is_err());
        assert!(hard_edge_check(&cfg, 0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn statistic_tracks_the_reference_at_moderate_n() {
        let cfg = ExperimentConfig::new(ModelParams::new(0.5).unwrap(), 4)
            .with_sizes(&[1000])
            .with_replicas(40);
        let res = hard_edge_check(&cfg, 1.0, 1.0, 0.5).unwrap();
        let s = &res.points[0].summary;
        let reference = res.points[0].ref_value;
        assert!(
            (s.median - reference).abs() / reference < 0.25,
            "median {} vs reference {reference}",
            s.median
        );
    }
}
