use super::ladder::run_ladder;
use super::{ExperimentConfig, LadderResult};
use crate::error::Result;
use crate::fields::BernoulliField;
use crate::passage::{blip_length, psi};

/// Law-of-large-numbers check for the limit shape: per ladder point the mean
/// of `n^-1 L(floor(nx), floor(ny))` over independent fields, with the
/// closed-form shape value as reference.
pub fn estimate_shape(cfg: &ExperimentConfig, x: f64, y: f64) -> Result<LadderResult> {
    let reference = psi(cfg.params, x, y)?;
    if x <= 0.0 || y <= 0.0 {
        return Err(crate::error::Error::invalid("x", "shape estimation needs x, y > 0"));
    }
    for &n in &cfg.sizes {
        let (m, h) = scaled_dims(n, x, y);
        cfg.guard_cells(m as u64 * h as u64)?;
    }
    run_ladder(cfg, "shape", |_| reference, |n, _r, rng| {
        let (m, h) = scaled_dims(n, x, y);
        let field = BernoulliField::new(cfg.params, rng);
        Ok(blip_length(&field, m, h)? as f64 / n as f64)
    })
}

fn scaled_dims(n: u32, x: f64, y: f64) -> (u32, u32) {
    let m = (n as f64 * x).floor().max(1.0) as u32;
    let h = (n as f64 * y).floor().max(1.0) as u32;
    (m, h)
}
