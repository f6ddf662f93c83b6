use super::ladder::run_ladder;
use super::{ExperimentConfig, LadderResult};
use crate::error::{Error, Result};
use crate::fields::{BernoulliField, GeomConvention, GeometricField, ModelParams, RngSpec, WeightSource};
use crate::passage::{blip_length, soft_edge_constant};

/// Rectangle width probed by the soft-edge experiments:
/// `m = floor(p^-1 n - x n^a)`.
pub fn soft_edge_m(params: ModelParams, x: f64, a: f64, n: u32) -> Result<u32> {
    if params.p() <= 0.0 {
        return Err(Error::Config("soft edge needs p > 0".into()));
    }
    let m = (n as f64 / params.p() - x * (n as f64).powf(a)).floor();
    if m.is_nan() || m < 1.0 {
        return Err(Error::Config(format!("degenerate soft-edge width m = {m} at n = {n}")));
    }
    Ok(m as u32)
}

/// Strip sizing for the thin-strip sampler: rows start at four times the
/// predicted crossing depth plus slack, double on exhaustion, and are never
/// silently truncated.
#[derive(Debug, Clone, Copy)]
pub struct StripPolicy {
    pub initial_rows: u32,
    /// Hard cap; `None` uses the always-sufficient bound `n + 1`.
    pub max_rows: Option<u32>,
}

impl StripPolicy {
    pub fn for_soft_edge(params: ModelParams, x: f64, a: f64, c: f64, n: u32) -> Self {
        let predicted = soft_edge_constant(params, x) * (c * n as f64).powf(2.0 * a - 1.0);
        StripPolicy { initial_rows: (4.0 * predicted).ceil() as u32 + 16, max_rows: None }
    }
}

/// Attempt the crossing search within `rows` strip rows; `Some(i*)` is the
/// first row with `G(i, m-n+i) >= m + i`.
fn strip_attempt<W: WeightSource + ?Sized>(weights: &W, m: u32, n: u32, rows: u32) -> Option<u32> {
    let base = (m - n) as usize;
    let width = base + rows as usize;
    let mut row = vec![0u64; width + 1];
    for i in 1..=rows {
        let mut left = 0u64;
        for (j, slot) in row.iter_mut().enumerate().skip(1) {
            left = weights.weight(i, j as u32) + (*slot).max(left);
            *slot = left;
        }
        if row[base + i as usize] >= (m + i) as u64 {
            return Some(i);
        }
    }
    None
}

/// Draw one sample distributed as `L(m, n)` for `m > n` from shifted
/// geometric weights, in `O(i* m)` time and `O(m)` memory.
///
/// The longest-path deficit is the first crossing of a thin-strip
/// last-passage process: `n - L = i* - 1` with
/// `i* = min{i >= 1 : G(i, m-n+i) >= m + i}`, which exists and is at most
/// `n + 1` because shifted weights are at least one. On exhaustion the strip
/// is recomputed twice as wide (site weights are pure functions of the seed,
/// so widening replays the same environment).
pub fn fast_soft_edge_sample<W: WeightSource + ?Sized>(
    weights: &W,
    m: u32,
    n: u32,
    policy: StripPolicy,
) -> Result<u32> {
    if n < 1 || m <= n {
        return Err(Error::invalid("m", format!("thin-strip sampler needs m > n >= 1, got {m}x{n}")));
    }
    let hard_cap = n + 1;
    let max_rows = policy.max_rows.unwrap_or(hard_cap).min(hard_cap);
    let mut rows = policy.initial_rows.clamp(1, max_rows);
    loop {
        if let Some(i_star) = strip_attempt(weights, m, n, rows) {
            return Ok(n + 1 - i_star);
        }
        if rows == max_rows {
            return Err(Error::StripExhausted { max_rows });
        }
        rows = rows.saturating_mul(2).min(max_rows);
    }
}

/// One replica of `L(m, n)`: direct DP on a Bernoulli field when the
/// rectangle is small (or not in the thin-strip regime `m > n`), thin-strip
/// sampling on a geometric field otherwise. Both routes produce the same law.
fn sample_l(cfg: &ExperimentConfig, m: u32, n: u32, rng: RngSpec) -> Result<u32> {
    let cells = m as u64 * n as u64;
    if cells <= cfg.direct_dp_cells || m <= n {
        cfg.guard_cells(cells)?;
        let field = BernoulliField::new(cfg.params, rng);
        blip_length(&field, m, n)
    } else {
        let field = GeometricField::new(cfg.params, rng, GeomConvention::Shifted)?;
        let policy =
            StripPolicy::for_soft_edge(cfg.params, cfg.amplitude_x, cfg.exponent_a, cfg.strip_c, n);
        fast_soft_edge_sample(&field, m, n, policy)
    }
}

fn validate_ladder_widths(cfg: &ExperimentConfig) -> Result<()> {
    for &n in &cfg.sizes {
        soft_edge_m(cfg.params, cfg.amplitude_x, cfg.exponent_a, n)?;
    }
    Ok(())
}

/// Subcritical soft edge (`0 < a <= 1/2`): summarize `(n - L) / d_n` per
/// ladder point; the reference value is the limit 0 and the exceedance
/// fraction at the configured epsilon carries the in-probability statement.
pub fn soft_edge_subcritical(cfg: &ExperimentConfig) -> Result<LadderResult> {
    if !(cfg.exponent_a > 0.0 && cfg.exponent_a <= 0.5) {
        return Err(Error::Config(format!(
            "subcritical run needs 0 < a <= 1/2, got a = {}",
            cfg.exponent_a
        )));
    }
    validate_ladder_widths(cfg)?;
    run_ladder(cfg, "soft-edge-sub", |_| 0.0, |n, _r, rng| {
        let m = soft_edge_m(cfg.params, cfg.amplitude_x, cfg.exponent_a, n)?;
        let l = sample_l(cfg, m, n, rng)?;
        Ok((n - l) as f64 / cfg.dn_rule.eval(n))
    })
}

/// Supercritical soft edge (`1/2 < a < 1`): summarize `(n - L) / n^(2a-1)`
/// per ladder point against the limit constant `(px)^2 / (4q)`.
pub fn soft_edge_supercritical(cfg: &ExperimentConfig) -> Result<LadderResult> {
    if !(cfg.exponent_a > 0.5 && cfg.exponent_a < 1.0) {
        return Err(Error::Config(format!(
            "supercritical run needs 1/2 < a < 1, got a = {}",
            cfg.exponent_a
        )));
    }
    validate_ladder_widths(cfg)?;
    let reference = soft_edge_constant(cfg.params, cfg.amplitude_x);
    run_ladder(cfg, "soft-edge-super", |_| reference, |n, _r, rng| {
        let m = soft_edge_m(cfg.params, cfg.amplitude_x, cfg.exponent_a, n)?;
        let l = sample_l(cfg, m, n, rng)?;
        Ok((n - l) as f64 / (n as f64).powf(2.0 * cfg.exponent_a - 1.0))
    })
}
