use rayon::prelude::*;
use serde::Serialize;

use super::ladder::replica_stream;
use super::soft_edge::{fast_soft_edge_sample, StripPolicy};
use super::stats::binomial_joint_se;
use crate::error::{Error, Result};
use crate::fields::{BernoulliField, GeomConvention, GeometricField, ModelParams, RngSpec};
use crate::passage::{blip_length, corner_growth};

/// Two Monte Carlo estimates of the same event probability: the longest-path
/// side `P{L(m,n) <= m-j}` on Bernoulli fields and the last-passage side
/// `P{G(n-m+j, j) <= n+j-1}` on geometric fields.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckResult {
    pub m: u32,
    pub n: u32,
    pub j: u32,
    pub replicas: u32,
    pub p_direct: f64,
    pub p_geometric: f64,
    pub joint_se: f64,
}

impl CrosscheckResult {
    /// Whether the two estimates agree within `k` joint standard errors.
    pub fn agrees(&self, k: f64) -> bool {
        (self.p_direct - self.p_geometric).abs() <= k * self.joint_se
            || self.p_direct == self.p_geometric
    }
}

/// Estimate both sides of the exceedance identity with `replicas`
/// independent fields per side.
pub fn exceedance_crosscheck(
    params: ModelParams,
    m: u32,
    n: u32,
    j: u32,
    replicas: u32,
    master_seed: u64,
) -> Result<CrosscheckResult> {
    let lo = if m > n { m - n } else { 1 };
    if j < lo || j > m {
        return Err(Error::invalid("j", format!("{j} not in [{lo}, {m}]")));
    }
    if replicas < 2 {
        return Err(Error::invalid("replicas", "need at least 2"));
    }
    let direct_hits: u32 = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let rng = RngSpec::new(master_seed, replica_stream("crosscheck-l", n, r));
            let field = BernoulliField::new(params, rng);
            Ok(u32::from(blip_length(&field, m, n)? <= m - j))
        })
        .sum::<Result<u32>>()?;
    let p_direct = direct_hits as f64 / replicas as f64;

    // G side: i = n - m + j rows; i = 0 degenerates to an almost-sure event
    let i = (n + j).checked_sub(m).expect("j >= m - n");
    let p_geometric = if i == 0 {
        1.0
    } else {
        let hits: u32 = (0..replicas)
            .into_par_iter()
            .map(|r| {
                let rng = RngSpec::new(master_seed, replica_stream("crosscheck-g", n, r));
                let field = GeometricField::new(params, rng, GeomConvention::Shifted)?;
                Ok(u32::from(corner_growth(&field, i, j)? <= (n + j - 1) as u64))
            })
            .sum::<Result<u32>>()?;
        hits as f64 / replicas as f64
    };

    Ok(CrosscheckResult {
        m,
        n,
        j,
        replicas,
        p_direct,
        p_geometric,
        joint_se: binomial_joint_se(p_direct, p_geometric, replicas),
    })
}

/// Pilot run choosing `j` so the crosschecked probability is informative:
/// sample the deficit `n - L` with the thin-strip sampler and return the
/// smallest `j` whose estimated probability lies in `[0.2, 0.8]`, preferring
/// the one closest to 1/2.
pub fn pilot_threshold(
    params: ModelParams,
    m: u32,
    n: u32,
    pilot_reps: u32,
    master_seed: u64,
) -> Result<u32> {
    if m <= n {
        return Err(Error::Config("pilot assumes the m > n soft-edge regime".into()));
    }
    let deficits: Vec<u32> = (0..pilot_reps)
        .into_par_iter()
        .map(|r| {
            let rng = RngSpec::new(master_seed, replica_stream("crosscheck-pilot", n, r));
            let field = GeometricField::new(params, rng, GeomConvention::Shifted)?;
            let l = fast_soft_edge_sample(
                &field,
                m,
                n,
                StripPolicy { initial_rows: 16, max_rows: None },
            )?;
            Ok(n - l)
        })
        .collect::<Result<_>>()?;
    let max_d = deficits.iter().copied().max().unwrap_or(0);
    let survival = |d: u32| deficits.iter().filter(|&&v| v >= d).count() as f64 / pilot_reps as f64;
    let mut best: Option<(f64, u32)> = None;
    for d in 1..=max_d + 1 {
        let s = survival(d);
        if (0.2..=0.8).contains(&s) {
            let score = (s - 0.5).abs();
            if best.is_none_or(|(b, _)| score < b) {
                best = Some((score, d));
            }
        }
    }
    let d = best
        .map(|(_, d)| d)
        .ok_or_else(|| Error::Config("pilot found no threshold with probability in [0.2, 0.8]".into()))?;
    Ok(m - n + d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn near_certain_events_on_sparse_fields() {
        // j at its lower bound with p -> 0: both sides are almost sure
        let params = ModelParams::new(0.01).unwrap();
        let (m, n) = (30u32, 20u32);
        let res = exceedance_crosscheck(params, m, n, m - n, 400, 9).unwrap();
        assert_eq!(res.p_geometric, 1.0);
        assert!(res.p_direct > 0.95);
        assert!(res.agrees(3.0));
    }

    #[test]
    fn near_impossible_events_on_dense_fields() {
        // j = m with large p: L(m, n) <= 0 is hopeless
        let params = ModelParams::new(0.9).unwrap();
        let res = exceedance_crosscheck(params, 20, 25, 20, 400, 9).unwrap();
        assert!(res.p_direct < 0.05);
        assert!(res.p_geometric < 0.05);
        assert!(res.agrees(3.0));
    }

    #[test]
    fn moderate_probability_sides_agree() {
        let params = ModelParams::new(0.5).unwrap();
        let (n, m) = (60u32, 113u32); // floor(2n - sqrt(n))
        let j = pilot_threshold(params, m, n, 300, 77).unwrap();
        assert!(j >= m - n && j <= m);
        let res = exceedance_crosscheck(params, m, n, j, 1500, 77).unwrap();
        assert!(res.p_direct > 0.1 && res.p_direct < 0.9, "uninformative pilot: {res:?}");
        assert!(res.agrees(3.0), "{res:?}");
    }

    #[test]
    fn threshold_validation() {
        let params = ModelParams::new(0.5).unwrap();
        assert!(exceedance_crosscheck(params, 10, 5, 4, 10, 1).is_err());
        assert!(exceedance_crosscheck(params, 10, 5, 11, 10, 1).is_err());
        assert!(exceedance_crosscheck(params, 10, 5, 5, 1, 1).is_err());
    }
}
