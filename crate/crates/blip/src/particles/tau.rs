//! Jump times `tau(i, k)` and their max-plus recursion.

use super::{ParticleTrajectory, ProcessKind};
use crate::error::{Error, Result};
use crate::fields::WeightSource;

/// Table of jump times with boundary `tau(0, k) = tau(i, 0) = 0`.
///
/// `tau(i, k)` is the time at which particle `k` completes its `i`-th DTASEP
/// jump; extracted tables carry an explicit horizon and store a sentinel for
/// jumps not completed by it, so threshold comparisons are either decided
/// exactly or refused. Values are strictly increasing in `i` and
/// non-decreasing in `k`.
#[derive(Debug, Clone)]
pub struct TauTable {
    i_max: u32,
    k_max: u32,
    horizon: Option<u64>,
    /// (i_max + 1) x (k_max + 1) values, sentinel = u64::MAX
    values: Vec<u64>,
}

const SENTINEL: u64 = u64::MAX;

impl TauTable {
    #[inline]
    fn idx(&self, i: u32, k: u32) -> usize {
        i as usize * (self.k_max as usize + 1) + k as usize
    }

    #[inline]
    pub fn i_max(&self) -> u32 {
        self.i_max
    }

    #[inline]
    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Simulated horizon, `None` for exactly constructed tables.
    pub fn horizon(&self) -> Option<u64> {
        self.horizon
    }

    /// `tau(i, k)`, or `None` when the jump was not completed by the horizon.
    #[inline]
    pub fn get(&self, i: u32, k: u32) -> Option<u64> {
        assert!(i <= self.i_max && k <= self.k_max, "tau({i},{k}) outside table");
        let v = self.values[self.idx(i, k)];
        (v != SENTINEL).then_some(v)
    }

    /// Decide `tau(i, k) <= n`. A sentinel value still decides the comparison
    /// whenever `n` does not exceed the horizon; otherwise the answer is not
    /// determined by the simulation and an error is returned.
    pub fn le(&self, i: u32, k: u32, n: u64) -> Result<bool> {
        match self.get(i, k) {
            Some(v) => Ok(v <= n),
            None => {
                let horizon = self.horizon.unwrap_or(u64::MAX);
                if n <= horizon {
                    Ok(false)
                } else {
                    Err(Error::TauUndecidable { i, k, horizon, threshold: n })
                }
            }
        }
    }

    /// Verify strict monotonicity in `i` and weak monotonicity in `k` over
    /// the interior; returns the first offending `(i, k)`.
    pub fn check_monotone(&self) -> std::result::Result<(), (u32, u32)> {
        for i in 1..=self.i_max {
            for k in 1..=self.k_max {
                let v = self.values[self.idx(i, k)];
                let above = self.values[self.idx(i - 1, k)];
                // strict growth in i; a sentinel dominates everything finite
                if above != SENTINEL && v != SENTINEL && v <= above {
                    return Err((i, k));
                }
                if above == SENTINEL && v != SENTINEL {
                    return Err((i, k));
                }
                if k > 1 {
                    let left = self.values[self.idx(i, k - 1)];
                    if left != SENTINEL && v != SENTINEL && v < left {
                        return Err((i, k));
                    }
                    if left == SENTINEL && v != SENTINEL {
                        return Err((i, k));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Read jump times off an R-trajectory: `tau(i, k)` is the first `t` with
/// `r_k(t) = k - i + t`.
///
/// Jumps not completed by the trajectory horizon are stored as sentinels,
/// never extrapolated.
pub fn extract_tau(traj: &ParticleTrajectory, i_max: u32, k_max: u32) -> Result<TauTable> {
    if traj.kind() != ProcessKind::R {
        return Err(Error::Config("extract_tau expects an R trajectory".into()));
    }
    if k_max > traj.particles() {
        return Err(Error::Config(format!(
            "tau table needs {k_max} particles, trajectory has {}",
            traj.particles()
        )));
    }
    let horizon = traj.horizon();
    let mut table = TauTable {
        i_max,
        k_max,
        horizon: Some(horizon as u64),
        values: vec![SENTINEL; (i_max as usize + 1) * (k_max as usize + 1)],
    };
    for k in 0..=k_max {
        let idx = table.idx(0, k);
        table.values[idx] = 0;
    }
    for i in 0..=i_max {
        let idx = table.idx(i, 0);
        table.values[idx] = 0;
    }
    for k in 1..=k_max {
        let mut next_i = 1u32;
        for t in 1..=horizon {
            // left-jump count of particle k in the sheared picture
            let left_jumps = t as i64 - (traj.pos(k, t) - k as i64);
            while next_i <= i_max && left_jumps >= next_i as i64 {
                let idx = table.idx(next_i, k);
                table.values[idx] = t as u64;
                next_i += 1;
            }
            if next_i > i_max {
                break;
            }
        }
    }
    Ok(table)
}

/// Build `tau` directly from unshifted geometric weights through the
/// recursion `tau(i,j) = max(tau(i-1,j) + 1, tau(i,j-1)) + Y~(i,j)`.
///
/// Distributionally this is the same process as [`extract_tau`] on the
/// R-trajectory of a Bernoulli field with matching `p`.
pub fn tau_recursion<W: WeightSource + ?Sized>(weights: &W, i_max: u32, k_max: u32) -> TauTable {
    let mut table = TauTable {
        i_max,
        k_max,
        horizon: None,
        values: vec![0; (i_max as usize + 1) * (k_max as usize + 1)],
    };
    for i in 1..=i_max {
        for k in 1..=k_max {
            let up = table.values[table.idx(i - 1, k)] + 1;
            let left = table.values[table.idx(i, k - 1)];
            let idx = table.idx(i, k);
            table.values[idx] = up.max(left) + weights.weight(i, k);
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::fields::{GeomConvention, GeometricField, ModelParams, RngSpec};
    use crate::particles::evolve_r;

    #[test]
    fn boundaries_are_zero() {
        let none = |_: u32, _: u32| false;
        let traj = evolve_r(&none, 6, 10).unwrap();
        let tau = extract_tau(&traj, 8, 6).unwrap();
        for k in 0..=6 {
            assert_eq!(tau.get(0, k), Some(0));
        }
        for i in 0..=8 {
            assert_eq!(tau.get(i, 0), Some(0));
        }
    }

    #[test]
    fn mark_free_field_gives_tau_equal_i() {
        // r_k(t) = k, so the i-th left jump completes exactly at time i
        let none = |_: u32, _: u32| false;
        let traj = evolve_r(&none, 6, 10).unwrap();
        let tau = extract_tau(&traj, 9, 6).unwrap();
        for i in 1..=9u32 {
            for k in 1..=6u32 {
                assert_eq!(tau.get(i, k), Some(i as u64), "tau({i},{k})");
            }
        }
        assert!(tau.check_monotone().is_ok());
    }

    #[test]
    fn fully_marked_field_never_jumps_left() {
        let all = |_: u32, _: u32| true;
        let traj = evolve_r(&all, 6, 10).unwrap();
        let tau = extract_tau(&traj, 5, 6).unwrap();
        for i in 1..=5u32 {
            for k in 1..=6u32 {
                assert_eq!(tau.get(i, k), None);
            }
        }
        // tau <= n is decidable up to the horizon, refused beyond it
        assert!(!tau.le(1, 1, 10).unwrap());
        assert!(matches!(tau.le(1, 1, 11), Err(Error::TauUndecidable { .. })));
    }

    #[test]
    fn recursion_base_and_zero_weights() {
        let w11 = |i: u32, j: u32| ((i == 1 && j == 1) as u64) * 4;
        let tau = tau_recursion(&w11, 3, 3);
        assert_eq!(tau.get(1, 1), Some(1 + 4));
        let zero = |_: u32, _: u32| 0u64;
        let tau = tau_recursion(&zero, 12, 9);
        for i in 1..=12u32 {
            for k in 1..=9u32 {
                assert_eq!(tau.get(i, k), Some(i as u64));
            }
        }
    }

    #[test]
    fn recursion_tables_are_monotone() {
        for seed in 0..10u64 {
            let f = GeometricField::new(
                ModelParams::new(0.6).unwrap(),
                RngSpec::new(seed, 2),
                GeomConvention::Unshifted,
            )
            .unwrap();
            let tau = tau_recursion(&f, 20, 20);
            assert!(tau.check_monotone().is_ok(), "seed {seed}");
        }
    }

    #[test]
    fn extracted_tables_are_monotone_on_random_fields() {
        for seed in 0..10u64 {
            let f = crate::fields::BernoulliField::new(
                ModelParams::new(0.5).unwrap(),
                RngSpec::new(seed, 6),
            )
            .shift_to_corner_indexing();
            let traj = evolve_r(&f, 30, 40).unwrap();
            let tau = extract_tau(&traj, 20, 20).unwrap();
            assert!(tau.check_monotone().is_ok(), "seed {seed}");
        }
    }
}
