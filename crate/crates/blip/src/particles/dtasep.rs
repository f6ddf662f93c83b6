//! Discrete TASEP with backward update.

use super::{validate_increasing, ParticleTrajectory, ProcessKind};
use crate::error::{Error, Result};
use crate::fields::{RngSpec, SiteUniform};

/// Per-(particle, time) jump attempts; each draw is an independent
/// Bernoulli(q) decision.
pub trait JumpDraws {
    fn jumps(&self, particle: u32, t: u32) -> bool;
}

impl<F: Fn(u32, u32) -> bool> JumpDraws for F {
    #[inline]
    fn jumps(&self, particle: u32, t: u32) -> bool {
        self(particle, t)
    }
}

/// Site-keyed Bernoulli(q) source, replayable from the spec alone.
#[derive(Debug, Clone, Copy)]
pub struct SeededJumps {
    q: f64,
    src: SiteUniform,
}

impl SeededJumps {
    pub fn new(q: f64, rng: RngSpec) -> Result<Self> {
        if !q.is_finite() || !(0.0..=1.0).contains(&q) {
            return Err(Error::invalid("q", format!("{q} not in [0, 1]")));
        }
        Ok(SeededJumps { q, src: SiteUniform::new(rng) })
    }
}

impl JumpDraws for SeededJumps {
    #[inline]
    fn jumps(&self, particle: u32, t: u32) -> bool {
        self.src.half_open(particle, t) < self.q
    }
}

/// Evolve DTASEP with backward update for `horizon` steps.
///
/// Within a step particles are updated left to right; particle `k` moves one
/// unit left on a successful draw when either its left gap was at least two,
/// or the gap was one and the left neighbor vacated its site this very step.
pub fn evolve_dtasep<D: JumpDraws + ?Sized>(
    draws: &D,
    initial: &[i64],
    horizon: u32,
) -> Result<ParticleTrajectory> {
    validate_increasing(initial, "initial")?;
    let k = initial.len();
    let mut cur = initial.to_vec();
    let mut rows = Vec::with_capacity(horizon as usize + 1);
    rows.push(cur.clone());
    for t in 1..=horizon {
        let mut next = cur.clone();
        for u in 0..k {
            // target site must lie strictly right of the left neighbor's
            // position after its own update (rules (i) and (ii) combined)
            let room = u == 0 || cur[u] - 1 > next[u - 1];
            if room && draws.jumps(u as u32 + 1, t) {
                next[u] = cur[u] - 1;
            }
        }
        cur = next;
        rows.push(cur.clone());
    }
    Ok(ParticleTrajectory::from_rows(ProcessKind::Dtasep, rows))
}

/// Shear an R-trajectory into its DTASEP image: `r~_k(t) = r_k(t) - t`.
pub fn r_to_dtasep(traj: &ParticleTrajectory) -> ParticleTrajectory {
    assert_eq!(traj.kind(), ProcessKind::R, "r_to_dtasep expects an R trajectory");
    let rows = (0..=traj.horizon())
        .map(|t| traj.row(t).iter().map(|&p| p - t as i64).collect())
        .collect();
    ParticleTrajectory::from_rows(ProcessKind::Dtasep, rows)
}

/// Exact legality check of a DTASEP trajectory: per-step moves in `{0, -1}`,
/// strict exclusion at every time, and every executed jump had room under the
/// backward-update rules. Returns the first offending `(k, t)`.
pub fn check_dtasep_legality(traj: &ParticleTrajectory) -> std::result::Result<(), (u32, u32)> {
    assert_eq!(traj.kind(), ProcessKind::Dtasep);
    for t in 1..=traj.horizon() {
        for k in 1..=traj.particles() {
            let delta = traj.pos(k, t) - traj.pos(k, t - 1);
            if delta != 0 && delta != -1 {
                return Err((k, t));
            }
            if k > 1 && traj.pos(k - 1, t) >= traj.pos(k, t) {
                return Err((k, t));
            }
            if delta == -1 && k > 1 && traj.pos(k, t - 1) - 1 <= traj.pos(k - 1, t) {
                return Err((k, t));
            }
        }
    }
    Ok(())
}
