//! Exact pathwise identities between the path models and the particle
//! processes.
//!
//! Every check here is an integer equality on a shared environment, not a
//! statistical comparison; a violation is reported with replayable
//! coordinates. The checks double as the repository's oracle layer: the
//! Monte Carlo estimators are trusted because these hold exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{BernoulliField, GeomConvention, GeometricField};
use crate::particles::{
    evolve_blocking_right, evolve_marked_left, evolve_r, extract_tau, tau_recursion,
};
use crate::passage::{blip_table, corner_table};

/// First violation of an identity, replayable from the field descriptor and
/// the coordinates.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Counterexample {
    pub coords: (u32, u32),
    pub lhs: i64,
    pub rhs: i64,
}

/// Outcome of scanning one identity over one field.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub seed: u64,
    pub p: f64,
    pub dims: (u32, u32),
    pub points_checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn new(identity: &str, seed: u64, p: f64, dims: (u32, u32)) -> Self {
        IdentityReport {
            identity: identity.to_string(),
            seed,
            p,
            dims,
            points_checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, coords: (u32, u32), lhs: i64, rhs: i64) {
        self.points_checked += 1;
        if lhs != rhs && self.counterexample.is_none() {
            self.counterexample = Some(Counterexample { coords, lhs, rhs });
        }
    }
}

/// Shared setup for the tau-based identities: the longest-path table of the
/// original field next to the jump times of the R-process run on the
/// corner-indexed view of the very same field.
struct TauSide {
    l_table: crate::passage::DpTable<u32>,
    tau: crate::particles::TauTable,
    r_traj: crate::particles::ParticleTrajectory,
}

fn tau_side(field: &BernoulliField, s_max: u32, t_max: u32) -> Result<TauSide> {
    let l_table = blip_table(field, s_max, t_max + 1)?;
    let shifted = field.shift_to_corner_indexing();
    // horizon t_max + 2 and a wide particle window keep every needed
    // comparison `tau <= t + 1 <= t_max + 1` decidable
    let particles = s_max + t_max + 2;
    let r_traj = evolve_r(&shifted, particles, t_max + 2)?;
    let tau = extract_tau(&r_traj, t_max + 1, s_max)?;
    tau.check_monotone()
        .map_err(|(i, k)| Error::Config(format!("tau monotonicity violated at ({i},{k})")))?;
    Ok(TauSide { l_table, tau, r_traj })
}

/// Check `L'(s,t) = s - max{k : s >= k >= (s-t-1) v 1, tau(t+1-s+k, k) <= t+1}`
/// (with `L'(s,t) = s` on an empty set) for all `1 <= s <= s_max`,
/// `0 <= t <= t_max`.
pub fn check_relation(field: &BernoulliField, s_max: u32, t_max: u32) -> Result<IdentityReport> {
    let setup = tau_side(field, s_max, t_max)?;
    let mut report = IdentityReport::new(
        "relation",
        field.rng().master_seed,
        field.params().p(),
        (s_max, t_max),
    );
    for s in 1..=s_max {
        for t in 0..=t_max {
            let lhs = setup.l_table.get(s, t + 1) as i64;
            let lo = if s > t + 1 { s - t - 1 } else { 1 };
            let mut best: Option<u32> = None;
            for k in (lo..=s).rev() {
                let i = t + 1 + k - s; // >= 0 by the range of k
                if setup.tau.le(i, k, (t + 1) as u64)? {
                    best = Some(k);
                    break;
                }
            }
            let rhs = match best {
                Some(k_star) => (s - k_star) as i64,
                None => s as i64,
            };
            report.record((s, t), lhs, rhs);
        }
    }
    Ok(report)
}

/// Check both directions of: `L'(s,t) >= y` iff particle `s - y + 1` jumps
/// right at least `y` times during the first `t + 1` steps of the R-process.
pub fn check_jump_lemma(field: &BernoulliField, s_max: u32, t_max: u32) -> Result<IdentityReport> {
    let setup = tau_side(field, s_max, t_max)?;
    let mut report = IdentityReport::new(
        "jump-lemma",
        field.rng().master_seed,
        field.params().p(),
        (s_max, t_max),
    );
    for s in 1..=s_max {
        for t in 0..=t_max {
            let l = setup.l_table.get(s, t + 1);
            for y in 1..=s {
                let particle = s - y + 1;
                let jumps = setup.r_traj.pos(particle, t + 1) - particle as i64;
                report.record((s, t), (l >= y) as i64, (jumps >= y as i64) as i64);
            }
        }
    }
    Ok(report)
}

/// Check `L(m,n) = m - (max{k : (m-n) v 1 <= k <= m, tau(n-m+k, k) <= n} v 0)`
/// for all `1 <= m <= m_max`, `1 <= n <= n_max`.
pub fn check_lm_formula(field: &BernoulliField, m_max: u32, n_max: u32) -> Result<IdentityReport> {
    // reuse the corner-indexed setup: L(m, n) = L'(m, n-1)
    let setup = tau_side(field, m_max, n_max.saturating_sub(1))?;
    let mut report = IdentityReport::new(
        "lm-formula",
        field.rng().master_seed,
        field.params().p(),
        (m_max, n_max),
    );
    for m in 1..=m_max {
        for n in 1..=n_max {
            let lhs = setup.l_table.get(m, n) as i64;
            let lo = if m > n { m - n } else { 1 };
            let mut k_star = 0u32;
            for k in (lo..=m).rev() {
                let i = n + k - m; // >= 0 by the range of k
                if setup.tau.le(i, k, n as u64)? {
                    k_star = k;
                    break;
                }
            }
            report.record((m, n), lhs, (m - k_star) as i64);
        }
    }
    Ok(report)
}

/// Evaluate both sides of the event identity
/// `{L(m,n) <= m - j} = {tau(n-m+j, j) <= n}` at one point; non-integer `j`
/// acts through its floor on both sides.
pub fn check_event_b(
    field: &BernoulliField,
    m: u32,
    n: u32,
    j: f64,
) -> Result<(bool, bool)> {
    let lo = if m > n { m - n } else { 1 };
    if !j.is_finite() || j < lo as f64 || j > m as f64 {
        return Err(Error::invalid("j", format!("{j} not in [{lo}, {m}]")));
    }
    let jf = j.floor() as u32;
    let setup = tau_side(field, m, n.saturating_sub(1))?;
    let lhs = setup.l_table.get(m, n) <= m - jf;
    let rhs = setup.tau.le(n + jf - m, jf, n as u64)?;
    Ok((lhs, rhs))
}

/// Check `tau(i,j) = G(i,j) - j + 1` pathwise on a shared-seed pair of
/// geometric fields: `tau` from the recursion on unshifted weights, `G` from
/// the corner DP on the shifted weights of the same sites.
pub fn check_tau_equals_g(field: &GeometricField, i_max: u32, j_max: u32) -> Result<IdentityReport> {
    let unshifted = field.with_convention(GeomConvention::Unshifted);
    let shifted = field.with_convention(GeomConvention::Shifted);
    let tau = tau_recursion(&unshifted, i_max, j_max);
    let g = corner_table(&shifted, i_max, j_max)?;
    let mut report = IdentityReport::new(
        "tau-g",
        field.rng().master_seed,
        field.params().p(),
        (i_max, j_max),
    );
    for i in 1..=i_max {
        for j in 1..=j_max {
            let lhs = tau.get(i, j).expect("recursion tables are exact") as i64;
            let rhs = g.get(i, j) as i64 - j as i64 + 1;
            report.record((i, j), lhs, rhs);
        }
    }
    Ok(report)
}

/// Check the z/w coupling on a shared mark field: site occupation agrees and
/// `w_(k-t)(t) = z_k(t)`.
///
/// Both processes run on an extended window of `k_visible + t_max` labels so
/// that every compared value is free of boundary effects: `z_k(t)` only
/// depends on labels down to `k - t`, and `w_(k-t)(t)` on labels up to `k`.
pub fn check_coupling(field: &BernoulliField, k_visible: u32, t_max: u32) -> Result<IdentityReport> {
    let total = k_visible + t_max;
    // deterministic spread-out initial configuration from the field stream
    let src = crate::fields::SiteUniform::new(field.rng());
    let mut initial = Vec::with_capacity(total as usize);
    let mut pos = 0i64;
    for k in 1..=total {
        pos += 2 + (src.half_open(k, 0) * 4.0) as i64;
        initial.push(pos);
    }
    let z = evolve_marked_left(field, &initial, t_max)?;
    let w = evolve_blocking_right(field, &initial, t_max, 64)?;
    let mut report = IdentityReport::new(
        "coupling",
        field.rng().master_seed,
        field.params().p(),
        (k_visible, t_max),
    );
    for t in 0..=t_max {
        for k in t + 1..=total {
            report.record((k, t), w.pos(k - t, t), z.pos(k, t));
        }
        // occupation agrees as a set over the uncontaminated window
        let z_sites: Vec<i64> = (t + 1..=total).map(|k| z.pos(k, t)).collect();
        let w_sites: Vec<i64> = (1..=total - t).map(|k| w.pos(k, t)).collect();
        if z_sites != w_sites && report.counterexample.is_none() {
            report.counterexample = Some(Counterexample {
                coords: (0, t),
                lhs: z_sites.len() as i64,
                rhs: w_sites.len() as i64,
            });
        }
    }
    Ok(report)
}
