//! The left-jumping marked process and its right-jumping blocked companion.

use super::{validate_increasing, ParticleTrajectory, ProcessKind};
use crate::error::Result;
use crate::fields::MarkSource;

/// Evolve the left-jumping process: at step `t`, particle `k` lands on the
/// leftmost marked site of row `t` in the open-closed interval
/// `(z_(k-1)(t-1), z_k(t-1)]`, or stays put when that interval carries no
/// mark, so that the skipped segment is the maximal unmarked one.
///
/// The lowest particle uses a frozen virtual neighbor one site below its
/// start, so positions never leave the positive axis; its own trajectory is a
/// boundary convention, exact dynamics hold for particle `k` at time `t`
/// whenever `k - t >= 1`.
pub fn evolve_marked_left<M: MarkSource + ?Sized>(
    marks: &M,
    initial: &[i64],
    horizon: u32,
) -> Result<ParticleTrajectory> {
    validate_increasing(initial, "initial")?;
    if initial[0] < 1 {
        return Err(crate::error::Error::invalid("initial", "positions must be >= 1"));
    }
    let wall = initial[0] - 1;
    let mut cur = initial.to_vec();
    let mut rows = Vec::with_capacity(horizon as usize + 1);
    rows.push(cur.clone());
    for t in 1..=horizon {
        let mut next = cur.clone();
        let mut left_prev = wall;
        for (k, slot) in next.iter_mut().enumerate() {
            for x in left_prev + 1..=cur[k] {
                if marks.is_marked(x as u32, t) {
                    *slot = x;
                    break;
                }
            }
            left_prev = cur[k];
        }
        cur = next;
        rows.push(cur.clone());
    }
    Ok(ParticleTrajectory::from_rows(ProcessKind::Z, rows))
}

/// Evolve the blocked right-jumping process
/// `w_k(t) = (w_k(t-1) + xi~(k+1, t)) /\ w_(k+1)(t-1)`.
///
/// The geometric jump `xi~` is read from the same mark field as the left
/// process: one plus the unmarked run scanning rightward in row `t` from just
/// right of the particle's own position. The topmost particle has no blocker;
/// its scan is capped at `scan_cap` sites (a boundary convention only, exact
/// dynamics hold for particle `k` at time `t` whenever `k + t <= K`).
pub fn evolve_blocking_right<M: MarkSource + ?Sized>(
    marks: &M,
    initial: &[i64],
    horizon: u32,
    scan_cap: u32,
) -> Result<ParticleTrajectory> {
    validate_increasing(initial, "initial")?;
    if initial[0] < 1 {
        return Err(crate::error::Error::invalid("initial", "positions must be >= 1"));
    }
    if scan_cap < 1 {
        return Err(crate::error::Error::invalid("scan_cap", "must be >= 1"));
    }
    let k = initial.len();
    let mut cur = initial.to_vec();
    let mut rows = Vec::with_capacity(horizon as usize + 1);
    rows.push(cur.clone());
    for t in 1..=horizon {
        let mut next = cur.clone();
        for u in 0..k {
            // scanning past the blocker gap cannot change the minimum
            let limit = if u + 1 < k { cur[u + 1] - cur[u] } else { scan_cap as i64 };
            let mut jump = limit;
            for d in 1..=limit {
                if marks.is_marked((cur[u] + d) as u32, t) {
                    jump = d;
                    break;
                }
            }
            next[u] = cur[u] + jump;
        }
        cur = next;
        rows.push(cur.clone());
    }
    Ok(ParticleTrajectory::from_rows(ProcessKind::W, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{BernoulliField, ModelParams, RngSpec};

    #[test]
    fn mark_free_rows_freeze_the_left_process() {
        let none = |_: u32, _: u32| false;
        let traj = evolve_marked_left(&none, &[2, 5, 9], 6).unwrap();
        for t in 0..=6 {
            assert_eq!(traj.row(t), &[2, 5, 9]);
        }
    }

    #[test]
    fn fully_marked_rows_stack_particles() {
        // z_k(t) = z_(k-1)(t-1) + 1 when every site is marked
        let all = |_: u32, _: u32| true;
        let traj = evolve_marked_left(&all, &[3, 7, 12], 1).unwrap();
        assert_eq!(traj.row(1), &[3, 4, 8]);
    }

    #[test]
    fn left_process_preserves_order_on_random_fields() {
        for seed in 0..20u64 {
            let f = BernoulliField::new(ModelParams::new(0.5).unwrap(), RngSpec::new(seed, 5));
            let initial: Vec<i64> = (1..=30).map(|k| 3 * k).collect();
            let traj = evolve_marked_left(&f, &initial, 40).unwrap();
            for t in 1..=40u32 {
                assert!(traj.row(t).windows(2).all(|w| w[0] < w[1]), "seed {seed} t {t}");
                for k in 1..=30u32 {
                    assert!(traj.pos(k, t) <= traj.pos(k, t - 1));
                }
            }
        }
    }

    #[test]
    fn blocked_process_hits_the_minimum_on_mark_free_rows() {
        let none = |_: u32, _: u32| false;
        let traj = evolve_blocking_right(&none, &[1, 4, 6], 3, 16).unwrap();
        // every blocked particle lands exactly on its blocker's old position
        assert_eq!(traj.row(1), &[4, 6, 22]);
        assert_eq!(traj.row(2), &[6, 22, 38]);
    }

    #[test]
    fn unit_jumps_advance_by_one() {
        let all = |_: u32, _: u32| true; // first scanned site is always marked
        let traj = evolve_blocking_right(&all, &[2, 4, 9], 5, 16).unwrap();
        for t in 0..=5u32 {
            assert_eq!(traj.row(t), &[2 + t as i64, 4 + t as i64, 9 + t as i64]);
        }
    }

    #[test]
    fn label_shifted_coupling_on_a_mark_free_field() {
        // with no marks the left process is static, and w_(k-t)(t) walks the
        // initial staircase: both sides equal z_k(0)
        let none = |_: u32, _: u32| false;
        let initial: Vec<i64> = (1..=12).map(|k| 2 * k).collect();
        let z = evolve_marked_left(&none, &initial, 5).unwrap();
        let w = evolve_blocking_right(&none, &initial, 5, 8).unwrap();
        for t in 0..=5u32 {
            for k in (t + 1)..=12u32 {
                assert_eq!(w.pos(k - t, t), z.pos(k, t), "k={k} t={t}");
            }
        }
    }
}
