//! The R-process on the corner-indexed lattice.

use super::{ParticleTrajectory, ProcessKind};
use crate::error::{Error, Result};
use crate::fields::MarkSource;

/// Evolve the R-process from `r_k(0) = k` for `horizon` steps.
///
/// At each step the platoons (maximal runs of adjacent particles) act
/// independently: the leftmost particle of a platoon sitting on a marked
/// space-time square moves by `(1,1)` and carries every platoon member to its
/// right along; everyone else moves by `(0,1)`. Marks are read at
/// `(position, t)`, so the field must cover row 0 (corner indexing).
///
/// A particle is never affected by higher labels, so a finite window of
/// `particle_count` labels reproduces the infinite system exactly on those
/// labels.
pub fn evolve_r<M: MarkSource + ?Sized>(
    marks: &M,
    particle_count: u32,
    horizon: u32,
) -> Result<ParticleTrajectory> {
    if particle_count < 1 {
        return Err(Error::invalid("particle_count", "need at least one particle"));
    }
    let k = particle_count as usize;
    let mut cur: Vec<i64> = (1..=particle_count as i64).collect();
    let mut rows = Vec::with_capacity(horizon as usize + 1);
    rows.push(cur.clone());
    for t in 0..horizon {
        let mut next = cur.clone();
        let mut start = 0usize;
        while start < k {
            let mut end = start + 1;
            while end < k && cur[end] == cur[end - 1] + 1 {
                end += 1;
            }
            if let Some(trigger) =
                (start..end).find(|&u| marks.is_marked(cur[u] as u32, t))
            {
                for v in trigger..end {
                    next[v] = cur[v] + 1;
                }
            }
            start = end;
        }
        cur = next;
        rows.push(cur.clone());
    }
    Ok(ParticleTrajectory::from_rows(ProcessKind::R, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn mark_free_field_never_moves() {
        let none = |_: u32, _: u32| false;
        let traj = evolve_r(&none, 8, 12).unwrap();
        for t in 0..=12 {
            for k in 1..=8u32 {
                assert_eq!(traj.pos(k, t), k as i64);
            }
        }
    }

    #[test]
    fn fully_marked_field_moves_every_step() {
        let all = |_: u32, _: u32| true;
        let traj = evolve_r(&all, 6, 10).unwrap();
        for t in 0..=10u32 {
            for k in 1..=6u32 {
                assert_eq!(traj.pos(k, t), (k + t) as i64);
            }
        }
    }

    /// Space-time marks of the worked 10x10 R-process figure, rows 0..=9.
    const FIGURE_MARKS: [&[u32]; 10] = [
        &[5, 6, 8, 9],
        &[2, 8, 9],
        &[1, 4, 9],
        &[2, 4, 6, 8],
        &[1, 5, 7, 9, 10],
        &[3, 8, 10],
        &[1, 2, 3, 5],
        &[3, 9],
        &[2, 4, 9],
        &[7, 9],
    ];

    /// Occupied sites (positions <= 10) drawn at each level of the figure.
    const FIGURE_OCCUPIED: [&[i64]; 10] = [
        &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        &[1, 2, 3, 4, 6, 7, 8, 9, 10],
        &[1, 3, 4, 5, 6, 7, 9, 10],
        &[2, 3, 5, 6, 7, 8, 10],
        &[3, 4, 5, 7, 8, 9, 10],
        &[3, 4, 6, 8, 9, 10],
        &[4, 5, 6, 9, 10],
        &[4, 6, 7, 9, 10],
        &[4, 6, 7, 10],
        &[5, 6, 7, 10],
    ];

    #[test]
    fn reproduces_the_worked_figure() {
        let marks =
            |i: u32, j: u32| j < 10 && FIGURE_MARKS[j as usize].contains(&i);
        let traj = evolve_r(&marks, 10, 9).unwrap();
        // first step: particles 1-4 stay, 5-10 move right
        for k in 1..=4u32 {
            assert_eq!(traj.pos(k, 1), k as i64);
        }
        for k in 5..=10u32 {
            assert_eq!(traj.pos(k, 1), k as i64 + 1);
        }
        // every drawn level matches the visible occupied sites
        for t in 0..=9u32 {
            let visible: BTreeSet<i64> =
                traj.row(t).iter().copied().filter(|&p| p <= 10).collect();
            let expected: BTreeSet<i64> = FIGURE_OCCUPIED[t as usize].iter().copied().collect();
            assert_eq!(visible, expected, "time {t}");
        }
    }

    #[test]
    fn moves_are_zero_or_one_and_order_is_kept() {
        for seed in 0..20u64 {
            let f = crate::fields::BernoulliField::new(
                crate::fields::ModelParams::new(0.5).unwrap(),
                crate::fields::RngSpec::new(seed, 0),
            )
            .shift_to_corner_indexing();
            let traj = evolve_r(&f, 25, 30).unwrap();
            for t in 1..=30u32 {
                assert!(traj.row(t).windows(2).all(|w| w[0] < w[1]));
                for k in 1..=25u32 {
                    let d = traj.pos(k, t) - traj.pos(k, t - 1);
                    assert!(d == 0 || d == 1);
                }
            }
        }
    }
}
