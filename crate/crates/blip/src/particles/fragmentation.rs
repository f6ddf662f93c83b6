//! Discrete-time totally asymmetric fragmentation process.

use crate::error::{Error, Result};
use crate::fields::{ModelParams, RngSpec, SiteUniform};

/// A maximal run of adjacent particles, bounded by holes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Platoon {
    /// Position of the leftmost particle.
    pub start: i64,
    pub size: u32,
}

impl Platoon {
    #[inline]
    pub fn end(&self) -> i64 {
        self.start + self.size as i64 - 1
    }
}

/// Ordered platoons separated by at least one hole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlatoonState {
    platoons: Vec<Platoon>,
}

impl PlatoonState {
    pub fn new(platoons: Vec<Platoon>) -> Result<Self> {
        if platoons.is_empty() {
            return Err(Error::invalid("platoons", "at least one platoon required"));
        }
        if platoons.iter().any(|p| p.size < 1) {
            return Err(Error::invalid("platoons", "platoon sizes must be >= 1"));
        }
        if !platoons.windows(2).all(|w| w[1].start > w[0].end() + 1) {
            return Err(Error::invalid("platoons", "platoons must be separated by at least one hole"));
        }
        Ok(PlatoonState { platoons })
    }

    /// `count` platoons of equal `size`, separated by `gap >= 1` holes.
    pub fn regular(count: u32, size: u32, gap: u32) -> Result<Self> {
        if count < 1 || gap < 1 {
            return Err(Error::invalid("platoons", "need count >= 1 and gap >= 1"));
        }
        let stride = (size + gap) as i64;
        PlatoonState::new(
            (0..count as i64).map(|j| Platoon { start: 1 + j * stride, size }).collect(),
        )
    }

    pub fn platoons(&self) -> &[Platoon] {
        &self.platoons
    }

    /// Occupied sites, ascending.
    pub fn occupied(&self) -> Vec<i64> {
        self.platoons.iter().flat_map(|p| p.start..=p.end()).collect()
    }

    fn from_sorted_particles(particles: &[i64]) -> Self {
        let mut platoons = Vec::new();
        let mut start = particles[0];
        let mut prev = particles[0];
        for &x in &particles[1..] {
            if x != prev + 1 {
                platoons.push(Platoon { start, size: (prev - start + 1) as u32 });
                start = x;
            }
            prev = x;
        }
        platoons.push(Platoon { start, size: (prev - start + 1) as u32 });
        PlatoonState { platoons }
    }
}

/// One break-off: at step `t`, platoon `platoon_index` (left to right,
/// 1-based, labeled before the step) of size `platoon_size` detached its
/// leftmost `break_size` particles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BreakEvent {
    pub t: u32,
    pub platoon_index: u32,
    pub platoon_size: u32,
    pub break_size: u32,
}

/// Per-(time, platoon) uniform draws on `(0, 1]`.
pub trait BreakDraws {
    fn uniform(&self, t: u32, platoon: u32) -> f64;
}

impl<F: Fn(u32, u32) -> f64> BreakDraws for F {
    #[inline]
    fn uniform(&self, t: u32, platoon: u32) -> f64 {
        self(t, platoon)
    }
}

/// Site-keyed uniform source for break draws.
#[derive(Debug, Clone, Copy)]
pub struct SeededBreaks {
    src: SiteUniform,
}

impl SeededBreaks {
    pub fn new(rng: RngSpec) -> Self {
        SeededBreaks { src: SiteUniform::new(rng) }
    }
}

impl BreakDraws for SeededBreaks {
    #[inline]
    fn uniform(&self, t: u32, platoon: u32) -> f64 {
        self.src.open_closed(platoon + 1, t)
    }
}

/// `P(M = k)` for a platoon of size `n`: `p q^k` for `k < n`, `q^n` at `k = n`.
pub fn break_size_law(params: ModelParams, n: u32, k: u32) -> f64 {
    let (p, q) = (params.p(), params.q());
    if k < n {
        p * q.powi(k as i32)
    } else if k == n {
        q.powi(n as i32)
    } else {
        0.0
    }
}

/// Sample the break size by inverse CDF: `min(n, floor(log u / log q))`.
fn sample_break(u: f64, q: f64, n: u32) -> u32 {
    if q <= 0.0 {
        return 0;
    }
    if q >= 1.0 {
        return n;
    }
    let raw = u.ln() / q.ln();
    if raw >= n as f64 {
        n
    } else {
        raw as u32
    }
}

/// Run the fragmentation dynamics for `horizon` steps.
///
/// Each step, every platoon independently detaches a left piece of the law
/// above; the piece moves one site left. Pieces can land adjacent to the
/// remains of the left neighbor, in which case the structures merge for the
/// next step. Returns the state after every step and the break-size log.
pub fn evolve_fragmentation<D: BreakDraws + ?Sized>(
    draws: &D,
    params: ModelParams,
    state: &PlatoonState,
    horizon: u32,
) -> (Vec<PlatoonState>, Vec<BreakEvent>) {
    let q = params.q();
    let mut states = Vec::with_capacity(horizon as usize + 1);
    let mut events = Vec::new();
    let mut cur = state.clone();
    states.push(cur.clone());
    for t in 1..=horizon {
        let mut particles = Vec::new();
        for (idx, platoon) in cur.platoons.iter().enumerate() {
            let m = sample_break(draws.uniform(t, idx as u32 + 1), q, platoon.size);
            events.push(BreakEvent {
                t,
                platoon_index: idx as u32 + 1,
                platoon_size: platoon.size,
                break_size: m,
            });
            // detached piece, shifted one site left
            particles.extend(platoon.start - 1..platoon.start - 1 + m as i64);
            // remainder stays put
            particles.extend(platoon.start + m as i64..=platoon.end());
        }
        cur = PlatoonState::from_sorted_particles(&particles);
        states.push(cur.clone());
    }
    (states, events)
}
