//! The coupled particle processes.
//!
//! Four processes read the same lattice environments: the R-process whose
//! right jumps encode longest-path weights, the discrete TASEP with backward
//! update obtained from R by the shear `(i,j) -> (i-j,j)`, the fragmentation
//! process describing platoon break-offs, and the left/right pair of marked
//! processes whose coupling exchanges labels and time.

mod dtasep;
mod fragmentation;
mod r_process;
mod tau;
mod zw;

pub use dtasep::{check_dtasep_legality, evolve_dtasep, r_to_dtasep, JumpDraws, SeededJumps};
pub use fragmentation::{
    break_size_law, evolve_fragmentation, BreakDraws, BreakEvent, Platoon, PlatoonState,
    SeededBreaks,
};
pub use r_process::evolve_r;
pub use tau::{extract_tau, tau_recursion, TauTable};
pub use zw::{evolve_blocking_right, evolve_marked_left};

use std::io::Write;

use crate::error::{Error, Result};

/// Which dynamics produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessKind {
    R,
    Dtasep,
    Z,
    W,
}

/// Time-indexed positions of labeled particles, `pos(k, t)` for 1-based
/// labels `k = 1..=particles()` and times `t = 0..=horizon()`.
///
/// Strict order `pos(k-1, t) < pos(k, t)` holds at every time for every
/// process in this module; constructors enforce it.
#[derive(Debug, Clone)]
pub struct ParticleTrajectory {
    kind: ProcessKind,
    /// rows[t][k-1]
    rows: Vec<Vec<i64>>,
}

impl ParticleTrajectory {
    pub(crate) fn from_rows(kind: ProcessKind, rows: Vec<Vec<i64>>) -> Self {
        debug_assert!(!rows.is_empty());
        for row in &rows {
            debug_assert!(row.windows(2).all(|w| w[0] < w[1]), "particle order violated");
        }
        ParticleTrajectory { kind, rows }
    }

    #[inline]
    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    #[inline]
    pub fn particles(&self) -> u32 {
        self.rows[0].len() as u32
    }

    /// Largest simulated time.
    #[inline]
    pub fn horizon(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// Position of particle `k` (1-based) at time `t`.
    #[inline]
    pub fn pos(&self, k: u32, t: u32) -> i64 {
        self.rows[t as usize][(k - 1) as usize]
    }

    /// All positions at time `t`, ordered by label.
    pub fn row(&self, t: u32) -> &[i64] {
        &self.rows[t as usize]
    }

    /// Dump as CSV with header `k,t,pos`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "k,t,pos")?;
        for k in 1..=self.particles() {
            for t in 0..=self.horizon() {
                writeln!(out, "{},{},{}", k, t, self.pos(k, t))?;
            }
        }
        Ok(())
    }
}

fn validate_increasing(initial: &[i64], name: &'static str) -> Result<()> {
    if initial.is_empty() {
        return Err(Error::invalid(name, "at least one particle required"));
    }
    if !initial.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid(name, "initial positions must be strictly increasing"));
    }
    Ok(())
}
