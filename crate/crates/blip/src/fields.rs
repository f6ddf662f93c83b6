//! Reproducible random environments.
//!
//! Every site value is a pure function of `(master_seed, stream_id, site)`,
//! computed by keyed bit-mixing of the coordinates. Nothing is materialized:
//! any sub-rectangle can be regenerated in any order, and several coupled
//! consumers (DP tables, particle processes, identity checks) can read the
//! same environment concurrently without synchronization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mark probability `p` and its complement `q = 1 - p`.
///
/// The library accepts the closed interval `p in [0, 1]` so that degenerate
/// environments (all marked / no marks) remain expressible for tests; batch
/// front-ends are expected to restrict to the open interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    p: f64,
    q: f64,
}

impl ModelParams {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid("p", format!("{p} not in [0, 1]")));
        }
        Ok(ModelParams { p, q: 1.0 - p })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn q(&self) -> f64 {
        self.q
    }
}

/// Seed material for one field: a master seed plus a stream tag separating
/// independent fields and replicas that share the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        RngSpec { master_seed, stream_id }
    }

    pub fn with_stream(self, stream_id: u64) -> Self {
        RngSpec { stream_id, ..self }
    }
}

/// Parse a seed or stream id given as decimal or 0x-prefixed hexadecimal.
pub fn parse_seed(s: &str) -> Result<u64> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse::<u64>()
    };
    parsed.map_err(|e| Error::invalid("seed", format!("`{s}`: {e}")))
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// 64-bit finalizer with full avalanche (Murmur3 constants).
#[inline(always)]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 33)).wrapping_mul(0xFF51_AFD7_ED55_8CCD);
    z = (z ^ (z >> 33)).wrapping_mul(0xC4CE_B9FE_1A85_EC53);
    z ^ (z >> 33)
}

/// Fold extra words into a derived 64-bit key.
#[inline]
pub(crate) fn mix_words(words: &[u64]) -> u64 {
    let mut h = GAMMA;
    for &w in words {
        h = mix(h ^ w.wrapping_mul(GAMMA));
    }
    h
}

/// Derive an independent seed from a master seed, a purpose tag, and an
/// index; the result alone replays the derived field.
pub fn derive_seed(master_seed: u64, tag: u64, index: u64) -> u64 {
    mix_words(&[master_seed, tag, index])
}

/// Counter-style uniform source addressed by lattice coordinates.
#[derive(Debug, Clone, Copy)]
pub struct SiteUniform {
    base: u64,
}

impl SiteUniform {
    pub fn new(rng: RngSpec) -> Self {
        SiteUniform { base: mix_words(&[rng.master_seed, rng.stream_id]) }
    }

    #[inline(always)]
    fn key(&self, i: u32, j: u64) -> u64 {
        let pack = ((i as u64) << 32).wrapping_add(j);
        mix(self.base.wrapping_add(pack.wrapping_mul(GAMMA)))
    }

    /// Uniform on `[0, 1)`.
    #[inline(always)]
    pub fn half_open(&self, i: u32, j: u32) -> f64 {
        (self.key(i, j as u64) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`; the all-zero key maps to the smallest positive value.
    #[inline(always)]
    pub fn open_closed(&self, i: u32, j: u32) -> f64 {
        ((self.key(i, j as u64) >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Read access to Bernoulli marks. Implemented by [`BernoulliField`] and, for
/// tests and fixtures, by plain closures `Fn(u32, u32) -> bool`.
pub trait MarkSource {
    fn is_marked(&self, i: u32, j: u32) -> bool;
}

impl<F: Fn(u32, u32) -> bool> MarkSource for F {
    #[inline(always)]
    fn is_marked(&self, i: u32, j: u32) -> bool {
        self(i, j)
    }
}

/// Read access to nonnegative integer weights, in the implementor's own
/// shift convention.
pub trait WeightSource {
    fn weight(&self, i: u32, j: u32) -> u64;
}

impl<F: Fn(u32, u32) -> u64> WeightSource for F {
    #[inline(always)]
    fn weight(&self, i: u32, j: u32) -> u64 {
        self(i, j)
    }
}

/// I.i.d. Bernoulli(p) marks on the lattice.
///
/// The logical domain is `{i >= 1} x {j >= min_row}`: fresh fields live on
/// positive coordinates, and [`BernoulliField::shift_to_corner_indexing`]
/// produces the view whose row `j` reads the original row `j + 1`, extending
/// the domain down to row 0.
#[derive(Debug, Clone, Copy)]
pub struct BernoulliField {
    params: ModelParams,
    rng: RngSpec,
    src: SiteUniform,
    row_offset: u32,
    min_row: u32,
}

impl BernoulliField {
    pub fn new(params: ModelParams, rng: RngSpec) -> Self {
        BernoulliField { params, rng, src: SiteUniform::new(rng), row_offset: 0, min_row: 1 }
    }

    /// Re-index so that the mark at `(i, j)` is the original mark at `(i, j+1)`.
    ///
    /// After the shift the domain is `N x Z+` and a longest-path value
    /// computed on the shifted field up to `(s, t)` equals the original value
    /// up to `(s, t + 1)`.
    pub fn shift_to_corner_indexing(&self) -> Self {
        BernoulliField { row_offset: self.row_offset + 1, min_row: 0, ..*self }
    }

    #[inline]
    pub fn params(&self) -> ModelParams {
        self.params
    }

    #[inline]
    pub fn rng(&self) -> RngSpec {
        self.rng
    }

    #[inline]
    pub fn min_row(&self) -> u32 {
        self.min_row
    }

    /// Checked mark lookup.
    pub fn mark_at(&self, i: u32, j: u32) -> Result<bool> {
        if i < 1 || j < self.min_row {
            return Err(Error::OutOfDomain { i: i as i64, j: j as i64, min_row: self.min_row });
        }
        Ok(self.raw_mark(i, j))
    }

    #[inline(always)]
    fn raw_mark(&self, i: u32, j: u32) -> bool {
        self.src.half_open(i, j.wrapping_add(self.row_offset)) < self.params.p
    }
}

impl MarkSource for BernoulliField {
    #[inline(always)]
    fn is_marked(&self, i: u32, j: u32) -> bool {
        assert!(i >= 1 && j >= self.min_row, "site ({i}, {j}) outside field domain");
        self.raw_mark(i, j)
    }
}

/// Shift convention for geometric weights.
///
/// `Unshifted` weights live on `{0, 1, 2, ...}` with `P(Y~ = s) = q p^s`;
/// `Shifted` weights live on `{1, 2, ...}` with `P(Y = s) = q p^(s-1)`.
/// On a shared `(seed, stream, site)` the shifted value is exactly the
/// unshifted value plus one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeomConvention {
    Unshifted,
    Shifted,
}

/// I.i.d. geometric weights on `N x N`, sampled by inverse CDF from the site
/// uniform: `Y~ = floor(log U / log p)` with `U` uniform on `(0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct GeometricField {
    params: ModelParams,
    rng: RngSpec,
    src: SiteUniform,
    convention: GeomConvention,
    ln_p: f64,
}

impl GeometricField {
    pub fn new(params: ModelParams, rng: RngSpec, convention: GeomConvention) -> Result<Self> {
        if params.p() >= 1.0 {
            return Err(Error::invalid("p", "geometric weights need p < 1"));
        }
        Ok(GeometricField {
            params,
            rng,
            src: SiteUniform::new(rng),
            convention,
            ln_p: params.p().ln(),
        })
    }

    /// The same underlying weights under the other convention.
    pub fn with_convention(&self, convention: GeomConvention) -> Self {
        GeometricField { convention, ..*self }
    }

    #[inline]
    pub fn params(&self) -> ModelParams {
        self.params
    }

    #[inline]
    pub fn rng(&self) -> RngSpec {
        self.rng
    }

    #[inline]
    pub fn convention(&self) -> GeomConvention {
        self.convention
    }

    /// Checked weight lookup.
    pub fn weight_at(&self, i: u32, j: u32) -> Result<u64> {
        if i < 1 || j < 1 {
            return Err(Error::OutOfDomain { i: i as i64, j: j as i64, min_row: 1 });
        }
        Ok(self.raw_weight(i, j))
    }

    #[inline(always)]
    fn raw_weight(&self, i: u32, j: u32) -> u64 {
        let u = self.src.open_closed(i, j);
        // ln(u) <= 0 and ln(p) < 0, so the ratio is a nonnegative finite float
        // (p = 0 gives ln_p = -inf and a ratio of +0).
        let unshifted = (u.ln() / self.ln_p) as u64;
        unshifted + (self.convention == GeomConvention::Shifted) as u64
    }
}

impl WeightSource for GeometricField {
    #[inline(always)]
    fn weight(&self, i: u32, j: u32) -> u64 {
        assert!(i >= 1 && j >= 1, "site ({i}, {j}) outside field domain");
        self.raw_weight(i, j)
    }
}
