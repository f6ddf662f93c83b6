//! Longest increasing paths and last-passage times.
//!
//! `blip_*` operations compute the maximal number of marked sites on a path
//! that is strictly increasing in both coordinates; `corner_*` operations
//! compute maximal weight sums over weakly increasing (up-right) paths. Both
//! are evaluated by row-rolling dynamic programs whose memory is independent
//! of the number of rows.

use std::io::Write;

use crate::error::{Error, Result};
use crate::fields::{MarkSource, ModelParams, WeightSource};

/// A fully materialized DP table, kept only when a caller asks for
/// whole-table output; the rolling variants are the default elsewhere.
#[derive(Debug, Clone)]
pub struct DpTable<T> {
    m: u32,
    n: u32,
    values: Vec<T>,
}

impl<T: Copy + std::fmt::Display> DpTable<T> {
    fn from_rows(m: u32, n: u32, values: Vec<T>) -> Self {
        debug_assert_eq!(values.len(), (m as usize) * (n as usize));
        DpTable { m, n, values }
    }

    /// Table width (`i` runs over `1..=width`).
    pub fn width(&self) -> u32 {
        self.m
    }

    /// Table height (`j` runs over `1..=height`).
    pub fn height(&self) -> u32 {
        self.n
    }

    /// Value at 1-based `(i, j)`.
    #[inline]
    pub fn get(&self, i: u32, j: u32) -> T {
        assert!(i >= 1 && i <= self.m && j >= 1 && j <= self.n, "({i}, {j}) outside table");
        self.values[(j as usize - 1) * self.m as usize + (i as usize - 1)]
    }

    /// Dump the whole table as CSV with header `i,j,value`.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "i,j,value")?;
        for j in 1..=self.n {
            for i in 1..=self.m {
                writeln!(out, "{},{},{}", i, j, self.get(i, j))?;
            }
        }
        Ok(())
    }
}

fn check_dims(m: u32, n: u32) -> Result<()> {
    if m < 1 || n < 1 {
        return Err(Error::invalid("dims", format!("rectangle {m}x{n} must be at least 1x1")));
    }
    Ok(())
}

/// Last row of the BLIP dynamic program: `L(i, n)` for `i = 1..=m`.
///
/// Recurrence: `L(i,j) = max(L(i-1,j), L(i,j-1), L(i-1,j-1) + X_(i,j))`, the
/// diagonal term carrying the mark so that no two collected marks share a row
/// or column. Memory `O(m)`, independent of `n`.
pub fn blip_row<M: MarkSource + ?Sized>(marks: &M, m: u32, n: u32) -> Result<Vec<u32>> {
    check_dims(m, n)?;
    let mu = m as usize;
    let mut row = vec![0u32; mu + 1];
    for j in 1..=n {
        let mut diag = 0u32; // L(i-1, j-1)
        for i in 1..=mu {
            let up = row[i];
            let with_mark = diag + marks.is_marked(i as u32, j) as u32;
            row[i] = row[i - 1].max(up).max(with_mark);
            diag = up;
        }
    }
    row.remove(0);
    Ok(row)
}

/// Maximum number of marked sites on a strictly increasing path in `[m]x[n]`.
pub fn blip_length<M: MarkSource + ?Sized>(marks: &M, m: u32, n: u32) -> Result<u32> {
    Ok(*blip_row(marks, m, n)?.last().unwrap())
}

/// Full `m x n` BLIP table.
pub fn blip_table<M: MarkSource + ?Sized>(marks: &M, m: u32, n: u32) -> Result<DpTable<u32>> {
    check_dims(m, n)?;
    let mu = m as usize;
    let mut values = Vec::with_capacity(mu * n as usize);
    let mut row = vec![0u32; mu + 1];
    for j in 1..=n {
        let mut diag = 0u32;
        for i in 1..=mu {
            let up = row[i];
            let with_mark = diag + marks.is_marked(i as u32, j) as u32;
            row[i] = row[i - 1].max(up).max(with_mark);
            diag = up;
        }
        values.extend_from_slice(&row[1..]);
    }
    Ok(DpTable::from_rows(m, n, values))
}

/// Last-passage time over up-right paths from `(1,1)` to `(m,n)`.
///
/// `G(i,j) = Y_(i,j) + max(G(i-1,j), G(i,j-1))` with zero boundary. Intended
/// for the shifted convention (weights >= 1); correct for any nonnegative
/// weights.
pub fn corner_growth<W: WeightSource + ?Sized>(weights: &W, m: u32, n: u32) -> Result<u64> {
    check_dims(m, n)?;
    let mu = m as usize;
    let mut row = vec![0u64; mu + 1];
    for j in 1..=n {
        for i in 1..=mu {
            row[i] = weights.weight(i as u32, j) + row[i].max(row[i - 1]);
        }
    }
    Ok(row[mu])
}

/// Full `m x n` last-passage table.
pub fn corner_table<W: WeightSource + ?Sized>(weights: &W, m: u32, n: u32) -> Result<DpTable<u64>> {
    check_dims(m, n)?;
    let mu = m as usize;
    let mut values = Vec::with_capacity(mu * n as usize);
    let mut row = vec![0u64; mu + 1];
    for j in 1..=n {
        for i in 1..=mu {
            row[i] = weights.weight(i as u32, j) + row[i].max(row[i - 1]);
        }
        values.extend_from_slice(&row[1..]);
    }
    Ok(DpTable::from_rows(m, n, values))
}

/// Last-passage time over up-right paths from `start` to `end` in the
/// sub-rectangle they span.
pub fn corner_growth_from<W: WeightSource + ?Sized>(
    weights: &W,
    start: (u32, u32),
    end: (u32, u32),
) -> Result<u64> {
    let (k, l) = start;
    let (m, n) = end;
    if k < 1 || l < 1 {
        return Err(Error::invalid("start", format!("({k}, {l}) must have positive coordinates")));
    }
    if k > m || l > n {
        return Err(Error::invalid("start", format!("({k}, {l}) not <= ({m}, {n})")));
    }
    let width = (m - k + 1) as usize;
    let mut row = vec![0u64; width + 1];
    for j in l..=n {
        for (off, slot) in (k..=m).zip(1..=width) {
            row[slot] = weights.weight(off, j) + row[slot].max(row[slot - 1]);
        }
    }
    Ok(row[width])
}

/// A path produced by the greedy patient strategy together with its weight
/// (the number of rows it served before the width cap was hit).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatientPath {
    pub sites: Vec<(u32, u32)>,
    pub weight: u32,
}

/// Scan each row rightward from just past the previous pick to its first
/// marked site; stop as soon as a row has no mark at column <= `width_cap`.
pub fn patient_strategy<M: MarkSource + ?Sized>(
    marks: &M,
    rows: u32,
    width_cap: u32,
) -> Result<PatientPath> {
    check_dims(width_cap, rows)?;
    let mut sites = Vec::new();
    let mut x = 0u32;
    'rows: for j in 1..=rows {
        for i in x + 1..=width_cap {
            if marks.is_marked(i, j) {
                sites.push((i, j));
                x = i;
                continue 'rows;
            }
        }
        break;
    }
    Ok(PatientPath { weight: sites.len() as u32, sites })
}

/// Limit shape of `n^-1 L(floor(nx), floor(ny))`.
///
/// Three branches: `x` where `x < py`, `y` where `y < px`, and
/// `(2 sqrt(pxy) - p(x+y)) / q` in between; the formulas agree on the branch
/// boundaries.
pub fn psi(params: ModelParams, x: f64, y: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid("x", format!("{x} must be a nonnegative real")));
    }
    if !y.is_finite() || y < 0.0 {
        return Err(Error::invalid("y", format!("{y} must be a nonnegative real")));
    }
    let (p, q) = (params.p(), params.q());
    let value = if x < p * y {
        x
    } else if y < p * x {
        y
    } else if q == 0.0 {
        // p = 1 with x = y: every site marked, one mark per diagonal step
        x.min(y)
    } else {
        (2.0 * (p * x * y).sqrt() - p * (x + y)) / q
    };
    Ok(value)
}

/// Limit shape of `n^-1 G(floor(nx), floor(ny))` for i.i.d. weights of the
/// given mean and variance: `(x + y) mean + 2 sqrt(variance x y)`.
pub fn phi(x: f64, y: f64, mean: f64, variance: f64) -> Result<f64> {
    if !variance.is_finite() || variance < 0.0 {
        return Err(Error::invalid("variance", format!("{variance} must be nonnegative")));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid("x", format!("{x} must be a nonnegative real")));
    }
    if !y.is_finite() || y < 0.0 {
        return Err(Error::invalid("y", format!("{y} must be a nonnegative real")));
    }
    Ok((x + y) * mean + 2.0 * (variance * (x * y)).sqrt())
}

/// Supercritical soft-edge limit constant `(p x)^2 / (4 q)`.
pub fn soft_edge_constant(params: ModelParams, x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let px = params.p() * x;
    px * px / (4.0 * params.q())
}

#[cfg(test)]
pub(crate) mod oracle {
    //! Exhaustive reference implementations, independent of the DP kernels.

    /// Longest strict chain among marked sites, by enumerating all
    /// (column set, row set) pairs; a strict chain is exactly a sorted
    /// pairing of k distinct columns with k distinct rows.
    pub fn blip_exhaustive(marks: &dyn Fn(u32, u32) -> bool, m: u32, n: u32) -> u32 {
        let mut best = 0u32;
        let max_k = m.min(n);
        for k in (1..=max_k).rev() {
            if k <= best {
                break;
            }
            if chain_exists(marks, m, n, k) {
                best = k;
            }
        }
        best
    }

    fn chain_exists(marks: &dyn Fn(u32, u32) -> bool, m: u32, n: u32, k: u32) -> bool {
        let mut cols = Vec::new();
        subsets(m, k, &mut cols, &mut |cols| {
            let mut rows = Vec::new();
            subsets(n, k, &mut rows, &mut |rows| {
                cols.iter().zip(rows.iter()).all(|(&c, &r)| marks(c, r))
            })
        })
    }

    /// Visit all increasing k-subsets of 1..=limit; the callback returns true
    /// to short-circuit.
    fn subsets(limit: u32, k: u32, acc: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]) -> bool) -> bool {
        if acc.len() == k as usize {
            return f(acc);
        }
        let start = acc.last().map_or(1, |&v| v + 1);
        let remaining = k as usize - acc.len();
        for v in start..=limit {
            if ((limit - v + 1) as usize) < remaining {
                break;
            }
            acc.push(v);
            if subsets(limit, k, acc, f) {
                acc.pop();
                return true;
            }
            acc.pop();
        }
        false
    }

    /// Maximum up-right path sum by explicit path enumeration.
    pub fn corner_exhaustive(weights: &dyn Fn(u32, u32) -> u64, m: u32, n: u32) -> u64 {
        fn rec(weights: &dyn Fn(u32, u32) -> u64, i: u32, j: u32, m: u32, n: u32) -> u64 {
            let here = weights(i, j);
            if i == m && j == n {
                return here;
            }
            let mut best = 0;
            if i < m {
                best = best.max(rec(weights, i + 1, j, m, n));
            }
            if j < n {
                best = best.max(rec(weights, i, j + 1, m, n));
            }
            here + best
        }
        rec(weights, 1, 1, m, n)
    }
}
