//! Integer-indexed real node sequences and their window statistics.
//!
//! All statistics are computed over the finite window that is stored. The
//! quantities of interest for bi-infinite sequences (infima and suprema over
//! all of `Z`) are therefore estimated from below or above: the window `delta`
//! can only overestimate the true separation constant, the window `Delta`
//! can only underestimate the true maximal gap.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Raw on-disk shape shared by every sequence type:
/// `{"n_min": <int>, "values": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawSequence<T> {
    pub n_min: i64,
    pub values: Vec<T>,
}

/// A finite window `values[k] = lambda_{n_min + k}` of a strictly increasing
/// real sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence<f64>", into = "RawSequence<f64>")]
pub struct IndexedSequence {
    n_min: i64,
    values: Vec<f64>,
}

impl TryFrom<RawSequence<f64>> for IndexedSequence {
    type Error = Error;

    fn try_from(raw: RawSequence<f64>) -> Result<Self> {
        IndexedSequence::new(raw.n_min, raw.values)
    }
}

impl From<IndexedSequence> for RawSequence<f64> {
    fn from(s: IndexedSequence) -> Self {
        RawSequence {
            n_min: s.n_min,
            values: s.values,
        }
    }
}

impl IndexedSequence {
    /// Validates ordering and finiteness. Unordered input is rejected rather
    /// than sorted, since the index of each node is significant.
    pub fn new(n_min: i64, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::invalid(format!(
                "a node sequence needs at least 2 entries, got {}",
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("entry {} is not finite", n_min + k as i64)));
        }
        if let Some(k) = values.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "nodes must be strictly increasing: lambda_{} = {} >= lambda_{} = {}",
                n_min + k as i64,
                values[k],
                n_min + k as i64 + 1,
                values[k + 1]
            )));
        }
        n_min
            .checked_add(values.len() as i64)
            .ok_or_else(|| Error::invalid("index range overflows"))?;
        Ok(Self { n_min, values })
    }

    /// `lambda_n = f(n)` for `n` in `n_min..=n_max`.
    pub fn from_fn(n_min: i64, n_max: i64, f: impl Fn(i64) -> f64) -> Result<Self> {
        if n_max < n_min {
            return Err(Error::invalid("empty index range"));
        }
        Self::new(n_min, (n_min..=n_max).map(f).collect())
    }

    /// The integer lattice on `n_min..=n_max`.
    pub fn integers(n_min: i64, n_max: i64) -> Result<Self> {
        Self::from_fn(n_min, n_max, |n| n as f64)
    }

    pub fn n_min(&self) -> i64 {
        self.n_min
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max()
    }

    /// `lambda_n`, if `n` is inside the window.
    pub fn get(&self, n: i64) -> Option<f64> {
        if n < self.n_min || n > self.n_max() {
            None
        } else {
            Some(self.values[(n - self.n_min) as usize])
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &v)| (self.n_min + k as i64, v))
    }

    /// Sub-window on `lo..=hi`.
    pub fn slice(&self, lo: i64, hi: i64) -> Result<Self> {
        if lo < self.n_min || hi > self.n_max() || hi < lo {
            return Err(Error::invalid(format!(
                "window [{lo}, {hi}] is not inside [{}, {}]",
                self.n_min,
                self.n_max()
            )));
        }
        let a = (lo - self.n_min) as usize;
        let b = (hi - self.n_min) as usize;
        Self::new(lo, self.values[a..=b].to_vec())
    }

    /// `lambda_n + shift` for every node.
    pub fn translated(&self, shift: f64) -> Result<Self> {
        Self::new(self.n_min, self.values.iter().map(|v| v + shift).collect())
    }

    /// `factor * lambda_n` for every node (`factor > 0`).
    pub fn dilated(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0) {
            return Err(Error::invalid("dilation factor must be positive"));
        }
        Self::new(self.n_min, self.values.iter().map(|v| v * factor).collect())
    }

    fn gaps(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    pub fn span(&self) -> f64 {
        self.values[self.values.len() - 1] - self.values[0]
    }
}

/// Minimal and maximal consecutive gap over the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub delta: f64,
    #[serde(rename = "Delta")]
    pub max_gap: f64,
    pub is_separated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KadetsReport {
    pub sup_deviation: f64,
    pub passes: bool,
}

/// Window estimates of the upper and lower density at half-length `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub r: f64,
    pub d_plus: f64,
    pub d_minus: f64,
}

pub fn separation(seq: &IndexedSequence) -> SeparationReport {
    let (delta, max_gap) = seq
        .gaps()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), g| (lo.min(g), hi.max(g)));
    SeparationReport {
        delta,
        max_gap,
        is_separated: delta > 0.0,
    }
}

/// Kadets' quarter criterion, `sup |lambda_n - n| < 1/4`, over the window.
pub fn kadets_check(seq: &IndexedSequence) -> KadetsReport {
    let sup_deviation = seq
        .iter()
        .map(|(n, v)| (v - n as f64).abs())
        .fold(0.0_f64, f64::max);
    KadetsReport {
        sup_deviation,
        passes: sup_deviation < 0.25,
    }
}

/// Node counts over half-open windows `[x - r, x + r)` fully contained in
/// `[lambda_first, lambda_last]`, maximised and minimised over centres `x`.
///
/// A window `[x - r, x + r)` holds `lambda` iff `lambda - r < x <= lambda + r`,
/// so the count is piecewise constant between the break points
/// `lambda_k +- r`. Evaluating at those break points and at both ends of
/// the admissible range attains both extremes exactly.
pub fn density(seq: &IndexedSequence, r: f64) -> Result<DensityReport> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("density half-length r must be positive"));
    }
    let vals = seq.values();
    let first = vals[0];
    let last = vals[vals.len() - 1];
    let (x_lo, x_hi) = (first + r, last - r);
    if x_lo > x_hi {
        return Err(Error::invalid(format!(
            "r = {r} too large: no window of length {} fits in the data span {}",
            2.0 * r,
            last - first
        )));
    }

    let mut centres = vec![x_lo, x_hi];
    for &v in vals {
        for c in [v - r, v + r] {
            if c >= x_lo && c <= x_hi {
                centres.push(c);
            }
        }
    }

    let count = |x: f64| {
        let lo = vals.partition_point(|&v| v < x - r);
        let hi = vals.partition_point(|&v| v < x + r);
        hi - lo
    };
    let (max_c, min_c) = centres
        .par_iter()
        .map(|&x| {
            let c = count(x);
            (c, c)
        })
        .reduce(|| (0, usize::MAX), |a, b| (a.0.max(b.0), a.1.min(b.1)));

    Ok(DensityReport {
        r,
        d_plus: max_c as f64 / (2.0 * r),
        d_minus: min_c as f64 / (2.0 * r),
    })
}

/// `true` iff every interval `[x - eps, x + eps]` inside the data span meets
/// a node, i.e. `Delta <= 2 eps`.
pub fn relative_density_check(seq: &IndexedSequence, eps: f64) -> bool {
    eps > 0.0 && separation(seq).max_gap <= 2.0 * eps
}
