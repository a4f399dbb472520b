//! Discrete and continuous Muckenhoupt ratio scans.
//!
//! The discrete ratio of a positive sequence `d` over a window `I` of
//! consecutive indices is
//!
//! ```text
//!   (sum_I d_n) (sum_I d_n^{-1/(p-1)})^{p-1} / |I|^p
//! ```
//!
//! and the reported constant is its maximum over all windows up to a cap.
//! At `p = 2` every window ratio is at least 1 (Cauchy–Schwarz).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::quadrature::{integrate_with_breaks, QuadOptions};
use crate::numeric::{CompensatedSum, DoubleDouble};
use crate::sequence::RawSequence;

/// Strictly positive weights `values[k] = d_{n_min + k}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence<f64>", into = "RawSequence<f64>")]
pub struct PositiveSequence {
    n_min: i64,
    values: Vec<f64>,
}

impl TryFrom<RawSequence<f64>> for PositiveSequence {
    type Error = Error;
    fn try_from(raw: RawSequence<f64>) -> Result<Self> {
        PositiveSequence::new(raw.n_min, raw.values)
    }
}

impl From<PositiveSequence> for RawSequence<f64> {
    fn from(s: PositiveSequence) -> Self {
        RawSequence {
            n_min: s.n_min,
            values: s.values,
        }
    }
}

impl PositiveSequence {
    pub fn new(n_min: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("weight sequence is empty"));
        }
        if let Some(k) = values.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!(
                "weight d_{} = {} is not a positive finite number",
                n_min + k as i64,
                values[k]
            )));
        }
        Ok(Self { n_min, values })
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

    pub fn get(&self, n: i64) -> Option<f64> {
        (n >= self.n_min && n <= self.n_max()).then(|| self.values[(n - self.n_min) as usize])
    }

    /// Restriction to `lo..=hi`.
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

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.n_min, self.values.iter().map(|v| v * k).collect())
    }

    pub fn reciprocal(&self) -> Self {
        Self {
            n_min: self.n_min,
            values: self.values.iter().map(|v| v.recip()).collect(),
        }
    }
}

/// Real values with `(-1)^n c_n >= 0`, e.g. critical values of a
/// Laguerre–Pólya function or the tips of a comb domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence<f64>", into = "RawSequence<f64>")]
pub struct SignedCriticalSequence {
    n_min: i64,
    values: Vec<f64>,
}

impl TryFrom<RawSequence<f64>> for SignedCriticalSequence {
    type Error = Error;
    fn try_from(raw: RawSequence<f64>) -> Result<Self> {
        SignedCriticalSequence::new(raw.n_min, raw.values)
    }
}

impl From<SignedCriticalSequence> for RawSequence<f64> {
    fn from(s: SignedCriticalSequence) -> Self {
        RawSequence {
            n_min: s.n_min,
            values: s.values,
        }
    }
}

#[inline]
pub(crate) fn parity(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

impl SignedCriticalSequence {
    pub fn new(n_min: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("critical value sequence is empty"));
        }
        for (k, &v) in values.iter().enumerate() {
            let n = n_min + k as i64;
            if !v.is_finite() {
                return Err(Error::invalid(format!("c_{n} is not finite")));
            }
            if parity(n) * v < 0.0 {
                return Err(Error::invalid(format!(
                    "sign alternation violated: (-1)^{n} c_{n} = {} < 0",
                    parity(n) * v
                )));
            }
        }
        Ok(Self { n_min, values })
    }

    /// `c_n = (-1)^n m_n` from moduli `m_n >= 0`.
    pub fn from_moduli(n_min: i64, moduli: &[f64]) -> Result<Self> {
        let values = moduli
            .iter()
            .enumerate()
            .map(|(k, &m)| parity(n_min + k as i64) * m.abs())
            .collect();
        Self::new(n_min, values)
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

    pub fn get(&self, n: i64) -> Option<f64> {
        (n >= self.n_min && n <= self.n_max()).then(|| self.values[(n - self.n_min) as usize])
    }

    /// `log |c_n|` for every entry; fails on a zero entry.
    pub fn log_moduli(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                if v == 0.0 {
                    Err(Error::invalid(format!("critical value c_{} is zero", self.n_min + k as i64)))
                } else {
                    Ok(v.abs().ln())
                }
            })
            .collect()
    }
}

/// Worst window found by a Muckenhoupt scan.
///
/// For discrete scans `witness` holds the first and last index of the
/// maximising window and `window_cap` the longest window scanned. For
/// continuous scans `witness` holds `(length index, centre index)` into the
/// supplied interval family and `window_cap` the number of lengths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuckenhouptReport {
    pub p: f64,
    pub max_ratio: f64,
    pub witness: (i64, i64),
    pub window_cap: usize,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    ratio: f64,
    start: usize,
    len: usize,
}

impl Best {
    fn better(self, other: Best) -> Best {
        match self.ratio.total_cmp(&other.ratio) {
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Equal => {
                if (self.start, self.len) <= (other.start, other.len) {
                    self
                } else {
                    other
                }
            }
        }
    }
}

fn prefix_sums(values: impl Iterator<Item = f64>) -> Vec<DoubleDouble> {
    let mut acc = CompensatedSum::new();
    let mut out = vec![DoubleDouble::default()];
    for v in values {
        acc.add(v);
        out.push(acc.parts());
    }
    out
}

/// Maximal discrete `(A_p)` ratio over all windows of at most `window_cap`
/// consecutive indices, by compensated prefix sums in `O(len * cap)`.
pub fn discrete_ratio(d: &PositiveSequence, p: f64, window_cap: usize) -> Result<MuckenhouptReport> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("exponent p = {p} must exceed 1")));
    }
    let len = d.len();
    if window_cap < 1 || window_cap > len {
        return Err(Error::invalid(format!(
            "window_cap = {window_cap} must lie in [1, {len}]"
        )));
    }
    let dual_exp = -1.0 / (p - 1.0);
    let direct = prefix_sums(d.values().iter().copied());
    let dual = prefix_sums(d.values().iter().map(|v| v.powf(dual_exp)));
    let is_two = p == 2.0;

    let best = (0..len)
        .into_par_iter()
        .map(|start| {
            // Singleton windows have ratio exactly 1 for every p.
            let mut best = Best { ratio: 1.0, start, len: 1 };
            let max_len = window_cap.min(len - start);
            for w in 2..=max_len {
                let s1 = direct[start + w].diff(direct[start]);
                let s2 = dual[start + w].diff(dual[start]);
                let wf = w as f64;
                let ratio = if is_two {
                    s1 * s2 / (wf * wf)
                } else {
                    s1 * s2.powf(p - 1.0) / wf.powf(p)
                };
                if ratio > best.ratio {
                    best = Best { ratio, start, len: w };
                }
            }
            best
        })
        .reduce_with(Best::better)
        .expect("non-empty sequence");

    Ok(MuckenhouptReport {
        p,
        max_ratio: best.ratio,
        witness: (
            d.n_min() + best.start as i64,
            d.n_min() + (best.start + best.len) as i64 - 1,
        ),
        window_cap,
    })
}

/// Full-window report against the report of the centred sub-window
/// shortened by `shrink`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub full: MuckenhouptReport,
    pub sub: MuckenhouptReport,
    /// `full.max_ratio / sub.max_ratio`.
    pub growth: f64,
}

/// Compares the discrete ratio on the whole window (all window lengths)
/// with the ratio on the centred sub-window of `len / shrink` entries.
pub fn ratio_trend(d: &PositiveSequence, p: f64, shrink: f64) -> Result<TrendReport> {
    if !(shrink > 1.0) {
        return Err(Error::invalid("shrink factor must exceed 1"));
    }
    let full = discrete_ratio(d, p, d.len())?;
    let sub_len = ((d.len() as f64 / shrink).round() as usize).max(1);
    let lo = d.n_min() + ((d.len() - sub_len) / 2) as i64;
    let sub_seq = d.slice(lo, lo + sub_len as i64 - 1)?;
    let sub = discrete_ratio(&sub_seq, p, sub_len)?;
    Ok(TrendReport {
        full,
        sub,
        growth: full.max_ratio / sub.max_ratio,
    })
}

/// `d_n = (1 + |n|)^{2 alpha}` on `n_min..=n_max`.
pub fn power_law_sequence(alpha: f64, n_min: i64, n_max: i64) -> Result<PositiveSequence> {
    if n_max < n_min {
        return Err(Error::invalid("empty index range"));
    }
    PositiveSequence::new(
        n_min,
        (n_min..=n_max)
            .map(|n| (1.0 + n.unsigned_abs() as f64).powf(2.0 * alpha))
            .collect(),
    )
}

/// `c_n = (-1)^n sqrt(d_n)`.
pub fn signed_from_weights(d: &PositiveSequence) -> SignedCriticalSequence {
    SignedCriticalSequence {
        n_min: d.n_min(),
        values: d
            .values()
            .iter()
            .enumerate()
            .map(|(k, v)| parity(d.n_min() + k as i64) * v.sqrt())
            .collect(),
    }
}

/// `d_n = c_n^2`; fails when some `c_n` vanishes.
pub fn weights_from_signed(c: &SignedCriticalSequence) -> Result<PositiveSequence> {
    PositiveSequence::new(c.n_min(), c.values().iter().map(|v| v * v).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncrementBound {
    pub holds: bool,
    /// Pair with the largest excess of the left side over the bound.
    pub worst_pair: (i64, i64),
    pub worst_excess: f64,
}

/// Checks `|log|c_p| - log|c_q|| <= log(C)/2 + log(|p - q| + 1)` for every
/// pair in the window, where `C` is the measured `(A_2)` constant of
/// `c_n^2`.
///
/// The bound follows from `c_p^2 c_q^{-2} <= C (|q - p| + 1)^2`, so it is
/// guaranteed when `C` was measured with a window cap covering all pairs.
pub fn log_increment_bound(c: &SignedCriticalSequence, c_ratio: f64) -> Result<IncrementBound> {
    if !(c_ratio > 0.0) {
        return Err(Error::invalid("Muckenhoupt constant must be positive"));
    }
    let logs = c.log_moduli()?;
    let half_log_c = 0.5 * c_ratio.ln();
    let n = logs.len();
    let (excess, i, j) = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = (f64::NEG_INFINITY, i, i);
            for j in i + 1..n {
                let lhs = (logs[i] - logs[j]).abs();
                let rhs = half_log_c + ((j - i) as f64 + 1.0).ln();
                let e = lhs - rhs;
                if e > best.0 {
                    best = (e, i, j);
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, 0, 0),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );
    let base = c.n_min();
    Ok(IncrementBound {
        holds: excess <= 1e-12,
        worst_pair: (base + i as i64, base + j as i64),
        worst_excess: if n < 2 { 0.0 } else { excess },
    })
}

/// `max_n |log|c_n| - log|c_{n+1}||` over the window.
pub fn neighbor_tip_bound(c: &SignedCriticalSequence) -> Result<f64> {
    let logs = c.log_moduli()?;
    Ok(logs
        .windows(2)
        .map(|w| (w[0] - w[1]).abs())
        .fold(0.0, f64::max))
}

/// A positive weight on the real line.
pub trait WeightFunction: Sync {
    fn weight(&self, x: f64) -> f64;

    /// Break points that help the quadrature on `[a, b]`.
    fn breaks(&self, _a: f64, _b: f64) -> Vec<f64> {
        Vec::new()
    }
}

impl<F: Fn(f64) -> f64 + Sync> WeightFunction for F {
    fn weight(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Dyadic lengths `2^k`, `k` in `k_min..=k_max`.
pub fn dyadic_lengths(k_min: i32, k_max: i32) -> Vec<f64> {
    (k_min..=k_max).map(|k| 2f64.powi(k)).collect()
}

/// `lo, lo + step, ...` up to `hi` inclusive.
pub fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

/// Maximal `(A_2)` ratio `(int_I w)(int_I 1/w)/|I|^2` over the intervals
/// `[c - l/2, c + l/2]` for the supplied lengths and centres. This scans a
/// finite family, so it is a necessary-condition check only.
pub fn continuous_a2_scan<W: WeightFunction + ?Sized>(
    w: &W,
    lengths: &[f64],
    centers: &[f64],
) -> Result<MuckenhouptReport> {
    if lengths.is_empty() || centers.is_empty() {
        return Err(Error::invalid("interval family is empty"));
    }
    if lengths.iter().any(|l| !(*l > 0.0 && l.is_finite())) || centers.iter().any(|c| !c.is_finite()) {
        return Err(Error::invalid("lengths must be positive and centres finite"));
    }
    let opts = QuadOptions::with_rel_tol(1e-8);
    let jobs: Vec<(usize, usize)> = (0..lengths.len())
        .flat_map(|i| (0..centers.len()).map(move |j| (i, j)))
        .collect();
    let results: Vec<(f64, usize, usize)> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (centers[j] - 0.5 * lengths[i], centers[j] + 0.5 * lengths[i]);
            let breaks = w.breaks(a, b);
            let direct = integrate_with_breaks(|x| w.weight(x), a, b, &breaks, &opts)?.value;
            let dual = integrate_with_breaks(|x| w.weight(x).recip(), a, b, &breaks, &opts)?.value;
            Ok((direct * dual / (lengths[i] * lengths[i]), i, j))
        })
        .collect::<Result<_>>()?;
    let (ratio, i, j) = results
        .into_iter()
        .fold((f64::NEG_INFINITY, 0, 0), |a, b| if b.0 > a.0 { b } else { a });
    Ok(MuckenhouptReport {
        p: 2.0,
        max_ratio: ratio,
        witness: (i as i64, j as i64),
        window_cap: lengths.len(),
    })
}

/// `2pq <= p^{1+2a} q^{1-2a} + p^{1-2a} q^{1+2a} <= p^2 + q^2` at one point,
/// up to a relative rounding slack of `1e-12`.
pub fn ungl_inequality(p: f64, q: f64, alpha: f64) -> Result<bool> {
    if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) || !(-0.5..=0.5).contains(&alpha) {
        return Err(Error::invalid(format!(
            "need p, q > 0 and |alpha| <= 1/2, got p = {p}, q = {q}, alpha = {alpha}"
        )));
    }
    let middle = p.powf(1.0 + 2.0 * alpha) * q.powf(1.0 - 2.0 * alpha)
        + p.powf(1.0 - 2.0 * alpha) * q.powf(1.0 + 2.0 * alpha);
    let lower = 2.0 * p * q;
    let upper = p * p + q * q;
    let slack = 1e-12 * upper;
    Ok(lower <= middle + slack && middle <= upper + slack)
}
