//! Generating functions of real node sequences.
//!
//! Two representations are supported:
//!
//! * [`Representation::SymmetricProduct`]: the truncated product
//!   `prod_{|lambda_n| < R} (1 - z/lambda_n)`, a zero node contributing the
//!   factor `z`. It converges slowly as `R` grows (truncation error of order
//!   `|z|^2/R` for lattice-like nodes).
//! * [`Representation::SineTail`]: a finite perturbation of the integers,
//!   `sin(pi z)/pi * prod_{|n| <= N} (z - lambda_n)/(z - n)`, with
//!   `lambda_n = n` for `|n| > N`. This form is exact.
//!
//! Both carry a positive multiplicative normalisation.

mod critical;
mod diagnostics;

pub use critical::CriticalData;
pub use diagnostics::{LineBounds, WeightTrace};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::muckenhoupt::parity;
use crate::numeric::{complex_sum, log_sin_pi, pi_cot_pi_minus_recip, sinc_complex, CompensatedSum};
use crate::sequence::IndexedSequence;

/// Distance below which product factors are multiplied directly instead of
/// being summed in the log domain.
const DIRECT_RADIUS: f64 = 1.0;

/// Beyond this `|Im z|` the sine-tail form is evaluated in the log domain.
const LOG_DOMAIN_IM: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Representation {
    /// Nodes with `|lambda_n| < radius` (already filtered).
    SymmetricProduct { nodes: IndexedSequence, radius: f64 },
    /// `core[k] = lambda_{k - half_width}` for `k = 0..=2 half_width`.
    SineTail { half_width: i64, core: Vec<f64> },
}

/// An entire function with simple real zeros, evaluable on `C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratingFunction {
    representation: Representation,
    normalization: f64,
}

impl GeneratingFunction {
    /// `sin(pi z)/pi`.
    pub fn sine() -> Self {
        Self {
            representation: Representation::SineTail {
                half_width: 0,
                core: vec![0.0],
            },
            normalization: 1.0,
        }
    }

    /// Sine-tail form from core nodes `lambda_{-N..=N}` given in order.
    pub fn sine_tail(core: Vec<f64>) -> Result<Self> {
        if core.len() % 2 != 1 {
            return Err(Error::invalid(format!(
                "sine-tail core must have odd length 2N+1, got {}",
                core.len()
            )));
        }
        let half_width = (core.len() / 2) as i64;
        if let Some(k) = core.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("core node {} is not finite", k as i64 - half_width)));
        }
        if let Some(k) = core.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "core nodes must be strictly increasing at index {}",
                k as i64 - half_width
            )));
        }
        let (first, last) = (core[0], core[core.len() - 1]);
        let (lo, hi) = (-half_width as f64 - 1.0, half_width as f64 + 1.0);
        if !(first > lo && last < hi) {
            return Err(Error::invalid(format!(
                "core [{first}, {last}] does not interlace the integer tail: need lambda_-N > {lo} and lambda_N < {hi}"
            )));
        }
        Ok(Self {
            representation: Representation::SineTail { half_width, core },
            normalization: 1.0,
        })
    }

    /// Sine-tail form from a window indexed exactly on `[-N, N]`.
    pub fn sine_tail_from_window(nodes: &IndexedSequence) -> Result<Self> {
        if nodes.n_min() != -nodes.n_max() {
            return Err(Error::invalid(format!(
                "sine-tail core must be indexed on [-N, N], got [{}, {}]",
                nodes.n_min(),
                nodes.n_max()
            )));
        }
        Self::sine_tail(nodes.values().to_vec())
    }

    /// Truncated product over the nodes with `|lambda_n| < radius`.
    pub fn symmetric_product(nodes: &IndexedSequence, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::invalid("product radius must be positive"));
        }
        let kept: Vec<(i64, f64)> = nodes.iter().filter(|(_, v)| v.abs() < radius).collect();
        if kept.len() < 2 {
            return Err(Error::invalid(format!(
                "fewer than two nodes inside radius {radius}"
            )));
        }
        let included = IndexedSequence::new(kept[0].0, kept.iter().map(|(_, v)| *v).collect())?;
        Ok(Self {
            representation: Representation::SymmetricProduct {
                nodes: included,
                radius,
            },
            normalization: 1.0,
        })
    }

    /// Sine-tail form when the window is tail-compatible, otherwise the
    /// product over the whole window.
    pub fn from_window(nodes: &IndexedSequence) -> Result<Self> {
        match Self::sine_tail_from_window(nodes) {
            Ok(f) => Ok(f),
            Err(_) => {
                let radius = nodes.values().iter().fold(0.0_f64, |m, v| m.max(v.abs())) + 1.0;
                Self::symmetric_product(nodes, radius)
            }
        }
    }

    pub fn with_normalization(mut self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::invalid("normalization must be a positive finite number"));
        }
        self.normalization = k;
        Ok(self)
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn representation(&self) -> &Representation {
        &self.representation
    }

    pub fn is_sine_tail(&self) -> bool {
        matches!(self.representation, Representation::SineTail { .. })
    }

    /// Index range of the stored nodes: the product window, or `[-N, N]` for
    /// the sine-tail core (every other integer index is a tail node).
    pub fn stored_range(&self) -> (i64, i64) {
        match &self.representation {
            Representation::SymmetricProduct { nodes, .. } => (nodes.n_min(), nodes.n_max()),
            Representation::SineTail { half_width, .. } => (-half_width, *half_width),
        }
    }

    /// Zero with index `n`, if the representation has one.
    pub fn node(&self, n: i64) -> Option<f64> {
        match &self.representation {
            Representation::SymmetricProduct { nodes, .. } => nodes.get(n),
            Representation::SineTail { half_width, core } => {
                if n.abs() <= *half_width {
                    Some(core[(n + half_width) as usize])
                } else {
                    Some(n as f64)
                }
            }
        }
    }

    /// Nodes on `lo..=hi` as an indexed sequence.
    pub fn nodes(&self, lo: i64, hi: i64) -> Result<IndexedSequence> {
        let values = (lo..=hi)
            .map(|n| self.node(n).ok_or_else(|| Error::invalid(format!("no node with index {n}"))))
            .collect::<Result<Vec<_>>>()?;
        IndexedSequence::new(lo, values)
    }

    /// Indices of zeros in `[a, b]`, in increasing order.
    pub(crate) fn node_indices_in(&self, a: f64, b: f64) -> Vec<i64> {
        match &self.representation {
            Representation::SymmetricProduct { nodes, .. } => {
                nodes.iter().filter(|(_, v)| *v >= a && *v <= b).map(|(n, _)| n).collect()
            }
            Representation::SineTail { .. } => {
                let lo = a.floor() as i64 - 1;
                let hi = b.ceil() as i64 + 1;
                (lo..=hi)
                    .filter(|&n| {
                        let v = self.node(n).expect("sine tail has every index");
                        v >= a && v <= b
                    })
                    .collect()
            }
        }
    }

    /// `F(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        self.eval_removed(None, z)
    }

    /// `F(z) / (z - lambda_n)` by dropping the `n`-th factor; at
    /// `z = lambda_n` this is `F'(lambda_n)`.
    pub fn eval_without(&self, n: i64, z: Complex64) -> Result<Complex64> {
        if self.node(n).is_none() {
            return Err(Error::invalid(format!("no node with index {n}")));
        }
        self.eval_removed(Some(n), z)
    }

    fn eval_removed(&self, skip: Option<i64>, z: Complex64) -> Result<Complex64> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("evaluation point must be finite"));
        }
        let value = match &self.representation {
            Representation::SineTail { half_width, core } => {
                sine_tail_value(*half_width, core, skip, z) * self.normalization
            }
            Representation::SymmetricProduct { nodes, .. } => {
                product_value(nodes, skip, z)? * self.normalization
            }
        };
        if !(value.re.is_finite() && value.im.is_finite()) {
            let log_value = if skip.is_none() { self.log_eval(z).ok().map(|l| l.re) } else { None };
            return Err(Error::NumericFailure {
                message: format!("|F| overflows at z = {z}"),
                log_value,
            });
        }
        if z.im == 0.0 {
            return Ok(Complex64::new(value.re, 0.0));
        }
        Ok(value)
    }

    /// A logarithm of `F(z)`: the real part is `log|F(z)|` (`-inf` at a
    /// zero), the imaginary part is some argument of `F(z)`.
    pub fn log_eval(&self, z: Complex64) -> Result<Complex64> {
        let log_k = self.normalization.ln();
        match &self.representation {
            Representation::SineTail { half_width, core } => {
                if z.im.abs() <= LOG_DOMAIN_IM {
                    let v = sine_tail_value(*half_width, core, None, z);
                    return Ok(v.ln() + log_k);
                }
                let terms = (-half_width..=*half_width).zip(core.iter()).flat_map(|(j, &l)| {
                    [(z - l).ln(), -(z - j as f64).ln()]
                });
                let sum = complex_sum(terms);
                Ok(log_sin_pi(z) - std::f64::consts::PI.ln() + sum + log_k)
            }
            Representation::SymmetricProduct { nodes, .. } => {
                let sum = complex_sum(nodes.values().iter().map(|&l| product_factor(l, z).ln()));
                Ok(sum + log_k)
            }
        }
    }

    /// `F'(z)/F(z)`.
    pub fn eval_log_derivative(&self, z: Complex64) -> Result<Complex64> {
        match &self.representation {
            Representation::SineTail { half_width, core } => {
                let n = *half_width;
                let m = z.re.round();
                let w = z - m;
                let mi = m as i64;
                if core.iter().any(|&l| z == Complex64::new(l, 0.0)) || (mi.abs() > n && w == Complex64::new(0.0, 0.0)) {
                    return Err(Error::Pole(format!("log-derivative at the zero z = {z}")));
                }
                let mut re = CompensatedSum::new();
                let mut im = CompensatedSum::new();
                let mut push = |v: Complex64| {
                    re.add(v.re);
                    im.add(v.im);
                };
                push(pi_cot_pi_minus_recip(w));
                if mi.abs() > n {
                    push(w.inv());
                }
                for (j, &l) in (-n..=n).zip(core.iter()) {
                    push((z - l).inv());
                    if j != mi {
                        push(-(z - j as f64).inv());
                    }
                }
                Ok(Complex64::new(re.value(), im.value()))
            }
            Representation::SymmetricProduct { nodes, .. } => {
                if nodes.values().iter().any(|&l| z == Complex64::new(l, 0.0)) {
                    return Err(Error::Pole(format!("log-derivative at the zero z = {z}")));
                }
                Ok(complex_sum(nodes.values().iter().map(|&l| (z - l).inv())))
            }
        }
    }

    /// Real-axis log-derivative, used by the critical point search.
    pub(crate) fn log_derivative_real(&self, x: f64) -> Result<f64> {
        Ok(self.eval_log_derivative(Complex64::new(x, 0.0))?.re)
    }

    /// `F'(lambda_n)` by factor removal.
    pub fn derivative_at(&self, n: i64) -> Result<f64> {
        let l = self.node(n).ok_or_else(|| Error::invalid(format!("no node with index {n}")))?;
        Ok(self.eval_without(n, Complex64::new(l, 0.0))?.re)
    }

    /// `log|F'(lambda_n)|`, finite even where `F'(lambda_n)` itself overflows.
    pub fn log_abs_derivative_at(&self, n: i64) -> Result<f64> {
        let l = self.node(n).ok_or_else(|| Error::invalid(format!("no node with index {n}")))?;
        let z = Complex64::new(l, 0.0);
        let log_k = self.normalization.ln();
        match &self.representation {
            Representation::SineTail { half_width, core } => {
                Ok(sine_tail_log_abs(*half_width, core, Some(n), z) + log_k)
            }
            Representation::SymmetricProduct { .. } => match self.eval_without(n, z) {
                Ok(v) => Ok(v.re.abs().ln()),
                Err(Error::NumericFailure { log_value: Some(v), .. }) => Ok(v + log_k),
                Err(e) => Err(e),
            },
        }
    }
}

/// `1 - z/lambda`, or `z` for the zero node.
#[inline]
fn product_factor(lambda: f64, z: Complex64) -> Complex64 {
    if lambda == 0.0 {
        z
    } else {
        Complex64::new(1.0, 0.0) - z / lambda
    }
}

fn product_value(nodes: &IndexedSequence, skip: Option<i64>, z: Complex64) -> Result<Complex64> {
    let mut direct = Complex64::new(1.0, 0.0);
    let mut log_re = CompensatedSum::new();
    let mut log_im = CompensatedSum::new();
    for (n, l) in nodes.iter() {
        if Some(n) == skip {
            // (1 - z/l) = -(z - l)/l
            if l != 0.0 {
                direct *= -1.0 / l;
            }
            continue;
        }
        let f = product_factor(l, z);
        if (z - l).norm() < DIRECT_RADIUS {
            direct *= f;
        } else {
            let lf = f.ln();
            log_re.add(lf.re);
            log_im.add(lf.im);
        }
    }
    let log_sum = Complex64::new(log_re.value(), log_im.value());
    if log_sum.re > 709.0 {
        return Err(Error::NumericFailure {
            message: format!("product overflows at z = {z}"),
            log_value: Some(log_sum.re + direct.norm().ln()),
        });
    }
    Ok(log_sum.exp() * direct)
}

/// `log|sine_tail_value(..)|` with the ratio accumulated as a log sum.
fn sine_tail_log_abs(half_width: i64, core: &[f64], skip: Option<i64>, z: Complex64) -> f64 {
    let mi = z.re.round() as i64;
    let w = z - mi as f64;
    let mut sum = CompensatedSum::new();
    sum.add(sinc_complex(w).norm().ln());
    if skip != Some(mi) {
        if mi.abs() <= half_width {
            sum.add((z - core[(mi + half_width) as usize]).norm().ln());
        } else {
            sum.add(w.norm().ln());
        }
    }
    if let Some(k) = skip {
        if k != mi && k.abs() > half_width {
            sum.add(-(z - k as f64).norm().ln());
        }
    }
    for (j, &l) in (-half_width..=half_width).zip(core.iter()) {
        if j == mi {
            continue;
        }
        if Some(j) == skip {
            sum.add(-(z - j as f64).norm().ln());
        } else {
            sum.add((z - l).norm().ln() - (z - j as f64).norm().ln());
        }
    }
    sum.value()
}

/// `sin(pi z)/pi * prod_{|j| <= N} (z - lambda_j)/(z - j)`, optionally
/// divided by `z - lambda_skip`. The factor pair that is singular at the
/// nearest integer `m` is cancelled analytically, so the value is exactly
/// zero at every node and regular at every integer.
fn sine_tail_value(half_width: i64, core: &[f64], skip: Option<i64>, z: Complex64) -> Complex64 {
    let m = z.re.round();
    let mi = m as i64;
    let w = z - m;
    // sin(pi z) / (pi (z - m))
    let mut acc = sinc_complex(w) * parity(mi);
    if skip != Some(mi) {
        if mi.abs() <= half_width {
            acc *= z - core[(mi + half_width) as usize];
        } else {
            acc *= w;
        }
    }
    if let Some(k) = skip {
        if k != mi && k.abs() > half_width {
            acc /= z - k as f64;
        }
    }
    let mut ratio = Complex64::new(1.0, 0.0);
    for (j, &l) in (-half_width..=half_width).zip(core.iter()) {
        if j == mi {
            continue;
        }
        if Some(j) == skip {
            ratio /= z - j as f64;
        } else {
            ratio *= (z - l) / (z - j as f64);
        }
    }
    acc * ratio
}
