use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use num_complex::Complex64;

use super::GeneratingFunction;
use crate::error::{Error, Result};
use crate::muckenhoupt::{parity, PositiveSequence, SignedCriticalSequence};

/// Critical points `x_n` in `(lambda_{n-1}, lambda_n)` and the critical
/// values `c_n = F(x_n)`, multiplied by one global sign so that
/// `(-1)^n c_n >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub points: Vec<f64>,
    pub values: SignedCriticalSequence,
}

impl CriticalData {
    pub fn n_min(&self) -> i64 {
        self.values.n_min()
    }

    pub fn point(&self, n: i64) -> Option<f64> {
        let k = n - self.n_min();
        (k >= 0 && (k as usize) < self.points.len()).then(|| self.points[k as usize])
    }
}

/// Relative abscissa tolerance of the bisection.
const BISECTION_TOL: f64 = 1e-13;

impl GeneratingFunction {
    /// Gap `n` is `(lambda_{n-1}, lambda_n)`.
    fn gap(&self, n: i64) -> Result<(f64, f64)> {
        match (self.node(n - 1), self.node(n)) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(Error::invalid(format!("gap {n} is outside the available nodes"))),
        }
    }

    /// Unique zero of the log-derivative on gap `n`, which decreases
    /// strictly from `+inf` to `-inf` there.
    pub fn critical_point(&self, n: i64) -> Result<f64> {
        let (a, b) = self.gap(n)?;
        let width = b - a;
        let probe = 1e-10 * width;
        let left = self.log_derivative_real(a + probe)?;
        let right = self.log_derivative_real(b - probe)?;
        if !(left > 0.0 && right < 0.0) {
            return Err(Error::numeric(format!(
                "log-derivative has no sign change on gap {n} ({a}, {b}): {left:e} .. {right:e}"
            )));
        }
        let (mut lo, mut hi) = (a, b);
        for _ in 0..200 {
            if hi - lo <= BISECTION_TOL * width {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = self.log_derivative_real(mid)?;
            if !v.is_finite() {
                return Err(Error::numeric(format!("log-derivative not finite at {mid}")));
            }
            if v > 0.0 {
                lo = mid;
            } else if v < 0.0 {
                hi = mid;
            } else {
                return Ok(mid);
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Critical points and values on gaps `lo..=hi`.
    pub fn critical_data(&self, lo: i64, hi: i64) -> Result<CriticalData> {
        if hi < lo {
            return Err(Error::invalid(format!("empty gap range [{lo}, {hi}]")));
        }
        let found: Vec<(f64, f64)> = (lo..=hi)
            .into_par_iter()
            .map(|n| {
                let x = self.critical_point(n)?;
                let v = self.eval(Complex64::new(x, 0.0))?.re;
                Ok((x, v))
            })
            .collect::<Result<_>>()?;

        let sign = if parity(lo) * found[0].1 >= 0.0 { 1.0 } else { -1.0 };
        let mut points = Vec::with_capacity(found.len());
        let mut values = Vec::with_capacity(found.len());
        for (k, (x, v)) in found.into_iter().enumerate() {
            let n = lo + k as i64;
            let c = sign * v;
            if !(parity(n) * c > 0.0) {
                return Err(Error::numeric(format!(
                    "critical values do not alternate at gap {n} (c = {c:e})"
                )));
            }
            points.push(x);
            values.push(c);
        }
        Ok(CriticalData {
            points,
            values: SignedCriticalSequence::new(lo, values)?,
        })
    }

    /// `d_n = |F'(lambda_n)|^2` for `n` in `lo..=hi`, by factor removal.
    pub fn derivative_at_zeros(&self, lo: i64, hi: i64) -> Result<PositiveSequence> {
        if hi < lo {
            return Err(Error::invalid(format!("empty index range [{lo}, {hi}]")));
        }
        let values = (lo..=hi)
            .into_par_iter()
            .map(|n| self.derivative_at(n).map(|d| d * d))
            .collect::<Result<Vec<_>>>()?;
        PositiveSequence::new(lo, values)
    }

    /// `|F'(lambda_n)| / |c_n|` for `n` in `lo..=hi`.
    pub fn derivative_critical_ratios(&self, lo: i64, hi: i64) -> Result<Vec<f64>> {
        let crit = self.critical_data(lo, hi)?;
        (lo..=hi)
            .zip(crit.values.values())
            .map(|(n, c)| Ok(self.derivative_at(n)?.abs() / c.abs()))
            .collect()
    }
}
