use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GeneratingFunction;
use crate::error::{Error, Result};
use crate::muckenhoupt::{grid, WeightFunction};
use crate::numeric::quadrature::{integrate_with_breaks, QuadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBounds {
    pub min: f64,
    pub max: f64,
}

/// `w(x) = |F(x + iy)|^2` on a horizontal line `y != 0`.
#[derive(Debug, Clone)]
pub struct WeightTrace {
    f: GeneratingFunction,
    y: f64,
}

impl WeightTrace {
    pub fn new(f: GeneratingFunction, y: f64) -> Result<Self> {
        if y == 0.0 || !y.is_finite() {
            return Err(Error::invalid("weight trace needs a finite offset y != 0"));
        }
        Ok(Self { f, y })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn function(&self) -> &GeneratingFunction {
        &self.f
    }
}

impl WeightFunction for WeightTrace {
    fn weight(&self, x: f64) -> f64 {
        match self.f.eval(Complex64::new(x, self.y)) {
            Ok(v) => v.norm_sqr(),
            Err(_) => f64::NAN,
        }
    }

    fn breaks(&self, a: f64, b: f64) -> Vec<f64> {
        // One subinterval per node spacing keeps oscillation resolved.
        self.f
            .node_indices_in(a, b)
            .into_iter()
            .filter_map(|n| self.f.node(n))
            .collect()
    }
}

impl GeneratingFunction {
    /// `int_{-T}^{T} log+|F(t)| / (1 + t^2) dt` (relative tolerance 1e-8).
    pub fn cartwright_integral(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid("Cartwright cutoff T must be positive"));
        }
        let breaks: Vec<f64> = self
            .node_indices_in(-t, t)
            .into_iter()
            .filter_map(|n| self.node(n))
            .collect();
        let integrand = |x: f64| {
            let near_zero = {
                let k = breaks.partition_point(|&b| b < x);
                let left = k.checked_sub(1).map(|i| x - breaks[i]).unwrap_or(f64::INFINITY);
                let right = breaks.get(k).map(|b| b - x).unwrap_or(f64::INFINITY);
                left.min(right) < 1e-9
            };
            if near_zero {
                return 0.0;
            }
            match self.log_eval(Complex64::new(x, 0.0)) {
                Ok(l) if l.re > 0.0 => l.re / (1.0 + x * x),
                Ok(_) => 0.0,
                Err(_) => f64::NAN,
            }
        };
        Ok(integrate_with_breaks(integrand, -t, t, &breaks, &QuadOptions::with_rel_tol(1e-8))?.value)
    }

    /// `(x, |F(x + iy)|)` on the grid `x0, x0 + step, ..., <= x1`.
    pub fn line_scan(&self, y: f64, x_range: (f64, f64), step: f64) -> Result<Vec<(f64, f64)>> {
        if y == 0.0 {
            return Err(Error::invalid("line offset y must be nonzero"));
        }
        if !(step > 0.0) || !(x_range.1 >= x_range.0) {
            return Err(Error::invalid("need step > 0 and x_min <= x_max"));
        }
        grid(x_range.0, x_range.1, step)
            .into_par_iter()
            .map(|x| Ok((x, self.eval(Complex64::new(x, y))?.norm())))
            .collect()
    }

    /// Minimum and maximum of `|F(x + iy)|` over the sampled grid.
    pub fn line_modulus_bounds(&self, y: f64, x_range: (f64, f64), step: f64) -> Result<LineBounds> {
        let samples = self.line_scan(y, x_range, step)?;
        let (min, max) = samples
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &(_, v)| (lo.min(v), hi.max(v)));
        Ok(LineBounds { min, max })
    }

    /// `log|F(iR)| / R` for each `R`; tends to the exponential type.
    pub fn type_estimate(&self, radii: &[f64]) -> Result<Vec<f64>> {
        if radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::invalid("radii must be positive"));
        }
        if radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("radii must be increasing"));
        }
        radii
            .iter()
            .map(|&r| Ok(self.log_eval(Complex64::new(0.0, r))?.re / r))
            .collect()
    }
}
