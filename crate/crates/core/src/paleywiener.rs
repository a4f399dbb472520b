//! Interpolation `f(lambda_n) = a_n` in `PW^2_pi` by the Lagrange series of
//! a generating function, and finite-section Riesz bounds of the exponential
//! system `{e^{i lambda_n t}}` in `L^2(-pi, pi)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::numeric::quadrature::{integrate_with_breaks, QuadOptions};
use crate::numeric::{complex_sum, sin_pi, CompensatedSum};
use crate::sequence::IndexedSequence;

/// Below this distance to a node the Lagrange term is evaluated with the
/// node's factor removed.
const REMOVABLE_RADIUS: f64 = 1e-8;
/// Below this node difference the Gram entry uses its Taylor series.
const GRAM_SERIES_RADIUS: f64 = 1e-6;

/// Nodes, data aligned to them, and a generating function vanishing at the
/// nodes.
#[derive(Debug, Clone)]
pub struct InterpolationProblem {
    nodes: IndexedSequence,
    data: Vec<Complex64>,
    f: GeneratingFunction,
    derivatives: Vec<f64>,
}

impl InterpolationProblem {
    /// Uses the sine-tail generating function when the window allows it,
    /// else the symmetric product over the window.
    pub fn new(nodes: IndexedSequence, data: Vec<Complex64>) -> Result<Self> {
        let f = GeneratingFunction::from_window(&nodes)?;
        Self::with_function(nodes, data, f)
    }

    pub fn with_function(nodes: IndexedSequence, data: Vec<Complex64>, f: GeneratingFunction) -> Result<Self> {
        if data.len() != nodes.len() {
            return Err(Error::invalid(format!(
                "{} data values for {} nodes",
                data.len(),
                nodes.len()
            )));
        }
        if let Some(k) = data.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::invalid(format!("data value {} is not finite", nodes.n_min() + k as i64)));
        }
        for (n, l) in nodes.iter() {
            if f.node(n) != Some(l) {
                return Err(Error::invalid(format!(
                    "generating function has no zero at node {n} = {l}"
                )));
            }
        }
        let derivatives = nodes
            .indices()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|n| {
                let d = f.derivative_at(n)?;
                if d == 0.0 || !d.is_finite() {
                    return Err(Error::numeric(format!("F'(lambda_{n}) = {d}")));
                }
                Ok(d)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            nodes,
            data,
            f,
            derivatives,
        })
    }

    pub fn nodes(&self) -> &IndexedSequence {
        &self.nodes
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn function(&self) -> &GeneratingFunction {
        &self.f
    }

    /// `sum_n a_n F(z) / (F'(lambda_n) (z - lambda_n))` over the window.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let fz = self.f.eval(z)?;
        let terms = self
            .nodes
            .iter()
            .zip(&self.data)
            .zip(&self.derivatives)
            .map(|(((n, l), a), d)| {
                let dz = z - l;
                let kernel = if dz.norm() < REMOVABLE_RADIUS {
                    self.f.eval_without(n, z)?
                } else {
                    fz / dz
                };
                Ok(a * kernel / *d)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(complex_sum(terms))
    }
}

/// `f(z)` for the interpolation problem.
pub fn interpolate_eval(problem: &InterpolationProblem, z: Complex64) -> Result<Complex64> {
    problem.eval(z)
}

/// `G[n][m] = int_{-pi}^{pi} e^{i (lambda_n - lambda_m) t} dt
/// = 2 sin(pi (lambda_n - lambda_m)) / (lambda_n - lambda_m)`, diagonal `2 pi`.
pub fn gram_matrix(nodes: &IndexedSequence) -> DMatrix<f64> {
    let v = nodes.values();
    let n = v.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| (0..n).map(|j| gram_entry(v[i] - v[j])).collect())
        .collect();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

fn gram_entry(d: f64) -> f64 {
    if d == 0.0 {
        return 2.0 * PI;
    }
    if d.abs() < GRAM_SERIES_RADIUS {
        let u = (PI * d) * (PI * d);
        return 2.0 * PI * (1.0 - u / 6.0 + u * u / 120.0);
    }
    2.0 * sin_pi(d) / d
}

/// Extreme eigenvalues of a centred principal Gram submatrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RieszBoundsReport {
    pub size: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Finite-section estimates of the Riesz bounds from the `size` central
/// nodes. A non-positive `lower` is reported as computed.
pub fn riesz_bounds(nodes: &IndexedSequence, size: usize) -> Result<RieszBoundsReport> {
    if size % 2 == 0 || size > nodes.len() {
        return Err(Error::invalid(format!(
            "size = {size} must be odd and at most the {} available nodes",
            nodes.len()
        )));
    }
    let start = nodes.n_min() + ((nodes.len() - size) / 2) as i64;
    let window = if size == nodes.len() {
        nodes.clone()
    } else {
        nodes.slice(start, start + size as i64 - 1)?
    };
    let g = gram_matrix(&window);
    let eig = SymmetricEigen::new(g);
    let (lower, upper) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
    Ok(RieszBoundsReport { size, lower, upper })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormEquivalence {
    pub l2_data: f64,
    pub l2_function: f64,
    /// `l2_data / l2_function`; `NaN` (serialised as `null`) when both vanish.
    pub ratio: f64,
    pub degenerate: bool,
}

/// `sum |a_n|^2` against `int_{-T}^{T} |f|^2` (relative tolerance `1e-6`).
pub fn norm_equivalence_check(problem: &InterpolationProblem, t: f64) -> Result<NormEquivalence> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("T = {t} must be positive")));
    }
    let l2_data: f64 = problem.data.iter().map(|a| a.norm_sqr()).collect::<CompensatedSum>().value();
    if l2_data == 0.0 {
        return Ok(NormEquivalence {
            l2_data,
            l2_function: 0.0,
            ratio: f64::NAN,
            degenerate: true,
        });
    }
    let breaks: Vec<f64> = problem
        .f
        .node_indices_in(-t, t)
        .into_iter()
        .filter_map(|n| problem.f.node(n))
        .collect();
    let err = std::cell::Cell::new(None);
    let integrand = |x: f64| match problem.eval(Complex64::new(x, 0.0)) {
        Ok(v) => v.norm_sqr(),
        Err(e) => {
            if err.take().is_none() {
                err.set(Some(e));
            }
            f64::NAN
        }
    };
    let q = integrate_with_breaks(integrand, -t, t, &breaks, &QuadOptions::with_rel_tol(1e-6));
    if let Some(e) = err.take() {
        return Err(e);
    }
    let l2_function = q?.value;
    Ok(NormEquivalence {
        l2_data,
        l2_function,
        ratio: l2_data / l2_function,
        degenerate: false,
    })
}
