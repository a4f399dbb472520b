use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::muckenhoupt::SignedCriticalSequence;
use crate::sequence::IndexedSequence;

/// Prescribed critical values `c_n` on `[-N, N]`, constant modulus
/// `tail_value` outside, and solver controls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthesisProblem {
    pub targets: SignedCriticalSequence,
    #[serde(default = "default_tail_value")]
    pub tail_value: f64,
    /// Extra gaps `K` matched to `tail_value` on each side of the target
    /// window; the unknowns are the core nodes on `[-(N+K), N+K]`.
    #[serde(default = "default_padding")]
    pub padding: usize,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Stop once the sum of squared log-tip errors is at most this.
    #[serde(default = "default_residual_tol")]
    pub residual_tol: f64,
    /// Stop once the max-norm of an accepted step is at most this.
    #[serde(default = "default_step_tol")]
    pub step_tol: f64,
    /// Forward-difference step of the Jacobian.
    #[serde(default = "default_fd_step")]
    pub fd_step: f64,
}

fn default_tail_value() -> f64 {
    1.0 / PI
}
fn default_padding() -> usize {
    4
}
fn default_max_iter() -> usize {
    200
}
fn default_residual_tol() -> f64 {
    1e-10
}
fn default_step_tol() -> f64 {
    1e-12
}
fn default_fd_step() -> f64 {
    1e-6
}

/// Outcome of [`synthesize`]: the nodes on `[-(N+K+1), N+K+1]` (the solved
/// core plus the fixed tail node on each side; integers beyond), the
/// critical values actually attained on `[-N, N]`, and the final sum of
/// squared log-tip errors over the padded window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Synthesis {
    pub nodes: IndexedSequence,
    pub achieved: SignedCriticalSequence,
    pub residual: f64,
    pub iterations: usize,
    #[serde(skip)]
    pub converged: bool,
    #[serde(skip)]
    pub function: GeneratingFunction,
}

impl SynthesisProblem {
    pub fn new(targets: SignedCriticalSequence) -> Result<Self> {
        let p = Self {
            targets,
            tail_value: default_tail_value(),
            padding: default_padding(),
            max_iter: default_max_iter(),
            residual_tol: default_residual_tol(),
            step_tol: default_step_tol(),
            fd_step: default_fd_step(),
        };
        p.validate()?;
        Ok(p)
    }

    /// `N` for targets on `[-N, N]`.
    pub fn half_width(&self) -> i64 {
        self.targets.n_max()
    }

    pub fn validate(&self) -> Result<()> {
        let t = &self.targets;
        if t.n_min() != -t.n_max() {
            return Err(Error::invalid(format!(
                "targets must be indexed on a symmetric window [-N, N], got [{}, {}]",
                t.n_min(),
                t.n_max()
            )));
        }
        t.log_moduli()?;
        if !(self.tail_value > 0.0) || !self.tail_value.is_finite() {
            return Err(Error::invalid(format!("tail_value = {} must be positive", self.tail_value)));
        }
        for (name, v) in [
            ("residual_tol", self.residual_tol),
            ("step_tol", self.step_tol),
            ("fd_step", self.fd_step),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::invalid(format!("{name} = {v} must be positive")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        Ok(())
    }
}

struct Model<'a> {
    problem: &'a SynthesisProblem,
    /// Half-width `N + K` of the unknown core.
    m: i64,
    target_logs: Vec<f64>,
    scale: f64,
}

impl Model<'_> {
    fn admissible(&self, x: &[f64]) -> bool {
        let m = self.m as f64;
        x.iter().all(|v| v.is_finite())
            && x[0] > -m - 1.0
            && x[x.len() - 1] < m + 1.0
            && x.windows(2).all(|w| w[0] < w[1])
    }

    fn function(&self, x: &[f64]) -> Result<GeneratingFunction> {
        GeneratingFunction::sine_tail(x.to_vec())?.with_normalization(self.scale)
    }

    fn residuals(&self, x: &[f64]) -> Result<DVector<f64>> {
        let crit = self.function(x)?.critical_data(-self.m, self.m)?;
        let logs = crit.values.log_moduli()?;
        Ok(DVector::from_iterator(
            logs.len(),
            logs.iter().zip(&self.target_logs).map(|(a, t)| a - t),
        ))
    }

    fn jacobian(&self, x: &[f64], r0: &DVector<f64>) -> Result<DMatrix<f64>> {
        let h = self.problem.fd_step;
        let cols = (0..x.len())
            .into_par_iter()
            .map(|j| {
                let mut xp = x.to_vec();
                xp[j] += h;
                let (xp, sign) = if self.admissible(&xp) {
                    (xp, 1.0)
                } else {
                    xp[j] = x[j] - h;
                    (xp, -1.0)
                };
                let r = self.residuals(&xp)?;
                Ok((r - r0) * (sign / h))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_columns(&cols))
    }

    fn finish(&self, x: Vec<f64>, residual: f64, iterations: usize, converged: bool) -> Result<Synthesis> {
        let n = self.problem.half_width();
        let function = self.function(&x)?;
        let achieved = function.critical_data(-n, n)?.values;
        let m = self.m as f64;
        let nodes = std::iter::once(-m - 1.0).chain(x).chain(std::iter::once(m + 1.0)).collect();
        Ok(Synthesis {
            nodes: IndexedSequence::new(-self.m - 1, nodes)?,
            achieved,
            residual,
            iterations,
            converged,
            function,
        })
    }
}

/// Finds core nodes whose sine-tail generating function, scaled so that far
/// tail critical values have modulus `tail_value`, attains the target
/// critical values. Damped Gauss–Newton (Levenberg–Marquardt) on log-moduli,
/// started from the integers.
pub fn synthesize(problem: &SynthesisProblem) -> Result<Synthesis> {
    problem.validate()?;
    let n = problem.half_width();
    let m = n + problem.padding as i64;
    let tail_log = problem.tail_value.ln();
    let inner = problem.targets.log_moduli()?;
    let target_logs = (-m..=m)
        .map(|k| if k.abs() <= n { inner[(k + n) as usize] } else { tail_log })
        .collect();
    let model = Model {
        problem,
        m,
        target_logs,
        scale: problem.tail_value * PI,
    };

    let mut x: Vec<f64> = (-m..=m).map(|k| k as f64).collect();
    let mut r = model.residuals(&x)?;
    let mut cost = r.norm_squared();
    let mut mu = 0.0;
    let mut iterations = 0;

    while cost > problem.residual_tol && iterations < problem.max_iter {
        iterations += 1;
        let jac = model.jacobian(&x, &r)?;
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * &r;
        let diag_max = jtj.diagonal().max();
        if mu == 0.0 {
            mu = 1e-6 * diag_max;
        }

        let mut accepted = None;
        let mut ordering_failures = 0;
        for _ in 0..60 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += mu;
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                mu = (mu * 10.0).max(1e-12 * diag_max);
                continue;
            };
            let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            if !model.admissible(&cand) {
                ordering_failures += 1;
                mu *= 10.0;
                continue;
            }
            let rc = match model.residuals(&cand) {
                Ok(rc) => rc,
                Err(e) if e.is_invalid_input() => return Err(e),
                Err(_) => {
                    mu *= 10.0;
                    continue;
                }
            };
            let cc = rc.norm_squared();
            if cc < cost {
                accepted = Some((cand, rc, cc, step.amax()));
                mu = (mu / 10.0).max(1e-15 * diag_max);
                break;
            }
            mu *= 10.0;
        }

        match accepted {
            Some((cand, rc, cc, step_norm)) => {
                x = cand;
                r = rc;
                cost = cc;
                if step_norm <= problem.step_tol {
                    break;
                }
            }
            None if ordering_failures == 60 => {
                return Err(Error::SolverDiverged(format!(
                    "no damped step keeps the nodes ordered at iteration {iterations}"
                )));
            }
            None => break,
        }
    }

    let converged = cost <= problem.residual_tol;
    let result = model.finish(x, cost, iterations, converged)?;
    if converged {
        Ok(result)
    } else {
        Err(Error::NotConverged { best: Box::new(result) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn flat(n: i64, v: f64) -> SignedCriticalSequence {
        SignedCriticalSequence::from_moduli(-n, &vec![v; (2 * n + 1) as usize]).unwrap()
    }

    #[test]
    fn flat_targets_give_integers() {
        for n in [0, 3, 8] {
            let s = synthesize(&SynthesisProblem::new(flat(n, 1.0 / PI)).unwrap()).unwrap();
            assert!(s.residual <= 1e-12);
            for (k, v) in s.nodes.iter() {
                assert!((v - k as f64).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn round_trip_random_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let n = 8;
        let moduli: Vec<f64> = (-n..=n)
            .map(|_| (1.0 / PI) * rng.gen_range(-0.5_f64..0.5).exp())
            .collect();
        let targets = SignedCriticalSequence::from_moduli(-n, &moduli).unwrap();
        let s = synthesize(&SynthesisProblem::new(targets.clone()).unwrap()).unwrap();
        assert!(s.converged && s.residual <= 1e-10);
        let again = s.function.critical_data(-n, n).unwrap();
        for (a, t) in again.values.values().iter().zip(targets.values()) {
            assert!((a.abs().ln() - t.abs().ln()).abs() < 1e-6);
        }
    }

    #[test]
    fn scaled_tail() {
        let p = SynthesisProblem {
            tail_value: 2.0,
            ..SynthesisProblem::new(flat(2, 2.0)).unwrap()
        };
        let s = synthesize(&p).unwrap();
        for (k, v) in s.nodes.iter() {
            assert!((v - k as f64).abs() < 1e-8);
        }
        assert!((s.function.normalization() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn invalid_problems() {
        let asym = SignedCriticalSequence::from_moduli(-1, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(SynthesisProblem::new(asym).unwrap_err().is_invalid_input());
        let zero = SignedCriticalSequence::new(-1, vec![-1.0, 0.0, -1.0]).unwrap();
        assert!(SynthesisProblem::new(zero).unwrap_err().is_invalid_input());
        assert!(SignedCriticalSequence::new(-1, vec![1.0, 1.0, 1.0]).unwrap_err().is_invalid_input());
        let mut p = SynthesisProblem::new(flat(1, 0.3)).unwrap();
        p.tail_value = -1.0;
        assert!(synthesize(&p).unwrap_err().is_invalid_input());
    }

    #[test]
    fn iteration_budget_reports_best() {
        let moduli: Vec<f64> = (-3..=3).map(|k| 0.3 + 0.05 * k as f64).collect();
        let mut p = SynthesisProblem::new(SignedCriticalSequence::from_moduli(-3, &moduli).unwrap()).unwrap();
        p.max_iter = 1;
        match synthesize(&p) {
            Err(Error::NotConverged { best }) => {
                assert_eq!(best.iterations, 1);
                assert!(!best.converged);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn json_contract() {
        let s = synthesize(&SynthesisProblem::new(flat(1, 1.0 / PI)).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&s).unwrap();
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["achieved", "iterations", "nodes", "residual"]);
    }
}
