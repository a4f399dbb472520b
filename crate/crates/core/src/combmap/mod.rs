//! Comb domains, the branch-tracked logarithm `phi = log F` that maps the
//! lower half-plane onto them, and the inverse problem of recovering nodes
//! from prescribed critical values.

mod branch;
mod certify;
mod synthesis;

pub use branch::{BoundaryTrace, BranchTrackedLog, GapTrace, TraceSample};
pub use certify::{certify, CertifyOptions, CertifyReport, Verdict};
pub use synthesis::{synthesize, Synthesis, SynthesisProblem};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::muckenhoupt::SignedCriticalSequence;

/// `C` minus the leftward slits `{x + i n pi : x <= log |c_n|}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CombDomain {
    tips: SignedCriticalSequence,
}

impl CombDomain {
    pub fn new(tips: SignedCriticalSequence) -> Result<Self> {
        if let Some(k) = tips.values().iter().position(|&c| c == 0.0) {
            return Err(Error::invalid(format!(
                "comb tip c_{} is zero",
                tips.n_min() + k as i64
            )));
        }
        Ok(Self { tips })
    }

    /// The comb whose tips are the critical values of `f` on gaps `lo..=hi`.
    pub fn of_function(f: &GeneratingFunction, lo: i64, hi: i64) -> Result<Self> {
        Self::new(f.critical_data(lo, hi)?.values)
    }

    pub fn tips(&self) -> &SignedCriticalSequence {
        &self.tips
    }

    /// End point `log |c_n| + i n pi` of slit `n`.
    pub fn tip(&self, n: i64) -> Option<Complex64> {
        self.tips
            .get(n)
            .map(|c| Complex64::new(c.abs().ln(), n as f64 * PI))
    }

    /// `false` on the slits of the stored index range.
    pub fn contains(&self, w: Complex64) -> bool {
        let level = w.im / PI;
        let n = level.round();
        if level != n {
            return true;
        }
        match self.tip(n as i64) {
            Some(t) => w.re > t.re,
            None => true,
        }
    }
}
