use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;
use crate::muckenhoupt::{discrete_ratio, MuckenhouptReport, PositiveSequence};
use crate::sequence::{density, separation, DensityReport, IndexedSequence, SeparationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    ConsistentWithCis,
    FailsSeparation,
    FailsDensity,
    A2UnboundedTrend,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Longest window of the discrete scan; `None` scans every window.
    pub window_cap: Option<usize>,
    /// Largest accepted `|D+- - 1|`.
    pub density_tol: f64,
    /// Verdict `A2_UNBOUNDED_TREND` when the ratio on the whole window
    /// exceeds the ratio on the centred half window by more than this factor.
    pub growth_threshold: f64,
    /// Smallest gap regarded as separated.
    pub min_separation: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            window_cap: None,
            density_tol: 0.1,
            growth_threshold: 1.25,
            min_separation: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub separated: bool,
    pub separation: SeparationReport,
    pub a2_report: MuckenhouptReport,
    /// Ratio on the whole window over the ratio on the centred half window.
    pub a2_growth: f64,
    pub densities: DensityReport,
    pub sine_tail: bool,
    pub verdict: Verdict,
}

/// Desk-scale certificate for a finite window of nodes: separation, density
/// at `r = span/4`, and the discrete `(A_2)` ratio of `d_n = |F'(lambda_n)|^2`
/// with its trend under window doubling.
pub fn certify(nodes: &IndexedSequence, opts: &CertifyOptions) -> Result<CertifyReport> {
    if nodes.len() < 4 {
        return Err(Error::invalid("certify needs at least 4 nodes"));
    }
    let f = GeneratingFunction::from_window(nodes)?;
    let (sep, dens, d) = {
        let (sep, (dens, d)) = rayon::join(
            || separation(nodes),
            || {
                rayon::join(
                    || density(nodes, nodes.span() / 4.0),
                    || derivative_weights(&f, nodes.n_min(), nodes.n_max()),
                )
            },
        );
        (sep, dens?, d?)
    };

    let cap = opts.window_cap.unwrap_or(d.len()).min(d.len());
    let sub_len = (d.len() / 2).max(1);
    let lo = d.n_min() + ((d.len() - sub_len) / 2) as i64;
    let sub = d.slice(lo, lo + sub_len as i64 - 1)?;
    let (full, half) = rayon::join(
        || discrete_ratio(&d, 2.0, cap),
        || discrete_ratio(&sub, 2.0, cap.min(sub_len)),
    );
    let (full, half) = (full?, half?);
    let growth = full.max_ratio / half.max_ratio;

    let separated = sep.delta >= opts.min_separation;
    let dense = (dens.d_plus - 1.0).abs() <= opts.density_tol && (dens.d_minus - 1.0).abs() <= opts.density_tol;
    let verdict = if !separated {
        Verdict::FailsSeparation
    } else if !dense {
        Verdict::FailsDensity
    } else if growth > opts.growth_threshold {
        Verdict::A2UnboundedTrend
    } else {
        Verdict::ConsistentWithCis
    };
    Ok(CertifyReport {
        separated,
        separation: sep,
        a2_report: full,
        a2_growth: growth,
        densities: dens,
        sine_tail: f.is_sine_tail(),
        verdict,
    })
}

/// `|F'(lambda_n)|^2` up to a common factor, centred in log scale so that
/// windows whose raw weights overflow still give finite ratios.
fn derivative_weights(f: &GeneratingFunction, lo: i64, hi: i64) -> Result<PositiveSequence> {
    let logs = (lo..=hi)
        .into_par_iter()
        .map(|n| f.log_abs_derivative_at(n))
        .collect::<Result<Vec<_>>>()?;
    let (min, max) = logs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if max - min > 700.0 {
        return Err(Error::NumericFailure {
            message: format!("|F'| spans {:.0} decades on the window", (max - min) / std::f64::consts::LN_10),
            log_value: Some(max),
        });
    }
    let mid = 0.5 * (min + max);
    PositiveSequence::new(lo, logs.iter().map(|v| (2.0 * (v - mid)).exp()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(nodes: IndexedSequence) -> CertifyReport {
        certify(&nodes, &CertifyOptions::default()).unwrap()
    }

    #[test]
    fn integers_are_consistent() {
        let r = run(IndexedSequence::integers(-200, 200).unwrap());
        assert_eq!(r.verdict, Verdict::ConsistentWithCis);
        assert!((r.a2_report.max_ratio - 1.0).abs() < 1e-12);
        assert!((r.densities.d_plus - 1.0).abs() < 0.02);
        assert!(r.sine_tail);
    }

    #[test]
    fn sparse_lattice_fails_density() {
        let r = run(IndexedSequence::from_fn(-100, 100, |n| 2.0 * n as f64).unwrap());
        assert_eq!(r.verdict, Verdict::FailsDensity);
        assert!(!r.sine_tail);
    }

    #[test]
    fn overflowing_weights_still_certify() {
        let r = run(IndexedSequence::from_fn(-300, 300, |n| 2.0 * n as f64).unwrap());
        assert_eq!(r.verdict, Verdict::FailsDensity);
        assert!(r.a2_report.max_ratio > 1e100);
    }

    #[test]
    fn kadets_regime_is_consistent() {
        let r = run(IndexedSequence::from_fn(-200, 200, |n| n as f64 + 0.2 * if n % 2 == 0 { 1.0 } else { -1.0 }).unwrap());
        assert_eq!(r.verdict, Verdict::ConsistentWithCis, "{r:?}");
    }

    #[test]
    fn near_collision_fails_separation() {
        let mut v: Vec<f64> = (-20..=20).map(|n| n as f64).collect();
        v[20] = v[19] + 1e-9;
        let r = run(IndexedSequence::new(-20, v).unwrap());
        assert_eq!(r.verdict, Verdict::FailsSeparation);
    }

    #[test]
    fn verdict_names() {
        assert_eq!(serde_json::to_string(&Verdict::ConsistentWithCis).unwrap(), "\"CONSISTENT_WITH_CIS\"");
        assert_eq!(serde_json::to_string(&Verdict::A2UnboundedTrend).unwrap(), "\"A2_UNBOUNDED_TREND\"");
    }
}
