use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::GeneratingFunction;

/// Largest accepted `|psi(z) dz|` per continuation step.
const MAX_PHASE_STEP: f64 = 0.5;
/// Largest accepted mismatch between the predicted and the re-branched
/// imaginary part after one step.
const BRANCH_SLACK: f64 = 0.1;
const TRACE_SAMPLES: usize = 256;

/// `phi = log F` on the closed lower half-plane, continued from an anchor
/// where the branch is pinned.
#[derive(Debug, Clone)]
pub struct BranchTrackedLog {
    f: GeneratingFunction,
    anchor: Complex64,
    anchor_phi: Complex64,
}

/// One gap of a boundary trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapTrace {
    pub gap: i64,
    /// `Im phi` at the maximiser of `Re phi`.
    pub im_level: f64,
    /// `max |Im phi - im_level|` over the central half of the gap.
    pub deviation: f64,
    pub re_max: f64,
    pub argmax: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSample {
    pub gap: i64,
    pub x: f64,
    pub re_phi: f64,
    pub im_phi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub eps: f64,
    pub gaps: Vec<GapTrace>,
    pub samples: Vec<TraceSample>,
}

impl BoundaryTrace {
    /// Rows `gap,x,re_phi,im_phi` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("gap,x,re_phi,im_phi\n");
        for s in &self.samples {
            out.push_str(&format!("{},{:?},{:?},{:?}\n", s.gap, s.x, s.re_phi, s.im_phi));
        }
        out
    }
}

fn wrap_principal(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Continuation state: a point and the value of `phi` there.
#[derive(Debug, Clone, Copy)]
struct Tracker<'a> {
    f: &'a GeneratingFunction,
    z: Complex64,
    phi: Complex64,
}

impl Tracker<'_> {
    fn log_at(&self, z: Complex64) -> Result<Complex64> {
        let l = self.f.log_eval(z)?;
        if l.re == f64::NEG_INFINITY {
            return Err(Error::Pole(format!("path meets the zero z = {z}")));
        }
        if !(l.re.is_finite() && l.im.is_finite()) {
            return Err(Error::numeric(format!("log F not finite at z = {z}")));
        }
        Ok(l)
    }

    /// Continues `phi` along the segment from the current point to `target`.
    fn advance(&mut self, target: Complex64) -> Result<()> {
        if self.z.im == 0.0 && target.im == 0.0 {
            let (a, b) = (self.z.re.min(target.re), self.z.re.max(target.re));
            if let Some(n) = self.f.node_indices_in(a, b).first() {
                return Err(Error::Pole(format!("real segment [{a}, {b}] crosses zero {n}")));
            }
        }
        if target.im == 0.0 {
            if let Some(n) = self.f.node_indices_in(target.re, target.re).first() {
                return Err(Error::Pole(format!("z = {target} is the zero {n}")));
            }
        }
        let mut psi = self.f.eval_log_derivative(self.z)?;
        let mut h = f64::INFINITY;
        while self.z != target {
            let remaining = target - self.z;
            let dist = remaining.norm();
            let dir = remaining / dist;
            h = h.min(MAX_PHASE_STEP / psi.norm().max(1e-300)).min(dist);
            loop {
                if h <= 1e-15 * (1.0 + self.z.norm()) {
                    return Err(Error::numeric(format!(
                        "branch continuation stalled near z = {}",
                        self.z
                    )));
                }
                let last = h >= dist;
                let z1 = if last { target } else { self.z + dir * h };
                let dz = z1 - self.z;
                let psi_mid = self.f.eval_log_derivative(self.z + dz * 0.5)?;
                if (psi_mid * dz).norm() > MAX_PHASE_STEP {
                    h *= 0.5;
                    continue;
                }
                let predicted = self.phi + psi_mid * dz;
                let l = self.log_at(z1)?;
                let turns = ((predicted.im - l.im) / (2.0 * PI)).round();
                let im = l.im + 2.0 * PI * turns;
                if (im - predicted.im).abs() > BRANCH_SLACK {
                    h *= 0.5;
                    continue;
                }
                self.z = z1;
                self.phi = Complex64::new(l.re, im);
                if !last {
                    psi = self.f.eval_log_derivative(z1)?;
                }
                h *= 2.0;
                break;
            }
        }
        Ok(())
    }
}

impl BranchTrackedLog {
    /// Anchor `-i`.
    pub fn new(f: GeneratingFunction) -> Result<Self> {
        Self::with_anchor(f, Complex64::new(0.0, -1.0))
    }

    /// Pins `Im phi(anchor)` in `(-pi, pi]`; the anchor must lie in the open
    /// lower half-plane.
    pub fn with_anchor(f: GeneratingFunction, anchor: Complex64) -> Result<Self> {
        if !(anchor.im < 0.0) || !anchor.re.is_finite() || !anchor.im.is_finite() {
            return Err(Error::invalid(format!(
                "anchor {anchor} must lie in the open lower half-plane"
            )));
        }
        let l = f.log_eval(anchor)?;
        if !(l.re.is_finite() && l.im.is_finite()) {
            return Err(Error::numeric(format!("log F not finite at the anchor {anchor}")));
        }
        let anchor_phi = Complex64::new(l.re, wrap_principal(l.im));
        Ok(Self { f, anchor, anchor_phi })
    }

    pub fn function(&self) -> &GeneratingFunction {
        &self.f
    }

    pub fn anchor(&self) -> Complex64 {
        self.anchor
    }

    pub fn anchor_phi(&self) -> Complex64 {
        self.anchor_phi
    }

    fn tracker(&self) -> Tracker<'_> {
        Tracker {
            f: &self.f,
            z: self.anchor,
            phi: self.anchor_phi,
        }
    }

    fn check_lower(z: Complex64) -> Result<()> {
        if !(z.im <= 0.0) || !z.re.is_finite() {
            return Err(Error::invalid(format!(
                "phi is only tracked on the closed lower half-plane, got z = {z}"
            )));
        }
        Ok(())
    }

    /// `phi(z)` continued along the straight segment from the anchor.
    pub fn phi_eval(&self, z: Complex64) -> Result<Complex64> {
        self.phi_eval_along(&[z])
    }

    /// `phi` continued along the polyline anchor, `path[0]`, ...; returns the
    /// value at the last vertex.
    pub fn phi_eval_along(&self, path: &[Complex64]) -> Result<Complex64> {
        if path.is_empty() {
            return Err(Error::invalid("empty continuation path"));
        }
        let mut t = self.tracker();
        for &v in path {
            Self::check_lower(v)?;
            t.advance(v)?;
        }
        Ok(t.phi)
    }

    /// Traces `phi` along `(lambda_{n-1} + eps, lambda_n - eps) - i eps` for
    /// the gaps `lo..=hi`, continuing the branch from the anchor.
    pub fn boundary_trace(&self, eps: f64, lo: i64, hi: i64) -> Result<BoundaryTrace> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::invalid(format!("eps = {eps} must be positive")));
        }
        if hi < lo {
            return Err(Error::invalid(format!("empty gap range [{lo}, {hi}]")));
        }
        let node = |n: i64| {
            self.f
                .node(n)
                .ok_or_else(|| Error::invalid(format!("gap {} is outside the available nodes", n.max(lo))))
        };
        let y = Complex64::new(0.0, -eps);
        let mut t = self.tracker();
        let mut gaps = Vec::with_capacity((hi - lo + 1) as usize);
        let mut samples = Vec::with_capacity(gaps.capacity() * TRACE_SAMPLES);

        for n in lo..=hi {
            let (a, b) = (node(n - 1)?, node(n)?);
            let width = b - a;
            if 2.0 * eps >= width {
                return Err(Error::invalid(format!(
                    "eps = {eps} is not below half the width {width} of gap {n}"
                )));
            }
            let (x0, x1) = (a + eps, b - eps);
            let step = (x1 - x0) / (TRACE_SAMPLES - 1) as f64;
            let mut pts = Vec::with_capacity(TRACE_SAMPLES);
            for j in 0..TRACE_SAMPLES {
                let x = if j + 1 == TRACE_SAMPLES { x1 } else { x0 + j as f64 * step };
                t.advance(x + y)?;
                pts.push((x, t.phi));
            }

            let best = (0..pts.len())
                .max_by(|&i, &j| pts[i].1.re.total_cmp(&pts[j].1.re))
                .expect("samples");
            let argmax = self.refine_max(&pts, best, eps)?;
            let mut at_max = Tracker { f: &self.f, z: pts[best].0 + y, phi: pts[best].1 };
            at_max.advance(argmax + y)?;
            let level = at_max.phi.im;
            let (c0, c1) = (a + 0.25 * width, b - 0.25 * width);
            let deviation = pts
                .iter()
                .filter(|(x, _)| *x >= c0 && *x <= c1)
                .map(|(_, p)| (p.im - level).abs())
                .fold(0.0_f64, f64::max);
            gaps.push(GapTrace {
                gap: n,
                im_level: level,
                deviation,
                re_max: at_max.phi.re,
                argmax,
            });
            samples.extend(pts.into_iter().map(|(x, p)| TraceSample {
                gap: n,
                x,
                re_phi: p.re,
                im_phi: p.im,
            }));
        }
        Ok(BoundaryTrace { eps, gaps, samples })
    }

    /// Zero of `d/dx Re phi(x - i eps) = Re psi(x - i eps)` bracketed by the
    /// neighbours of the best sample; falls back to the sample itself.
    fn refine_max(&self, pts: &[(f64, Complex64)], best: usize, eps: f64) -> Result<f64> {
        let slope = |x: f64| -> Result<f64> {
            Ok(self.f.eval_log_derivative(Complex64::new(x, -eps))?.re)
        };
        let lo = pts[best.saturating_sub(1)].0;
        let hi = pts[(best + 1).min(pts.len() - 1)].0;
        let (mut a, mut b) = (lo, hi);
        if !(slope(a)? > 0.0 && slope(b)? < 0.0) {
            return Ok(pts[best].0);
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let s = slope(m)?;
            if s > 0.0 {
                a = m;
            } else if s < 0.0 {
                b = m;
            } else {
                return Ok(m);
            }
        }
        Ok(0.5 * (a + b))
    }
}
