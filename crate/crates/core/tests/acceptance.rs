//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits non-zero if any
//! criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use cis::combmap::{synthesize, BranchTrackedLog, SynthesisProblem};
use cis::muckenhoupt::{discrete_ratio, power_law_sequence, ungl_inequality};
use cis::paleywiener::{norm_equivalence_check, riesz_bounds, InterpolationProblem};
use cis::sequence::kadets_check;
use cis::{Complex64, GeneratingFunction, IndexedSequence, SignedCriticalSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    check(took <= limit, format!("{detail}; {:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()))
}

fn sine_oracle(z: Complex64) -> Complex64 {
    (z * PI).sin() / PI
}

fn alternating(d: f64, lo: i64, hi: i64) -> IndexedSequence {
    IndexedSequence::from_fn(lo, hi, |n| n as f64 + d * if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 }).unwrap()
}

fn product_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let product = GeneratingFunction::symmetric_product(&IndexedSequence::integers(-99_999, 99_999).unwrap(), 1e5)
        .map_err(|e| e.to_string())?;
    let tail = GeneratingFunction::sine();
    let (mut worst_p, mut worst_t) = (0.0_f64, 0.0_f64);
    for re in [-1.75, 0.25, 1.5] {
        for im in [-2.0, 0.5, 2.0] {
            let z = Complex64::new(re, im);
            let want = sine_oracle(z);
            let p = product.eval(z).map_err(|e| e.to_string())?;
            let t = tail.eval(z).map_err(|e| e.to_string())?;
            worst_p = worst_p.max((p - want).norm() / want.norm());
            worst_t = worst_t.max((t - want).norm() / want.norm());
        }
    }
    let ok = worst_p <= 1e-3 && worst_t <= 1e-12;
    let detail = format!("product rel err {worst_p:.2e} (<= 1e-3), sine tail {worst_t:.2e} (<= 1e-12)");
    if ok {
        within(Duration::from_secs(5), start, detail)
    } else {
        Err(detail)
    }
}

fn kadets_sharpness() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for d in [0.2, 0.24, 0.25, 0.3] {
        let passes = kadets_check(&alternating(d, -50, 50)).passes;
        ok &= passes == (d < 0.25);
        parts.push(format!("d={d}: {passes}"));
    }
    check(ok, parts.join(", "))
}

fn power_law_trend() -> Outcome {
    let start = Instant::now();
    let ratio = |alpha: f64, lo: i64, hi: i64| -> Result<f64, String> {
        let d = power_law_sequence(alpha, lo, hi).map_err(|e| e.to_string())?;
        Ok(discrete_ratio(&d, 2.0, d.len()).map_err(|e| e.to_string())?.max_ratio)
    };
    let small = ratio(0.25, -2048, 2048)?;
    let large = ratio(0.25, -4096, 4096)?;
    let change = (large / small - 1.0).abs();
    let stable_time = start.elapsed();

    let start = Instant::now();
    let q2 = ratio(0.5, 1, 100)?;
    let q4 = ratio(0.5, 1, 10_000)?;
    let unbounded_time = start.elapsed();
    let limit = Duration::from_secs(10);
    let ok = change <= 0.1 && q4 >= 1.5 * q2 && stable_time <= limit && unbounded_time <= limit;
    check(
        ok,
        format!(
            "alpha=0.25: {small:.6} -> {large:.6} (change {:.2}%, {:.2}s); alpha=0.5: {q2:.4} -> {q4:.4} (x{:.3}, {:.2}s)",
            100.0 * change,
            stable_time.as_secs_f64(),
            q4 / q2,
            unbounded_time.as_secs_f64()
        ),
    )
}

fn sine_critical_data() -> Outcome {
    let cd = GeneratingFunction::sine().critical_data(-50, 50).map_err(|e| e.to_string())?;
    let mut worst_x = 0.0_f64;
    let mut worst_c = 0.0_f64;
    let mut alternating = true;
    for (k, n) in (-50..=50).enumerate() {
        worst_x = worst_x.max((cd.points[k] - (n as f64 - 0.5)).abs());
        let c = cd.values.values()[k];
        worst_c = worst_c.max((c.abs() - 1.0 / PI).abs());
        if k > 0 {
            alternating &= c * cd.values.values()[k - 1] < 0.0;
        }
    }
    check(
        worst_x <= 1e-10 && worst_c <= 1e-10 && alternating,
        format!("max |x_n - (n - 1/2)| = {worst_x:.1e}, max ||c_n| - 1/pi| = {worst_c:.1e}, alternating = {alternating}"),
    )
}

fn derivative_critical_ratio() -> Outcome {
    let r = GeneratingFunction::sine()
        .derivative_critical_ratios(-50, 50)
        .map_err(|e| e.to_string())?;
    let worst = r.iter().map(|v| (v - PI).abs()).fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let core: Vec<f64> = (-8..=8).map(|k| k as f64 + rng.gen_range(-0.2..0.2)).collect();
    let f = GeneratingFunction::sine_tail(core).map_err(|e| e.to_string())?;
    let j = f.derivative_critical_ratios(-12, 12).map_err(|e| e.to_string())?;
    let (lo, hi) = j.iter().fold((f64::INFINITY, 0.0_f64), |(a, b), &v| (a.min(v), b.max(v)));
    check(
        worst <= 1e-10 && hi / lo <= 10.0,
        format!("sine: max |ratio - pi| = {worst:.1e}; jittered: ratio in [{lo:.4}, {hi:.4}], spread {:.3}", hi / lo),
    )
}

fn boundary_correspondence() -> Outcome {
    let eps = 1e-3;
    let l = BranchTrackedLog::new(GeneratingFunction::sine()).map_err(|e| e.to_string())?;
    let tr = l.boundary_trace(eps, -5, 5).map_err(|e| e.to_string())?;
    let step = tr
        .gaps
        .windows(2)
        .map(|w| (w[1].im_level - w[0].im_level - PI).abs())
        .fold(0.0, f64::max);
    let re = tr.gaps.iter().map(|g| (g.re_max + PI.ln()).abs()).fold(0.0, f64::max);
    let arg = tr
        .gaps
        .iter()
        .map(|g| (g.argmax - (g.gap as f64 - 0.5)).abs())
        .fold(0.0, f64::max);
    check(
        step <= 1e-3 * PI && re <= 1e-4 && arg <= 1e-4,
        format!("max level step error {step:.1e}, max |re_max - log(1/pi)| {re:.1e}, max argmax error {arg:.1e}"),
    )
}

fn synthesis_round_trip() -> Outcome {
    let start = Instant::now();
    let n = 8;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let logs: Vec<f64> = (-n..=n).map(|_| -PI.ln() + rng.gen_range(-0.5..0.5)).collect();
    let moduli: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
    let targets = SignedCriticalSequence::from_moduli(-n, &moduli).map_err(|e| e.to_string())?;
    let s = synthesize(&SynthesisProblem::new(targets).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let again = s.function.critical_data(-n, n).map_err(|e| e.to_string())?;
    let log_err = again
        .values
        .values()
        .iter()
        .zip(&logs)
        .map(|(c, l)| (c.abs().ln() - l).abs())
        .fold(0.0, f64::max);

    let flat = SignedCriticalSequence::from_moduli(-n, &vec![1.0 / PI; (2 * n + 1) as usize]).map_err(|e| e.to_string())?;
    let sf = synthesize(&SynthesisProblem::new(flat).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let node_err = sf.nodes.iter().map(|(k, v)| (v - k as f64).abs()).fold(0.0, f64::max);
    let ok = s.residual <= 1e-10 && log_err <= 1e-6 && node_err <= 1e-8;
    let detail = format!(
        "residual {:.1e} after {} iterations, max log-tip error {log_err:.1e}, flat-target node error {node_err:.1e}",
        s.residual, s.iterations
    );
    if ok {
        within(Duration::from_secs(60), start, detail)
    } else {
        Err(detail)
    }
}

fn riesz_bounds_check() -> Outcome {
    let ints = riesz_bounds(&IndexedSequence::integers(-150, 150).unwrap(), 101).map_err(|e| e.to_string())?;
    let nodes = alternating(0.2, -150, 150);
    let a = riesz_bounds(&nodes, 101).map_err(|e| e.to_string())?;
    let b = riesz_bounds(&nodes, 201).map_err(|e| e.to_string())?;
    let change = (b.lower / a.lower - 1.0).abs();
    check(
        ints.lower == 2.0 * PI && ints.upper == 2.0 * PI && a.lower > 0.0 && b.lower > 0.0 && change <= 0.05,
        format!(
            "integers [{}, {}]; alternating 0.2: lower {:.6} (101) -> {:.6} (201), change {:.2}%, upper {:.4} -> {:.4}",
            ints.lower,
            ints.upper,
            a.lower,
            b.lower,
            100.0 * change,
            a.upper,
            b.upper
        ),
    )
}

fn interpolation() -> Outcome {
    let c = |x: f64| Complex64::new(x, 0.0);
    let ints = IndexedSequence::integers(-50, 50).unwrap();
    let delta: Vec<Complex64> = ints.indices().map(|n| c(if n == 0 { 1.0 } else { 0.0 })).collect();
    let p = InterpolationProblem::new(ints.clone(), delta).map_err(|e| e.to_string())?;
    let mut cardinal = (p.eval(c(0.0)).map_err(|e| e.to_string())? - 1.0).norm();
    for m in (-50..=50).filter(|&m| m != 0) {
        cardinal = cardinal.max(p.eval(c(m as f64)).map_err(|e| e.to_string())?.norm());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let nodes = IndexedSequence::new(-50, (-50..=50).map(|n| n as f64 + rng.gen_range(-0.2..0.2)).collect()).unwrap();
    let data: Vec<Complex64> = (0..nodes.len())
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let q = InterpolationProblem::new(nodes.clone(), data.clone()).map_err(|e| e.to_string())?;
    let mut interior = 0.0_f64;
    for n in -25..=25 {
        let v = q.eval(c(nodes.get(n).unwrap())).map_err(|e| e.to_string())?;
        interior = interior.max((v - data[(n + 50) as usize]).norm());
    }

    let support: Vec<Complex64> = ints
        .indices()
        .map(|n| c(if n.abs() <= 20 { rng.gen_range(-1.0..1.0) } else { 0.0 }))
        .collect();
    let r = InterpolationProblem::new(ints, support).map_err(|e| e.to_string())?;
    let norm = norm_equivalence_check(&r, 500.0).map_err(|e| e.to_string())?;
    check(
        cardinal <= 1e-12 && interior <= 1e-9 && (norm.ratio - 1.0).abs() <= 0.02,
        format!(
            "cardinal error {cardinal:.1e}, interior reproduction error {interior:.1e}, norm ratio {:.5}",
            norm.ratio
        ),
    )
}

fn ungl_samples() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut violations = 0;
    for _ in 0..10_000 {
        let p = 10f64.powf(rng.gen_range(-3.0..3.0));
        let q = 10f64.powf(rng.gen_range(-3.0..3.0));
        let alpha = rng.gen_range(-0.5..=0.5);
        if !ungl_inequality(p, q, alpha).map_err(|e| e.to_string())? {
            violations += 1;
        }
    }
    check(violations == 0, format!("{violations} violations in 10000 samples"))
}

fn line_bounds() -> Outcome {
    let b = GeneratingFunction::sine()
        .line_modulus_bounds(1.0, (-20.0, 20.0), 0.01)
        .map_err(|e| e.to_string())?;
    let (lo, hi) = (PI.sinh() / PI, PI.cosh() / PI);
    check(
        (b.min - lo).abs() <= 1e-2 && (b.max - hi).abs() <= 1e-2,
        format!("min {:.6} vs {lo:.6}, max {:.6} vs {hi:.6}", b.min, b.max),
    )
}

fn type_estimate() -> Outcome {
    let radii = [10.0, 20.0, 50.0, 100.0];
    let est = GeneratingFunction::sine().type_estimate(&radii).map_err(|e| e.to_string())?;
    let want = PI - (2.0 * PI).ln() / 50.0;
    let increasing = est.windows(2).all(|w| w[1] > w[0]) && est.iter().all(|&e| e < PI);
    check(
        (est[2] - want).abs() <= 1e-6 && increasing,
        format!("R=50: {:.9} vs {want:.9}; sequence {:?}", est[2], est),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("product-oracle agreement", product_oracle_agreement),
        ("Kadets sharpness", kadets_sharpness),
        ("power-law weights", power_law_trend),
        ("critical data of sine", sine_critical_data),
        ("derivative to critical value ratio", derivative_critical_ratio),
        ("boundary correspondence", boundary_correspondence),
        ("synthesis round trip", synthesis_round_trip),
        ("Riesz bounds", riesz_bounds_check),
        ("interpolation", interpolation),
        ("ungl inequality", ungl_samples),
        ("sine-type line bounds", line_bounds),
        ("type estimate", type_estimate),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
