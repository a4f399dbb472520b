use std::f64::consts::PI;

use cis::combmap::{synthesize, BranchTrackedLog, SynthesisProblem};
use cis::muckenhoupt::{
    discrete_ratio, power_law_sequence, signed_from_weights, ungl_inequality, weights_from_signed, PositiveSequence,
};
use cis::paleywiener::{gram_matrix, riesz_bounds, InterpolationProblem};
use cis::sequence::{density, kadets_check, separation};
use cis::{Complex64, GeneratingFunction, IndexedSequence};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

/// Nodes on a dyadic grid so that translations and dilations by dyadic
/// amounts are exact in floating point.
fn dyadic_nodes() -> impl Strategy<Value = IndexedSequence> {
    (-20i64..20, prop::collection::vec(16u32..128, 8..60), -1000i64..1000).prop_map(|(n_min, steps, start)| {
        let mut v = Vec::with_capacity(steps.len() + 1);
        let mut x = start as f64 / 64.0;
        v.push(x);
        for s in steps {
            x += s as f64 / 64.0;
            v.push(x);
        }
        IndexedSequence::new(n_min, v).unwrap()
    })
}

fn weights() -> impl Strategy<Value = PositiveSequence> {
    (-10i64..10, prop::collection::vec(-6.0f64..6.0, 1..80))
        .prop_map(|(n_min, logs)| PositiveSequence::new(n_min, logs.iter().map(|l| l.exp()).collect()).unwrap())
}

fn jittered_core(max_n: i64, amp: f64) -> impl Strategy<Value = Vec<f64>> {
    (0..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(-amp..amp, (2 * n + 1) as usize).prop_map(move |j| {
            (-n..=n).zip(j).map(|(k, e)| k as f64 + e).collect::<Vec<_>>()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn statistics_are_translation_invariant(seq in dyadic_nodes(), shift in -4096i64..4096, r_num in 1u32..8) {
        let moved = seq.translated(shift as f64 / 64.0).unwrap();
        prop_assert_eq!(separation(&seq), separation(&moved));
        let r = seq.span() * r_num as f64 / 32.0;
        prop_assert_eq!(density(&seq, r).unwrap(), density(&moved, r).unwrap());
    }

    #[test]
    fn statistics_are_dilation_covariant(seq in dyadic_nodes(), e in -3i32..4, r_num in 1u32..8) {
        let a = 2f64.powi(e);
        let big = seq.dilated(a).unwrap();
        let (s, t) = (separation(&seq), separation(&big));
        prop_assert_eq!(t.delta, a * s.delta);
        prop_assert_eq!(t.max_gap, a * s.max_gap);
        let r = seq.span() * r_num as f64 / 32.0;
        let (d, db) = (density(&seq, r).unwrap(), density(&big, a * r).unwrap());
        prop_assert_eq!(db.d_plus, d.d_plus / a);
        prop_assert_eq!(db.d_minus, d.d_minus / a);
        prop_assert!(d.d_minus <= d.d_plus);
    }

    #[test]
    fn kadets_is_monotone(dev in prop::collection::vec(-0.3f64..0.3, 3..40), grow in prop::collection::vec(0.0f64..0.2, 40)) {
        let n = dev.len() as i64;
        let base = IndexedSequence::new(0, (0..n).map(|k| k as f64 + dev[k as usize]).collect());
        let wider = IndexedSequence::new(0, (0..n).map(|k| {
            let d = dev[k as usize];
            k as f64 + d + d.signum() * grow[k as usize]
        }).collect());
        if let (Ok(a), Ok(b)) = (base, wider) {
            let (ka, kb) = (kadets_check(&a), kadets_check(&b));
            prop_assert!(kb.sup_deviation >= ka.sup_deviation);
            prop_assert!(!(kb.passes && !ka.passes));
        }
    }

    #[test]
    fn discrete_ratio_invariances(d in weights(), k in -8.0f64..8.0, cap_frac in 0.0f64..1.0) {
        let cap = 1 + ((d.len() - 1) as f64 * cap_frac) as usize;
        let base = discrete_ratio(&d, 2.0, cap).unwrap();
        let scaled = discrete_ratio(&d.scaled(k.exp()).unwrap(), 2.0, cap).unwrap();
        let inverted = discrete_ratio(&d.reciprocal(), 2.0, cap).unwrap();
        prop_assert!((scaled.max_ratio / base.max_ratio - 1.0).abs() <= 1e-12);
        prop_assert!((inverted.max_ratio / base.max_ratio - 1.0).abs() <= 1e-12);
        prop_assert!(base.max_ratio >= 1.0);
        prop_assert!(base.witness.1 - base.witness.0 < cap as i64);
        let full = discrete_ratio(&d, 2.0, d.len()).unwrap();
        prop_assert!(full.max_ratio >= base.max_ratio);
    }

    #[test]
    fn window_ratio_matches_direct_sums(d in weights(), p in 1.2f64..4.0) {
        let r = discrete_ratio(&d, p, d.len()).unwrap();
        let (i, j) = r.witness;
        let w = &d.values()[(i - d.n_min()) as usize..=(j - d.n_min()) as usize];
        let s1: f64 = w.iter().sum();
        let s2: f64 = w.iter().map(|v| v.powf(-1.0 / (p - 1.0))).sum();
        let direct = s1 * s2.powf(p - 1.0) / (w.len() as f64).powf(p);
        prop_assert!((direct / r.max_ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn signed_weights_round_trip(d in weights()) {
        let back = weights_from_signed(&signed_from_weights(&d)).unwrap();
        for (a, b) in back.values().iter().zip(d.values()) {
            prop_assert!((a / b - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn ungl_holds(p in 1e-4f64..1e4, q in 1e-4f64..1e4, alpha in -0.5f64..=0.5) {
        prop_assert!(ungl_inequality(p, q, alpha).unwrap());
    }

    #[test]
    fn zeros_and_reality(core in jittered_core(8, 0.2), x in -15.0f64..15.0) {
        let f = GeneratingFunction::sine_tail(core).unwrap();
        prop_assert_eq!(f.eval(Complex64::new(x, 0.0)).unwrap().im, 0.0);
        for n in -10..=10 {
            prop_assert_eq!(f.eval(Complex64::new(f.node(n).unwrap(), 0.0)).unwrap().norm(), 0.0);
        }
    }

    #[test]
    fn critical_data_interlaces(core in jittered_core(8, 0.2)) {
        let f = GeneratingFunction::sine_tail(core).unwrap();
        let cd = f.critical_data(-10, 10).unwrap();
        for (k, n) in (-10..=10).enumerate() {
            prop_assert!(f.node(n - 1).unwrap() < cd.points[k] && cd.points[k] < f.node(n).unwrap());
        }
    }

    #[test]
    fn phi_is_path_independent(core in jittered_core(4, 0.2), x in -6.0f64..6.0, y in 0.01f64..3.0, wx in -8.0f64..8.0, wy in 0.5f64..6.0) {
        let l = BranchTrackedLog::new(GeneratingFunction::sine_tail(core).unwrap()).unwrap();
        let z = Complex64::new(x, -y);
        let direct = l.phi_eval(z).unwrap();
        let detour = l.phi_eval_along(&[Complex64::new(wx, -wy), z]).unwrap();
        prop_assert!((direct - detour).norm() < 1e-9, "{} vs {}", direct, detour);
        let v = l.function().eval(z).unwrap();
        prop_assert!((direct.exp() - v).norm() <= 1e-10 * v.norm());
    }

    #[test]
    fn gram_is_positive_semidefinite(gaps in prop::collection::vec(0.05f64..2.0, 2..60)) {
        let mut v = vec![0.0];
        for g in gaps {
            let last = *v.last().unwrap();
            v.push(last + g);
        }
        let nodes = IndexedSequence::new(0, v).unwrap();
        let eig = SymmetricEigen::new(gram_matrix(&nodes));
        prop_assert!(eig.eigenvalues.iter().all(|&e| e >= -1e-9 * 2.0 * PI));
    }

    #[test]
    fn finite_sections_are_monotone(dev in prop::collection::vec(-0.24f64..0.24, 81)) {
        let nodes = IndexedSequence::new(-40, (-40..=40).zip(&dev).map(|(n, d)| n as f64 + d).collect()).unwrap();
        let mut prev: Option<(f64, f64)> = None;
        for size in [5, 11, 21, 41, 81] {
            let r = riesz_bounds(&nodes, size).unwrap();
            prop_assert!(r.lower > 0.0);
            if let Some((lo, hi)) = prev {
                prop_assert!(r.lower <= lo + 1e-9 && r.upper >= hi - 1e-9);
            }
            prev = Some((r.lower, r.upper));
        }
    }

    #[test]
    fn interpolation_is_exact_and_linear(dev in prop::collection::vec(-0.2f64..0.2, 41), a in prop::collection::vec(-1.0f64..1.0, 41), b in prop::collection::vec(-1.0f64..1.0, 41), z in -5.0f64..5.0, y in -1.0f64..1.0) {
        let nodes = IndexedSequence::new(-20, (-20..=20).zip(&dev).map(|(n, d)| n as f64 + d).collect()).unwrap();
        let ca: Vec<Complex64> = a.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let cb: Vec<Complex64> = b.iter().map(|&v| Complex64::new(0.0, v)).collect();
        let cs: Vec<Complex64> = ca.iter().zip(&cb).map(|(x, y)| x + y).collect();
        let pa = InterpolationProblem::new(nodes.clone(), ca.clone()).unwrap();
        let pb = InterpolationProblem::new(nodes.clone(), cb).unwrap();
        let ps = InterpolationProblem::new(nodes.clone(), cs).unwrap();
        for n in -10..=10 {
            let v = pa.eval(Complex64::new(nodes.get(n).unwrap(), 0.0)).unwrap();
            prop_assert!((v - ca[(n + 20) as usize]).norm() < 1e-9);
        }
        let w = Complex64::new(z, y);
        let lhs = ps.eval(w).unwrap();
        let rhs = pa.eval(w).unwrap() + pb.eval(w).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    #[test]
    fn sequence_json_round_trip(seq in dyadic_nodes(), d in weights()) {
        let s = serde_json::to_string(&seq).unwrap();
        prop_assert_eq!(serde_json::from_str::<IndexedSequence>(&s).unwrap(), seq);
        let t = serde_json::to_string(&d).unwrap();
        prop_assert_eq!(serde_json::from_str::<PositiveSequence>(&t).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn power_law_ratio_is_stable(alpha in -0.45f64..0.45) {
        let small = power_law_sequence(alpha, -2048, 2048).unwrap();
        let large = power_law_sequence(alpha, -4096, 4096).unwrap();
        let a = discrete_ratio(&small, 2.0, small.len()).unwrap().max_ratio;
        let b = discrete_ratio(&large, 2.0, large.len()).unwrap().max_ratio;
        prop_assert!((b / a - 1.0).abs() <= 0.1, "alpha {}: {} -> {}", alpha, a, b);
    }

    #[test]
    fn synthesis_recovers_nodes(core in jittered_core(8, 0.2)) {
        // Targets on the whole core window with no padding: the original
        // nodes solve the system exactly. The residual tolerance is
        // tightened so that node errors, not tip errors, are resolved.
        let f = GeneratingFunction::sine_tail(core.clone()).unwrap();
        let n = (core.len() / 2) as i64;
        let targets = f.critical_data(-n, n).unwrap().values;
        let problem = SynthesisProblem {
            padding: 0,
            residual_tol: 1e-24,
            ..SynthesisProblem::new(targets).unwrap()
        };
        let s = synthesize(&problem).unwrap();
        for (v, w) in s.nodes.values()[1..].iter().zip(&core) {
            prop_assert!((v - w).abs() < 1e-8, "{} vs {}", v, w);
        }
    }

    #[test]
    fn boundary_levels_match_critical_values(core in jittered_core(6, 0.2)) {
        let f = GeneratingFunction::sine_tail(core).unwrap();
        let eps = 1e-4;
        let tr = BranchTrackedLog::new(f.clone()).unwrap().boundary_trace(eps, -8, 8).unwrap();
        let cd = f.critical_data(-8, 8).unwrap();
        for w in tr.gaps.windows(2) {
            prop_assert!((w[1].im_level - w[0].im_level - PI).abs() <= 5.0 * eps);
        }
        for (g, c) in tr.gaps.iter().zip(cd.values.values()) {
            prop_assert!((g.re_max - c.abs().ln()).abs() <= 1e-6);
            prop_assert!(g.deviation <= 5.0 * eps);
        }
    }
}

#[test]
fn unbounded_power_laws_grow() {
    for alpha in [0.5, -0.5] {
        let r = |q: i64| {
            let d = power_law_sequence(alpha, 1, q).unwrap();
            discrete_ratio(&d, 2.0, d.len()).unwrap().max_ratio
        };
        assert!(r(10_000) >= 1.5 * r(100), "alpha {alpha}");
    }
}
