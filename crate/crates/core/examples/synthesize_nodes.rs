//! Recover nodes from prescribed critical values (comb tips), then check
//! the result by re-extracting the critical values.
//!
//! cargo run --release --example synthesize_nodes

use std::f64::consts::PI;

use cis::combmap::{synthesize, SynthesisProblem};
use cis::SignedCriticalSequence;

fn main() -> cis::Result<()> {
    let n = 6;
    let moduli: Vec<f64> = (-n..=n).map(|k| (0.4 * (0.8 * k as f64).sin()).exp() / PI).collect();
    let targets = SignedCriticalSequence::from_moduli(-n, &moduli)?;
    let s = synthesize(&SynthesisProblem::new(targets.clone())?)?;
    println!("converged in {} iterations, residual {:.2e}", s.iterations, s.residual);

    let again = s.function.critical_data(-n, n)?;
    println!("  n   lambda_n     |c_n| target   |c_n| achieved");
    for (k, i) in (-n..=n).enumerate() {
        println!(
            "{i:>3} {:>10.6} {:>14.10} {:>14.10}",
            s.nodes.get(i).unwrap(),
            targets.values()[k].abs(),
            again.values.values()[k].abs()
        );
    }
    Ok(())
}
