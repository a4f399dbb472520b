//! Generating function of a perturbed lattice: values, critical data,
//! derivatives at the zeros and growth diagnostics.
//!
//! cargo run --example generating_function

use cis::{Complex64, GeneratingFunction, IndexedSequence};

fn main() -> cis::Result<()> {
    let core = IndexedSequence::from_fn(-4, 4, |n| n as f64 + 0.15 * (1.3 * n as f64).sin())?;
    let f = GeneratingFunction::from_window(&core)?;
    println!("sine-tail form: {}", f.is_sine_tail());

    for z in [Complex64::new(0.5, 0.0), Complex64::new(2.0, 1.0), Complex64::new(-3.3, -0.5)] {
        println!("F({z}) = {}", f.eval(z)?);
    }

    let cd = f.critical_data(-6, 6)?;
    let d = f.derivative_at_zeros(-6, 6)?;
    println!("\n  n   lambda_n      x_n          c_n           |F'(lambda_n)|/|c_n|");
    for (k, n) in (-6..=6).enumerate() {
        let c = cd.values.values()[k];
        println!(
            "{n:>3} {:>10.6} {:>10.6} {:>14.8} {:>12.6}",
            f.node(n).unwrap(),
            cd.points[k],
            c,
            d.values()[k].sqrt() / c.abs()
        );
    }

    let b = f.line_modulus_bounds(1.0, (-30.0, 30.0), 0.01)?;
    println!("\n|F(x + i)| on [-30, 30]: min {:.5}, max {:.5}", b.min, b.max);
    let radii = [10.0, 20.0, 50.0, 100.0, 200.0];
    println!("log|F(iR)|/R: {:?}", f.type_estimate(&radii)?);
    println!("Cartwright integral of 5F over [-1000, 1000]: {:.6}", f.clone().with_normalization(5.0)?.cartwright_integral(1000.0)?);
    Ok(())
}
