//! Interpolate data on irregular nodes with the Lagrange series and compare
//! l^2 norms of the data with L^2 norms of the interpolant.
//!
//! cargo run --release --example interpolation

use cis::paleywiener::{norm_equivalence_check, InterpolationProblem};
use cis::{Complex64, IndexedSequence};

fn main() -> cis::Result<()> {
    let nodes = IndexedSequence::from_fn(-40, 40, |n| n as f64 + 0.18 * (2.1 * n as f64).sin())?;
    let data: Vec<Complex64> = nodes
        .indices()
        .map(|n| Complex64::new((-(n as f64 / 8.0).powi(2)).exp(), 0.0))
        .collect();
    let p = InterpolationProblem::new(nodes.clone(), data.clone())?;

    for n in [-3, 0, 5] {
        let x = nodes.get(n).unwrap();
        println!("f(lambda_{n}) = {:.15}  (data {:.15})", p.eval(Complex64::new(x, 0.0))?.re, data[(n + 40) as usize].re);
    }
    for x in [0.5, 1.5, 10.25] {
        println!("f({x}) = {:.10}", p.eval(Complex64::new(x, 0.0))?.re);
    }
    let r = norm_equivalence_check(&p, 400.0)?;
    println!("sum |a_n|^2 = {:.8}, int |f|^2 = {:.8}, ratio = {:.6}", r.l2_data, r.l2_function, r.ratio);
    Ok(())
}
