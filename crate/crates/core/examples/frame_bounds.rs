//! Finite-section Riesz bounds of `{e^{i lambda_n t}}` from Gram matrices,
//! as the section grows and as the Kadets-type perturbation approaches 1/4.
//!
//! cargo run --release --example frame_bounds

use cis::paleywiener::riesz_bounds;
use cis::IndexedSequence;

fn main() -> cis::Result<()> {
    println!("  d     size    lower       upper");
    for d in [0.0, 0.1, 0.2, 0.24, 0.3] {
        let nodes = IndexedSequence::from_fn(-200, 200, |n| n as f64 + if n % 2 == 0 { d } else { -d })?;
        for size in [51, 101, 201, 401] {
            let r = riesz_bounds(&nodes, size)?;
            println!("{d:<5} {size:>6} {:>10.6} {:>10.6}", r.lower, r.upper);
        }
    }
    Ok(())
}
