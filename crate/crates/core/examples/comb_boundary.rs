//! The map phi = log F sends the lower half-plane onto a comb domain: along
//! a line just below the real axis, Im phi sits on levels spaced by pi and
//! Re phi peaks at log|c_n|, the tip of the n-th slit.
//!
//! cargo run --example comb_boundary [out.csv]

use cis::combmap::{BranchTrackedLog, CombDomain};
use cis::GeneratingFunction;

fn main() -> cis::Result<()> {
    let core: Vec<f64> = (-3..=3).map(|n| n as f64 + 0.2 * (0.9 * n as f64).cos() - 0.1).collect();
    let f = GeneratingFunction::sine_tail(core)?;
    let comb = CombDomain::of_function(&f, -5, 5)?;
    let phi = BranchTrackedLog::new(f)?;
    let trace = phi.boundary_trace(1e-4, -5, 5)?;

    println!("gap   level/pi    re_max     log|c_n|    argmax");
    for g in &trace.gaps {
        let tip = comb.tip(g.gap).unwrap();
        println!(
            "{:>3} {:>10.5} {:>10.6} {:>10.6} {:>10.6}",
            g.gap,
            g.im_level / std::f64::consts::PI,
            g.re_max,
            tip.re,
            g.argmax
        );
    }

    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, trace.to_csv()).expect("write CSV");
        println!("wrote {} samples to {path}", trace.samples.len());
    }
    Ok(())
}
