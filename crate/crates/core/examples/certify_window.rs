//! Composite certificate (separation, density, discrete A_2 trend) for a
//! few node windows.
//!
//! cargo run --release --example certify_window

use cis::combmap::{certify, CertifyOptions};
use cis::IndexedSequence;

fn main() -> cis::Result<()> {
    let sign = |n: i64| if n % 2 == 0 { 1.0 } else { -1.0 };
    let windows = [
        ("integers", IndexedSequence::integers(-300, 300)?),
        ("n + 0.2(-1)^n", IndexedSequence::from_fn(-300, 300, |n| n as f64 + 0.2 * sign(n))?),
        ("n + 0.3 sgn(n)", IndexedSequence::from_fn(-300, 300, |n| n as f64 + 0.3 * (n as f64).signum())?),
        ("2n", IndexedSequence::from_fn(-300, 300, |n| 2.0 * n as f64)?),
    ];
    for (name, nodes) in &windows {
        let r = certify(nodes, &CertifyOptions::default())?;
        println!(
            "{name:<16} A2 {:>9.4} (x{:.3} on doubling)  D+ {:.3}  D- {:.3}  -> {:?}",
            r.a2_report.max_ratio, r.a2_growth, r.densities.d_plus, r.densities.d_minus, r.verdict
        );
    }
    Ok(())
}
