//! Separation, Kadets and density statistics of a few node windows.
//!
//! cargo run --example sequence_stats

use cis::sequence::{density, kadets_check, relative_density_check, separation};
use cis::IndexedSequence;

fn main() -> cis::Result<()> {
    let windows = [
        ("integers", IndexedSequence::integers(-200, 200)?),
        ("n + 0.2(-1)^n", IndexedSequence::from_fn(-200, 200, |n| n as f64 + if n % 2 == 0 { 0.2 } else { -0.2 })?),
        ("n + 0.25(-1)^n", IndexedSequence::from_fn(-200, 200, |n| n as f64 + if n % 2 == 0 { 0.25 } else { -0.25 })?),
        ("2n", IndexedSequence::from_fn(-200, 200, |n| 2.0 * n as f64)?),
    ];
    println!("{:<16} {:>7} {:>7} {:>8} {:>6} {:>7} {:>7} {:>6}", "nodes", "delta", "Delta", "kadets", "<1/4", "D+", "D-", "eps.6");
    for (name, seq) in &windows {
        let s = separation(seq);
        let k = kadets_check(seq);
        let d = density(seq, 100.0)?;
        println!(
            "{:<16} {:>7.3} {:>7.3} {:>8.3} {:>6} {:>7.4} {:>7.4} {:>6}",
            name,
            s.delta,
            s.max_gap,
            k.sup_deviation,
            k.passes,
            d.d_plus,
            d.d_minus,
            relative_density_check(seq, 0.6)
        );
    }
    Ok(())
}
