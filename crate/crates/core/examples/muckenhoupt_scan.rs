//! Discrete (A_2) ratios of power-law weights `(1 + |n|)^{2 alpha}`: bounded
//! for |alpha| < 1/2, logarithmic growth at the endpoint. Then a continuous
//! scan of the sine weight `|sin(pi(x + i))/pi|^2`.
//!
//! cargo run --release --example muckenhoupt_scan

use cis::muckenhoupt::{continuous_a2_scan, discrete_ratio, dyadic_lengths, grid, power_law_sequence};
use cis::{GeneratingFunction, WeightTrace};

fn main() -> cis::Result<()> {
    println!("alpha     M=256     M=1024    M=4096");
    for alpha in [0.0, 0.25, 0.4, 0.5] {
        let mut row = format!("{alpha:<6}");
        for m in [256, 1024, 4096] {
            let d = power_law_sequence(alpha, -m, m)?;
            let r = discrete_ratio(&d, 2.0, d.len())?;
            row.push_str(&format!(" {:>9.5}", r.max_ratio));
        }
        println!("{row}");
    }

    let w = WeightTrace::new(GeneratingFunction::sine(), 1.0)?;
    let report = continuous_a2_scan(&w, &dyadic_lengths(-2, 6), &grid(-10.0, 10.0, 0.25))?;
    println!("\nsine weight, y = 1: max (A_2) ratio over the scanned family = {:.8}", report.max_ratio);
    Ok(())
}
