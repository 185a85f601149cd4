//! Exponential decay of the number variance of {|z| > a}, a > 1 (Ginibre).
//!
//!     cargo run --release --example outside_decay

use egl::counting::{number_variance, outside_variance_formula, outside_variance_leading, radial_overlap_eigs_complement};

fn main() -> egl::Result<()> {
    let a = 1.2;
    println!("{:>4} {:>14} {:>14} {:>14}", "n", "exact", "formula", "leading term");
    for n in [30, 50, 70, 100] {
        let v = number_variance(&radial_overlap_eigs_complement(n, a));
        println!("{n:>4} {v:>14.6e} {:>14.6e} {:>14.6e}", outside_variance_formula(n, a)?, outside_variance_leading(n, a)?);
    }
    Ok(())
}
