//! Rényi and von Neumann entanglement entropies with the holography bound
//! S^q ≤ (4q log 2/(q−1))·Var.
//!
//!     cargo run --release --example entropy

use egl::counting::*;
use egl::ensemble::EnsembleParams;
use std::f64::consts::PI;

fn main() -> egl::Result<()> {
    let a = 0.5;
    println!("disk a = {a}, tau = 0; S^2/(sqrt(n) 2 pi a) -> {:.6}", radial_entropy_limit(2.0)?);
    for n in [64, 128, 256, 512] {
        let s = radial_overlap_eigs(n, a);
        let s2 = renyi_entropy(&s, 2.0)?;
        println!("  n = {n:>3}  S^2 = {s2:.5}  S^1 = {:.5}  scaled {:.6}", von_neumann_entropy(&s), s2 / ((n as f64).sqrt() * 2.0 * PI * a));
    }
    let s = overlap_spectrum(&EnsembleParams::new(64, 0.5)?, &Region::Square { half_side: 0.4 })?;
    for q in [1.5, 2.0, 4.0] {
        let h = holography_bounds(&s, q)?;
        println!("square, tau = 0.5, q = {q}: S^q/Var = {:.4} <= {:.4} ({})", h.ratio, h.upper, if h.holds() { "holds" } else { "VIOLATED" });
    }
    Ok(())
}
