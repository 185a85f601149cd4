//! Number variance of the grown/shrunk droplets A_n(S) against the edge
//! profile f(S).
//!
//!     cargo run --release --example edge_profile

use egl::counting::{band_region, edge_profile_f, number_variance, overlap_spectrum};
use egl::ensemble::EnsembleParams;
use std::f64::consts::PI;

fn main() -> egl::Result<()> {
    let (n, tau) = (256, 0.5);
    let p = EnsembleParams::new(n, tau)?;
    println!("n = {n}, tau = {tau}");
    println!("{:>5} {:>12} {:>14} {:>12}", "S", "Var", "scaled", "f(S)/pi^1.5");
    for s in [-2.0, -1.0, 0.0, 1.0, 2.0] {
        let r = band_region(&p, s)?;
        let v = number_variance(&overlap_spectrum(&p, &r)?);
        let scaled = ((1.0 - tau * tau) / n as f64).sqrt() * v / r.boundary_length();
        println!("{s:>5} {v:>12.6} {scaled:>14.6} {:>12.6}", edge_profile_f(s)? / (PI * PI.sqrt()));
    }
    Ok(())
}
