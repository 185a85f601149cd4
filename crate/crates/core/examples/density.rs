//! One-point density K_n(z, z)/n along the real axis against the uniform
//! density 1/(π(1−τ²)) on the ellipse.
//!
//!     cargo run --release --example density

use egl::ensemble::EnsembleParams;
use egl::kernel::{trace_integral, KernelEvaluator, KernelMethod, PolarGrid};
use egl::C64;

fn main() -> egl::Result<()> {
    let tau = 0.5;
    for n in [16, 64, 256] {
        let p = EnsembleParams::new(n, tau)?;
        let ev = KernelEvaluator::new(p, KernelMethod::HermiteSeries)?;
        let row: Vec<String> = [0.0, 0.75, 1.25, 1.5, 1.75]
            .iter()
            .map(|&x| Ok(format!("{:.4}", ev.density(C64::new(x, 0.0))?)))
            .collect::<egl::Result<_>>()?;
        println!("n = {n:>3}: density at x = 0, 0.75, 1.25, 1.5, 1.75: {}", row.join("  "));
    }
    println!("limit inside: {:.4}", EnsembleParams::new(1, tau)?.geometry().density());
    let n = 32;
    println!("int K(z,z) d^2z at n = {n}: {:.12}", trace_integral(n, tau, &PolarGrid::for_kernel(n, tau)));
    Ok(())
}
