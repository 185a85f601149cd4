//! The correlation kernel K_n(z, w) by every available path.
//!
//!     cargo run --release --example kernel

use egl::ensemble::EnsembleParams;
use egl::kernel::{KernelEvaluator, KernelMethod};
use egl::C64;

fn main() -> egl::Result<()> {
    let (n, tau) = (32, 0.5);
    let params = EnsembleParams::new(n, tau)?;
    let (z, w) = (C64::new(0.4, 0.1), C64::new(0.35, 0.05));
    println!("n = {n}, tau = {tau}, z = {z}, w = {w}");
    for method in [KernelMethod::HermiteSeries, KernelMethod::ContourOracle, KernelMethod::BulkApprox] {
        let k = KernelEvaluator::new(params, method)?.eval(z, w)?;
        println!("{:<16} {:>24.15e} {:>+24.15e}i", format!("{method:?}"), k.re, k.im);
    }
    // at tau = 0 the Ginibre series is available too
    let g = EnsembleParams::new(n, 0.0)?;
    for method in [KernelMethod::GinibreSeries, KernelMethod::HermiteSeries] {
        let k = KernelEvaluator::new(g, method)?.eval(z, w)?;
        println!("tau = 0 {:<14} {:>24.15e} {:>+24.15e}i", format!("{method:?}"), k.re, k.im);
    }
    Ok(())
}
