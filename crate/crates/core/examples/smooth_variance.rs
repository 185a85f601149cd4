//! Exact variance of smooth linear statistics at fixed τ against the
//! limit σ² + σ̃².
//!
//!     cargo run --release --example smooth_variance

use egl::ensemble::EnsembleParams;
use egl::smoothstats::{limit_variance_fixed_tau, smooth_variance_exact_with, SmoothOptions, TestFunction};

fn main() -> egl::Result<()> {
    let tau = 0.5;
    for f in [TestFunction::RealPart, TestFunction::bump(1.2)] {
        let lim = limit_variance_fixed_tau(&f, tau)?;
        println!("{f:?}: sigma^2 = {:.6}, tilde sigma^2 = {:.6}, limit {:.6}", lim.sigma2, lim.sigma2_tilde, lim.total);
        for n in [32, 64, 128] {
            let v = smooth_variance_exact_with(&EnsembleParams::new(n, tau)?, &f, None, SmoothOptions::default())?;
            println!("  n = {n:>3}: {:.10} (+- {:.1e}, {} nodes)", v.value, v.error_estimate, v.nodes);
        }
    }
    Ok(())
}
