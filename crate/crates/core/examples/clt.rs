//! Gaussian fluctuations at weak non-Hermiticity: skewness and excess
//! kurtosis of Σ f(n^γ z_j) with jackknife errors.
//!
//!     cargo run --release --example clt

use egl::ensemble::EnsembleParams;
use egl::sampler::{mc_statistics_scaled, SampleBatch};
use egl::smoothstats::{limit_variance_weak, smooth_variance_exact, TestFunction};

fn main() -> egl::Result<()> {
    let (n, alpha, gamma, kappa) = (64, 0.5, 0.5, 1.0);
    let f = TestFunction::bump(1.0);
    let p = EnsembleParams::weak(n, kappa, alpha, Some(gamma))?;
    let batch = SampleBatch::generate(n, p.tau, 7, 2000)?;
    let st = mc_statistics_scaled(&batch, &f, None, (n as f64).powf(gamma))?;
    let e = st.mc_errors;
    println!("n = {n}, tau = {:.4}", p.tau);
    println!("skewness        {:+.4} +- {:.4}", st.skewness, e.skewness);
    println!("excess kurtosis {:+.4} +- {:.4}", st.excess_kurtosis, e.excess_kurtosis);
    println!("variance        {:.4} +- {:.4}", st.variance, e.variance);
    println!("exact finite-n  {:.4}", smooth_variance_exact(&p, &f, Some(gamma))?);
    println!("limit           {:.4}", limit_variance_weak(&f, alpha, gamma, kappa)?.value);
    Ok(())
}
