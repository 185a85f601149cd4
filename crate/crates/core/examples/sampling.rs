//! Reproducible spectra of elliptic Ginibre matrices and Monte Carlo moments
//! with jackknife errors.
//!
//!     cargo run --release --example sampling

use egl::counting::{number_variance, overlap_spectrum, Region};
use egl::ensemble::EnsembleParams;
use egl::sampler::{mc_statistics, SampleBatch};
use egl::smoothstats::TestFunction;

fn main() -> egl::Result<()> {
    let (n, tau) = (32, 0.5);
    let batch = SampleBatch::generate(n, tau, 42, 2000)?;
    let re = mc_statistics(&batch, &TestFunction::RealPart, None)?;
    println!("Var Re Tr M = {:.4} +- {:.4} (exact {})", re.variance, re.mc_errors.variance, (1.0 + tau) / 2.0);
    let disk = Region::disk(0.6);
    let s = overlap_spectrum(&EnsembleParams::new(n, tau)?, &disk)?;
    let c = mc_statistics(&batch, &TestFunction::Constant { value: 0.0 }, Some(&disk))?;
    println!("disk 0.6: E N = {:.3} +- {:.3} (exact {:.3}), Var N = {:.3} +- {:.3} (exact {:.3})",
        c.mean, c.mc_errors.mean, s.expected_count(), c.variance, c.mc_errors.variance, number_variance(&s));
    let mut csv = Vec::new();
    SampleBatch::generate(4, tau, 42, 2)?.write_csv(&mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}
