//! Monte Carlo cross-checks: elliptic Ginibre matrices, their spectra and
//! moment statistics of linear statistics with jackknife errors.
//!
//! Randomness comes from ChaCha20 (20 rounds, the IETF constants
//! "expand 32-byte k"). The key is derived from the 64-bit batch seed via
//! `SeedableRng::seed_from_u64`, and sample `i` uses stream `i`, so every
//! matrix is reproducible on its own and batches parallelize
//! deterministically.

mod stats;

pub use stats::{jackknife, moment_statistics, McErrors, McStatistics};

use crate::counting::Region;
use crate::error::{Error, Result};
use crate::numerics::{nonsymmetric_eigenvalues, ComplexMatrix};
use crate::smoothstats::TestFunction;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Deserialize;
use std::io::Write;

/// Smallest batch accepted by [`mc_statistics`].
pub const MIN_SAMPLES: usize = 100;

/// Generator for sample `index` of the batch with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut r = ChaCha20Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

fn gue_into<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R, out: &mut [C64], unit: C64) {
    // diagonal N(0, 1/n); off-diagonal (a + ib)/√(2n)
    let sd = 1.0 / (n as f64).sqrt();
    let so = 1.0 / (2.0 * n as f64).sqrt();
    for j in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        out[j * n + j] += unit * (scale * sd * d);
        for k in j + 1..n {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            let h = C64::new(a, b) * (scale * so);
            out[j * n + k] += unit * h;
            out[k * n + j] += unit * h.conj();
        }
    }
}

/// M = √((1+τ)/2)·H₁ + i√((1−τ)/2)·H₂ with independent GUE H₁, H₂ of entry
/// variance 1/n.
pub fn sample_matrix<R: Rng + ?Sized>(n: usize, tau: f64, rng: &mut R) -> ComplexMatrix {
    let mut e = vec![C64::new(0.0, 0.0); n * n];
    gue_into(n, ((1.0 + tau) / 2.0).sqrt(), rng, &mut e, C64::new(1.0, 0.0));
    gue_into(n, ((1.0 - tau) / 2.0).sqrt(), rng, &mut e, C64::new(0.0, 1.0));
    ComplexMatrix::new(n, e).expect("square by construction")
}

#[derive(Clone, Debug)]
pub struct SampleBatch {
    pub n: usize,
    pub tau: f64,
    pub seed: u64,
    pub count: usize,
    pub eigenvalue_sets: Vec<Vec<C64>>,
}

impl SampleBatch {
    pub fn generate(n: usize, tau: f64, seed: u64, count: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("n must be positive".into()));
        }
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::Validation(format!("tau = {tau} outside [0, 1]")));
        }
        let eigenvalue_sets = (0..count)
            .into_par_iter()
            .map(|i| {
                let m = sample_matrix(n, tau, &mut sample_rng(seed, i as u64));
                nonsymmetric_eigenvalues(&m)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SampleBatch { n, tau, seed, count, eigenvalue_sets })
    }

    /// CSV with header `re,im,sample_index`, one row per eigenvalue.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["re", "im", "sample_index"])?;
        for (i, set) in self.eigenvalue_sets.iter().enumerate() {
            for z in set {
                wr.write_record([format!("{:.17e}", z.re), format!("{:.17e}", z.im), i.to_string()])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    /// Reads a batch CSV back; n, τ and the seed are not stored in it.
    pub fn read_csv<R: std::io::Read>(r: R, tau: f64, seed: u64) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            re: f64,
            im: f64,
            sample_index: usize,
        }
        let mut rdr = csv::Reader::from_reader(r);
        let mut sets: Vec<Vec<C64>> = Vec::new();
        for row in rdr.deserialize() {
            let row: Row = row?;
            if row.sample_index >= sets.len() {
                sets.resize(row.sample_index + 1, Vec::new());
            }
            sets[row.sample_index].push(C64::new(row.re, row.im));
        }
        let n = sets.first().map_or(0, |s| s.len());
        if sets.iter().any(|s| s.len() != n) || n == 0 {
            return Err(Error::Validation("batch CSV must hold the same number of eigenvalues per sample".into()));
        }
        Ok(SampleBatch { n, tau, seed, count: sets.len(), eigenvalue_sets: sets })
    }

    /// X_i = Σ_j g(z_j) for every sample.
    pub fn linear_statistic<G: Fn(C64) -> f64 + Sync>(&self, g: G) -> Vec<f64> {
        self.eigenvalue_sets.par_iter().map(|s| s.iter().map(|&z| g(z)).sum()).collect()
    }
}

/// Moments of X = Σ f(z_j), or of the count in `region` when given.
pub fn mc_statistics(batch: &SampleBatch, f: &TestFunction, region: Option<&Region>) -> Result<McStatistics> {
    mc_statistics_scaled(batch, f, region, 1.0)
}

/// As [`mc_statistics`] with f(scale·z).
pub fn mc_statistics_scaled(
    batch: &SampleBatch,
    f: &TestFunction,
    region: Option<&Region>,
    scale: f64,
) -> Result<McStatistics> {
    if batch.count < MIN_SAMPLES {
        return Err(Error::InsufficientSamples { needed: MIN_SAMPLES, got: batch.count });
    }
    let xs = match region {
        Some(r) => {
            r.validate()?;
            batch.linear_statistic(|z| if r.contains(z) { 1.0 } else { 0.0 })
        }
        None => batch.linear_statistic(|z| f.eval(z * scale)),
    };
    moment_statistics(&xs)
}
