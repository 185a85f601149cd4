//! Sampled spectra against exact moments, the droplet and the finite-n
//! density.

use egl::counting::{number_variance, overlap_spectrum, Region};
use egl::ensemble::EnsembleParams;
use egl::kernel::{KernelEvaluator, KernelMethod};
use egl::numerics::nonsymmetric_eigenvalues;
use egl::sampler::*;
use egl::smoothstats::TestFunction;
use egl::C64;

#[test]
fn real_trace_variance_matches_exact_value() {
    let (n, tau) = (64usize, 0.5);
    let xs: Vec<f64> = (0..10_000).map(|i| sample_matrix(n, tau, &mut sample_rng(21, i)).trace().re).collect();
    let st = moment_statistics(&xs).unwrap();
    let z = (st.variance - (1.0 + tau) / 2.0) / st.mc_errors.variance;
    assert!(z.abs() < 3.0, "{st:?}");
    assert!((st.mean / st.mc_errors.mean).abs() < 4.0);
}

#[test]
fn eigenvalues_sum_to_trace() {
    let m = sample_matrix(40, 0.3, &mut sample_rng(4, 0));
    let s: C64 = nonsymmetric_eigenvalues(&m).unwrap().iter().sum();
    assert!((s - m.trace()).norm() < 1e-10);
}

#[test]
fn spectra_fill_the_ellipse() {
    let b = SampleBatch::generate(256, 0.5, 8, 3).unwrap();
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for z in b.eigenvalue_sets.iter().flatten() {
        re = re.max(z.re.abs());
        im = im.max(z.im.abs());
    }
    assert!((re - 1.5).abs() < 0.1 && (im - 0.5).abs() < 0.1, "semi-axes {re} {im}");
    let g = SampleBatch::generate(256, 0.0, 9, 2).unwrap();
    let r = g.eigenvalue_sets.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
    assert!((r - 1.0).abs() < 0.1, "spectral radius {r}");
}

#[test]
fn disk_counts_match_exact_moments() {
    let (n, tau) = (16usize, 0.3);
    let region = Region::disk(0.5);
    let s = overlap_spectrum(&EnsembleParams::new(n, tau).unwrap(), &region).unwrap();
    let b = SampleBatch::generate(n, tau, 5, 3000).unwrap();
    let st = mc_statistics(&b, &TestFunction::Constant { value: 0.0 }, Some(&region)).unwrap();
    assert!(((st.mean - s.expected_count()) / st.mc_errors.mean).abs() < 4.0, "{} vs {}", st.mean, s.expected_count());
    assert!(((st.variance - number_variance(&s)) / st.mc_errors.variance).abs() < 4.0);
}

#[test]
fn radial_histogram_matches_finite_n_density() {
    let (n, tau) = (24usize, 0.5);
    let rho = |z: C64| ((z.re / (1.0 + tau)).powi(2) + (z.im / (1.0 - tau)).powi(2)).sqrt();
    let edges = [0.0, 0.3, 0.5, 0.7, 0.85, 1.0, 1.1, f64::INFINITY];
    let bin = |r: f64| edges.windows(2).position(|w| r >= w[0] && r < w[1]).unwrap();
    // expected fractions from K(z,z)/n on a midpoint grid
    let ev = KernelEvaluator::new(EnsembleParams::new(n, tau).unwrap(), KernelMethod::HermiteSeries).unwrap();
    let (hx, hy, m) = (2.4, 1.2, 480);
    let mut expect = vec![0.0; edges.len() - 1];
    for i in 0..m {
        for j in 0..m {
            let z = C64::new(-hx + 2.0 * hx * (i as f64 + 0.5) / m as f64, -hy + 2.0 * hy * (j as f64 + 0.5) / m as f64);
            expect[bin(rho(z))] += ev.density(z).unwrap() * 4.0 * hx * hy / (m * m) as f64;
        }
    }
    let total: f64 = expect.iter().sum();
    assert!((total - 1.0).abs() < 1e-4, "{total}");
    let b = SampleBatch::generate(n, tau, 6, 800).unwrap();
    let mut counts = vec![0.0; expect.len()];
    for z in b.eigenvalue_sets.iter().flatten() {
        counts[bin(rho(*z))] += 1.0;
    }
    let tot = (n * b.count) as f64;
    let chi2: f64 = counts.iter().zip(&expect).map(|(c, p)| (c - tot * p).powi(2) / (tot * p)).sum();
    // 6 degrees of freedom; eigenvalue repulsion only lowers the spread
    assert!(chi2 < 22.5, "chi2 = {chi2}, counts {counts:?}, expected {:?}", expect.iter().map(|p| p * tot).collect::<Vec<_>>());
}
