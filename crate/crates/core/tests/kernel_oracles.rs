//! Exact kernels against independent high-precision evaluations and against
//! each other.

use egl::kernel::*;
use egl::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

fn rows() -> Vec<Vec<f64>> {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/kernels.csv");
    let mut rdr = csv::Reader::from_path(p).unwrap();
    rdr.records()
        .map(|r| r.unwrap().iter().map(|x| x.parse::<f64>().unwrap()).collect())
        .collect()
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn series_kernels_match_reference_values() {
    for r in rows() {
        let (n, tau) = (r[0] as usize, r[1]);
        let z = C64::new(r[2], r[3]);
        let w = C64::new(r[4], r[5]);
        let want = C64::new(r[6], r[7]);
        let got = kernel_elliptic(n, tau, z, w).unwrap();
        assert!(rel(got, want) < 1e-11, "n={n} tau={tau} z={z} w={w}: {got} vs {want}");
        if tau == 0.0 {
            assert!(rel(kernel_ginibre(n, z, w), want) < 1e-11);
        }
    }
}

#[test]
fn contour_matches_reference_values() {
    for r in rows() {
        let (n, tau) = (r[0] as usize, r[1]);
        if tau == 0.0 || n > 64 {
            continue;
        }
        let z = C64::new(r[2], r[3]);
        let w = C64::new(r[4], r[5]);
        let want = C64::new(r[6], r[7]);
        let got = kernel_contour_oracle(n, tau, z, w).unwrap();
        assert!(rel(got, want) < 1e-9, "n={n} tau={tau} z={z} w={w}: {got} vs {want}");
    }
}

#[test]
fn contour_origin_single_particle() {
    // n = 1: K = ψ_0(0)² = 1/(π√(1−τ²)).
    let tau = 0.4;
    let k = kernel_contour_oracle(1, tau, C64::new(0.0, 0.0), C64::new(0.0, 0.0)).unwrap();
    let want = 1.0 / (std::f64::consts::PI * (1.0 - tau * tau).sqrt());
    assert!((k.re - want).abs() < 1e-12 && k.im.abs() < 1e-12);
}

#[test]
fn small_tau_is_continuous_with_ginibre() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let w = z + C64::new(rng.random_range(-0.2..0.2), rng.random_range(-0.2..0.2));
        let g = kernel_ginibre(16, z, w);
        let e = kernel_elliptic(16, 1e-9, z, w).unwrap();
        assert!(rel(e, g) < 1e-6);
    }
}

#[test]
fn hermitian_symmetry() {
    let (z, w) = (C64::new(0.3, -0.4), C64::new(-0.2, 0.5));
    let a = kernel_elliptic(20, 0.6, z, w).unwrap();
    let b = kernel_elliptic(20, 0.6, w, z).unwrap();
    assert!(rel(a, b.conj()) < 1e-13);
}

#[test]
fn trace_equals_n() {
    for &(n, tau) in &[(8usize, 0.0), (16, 0.5), (32, 0.8)] {
        let grid = PolarGrid::for_kernel(n, tau);
        let t = trace_integral(n, tau, &grid);
        assert!((t - n as f64).abs() < 1e-6 * n as f64, "n={n} tau={tau}: {t}");
    }
}

#[test]
fn evaluator_rejects_bad_methods() {
    use egl::ensemble::EnsembleParams;
    assert!(KernelEvaluator::new(EnsembleParams::new(8, 0.5).unwrap(), KernelMethod::GinibreSeries).is_err());
    assert!(KernelEvaluator::new(EnsembleParams::new(100, 0.5).unwrap(), KernelMethod::ContourOracle).is_err());
}
