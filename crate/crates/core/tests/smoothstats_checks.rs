//! Smooth linear statistics: exact finite-n variances against exact
//! identities and the limiting formulas.

use egl::counting::Region;
use egl::ensemble::EnsembleParams;
use egl::smoothstats::*;
use proptest::prelude::*;
use std::f64::consts::PI;

fn exact(n: usize, tau: f64, f: &TestFunction) -> f64 {
    smooth_variance_exact(&EnsembleParams::new(n, tau).unwrap(), f, None).unwrap()
}

#[test]
fn real_part_variance_is_exact_for_every_n() {
    // Var Re Tr M = (1+τ)/2 exactly
    for &tau in &[0.0, 0.5] {
        for &n in &[4usize, 16, 48] {
            let v = exact(n, tau, &TestFunction::RealPart);
            assert!((v - (1.0 + tau) / 2.0).abs() < 1e-8, "n={n} tau={tau}: {v}");
        }
    }
}

#[test]
fn bump_converges_to_fixed_tau_limit() {
    let f = TestFunction::bump(1.2);
    let lim = limit_variance_fixed_tau(&f, 0.5).unwrap().total;
    let gaps: Vec<f64> = [32usize, 64, 128].iter().map(|&n| (exact(n, 0.5, &f) - lim).abs()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(gaps[2] / lim < 0.02);
}

#[test]
fn constants_have_zero_variance_everywhere() {
    let c = TestFunction::Constant { value: 3.0 };
    assert_eq!(exact(16, 0.3, &c), 0.0);
    for &(alpha, gamma) in &[(0.3, 0.1), (0.3, 0.3), (0.3, 0.5), (0.3, 0.9)] {
        let p = EnsembleParams::weak(64, 1.0, alpha, Some(gamma)).unwrap();
        assert_eq!(smooth_variance_exact(&p, &c, Some(gamma)).unwrap(), 0.0);
    }
    let l = limit_variance_fixed_tau(&c, 0.4).unwrap();
    assert!(l.total.abs() < 1e-14);
}

fn sampled_bump(scale: f64, m: usize) -> TestFunction {
    let mut csv = String::from("x,y,f\n");
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (-0.6 + 1.2 * i as f64 / (m - 1) as f64, -0.6 + 1.2 * j as f64 / (m - 1) as f64);
            let b = TestFunction::bump(0.5).eval(egl::C64::new(x, y));
            csv.push_str(&format!("{x},{y},{}\n", scale * b));
        }
    }
    TestFunction::Grid(GridFunction::from_csv(csv.as_bytes()).unwrap())
}

#[test]
fn variance_scales_quadratically() {
    let (f, g) = (sampled_bump(1.0, 41), sampled_bump(2.5, 41));
    let (a, b) = (exact(8, 0.3, &f), exact(8, 0.3, &g));
    assert!((b - 6.25 * a).abs() < 1e-9 * b.max(1.0), "{a} {b}");
}

#[test]
fn adding_a_constant_leaves_the_variance_unchanged() {
    // constant shift on the whole plane: Σ(f + c) = Σf + nc
    let f = TestFunction::bump(0.8);
    let p = EnsembleParams::new(12, 0.4).unwrap();
    let v = smooth_variance_exact(&p, &f, None).unwrap();
    let batch = egl::sampler::SampleBatch::generate(12, 0.4, 3, 200).unwrap();
    let xs = batch.linear_statistic(|z| f.eval(z));
    let ys = batch.linear_statistic(|z| f.eval(z) + 7.0);
    let (sx, sy) = (egl::sampler::moment_statistics(&xs).unwrap(), egl::sampler::moment_statistics(&ys).unwrap());
    assert!((sx.variance - sy.variance).abs() < 1e-10 * sx.variance);
    assert!(((sx.variance - v) / sx.mc_errors.variance).abs() < 4.0);
}

#[test]
fn kappa_interpolation_is_monotone() {
    let f = TestFunction::bump(1.0);
    let gue = limit_variance_weak(&f, 0.9, 0.1, 1.0).unwrap().value;
    let gin = limit_variance_weak(&f, 0.1, 0.5, 1.0).unwrap().value;
    let ks = [0.005, 0.02, 0.1, 0.5, 1.0, 5.0, 50.0];
    let vals: Vec<f64> = ks.iter().map(|&k| limit_variance_weak(&f, 0.5, 0.5, k).unwrap().value).collect();
    assert!(vals.windows(2).all(|w| w[1] >= w[0] - 1e-12), "{vals:?}");
    assert!(vals[0] > gue && *vals.last().unwrap() <= gin + 1e-9);
    assert!((vals.last().unwrap() - gin).abs() / gin < 0.01);
}

#[test]
fn dirichlet_energy_of_real_part() {
    let v = sobolev_h1(&TestFunction::RealPart, &Region::disk(1.0)).unwrap();
    assert!((v - PI).abs() < 1e-10, "{v}");
}

#[test]
fn weak_limits_need_compact_support() {
    assert!(limit_variance_weak(&TestFunction::RealPart, 0.5, 0.5, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn regimes_partition_the_plane(alpha in 0.0f64..1.0, gamma in 0.0f64..1.5) {
        let r = regime_classify(alpha, gamma).unwrap();
        let want = if alpha > gamma { RegimeLabel::Gue }
            else if gamma < (1.0 + alpha) / 2.0 { RegimeLabel::Ginibre }
            else { RegimeLabel::Degenerate };
        // exact ties have measure zero here
        prop_assert_eq!(r, want);
        prop_assert_eq!(regime_classify(alpha, alpha).unwrap(), RegimeLabel::Transition);
        prop_assert_eq!(regime_classify(alpha, (1.0 + alpha) / 2.0).unwrap(), RegimeLabel::Microscopic);
    }

    #[test]
    fn fixed_tau_limit_components_add_up(r in 0.3f64..1.5, tau in 0.0f64..0.9) {
        let l = limit_variance_fixed_tau(&TestFunction::bump(r), tau).unwrap();
        prop_assert!(l.sigma2 >= 0.0 && l.sigma2_tilde >= 0.0);
        prop_assert!((l.total - l.sigma2 - l.sigma2_tilde).abs() < 1e-14);
    }
}
