//! A few seconds of invariant checks for `egl selftest`.

use crate::counting::{edge_profile_f, holography_bounds, number_variance, overlap_spectrum, Region};
use crate::ensemble::EnsembleParams;
use crate::error::Result;
use crate::kernel::{kernel_contour_oracle, kernel_elliptic, kernel_ginibre, trace_integral, PolarGrid};
use crate::sampler::{sample_matrix, sample_rng};
use crate::smoothstats::{regime_classify, smooth_variance_exact, RegimeLabel, TestFunction};
use num_complex::Complex64 as C64;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((ok, detail)) => Check { name, ok, detail },
        Err(e) => Check { name, ok: false, detail: e.to_string() },
    }
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

pub fn run_checks() -> Vec<Check> {
    vec![
        check("trace", {
            let t = trace_integral(16, 0.3, &PolarGrid::for_kernel(16, 0.3));
            Ok(((t - 16.0).abs() < 1e-8, format!("int K(z,z) = {t:.12} (n = 16)")))
        }),
        check("ginibre-series", (|| {
            let (z, w) = (C64::new(0.3, -0.2), C64::new(-0.1, 0.4));
            let e = rel(kernel_elliptic(20, 0.0, z, w)?, kernel_ginibre(20, z, w));
            Ok((e < 1e-12, format!("relative difference {e:.2e}")))
        })()),
        check("contour-oracle", (|| {
            let (z, w) = (C64::new(0.5, 0.1), C64::new(0.2, -0.3));
            let e = rel(kernel_elliptic(16, 0.5, z, w)?, kernel_contour_oracle(16, 0.5, z, w)?);
            Ok((e < 1e-10, format!("relative difference {e:.2e}")))
        })()),
        check("var-re-z", (|| {
            let v = smooth_variance_exact(&EnsembleParams::new(16, 0.5)?, &TestFunction::RealPart, None)?;
            Ok(((v - 0.75).abs() < 1e-8, format!("Var Re Tr = {v:.12}, expected 0.75")))
        })()),
        check("full-disk-count", (|| {
            let s = overlap_spectrum(&EnsembleParams::new(32, 0.0)?, &Region::disk(4.0))?;
            let (c, v) = (s.expected_count(), number_variance(&s));
            Ok(((c - 32.0).abs() < 1e-9 && v.abs() < 1e-9, format!("E N = {c:.12}, Var N = {v:.2e}")))
        })()),
        check("holography", (|| {
            let s = overlap_spectrum(&EnsembleParams::new(64, 0.0)?, &Region::disk(0.5))?;
            let h = holography_bounds(&s, 2.0)?;
            Ok((h.holds(), format!("S^2/Var = {:.4} <= {:.4}", h.ratio, h.upper)))
        })()),
        check("edge-profile", (|| {
            let (a, b) = (edge_profile_f(-1.0)?, edge_profile_f(1.0)?);
            Ok((a > b && b > 0.0 && edge_profile_f(f64::INFINITY)? == 0.0, format!("f(-1) = {a:.6}, f(1) = {b:.6}")))
        })()),
        check("regimes", (|| {
            let ok = regime_classify(0.3, 0.5)? == RegimeLabel::Ginibre
                && regime_classify(0.5, 0.5)? == RegimeLabel::Transition
                && regime_classify(0.7, 0.5)? == RegimeLabel::Gue;
            Ok((ok, "GINIBRE / TRANSITION / GUE".to_string()))
        })()),
        check("hermitian-limit", {
            let m = sample_matrix(6, 1.0, &mut sample_rng(1, 0));
            let mut d = 0.0f64;
            for j in 0..6 {
                for k in 0..6 {
                    d = d.max((m.get(j, k) - m.get(k, j).conj()).norm());
                }
            }
            Ok((d < 1e-15, format!("max |M - M*| = {d:.1e} at tau = 1")))
        }),
    ]
}
