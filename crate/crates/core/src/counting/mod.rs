//! Counting statistics: overlap matrices, number variance, Rényi/von Neumann
//! entropy, holography bounds, the edge profile and outside-droplet decay.

mod entropy;
pub(crate) mod overlap;
mod region;

pub use entropy::{
    holography_bounds, holography_upper_constant, radial_entropy_limit, renyi_entropy, von_neumann_entropy,
    HolographyBounds,
};
pub use overlap::{
    number_variance, number_variance_quadrature, number_variance_quadrature_with, overlap_matrix,
    overlap_matrix_with, overlap_spectrum, overlap_spectrum_dense, overlap_spectrum_dense_with,
    radial_overlap_eigs, radial_overlap_eigs_complement, resolve_rule, OverlapOptions, OverlapSpectrum,
    ResolvedRule,
};
pub use region::{signed_distance_ellipse, ConvexCurve, PlaneRule, Region, Resolution, RuleVariant};

use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::numerics::{erf_real, erfc_real, integrate_adaptive, QuadratureRule1D};
use std::f64::consts::PI;

/// f(S) = √(2π) ∫_S^∞ erfc(t) erfc(−t)/4 dt.
pub fn edge_profile_f(s: f64) -> Result<f64> {
    if s == f64::INFINITY {
        return Ok(0.0);
    }
    if s.is_nan() {
        return Err(Error::Validation("S is NaN".into()));
    }
    let g = |t: f64| erfc_real(t) * erfc_real(-t) / 4.0;
    let c = (2.0 * PI).sqrt();
    if s >= 0.0 {
        Ok(c * integrate_adaptive(g, s, f64::INFINITY, 1e-16, 1e-12)?)
    } else {
        // f(S) = f(0) + √(2π)∫_S^0 with f(0) computed the same way
        let head = integrate_adaptive(g, s, 0.0, 1e-16, 1e-12)?;
        let tail = integrate_adaptive(g, 0.0, f64::INFINITY, 1e-16, 1e-12)?;
        Ok(c * (head + tail))
    }
}

/// The set A_n(S): E_τ shrunk (S ≤ 0) or grown (S > 0) along the outward
/// normal by S√(1−τ²)/(2√n).
pub fn band_region(params: &EnsembleParams, s: f64) -> Result<Region> {
    let r = Region::Band { tau: params.tau, n: params.n, s };
    r.validate()?;
    Ok(r)
}

/// Laplacian ΔV = 2/(1−τ²) under the pinned density convention, the one
/// used by the band offset S/√(2nΔV).
pub fn laplacian_v(tau: f64) -> f64 {
    2.0 / (1.0 - tau * tau)
}

/// Leading-order count variance √(ΔV)/(2π)·√(n/2π)·|∂A| for a set A
/// compactly inside the droplet.
pub fn bulk_variance_prediction(n: usize, tau: f64, region: &Region) -> f64 {
    laplacian_v(tau).sqrt() / (2.0 * PI) * (n as f64 / (2.0 * PI)).sqrt() * region.boundary_length()
}

/// √(a/(2(1+a²)))·(a³/(a²−1))·e^{−n(a²−log a−1)} for the Ginibre
/// complement {|z| > a}, a > 1.
pub fn outside_variance_formula(n: usize, a: f64) -> Result<f64> {
    if !(a > 1.0) {
        return Err(Error::Domain(format!("outside decay formula needs a > 1, got {a}")));
    }
    let e = a * a - a.ln() - 1.0;
    Ok((a / (2.0 * (1.0 + a * a))).sqrt() * a.powi(3) / (a * a - 1.0) * (-(n as f64) * e).exp())
}

/// Leading term of the exact Ginibre Var for {|z| > a}, a > 1, from the
/// largest-j terms of ΣP(j+1,na²)Q(j+1,na²): a²/((a²−1)²√(2πn))·e^{−n(a²−2log a−1)}.
pub fn outside_variance_leading(n: usize, a: f64) -> Result<f64> {
    if !(a > 1.0) {
        return Err(Error::Domain(format!("outside decay needs a > 1, got {a}")));
    }
    let nf = n as f64;
    let e = a * a - 2.0 * a.ln() - 1.0;
    Ok(a * a / ((a * a - 1.0).powi(2) * (2.0 * PI * nf).sqrt()) * (-nf * e).exp())
}

/// ∫∫_{[c,d]×[e,f]} e^{−n(y−y')²} dy dy' via the second antiderivative
/// Λ(u) = u(√π/(2√n))erf(√n u) + e^{−nu²}/(2n).
fn gauss_box(n: f64, c: f64, d: f64, e: f64, f: f64) -> f64 {
    let sn = n.sqrt();
    let lam = |u: f64| u * (PI.sqrt() / (2.0 * sn)) * erf_real(sn * u) + (-n * u * u).exp() / (2.0 * n);
    lam(d - e) - lam(c - e) - lam(d - f) + lam(c - f)
}

/// (n/π)|A| − (n²/π²)∬_{A×A} e^{−n|z−w|²} by quadrature over vertical
/// slices (disks and squares).
pub fn gaussian_boundary_functional(region: &Region, n: usize) -> Result<f64> {
    region.validate()?;
    let nf = n as f64;
    // x(φ) = x0 + r cos φ parametrizes slices so that endpoints are smooth
    let (x_of, lo_hi, span): (Box<dyn Fn(f64) -> f64>, Box<dyn Fn(f64) -> (f64, f64, f64)>, (f64, f64)) = match region {
        Region::Disk { radius, center } => {
            let (r, cx, cy) = (*radius, center.0, center.1);
            (
                Box::new(move |p: f64| cx + r * p.cos()),
                Box::new(move |p: f64| {
                    let h = r * p.sin();
                    (cy - h, cy + h, r * p.sin())
                }),
                (0.0, PI),
            )
        }
        Region::Square { half_side } => {
            let a = *half_side;
            (Box::new(move |x: f64| x), Box::new(move |_| (-a, a, 1.0)), (-a, a))
        }
        other => {
            return Err(Error::Unsupported(format!("Gaussian functional is implemented for disks and squares, not {other:?}")))
        }
    };
    let len = match region {
        Region::Disk { radius, .. } => 2.0 * radius,
        Region::Square { half_side } => 2.0 * half_side,
        _ => unreachable!(),
    };
    if len == 0.0 {
        return Ok(0.0);
    }
    let panels = ((len * nf.sqrt()).ceil() as usize).max(4) * 2;
    let rule = QuadratureRule1D::composite(span.0, span.1, panels, 20);
    let pts: Vec<(f64, f64, f64, f64)> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&p, &w)| {
            let (lo, hi, jac) = lo_hi(p);
            (x_of(p), lo, hi, w * jac)
        })
        .collect();
    let mut double = 0.0;
    for &(x, lo, hi, w) in &pts {
        let mut row = 0.0;
        for &(x2, lo2, hi2, w2) in &pts {
            let g = (-nf * (x - x2) * (x - x2)).exp();
            if g == 0.0 {
                continue;
            }
            row += w2 * g * gauss_box(nf, lo, hi, lo2, hi2);
        }
        double += w * row;
    }
    Ok(nf / PI * region.area() - nf * nf / (PI * PI) * double)
}

/// Closed form of the Gaussian functional for the square [−a,a]² with the
/// elliptic scaling n → n/(1−τ²):
/// (n/(π(1−τ²)))(2a)² − (1/π)(X erf X − (1 − e^{−X²})/√π)², X = 2a√(n/(1−τ²)).
pub fn square_gaussian_closed_form(a: f64, n: usize, tau: f64) -> f64 {
    let m = n as f64 / (1.0 - tau * tau);
    let x = 2.0 * a * m.sqrt();
    let t = x * erf_real(x) - (1.0 - (-x * x).exp()) / PI.sqrt();
    m / PI * 4.0 * a * a - t * t / PI
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_profile_values() {
        assert!((edge_profile_f(0.0).unwrap() - 0.5).abs() < 1e-10);
        let f1 = edge_profile_f(1.0).unwrap();
        assert!((f1 + edge_profile_f(-1.0).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(edge_profile_f(f64::INFINITY).unwrap(), 0.0);
    }

    #[test]
    fn square_functional_matches_closed_form() {
        for n in [16usize, 100, 400] {
            let q = gaussian_boundary_functional(&Region::Square { half_side: 0.3 }, n).unwrap();
            let c = square_gaussian_closed_form(0.3, n, 0.0);
            assert!((q - c).abs() < 1e-8 * c, "n={n}: {q} vs {c}");
        }
    }

    #[test]
    fn outside_formula_literal() {
        let v = outside_variance_formula(50, 1.2).unwrap();
        assert!(v > 0.0 && v < 1e-4);
        assert!(outside_variance_formula(50, 1.0).is_err());
    }
}
