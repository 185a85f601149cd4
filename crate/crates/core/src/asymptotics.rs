//! Phase function, saddle points, limit kernels and kernel bounds.
//!
//! Elliptic coordinates are z = 2√τ cosh(ξ+iη), w = 2√τ cosh(ξ'+iη') with no
//! conjugation on w. All comparisons with exact kernels are on moduli.

use crate::ensemble::{g_value, to_elliptic, EllipticCoord};
use crate::error::{Error, Result};
use crate::numerics::{erfc_complex, integrate_adaptive};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};
use std::sync::OnceLock;

/// F(s) = s(z+w̄)²/(4τ(1+s)) − s(z−w̄)²/(4τ(1−s)) − log s + log τ without
/// checking for the singular points.
pub fn f_value_unchecked(tau: f64, z: C64, w: C64, s: C64) -> C64 {
    let wb = w.conj();
    let p = z + wb;
    let m = z - wb;
    let one = C64::new(1.0, 0.0);
    s * p * p / (4.0 * tau * (one + s)) - s * m * m / (4.0 * tau * (one - s)) - s.ln() + tau.ln()
}

fn check_pole(s: C64) -> Result<()> {
    let scale = 1e-14;
    if s.norm() < scale || (s - 1.0).norm() < scale || (s + 1.0).norm() < scale {
        Err(Error::Pole(format!("F is singular at s = {s}")))
    } else {
        Ok(())
    }
}

/// Phase function F(τ; z, w; s) with the principal logarithm.
pub fn f_value(tau: f64, z: C64, w: C64, s: C64) -> Result<C64> {
    check_pole(s)?;
    Ok(f_value_unchecked(tau, z, w, s))
}

/// F'(s), used for saddle checks.
pub fn f_derivative(tau: f64, z: C64, w: C64, s: C64) -> Result<C64> {
    check_pole(s)?;
    let wb = w.conj();
    let p = z + wb;
    let m = z - wb;
    let one = C64::new(1.0, 0.0);
    Ok(p * p / (4.0 * tau * (one + s) * (one + s)) - m * m / (4.0 * tau * (one - s) * (one - s)) - one / s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SaddleTag {
    A,
    AInv,
    B,
    BInv,
}

/// Case list of the saddle-point classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SaddleCase {
    /// z ≠ ±w̄: four simple saddles a, a⁻¹, b, b⁻¹.
    Generic,
    /// z = ±w̄ ≠ 0: two simple saddles a, a⁻¹.
    Conjugate,
    /// z at a focus ±2√τ, w not: order-two saddles a = b⁻¹ and a⁻¹ = b.
    FocusZ,
    /// w at a focus, z not: a = b and a⁻¹ = b⁻¹.
    FocusW,
    /// z = ±w at a focus: the single saddle ±1.
    FocusBoth,
    /// z = w = 0: no saddle points.
    Origin,
}

#[derive(Clone, Debug)]
pub struct SaddleSet {
    pub values: Vec<(SaddleTag, C64)>,
    pub case: SaddleCase,
}

fn coords(tau: f64, z: C64, w: C64) -> Result<(EllipticCoord, EllipticCoord)> {
    Ok((to_elliptic(z, tau)?, to_elliptic(w, tau)?))
}

/// (a, b) = (e^{ξ+ξ'}e^{i(η−η')}, e^{ξ−ξ'}e^{i(η+η')}).
pub fn saddle_ab(tau: f64, z: C64, w: C64) -> Result<(C64, C64)> {
    let (c, d) = coords(tau, z, w)?;
    Ok((
        C64::from_polar((c.xi + d.xi).exp(), c.eta - d.eta),
        C64::from_polar((c.xi - d.xi).exp(), c.eta + d.eta),
    ))
}

fn near(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-12 * (1.0 + a.norm().max(b.norm()))
}

pub fn saddle_points(tau: f64, z: C64, w: C64) -> Result<SaddleSet> {
    let focus = 2.0 * tau.sqrt();
    let is_focus = |u: C64| near(u, C64::new(focus, 0.0)) || near(u, C64::new(-focus, 0.0));
    if z.norm() == 0.0 && w.norm() == 0.0 {
        return Ok(SaddleSet { values: vec![], case: SaddleCase::Origin });
    }
    let (a, b) = saddle_ab(tau, z, w)?;
    let (fz, fw) = (is_focus(z), is_focus(w));
    let set = if fz && fw {
        SaddleSet { values: vec![(SaddleTag::A, a)], case: SaddleCase::FocusBoth }
    } else if fz {
        SaddleSet { values: vec![(SaddleTag::A, a), (SaddleTag::AInv, a.inv())], case: SaddleCase::FocusZ }
    } else if fw {
        SaddleSet { values: vec![(SaddleTag::A, a), (SaddleTag::AInv, a.inv())], case: SaddleCase::FocusW }
    } else if near(z, w.conj()) || near(z, -w.conj()) {
        // One of the pairs sits on the cancelled pole ±1; which one depends on
        // the coordinate representative chosen on the focal segment.
        let on_pole = |s: C64| near(s, C64::new(1.0, 0.0)) || near(s, C64::new(-1.0, 0.0));
        let values = if on_pole(a) && !on_pole(b) {
            vec![(SaddleTag::B, b), (SaddleTag::BInv, b.inv())]
        } else {
            vec![(SaddleTag::A, a), (SaddleTag::AInv, a.inv())]
        };
        SaddleSet { values, case: SaddleCase::Conjugate }
    } else {
        SaddleSet {
            values: vec![
                (SaddleTag::A, a),
                (SaddleTag::AInv, a.inv()),
                (SaddleTag::B, b),
                (SaddleTag::BInv, b.inv()),
            ],
            case: SaddleCase::Generic,
        }
    };
    Ok(set)
}

/// Closed forms of F at the four saddle points (valid modulo 2πi).
pub fn f_at_saddles(tau: f64, z: C64, w: C64) -> Result<Vec<(SaddleTag, C64)>> {
    let (c, d) = coords(tau, z, w)?;
    let lt = tau.ln();
    let zeta = C64::new(c.xi, c.eta);
    let zeta_c = C64::new(d.xi, -d.eta); // ξ' − iη'
    let e = |u: C64| 0.5 * (2.0 * u).exp();
    let fa = 1.0 + lt - zeta - zeta_c + e(zeta) + e(zeta_c);
    let fai = 1.0 + lt + zeta + zeta_c + e(-zeta) + e(-zeta_c);
    let fb = 1.0 + lt - zeta + zeta_c + e(zeta) + e(-zeta_c);
    let fbi = 1.0 + lt + zeta - zeta_c + e(-zeta) + e(zeta_c);
    Ok(vec![(SaddleTag::A, fa), (SaddleTag::AInv, fai), (SaddleTag::B, fb), (SaddleTag::BInv, fbi)])
}

/// F(τ) = −(τ(z² + w̄²) − 2zw̄)/(2(1−τ²)), the residue exponent.
pub fn f_at_tau(tau: f64, z: C64, w: C64) -> C64 {
    let wb = w.conj();
    -(tau * (z * z + wb * wb) - 2.0 * z * wb) / (2.0 * (1.0 - tau * tau))
}

/// F''(a^{±1}) = ∓2a^{∓2} sinh(ξ+iη) sinh(ξ'−iη') / sinh(ξ+iη+ξ'−iη') and
/// F''(b^{±1}) = ±2b^{∓2} sinh(ξ+iη) sinh(ξ'−iη') / sinh(ξ+iη−ξ'+iη').
pub fn f_second_derivative(tau: f64, z: C64, w: C64, which: SaddleTag) -> Result<C64> {
    let focus = 2.0 * tau.sqrt();
    let at_focus = |u: C64| near(u, C64::new(focus, 0.0)) || near(u, C64::new(-focus, 0.0));
    if at_focus(z) && at_focus(w) {
        return Err(Error::Degenerate("z and w both at foci".into()));
    }
    let (c, d) = coords(tau, z, w)?;
    let (a, b) = saddle_ab(tau, z, w)?;
    let zeta = C64::new(c.xi, c.eta);
    let zeta_c = C64::new(d.xi, -d.eta);
    let num = zeta.sinh() * zeta_c.sinh();
    let (den, sign, base, pow) = match which {
        SaddleTag::A => ((zeta + zeta_c).sinh(), -1.0, a, -2),
        SaddleTag::AInv => ((zeta + zeta_c).sinh(), 1.0, a, 2),
        SaddleTag::B => ((zeta - zeta_c).sinh(), 1.0, b, -2),
        SaddleTag::BInv => ((zeta - zeta_c).sinh(), -1.0, b, 2),
    };
    let sv = match which {
        SaddleTag::A | SaddleTag::AInv => a,
        _ => b,
    };
    if den.norm() < 1e-13 || (sv - 1.0).norm() < 1e-13 || (sv + 1.0).norm() < 1e-13 {
        return Err(Error::Degenerate(format!("F'' undefined at saddle {which:?} for z={z}, w={w}")));
    }
    Ok(sign * 2.0 * base.powi(pow) * num / den)
}

/// F̃(t) = F(1 + t²) written out:
/// (z² + w̄²)/(2τ) − (z+w̄)²/(4τ(2+t²)) + (z−w̄)²/(4τt²) − log(1+t²) + log τ.
pub fn tilde_f_value(tau: f64, z: C64, w: C64, t: C64) -> Result<C64> {
    let t2 = t * t;
    let one = C64::new(1.0, 0.0);
    let wb = w.conj();
    let m = z - wb;
    let p = z + wb;
    if (one + t2).norm() < 1e-14 || (t2 + 2.0).norm() < 1e-14 || (t2.norm() < 1e-28 && m.norm() > 0.0) {
        return Err(Error::Pole(format!("F~ is singular at t = {t}")));
    }
    let last = if m.norm() == 0.0 { C64::new(0.0, 0.0) } else { m * m / (4.0 * tau * t2) };
    Ok((z * z + wb * wb) / (2.0 * tau) - p * p / (4.0 * tau * (t2 + 2.0)) + last - (one + t2).ln() + tau.ln())
}

/// Saddles of F̃: ±√(s−1) for every saddle s of F; {0} when z = w = 0.
pub fn tilde_saddles(tau: f64, z: C64, w: C64) -> Result<Vec<C64>> {
    let set = saddle_points(tau, z, w)?;
    if set.case == SaddleCase::Origin {
        return Ok(vec![C64::new(0.0, 0.0)]);
    }
    let mut out = Vec::new();
    for (_, s) in set.values {
        let r = (s - 1.0).sqrt();
        out.push(r);
        out.push(-r);
    }
    Ok(out)
}

/// Bulk limit (1/π) exp(u v̄ − (|u|² + |v|²)/2).
pub fn bulk_limit_kernel(u: C64, v: C64) -> C64 {
    (u * v.conj() - 0.5 * (u.norm_sqr() + v.norm_sqr())).exp() / PI
}

/// Edge limit (1/2π) exp(u v̄ − (|u|²+|v|²)/2) erfc((u + v̄)/√2).
pub fn edge_limit_kernel(u: C64, v: C64) -> Result<C64> {
    let e = erfc_complex((u + v.conj()) / SQRT_2)?;
    Ok((u * v.conj() - 0.5 * (u.norm_sqr() + v.norm_sqr())).exp() * e / (2.0 * PI))
}

/// Default c in the window |ξ₊ − ξ_τ + iη₋| ≤ c(1−τ).
pub const WEAK_EDGE_WINDOW: f64 = 0.25;

/// Modulus of the leading collapsing-edge term
/// |erfc(√(8nτ sin(η'−iξ_τ) sin(η+iξ_τ)) (ξ₊−ξ_τ+iη₋)/√(1−τ²))| · n/(2π(1−τ²)) · e^{−n|z−w|²/(2(1−τ²))},
/// with light-cone variables ξ₊ = (ξ+ξ')/2, η₋ = (η−η')/2.
pub fn weak_edge_erfc_kernel(n: usize, tau: f64, z: C64, w: C64, window_c: f64) -> Result<f64> {
    let (c, d) = coords(tau, z, w)?;
    let xt = -0.5 * tau.ln();
    let xp = 0.5 * (c.xi + d.xi);
    let em = 0.5 * (c.eta - d.eta);
    let loc = C64::new(xp - xt, em);
    if loc.norm() > window_c * (1.0 - tau) {
        return Err(Error::Window(format!(
            "|xi+ - xi_tau + i eta-| = {} exceeds {}(1-tau)",
            loc.norm(),
            window_c
        )));
    }
    let nf = n as f64;
    let s1 = C64::new(d.eta, -xt).sin();
    let s2 = C64::new(c.eta, xt).sin();
    let arg = (8.0 * nf * tau * s1 * s2).sqrt() * loc / (1.0 - tau * tau).sqrt();
    let e = erfc_complex(arg)?;
    let g = (-nf * (z - w).norm_sqr() / (2.0 * (1.0 - tau * tau))).exp();
    Ok(e.norm() * nf / (2.0 * PI * (1.0 - tau * tau)) * g)
}

/// K = (1/π)∫_0^π dt/√(2 sin t).
pub fn kernel_bound_constant() -> f64 {
    static K: OnceLock<f64> = OnceLock::new();
    *K.get_or_init(|| {
        // t = π/2 ± … symmetric: 2∫_0^{π/2}; substitute t = u² to remove the
        // endpoint singularity: dt = 2u du, sin(u²) ~ u².
        let f = |u: f64| {
            if u == 0.0 {
                return 2.0 / SQRT_2;
            }
            2.0 * u / (2.0 * (u * u).sin()).sqrt()
        };
        let half = integrate_adaptive(f, 0.0, (PI / 2.0).sqrt(), 1e-15, 1e-14).expect("smooth integrand");
        2.0 * half / PI
    })
}

/// Relative accuracy of the exact kernel evaluation.
pub const BOUND_ROUNDING: f64 = 1e-12;

/// The two sides of the uniform kernel inequality.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct KernelBound {
    /// n 1_{ξ₊<ξ_τ}/(π(1−τ²)) · exp(−n|z−w|²/(2(1−τ²))).
    pub bulk: f64,
    /// (K/(2π√(1−τ²))) n e^{−n(ξ−ξ_τ)²g(ξ+iη)} e^{−n(ξ'−ξ_τ)²g(ξ'+iη')}/|1−e^{2(ξ₊−ξ_τ)}|;
    /// +∞ when ξ₊ = ξ_τ.
    pub deviation: f64,
}

impl KernelBound {
    /// bulk + deviation, an upper bound for |K_n(z,w)|.
    pub fn upper(&self) -> f64 {
        self.bulk + self.deviation
    }

    /// Whether ||K| − bulk| ≤ deviation, up to [`BOUND_ROUNDING`] relative
    /// to |K| + bulk: deep in the bulk the deviation term underflows the
    /// accuracy of any floating-point kernel.
    pub fn holds_for(&self, k_abs: f64) -> bool {
        (k_abs - self.bulk).abs() <= self.deviation + BOUND_ROUNDING * (k_abs + self.bulk)
    }
}

pub fn kernel_upper_bound(n: usize, tau: f64, z: C64, w: C64) -> Result<KernelBound> {
    let (c, d) = coords(tau, z, w)?;
    let xt = -0.5 * tau.ln();
    let nf = n as f64;
    let xp = 0.5 * (c.xi + d.xi);
    let bulk = if xp < xt {
        nf / (PI * (1.0 - tau * tau)) * (-nf * (z - w).norm_sqr() / (2.0 * (1.0 - tau * tau))).exp()
    } else {
        0.0
    };
    let den = (1.0 - (2.0 * (xp - xt)).exp()).abs();
    let deviation = if den == 0.0 {
        f64::INFINITY
    } else {
        let e1 = (c.xi - xt).powi(2) * g_value(c, tau)?;
        let e2 = (d.xi - xt).powi(2) * g_value(d, tau)?;
        kernel_bound_constant() / (2.0 * PI * (1.0 - tau * tau).sqrt()) * nf / den * (-nf * (e1 + e2)).exp()
    };
    Ok(KernelBound { bulk, deviation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_at_tau_matches_direct() {
        let (tau, z) = (0.4, C64::new(0.3, 0.2));
        let d = f_value(tau, z, z, C64::new(tau, 0.0)).unwrap();
        assert!((d - f_at_tau(tau, z, z)).norm() < 1e-13);
        assert!(f_value(tau, z, z, C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn limit_kernels_at_origin() {
        let o = C64::new(0.0, 0.0);
        assert!((bulk_limit_kernel(o, o).re - 1.0 / PI).abs() < 1e-16);
        assert!((edge_limit_kernel(o, o).unwrap().re - 0.5 / PI).abs() < 1e-16);
    }

    #[test]
    fn bound_constant() {
        assert!((kernel_bound_constant() - 1.180_340_599_016_096_2).abs() < 1e-12);
    }
}
