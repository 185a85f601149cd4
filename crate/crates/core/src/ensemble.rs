//! Ensemble parameters, the elliptic potential, droplet geometry, elliptic
//! coordinates and the conformal/obstacle maps.
//!
//! Density convention: the equilibrium density is (1/π)·∂∂̄V, i.e. the
//! standard Laplacian over 4π. For the elliptic potential this is the uniform
//! density 1/(π(1−τ²)) on the ellipse with semi-axes 1±τ, of total mass 1.

use crate::error::{Error, Result};
use crate::numerics::QuadratureRule1D;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakParams {
    pub kappa: f64,
    pub alpha: f64,
    /// Statistic rescaling exponent: the test function is f(n^γ z).
    pub gamma: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub tau: f64,
    pub weak: Option<WeakParams>,
}

impl EnsembleParams {
    pub fn new(n: usize, tau: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("n must be positive".into()));
        }
        if !(0.0..1.0).contains(&tau) {
            return Err(Error::Validation(format!("tau = {tau} outside [0, 1)")));
        }
        Ok(EnsembleParams { n, tau, weak: None })
    }

    /// τ = 1 − κ n^{−α}.
    pub fn weak(n: usize, kappa: f64, alpha: f64, gamma: Option<f64>) -> Result<Self> {
        if !(kappa > 0.0) {
            return Err(Error::Validation("kappa must be positive".into()));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Validation(format!("alpha = {alpha} outside (0, 1)")));
        }
        if let Some(g) = gamma {
            if !(g > 0.0) {
                return Err(Error::Validation("gamma must be positive".into()));
            }
        }
        let tau = 1.0 - kappa * (n as f64).powf(-alpha);
        let mut p = Self::new(n, tau)?;
        p.weak = Some(WeakParams { kappa, alpha, gamma });
        Ok(p)
    }

    pub fn geometry(&self) -> DropletGeometry {
        DropletGeometry::new(self.tau)
    }
}

/// z = 2√τ cosh(ξ + iη).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticCoord {
    pub xi: f64,
    pub eta: f64,
}

impl EllipticCoord {
    /// (ξ + ξ', η − η')-type light-cone combinations with another point:
    /// returns (ξ₊, ξ₋, η₊, η₋) = (ξ+ξ', ξ−ξ', η+η', η−η').
    pub fn light_cone(&self, other: &EllipticCoord) -> (f64, f64, f64, f64) {
        (self.xi + other.xi, self.xi - other.xi, self.eta + other.eta, self.eta - other.eta)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DropletGeometry {
    pub tau: f64,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// −½ log τ, +∞ at τ = 0.
    pub xi_tau: f64,
}

impl DropletGeometry {
    pub fn new(tau: f64) -> Self {
        DropletGeometry {
            tau,
            semi_major: 1.0 + tau,
            semi_minor: 1.0 - tau,
            xi_tau: if tau > 0.0 { -0.5 * tau.ln() } else { f64::INFINITY },
        }
    }

    pub fn boundary_point(&self, eta: f64) -> C64 {
        C64::new(self.semi_major * eta.cos(), self.semi_minor * eta.sin())
    }

    /// (x/(1+τ))² + (y/(1−τ))² ≤ 1.
    pub fn contains(&self, z: C64) -> bool {
        self.implicit(z) <= 1.0
    }

    pub fn implicit(&self, z: C64) -> f64 {
        (z.re / self.semi_major).powi(2) + (z.im / self.semi_minor).powi(2)
    }

    pub fn area(&self) -> f64 {
        PI * self.semi_major * self.semi_minor
    }

    /// Uniform equilibrium density 1/(π(1−τ²)).
    pub fn density(&self) -> f64 {
        1.0 / (PI * (1.0 - self.tau * self.tau))
    }

    /// Arc length of ∂E_τ by Gauss–Legendre quadrature of |z'(η)| over a
    /// quarter period (the integrand is smooth and the rule spectrally
    /// accurate).
    pub fn perimeter(&self) -> f64 {
        let (a, b) = (self.semi_major, self.semi_minor);
        let r = QuadratureRule1D::composite(0.0, PI / 2.0, 8, 24);
        4.0 * r.integrate(|t| (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt())
    }
}

/// V(z) = (Re z)²/(1+τ) + (Im z)²/(1−τ).
pub fn potential_v(z: C64, tau: f64) -> f64 {
    z.re * z.re / (1.0 + tau) + z.im * z.im / (1.0 - tau)
}

/// Polarization V(z, w̄) = (z w̄ − τ(z² + w̄²)/2)/(1−τ²); V(z, z̄) = V(z).
pub fn potential_polarized(z: C64, w: C64, tau: f64) -> C64 {
    let wb = w.conj();
    (z * wb - tau * (z * z + wb * wb) * 0.5) / (1.0 - tau * tau)
}

/// ∂∂̄V = ¼ΔV = 1/(1−τ²) (constant).
pub fn dbar_d_potential(tau: f64) -> f64 {
    1.0 / (1.0 - tau * tau)
}

fn require_elliptic(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("elliptic coordinates need 0 < tau < 1, got {tau}")))
    }
}

/// Inverse of z = 2√τ cosh(ζ), ζ = ξ + iη, on the branch ξ ≥ 0 with
/// η ∈ (−π, π]; on the focal segment (ξ = 0) η is taken in [0, π].
pub fn to_elliptic(z: C64, tau: f64) -> Result<EllipticCoord> {
    require_elliptic(tau)?;
    let u = z / (2.0 * tau.sqrt());
    // acosh(u) = log(u + √(u−1)√(u+1)) has Re ≥ 0 with this factorization
    let one = C64::new(1.0, 0.0);
    let mut zeta = (u + (u - one).sqrt() * (u + one).sqrt()).ln();
    if zeta.re < 0.0 {
        zeta = -zeta;
    }
    let mut xi = zeta.re;
    let mut eta = zeta.im;
    if xi < 1e-15 {
        xi = 0.0;
        eta = eta.abs();
    }
    if eta <= -PI {
        eta += 2.0 * PI;
    }
    if eta > PI {
        eta -= 2.0 * PI;
    }
    Ok(EllipticCoord { xi, eta })
}

pub fn from_elliptic(c: EllipticCoord, tau: f64) -> C64 {
    2.0 * tau.sqrt() * C64::new(c.xi, c.eta).cosh()
}

/// ψ(z) = ½(z + √(z² − 4τ)), the exterior conformal map of E_τ onto |w| > 1,
/// with the root branch ~ z at infinity.
pub fn conformal_psi(z: C64, tau: f64) -> Result<C64> {
    let f = 2.0 * tau.sqrt();
    if z.im == 0.0 && z.re.abs() <= f {
        return Err(Error::Branch(format!("psi undefined on the focal cut, z = {z}")));
    }
    // √(z−2√τ)√(z+2√τ) has its cut on the focal segment only
    let r = (z - f).sqrt() * (z + f).sqrt();
    Ok(0.5 * (z + r))
}

/// φ(w) = w + τ/w, inverse of ψ.
pub fn conformal_phi(w: C64, tau: f64) -> C64 {
    w + tau / w
}

/// V̌: equal to V on E_τ and to 2 log|ψ| + 1 + τ Re(1/ψ²) outside; the
/// maximal subharmonic minorant of V with logarithmic growth (C¹ across ∂E_τ).
pub fn obstacle_v(z: C64, tau: f64) -> f64 {
    let g = DropletGeometry::new(tau);
    if g.contains(z) {
        return potential_v(z, tau);
    }
    if tau == 0.0 {
        return 1.0 + 2.0 * z.norm().ln();
    }
    let psi = conformal_psi(z, tau).expect("exterior points are off the focal cut");
    2.0 * psi.norm().ln() + 1.0 + tau * (psi * psi).inv().re
}

/// g(ξ+iη) = [V/2 − ½ − (ξ−ξ_τ) − ½e^{−2ξ}cos 2η]/(ξ−ξ_τ)², so that outside
/// the droplet V − V̌ = 2(ξ−ξ_τ)² g. At ξ = ξ_τ the continuous extension
/// (1 + τ² − 2τ cos 2η)/(1 − τ²) is returned.
pub fn g_value(c: EllipticCoord, tau: f64) -> Result<f64> {
    require_elliptic(tau)?;
    let xt = -0.5 * tau.ln();
    let d = c.xi - xt;
    if d.abs() < 1e-4 {
        // Taylor expansion of the numerator about ξ_τ to third order keeps
        // the ratio accurate where it would otherwise cancel.
        let g0 = (1.0 + tau * tau - 2.0 * tau * (2.0 * c.eta).cos()) / (1.0 - tau * tau);
        let num3 = numerator_third_derivative(c.eta, tau, xt);
        return Ok(g0 + num3 * d / 6.0);
    }
    Ok(g_numerator(c.xi, c.eta, tau, xt) / (d * d))
}

fn g_numerator(xi: f64, eta: f64, tau: f64, xt: f64) -> f64 {
    let half_v = 2.0 * tau / (1.0 + tau) * xi.cosh().powi(2) * eta.cos().powi(2)
        + 2.0 * tau / (1.0 - tau) * xi.sinh().powi(2) * eta.sin().powi(2);
    half_v - 0.5 - (xi - xt) - 0.5 * (-2.0 * xi).exp() * (2.0 * eta).cos()
}

fn numerator_third_derivative(eta: f64, tau: f64, xt: f64) -> f64 {
    // d³/dξ³ of the numerator at ξ_τ:
    // V/2 = τ/(1+τ) cos²η (1 + cosh 2ξ) + τ/(1−τ) sin²η (cosh 2ξ − 1)
    let s = (2.0 * xt).sinh();
    let a = tau / (1.0 + tau) * eta.cos().powi(2) + tau / (1.0 - tau) * eta.sin().powi(2);
    8.0 * a * s + 4.0 * (-2.0 * xt).exp() * (2.0 * eta).cos()
}

/// Point of ∂E_τ at parameter η and the outward unit normal there, which is
/// proportional to sinh(ξ_τ + iη) ∝ e^{iη} − τe^{−iη}.
pub fn edge_point_and_normal(eta: f64, tau: f64) -> (C64, C64) {
    let g = DropletGeometry::new(tau);
    let p = g.boundary_point(eta);
    let nvec = C64::from_polar(1.0, eta) - tau * C64::from_polar(1.0, -eta);
    (p, nvec / nvec.norm())
}
