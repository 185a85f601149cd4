//! Limiting variances: fixed τ (Dirichlet energy on the ellipse plus the
//! H^{1/2} norm of the boundary trace) and the weak non-Hermiticity regimes.

use super::testfn::TestFunction;
use crate::counting::Region;
use crate::error::{Error, Result};
use crate::numerics::{fourier_coefficients, sobolev_half_norm, QuadratureRule1D};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Tie tolerance for the regime boundaries α = γ and γ = (1+α)/2.
pub const REGIME_TIE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegimeLabel {
    /// α > γ.
    Gue,
    /// α = γ.
    Transition,
    /// α < γ < (1+α)/2.
    Ginibre,
    /// γ = (1+α)/2.
    Microscopic,
    /// γ > (1+α)/2.
    Degenerate,
}

impl RegimeLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeLabel::Gue => "GUE",
            RegimeLabel::Transition => "TRANSITION",
            RegimeLabel::Ginibre => "GINIBRE",
            RegimeLabel::Microscopic => "MICROSCOPIC",
            RegimeLabel::Degenerate => "DEGENERATE",
        }
    }
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn regime_classify(alpha: f64, gamma: f64) -> Result<RegimeLabel> {
    if !(alpha.is_finite() && gamma.is_finite() && alpha >= 0.0 && gamma >= 0.0) {
        return Err(Error::Validation(format!("(alpha, gamma) = ({alpha}, {gamma}) must be finite and nonnegative")));
    }
    let micro = (1.0 + alpha) / 2.0;
    Ok(if (alpha - gamma).abs() <= REGIME_TIE_TOL {
        RegimeLabel::Transition
    } else if alpha > gamma {
        RegimeLabel::Gue
    } else if (gamma - micro).abs() <= REGIME_TIE_TOL {
        RegimeLabel::Microscopic
    } else if gamma < micro {
        RegimeLabel::Ginibre
    } else {
        RegimeLabel::Degenerate
    })
}

/// ∫_A |∇f|² with the region's product rule (resolved as for n = 1024).
pub fn sobolev_h1(f: &TestFunction, domain: &Region) -> Result<f64> {
    use crate::counting::{Resolution, RuleVariant};
    domain.validate()?;
    let tau = match domain {
        Region::Band { tau, .. } => *tau,
        _ => 0.0,
    };
    let rule = domain.rule(1024, tau, Resolution { radial: 1, angular: 0 }, RuleVariant::Primary)?;
    Ok(rule.integrate(|z| {
        let (a, b) = f.gradient(z);
        a * a + b * b
    }))
}

/// Σ_k |k||ĝ(k)|² from samples g(2πm/N), m = 0..N.
pub fn sobolev_half_circle(samples: &[f64]) -> Result<f64> {
    let kmax = samples.len() / 4;
    if kmax == 0 {
        return Err(Error::Grid("need at least 4 boundary samples".into()));
    }
    let s: Vec<C64> = samples.iter().map(|&v| C64::new(v, 0.0)).collect();
    Ok(sobolev_half_norm(&fourier_coefficients(&s, kmax)?))
}

/// (1/16π²)∬ (g(s)−g(t))²/sin²((s−t)/2) ds dt, the double-contour form of
/// Σ|k||ĝ(k)|²; the removable diagonal uses 4g'(s)².
pub fn sobolev_half_circle_double<G: Fn(f64) -> f64, D: Fn(f64) -> f64>(g: G, dg: D, m: usize) -> f64 {
    let h = 2.0 * PI / m as f64;
    let pts: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();
    let vals: Vec<f64> = pts.iter().map(|&t| g(t)).collect();
    let mut sum = 0.0;
    for (i, &s) in pts.iter().enumerate() {
        for (j, &t) in pts.iter().enumerate() {
            sum += if i == j {
                4.0 * dg(s).powi(2)
            } else {
                (vals[i] - vals[j]).powi(2) / ((s - t) / 2.0).sin().powi(2)
            };
        }
    }
    sum * h * h / (16.0 * PI * PI)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FixedTauLimit {
    pub sigma2: f64,
    pub sigma2_tilde: f64,
    pub total: f64,
}

const BOUNDARY_SAMPLES: usize = 2048;

/// σ² = (1/4π)∫_{E_τ}|∇f|², σ̃² = ½Σ|k||ĝ(k)|² with g(t) = f(e^{it} + τe^{−it}).
pub fn limit_variance_fixed_tau(f: &TestFunction, tau: f64) -> Result<FixedTauLimit> {
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Validation(format!("tau = {tau} outside [0, 1)")));
    }
    let ellipse = Region::Band { tau, n: 1, s: 0.0 };
    let sigma2 = sobolev_h1(f, &ellipse)? / (4.0 * PI);
    let samples: Vec<f64> = (0..BOUNDARY_SAMPLES)
        .map(|m| {
            let t = 2.0 * PI * m as f64 / BOUNDARY_SAMPLES as f64;
            f.eval(C64::new((1.0 + tau) * t.cos(), (1.0 - tau) * t.sin()))
        })
        .collect();
    let sigma2_tilde = 0.5 * sobolev_half_circle(&samples)?;
    Ok(FixedTauLimit { sigma2, sigma2_tilde, total: sigma2 + sigma2_tilde })
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WeakPrediction {
    pub regime: RegimeLabel,
    pub value: f64,
    /// Dirichlet-energy part ((i) and the strip term of (ii)).
    pub area_term: f64,
    /// Line or real-axis part ((ii) and (iii)).
    pub line_term: f64,
}

const PANELS: usize = 48;
const ORDER: usize = 16;

fn support(f: &TestFunction) -> Result<(f64, f64, f64, f64)> {
    f.support_box().ok_or_else(|| {
        Error::Unsupported("weak non-Hermiticity limits need a compactly supported test function".into())
    })
}

fn grad2(f: &TestFunction, z: C64) -> f64 {
    let (a, b) = f.gradient(z);
    a * a + b * b
}

/// ∫ over supp f ∩ {|Im z| ≤ h} of |∇f|².
fn dirichlet_strip(f: &TestFunction, h: f64) -> Result<f64> {
    let (x0, x1, y0, y1) = support(f)?;
    let (c, d) = (y0.max(-h), y1.min(h));
    if c >= d {
        return Ok(0.0);
    }
    let rx = QuadratureRule1D::composite(x0, x1, PANELS, ORDER);
    let ry = QuadratureRule1D::composite(c, d, PANELS, ORDER);
    let mut s = 0.0;
    for (&y, &wy) in ry.nodes.iter().zip(&ry.weights) {
        let row: f64 = rx.nodes.iter().zip(&rx.weights).map(|(&x, &wx)| wx * grad2(f, C64::new(x, y))).sum();
        s += wy * row;
    }
    Ok(s)
}

/// ∬_ℝ² ((h(x)−h(y))/(x−y))² dx dy for h(x) = f(x + i·c). Outside [x0, x1]
/// the y-integral is done in closed form; the diagonal uses h'(x)².
fn line_energy(f: &TestFunction, c: f64) -> Result<f64> {
    let (x0, x1, y0, y1) = support(f)?;
    if c < y0 || c > y1 {
        return Ok(0.0);
    }
    let rule = QuadratureRule1D::composite(x0, x1, 2 * PANELS, ORDER);
    let h: Vec<f64> = rule.nodes.iter().map(|&x| f.eval(C64::new(x, c))).collect();
    let dh: Vec<f64> = rule.nodes.iter().map(|&x| f.gradient(C64::new(x, c)).0).collect();
    let diag_tol = 1e-6 * f.support_radius();
    let mut inner = 0.0;
    for (i, (&x, &wx)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
        let mut row = 0.0;
        for (j, (&y, &wy)) in rule.nodes.iter().zip(&rule.weights).enumerate() {
            let q = if (x - y).abs() < diag_tol { dh[i] } else { (h[i] - h[j]) / (x - y) };
            row += wy * q * q;
        }
        let outside = h[i] * h[i] * (1.0 / (x1 - x) + 1.0 / (x - x0));
        inner += wx * (row + 2.0 * outside);
    }
    Ok(inner)
}

/// (1/8π²κ²)∬(f(z)−f(w))² e^{−|z−w|²/2κ}
/// = (1/8π²κ²)(4πκ∫f² − 2∬ f(z)f(w)e^{−|z−w|²/2κ}).
fn microscopic_energy(f: &TestFunction, kappa: f64) -> Result<f64> {
    let (x0, x1, y0, y1) = support(f)?;
    let rx = QuadratureRule1D::composite(x0, x1, 6, ORDER);
    let ry = QuadratureRule1D::composite(y0, y1, 6, ORDER);
    let mut pts = Vec::new();
    for (&y, &wy) in ry.nodes.iter().zip(&ry.weights) {
        for (&x, &wx) in rx.nodes.iter().zip(&rx.weights) {
            let z = C64::new(x, y);
            let v = f.eval(z);
            if v != 0.0 {
                pts.push((z, wx * wy * v));
            }
        }
    }
    let l2: f64 = pts.iter().map(|&(z, wv)| wv * f.eval(z)).sum();
    let mut cross = 0.0;
    for &(z, a) in &pts {
        let row: f64 = pts.iter().map(|&(w, b)| b * (-(z - w).norm_sqr() / (2.0 * kappa)).exp()).sum();
        cross += a * row;
    }
    Ok((4.0 * PI * kappa * l2 - 2.0 * cross) / (8.0 * PI * PI * kappa * kappa))
}

/// The weak non-Hermiticity limit of Var Σ f(n^γ z_j) at τ = 1 − κn^{−α}.
pub fn limit_variance_weak(f: &TestFunction, alpha: f64, gamma: f64, kappa: f64) -> Result<WeakPrediction> {
    f.validate()?;
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::Validation(format!("kappa = {kappa} must be positive")));
    }
    let regime = regime_classify(alpha, gamma)?;
    support(f)?;
    let (area_term, line_term) = match regime {
        RegimeLabel::Ginibre => (dirichlet_strip(f, f64::INFINITY)? / (4.0 * PI), 0.0),
        RegimeLabel::Microscopic => (microscopic_energy(f, kappa)?, 0.0),
        RegimeLabel::Degenerate => (0.0, 0.0),
        RegimeLabel::Transition => (
            dirichlet_strip(f, kappa)? / (4.0 * PI),
            (line_energy(f, kappa)? + line_energy(f, -kappa)?) / (4.0 * PI * PI),
        ),
        RegimeLabel::Gue => (0.0, line_energy(f, 0.0)? / (2.0 * PI * PI)),
    };
    let (area_term, line_term) = if f.is_constant() { (0.0, 0.0) } else { (area_term, line_term) };
    Ok(WeakPrediction { regime, value: area_term + line_term, area_term, line_term })
}
