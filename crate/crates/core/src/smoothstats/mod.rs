//! Smooth linear statistics Σ f(z_j): exact finite-n variance and the
//! fixed-τ and weak non-Hermiticity limits.

mod exact;
mod limits;
mod testfn;

pub use exact::{smooth_variance_exact, smooth_variance_exact_with, SmoothOptions, SmoothVariance};
pub use limits::{
    limit_variance_fixed_tau, limit_variance_weak, regime_classify, sobolev_h1, sobolev_half_circle,
    sobolev_half_circle_double, FixedTauLimit, RegimeLabel, WeakPrediction, REGIME_TIE_TOL,
};
pub use testfn::{GridFunction, Parity, Smoothness, Symmetry, TestFunction, GRADIENT_STEP};

use crate::ensemble::EnsembleParams;
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Floor of the denominator in [`VarianceReport::relative_gap`].
pub const GAP_EPS: f64 = 1e-300;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VarianceReport {
    pub exact_value: f64,
    pub predicted: f64,
    /// A [`RegimeLabel`] name, or `fixed-tau`, `bulk`, ... for the other laws.
    pub regime: String,
    pub relative_gap: f64,
    pub runtime_ms: f64,
}

impl VarianceReport {
    pub fn new(exact_value: f64, predicted: f64, regime: impl Into<String>, started: Instant) -> Self {
        VarianceReport {
            exact_value,
            predicted,
            regime: regime.into(),
            relative_gap: (exact_value - predicted).abs() / predicted.max(GAP_EPS),
            runtime_ms: started.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Exact variance at fixed τ against σ² + σ̃².
pub fn fixed_tau_report(params: &EnsembleParams, f: &TestFunction) -> Result<VarianceReport> {
    let t0 = Instant::now();
    let exact = smooth_variance_exact(params, f, None)?;
    let lim = limit_variance_fixed_tau(f, params.tau)?;
    Ok(VarianceReport::new(exact, lim.total, "fixed-tau", t0))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PhaseCell {
    pub alpha: f64,
    pub gamma: f64,
    pub regime: RegimeLabel,
    pub exact: f64,
    pub predicted: f64,
    pub relative_gap: f64,
    pub runtime_ms: f64,
}

/// One (α, γ) cell: τ = 1 − κn^{−α}, statistic Σ f(n^γ z_j).
pub fn phase_cell(n: usize, kappa: f64, alpha: f64, gamma: f64, f: &TestFunction) -> Result<PhaseCell> {
    let t0 = Instant::now();
    let params = EnsembleParams::weak(n, kappa, alpha, Some(gamma))?;
    let pred = limit_variance_weak(f, alpha, gamma, kappa)?;
    let exact = smooth_variance_exact(&params, f, Some(gamma))?;
    let r = VarianceReport::new(exact, pred.value, pred.regime.as_str(), t0);
    Ok(PhaseCell {
        alpha,
        gamma,
        regime: pred.regime,
        exact,
        predicted: pred.value,
        relative_gap: r.relative_gap,
        runtime_ms: r.runtime_ms,
    })
}

/// Row-major over γ within α.
pub fn phase_diagram(n: usize, kappa: f64, alphas: &[f64], gammas: &[f64], f: &TestFunction) -> Result<Vec<PhaseCell>> {
    let mut out = Vec::with_capacity(alphas.len() * gammas.len());
    for &a in alphas {
        for &g in gammas {
            out.push(phase_cell(n, kappa, a, g, f)?);
        }
    }
    Ok(out)
}
