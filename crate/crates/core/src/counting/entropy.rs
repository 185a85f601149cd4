//! Rényi and von Neumann entropies of overlap spectra and the holography
//! bound S^q ≤ (4q log 2/(q−1))·Var.

use super::overlap::{number_variance, OverlapSpectrum};
use crate::error::{Error, Result};
use crate::numerics::{erfc_real, integrate_adaptive};
use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_2, PI, SQRT_2};

/// log(λ^q + (1−λ)^q) from λ and 1−λ given separately; when one of them is
/// small this is log1p of the q-th power ratio.
fn log_power_sum(l: f64, c: f64, q: f64) -> f64 {
    let (big, small) = if l >= c { (l, c) } else { (c, l) };
    if big == 0.0 {
        return f64::NEG_INFINITY;
    }
    q * big.ln() + (small / big).powf(q).ln_1p()
}

/// S^q = (1/(1−q)) Σ log(λ^q + (1−λ)^q), q > 1.
pub fn renyi_entropy(s: &OverlapSpectrum, q: f64) -> Result<f64> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Validation(format!("Renyi index q = {q} must exceed 1")));
    }
    let sum: f64 = s.lambdas.iter().zip(&s.complements).map(|(&l, &c)| log_power_sum(l, c, q)).sum();
    Ok((sum / (1.0 - q)).max(0.0))
}

fn xlogx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// S¹ = Σ −λ log λ − (1−λ) log(1−λ).
pub fn von_neumann_entropy(s: &OverlapSpectrum) -> f64 {
    s.lambdas.iter().zip(&s.complements).map(|(&l, &c)| -xlogx(l) - xlogx(c)).sum::<f64>().max(0.0)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HolographyBounds {
    pub q: f64,
    /// S^q / Var.
    pub ratio: f64,
    /// 4q log 2/(q−1).
    pub upper: f64,
    /// The smallest ratio seen; equals `ratio` for a single spectrum and is
    /// the running minimum after [`HolographyBounds::merge`].
    pub lower_observed: f64,
    pub violations: usize,
    pub count: usize,
}

impl HolographyBounds {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }

    pub fn merge(&mut self, o: &HolographyBounds) {
        self.ratio = self.ratio.max(o.ratio);
        self.lower_observed = self.lower_observed.min(o.lower_observed);
        self.violations += o.violations;
        self.count += o.count;
    }
}

pub fn holography_upper_constant(q: f64) -> f64 {
    4.0 * q * LN_2 / (q - 1.0)
}

pub fn holography_bounds(s: &OverlapSpectrum, q: f64) -> Result<HolographyBounds> {
    let var = number_variance(s);
    let ent = renyi_entropy(s, q)?;
    let upper = holography_upper_constant(q);
    let ratio = if var > 0.0 { ent / var } else { 0.0 };
    // relative slack for rounding in the two sums
    let violated = ent > upper * var * (1.0 + 1e-12) + 1e-300;
    Ok(HolographyBounds { q, ratio, upper, lower_observed: ratio, violations: violated as usize, count: 1 })
}

/// (1/(π√2))(1/(1−q)) ∫ log(2^{−q}erfc(x)^q + 2^{−q}erfc(−x)^q) dx, the
/// radial limit of S^q_n/(√n|∂A|) for disks inside the bulk.
pub fn radial_entropy_limit(q: f64) -> Result<f64> {
    if !(q > 1.0) {
        return Err(Error::Validation(format!("Renyi index q = {q} must exceed 1")));
    }
    // the integrand is even; on x ≥ 0 write it via erfc(x) and 2 − erfc(x)
    let h = |x: f64| {
        let e = erfc_real(x) / 2.0;
        log_power_sum(e, 1.0 - e, q)
    };
    let half = integrate_adaptive(h, 0.0, f64::INFINITY, 1e-15, 1e-13)?;
    Ok(2.0 * half / (PI * SQRT_2) / (1.0 - q))
}
