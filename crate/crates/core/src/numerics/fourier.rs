//! Fourier coefficients of samples on a uniform circle grid.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

/// ĝ(k) for |k| ≤ kmax, stored at index k + kmax.
#[derive(Clone, Debug)]
pub struct FourierCoefficients {
    pub kmax: usize,
    pub coeffs: Vec<C64>,
}

impl FourierCoefficients {
    pub fn get(&self, k: i64) -> C64 {
        let i = k + self.kmax as i64;
        if i < 0 || i as usize >= self.coeffs.len() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - self.kmax as i64, c))
    }
}

/// ĝ(k) = (1/2π)∫ g(e^{it}) e^{−ikt} dt from samples g(t_m), t_m = 2πm/N.
/// The periodic trapezoid rule is spectrally accurate for smooth g.
pub fn fourier_coefficients(samples: &[C64], kmax: usize) -> Result<FourierCoefficients> {
    let n = samples.len();
    if n < 4 * kmax.max(1) {
        return Err(Error::Grid(format!(
            "{n} samples cannot resolve |k| <= {kmax}; need at least {}",
            4 * kmax.max(1)
        )));
    }
    let mut coeffs = Vec::with_capacity(2 * kmax + 1);
    for k in -(kmax as i64)..=(kmax as i64) {
        // accumulate with an exact-phase table index to avoid drift
        let mut s = C64::new(0.0, 0.0);
        for (m, g) in samples.iter().enumerate() {
            let idx = ((k * m as i64).rem_euclid(n as i64)) as f64;
            let t = -2.0 * PI * idx / n as f64;
            s += g * C64::new(t.cos(), t.sin());
        }
        coeffs.push(s / n as f64);
    }
    Ok(FourierCoefficients { kmax, coeffs })
}

/// H^{1/2} seminorm Σ_k |k| |ĝ(k)|².
pub fn sobolev_half_norm(c: &FourierCoefficients) -> f64 {
    c.iter().map(|(k, v)| k.unsigned_abs() as f64 * v.norm_sqr()).sum()
}
