//! Small dense matrix containers with checked invariants.

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

/// Hermitian matrix stored densely in row-major order. The lower triangle is
/// always the exact conjugate of the upper and the diagonal is exactly real.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    order: usize,
    entries: Vec<C64>,
}

impl HermitianMatrix {
    /// Build from the upper triangle (j ≤ k) given by `f`.
    pub fn from_upper<F: FnMut(usize, usize) -> C64>(order: usize, mut f: F) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); order * order];
        for j in 0..order {
            entries[j * order + j] = C64::new(f(j, j).re, 0.0);
            for k in j + 1..order {
                let v = f(j, k);
                entries[j * order + k] = v;
                entries[k * order + j] = v.conj();
            }
        }
        HermitianMatrix { order, entries }
    }

    /// Accept a full matrix, checking Hermitian symmetry to `tol`·max|entry|
    /// and then symmetrizing exactly.
    pub fn from_full(order: usize, entries: Vec<C64>, tol: f64) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::Validation("entry count does not match order".into()));
        }
        let scale = entries.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        for j in 0..order {
            for k in j..order {
                let a = entries[j * order + k];
                let b = entries[k * order + j];
                if !(a.re.is_finite() && a.im.is_finite()) || (a - b.conj()).norm() > tol * scale {
                    return Err(Error::Validation(format!("matrix not Hermitian at ({j},{k})")));
                }
            }
        }
        Ok(Self::from_upper(order, |j, k| {
            if j == k {
                entries[j * order + j]
            } else {
                0.5 * (entries[j * order + k] + entries[k * order + j].conj())
            }
        }))
    }

    pub fn identity(order: usize) -> Self {
        Self::from_upper(order, |j, k| C64::new(if j == k { 1.0 } else { 0.0 }, 0.0))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[j * self.order + k]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.order).map(|j| self.get(j, j).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// U^* A U for unitary U (order × order, row-major).
    pub fn conjugated_by(&self, u: &[C64]) -> Self {
        let n = self.order;
        let mut au = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for l in 0..n {
                let a = self.entries[i * n + l];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..n {
                    au[i * n + k] += a * u[l * n + k];
                }
            }
        }
        let mut full = vec![C64::new(0.0, 0.0); n * n];
        for j in 0..n {
            for i in 0..n {
                let c = u[i * n + j].conj();
                for k in 0..n {
                    full[j * n + k] += c * au[i * n + k];
                }
            }
        }
        Self::from_upper(n, |j, k| full[j * n + k])
    }
}

/// General dense complex matrix, row-major, finite entries only.
#[derive(Clone, Debug)]
pub struct ComplexMatrix {
    order: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(order: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::Validation("entry count does not match order".into()));
        }
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { order, entries })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> C64>(order: usize, mut f: F) -> Result<Self> {
        let mut e = Vec::with_capacity(order * order);
        for j in 0..order {
            for k in 0..order {
                e.push(f(j, k));
            }
        }
        Self::new(order, e)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[j * self.order + k]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.order).map(|j| self.get(j, j)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}
