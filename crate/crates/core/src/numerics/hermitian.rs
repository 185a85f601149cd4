//! Cyclic threshold Jacobi for Hermitian eigenvalues.

use super::matrix::HermitianMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug)]
pub struct JacobiOptions {
    pub max_sweeps: usize,
    /// Stop once the off-diagonal Frobenius norm is below `off_tol`·‖A‖_F.
    pub off_tol: f64,
}

impl Default for JacobiOptions {
    fn default() -> Self {
        JacobiOptions { max_sweeps: 64, off_tol: 1e-12 }
    }
}

pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    hermitian_eigenvalues_with(m, JacobiOptions::default())
}

/// Eigenvalues in ascending order.
///
/// Each rotation acts on rows/columns (p, q) with the unitary
/// U = [[c, s], [−s e^{−iφ}, c e^{−iφ}]], φ = arg a_pq, which first makes a_pq
/// real and then applies the classical real Jacobi rotation.
pub fn hermitian_eigenvalues_with(m: &HermitianMatrix, opts: JacobiOptions) -> Result<Vec<f64>> {
    let n = m.order();
    if n == 0 {
        return Ok(vec![]);
    }
    let mut a: Vec<C64> = m.entries().to_vec();
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let mut d: Vec<f64> = (0..n).map(|j| a[j * n + j].re).collect();
    let off = |a: &[C64]| -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for k in j + 1..n {
                s += a[j * n + k].norm_sqr();
            }
        }
        (2.0 * s).sqrt()
    };
    let target = opts.off_tol * norm;
    let mut converged = off(&a) <= target;
    let mut sweep = 0;
    while !converged && sweep < opts.max_sweeps {
        sweep += 1;
        let off_now = off(&a);
        // threshold: rotate only entries that matter at this stage
        let thresh = if sweep < 4 { 0.2 * off_now / (n * n) as f64 } else { 0.0 };
        for p in 0..n {
            for q in p + 1..n {
                let h = a[p * n + q];
                let habs = h.norm();
                if habs == 0.0 {
                    continue;
                }
                if sweep > 4 && habs < 1e-3 * f64::EPSILON * (d[p].abs() + d[q].abs()) {
                    a[p * n + q] = C64::new(0.0, 0.0);
                    a[q * n + p] = C64::new(0.0, 0.0);
                    continue;
                }
                if habs <= thresh {
                    continue;
                }
                let ph = h / habs; // e^{iφ}
                let zeta = (d[q] - d[p]) / (2.0 * habs);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let emi = ph.conj(); // e^{−iφ}
                d[p] -= t * habs;
                d[q] += t * habs;
                a[p * n + q] = C64::new(0.0, 0.0);
                a[q * n + p] = C64::new(0.0, 0.0);
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let nrp = arp * c - arq * (s * emi);
                    let nrq = arp * s + arq * (c * emi);
                    a[r * n + p] = nrp;
                    a[p * n + r] = nrp.conj();
                    a[r * n + q] = nrq;
                    a[q * n + r] = nrq.conj();
                }
                a[p * n + p] = C64::new(d[p], 0.0);
                a[q * n + q] = C64::new(d[q], 0.0);
            }
        }
        converged = off(&a) <= target;
    }
    if !converged {
        return Err(Error::Convergence(format!(
            "Jacobi did not converge in {} sweeps (off-diagonal norm {:e})",
            opts.max_sweeps,
            off(&a)
        )));
    }
    d.sort_by(|x, y| x.total_cmp(y));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_conjugated_diagonal() {
        let e = hermitian_eigenvalues(&HermitianMatrix::identity(5)).unwrap();
        assert_eq!(e, vec![1.0; 5]);
        let (c, s) = (0.6f64, 0.8f64);
        let ph = C64::from_polar(1.0, 0.7);
        let u = vec![C64::new(c, 0.0), -s * ph.conj(), s * ph, C64::new(c, 0.0)];
        let d = HermitianMatrix::from_upper(2, |j, k| {
            if j == k {
                C64::new([0.2, 0.7][j], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let m = d.conjugated_by(&u);
        let e = hermitian_eigenvalues(&m).unwrap();
        assert!((e[0] - 0.2).abs() < 1e-12 && (e[1] - 0.7).abs() < 1e-12);
    }
}
