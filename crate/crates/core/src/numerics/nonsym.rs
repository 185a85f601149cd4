//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form followed by single-shift (Wilkinson) QR with deflation.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug)]
pub struct QrOptions {
    /// Total iteration budget is `max_iter_factor · order`.
    pub max_iter_factor: usize,
}

impl Default for QrOptions {
    fn default() -> Self {
        QrOptions { max_iter_factor: 30 }
    }
}

pub fn nonsymmetric_eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    nonsymmetric_eigenvalues_with(m, QrOptions::default())
}

pub fn nonsymmetric_eigenvalues_with(m: &ComplexMatrix, opts: QrOptions) -> Result<Vec<C64>> {
    let n = m.order();
    let mut h = m.entries().to_vec();
    hessenberg_in_place(&mut h, n);
    hessenberg_qr(&mut h, n, opts.max_iter_factor * n.max(1))
}

/// Overwrite the row-major n×n matrix with a unitarily similar upper
/// Hessenberg matrix (entries below the subdiagonal are set to zero).
pub fn hessenberg_in_place(a: &mut [C64], n: usize) {
    if n < 3 {
        return;
    }
    let zero = C64::new(0.0, 0.0);
    let mut v = vec![zero; n];
    let mut w = vec![zero; n];
    let mut vc = vec![zero; n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let mut xnorm2 = 0.0;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
            xnorm2 += v[i].norm_sqr();
        }
        let tail: f64 = xnorm2 - v[0].norm_sqr();
        if tail == 0.0 {
            continue;
        }
        let xnorm = xnorm2.sqrt();
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        v[0] = x0 - alpha;
        let vnorm2 = v[..m].iter().map(|z| z.norm_sqr()).sum::<f64>();
        let beta = 2.0 / vnorm2;
        // A ← (I − β v v^*) A on rows k+1.., columns k..
        for x in w[..n].iter_mut() {
            *x = zero;
        }
        for i in 0..m {
            let vc = v[i].conj();
            let row = &a[(k + 1 + i) * n + k..(k + 2 + i) * n];
            for (x, r) in w[k..n].iter_mut().zip(row) {
                *x += vc * r;
            }
        }
        for i in 0..m {
            let vi = v[i] * beta;
            let row = &mut a[(k + 1 + i) * n + k..(k + 2 + i) * n];
            for (r, x) in row.iter_mut().zip(&w[k..n]) {
                *r -= vi * x;
            }
        }
        // A ← A (I − β v v^*) on all rows, columns k+1..
        for (c, x) in vc[..m].iter_mut().zip(&v[..m]) {
            *c = x.conj();
        }
        for r in 0..n {
            let row = &mut a[r * n + k + 1..(r + 1) * n];
            let s = row.iter().zip(&v[..m]).fold(zero, |acc, (x, y)| acc + x * y) * beta;
            for (x, y) in row.iter_mut().zip(&vc[..m]) {
                *x -= s * y;
            }
        }
        a[(k + 1) * n + k] = alpha;
        for i in 1..m {
            a[(k + 1 + i) * n + k] = zero;
        }
    }
}

fn givens(a: C64, b: C64) -> (f64, C64, C64) {
    // returns (c, s, r) with [c s; −s̄ c]·[a; b] = [r; 0], c real
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, C64::new(0.0, 0.0), a);
    }
    if an == 0.0 {
        return (0.0, b.conj() / bn, C64::new(bn, 0.0));
    }
    let nr = an.hypot(bn);
    let c = an / nr;
    let ph = a / an;
    let s = ph * b.conj() / nr;
    (c, s, ph * nr)
}

/// Eigenvalues of an upper Hessenberg matrix. Only the active window is ever
/// updated since eigenvectors are not needed.
fn hessenberg_qr(h: &mut [C64], n: usize, max_iter: usize) -> Result<Vec<C64>> {
    let mut eig = vec![C64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let idx = |i: usize, j: usize| i * n + j;
    let mut hi = n - 1;
    let mut iter_total = 0usize;
    let mut iter_here = 0usize;
    let mut cs: Vec<(f64, C64)> = vec![(1.0, C64::new(0.0, 0.0)); n];
    loop {
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = h[idx(lo, lo - 1)].norm();
            let diag = h[idx(lo, lo)].l1_norm() + h[idx(lo - 1, lo - 1)].l1_norm();
            let crit = if diag == 0.0 { f64::MIN_POSITIVE } else { f64::EPSILON * diag };
            if sub <= crit {
                h[idx(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[idx(hi, hi)];
            iter_here = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }
        iter_total += 1;
        iter_here += 1;
        if iter_total > max_iter {
            return Err(Error::Convergence(format!(
                "QR iteration exceeded {max_iter} steps with {} eigenvalues outstanding",
                hi + 1
            )));
        }
        // Wilkinson shift from the trailing 2×2 block, with exceptional
        // shifts after 10 and 20 stagnating iterations.
        let a = h[idx(hi - 1, hi - 1)];
        let b = h[idx(hi - 1, hi)];
        let c = h[idx(hi, hi - 1)];
        let d = h[idx(hi, hi)];
        let mu = if iter_here % 11 == 10 {
            d + C64::new(0.75 * c.norm(), 0.0) * C64::new(1.0, 0.3)
        } else {
            let tr2 = (a + d) * 0.5;
            let det = a * d - b * c;
            let disc = (tr2 * tr2 - det).sqrt();
            let l1 = tr2 + disc;
            let l2 = tr2 - disc;
            if (l1 - d).norm() < (l2 - d).norm() {
                l1
            } else {
                l2
            }
        };
        for k in lo..=hi {
            h[idx(k, k)] -= mu;
        }
        // H − μ = QR: rotations on rows k, k+1 over columns k..=hi
        for k in lo..hi {
            let (c, s, r) = givens(h[idx(k, k)], h[idx(k + 1, k)]);
            cs[k] = (c, s);
            h[idx(k, k)] = r;
            h[idx(k + 1, k)] = C64::new(0.0, 0.0);
            let (top, bottom) = h.split_at_mut((k + 1) * n);
            let rk = &mut top[k * n + k + 1..k * n + hi + 1];
            let rk1 = &mut bottom[k + 1..hi + 1];
            let sc = -s.conj();
            for (x, y) in rk.iter_mut().zip(rk1.iter_mut()) {
                let (a, b) = (*x, *y);
                *x = a * c + s * b;
                *y = sc * a + b * c;
            }
        }
        // RQ: apply G_k^* on columns k, k+1 over rows lo..=min(k+1, hi)
        for k in lo..hi {
            let (c, s) = cs[k];
            let top = (k + 1).min(hi);
            let sc = s.conj();
            for row in h[lo * n..(top + 1) * n].chunks_exact_mut(n) {
                let pair = &mut row[k..k + 2];
                let (x, y) = (pair[0], pair[1]);
                pair[0] = x * c + y * sc;
                pair[1] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[idx(k, k)] += mu;
        }
    }
    Ok(eig)
}
