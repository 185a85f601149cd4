//! The finite-n correlation kernel
//! K_n(z,w) = Σ_{j<n} p_j(z) p̄_j(w) e^{−n(V(z)+V(w))/2}
//! by three independent methods: the Ginibre monomial series (τ = 0), the
//! scaled Hermite series, and a contour-integral oracle.

use crate::ensemble::{potential_polarized, potential_v, EnsembleParams};
use crate::error::{Error, Result};
use crate::numerics::{ln_factorial, LogComplex, QuadratureRule1D};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const RESCALE_HI: f64 = 1e150;
const LN_RESCALE_HI: f64 = 345.387_763_949_106_8; // ln 1e150

/// Orthonormal functions ψ_j(z) = p_j(z) e^{−nV(z)/2}, j < n, generated by
/// ψ_{j+1} = z√(n/(j+1)) ψ_j − τ√(j/(j+1)) ψ_{j−1}, which is the Hermite
/// recurrence H_{j+1} = 2xH_j − 2jH_{j−1} with the normalization
/// (τ/2)^{j/2}/√j! folded into every step. At τ = 0 it reduces to the
/// normalized monomials √(n^{j+1}/(π j!)) z^j.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    pub n: usize,
    pub tau: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    ln_c0: f64,
}

impl OrthonormalBasis {
    pub fn new(n: usize, tau: f64) -> Self {
        let nf = n as f64;
        let a = (0..n).map(|j| (nf / (j as f64 + 1.0)).sqrt()).collect();
        let b = (0..n).map(|j| tau * (j as f64 / (j as f64 + 1.0)).sqrt()).collect();
        let ln_c0 = 0.5 * (nf / (PI * (1.0 - tau * tau).sqrt())).ln();
        OrthonormalBasis { n, tau, a, b, ln_c0 }
    }

    /// Visit (j, mantissa, log-scale) with ψ_j(z) = mantissa·e^{scale}. The
    /// scale only changes when the running pair is renormalized.
    pub fn for_each_scaled<F: FnMut(usize, C64, f64)>(&self, z: C64, mut visit: F) {
        self.for_each_scaled_limit(z, self.n, &mut visit)
    }

    fn for_each_scaled_limit<F: FnMut(usize, C64, f64)>(&self, z: C64, count: usize, visit: &mut F) {
        let mut scale = self.ln_c0 - 0.5 * self.n as f64 * potential_v(z, self.tau);
        let mut prev = C64::new(0.0, 0.0);
        let mut cur = C64::new(1.0, 0.0);
        for j in 0..count {
            visit(j, cur, scale);
            if j + 1 == count {
                break;
            }
            let next = z * (cur * self.a[j]) - prev * self.b[j];
            prev = cur;
            cur = next;
            let m = cur.l1_norm();
            if m > RESCALE_HI {
                cur /= RESCALE_HI;
                prev /= RESCALE_HI;
                scale += LN_RESCALE_HI;
            } else if m < 1.0 / RESCALE_HI && m > 0.0 && prev.l1_norm() < 1.0 / RESCALE_HI {
                cur *= RESCALE_HI;
                prev *= RESCALE_HI;
                scale -= LN_RESCALE_HI;
            }
        }
    }

    /// ψ_j(z) for j < n as ordinary doubles (values below the double range
    /// flush to zero; they are bounded above by √K_n(z,z)).
    pub fn values_into(&self, z: C64, out: &mut [C64]) {
        self.values_into_limit(z, out.len().min(self.n), out)
    }

    pub fn values_into_limit(&self, z: C64, count: usize, out: &mut [C64]) {
        let mut last_scale = f64::NAN;
        let mut factor = 0.0;
        self.for_each_scaled_limit(z, count, &mut |j, m, s| {
            if s != last_scale {
                last_scale = s;
                factor = if s < -700.0 { 0.0 } else { s.exp() };
            }
            out[j] = if factor == 0.0 {
                if m.norm() == 0.0 {
                    m
                } else {
                    (m.ln() + s).exp()
                }
            } else {
                m * factor
            };
        });
    }

    pub fn values(&self, z: C64) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); self.n];
        self.values_into(z, &mut v);
        v
    }
}

/// Hermite-series kernel K_n(z,w) for τ ∈ [0,1), accumulated in the log
/// domain so that neither e^{−nV} nor large Hermite values leave the double
/// range before the final product.
pub fn kernel_elliptic(n: usize, tau: f64, z: C64, w: C64) -> Result<C64> {
    if n == 0 {
        return Err(Error::Validation("n must be positive".into()));
    }
    if !(0.0..1.0).contains(&tau) {
        return Err(Error::Domain(format!("tau = {tau} outside [0,1)")));
    }
    let basis = OrthonormalBasis::new(n, tau);
    Ok(kernel_from_basis(&basis, z, w)?.to_c64())
}

/// Σ_j ψ_j(z) conj ψ_j(w) as a [`LogComplex`].
pub fn kernel_from_basis(basis: &OrthonormalBasis, z: C64, w: C64) -> Result<LogComplex> {
    let mut zs: Vec<(C64, f64)> = Vec::with_capacity(basis.n);
    basis.for_each_scaled(z, |_, m, s| zs.push((m, s)));
    let mut total = LogComplex::ZERO;
    let mut part = C64::new(0.0, 0.0);
    let mut part_scale = f64::NAN;
    basis.for_each_scaled(w, |j, m, s| {
        let (mz, sz) = zs[j];
        let sc = sz + s;
        if sc != part_scale {
            if !part_scale.is_nan() {
                total = total.add(LogComplex::new(part, part_scale));
            }
            part = C64::new(0.0, 0.0);
            part_scale = sc;
        }
        part += mz * m.conj();
    });
    total = total.add(LogComplex::new(part, part_scale));
    if !total.scale.is_finite() && !total.is_zero() {
        return Err(Error::Overflow("kernel exponent left the representable range".into()));
    }
    Ok(total)
}

/// Ginibre kernel (n/π) e^{−n(|z|²+|w|²)/2} Σ_{j<n} (n z w̄)^j / j!, every term
/// formed as a single exponential of its logarithm.
pub fn kernel_ginibre(n: usize, z: C64, w: C64) -> C64 {
    let u = z * w.conj() * n as f64;
    let base = -0.5 * n as f64 * (z.norm_sqr() + w.norm_sqr());
    let pref = n as f64 / PI;
    if u == C64::new(0.0, 0.0) {
        return C64::new(pref * base.exp(), 0.0);
    }
    let lu = u.ln();
    let mut s = C64::new(0.0, 0.0);
    for j in 0..n {
        let e = lu * j as f64 - ln_factorial(j) + base;
        if e.re < -745.0 {
            continue;
        }
        s += e.exp();
    }
    s * pref
}

/// How the contour radius for [`kernel_contour_oracle`] is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ContourRadius {
    /// r = ρ·τ.
    Fixed(f64),
    /// Choose ρ ∈ (0, 1) minimizing the peak modulus of the integrand on the
    /// circle, i.e. the cancellation the trapezoid sum has to resolve.
    Auto,
}

#[derive(Clone, Copy, Debug)]
pub struct ContourOptions {
    pub radius: ContourRadius,
    pub rel_tol: f64,
    pub max_nodes: usize,
}

impl Default for ContourOptions {
    fn default() -> Self {
        ContourOptions { radius: ContourRadius::Auto, rel_tol: 1e-10, max_nodes: 1 << 20 }
    }
}

/// ln of the contour integrand e^{nF(s)} s /((s−τ)√(1−s²)) (the factor s comes
/// from ds = i s dθ), plus the prefactor and weights.
fn contour_log_integrand(n: usize, tau: f64, z: C64, w: C64, s: C64, pre: f64) -> C64 {
    let f = crate::asymptotics::f_value_unchecked(tau, z, w, s);
    let one = C64::new(1.0, 0.0);
    f * n as f64 + s.ln() - (s - tau).ln() - (one - s * s).sqrt().ln() + pre
}

/// Contour-integral evaluation K_n = n/(π√(1−τ²)) e^{−n(V(z)+V(w))/2} I_n with
/// I_n = −(1/2πi)∮_{|s|=r} e^{nF(s)} ds/((s−τ)√(1−s²)), the periodic
/// trapezoid rule, and node doubling until the relative change is below
/// `rel_tol`.
pub fn kernel_contour_oracle(n: usize, tau: f64, z: C64, w: C64) -> Result<C64> {
    kernel_contour_oracle_with(n, tau, z, w, ContourOptions::default())
}

pub fn kernel_contour_oracle_with(
    n: usize,
    tau: f64,
    z: C64,
    w: C64,
    opts: ContourOptions,
) -> Result<C64> {
    if n == 0 || n > 64 {
        return Err(Error::Validation(format!("contour oracle supports 1 <= n <= 64, got {n}")));
    }
    if !(tau > 0.0 && tau < 1.0) {
        return Err(Error::Domain(format!("contour oracle needs 0 < tau < 1, got {tau}")));
    }
    let pre = (n as f64 / (PI * (1.0 - tau * tau).sqrt())).ln()
        - 0.5 * n as f64 * (potential_v(z, tau) + potential_v(w, tau));
    let rho = match opts.radius {
        ContourRadius::Fixed(r) => r,
        ContourRadius::Auto => {
            let mut best = (f64::INFINITY, 0.5);
            for k in 1..20 {
                let rho = 0.05 * k as f64;
                let m = (0..64)
                    .map(|i| {
                        let s = C64::from_polar(rho * tau, 2.0 * PI * (i as f64 + 0.5) / 64.0);
                        contour_log_integrand(n, tau, z, w, s, pre).re
                    })
                    .fold(f64::NEG_INFINITY, f64::max);
                // penalize slow trapezoid convergence near the pole at s = τ
                let cost = m + 1e-3 * (rho / (1.0 - rho));
                if cost < best.0 {
                    best = (cost, rho);
                }
            }
            best.1
        }
    };
    let r = rho * tau;
    let eval = |m: usize| -> C64 {
        let logs: Vec<C64> = (0..m)
            .map(|i| {
                let s = C64::from_polar(r, 2.0 * PI * i as f64 / m as f64);
                contour_log_integrand(n, tau, z, w, s, pre)
            })
            .collect();
        let mx = logs.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
        let sum: C64 = logs.iter().map(|l| (l - mx).exp()).sum();
        // −(1/2π)·(2π/m)·Σ  →  −Σ/m
        -sum / m as f64 * mx.exp()
    };
    let mut m = 4 * (n + 2).next_power_of_two();
    let mut prev = eval(m);
    loop {
        m *= 2;
        if m > opts.max_nodes {
            return Err(Error::Convergence(format!(
                "contour quadrature did not stabilize within {} nodes",
                opts.max_nodes
            )));
        }
        let cur = eval(m);
        let scale = cur.norm().max(f64::MIN_POSITIVE);
        if (cur - prev).norm() <= opts.rel_tol * scale {
            return Ok(cur);
        }
        prev = cur;
    }
}

/// (1−τ)² K_n((1−τ)z, (1−τ)w): the kernel for the rescaled potential that
/// keeps the collapsing ellipse of height 1−τ at unit size.
pub fn kernel_rescaled(n: usize, tau: f64, z: C64, w: C64) -> Result<C64> {
    let s = 1.0 - tau;
    Ok(kernel_elliptic(n, tau, z * s, w * s)? * (s * s))
}

/// First-order Bergman approximation
/// (n/π)/(1−τ²) · exp(n(V(z,w̄) − V(z)/2 − V(w)/2)).
pub fn bulk_approx_kernel(n: usize, tau: f64, z: C64, w: C64) -> C64 {
    let nf = n as f64;
    let e = (potential_polarized(z, w, tau) - 0.5 * (potential_v(z, tau) + potential_v(w, tau))) * nf;
    e.exp() * (nf / (PI * (1.0 - tau * tau)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelMethod {
    GinibreSeries,
    HermiteSeries,
    ContourOracle,
    BulkApprox,
}

/// Precomputed per-(n, τ) state for repeated kernel evaluation.
#[derive(Clone, Debug)]
pub struct KernelEvaluator {
    pub params: EnsembleParams,
    pub method: KernelMethod,
    pub log_factorials: Vec<f64>,
    basis: OrthonormalBasis,
}

impl KernelEvaluator {
    pub fn new(params: EnsembleParams, method: KernelMethod) -> Result<Self> {
        match method {
            KernelMethod::GinibreSeries if params.tau != 0.0 => {
                return Err(Error::Validation("ginibre-series requires tau = 0".into()))
            }
            KernelMethod::ContourOracle if params.n > 64 || params.tau == 0.0 => {
                return Err(Error::Validation("contour-oracle requires n <= 64 and tau > 0".into()))
            }
            _ => {}
        }
        Ok(KernelEvaluator {
            params,
            method,
            log_factorials: (0..=params.n).map(ln_factorial).collect(),
            basis: OrthonormalBasis::new(params.n, params.tau),
        })
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn eval(&self, z: C64, w: C64) -> Result<C64> {
        let (n, tau) = (self.params.n, self.params.tau);
        match self.method {
            KernelMethod::GinibreSeries => Ok(kernel_ginibre(n, z, w)),
            KernelMethod::HermiteSeries => Ok(kernel_from_basis(&self.basis, z, w)?.to_c64()),
            KernelMethod::ContourOracle => kernel_contour_oracle(n, tau, z, w),
            KernelMethod::BulkApprox => Ok(bulk_approx_kernel(n, tau, z, w)),
        }
    }

    /// K_n(z, z)/n, the normalized one-point density.
    pub fn density(&self, z: C64) -> Result<f64> {
        Ok(self.eval(z, z)?.re / self.params.n as f64)
    }
}

/// Polar grid for plane integrals: Gauss–Legendre in r ∈ [0, R] with
/// `radial` nodes (composite panels of 16) and a periodic trapezoid with
/// `angular` nodes in θ.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PolarGrid {
    pub radius: f64,
    pub radial: usize,
    pub angular: usize,
}

impl PolarGrid {
    /// A grid adequate for kernel integrals at size n.
    pub fn for_kernel(n: usize, tau: f64) -> Self {
        // the edge layer has width ~ √((1−τ²)/n); small n needs a longer tail
        let nf = n as f64;
        let radius = (3.0 * (1.0 + tau) + 0.5).max(1.0 + tau + 6.0 / nf.sqrt());
        let per_panel = 16.0 * (1.0 - tau * tau).sqrt();
        let radial = (16 * ((3.0 * radius * nf.sqrt() / per_panel).ceil() as usize + 4)).max(64);
        let angular = (4 * n + 64).next_power_of_two().max(128);
        PolarGrid { radius, radial, angular }
    }

    /// (node, weight) pairs.
    pub fn nodes(&self) -> Vec<(C64, f64)> {
        let panels = self.radial.div_ceil(16);
        let rr = QuadratureRule1D::composite(0.0, self.radius, panels, 16);
        let tt = QuadratureRule1D::periodic_trapezoid(self.angular, 0.0, 2.0 * PI);
        let mut v = Vec::with_capacity(rr.len() * tt.len());
        for (r, wr) in rr.nodes.iter().zip(&rr.weights) {
            for (t, wt) in tt.nodes.iter().zip(&tt.weights) {
                v.push((C64::from_polar(*r, *t), r * wr * wt));
            }
        }
        v
    }
}

/// ∫ K_n(z,z) d²z over the grid.
pub fn trace_integral(n: usize, tau: f64, grid: &PolarGrid) -> f64 {
    use rayon::prelude::*;
    let basis = OrthonormalBasis::new(n, tau);
    let nodes = grid.nodes();
    nodes
        .par_chunks(4096)
        .map(|ch| {
            let mut buf = vec![C64::new(0.0, 0.0); n];
            ch.iter()
                .map(|(z, w)| {
                    basis.values_into(*z, &mut buf);
                    w * buf.iter().map(|v| v.norm_sqr()).sum::<f64>()
                })
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum()
}

/// Largest reproduction residual
/// |∫K_n(z,w)p(w)e^{−nV(w)/2}d²w − p(z)e^{−nV(z)/2}| over `points`, for the
/// monomial p(w) = w^d normalized to unit norm in L²(e^{−nV}).
pub fn reproducing_check(n: usize, tau: f64, degree: usize, grid: &PolarGrid, points: &[C64]) -> Result<f64> {
    if grid.radius < 3.0 * (1.0 + tau) {
        return Err(Error::Grid(format!(
            "grid radius {} does not cover the disk of radius 3(1+tau) = {}",
            grid.radius,
            3.0 * (1.0 + tau)
        )));
    }
    let nf = n as f64;
    let nodes = grid.nodes();
    let weighted = |w: C64| -> C64 {
        // w^d e^{−nV(w)/2} in the log domain
        if w == C64::new(0.0, 0.0) {
            return C64::new(if degree == 0 { 1.0 } else { 0.0 }, 0.0);
        }
        (w.ln() * degree as f64 - 0.5 * nf * potential_v(w, tau)).exp()
    };
    let norm2: f64 = nodes.iter().map(|(w, wt)| wt * weighted(*w).norm_sqr()).sum();
    let norm = norm2.sqrt();
    let basis = OrthonormalBasis::new(n, tau);
    let mut worst: f64 = 0.0;
    for &z in points {
        let mut acc = C64::new(0.0, 0.0);
        for (w, wt) in &nodes {
            let pw = weighted(*w);
            if pw.norm() < 1e-300 {
                continue;
            }
            let k = kernel_from_basis(&basis, z, *w)?.to_c64();
            acc += k * pw * *wt;
        }
        worst = worst.max(((acc - weighted(z)) / norm).norm());
    }
    Ok(worst)
}
