//! Exact finite-n variance of Σ f(z_j).
//!
//! With M_jk = ∫ f ψ_j ψ̄_k and T = ∫ f² K_n(z,z),
//! ½∬(f(z)−f(w))²|K_n(z,w)|² = T − Σ_jk |M_jk|²,
//! so one product rule over supp f ∩ (droplet + margin) gives the variance
//! through two GEMM-sized moments instead of a four-dimensional integral.

use super::testfn::{Parity, TestFunction};
use crate::counting::overlap::{basis_block, weighted};
use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::kernel::OrthonormalBasis;
use crate::numerics::QuadratureRule1D;
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

const CHUNK: usize = 512;
const BATCH: usize = 8;
const GL_ORDER: usize = 16;

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SmoothOptions {
    /// Accepted probe change under one refinement, relative to 1 + T.
    pub tol: f64,
    pub max_level: u32,
    pub max_nodes: usize,
}

impl Default for SmoothOptions {
    fn default() -> Self {
        SmoothOptions { tol: 1e-10, max_level: 6, max_nodes: 3_000_000 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmoothVariance {
    pub value: f64,
    /// T = ∫ f² K_n(z,z).
    pub linear_term: f64,
    pub error_estimate: f64,
    pub nodes: usize,
    pub level: (u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Fold {
    /// Only x, y ≥ 0; p = f(−z)/f(z).
    Quadrant(f64),
    /// Only y ≥ 0.
    Half,
    Full,
}

struct Setup<'a> {
    f: &'a TestFunction,
    scale: f64,
    fold: Fold,
    x: (f64, f64),
    y: (f64, f64),
    n: usize,
}

impl Setup<'_> {
    fn eval(&self, z: C64) -> f64 {
        self.f.eval(z * self.scale)
    }

    /// Nodes per unit length at level 0: products ψ_j ψ̄_k oscillate on the
    /// 1/n scale, the weight on the √((1−τ²)/n) scale.
    fn rule(&self, level: (u32, u32)) -> (Vec<C64>, Vec<f64>) {
        let (kx, ky) = self.f.kinks().unzip();
        let rx = QuadratureRule1D::composite_breaks(&self.breaks(self.x, kx.as_deref(), level.0), GL_ORDER);
        let ry = QuadratureRule1D::composite_breaks(&self.breaks(self.y, ky.as_deref(), level.1), GL_ORDER);
        let mut nodes = Vec::with_capacity(rx.len() * ry.len());
        let mut weights = Vec::with_capacity(rx.len() * ry.len());
        for (&y, &wy) in ry.nodes.iter().zip(&ry.weights) {
            for (&x, &wx) in rx.nodes.iter().zip(&rx.weights) {
                nodes.push(C64::new(x, y));
                weights.push(wx * wy);
            }
        }
        (nodes, weights)
    }

    /// Panel breaks on [a, b]: the panels of width ~GL_ORDER/ν halved
    /// `level` times, and never straddling a kink of f (a grid line of a
    /// sampled function, moved to the unscaled variable).
    fn breaks(&self, (a, b): (f64, f64), kinks: Option<&[f64]>, level: u32) -> Vec<f64> {
        let nu = (self.n as f64 / 2.0).max(16.0);
        let mut seg = vec![a];
        if let Some(k) = kinks {
            seg.extend(k.iter().map(|g| g / self.scale).filter(|&g| g > a && g < b));
        }
        seg.push(b);
        let whole = (((b - a) * nu / GL_ORDER as f64).ceil() as usize).max(2);
        let mut out = vec![a];
        for w in seg.windows(2) {
            let k = (((w[1] - w[0]) / (b - a) * whole as f64).ceil() as usize).max(1) << level;
            out.extend((1..=k).map(|i| w[0] + (w[1] - w[0]) * i as f64 / k as f64));
        }
        *out.last_mut().expect("nonempty") = b;
        out
    }

    fn node_count(&self, level: (u32, u32)) -> usize {
        let (kx, ky) = self.f.kinks().unzip();
        let c = |r, k: Option<&[f64]>, l| (self.breaks(r, k, l).len() - 1) * GL_ORDER;
        c(self.x, kx.as_deref(), level.0) * c(self.y, ky.as_deref(), level.1)
    }

    /// Multiplicities for T, for diagonal entries of M and the quadratic form
    /// factor on the even/odd split of Σ c_j ψ_j.
    fn t_factor(&self) -> f64 {
        match self.fold {
            Fold::Quadrant(_) => 4.0,
            Fold::Half => 2.0,
            Fold::Full => 1.0,
        }
    }
}

fn sign(seed: u64, j: usize) -> f64 {
    let mut x = seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x ^= x >> 31;
    x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x ^= x >> 29;
    if x & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// [T, M_00 … M_{n−1,n−1}, c₁ᵀMc₁/n, c₂ᵀMc₂/n].
fn probes(s: &Setup, basis: &OrthonormalBasis, nodes: &[C64], weights: &[f64]) -> Vec<f64> {
    let n = s.n;
    let tf = s.t_factor();
    let parts: Vec<Vec<f64>> = nodes
        .par_chunks(CHUNK)
        .zip(weights.par_chunks(CHUNK))
        .map(|(zs, ws)| {
            let mut acc = vec![0.0; n + 3];
            let mut buf = vec![C64::new(0.0, 0.0); n];
            for (&z, &w) in zs.iter().zip(ws) {
                let fz = s.eval(z);
                if fz == 0.0 {
                    continue;
                }
                basis.values_into(z, &mut buf);
                let (dfac, quad): (f64, Box<dyn Fn(C64, C64) -> f64>) = match s.fold {
                    Fold::Quadrant(p) => (2.0 + 2.0 * p, Box::new(move |e, o| 2.0 * ((e + o).norm_sqr() + p * (e - o).norm_sqr()))),
                    Fold::Half => (2.0, Box::new(|e, o| 2.0 * (e + o).norm_sqr())),
                    Fold::Full => (1.0, Box::new(|e, o| (e + o).norm_sqr())),
                };
                let (mut e1, mut o1, mut e2, mut o2) = (C64::default(), C64::default(), C64::default(), C64::default());
                let mut k = 0.0;
                for (j, v) in buf.iter().enumerate() {
                    let a = v.norm_sqr();
                    k += a;
                    acc[1 + j] += w * dfac * fz * a;
                    let (c1, c2) = (sign(1, j), sign(2, j));
                    if j % 2 == 0 {
                        e1 += v * c1;
                        e2 += v * c2;
                    } else {
                        o1 += v * c1;
                        o2 += v * c2;
                    }
                }
                acc[0] += w * tf * fz * fz * k;
                acc[n + 1] += w * fz * quad(e1, o1) / n as f64;
                acc[n + 2] += w * fz * quad(e2, o2) / n as f64;
            }
            acc
        })
        .collect();
    let mut out = vec![0.0; n + 3];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

/// Σ_jk |M_jk|² for the accepted rule.
fn moment_norm(s: &Setup, basis: &OrthonormalBasis, nodes: &[C64], weights: &[f64]) -> f64 {
    let n = s.n;
    let evens: Vec<usize> = (0..n).step_by(2).collect();
    let odds: Vec<usize> = (1..n).step_by(2).collect();
    let all: Vec<usize> = (0..n).collect();
    // (row columns, column columns, multiplicity of the block in Σ|M|², entry factor)
    let blocks: Vec<(&[usize], &[usize], f64, f64)> = match s.fold {
        Fold::Quadrant(p) if p > 0.0 => vec![(&evens, &evens, 1.0, 4.0), (&odds, &odds, 1.0, 4.0)],
        Fold::Quadrant(_) => vec![(&evens, &odds, 2.0, 4.0)],
        Fold::Half => vec![(&all, &all, 1.0, 2.0)],
        Fold::Full => vec![(&all, &all, 1.0, 1.0)],
    };
    let complex = s.fold == Fold::Full;
    let mut total = 0.0;
    for (rows, cols, mult, fac) in blocks {
        if rows.is_empty() || cols.is_empty() {
            continue;
        }
        let mut re = Array2::<f64>::zeros((rows.len(), cols.len()));
        let mut im = Array2::<f64>::zeros((rows.len(), cols.len()));
        let chunks: Vec<(&[C64], &[f64])> = nodes.chunks(CHUNK).zip(weights.chunks(CHUNK)).collect();
        for batch in chunks.chunks(BATCH) {
            let parts: Vec<(Array2<f64>, Option<Array2<f64>>)> = batch
                .par_iter()
                .map(|&(zs, ws)| {
                    let fw: Vec<f64> = zs.iter().zip(ws).map(|(&z, &w)| w * s.eval(z)).collect();
                    let (r1, i1) = basis_block(basis, zs, rows);
                    let (r2, i2) = if std::ptr::eq(rows, cols) { (r1.clone(), i1.clone()) } else { basis_block(basis, zs, cols) };
                    let wr = weighted(&r2, &fw);
                    let wi = weighted(&i2, &fw);
                    let a = r1.t().dot(&wr) + i1.t().dot(&wi);
                    let b = if complex { Some(i1.t().dot(&wr) - r1.t().dot(&wi)) } else { None };
                    (a, b)
                })
                .collect();
            // fixed-order reduction keeps results independent of the thread count
            for (a, b) in parts {
                re += &a;
                if let Some(b) = b {
                    im += &b;
                }
            }
        }
        let sq: f64 = re.iter().map(|v| v * v).sum::<f64>() + im.iter().map(|v| v * v).sum::<f64>();
        total += mult * fac * fac * sq;
    }
    total
}

fn setup<'a>(params: &EnsembleParams, f: &'a TestFunction, gamma: Option<f64>) -> Result<Setup<'a>> {
    f.validate()?;
    let (n, tau) = (params.n, params.tau);
    let scale = match gamma {
        Some(g) if !(g.is_finite() && g >= 0.0) => return Err(Error::Validation(format!("gamma = {g} must be >= 0"))),
        Some(g) => (n as f64).powf(g),
        None => 1.0,
    };
    let margin = 8.0 * ((1.0 - tau * tau) / n as f64).sqrt() + 2.0 / n as f64;
    let (dx, dy) = (1.0 + tau + margin, 1.0 - tau + margin);
    let (mut x, mut y) = ((-dx, dx), (-dy, dy));
    if let Some((a, b, c, d)) = f.support_box() {
        x = (x.0.max(a / scale), x.1.min(b / scale));
        y = (y.0.max(c / scale), y.1.min(d / scale));
    }
    let sym = f.symmetry();
    let centred = x.0 == -x.1 && y.0 == -y.1;
    let fold = match (sym.conjugation, sym.parity) {
        (true, Some(p)) if centred => Fold::Quadrant(if p == Parity::Even { 1.0 } else { -1.0 }),
        (true, _) if y.0 == -y.1 => Fold::Half,
        _ => Fold::Full,
    };
    match fold {
        Fold::Quadrant(_) => {
            x.0 = 0.0;
            y.0 = 0.0;
        }
        Fold::Half => y.0 = 0.0,
        Fold::Full => {}
    }
    Ok(Setup { f, scale, fold, x, y, n })
}

/// ½∬(f(z)−f(w))²|K_n(z,w)|², with f replaced by f(n^γ ·) when `gamma` is
/// given.
pub fn smooth_variance_exact(params: &EnsembleParams, f: &TestFunction, gamma: Option<f64>) -> Result<f64> {
    Ok(smooth_variance_exact_with(params, f, gamma, SmoothOptions::default())?.value)
}

pub fn smooth_variance_exact_with(
    params: &EnsembleParams,
    f: &TestFunction,
    gamma: Option<f64>,
    opts: SmoothOptions,
) -> Result<SmoothVariance> {
    let s = setup(params, f, gamma)?;
    if f.is_constant() || s.x.0 >= s.x.1 || s.y.0 >= s.y.1 {
        return Ok(SmoothVariance { value: 0.0, linear_term: 0.0, error_estimate: 0.0, nodes: 0, level: (0, 0) });
    }
    let basis = OrthonormalBasis::new(params.n, params.tau);
    let mut cache: HashMap<(u32, u32), Vec<f64>> = HashMap::new();
    let mut probe_at = |l: (u32, u32)| -> Result<Vec<f64>> {
        if let Some(v) = cache.get(&l) {
            return Ok(v.clone());
        }
        if s.node_count(l) > opts.max_nodes {
            return Err(Error::Quadrature(format!(
                "smooth variance rule needs more than {} nodes (level {l:?}, box x {:?} y {:?})",
                opts.max_nodes, s.x, s.y
            )));
        }
        let (z, w) = s.rule(l);
        let v = probes(&s, &basis, &z, &w);
        cache.insert(l, v.clone());
        Ok(v)
    };
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let mut level = (0u32, 0u32);
    loop {
        let p0 = probe_at(level)?;
        let px = probe_at((level.0 + 1, level.1))?;
        let py = probe_at((level.0, level.1 + 1))?;
        let target = opts.tol * (1.0 + p0[0].abs());
        let (ex, ey) = (dist(&p0, &px), dist(&p0, &py));
        if ex <= target && ey <= target {
            let (z, w) = s.rule(level);
            let norm = moment_norm(&s, &basis, &z, &w);
            let value = p0[0] - norm;
            // cancellation between T and Σ|M|² costs about n·ε relative to T
            let err = ex.max(ey) * params.n as f64 + 4.0 * f64::EPSILON * params.n as f64 * p0[0].abs();
            if value < -err - 1e-12 {
                return Err(Error::Quadrature(format!("negative variance {value:e} (error estimate {err:e})")));
            }
            return Ok(SmoothVariance { value: value.max(0.0), linear_term: p0[0], error_estimate: err, nodes: z.len(), level });
        }
        if ex > target {
            level.0 += 1;
        }
        if ey > target {
            level.1 += 1;
        }
        if level.0 > opts.max_level || level.1 > opts.max_level {
            return Err(Error::Quadrature(format!(
                "smooth variance not resolved at level {level:?}: probe change {ex:e} (x) / {ey:e} (y), target {target:e}"
            )));
        }
    }
}
