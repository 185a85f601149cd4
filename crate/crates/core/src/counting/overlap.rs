//! Overlap matrices A_jk = ∫_A ψ_j ψ̄_k d²z, their spectra, and the number
//! variance by the spectral and the double-quadrature route.

use super::region::{PlaneRule, Region, Resolution, RuleVariant};
use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::kernel::OrthonormalBasis;
use crate::numerics::{hermitian_eigenvalues, incomplete_gamma_pair, HermitianMatrix};
use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Node block size for the chunked matrix products.
pub(crate) const CHUNK: usize = 1024;
/// λ within this distance of {0, 1} on the diagonal are deflated.
const DEFLATE: f64 = 1e-17;

#[derive(Clone, Copy, Debug)]
pub struct OverlapOptions {
    /// Largest allowed estimated absolute error of matrix entries.
    pub tol: f64,
    pub max_level: u32,
    pub max_nodes: usize,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        OverlapOptions { tol: 1e-8, max_level: 5, max_nodes: 6_000_000 }
    }
}

/// Eigenvalues λ_j of an overlap matrix together with 1 − λ_j, the latter
/// computed directly where a closed form exists.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OverlapSpectrum {
    pub lambdas: Vec<f64>,
    pub complements: Vec<f64>,
}

impl OverlapSpectrum {
    /// Validate λ ∈ [−1e-10, 1+1e-10] (hard failure beyond 1e-6) and clamp.
    pub fn from_lambdas(lambdas: Vec<f64>) -> Result<Self> {
        let mut l = lambdas;
        for x in l.iter_mut() {
            if !x.is_finite() || *x < -1e-6 || *x > 1.0 + 1e-6 {
                return Err(Error::Validation(format!("overlap eigenvalue {x} outside [0, 1]")));
            }
            *x = x.clamp(0.0, 1.0);
        }
        let c = l.iter().map(|x| 1.0 - x).collect();
        Ok(OverlapSpectrum { lambdas: l, complements: c })
    }

    pub fn from_pairs(lambdas: Vec<f64>, complements: Vec<f64>) -> Self {
        OverlapSpectrum { lambdas, complements }
    }

    /// Spectrum of the complementary region: λ ↔ 1 − λ.
    pub fn complement(&self) -> Self {
        OverlapSpectrum { lambdas: self.complements.clone(), complements: self.lambdas.clone() }
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    /// Σλ, the expected number of points in A.
    pub fn expected_count(&self) -> f64 {
        self.lambdas.iter().sum()
    }
}

/// Σ λ(1 − λ).
pub fn number_variance(s: &OverlapSpectrum) -> f64 {
    s.lambdas.iter().zip(&s.complements).map(|(l, c)| l * c).sum()
}

/// Ginibre fast path for centered disks: λ_j = P(j+1, na²).
pub fn radial_overlap_eigs(n: usize, a: f64) -> OverlapSpectrum {
    let x = n as f64 * a * a;
    let (l, c): (Vec<f64>, Vec<f64>) = (0..n).map(|j| incomplete_gamma_pair(j + 1, x)).unzip();
    OverlapSpectrum { lambdas: l, complements: c }
}

/// Ginibre fast path for {|z| > a}: λ_j = Q(j+1, na²).
pub fn radial_overlap_eigs_complement(n: usize, a: f64) -> OverlapSpectrum {
    radial_overlap_eigs(n, a).complement()
}

/// Basis values at a block of nodes as (Re, Im) matrices of shape
/// (nodes, columns) for the selected column indices.
pub(crate) fn basis_block(basis: &OrthonormalBasis, nodes: &[C64], cols: &[usize]) -> (Array2<f64>, Array2<f64>) {
    let top = cols.iter().copied().max().map_or(0, |m| m + 1);
    let mut buf = vec![C64::new(0.0, 0.0); top];
    let mut re = Array2::<f64>::zeros((nodes.len(), cols.len()));
    let mut im = Array2::<f64>::zeros((nodes.len(), cols.len()));
    for (g, &z) in nodes.iter().enumerate() {
        basis.values_into_limit(z, top, &mut buf);
        for (c, &j) in cols.iter().enumerate() {
            re[[g, c]] = buf[j].re;
            im[[g, c]] = buf[j].im;
        }
    }
    (re, im)
}

pub(crate) fn weighted(m: &Array2<f64>, w: &[f64]) -> Array2<f64> {
    let mut out = m.clone();
    for (mut row, &wg) in out.rows_mut().into_iter().zip(w) {
        row *= wg;
    }
    out
}

/// Σ_g w_g ψ_j(z_g) ψ̄_k(z_g) over the selected columns. With `folded`, the
/// rule holds only Im z ≥ 0 nodes (conjugation-symmetric region) and the
/// result is the real matrix Σ w (Re ψ_j Re ψ_k + Im ψ_j Im ψ_k).
fn assemble(basis: &OrthonormalBasis, rule: &PlaneRule, cols: &[usize], folded: bool) -> Vec<C64> {
    let c = cols.len();
    let parts: Vec<(Array2<f64>, Option<Array2<f64>>)> = rule
        .nodes
        .par_chunks(CHUNK)
        .zip(rule.weights.par_chunks(CHUNK))
        .map(|(zs, ws)| {
            let (r, i) = basis_block(basis, zs, cols);
            let wr = weighted(&r, ws);
            let wi = weighted(&i, ws);
            let re = r.t().dot(&wr) + i.t().dot(&wi);
            let im = if folded { None } else { Some(i.t().dot(&wr) - r.t().dot(&wi)) };
            (re, im)
        })
        .collect();
    let mut re = Array2::<f64>::zeros((c, c));
    let mut im = Array2::<f64>::zeros((c, c));
    for (r, i) in parts {
        re += &r;
        if let Some(i) = i {
            im += &i;
        }
    }
    let mut out = vec![C64::new(0.0, 0.0); c * c];
    for j in 0..c {
        for k in 0..c {
            out[j * c + k] = C64::new(re[[j, k]], im[[j, k]]);
        }
    }
    out
}

/// Cheap accuracy probes: all diagonal entries and two quadratic forms
/// cᵀAc with fixed pseudo-random sign vectors.
fn probes(basis: &OrthonormalBasis, rule: &PlaneRule) -> Vec<f64> {
    let n = basis.n;
    let sign = |seed: u64, j: usize| -> f64 {
        let mut x = seed ^ (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        x ^= x >> 31;
        x = x.wrapping_mul(0xBF58_476D_1CE4_E5B9);
        x ^= x >> 29;
        if x & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    };
    let parts: Vec<Vec<f64>> = rule
        .nodes
        .par_chunks(CHUNK)
        .zip(rule.weights.par_chunks(CHUNK))
        .map(|(zs, ws)| {
            let mut acc = vec![0.0; n + 2];
            let mut buf = vec![C64::new(0.0, 0.0); n];
            for (&z, &w) in zs.iter().zip(ws) {
                basis.values_into(z, &mut buf);
                let mut s1 = C64::new(0.0, 0.0);
                let mut s2 = C64::new(0.0, 0.0);
                for (j, v) in buf.iter().enumerate() {
                    acc[j] += w * v.norm_sqr();
                    s1 += v * sign(1, j);
                    s2 += v * sign(2, j);
                }
                acc[n] += w * s1.norm_sqr() / n as f64;
                acc[n + 1] += w * s2.norm_sqr() / n as f64;
            }
            acc
        })
        .collect();
    let mut out = vec![0.0; n + 2];
    for p in parts {
        for (o, v) in out.iter_mut().zip(p) {
            *o += v;
        }
    }
    out
}

/// A region rule at a resolution whose entry error is estimated below
/// `opts.tol` by comparison with one-step refinements in each direction.
pub struct ResolvedRule {
    pub rule: PlaneRule,
    pub folded: bool,
    pub resolution: Resolution,
    pub error_estimate: f64,
    /// Diagonal entries ∫_A |ψ_j|².
    pub diagonal: Vec<f64>,
}

pub fn resolve_rule(
    params: &EnsembleParams,
    region: &Region,
    variant: RuleVariant,
    fold: bool,
    opts: OverlapOptions,
) -> Result<ResolvedRule> {
    let (n, tau) = (params.n, params.tau);
    let basis = OrthonormalBasis::new(n, tau);
    let folded = fold && region.conjugation_symmetric();
    let build = |res: Resolution| -> Result<PlaneRule> {
        let r = region.rule(n, tau, res, variant)?;
        if r.len() > opts.max_nodes {
            return Err(Error::Quadrature(format!(
                "quadrature for {region:?} needs more than {} nodes at resolution {res:?}",
                opts.max_nodes
            )));
        }
        Ok(if folded { r.fold_conjugate() } else { r })
    };
    let mut cache: HashMap<(u32, u32), Vec<f64>> = HashMap::new();
    let mut probe_at = |res: Resolution| -> Result<Vec<f64>> {
        if let Some(v) = cache.get(&(res.radial, res.angular)) {
            return Ok(v.clone());
        }
        let v = probes(&basis, &build(res)?);
        cache.insert((res.radial, res.angular), v.clone());
        Ok(v)
    };
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let target = 0.1 * opts.tol;
    let mut res = Resolution { radial: 0, angular: 0 };
    loop {
        let p0 = probe_at(res)?;
        let pr = probe_at(Resolution { radial: res.radial + 1, ..res })?;
        let pa = probe_at(Resolution { angular: res.angular + 1, ..res })?;
        let (er, ea) = (dist(&p0, &pr), dist(&p0, &pa));
        if er <= target && ea <= target {
            let rule = build(res)?;
            return Ok(ResolvedRule {
                rule,
                folded,
                resolution: res,
                error_estimate: er.max(ea),
                diagonal: p0[..n].to_vec(),
            });
        }
        if er > target {
            res.radial += 1;
        }
        if ea > target {
            res.angular += 1;
        }
        if res.radial > opts.max_level || res.angular > opts.max_level {
            return Err(Error::Quadrature(format!(
                "overlap quadrature for {region:?} not resolved: estimated entry error {:e} (radial) / {:e} (angular)",
                er, ea
            )));
        }
    }
}

fn to_hermitian(c: usize, entries: Vec<C64>) -> Result<HermitianMatrix> {
    HermitianMatrix::from_full(c, entries, 1e-9)
}

/// The full n×n overlap matrix on A.
pub fn overlap_matrix(params: &EnsembleParams, region: &Region) -> Result<HermitianMatrix> {
    overlap_matrix_with(params, region, OverlapOptions::default())
}

pub fn overlap_matrix_with(params: &EnsembleParams, region: &Region, opts: OverlapOptions) -> Result<HermitianMatrix> {
    if params.n > 512 {
        return Err(Error::Validation("dense overlap matrices are limited to n <= 512".into()));
    }
    let rr = resolve_rule(params, region, RuleVariant::Primary, true, opts)?;
    let basis = OrthonormalBasis::new(params.n, params.tau);
    let cols: Vec<usize> = (0..params.n).collect();
    let m = assemble(&basis, &rr.rule, &cols, rr.folded);
    to_hermitian(params.n, m)
}

/// Overlap spectrum by dense quadrature and Jacobi, deflating indices whose
/// diagonal entry is within 1e-17 of 0 or 1.
pub fn overlap_spectrum_dense(params: &EnsembleParams, region: &Region) -> Result<OverlapSpectrum> {
    overlap_spectrum_dense_with(params, region, OverlapOptions::default())
}

pub fn overlap_spectrum_dense_with(
    params: &EnsembleParams,
    region: &Region,
    opts: OverlapOptions,
) -> Result<OverlapSpectrum> {
    if params.n > 512 {
        return Err(Error::Validation("dense overlap matrices are limited to n <= 512".into()));
    }
    let rr = resolve_rule(params, region, RuleVariant::Primary, true, opts)?;
    let basis = OrthonormalBasis::new(params.n, params.tau);
    let mut lambdas = Vec::with_capacity(params.n);
    let mut cols = Vec::new();
    for (j, &d) in rr.diagonal.iter().enumerate() {
        if d < DEFLATE || 1.0 - d < DEFLATE {
            lambdas.push(d);
        } else {
            cols.push(j);
        }
    }
    if !cols.is_empty() {
        let m = assemble(&basis, &rr.rule, &cols, rr.folded);
        let h = to_hermitian(cols.len(), m)?;
        lambdas.extend(hermitian_eigenvalues(&h)?);
    }
    lambdas.sort_by(|a, b| a.total_cmp(b));
    OverlapSpectrum::from_lambdas(lambdas)
}

/// Spectrum, using the closed-form Ginibre path for centered disks and their
/// complements and the dense path otherwise.
pub fn overlap_spectrum(params: &EnsembleParams, region: &Region) -> Result<OverlapSpectrum> {
    region.validate()?;
    if params.tau == 0.0 {
        match region {
            Region::Disk { radius, center } if *center == (0.0, 0.0) => return Ok(radial_overlap_eigs(params.n, *radius)),
            Region::ComplementDisk { radius } => return Ok(radial_overlap_eigs_complement(params.n, *radius)),
            Region::Band { tau, .. } if *tau == 0.0 => {
                return Ok(radial_overlap_eigs(params.n, 1.0 + region.band_offset()))
            }
            _ => {}
        }
    }
    overlap_spectrum_dense(params, region)
}

/// ∫_A K_n(z,z) − ∬_{A×A} |K_n(z,w)|², with K_n(z,w) evaluated at every node
/// pair and both integrals on the alternate product rule.
pub fn number_variance_quadrature(params: &EnsembleParams, region: &Region) -> Result<f64> {
    number_variance_quadrature_with(params, region, OverlapOptions::default())
}

pub fn number_variance_quadrature_with(
    params: &EnsembleParams,
    region: &Region,
    opts: OverlapOptions,
) -> Result<f64> {
    let rr = resolve_rule(params, region, RuleVariant::Alternate, false, opts)?;
    let basis = OrthonormalBasis::new(params.n, params.tau);
    let cols: Vec<usize> = (0..params.n).collect();
    let rule = &rr.rule;
    let blocks: Vec<(usize, usize)> = (0..rule.len()).step_by(CHUNK).map(|s| (s, (s + CHUNK).min(rule.len()))).collect();
    let values: Vec<(Array2<f64>, Array2<f64>)> =
        blocks.par_iter().map(|&(s, e)| basis_block(&basis, &rule.nodes[s..e], &cols)).collect();
    let single: f64 = values
        .iter()
        .zip(&blocks)
        .map(|((r, i), &(s, _))| {
            r.rows()
                .into_iter()
                .zip(i.rows())
                .zip(&rule.weights[s..])
                .map(|((a, b), w)| w * (a.dot(&a) + b.dot(&b)))
                .sum::<f64>()
        })
        .sum();
    let pairs: Vec<(usize, usize)> =
        (0..blocks.len()).flat_map(|g| (g..blocks.len()).map(move |h| (g, h))).collect();
    let parts: Vec<f64> = pairs
        .par_iter()
        .map(|&(g, h)| {
            let (rg, ig) = &values[g];
            let (rh, ih) = &values[h];
            let kre = rg.dot(&rh.t()) + ig.dot(&ih.t());
            let kim = ig.dot(&rh.t()) - rg.dot(&ih.t());
            let wg = &rule.weights[blocks[g].0..blocks[g].1];
            let wh = &rule.weights[blocks[h].0..blocks[h].1];
            let mut s = 0.0;
            for (a, wa) in wg.iter().enumerate() {
                let mut row = 0.0;
                for (b, wb) in wh.iter().enumerate() {
                    row += wb * (kre[[a, b]].powi(2) + kim[[a, b]].powi(2));
                }
                s += wa * row;
            }
            if g == h {
                s
            } else {
                2.0 * s
            }
        })
        .collect();
    let double: f64 = parts.iter().sum();
    Ok(single - double)
}
