//! One-dimensional quadrature rules and an adaptive Gauss–Kronrod integrator.

use crate::error::{Error, Result};
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureKind {
    GaussLegendre,
    TrapezoidPeriodic,
}

#[derive(Clone, Debug)]
pub struct QuadratureRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
}

fn legendre_cache() -> &'static Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>> {
    static C: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton on P_m, cached).
fn legendre_unit(m: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    if let Some(r) = legendre_cache().lock().unwrap().get(&m) {
        return r.clone();
    }
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        let mut t = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if m == 1 {
                p0 = 1.0;
                p1 = t;
            }
            dp = m as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dt = p1 / dp;
            t -= dt;
            if dt.abs() < 1e-16 {
                break;
            }
        }
        // recompute derivative at the converged node
        let (mut p0, mut p1) = (1.0, t);
        for k in 2..=m {
            let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        if m > 1 {
            dp = m as f64 * (t * p1 - p0) / (t * t - 1.0);
        }
        let wt = 2.0 / ((1.0 - t * t) * dp * dp);
        x[i] = -t;
        x[m - 1 - i] = t;
        w[i] = wt;
        w[m - 1 - i] = wt;
    }
    if m % 2 == 1 {
        x[m / 2] = 0.0;
    }
    let r = Arc::new((x, w));
    legendre_cache().lock().unwrap().insert(m, r.clone());
    r
}

impl QuadratureRule1D {
    /// m-point Gauss–Legendre rule on [a, b].
    pub fn gauss_legendre(m: usize, a: f64, b: f64) -> Self {
        assert!(m >= 1);
        let unit = legendre_unit(m);
        let h = 0.5 * (b - a);
        let c = 0.5 * (a + b);
        QuadratureRule1D {
            nodes: unit.0.iter().map(|t| c + h * t).collect(),
            weights: unit.1.iter().map(|w| w * h).collect(),
            kind: QuadratureKind::GaussLegendre,
        }
    }

    /// Composite Gauss–Legendre: `panels` equal panels of `m` points each.
    pub fn composite(a: f64, b: f64, panels: usize, m: usize) -> Self {
        Self::composite_breaks(&linspace(a, b, panels + 1), m)
    }

    /// Composite Gauss–Legendre over the given sorted breakpoints.
    pub fn composite_breaks(breaks: &[f64], m: usize) -> Self {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in breaks.windows(2) {
            if p[1] <= p[0] {
                continue;
            }
            let r = Self::gauss_legendre(m, p[0], p[1]);
            nodes.extend(r.nodes);
            weights.extend(r.weights);
        }
        QuadratureRule1D { nodes, weights, kind: QuadratureKind::GaussLegendre }
    }

    /// Periodic trapezoid rule with m nodes t_k = start + k·period/m.
    pub fn periodic_trapezoid(m: usize, start: f64, period: f64) -> Self {
        let h = period / m as f64;
        QuadratureRule1D {
            nodes: (0..m).map(|k| start + h * k as f64).collect(),
            weights: vec![h; m],
            kind: QuadratureKind::TrapezoidPeriodic,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![a];
    }
    (0..count).map(|k| a + (b - a) * k as f64 / (count - 1) as f64).collect()
}

// 7-point Gauss / 15-point Kronrod pair.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

struct Seg {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}
impl PartialEq for Seg {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Seg {}
impl PartialOrd for Seg {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Seg {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of f over [a, b].
/// Infinite endpoints are mapped by x = t/(1−t²).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate_adaptive(f, b, a, abs_tol, rel_tol).map(|v| -v);
    }
    if a.is_infinite() || b.is_infinite() {
        let ta = if a.is_infinite() { -1.0 } else { inv_map(a) };
        let tb = if b.is_infinite() { 1.0 } else { inv_map(b) };
        let g = |t: f64| {
            let d = 1.0 - t * t;
            if d <= 0.0 {
                return 0.0;
            }
            let x = t / d;
            let v = f(x) * (1.0 + t * t) / (d * d);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        return adapt(&g, ta, tb, abs_tol, rel_tol);
    }
    adapt(&f, a, b, abs_tol, rel_tol)
}

fn inv_map(x: f64) -> f64 {
    // inverse of x = t/(1−t²) on (−1,1)
    if x == 0.0 {
        0.0
    } else {
        (-1.0 + (1.0 + 4.0 * x * x).sqrt()) / (2.0 * x)
    }
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let (v, e) = gk15(f, a, b);
    heap.push(Seg { a, b, val: v, err: e });
    let (mut total, mut err) = (v, e);
    for _ in 0..20_000 {
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(heap.iter().map(|s| s.val).sum());
        }
        let s = heap.pop().unwrap();
        let m = 0.5 * (s.a + s.b);
        let (v1, e1) = gk15(f, s.a, m);
        let (v2, e2) = gk15(f, m, s.b);
        total += v1 + v2 - s.val;
        err += e1 + e2 - s.err;
        heap.push(Seg { a: s.a, b: m, val: v1, err: e1 });
        heap.push(Seg { a: m, b: s.b, val: v2, err: e2 });
        if !total.is_finite() {
            break;
        }
    }
    let err: f64 = heap.iter().map(|s| s.err).sum();
    let total: f64 = heap.iter().map(|s| s.val).sum();
    if err <= abs_tol.max(rel_tol * total.abs()) {
        Ok(total)
    } else {
        Err(Error::Convergence(format!(
            "adaptive quadrature on [{a}, {b}] stalled with error estimate {err:e}"
        )))
    }
}
