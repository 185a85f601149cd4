//! Regions A ⊂ ℂ for counting statistics and their product quadrature rules.
//!
//! JSON schema (tag `kind`):
//!
//! * `{"kind": "disk", "radius": r, "center": [x, y]}` (`center` optional)
//! * `{"kind": "complement-disk", "radius": a}`
//! * `{"kind": "square", "half_side": a}` — the square [−a, a]²
//! * `{"kind": "band", "tau": τ, "n": n, "s": S}` — the set A_n(S)
//! * `{"kind": "convex-curve", "points": [[x, y], ...]}` — boundary samples
//!   in counter-clockwise order, interpolated by a periodic cubic spline of
//!   the polar radius about their centroid.

use crate::ensemble::{edge_point_and_normal, DropletGeometry};
use crate::error::{Error, Result};
use crate::numerics::QuadratureRule1D;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Region {
    Disk {
        radius: f64,
        #[serde(default)]
        center: (f64, f64),
    },
    ComplementDisk {
        radius: f64,
    },
    Square {
        half_side: f64,
    },
    Band {
        tau: f64,
        n: usize,
        s: f64,
    },
    ConvexCurve {
        points: Vec<(f64, f64)>,
    },
}

/// Which of two independent discretizations to build. `Alternate` uses a
/// different Gauss order, panel count and a half-step angular offset, so
/// that two computations on it share no nodes with `Primary`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleVariant {
    Primary,
    Alternate,
}

/// Resolution of a product rule: refinement levels of the two directions
/// (radial/normal and angular; both axes for tensor rules).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub radial: u32,
    pub angular: u32,
}

/// Quadrature nodes z_g with weights w_g for ∫_A · d²z.
#[derive(Clone, Debug, Default)]
pub struct PlaneRule {
    pub nodes: Vec<C64>,
    pub weights: Vec<f64>,
}

impl PlaneRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, z: C64, w: f64) {
        self.nodes.push(z);
        self.weights.push(w);
    }

    pub fn integrate<F: Fn(C64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&z, &w)| w * f(z)).sum()
    }

    /// For a rule symmetric under z → z̄: keep Im z > 0 with doubled weight
    /// and the real nodes unchanged. Sums of Re(·) of conjugation-covariant
    /// integrands are preserved.
    pub fn fold_conjugate(&self) -> PlaneRule {
        let mut out = PlaneRule::default();
        let tiny = 1e-14;
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            if z.im > tiny {
                out.push(z, 2.0 * w);
            } else if z.im.abs() <= tiny {
                out.push(C64::new(z.re, 0.0), w);
            }
        }
        out
    }
}

fn gl_order(v: RuleVariant) -> usize {
    match v {
        RuleVariant::Primary => 16,
        RuleVariant::Alternate => 12,
    }
}

/// Panels for a radial extent `len` at microscopic scale 1/√n.
fn panels(len: f64, n: usize, level: u32, v: RuleVariant) -> usize {
    let base = (0.5 * len * (n as f64).sqrt()).ceil().max(1.0);
    let f = match v {
        RuleVariant::Primary => 1.0,
        RuleVariant::Alternate => 4.0 / 3.0,
    };
    ((base * f).ceil() as usize) << level
}

fn angular_count(n: usize, level: u32) -> usize {
    let nf = n as f64;
    let base = (2.0 * nf + 8.0 * nf.sqrt() + 32.0) as usize;
    (base + base % 2) << level
}

fn angular_offset(v: RuleVariant, m: usize) -> f64 {
    match v {
        RuleVariant::Primary => 0.0,
        RuleVariant::Alternate => PI / m as f64,
    }
}

impl Region {
    pub fn disk(radius: f64) -> Region {
        Region::Disk { radius, center: (0.0, 0.0) }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        match self {
            Region::Disk { radius, center } => {
                if !(radius.is_finite() && *radius >= 0.0) || !center.0.is_finite() || !center.1.is_finite() {
                    return bad(format!("invalid disk radius {radius}"));
                }
            }
            Region::ComplementDisk { radius } => {
                if !(radius.is_finite() && *radius >= 0.0) {
                    return bad(format!("invalid complement-disk radius {radius}"));
                }
            }
            Region::Square { half_side } => {
                if !(half_side.is_finite() && *half_side >= 0.0) {
                    return bad(format!("invalid square half-side {half_side}"));
                }
            }
            Region::Band { tau, n, s } => {
                if !(0.0..1.0).contains(tau) || *n == 0 || !s.is_finite() {
                    return bad("band needs 0 <= tau < 1, n >= 1 and finite S".into());
                }
                let g = DropletGeometry::new(*tau);
                let rmin = g.semi_minor * g.semi_minor / g.semi_major;
                if self.band_offset() < -0.9 * rmin {
                    return Err(Error::Domain(format!(
                        "inner offset {} exceeds the minimal curvature radius {rmin}",
                        self.band_offset()
                    )));
                }
            }
            Region::ConvexCurve { points } => {
                if points.len() < 8 {
                    return bad("convex-curve needs at least 8 boundary samples".into());
                }
                ConvexCurve::new(points)?;
            }
        }
        Ok(())
    }

    /// δ = S/√(2nΔV) with ΔV = 2/(1−τ²), the Laplacian for which ΔV/(2π) is
    /// the equilibrium density 1/(π(1−τ²)); i.e. δ = S√(1−τ²)/(2√n).
    pub fn band_offset(&self) -> f64 {
        match self {
            Region::Band { tau, n, s } => s * (1.0 - tau * tau).sqrt() / (2.0 * (*n as f64).sqrt()),
            _ => 0.0,
        }
    }

    pub fn contains(&self, z: C64) -> bool {
        match self {
            Region::Disk { radius, center } => (z - C64::new(center.0, center.1)).norm() <= *radius,
            Region::ComplementDisk { radius } => z.norm() > *radius,
            Region::Square { half_side } => z.re.abs() <= *half_side && z.im.abs() <= *half_side,
            Region::Band { tau, .. } => signed_distance_ellipse(*tau, z) <= self.band_offset(),
            Region::ConvexCurve { points } => match ConvexCurve::new(points) {
                Ok(c) => c.contains(z),
                Err(_) => false,
            },
        }
    }

    /// |∂A|.
    pub fn boundary_length(&self) -> f64 {
        match self {
            Region::Disk { radius, .. } => 2.0 * PI * radius,
            Region::ComplementDisk { radius } => 2.0 * PI * radius,
            Region::Square { half_side } => 8.0 * half_side,
            // Steiner: the parallel curve at distance δ of a convex curve
            Region::Band { tau, .. } => DropletGeometry::new(*tau).perimeter() + 2.0 * PI * self.band_offset(),
            Region::ConvexCurve { points } => ConvexCurve::new(points).map(|c| c.perimeter()).unwrap_or(f64::NAN),
        }
    }

    /// |A| (∞ for complements).
    pub fn area(&self) -> f64 {
        match self {
            Region::Disk { radius, .. } => PI * radius * radius,
            Region::ComplementDisk { .. } => f64::INFINITY,
            Region::Square { half_side } => 4.0 * half_side * half_side,
            Region::Band { tau, .. } => {
                let g = DropletGeometry::new(*tau);
                let d = self.band_offset();
                g.area() + g.perimeter() * d + PI * d * d
            }
            Region::ConvexCurve { points } => ConvexCurve::new(points).map(|c| c.area()).unwrap_or(f64::NAN),
        }
    }

    /// Whether A is invariant under z → z̄.
    pub fn conjugation_symmetric(&self) -> bool {
        match self {
            Region::Disk { center, .. } => center.1 == 0.0,
            Region::ConvexCurve { .. } => false,
            _ => true,
        }
    }

    /// Product rule for ∫_A over the region, adapted to kind and to the
    /// microscopic scale of an n-point ensemble with parameter τ (used to
    /// bound the part of complements that carries mass).
    pub fn rule(&self, n: usize, tau: f64, res: Resolution, v: RuleVariant) -> Result<PlaneRule> {
        self.validate()?;
        let m = gl_order(v);
        let na = angular_count(n, res.angular);
        let off = angular_offset(v, na);
        let mut out = PlaneRule::default();
        match self {
            Region::Disk { radius, center } => {
                let c = C64::new(center.0, center.1);
                polar_annulus(&mut out, c, 0.0, *radius, n, res, v, m, na, off);
            }
            Region::ComplementDisk { radius } => {
                let outer = radius.max(1.0 + tau) + 10.0 / (n as f64).sqrt();
                polar_annulus(&mut out, C64::new(0.0, 0.0), *radius, outer, n, res, v, m, na, off);
            }
            Region::Square { half_side } => {
                let a = *half_side;
                let p = panels(2.0 * a, n, res.radial.max(res.angular), v);
                let r = QuadratureRule1D::composite(-a, a, p, m);
                for (&x, &wx) in r.nodes.iter().zip(&r.weights) {
                    for (&y, &wy) in r.nodes.iter().zip(&r.weights) {
                        out.push(C64::new(x, y), wx * wy);
                    }
                }
            }
            Region::Band { tau: bt, .. } => {
                let g = DropletGeometry::new(*bt);
                let (a, b) = (g.semi_major, g.semi_minor);
                // interior of E_τ: z = r(a cos θ + i b sin θ), d²z = ab r dr dθ
                let rr = QuadratureRule1D::composite(0.0, 1.0, panels(a, n, res.radial, v), m);
                let th = QuadratureRule1D::periodic_trapezoid(na, off, 2.0 * PI);
                for (&t, &wt) in th.nodes.iter().zip(&th.weights) {
                    let e = C64::new(a * t.cos(), b * t.sin());
                    for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
                        out.push(e * r, wr * wt * a * b * r);
                    }
                }
                // normal strip z = P(η) + t ν(η), t ∈ [0, δ] (signed), with
                // d²z = (|P'| + t ab/|P'|²) dt dη
                let d = self.band_offset();
                if d != 0.0 {
                    let tr = QuadratureRule1D::gauss_legendre(m << res.radial, 0.0, d);
                    for (&eta, &we) in th.nodes.iter().zip(&th.weights) {
                        let (p, nu) = edge_point_and_normal(eta, *bt);
                        let sp = (a * a * eta.sin().powi(2) + b * b * eta.cos().powi(2)).sqrt();
                        for (&t, &wt) in tr.nodes.iter().zip(&tr.weights) {
                            out.push(p + nu * t, we * wt * (sp + t * a * b / (sp * sp)));
                        }
                    }
                }
            }
            Region::ConvexCurve { points } => {
                let c = ConvexCurve::new(points)?;
                let rmax = c.max_radius();
                let pr = panels(rmax, n, res.radial, v);
                let unit = QuadratureRule1D::composite(0.0, 1.0, pr, m);
                let th = QuadratureRule1D::periodic_trapezoid(na, off, 2.0 * PI);
                for (&t, &wt) in th.nodes.iter().zip(&th.weights) {
                    let rb = c.radius_at(t);
                    let e = C64::from_polar(1.0, t);
                    for (&u, &wu) in unit.nodes.iter().zip(&unit.weights) {
                        let r = u * rb;
                        out.push(c.center + e * r, wu * rb * wt * r);
                    }
                }
            }
        }
        Ok(out)
    }
}

#[allow(clippy::too_many_arguments)]
fn polar_annulus(
    out: &mut PlaneRule,
    c: C64,
    r0: f64,
    r1: f64,
    n: usize,
    res: Resolution,
    v: RuleVariant,
    m: usize,
    na: usize,
    off: f64,
) {
    if r1 <= r0 {
        return;
    }
    let rr = QuadratureRule1D::composite(r0, r1, panels(r1 - r0, n, res.radial, v), m);
    let th = QuadratureRule1D::periodic_trapezoid(na, off, 2.0 * PI);
    for (&t, &wt) in th.nodes.iter().zip(&th.weights) {
        let e = C64::from_polar(1.0, t);
        for (&r, &wr) in rr.nodes.iter().zip(&rr.weights) {
            out.push(c + e * r, wr * wt * r);
        }
    }
}

/// Signed distance to ∂E_τ (negative inside).
pub fn signed_distance_ellipse(tau: f64, z: C64) -> f64 {
    let g = DropletGeometry::new(tau);
    let (a, b) = (g.semi_major, g.semi_minor);
    if a == b {
        return z.norm() - a;
    }
    // work in the first quadrant
    let (x, y) = (z.re.abs(), z.im.abs());
    // minimize |P(t) − (x, y)|² over t ∈ [0, π/2]
    let d2 = |t: f64| (a * t.cos() - x).powi(2) + (b * t.sin() - y).powi(2);
    let df = |t: f64| (b * b - a * a) * t.sin() * t.cos() + a * x * t.sin() - b * y * t.cos();
    let mut best = 0.0;
    let mut bestv = f64::INFINITY;
    for k in 0..=64 {
        let t = 0.5 * PI * k as f64 / 64.0;
        let v = d2(t);
        if v < bestv {
            bestv = v;
            best = t;
        }
    }
    // bisection on the derivative in the bracketing cell, then Newton polish
    let h = 0.5 * PI / 64.0;
    let (mut lo, mut hi) = ((best - h).max(0.0), (best + h).min(0.5 * PI));
    if df(lo) * df(hi) < 0.0 {
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if df(lo) * df(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        best = 0.5 * (lo + hi);
    }
    let dist = d2(best).sqrt();
    if g.implicit(z) <= 1.0 {
        -dist
    } else {
        dist
    }
}

/// Closed convex curve through the given samples: a periodic cubic spline of
/// the radius r(θ) about the centroid of the samples.
#[derive(Clone, Debug)]
pub struct ConvexCurve {
    pub center: C64,
    theta: Vec<f64>,
    r: Vec<f64>,
    m2: Vec<f64>,
}

impl ConvexCurve {
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        let m = points.len();
        if m < 4 {
            return Err(Error::Validation("too few boundary samples".into()));
        }
        let cx = points.iter().map(|p| p.0).sum::<f64>() / m as f64;
        let cy = points.iter().map(|p| p.1).sum::<f64>() / m as f64;
        let center = C64::new(cx, cy);
        let mut pts: Vec<(f64, f64)> = points
            .iter()
            .map(|&(x, y)| {
                let d = C64::new(x, y) - center;
                (d.arg().rem_euclid(2.0 * PI), d.norm())
            })
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in pts.windows(2) {
            if w[1].0 - w[0].0 <= 1e-12 {
                return Err(Error::Validation("boundary samples repeat an angle".into()));
            }
        }
        if pts.iter().any(|p| p.1 <= 0.0) {
            return Err(Error::Validation("centroid lies on the curve".into()));
        }
        let theta: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let r: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let m2 = periodic_spline_second_derivatives(&theta, &r);
        let c = ConvexCurve { center, theta, r, m2 };
        // convexity: the signed curvature of the spline must stay nonnegative
        for k in 0..4 * m {
            let t = 2.0 * PI * k as f64 / (4 * m) as f64;
            let (r, r1, r2) = c.eval(t);
            if r * r + 2.0 * r1 * r1 - r * r2 < -1e-9 * (r * r + r1 * r1) {
                return Err(Error::Validation("boundary samples do not describe a convex curve".into()));
            }
        }
        Ok(c)
    }

    fn segment(&self, t: f64) -> (usize, f64, f64) {
        let m = self.theta.len();
        let t = t.rem_euclid(2.0 * PI);
        // find k with θ_k ≤ t < θ_{k+1} (cyclically)
        let k = match self.theta.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => i,
            Err(0) => m - 1,
            Err(i) => i - 1,
        };
        let t0 = self.theta[k];
        let t1 = if k + 1 < m { self.theta[k + 1] } else { self.theta[0] + 2.0 * PI };
        let mut u = t - t0;
        if u < 0.0 {
            u += 2.0 * PI;
        }
        (k, u, t1 - t0)
    }

    /// (r, r', r'') at angle t.
    fn eval(&self, t: f64) -> (f64, f64, f64) {
        let m = self.theta.len();
        let (k, u, h) = self.segment(t);
        let k1 = (k + 1) % m;
        let (y0, y1, m0, m1) = (self.r[k], self.r[k1], self.m2[k], self.m2[k1]);
        let a = (h - u) / h;
        let b = u / h;
        let r = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let r1 = (y1 - y0) / h + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        let r2 = a * m0 + b * m1;
        (r, r1, r2)
    }

    pub fn radius_at(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn contains(&self, z: C64) -> bool {
        let d = z - self.center;
        d.norm() <= self.radius_at(d.arg())
    }

    pub fn max_radius(&self) -> f64 {
        (0..720).map(|k| self.radius_at(2.0 * PI * k as f64 / 720.0)).fold(0.0, f64::max)
    }

    fn integrate_theta<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let m = self.theta.len();
        let mut s = 0.0;
        for k in 0..m {
            let t0 = self.theta[k];
            let t1 = if k + 1 < m { self.theta[k + 1] } else { self.theta[0] + 2.0 * PI };
            s += QuadratureRule1D::gauss_legendre(8, t0, t1).integrate(&f);
        }
        s
    }

    pub fn perimeter(&self) -> f64 {
        self.integrate_theta(|t| {
            let (r, r1, _) = self.eval(t);
            (r * r + r1 * r1).sqrt()
        })
    }

    pub fn area(&self) -> f64 {
        self.integrate_theta(|t| 0.5 * self.radius_at(t).powi(2))
    }
}

/// Second derivatives of the periodic cubic spline through (x_k, y_k) with
/// period 2π (cyclic tridiagonal system, solved by Sherman–Morrison).
fn periodic_spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let m = x.len();
    let h: Vec<f64> = (0..m)
        .map(|k| if k + 1 < m { x[k + 1] - x[k] } else { x[0] + 2.0 * PI - x[m - 1] })
        .collect();
    // row k: h_{k−1} M_{k−1} + 2(h_{k−1}+h_k) M_k + h_k M_{k+1} = rhs_k
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for k in 0..m {
        let km = (k + m - 1) % m;
        let kp = (k + 1) % m;
        sub[k] = h[km];
        diag[k] = 2.0 * (h[km] + h[k]);
        sup[k] = h[k];
        rhs[k] = 6.0 * ((y[kp] - y[k]) / h[k] - (y[k] - y[km]) / h[km]);
    }
    // cyclic corners: a_0 = sub[0] at column m−1, c_{m−1} = sup[m−1] at column 0
    let alpha = sup[m - 1];
    let beta = sub[0];
    let gamma = -diag[0];
    let mut d2 = diag.clone();
    d2[0] -= gamma;
    d2[m - 1] -= alpha * beta / gamma;
    let solve = |d: &[f64], r: &[f64]| -> Vec<f64> {
        let mut c = vec![0.0; m];
        let mut z = vec![0.0; m];
        let mut den = d[0];
        c[0] = sup[0] / den;
        z[0] = r[0] / den;
        for i in 1..m {
            den = d[i] - sub[i] * c[i - 1];
            c[i] = if i + 1 < m { sup[i] / den } else { 0.0 };
            z[i] = (r[i] - sub[i] * z[i - 1]) / den;
        }
        for i in (0..m - 1).rev() {
            z[i] -= c[i] * z[i + 1];
        }
        z
    };
    let xs = solve(&d2, &rhs);
    let mut u = vec![0.0; m];
    u[0] = gamma;
    u[m - 1] = alpha;
    let zs = solve(&d2, &u);
    let fact = (xs[0] + beta * xs[m - 1] / gamma) / (1.0 + zs[0] + beta * zs[m - 1] / gamma);
    xs.iter().zip(&zs).map(|(a, b)| a - fact * b).collect()
}
