//! Real test functions f: ℂ → ℝ for linear statistics Σ f(z_j).

use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Central-difference step used when no analytic gradient is available.
pub const GRADIENT_STEP: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    /// Real-analytic everywhere.
    Analytic,
    /// C^∞ with compact support.
    Smooth,
    /// Interpolated samples, only continuous.
    Piecewise,
}

/// Behaviour under z → −z, when there is any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    /// f(z̄) = f(z).
    pub conjugation: bool,
    pub parity: Option<Parity>,
}

/// Samples on a rectangular grid, bilinear in between, zero outside.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridFunction {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major: values[iy * xs.len() + ix].
    pub values: Vec<f64>,
    pub fx: Option<Vec<f64>>,
    pub fy: Option<Vec<f64>>,
}

#[derive(Deserialize)]
struct GridRow {
    x: f64,
    y: f64,
    f: f64,
    fx: Option<f64>,
    fy: Option<f64>,
}

fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
    v
}

impl GridFunction {
    /// Reads a CSV with header `x,y,f[,fx,fy]`.
    pub fn from_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let rows: Vec<GridRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
        Self::from_rows(rows)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_csv(std::fs::File::open(path)?)
    }

    fn from_rows(rows: Vec<GridRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Validation("grid function CSV has no rows".into()));
        }
        let xs = sorted_unique(rows.iter().map(|r| r.x).collect());
        let ys = sorted_unique(rows.iter().map(|r| r.y).collect());
        if xs.len() < 2 || ys.len() < 2 || xs.len() * ys.len() != rows.len() {
            return Err(Error::Validation(format!(
                "grid function needs a full rectangular grid with at least 2x2 points; got {} rows for {}x{}",
                rows.len(),
                xs.len(),
                ys.len()
            )));
        }
        let nx = xs.len();
        let has_grad = rows[0].fx.is_some() && rows[0].fy.is_some();
        let mut values = vec![f64::NAN; nx * ys.len()];
        let mut fx = vec![f64::NAN; if has_grad { values.len() } else { 0 }];
        let mut fy = fx.clone();
        for r in &rows {
            if !r.f.is_finite() {
                return Err(Error::Validation(format!("non-finite f at ({}, {})", r.x, r.y)));
            }
            let ix = xs.partition_point(|&v| v < r.x);
            let iy = ys.partition_point(|&v| v < r.y);
            let i = iy * nx + ix;
            if !values[i].is_nan() {
                return Err(Error::Validation(format!("duplicate grid point ({}, {})", r.x, r.y)));
            }
            values[i] = r.f;
            if has_grad {
                match (r.fx, r.fy) {
                    (Some(a), Some(b)) => {
                        fx[i] = a;
                        fy[i] = b;
                    }
                    _ => return Err(Error::Validation("fx/fy must be given on every row or none".into())),
                }
            }
        }
        Ok(GridFunction {
            xs,
            ys,
            values,
            fx: has_grad.then_some(fx),
            fy: has_grad.then_some(fy),
        })
    }

    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        (self.xs[0], *self.xs.last().unwrap(), self.ys[0], *self.ys.last().unwrap())
    }

    fn interpolate(&self, data: &[f64], x: f64, y: f64) -> f64 {
        let (x0, x1, y0, y1) = self.bounding_box();
        if !(x >= x0 && x <= x1 && y >= y0 && y <= y1) {
            return 0.0;
        }
        let cell = |v: &[f64], t: f64| {
            let i = v.partition_point(|&a| a <= t).clamp(1, v.len() - 1) - 1;
            (i, (t - v[i]) / (v[i + 1] - v[i]))
        };
        let (ix, u) = cell(&self.xs, x);
        let (iy, s) = cell(&self.ys, y);
        let nx = self.xs.len();
        let at = |a: usize, b: usize| data[(iy + b) * nx + ix + a];
        (1.0 - s) * ((1.0 - u) * at(0, 0) + u * at(1, 0)) + s * ((1.0 - u) * at(0, 1) + u * at(1, 1))
    }
}

/// A real test function on the plane.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum TestFunction {
    /// e^{1−1/(1−|z/R|²)} on |z| < R, zero outside.
    Bump { radius: f64 },
    /// Re z.
    RealPart,
    Constant { value: f64 },
    Grid(GridFunction),
}

impl TestFunction {
    pub fn bump(radius: f64) -> Self {
        TestFunction::Bump { radius }
    }

    /// Parses `bump:R`, `re`, `const:c` or `grid:path.csv`.
    pub fn from_cli_spec(spec: &str) -> Result<Self> {
        let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let num = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| Error::Validation(format!("bad number {s:?} in test function {spec:?}")))
        };
        let f = match kind.trim() {
            "bump" => TestFunction::Bump { radius: if arg.is_empty() { 1.0 } else { num(arg)? } },
            "re" | "real" | "real-part" => TestFunction::RealPart,
            "const" | "constant" => TestFunction::Constant { value: if arg.is_empty() { 1.0 } else { num(arg)? } },
            "grid" => TestFunction::Grid(GridFunction::from_path(Path::new(arg))?),
            other => return Err(Error::Validation(format!("unknown test function {other:?}"))),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            TestFunction::Bump { radius } if !(radius.is_finite() && *radius > 0.0) => {
                Err(Error::Validation(format!("bump radius must be positive, got {radius}")))
            }
            TestFunction::Constant { value } if !value.is_finite() => {
                Err(Error::Validation("constant must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, z: C64) -> f64 {
        match self {
            TestFunction::Bump { radius } => {
                let t = z.norm_sqr() / (radius * radius);
                if t >= 1.0 {
                    0.0
                } else {
                    (1.0 - 1.0 / (1.0 - t)).exp()
                }
            }
            TestFunction::RealPart => z.re,
            TestFunction::Constant { value } => *value,
            TestFunction::Grid(g) => g.interpolate(&g.values, z.re, z.im),
        }
    }

    /// (∂f/∂x, ∂f/∂y).
    pub fn gradient(&self, z: C64) -> (f64, f64) {
        match self {
            TestFunction::Bump { radius } => {
                let r2 = radius * radius;
                let t = z.norm_sqr() / r2;
                if t >= 1.0 {
                    return (0.0, 0.0);
                }
                let d = 1.0 - t;
                // ∇f = f · (−2z/R²)/(1−t)²
                let c = -2.0 * self.eval(z) / (r2 * d * d);
                (c * z.re, c * z.im)
            }
            TestFunction::RealPart => (1.0, 0.0),
            TestFunction::Constant { .. } => (0.0, 0.0),
            TestFunction::Grid(g) => match (&g.fx, &g.fy) {
                (Some(fx), Some(fy)) => (g.interpolate(fx, z.re, z.im), g.interpolate(fy, z.re, z.im)),
                _ => self.gradient_fd(z),
            },
        }
    }

    /// Central differences with step [`GRADIENT_STEP`].
    pub fn gradient_fd(&self, z: C64) -> (f64, f64) {
        let h = GRADIENT_STEP;
        let dx = (self.eval(z + h) - self.eval(z - h)) / (2.0 * h);
        let dy = (self.eval(z + C64::new(0.0, h)) - self.eval(z - C64::new(0.0, h))) / (2.0 * h);
        (dx, dy)
    }

    /// Radius of the smallest origin-centred disk containing supp f, or ∞.
    pub fn support_radius(&self) -> f64 {
        match self {
            TestFunction::Bump { radius } => *radius,
            TestFunction::RealPart | TestFunction::Constant { .. } => f64::INFINITY,
            TestFunction::Grid(g) => {
                let (a, b, c, d) = g.bounding_box();
                a.hypot(c).max(a.hypot(d)).max(b.hypot(c)).max(b.hypot(d))
            }
        }
    }

    /// A box containing supp f, None when unbounded.
    pub fn support_box(&self) -> Option<(f64, f64, f64, f64)> {
        match self {
            TestFunction::Bump { radius } => Some((-radius, *radius, -radius, *radius)),
            TestFunction::Grid(g) => Some(g.bounding_box()),
            _ => None,
        }
    }

    /// Lines x = const and y = const across which f is only continuous
    /// (the sample lines of a grid function).
    pub fn kinks(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        match self {
            TestFunction::Grid(g) => Some((g.xs.clone(), g.ys.clone())),
            _ => None,
        }
    }

    pub fn has_compact_support(&self) -> bool {
        self.support_box().is_some()
    }

    pub fn smoothness(&self) -> Smoothness {
        match self {
            TestFunction::Bump { .. } => Smoothness::Smooth,
            TestFunction::RealPart | TestFunction::Constant { .. } => Smoothness::Analytic,
            TestFunction::Grid(_) => Smoothness::Piecewise,
        }
    }

    pub fn symmetry(&self) -> Symmetry {
        match self {
            TestFunction::Bump { .. } | TestFunction::Constant { .. } => {
                Symmetry { conjugation: true, parity: Some(Parity::Even) }
            }
            TestFunction::RealPart => Symmetry { conjugation: true, parity: Some(Parity::Odd) },
            TestFunction::Grid(_) => Symmetry { conjugation: false, parity: None },
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, TestFunction::Constant { .. })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_values_and_gradient() {
        let f = TestFunction::bump(1.0);
        assert!((f.eval(C64::new(0.0, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(f.eval(C64::new(1.0, 0.0)), 0.0);
        for z in [C64::new(0.3, 0.2), C64::new(-0.7, 0.1), C64::new(0.05, -0.9)] {
            let (a, b) = f.gradient(z);
            let (c, d) = f.gradient_fd(z);
            assert!((a - c).abs() < 1e-4 && (b - d).abs() < 1e-4, "{z}");
        }
    }

    #[test]
    fn grid_csv_bilinear() {
        let mut s = String::from("x,y,f\n");
        for iy in 0..3 {
            for ix in 0..4 {
                let (x, y) = (ix as f64 * 0.5, iy as f64 * 0.5);
                s += &format!("{x},{y},{}\n", 2.0 * x + y);
            }
        }
        let g = TestFunction::Grid(GridFunction::from_csv(s.as_bytes()).unwrap());
        assert!((g.eval(C64::new(0.7, 0.3)) - 1.7).abs() < 1e-14);
        assert_eq!(g.eval(C64::new(-0.1, 0.3)), 0.0);
        let (gx, gy) = g.gradient(C64::new(0.7, 0.3));
        assert!((gx - 2.0).abs() < 1e-6 && (gy - 1.0).abs() < 1e-6);
        assert!(GridFunction::from_csv("x,y,f\n0,0,1\n1,0,1\n0,1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn cli_spec_and_json() {
        let f = TestFunction::from_cli_spec("bump:0.5").unwrap();
        assert!(matches!(f, TestFunction::Bump { radius } if radius == 0.5));
        assert!(TestFunction::from_cli_spec("bump:-1").is_err());
        assert!(TestFunction::from_cli_spec("wave").is_err());
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"name":"bump","radius":0.5}"#);
    }
}
