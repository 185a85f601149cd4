//! Text syntaxes shared by the subcommands: grids, complex points, regions.

use crate::counting::{ConvexCurve, Region};
use crate::error::{Error, Result};
use crate::numerics::quadrature::linspace;
use num_complex::Complex64 as C64;
use std::path::Path;

fn num(s: &str, what: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Validation(format!("bad number {s:?} in {what}")))
}

/// `start:stop:count`, inclusive of both ends; a bare number is a one-point
/// grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![num(x, "grid")?]),
        [a, b, c] => {
            let count: usize = c
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("grid count {c:?} is not a positive integer")))?;
            let (a, b) = (num(a, "grid")?, num(b, "grid")?);
            match count {
                0 => Err(Error::Validation("grid count must be positive".into())),
                1 => Ok(vec![a]),
                _ => Ok(linspace(a, b, count)),
            }
        }
        _ => Err(Error::Validation(format!("grid {s:?} must be start:stop:count"))),
    }
}

/// Comma-separated list of numbers or a single grid.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    if s.contains(':') {
        parse_grid(s)
    } else {
        s.split(',').map(|p| num(p, "list")).collect()
    }
}

/// `re,im` or a single real number.
pub fn parse_complex(s: &str) -> Result<C64> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [r] => Ok(C64::new(num(r, "complex point")?, 0.0)),
        [r, i] => Ok(C64::new(num(r, "complex point")?, num(i, "complex point")?)),
        _ => Err(Error::Validation(format!("complex point {s:?} must be re,im"))),
    }
}

/// `kind:params` or a JSON object `{"kind": ...}`:
/// `disk:r[,cx,cy]`, `complement-disk:a`, `square:a`, `band:S` (uses the
/// run's n and τ), `convex-curve:path.csv` (columns x,y, counter-clockwise
/// boundary samples).
pub fn parse_region(s: &str, n: usize, tau: f64) -> Result<Region> {
    let s = s.trim();
    let r = if s.starts_with('{') {
        serde_json::from_str::<Region>(s)?
    } else {
        let (kind, arg) = s.split_once(':').ok_or_else(|| Error::Validation(format!("region {s:?} must be kind:params")))?;
        let nums = || arg.split(',').map(|p| num(p, "region")).collect::<Result<Vec<f64>>>();
        match kind {
            "disk" => match nums()?.as_slice() {
                [r] => Region::Disk { radius: *r, center: (0.0, 0.0) },
                [r, x, y] => Region::Disk { radius: *r, center: (*x, *y) },
                _ => return Err(Error::Validation("disk takes r or r,cx,cy".into())),
            },
            "complement-disk" => Region::ComplementDisk { radius: num(arg, "region")? },
            "square" => Region::Square { half_side: num(arg, "region")? },
            "band" => Region::Band { tau, n, s: num(arg, "region")? },
            "convex-curve" => Region::ConvexCurve { points: read_points(Path::new(arg))? },
            other => return Err(Error::Validation(format!("unknown region kind {other:?}"))),
        }
    };
    r.validate()?;
    if let Region::ConvexCurve { points } = &r {
        ConvexCurve::new(points)?;
    }
    Ok(r)
}

fn read_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    #[derive(serde::Deserialize)]
    struct P {
        x: f64,
        y: f64,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let pts = rdr.deserialize::<P>().map(|p| p.map(|p| (p.x, p.y))).collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0.1:0.9:5").unwrap().len(), 5);
        assert!((parse_grid("0.1:0.9:5").unwrap()[4] - 0.9).abs() < 1e-15);
        assert_eq!(parse_grid("2").unwrap(), vec![2.0]);
        assert!(parse_grid("0:1").is_err() && parse_grid("0:1:0").is_err());
        assert_eq!(parse_list("1.5,2,4").unwrap(), vec![1.5, 2.0, 4.0]);
    }

    #[test]
    fn regions() {
        assert!(matches!(parse_region("disk:0.4", 8, 0.0).unwrap(), Region::Disk { radius, .. } if radius == 0.4));
        let r = parse_region(r#"{"kind":"square","half_side":0.3}"#, 8, 0.0).unwrap();
        assert!(matches!(r, Region::Square { half_side } if half_side == 0.3));
        assert!(matches!(parse_region("band:-1", 64, 0.5).unwrap(), Region::Band { n: 64, .. }));
        assert!(parse_region("disk:-1", 8, 0.0).is_err());
        assert!(parse_region("blob:1", 8, 0.0).is_err());
        assert_eq!(parse_complex("-0.5,0.25").unwrap(), C64::new(-0.5, 0.25));
    }
}
