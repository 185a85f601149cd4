//! Moment estimators with delete-one jackknife errors.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, Serialize, Deserialize)]
pub struct McErrors {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct McStatistics {
    pub count: usize,
    pub mean: f64,
    /// Unbiased (N − 1) sample variance.
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub mc_errors: McErrors,
}

/// (mean, unbiased variance, skewness m₃/m₂^{3/2}, excess kurtosis m₄/m₂² − 3)
/// from power sums of the centred data.
fn from_sums(count: f64, s1: f64, s2: f64, s3: f64, s4: f64) -> [f64; 4] {
    let m = s1 / count;
    let c2 = s2 / count - m * m;
    let c3 = s3 / count - 3.0 * m * s2 / count + 2.0 * m.powi(3);
    let c4 = s4 / count - 4.0 * m * s3 / count + 6.0 * m * m * s2 / count - 3.0 * m.powi(4);
    let var = c2 * count / (count - 1.0);
    let (skew, kurt) = if c2 > 0.0 { (c3 / c2.powf(1.5), c4 / (c2 * c2) - 3.0) } else { (0.0, 0.0) };
    [m, var.max(0.0), skew, kurt]
}

/// Delete-one jackknife standard error of `stat` over `xs`.
pub fn jackknife<F: Fn(&[f64]) -> f64>(xs: &[f64], stat: F) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::NAN;
    }
    let mut buf = Vec::with_capacity(n - 1);
    let leave: Vec<f64> = (0..n)
        .map(|i| {
            buf.clear();
            buf.extend(xs[..i].iter().chain(&xs[i + 1..]));
            stat(&buf)
        })
        .collect();
    let mean = leave.iter().sum::<f64>() / n as f64;
    ((n as f64 - 1.0) / n as f64 * leave.iter().map(|t| (t - mean).powi(2)).sum::<f64>()).sqrt()
}

pub fn moment_statistics(xs: &[f64]) -> Result<McStatistics> {
    let n = xs.len();
    if n < 2 {
        return Err(Error::InsufficientSamples { needed: 2, got: n });
    }
    if xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Validation("non-finite sample value".into()));
    }
    // centre first so the power sums do not cancel
    let shift = xs.iter().sum::<f64>() / n as f64;
    let ys: Vec<f64> = xs.iter().map(|x| x - shift).collect();
    let mut s = [0.0; 4];
    for &y in &ys {
        s[0] += y;
        s[1] += y * y;
        s[2] += y * y * y;
        s[3] += y * y * y * y;
    }
    let nf = n as f64;
    let full = from_sums(nf, s[0], s[1], s[2], s[3]);
    // the delete-one estimates follow from the power sums in O(N)
    let mut acc = [0.0; 4];
    let mut acc2 = [0.0; 4];
    for &y in &ys {
        let t = from_sums(nf - 1.0, s[0] - y, s[1] - y * y, s[2] - y.powi(3), s[3] - y.powi(4));
        for k in 0..4 {
            acc[k] += t[k];
            acc2[k] += t[k] * t[k];
        }
    }
    let err = |k: usize| {
        let m = acc[k] / nf;
        ((nf - 1.0) * (acc2[k] / nf - m * m)).max(0.0).sqrt()
    };
    Ok(McStatistics {
        count: n,
        mean: full[0] + shift,
        variance: full[1],
        skewness: full[2],
        excess_kurtosis: full[3],
        mc_errors: McErrors { mean: err(0), variance: err(1), skewness: err(2), excess_kurtosis: err(3) },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_jackknife_matches_direct() {
        let xs: Vec<f64> = (0..200).map(|i| ((i * 37 % 101) as f64 / 10.0).sin() + 0.01 * i as f64).collect();
        let s = moment_statistics(&xs).unwrap();
        let var = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() as f64 - 1.0)
        };
        let skew = |v: &[f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            let c2 = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64;
            let c3 = v.iter().map(|x| (x - m).powi(3)).sum::<f64>() / v.len() as f64;
            c3 / c2.powf(1.5)
        };
        assert!((s.variance - var(&xs)).abs() < 1e-12);
        assert!((s.skewness - skew(&xs)).abs() < 1e-10);
        assert!((s.mc_errors.variance - jackknife(&xs, var)).abs() < 1e-8);
        assert!((s.mc_errors.skewness - jackknife(&xs, skew)).abs() < 1e-8);
        let mean_err = (var(&xs) / 200.0).sqrt();
        assert!((s.mc_errors.mean - mean_err).abs() < 1e-10);
    }
}
