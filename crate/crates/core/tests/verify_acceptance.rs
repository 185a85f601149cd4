//! Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned
//! below. `EGL_ACCEPT=1,3,5` runs a subset. Exits non-zero if any
//! criterion fails.

use egl::asymptotics::kernel_upper_bound;
use egl::counting::*;
use egl::ensemble::EnsembleParams;
use egl::kernel::*;
use egl::sampler::{mc_statistics, mc_statistics_scaled, SampleBatch};
use egl::smoothstats::*;
use egl::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Mutex;
use std::time::Instant;

// 1
const KERNEL_REL_TOL: f64 = 1e-8;
const KERNEL_PAIRS: usize = 200;
const GINIBRE_CONTINUITY_TOL: f64 = 1e-6;
const KERNEL_RUNTIME_S: f64 = 60.0;
// 2
const TRACE_TOL: f64 = 1e-6;
const REPRODUCING_TOL: f64 = 1e-6;
// 3
const TWO_PATH_TOL: f64 = 1e-5;
// 4
const EXPONENT: f64 = 0.50;
const EXPONENT_TOL: f64 = 0.02;
const PREFACTOR_TOL: f64 = 0.05;
const SQUARE_CLOSED_FORM_TOL: f64 = 1e-8;
// 5
const HOLOGRAPHY_QS: [f64; 3] = [1.5, 2.0, 4.0];
// 6
const RADIAL_ENTROPY_TOL: f64 = 0.03;
// 7
const SHAPE_CORRELATION_MIN: f64 = 0.99;
// 8
const DECAY_SLOPE_TOL: f64 = 0.02;
const DECAY_PREFACTOR_TOL: f64 = 0.15;
// 9
const RE_Z_LIMIT_TOL: f64 = 0.05;
const COMPONENT_TOL: f64 = 1e-10;
const MC_SIGMAS: f64 = 3.0;
/// Gaps below the quadrature tolerance of the exact engine count as ties.
const GAP_FLOOR: f64 = 1e-9;
// 10
const PHASE_CELL_TOL: f64 = 0.10;
const KAPPA_TOL: f64 = 0.02;
// 11
const CLT_SAMPLES: usize = 10_000;
const CLT_SIGMAS: f64 = 3.0;
// 12
const BOUND_SAMPLES: usize = 500;

static SPECTRA: Mutex<Vec<OverlapSpectrum>> = Mutex::new(Vec::new());

fn keep(s: &OverlapSpectrum) {
    SPECTRA.lock().unwrap().push(s.clone());
}

type Outcome = egl::Result<(bool, String)>;

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Uniform point in the ellipse with semi-axes (1±τ)·1.1.
fn point_in_droplet(rng: &mut ChaCha8Rng, tau: f64) -> C64 {
    loop {
        let (x, y) = (rng.random_range(-1.0..1.0f64), rng.random_range(-1.0..1.0f64));
        if x * x + y * y <= 1.0 {
            return C64::new(1.1 * (1.0 + tau) * x, 1.1 * (1.0 - tau) * y);
        }
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn crit1() -> Outcome {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for &n in &[4usize, 8, 16, 32] {
        for &tau in &[0.3, 0.5, 0.8] {
            for _ in 0..KERNEL_PAIRS {
                // w within two microscales of z: far-apart pairs have
                // exponentially small K, which no f64 contour sum resolves
                let z = point_in_droplet(&mut rng, tau);
                let w = z + point_in_droplet(&mut rng, 0.0) * (2.0 / 1.1 / (n as f64).sqrt());
                let h = kernel_elliptic(n, tau, z, w)?;
                let c = kernel_contour_oracle(n, tau, z, w)?;
                worst = worst.max(rel(h, c));
            }
        }
    }
    let mut cont = 0.0f64;
    for &n in &[4usize, 8, 16, 32] {
        for _ in 0..KERNEL_PAIRS / 4 {
            let (z, w) = (point_in_droplet(&mut rng, 0.0), point_in_droplet(&mut rng, 0.0));
            cont = cont.max(rel(kernel_elliptic(n, 1e-9, z, w)?, kernel_ginibre(n, z, w)));
        }
    }
    let secs = t0.elapsed().as_secs_f64();
    Ok((
        worst < KERNEL_REL_TOL && cont < GINIBRE_CONTINUITY_TOL && secs < KERNEL_RUNTIME_S,
        format!("max rel hermite/contour {worst:.2e}, tau->0 continuity {cont:.2e}, {secs:.1} s"),
    ))
}

fn crit2() -> Outcome {
    let mut worst_trace = 0.0f64;
    for &n in &[1usize, 2, 4, 8, 16, 32, 64] {
        for &tau in &[0.0, 0.3, 0.5, 0.8] {
            let t = trace_integral(n, tau, &PolarGrid::for_kernel(n, tau));
            worst_trace = worst_trace.max((t - n as f64).abs());
        }
    }
    let mut worst_rep = 0.0f64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for &(n, tau) in &[(8usize, 0.0), (8, 0.5), (16, 0.3), (32, 0.5), (64, 0.8)] {
        let grid = PolarGrid::for_kernel(n, tau);
        let pts: Vec<C64> = (0..4).map(|_| point_in_droplet(&mut rng, tau)).collect();
        for d in 0..n {
            worst_rep = worst_rep.max(reproducing_check(n, tau, d, &grid, &pts)?);
        }
    }
    Ok((
        worst_trace < TRACE_TOL && worst_rep < REPRODUCING_TOL,
        format!("max |int K - n| {worst_trace:.2e}, max reproduction residual {worst_rep:.2e}"),
    ))
}

fn crit3() -> Outcome {
    let mut worst = 0.0f64;
    for &n in &[8usize, 16, 32, 64] {
        for &tau in &[0.0, 0.5] {
            let p = EnsembleParams::new(n, tau)?;
            let mut regions = vec![Region::disk(0.4), Region::Square { half_side: 0.3 }];
            // at n = 8, τ = 0.5 the S = −1 offset exceeds the curvature radius
            if n >= 16 {
                regions.push(Region::Band { tau, n, s: -1.0 });
            }
            for r in regions {
                let s = overlap_spectrum_dense(&p, &r)?;
                keep(&s);
                let a = number_variance(&s);
                let b = number_variance_quadrature(&p, &r)?;
                worst = worst.max((a - b).abs() / a);
            }
        }
    }
    Ok((worst < TWO_PATH_TOL, format!("max relative difference {worst:.2e} over 22 cases")))
}

fn crit4() -> Outcome {
    let ns = [64usize, 128, 256, 512];
    let target = 1.0 / (4.0 * PI) * (1.0 / PI).sqrt();
    let mut ok = true;
    let mut detail = Vec::new();
    for r in [Region::disk(0.4), Region::Square { half_side: 0.3 }] {
        let mut vars = Vec::new();
        for &n in &ns {
            let s = overlap_spectrum(&EnsembleParams::new(n, 0.0)?, &r)?;
            keep(&s);
            vars.push(number_variance(&s));
        }
        let lx: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
        let ly: Vec<f64> = vars.iter().map(|v| v.ln()).collect();
        let (p, _) = least_squares(&lx, &ly);
        let logc = ns.iter().zip(&vars).map(|(&n, v)| (v / (n as f64).sqrt()).ln()).sum::<f64>() / ns.len() as f64;
        let c = logc.exp() / r.boundary_length();
        let dev = (c - target).abs() / target;
        ok &= (p - EXPONENT).abs() <= EXPONENT_TOL && dev <= PREFACTOR_TOL;
        detail.push(format!("{}: exponent {p:.4}, prefactor {c:.5} vs {target:.5} ({:+.1}%)", kind(&r), 100.0 * (c / target - 1.0)));
    }
    let mut worst_sq = 0.0f64;
    for &n in &[16usize, 64, 256] {
        for &a in &[0.2, 0.3] {
            let g = gaussian_boundary_functional(&Region::Square { half_side: a }, n)?;
            let cf = square_gaussian_closed_form(a, n, 0.0);
            worst_sq = worst_sq.max((g - cf).abs() / cf.abs());
        }
    }
    ok &= worst_sq <= SQUARE_CLOSED_FORM_TOL;
    detail.push(format!("square functional vs closed form {worst_sq:.2e}"));
    Ok((ok, detail.join("; ")))
}

fn kind(r: &Region) -> &'static str {
    match r {
        Region::Disk { .. } => "disk",
        Region::Square { .. } => "square",
        Region::Band { .. } => "band",
        Region::ComplementDisk { .. } => "complement-disk",
        Region::ConvexCurve { .. } => "convex-curve",
    }
}

fn crit5() -> Outcome {
    for &n in &[16usize, 64, 256] {
        for &tau in &[0.0, 0.5] {
            let p = EnsembleParams::new(n, tau)?;
            for r in [Region::disk(0.3), Region::Square { half_side: 0.5 }, Region::Band { tau, n, s: 0.0 }] {
                keep(&overlap_spectrum(&p, &r)?);
            }
        }
        keep(&overlap_spectrum(&EnsembleParams::new(n, 0.0)?, &Region::ComplementDisk { radius: 0.8 })?);
    }
    let spectra = SPECTRA.lock().unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for &q in &HOLOGRAPHY_QS {
        let mut acc: Option<HolographyBounds> = None;
        for s in spectra.iter().filter(|s| number_variance(s) > 1e-12) {
            let h = holography_bounds(s, q)?;
            match acc.as_mut() {
                Some(a) => a.merge(&h),
                None => acc = Some(h),
            }
        }
        let h = acc.expect("spectra were computed");
        ok &= h.holds() && h.lower_observed > 0.0;
        parts.push(format!(
            "q={q}: {} violations / {}, ratio range [{:.4}, {:.4}] <= {:.4}",
            h.violations, h.count, h.lower_observed, h.ratio, h.upper
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn crit6() -> Outcome {
    let a = 0.5;
    let ns = [64usize, 128, 256, 512];
    let mut ratios = Vec::new();
    for &n in &ns {
        let s = overlap_spectrum(&EnsembleParams::new(n, 0.0)?, &Region::disk(a))?;
        keep(&s);
        ratios.push(renyi_entropy(&s, 2.0)? / ((n as f64).sqrt() * 2.0 * PI * a));
    }
    let h: Vec<f64> = ns.iter().map(|&n| 1.0 / (n as f64).sqrt()).collect();
    let (r1, r2) = (ratios[2], ratios[3]);
    let extrap = (r2 * h[2] - r1 * h[3]) / (h[2] - h[3]);
    let lim = radial_entropy_limit(2.0)?;
    let dev = (extrap - lim).abs() / lim;
    Ok((
        dev <= RADIAL_ENTROPY_TOL,
        format!("ratios {ratios:.5?}, extrapolated {extrap:.5} vs {lim:.5} ({:.2}%)", 100.0 * dev),
    ))
}

/// c·f(S s₀) least-squares fit: returns (s₀, c, correlation).
fn fit_edge(ss: &[f64], ys: &[f64]) -> egl::Result<(f64, f64, f64)> {
    let model = |s0: f64| -> egl::Result<(f64, f64, Vec<f64>)> {
        let fs = ss.iter().map(|&s| edge_profile_f(s * s0)).collect::<egl::Result<Vec<_>>>()?;
        let c = ys.iter().zip(&fs).map(|(y, f)| y * f).sum::<f64>() / fs.iter().map(|f| f * f).sum::<f64>();
        let sse = ys.iter().zip(&fs).map(|(y, f)| (y - c * f).powi(2)).sum::<f64>();
        Ok((sse, c, fs))
    };
    let mut best = (f64::INFINITY, 1.0);
    for k in 0..=200 {
        let s0 = 0.1 + 4.9 * k as f64 / 200.0;
        let e = model(s0)?.0;
        if e < best.0 {
            best = (e, s0);
        }
    }
    let (mut lo, mut hi) = (best.1 - 0.05, best.1 + 0.05);
    let gr = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let (m1, m2) = (hi - gr * (hi - lo), lo + gr * (hi - lo));
        if model(m1)?.0 < model(m2)?.0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let s0 = 0.5 * (lo + hi);
    let (_, c, fs) = model(s0)?;
    let n = ys.len() as f64;
    let (my, mf) = (ys.iter().sum::<f64>() / n, fs.iter().sum::<f64>() / n);
    let cov: f64 = ys.iter().zip(&fs).map(|(y, f)| (y - my) * (f - mf)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let vf: f64 = fs.iter().map(|f| (f - mf).powi(2)).sum();
    Ok((s0, c, cov / (vy * vf).sqrt()))
}

fn crit7() -> Outcome {
    let n = 256usize;
    let ss = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let c_ref = 1.0 / (PI * PI.sqrt());
    let mut ok = true;
    let mut parts = Vec::new();
    for &tau in &[0.0, 0.5] {
        let p = EnsembleParams::new(n, tau)?;
        let mut ys = Vec::new();
        for &s in &ss {
            let r = band_region(&p, s)?;
            let sp = overlap_spectrum(&p, &r)?;
            keep(&sp);
            ys.push(((1.0 - tau * tau) / n as f64).sqrt() * number_variance(&sp) / r.boundary_length());
        }
        let (s0, c, corr) = fit_edge(&ss, &ys)?;
        ok &= corr >= SHAPE_CORRELATION_MIN;
        parts.push(format!(
            "tau={tau}: corr {corr:.5}, s0 {s0:.4} ({:+.1}% from 1), c {c:.5} ({:+.1}% from 1/(pi sqrt pi))",
            100.0 * (s0 - 1.0),
            100.0 * (c / c_ref - 1.0)
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn crit8() -> Outcome {
    let a = 1.2;
    let ns = [30usize, 50, 70];
    let mut lv = Vec::new();
    for &n in &ns {
        let s = radial_overlap_eigs_complement(n, a);
        keep(&s);
        lv.push(number_variance(&s).ln());
    }
    let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let (slope, _) = least_squares(&xs, &lv);
    let want = -(a * a - a.ln() - 1.0);
    let slope_dev = (slope - want).abs() / want.abs();
    let pre = lv[2].exp() / outside_variance_formula(70, a)?;
    Ok((
        slope_dev <= DECAY_SLOPE_TOL && (pre - 1.0).abs() <= DECAY_PREFACTOR_TOL,
        format!("slope {slope:.5} vs {want:.5} ({:.1}%), exact/formula at n=70: {pre:.4e}", 100.0 * slope_dev),
    ))
}

fn crit9() -> Outcome {
    let tau = 0.5;
    let f = TestFunction::RealPart;
    let mut gaps = Vec::new();
    let mut vals = Vec::new();
    for &n in &[32usize, 64, 128] {
        let v = smooth_variance_exact(&EnsembleParams::new(n, tau)?, &f, None)?;
        vals.push(v);
        gaps.push(((v - 0.75).abs() - GAP_FLOOR).max(0.0));
    }
    let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
    let close = (vals[2] - 0.75).abs() / 0.75 <= RE_Z_LIMIT_TOL;
    let lim = limit_variance_fixed_tau(&f, tau)?;
    let comp = (lim.sigma2 - (1.0 - tau * tau) / 4.0).abs().max((lim.sigma2_tilde - (1.0 + tau).powi(2) / 4.0).abs());
    let batch = SampleBatch::generate(64, tau, 9, 2000)?;
    let st = mc_statistics(&batch, &f, None)?;
    let z = (st.variance - 0.75) / st.mc_errors.variance;
    Ok((
        monotone && close && comp <= COMPONENT_TOL && z.abs() <= MC_SIGMAS,
        format!(
            "exact {vals:.12?}, components err {comp:.1e}, MC var {:.4} +- {:.4} (z = {z:+.2})",
            st.variance, st.mc_errors.variance
        ),
    ))
}

fn expected_regime(alpha: f64, gamma: f64) -> RegimeLabel {
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    if eq(alpha, gamma) {
        RegimeLabel::Transition
    } else if alpha > gamma {
        RegimeLabel::Gue
    } else if eq(gamma, (1.0 + alpha) / 2.0) {
        RegimeLabel::Microscopic
    } else if gamma < (1.0 + alpha) / 2.0 {
        RegimeLabel::Ginibre
    } else {
        RegimeLabel::Degenerate
    }
}

fn crit10() -> Outcome {
    let t0 = Instant::now();
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    let f = TestFunction::bump(1.0);
    let cells = phase_diagram(1024, 1.0, &grid, &grid, &f)?;
    let mut labels_ok = true;
    let mut bad = Vec::new();
    for c in &cells {
        labels_ok &= c.regime == expected_regime(c.alpha, c.gamma);
        let checked = matches!(c.regime, RegimeLabel::Gue | RegimeLabel::Ginibre | RegimeLabel::Transition);
        if checked && c.relative_gap > PHASE_CELL_TOL {
            bad.push(format!("({},{}) {} {:.3}/{:.3}", c.alpha, c.gamma, c.regime, c.exact, c.predicted));
        }
    }
    let gue = limit_variance_weak(&f, 0.9, 0.1, 1.0)?.value;
    let gin = limit_variance_weak(&f, 0.1, 0.5, 1.0)?.value;
    let small = limit_variance_weak(&f, 0.5, 0.5, 0.02)?.value;
    let large = limit_variance_weak(&f, 0.5, 0.5, 50.0)?.value;
    let (ds, dl) = ((small - gue).abs() / gue, (large - gin).abs() / gin);
    let ok = labels_ok && bad.is_empty() && ds <= KAPPA_TOL && dl <= KAPPA_TOL;
    Ok((
        ok,
        format!(
            "labels {}, {} cells outside 10% [{}], kappa=0.02 vs (iii) {:.2}%, kappa=50 vs (i) {:.2}%, {:.0} s",
            if labels_ok { "match" } else { "MISMATCH" },
            bad.len(),
            bad.join(", "),
            100.0 * ds,
            100.0 * dl,
            t0.elapsed().as_secs_f64()
        ),
    ))
}

fn crit11() -> Outcome {
    let (n, alpha, gamma, kappa) = (256usize, 0.5, 0.5, 1.0);
    let f = TestFunction::bump(1.0);
    let p = EnsembleParams::weak(n, kappa, alpha, Some(gamma))?;
    let pred = limit_variance_weak(&f, alpha, gamma, kappa)?.value;
    let exact = smooth_variance_exact(&p, &f, Some(gamma))?;
    let t0 = Instant::now();
    let batch = SampleBatch::generate(n, p.tau, 11, CLT_SAMPLES)?;
    let st = mc_statistics_scaled(&batch, &f, None, (n as f64).powf(gamma))?;
    let e = st.mc_errors;
    let (zs, zk) = (st.skewness / e.skewness, st.excess_kurtosis / e.excess_kurtosis);
    let zv = (st.variance - pred) / e.variance;
    Ok((
        zs.abs() < CLT_SIGMAS && zk.abs() < CLT_SIGMAS && zv.abs() <= CLT_SIGMAS,
        format!(
            "skew {:.4} ({zs:+.2} sigma), kurt {:.4} ({zk:+.2} sigma), var {:.4} +- {:.4} vs {pred:.4} ({zv:+.1} sigma; exact finite-n {exact:.4}), {:.0} s",
            st.skewness,
            st.excess_kurtosis,
            st.variance,
            e.variance,
            t0.elapsed().as_secs_f64()
        ),
    ))
}

fn crit12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut checked, mut violations) = (0usize, 0usize);
    while checked < BOUND_SAMPLES {
        let n = [8usize, 16, 32, 64][rng.random_range(0..4)];
        let tau = rng.random_range(0.1..0.9);
        let z = C64::new(rng.random_range(-2.5..2.5), rng.random_range(-1.5..1.5));
        let w = C64::new(rng.random_range(-2.5..2.5), rng.random_range(-1.5..1.5));
        let b = kernel_upper_bound(n, tau, z, w)?;
        if !b.deviation.is_finite() {
            continue;
        }
        if !b.holds_for(kernel_elliptic(n, tau, z, w)?.norm()) {
            violations += 1;
        }
        checked += 1;
    }
    Ok((violations == 0, format!("{violations} violations in {checked} samples")))
}

fn main() {
    let wanted: Option<Vec<usize>> =
        std::env::var("EGL_ACCEPT").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    // 5 aggregates the spectra of 3, 4, 6, 7 and 8, so it runs after them
    let order: [(usize, fn() -> Outcome); 12] = [
        (1, crit1),
        (2, crit2),
        (3, crit3),
        (4, crit4),
        (6, crit6),
        (7, crit7),
        (8, crit8),
        (5, crit5),
        (9, crit9),
        (10, crit10),
        (11, crit11),
        (12, crit12),
    ];
    let mut lines = Vec::new();
    for (k, f) in order {
        if wanted.as_ref().is_some_and(|w| !w.contains(&k)) {
            continue;
        }
        let t0 = Instant::now();
        let (ok, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        let line = format!("{} criterion {k:>2}: {detail} [{:.1} s]", if ok { "PASS" } else { "FAIL" }, t0.elapsed().as_secs_f64());
        println!("{line}");
        lines.push((k, ok, line));
    }
    lines.sort_by_key(|l| l.0);
    println!("\nsummary:");
    for (_, _, l) in &lines {
        println!("{l}");
    }
    let failed = lines.iter().filter(|l| !l.1).count();
    println!("{} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
