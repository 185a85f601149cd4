use super::parse::{parse_complex, parse_grid, parse_list, parse_region};
use super::{selftest, Command};
use crate::counting::{
    bulk_variance_prediction, edge_profile_f, holography_bounds, number_variance, outside_variance_formula,
    outside_variance_leading, overlap_spectrum, radial_overlap_eigs_complement, renyi_entropy, von_neumann_entropy,
    Region,
};
use crate::ensemble::EnsembleParams;
use crate::error::{Error, Result};
use crate::kernel::{KernelEvaluator, KernelMethod};
use crate::sampler::{moment_statistics, SampleBatch, MIN_SAMPLES};
use crate::smoothstats::{
    limit_variance_fixed_tau, limit_variance_weak, phase_cell, smooth_variance_exact_with, SmoothOptions,
    TestFunction, VarianceReport,
};
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

type Outcome = (Value, Vec<PathBuf>);

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<PathBuf> {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string_pretty(v)? + "\n")?;
    Ok(p)
}

fn csv_writer(dir: &Path, name: &str, header: &[&str]) -> Result<(csv::Writer<std::fs::File>, PathBuf)> {
    let p = dir.join(name);
    let mut w = csv::Writer::from_path(&p)?;
    w.write_record(header)?;
    Ok((w, p))
}

fn g(x: f64) -> String {
    format!("{x:.17e}")
}

fn region_json(r: &Region) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

/// Dispatches one subcommand; returns the resolved quantities and the files
/// written.
pub fn execute(cmd: &Command, dir: &Path) -> Result<Outcome> {
    match cmd {
        Command::KernelEval(a) => {
            let params = EnsembleParams::new(a.n, a.tau)?;
            let method: KernelMethod = serde_json::from_value(Value::String(a.method.clone()))
                .map_err(|_| Error::Validation(format!("unknown kernel method {:?}", a.method)))?;
            let (z, w) = (parse_complex(&a.z)?, parse_complex(&a.w)?);
            let k = KernelEvaluator::new(params, method)?.eval(z, w)?;
            let out = json!({
                "n": a.n, "tau": a.tau, "method": method,
                "z": [z.re, z.im], "w": [w.re, w.im],
                "re": k.re, "im": k.im, "abs": k.norm(),
            });
            let p = write_json(dir, "kernel-eval.json", &out)?;
            Ok((json!({ "method": method, "z": [z.re, z.im], "w": [w.re, w.im] }), vec![p]))
        }
        Command::Density(a) => {
            let params = EnsembleParams::new(a.n, a.tau)?;
            let (xs, ys) = (parse_grid(&a.x_grid)?, parse_grid(&a.y_grid)?);
            let ev = KernelEvaluator::new(params, KernelMethod::HermiteSeries)?;
            let geo = params.geometry();
            let pts: Vec<C64> = xs.iter().flat_map(|&x| ys.iter().map(move |&y| C64::new(x, y))).collect();
            let dens = pts.par_iter().map(|&z| ev.density(z)).collect::<Result<Vec<_>>>()?;
            let (mut w, p) = csv_writer(dir, "density.csv", &["x", "y", "density", "limit"])?;
            for (z, d) in pts.iter().zip(&dens) {
                let lim = if geo.contains(*z) { geo.density() } else { 0.0 };
                w.write_record([g(z.re), g(z.im), g(*d), g(lim)])?;
            }
            w.flush()?;
            Ok((json!({ "x": xs, "y": ys }), vec![p]))
        }
        Command::VarSmooth(a) => {
            let f = TestFunction::from_cli_spec(&a.f)?;
            let t0 = Instant::now();
            let opts = SmoothOptions { tol: a.tol, ..SmoothOptions::default() };
            let (params, report, extra) = match a.alpha {
                Some(alpha) => {
                    let gamma = a.gamma.unwrap_or(alpha);
                    let params = EnsembleParams::weak(a.n, a.kappa, alpha, Some(gamma))?;
                    let pred = limit_variance_weak(&f, alpha, gamma, a.kappa)?;
                    let sv = smooth_variance_exact_with(&params, &f, Some(gamma), opts)?;
                    let r = VarianceReport::new(sv.value, pred.value, pred.regime.as_str(), t0);
                    (params, r, json!({ "prediction": pred, "error_estimate": sv.error_estimate, "gamma": gamma }))
                }
                None => {
                    let params = EnsembleParams::new(a.n, a.tau)?;
                    let sv = smooth_variance_exact_with(&params, &f, a.gamma, opts)?;
                    let lim = limit_variance_fixed_tau(&f, a.tau)?;
                    let r = VarianceReport::new(sv.value, lim.total, "fixed-tau", t0);
                    (params, r, json!({ "prediction": lim, "error_estimate": sv.error_estimate }))
                }
            };
            let mut out = serde_json::to_value(&report)?;
            out["tau"] = json!(params.tau);
            out["details"] = extra;
            let p = write_json(dir, "var-smooth.json", &out)?;
            Ok((json!({ "tau": params.tau, "f": f }), vec![p]))
        }
        Command::VarCount(a) => {
            let params = EnsembleParams::new(a.n, a.tau)?;
            let region = parse_region(&a.region, a.n, a.tau)?;
            let t0 = Instant::now();
            let s = overlap_spectrum(&params, &region)?;
            let pred = bulk_variance_prediction(a.n, a.tau, &region);
            let report = VarianceReport::new(number_variance(&s), pred, "bulk", t0);
            let mut out = serde_json::to_value(&report)?;
            out["expected_count"] = json!(s.expected_count());
            out["boundary_length"] = json!(region.boundary_length());
            let p = write_json(dir, "var-count.json", &out)?;
            Ok((json!({ "region": region_json(&region) }), vec![p]))
        }
        Command::Entropy(a) => {
            let r = &a.region;
            let params = EnsembleParams::new(r.n, r.tau)?;
            let region = parse_region(&r.region, r.n, r.tau)?;
            let qs = parse_list(&a.q)?;
            let s = overlap_spectrum(&params, &region)?;
            let renyi = qs
                .iter()
                .map(|&q| {
                    let h = holography_bounds(&s, q)?;
                    Ok(json!({
                        "q": q, "entropy": renyi_entropy(&s, q)?, "ratio": h.ratio,
                        "upper": h.upper, "holds": h.holds(),
                    }))
                })
                .collect::<Result<Vec<_>>>()?;
            let out = json!({
                "variance": number_variance(&s),
                "von_neumann": von_neumann_entropy(&s),
                "expected_count": s.expected_count(),
                "boundary_length": region.boundary_length(),
                "renyi": renyi,
            });
            let p = write_json(dir, "entropy.json", &out)?;
            Ok((json!({ "region": region_json(&region), "q": qs }), vec![p]))
        }
        Command::EdgeProfile(a) => {
            let params = EnsembleParams::new(a.n, a.tau)?;
            let ss = parse_grid(&a.s_grid)?;
            let rows = ss
                .par_iter()
                .map(|&s| {
                    let region = Region::Band { tau: a.tau, n: a.n, s };
                    let v = number_variance(&overlap_spectrum(&params, &region)?);
                    let len = region.boundary_length();
                    Ok((s, v, len, ((1.0 - a.tau * a.tau) / a.n as f64).sqrt() * v / len, edge_profile_f(s)?))
                })
                .collect::<Result<Vec<_>>>()?;
            let header = ["s", "variance", "boundary_length", "scaled", "f", "f_over_pi_sqrt_pi"];
            let (mut w, p) = csv_writer(dir, "edge-profile.csv", &header)?;
            for (s, v, len, sc, f) in rows {
                w.write_record([g(s), g(v), g(len), g(sc), g(f), g(f / (PI * PI.sqrt()))])?;
            }
            w.flush()?;
            Ok((json!({ "s": ss }), vec![p]))
        }
        Command::PhaseDiagram(a) => {
            let f = TestFunction::from_cli_spec(&a.f)?;
            let (alphas, gammas) = (parse_grid(&a.alpha_grid)?, parse_grid(&a.gamma_grid)?);
            let cells: Vec<(f64, f64)> = alphas.iter().flat_map(|&x| gammas.iter().map(move |&y| (x, y))).collect();
            let results: Vec<_> = cells.par_iter().map(|&(al, ga)| phase_cell(a.n, a.kappa, al, ga, &f)).collect();
            let header = ["alpha", "gamma", "regime", "exact", "predicted", "relative_gap", "runtime_ms", "status"];
            let (mut w, p) = csv_writer(dir, "phase-diagram.csv", &header)?;
            let mut failed = 0usize;
            for (&(al, ga), r) in cells.iter().zip(&results) {
                match r {
                    Ok(c) => w.write_record([
                        g(al),
                        g(ga),
                        c.regime.to_string(),
                        g(c.exact),
                        g(c.predicted),
                        g(c.relative_gap),
                        format!("{:.1}", c.runtime_ms),
                        "ok".into(),
                    ])?,
                    Err(e) => {
                        failed += 1;
                        let regime = crate::smoothstats::regime_classify(al, ga).map(|x| x.to_string()).unwrap_or_default();
                        let nan = g(f64::NAN);
                        w.write_record([g(al), g(ga), regime, nan.clone(), nan.clone(), nan, String::new(), e.to_string()])?
                    }
                }
            }
            w.flush()?;
            Ok((json!({ "alpha": alphas, "gamma": gammas, "f": f, "failed_cells": failed }), vec![p]))
        }
        Command::OutsideDecay(a) => {
            let ns = parse_list(&a.n_list)?;
            let (mut w, p) = csv_writer(dir, "outside-decay.csv", &["n", "exact", "log_exact", "formula", "leading"])?;
            let mut resolved = Vec::new();
            for nf in ns {
                if nf < 1.0 || nf.fract() != 0.0 {
                    return Err(Error::Validation(format!("n = {nf} is not a positive integer")));
                }
                let n = nf as usize;
                let v = number_variance(&radial_overlap_eigs_complement(n, a.a));
                let (fm, ld) = (outside_variance_formula(n, a.a)?, outside_variance_leading(n, a.a)?);
                w.write_record([n.to_string(), g(v), g(v.ln()), g(fm), g(ld)])?;
                resolved.push(n);
            }
            w.flush()?;
            Ok((json!({ "n": resolved }), vec![p]))
        }
        Command::Sample(a) => {
            let batch = SampleBatch::generate(a.n, a.tau, a.seed, a.count)?;
            let p = dir.join("sample.csv");
            batch.write_csv(std::io::BufWriter::new(std::fs::File::create(&p)?))?;
            Ok((json!({ "rng": "chacha20", "stream": "sample_index" }), vec![p]))
        }
        Command::CltCheck(a) => {
            if a.count < MIN_SAMPLES {
                return Err(Error::InsufficientSamples { needed: MIN_SAMPLES, got: a.count });
            }
            let f = TestFunction::from_cli_spec(&a.f)?;
            let gamma = a.gamma.unwrap_or(a.alpha);
            let params = EnsembleParams::weak(a.n, a.kappa, a.alpha, Some(gamma))?;
            let pred = limit_variance_weak(&f, a.alpha, gamma, a.kappa)?;
            let exact = smooth_variance_exact_with(&params, &f, Some(gamma), SmoothOptions::default())?;
            let batch = SampleBatch::generate(a.n, params.tau, a.seed, a.count)?;
            let scale = (a.n as f64).powf(gamma);
            let xs = batch.linear_statistic(|z| f.eval(z * scale));
            let st = moment_statistics(&xs)?;
            let e = st.mc_errors;
            let sig = |d: f64, err: f64| if err > 0.0 { d / err } else { f64::INFINITY * d.signum() };
            let z_var_pred = sig(st.variance - pred.value, e.variance);
            let z_var_exact = sig(st.variance - exact.value, e.variance);
            let z_skew = sig(st.skewness, e.skewness);
            let z_kurt = sig(st.excess_kurtosis, e.excess_kurtosis);
            let out = json!({
                "n": a.n, "tau": params.tau, "gamma": gamma, "count": a.count,
                "statistics": st,
                "predicted_variance": pred.value,
                "regime": pred.regime,
                "exact_variance": exact.value,
                "z_variance_vs_predicted": z_var_pred,
                "z_variance_vs_exact": z_var_exact,
                "z_skewness": z_skew,
                "z_excess_kurtosis": z_kurt,
                "variance_within_3_sigma": z_var_pred.abs() <= 3.0,
                "skewness_within_3_sigma": z_skew.abs() <= 3.0,
                "kurtosis_within_3_sigma": z_kurt.abs() <= 3.0,
            });
            let p = write_json(dir, "clt-check.json", &out)?;
            let (mut w, q) = csv_writer(dir, "clt-check.csv", &["sample_index", "statistic"])?;
            for (i, x) in xs.iter().enumerate() {
                w.write_record([i.to_string(), g(*x)])?;
            }
            w.flush()?;
            Ok((json!({ "tau": params.tau, "gamma": gamma, "scale": scale, "f": f }), vec![p, q]))
        }
        Command::Selftest(_) => {
            let checks = selftest::run_checks();
            let failed = checks.iter().filter(|c| !c.ok).count();
            for c in &checks {
                println!("{} {}: {}", if c.ok { "ok  " } else { "FAIL" }, c.name, c.detail);
            }
            let p = write_json(dir, "selftest.json", &serde_json::to_value(&checks)?)?;
            Ok((json!({ "checks": checks.len(), "failed": failed }), vec![p]))
        }
    }
}
