//! The `egl` command line. Every subcommand writes its outputs plus a
//! `<subcommand>.config.json` (the resolved [`RunConfig`]) into `--out`;
//! `--config FILE` replays such a file.

mod commands;
pub mod parse;
mod selftest;

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub use commands::execute;

const SCHEMAS: &str = "\
Syntax:
  grids     start:stop:count (inclusive), or one number
  lists     comma-separated numbers, or a grid
  points    re,im
  regions   disk:r[,cx,cy] | complement-disk:a | square:a | band:S | convex-curve:file.csv
            or JSON {\"kind\":\"disk\",\"radius\":0.4,\"center\":[0,0]} (kinds as above)
  functions bump:R | re | const:c | grid:file.csv (columns x,y,f[,fx,fy])

Outputs (in --out, next to <subcommand>.config.json):
  kernel-eval    kernel-eval.json     {n,tau,method,z,w,re,im,abs}
  density        density.csv          x,y,density,limit
  var-smooth     var-smooth.json      VarianceReport
  var-count      var-count.json       VarianceReport + expected_count, boundary_length
  entropy        entropy.json         variance, von_neumann, renyi[{q,entropy,ratio,upper,holds}]
  edge-profile   edge-profile.csv     s,variance,boundary_length,scaled (√((1−τ²)/n)·Var/|∂A|),f,f_over_pi_sqrt_pi
  phase-diagram  phase-diagram.csv    alpha,gamma,regime,exact,predicted,relative_gap,runtime_ms,status
  outside-decay  outside-decay.csv    n,exact,log_exact,formula,leading
  sample         sample.csv           re,im,sample_index
  clt-check      clt-check.json       moments, jackknife errors, predictions, z-scores

Exit codes: 0 ok, 1 invalid input, 2 numerical non-convergence.
EGL_THREADS caps the worker pool.";

#[derive(Parser, Debug)]
#[command(name = "egl", version, about = "Elliptic Ginibre fluctuation statistics", after_help = SCHEMAS)]
struct Cli {
    /// Directory for outputs and the resolved config.
    #[arg(long, global = true, default_value = "egl-out")]
    out: PathBuf,
    /// Replay a resolved config written by an earlier run.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct KernelEvalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub z: String,
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// hermite-series, ginibre-series, contour-oracle or bulk-approx.
    #[arg(long, default_value = "hermite-series")]
    pub method: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, default_value = "-2:2:41", allow_hyphen_values = true)]
    pub x_grid: String,
    #[arg(long, default_value = "-2:2:41", allow_hyphen_values = true)]
    pub y_grid: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct VarSmoothArgs {
    #[arg(long)]
    pub n: usize,
    /// Fixed τ; ignored when --alpha is given.
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    /// Weak non-Hermiticity exponent: τ = 1 − κ n^{−α}.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    /// Statistic Σ f(n^γ z_j).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value = "bump:1")]
    pub f: String,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct RegionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub region: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub region: RegionArgs,
    /// Rényi indices q > 1.
    #[arg(long, default_value = "1.5,2,4")]
    pub q: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct EdgeProfileArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, default_value = "-2:2:5", allow_hyphen_values = true)]
    pub s_grid: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct PhaseDiagramArgs {
    #[arg(long, default_value = "0.1:0.9:5")]
    pub alpha_grid: String,
    #[arg(long, default_value = "0.1:0.9:5")]
    pub gamma_grid: String,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "bump:1")]
    pub f: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct OutsideDecayArgs {
    /// Radius a > 1 of the excluded disk.
    #[arg(long, default_value_t = 1.2)]
    pub a: f64,
    #[arg(long, default_value = "30,50,70")]
    pub n_list: String,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub count: usize,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct CltCheckArgs {
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Defaults to α (the transition line).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub kappa: f64,
    #[arg(long, default_value = "bump:1")]
    pub f: String,
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, Default, Serialize, Deserialize)]
pub struct SelftestArgs {}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// K_n(z, w) at one pair of points.
    KernelEval(KernelEvalArgs),
    /// K_n(z, z)/n on a rectangular grid.
    Density(DensityArgs),
    /// Exact variance of a smooth linear statistic against its limit.
    VarSmooth(VarSmoothArgs),
    /// Exact number variance of a region against the √n law.
    VarCount(RegionArgs),
    /// Rényi and von Neumann entropies with the holography ratio.
    Entropy(EntropyArgs),
    /// Number variance of the bands A_n(S) against f(S).
    EdgeProfile(EdgeProfileArgs),
    /// (α, γ) sweep at weak non-Hermiticity.
    PhaseDiagram(PhaseDiagramArgs),
    /// Number variance outside a disk of radius a > 1 (Ginibre).
    OutsideDecay(OutsideDecayArgs),
    /// Sample a batch of spectra.
    Sample(SampleArgs),
    /// Moments of a smooth linear statistic from sampled spectra.
    CltCheck(CltCheckArgs),
    /// Quick invariant suite.
    Selftest(SelftestArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::KernelEval(_) => "kernel-eval",
            Command::Density(_) => "density",
            Command::VarSmooth(_) => "var-smooth",
            Command::VarCount(_) => "var-count",
            Command::Entropy(_) => "entropy",
            Command::EdgeProfile(_) => "edge-profile",
            Command::PhaseDiagram(_) => "phase-diagram",
            Command::OutsideDecay(_) => "outside-decay",
            Command::Sample(_) => "sample",
            Command::CltCheck(_) => "clt-check",
            Command::Selftest(_) => "selftest",
        }
    }
}

/// Everything needed to replay a run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub version: String,
    pub command: Command,
    pub out_dir: PathBuf,
    pub threads: Option<usize>,
    /// Derived quantities (τ from α, parsed regions and grids, ...).
    pub resolved: serde_json::Value,
    pub outputs: Vec<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_reader(std::fs::File::open(path)?)?)
    }
}

/// EGL_THREADS, when set to a positive integer.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("EGL_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(Error::Validation(format!("EGL_THREADS must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs `command`, writes its outputs and config into `out_dir` and returns
/// the config.
pub fn run_command(command: Command, out_dir: &Path) -> Result<RunConfig> {
    let threads = thread_cap()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Error::Validation(format!("thread pool: {e}")))?;
    std::fs::create_dir_all(out_dir)?;
    let (resolved, outputs) = pool.install(|| execute(&command, out_dir))?;
    let cfg = RunConfig {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command,
        out_dir: out_dir.to_path_buf(),
        threads,
        resolved,
        outputs,
    };
    let path = out_dir.join(format!("{}.config.json", cfg.command.name()));
    std::fs::write(&path, serde_json::to_string_pretty(&cfg)? + "\n")?;
    Ok(cfg)
}

/// Entry point of the binary: parses argv, runs, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command = match (&cli.config, cli.command) {
        (Some(path), None) => match RunConfig::load(path) {
            Ok(c) => c.command,
            Err(e) => {
                eprintln!("error: {e}");
                return e.exit_code();
            }
        },
        (None, Some(c)) => c,
        (Some(_), Some(_)) => {
            eprintln!("error: give either a subcommand or --config, not both");
            return 1;
        }
        (None, None) => {
            eprintln!("error: a subcommand is required\n\n{SCHEMAS}");
            return 1;
        }
    };
    match run_command(command, &cli.out) {
        Ok(cfg) => {
            if let Command::Selftest(_) = cfg.command {
                let ok = cfg.resolved.get("failed").and_then(|v| v.as_u64()) == Some(0);
                return if ok { 0 } else { 1 };
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
