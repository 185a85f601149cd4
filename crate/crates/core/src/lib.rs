//! Exact finite-n fluctuation statistics of the Ginibre and elliptic Ginibre
//! ensembles, together with their asymptotic predictions.
//!
//! The crate is organised bottom-up:
//!
//! * [`numerics`] — special functions, quadrature, Fourier coefficients and
//!   dense eigensolvers.
//! * [`ensemble`] — parameters, potential, droplet geometry, elliptic
//!   coordinates, conformal and obstacle maps.
//! * [`kernel`] — the correlation kernel by three independent methods.
//! * [`asymptotics`] — saddle points, phase function, limit kernels, bounds.
//! * [`counting`] — overlap spectra, number variance, entropies, edge profile.
//! * [`smoothstats`] — smooth linear statistics and their limits.
//! * [`sampler`] — Monte Carlo matrices, spectra and moment estimates.
//! * [`cli`] — the command-line front end used by the `egl` binary.

pub mod asymptotics;
pub mod cli;
pub mod counting;
pub mod ensemble;
pub mod error;
pub mod kernel;
pub mod numerics;
pub mod sampler;
pub mod smoothstats;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
