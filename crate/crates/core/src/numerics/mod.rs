//! Numerical building blocks shared by every other module.

pub mod fourier;
pub mod hermitian;
pub mod logcomplex;
pub mod matrix;
pub mod nonsym;
pub mod quadrature;
pub mod special;

pub use fourier::{fourier_coefficients, sobolev_half_norm, FourierCoefficients};
pub use hermitian::{hermitian_eigenvalues, hermitian_eigenvalues_with, JacobiOptions};
pub use logcomplex::LogComplex;
pub use matrix::{ComplexMatrix, HermitianMatrix};
pub use nonsym::{nonsymmetric_eigenvalues, nonsymmetric_eigenvalues_with, QrOptions};
pub use quadrature::{integrate_adaptive, QuadratureKind, QuadratureRule1D};
pub use special::{
    erf_real, erfc_complex, erfc_real, faddeeva_w, incomplete_gamma_pair, ln_factorial, ln_gamma,
    regularized_lower_gamma, regularized_upper_gamma,
};
