//! Hyperspherical harmonic analysis on the d-sphere under Gauss-Gegenbauer
//! sampling.
//!
//! The crate builds separable sampling designs on `S^d` (Gauss-Gegenbauer
//! rules for the polar angles, a trapezoidal rule for the azimuth), evaluates
//! hyperspherical harmonics, and analyzes the aliasing that discrete sampling
//! induces on harmonic coefficients: which coefficients alias which, with what
//! intensity, how aliasing folds the angular power spectrum, and when
//! band-limited fields are recovered exactly.
//!
//! Modules follow the pipeline:
//!
//! - [`specfun`]: Gegenbauer polynomials, their zeros, log-gamma, harmonic
//!   normalization constants.
//! - [`quadrature`]: one-dimensional Gauss-Gegenbauer and trapezoidal rules.
//! - [`design`]: the separable sampling scheme on `S^d`.
//! - [`harmonics`]: index enumeration and pointwise harmonic evaluation.
//! - [`aliasing`]: the aliasing function, its factorization, and alias
//!   enumeration with intensities.
//! - [`spectrum`]: power-spectrum folding, isotropic field synthesis, and
//!   band-limited reconstruction.
//!
//! All numeric kernels are generic over the scalar type via [`real::Real`];
//! the `*64` aliases below pin the `f64` instantiation used by the CLI.

pub mod aliasing;
pub mod design;
pub mod error;
pub mod harmonics;
pub mod quadrature;
pub mod real;
pub mod specfun;
pub mod spectrum;
pub mod tolerance;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` design on `S^d`.
pub type Design64 = design::SphericalDesign<f64>;
/// `f64` point on `S^d`.
pub type Point64 = design::SpherePoint<f64>;
/// `f64` Gauss-Gegenbauer rule.
pub type Rule64 = quadrature::Rule1D<f64>;
/// `f64` alias record.
pub type AliasRecord64 = aliasing::AliasRecord<f64>;
/// `f64` angular power spectrum.
pub type Spectrum64 = spectrum::PowerSpectrum<f64>;
/// `f64` folding matrix.
pub type FoldingMatrix64 = spectrum::FoldingMatrix<f64>;
/// `f64` harmonic coefficient set.
pub type Coeffs64 = spectrum::HarmonicCoeffs<f64>;
