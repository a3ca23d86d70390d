//! Numeric thresholds used across the crate and its test suites.
//!
//! Two tiers separate "numerically null" from "distinct from quadrature
//! noise": intensities at or below [`NULL_INTENSITY`] are treated as exact
//! zeros and dropped from alias reports, while oracle set-membership checks
//! use the looser [`ORACLE_MEMBERSHIP`] so that true zeros and accumulated
//! rounding at moderate degree cannot be confused.

/// Intensities with absolute value at or below this are dropped as exact zeros.
pub const NULL_INTENSITY: f64 = 1e-12;

/// Threshold deciding whether a brute-force aliasing-function value counts as
/// a genuine alias.
pub const ORACLE_MEMBERSHIP: f64 = 1e-8;

/// Relative error allowed for quadrature moment exactness checks.
pub const MOMENT_EXACTNESS: f64 = 1e-12;

/// Absolute agreement required between the direct and factorized aliasing
/// function.
pub const FACTORIZATION_ABS: f64 = 1e-10;

/// Maximum deviation of the design-weighted Gram matrix from the identity.
pub const GRAM_DEVIATION: f64 = 1e-10;

/// Relative error allowed when the flattened design integrates the constant
/// function to the surface area.
pub const SURFACE_AREA_REL: f64 = 1e-10;

/// Coefficient recovery tolerance for band-limited fields.
pub const BAND_COEFF_ABS: f64 = 1e-10;

/// Pointwise reconstruction tolerance for band-limited fields.
pub const RECONSTRUCTION_ABS: f64 = 1e-9;

/// Relative accuracy contract of the log-gamma evaluation.
pub const LOG_GAMMA_REL: f64 = 1e-13;
