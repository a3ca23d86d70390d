//! Error type shared by all modules.

use thiserror::Error;

/// Errors surfaced by construction and evaluation routines.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("Gegenbauer parameter must be positive, got {0}")]
    NonPositiveParameter(f64),

    #[error("argument {0} outside [-1, 1]")]
    ArgumentOutOfRange(f64),

    #[error("polynomial degree must be at least 1 for root finding")]
    DegreeZero,

    #[error("log-gamma requires a positive argument, got {0}")]
    NonPositiveGamma(f64),

    #[error("order chain requires m_prev >= m >= 0, got m_prev = {m_prev}, m = {m}")]
    InvalidOrderPair { m_prev: i64, m: i64 },

    #[error("coordinate index j = {j} outside 1..={max} for dimension d = {d}")]
    CoordinateIndex { j: usize, d: usize, max: usize },

    #[error("quadrature rule needs at least one node")]
    EmptyRule,

    #[error("azimuth rule needs M >= 1")]
    EmptyAzimuth,

    #[error("eigenvalue iteration failed to converge")]
    NonConvergence,

    #[error("sphere dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("expected {expected} polar node counts for dimension {d}, got {got}")]
    NodeCountMismatch { d: usize, expected: usize, got: usize },

    #[error("polar node counts must all be at least 1")]
    EmptyPolarRule,

    #[error("angle {0} outside its admissible range")]
    AngleOutOfRange(f64),

    #[error("harmonic order chain {orders:?} is not admissible for degree {ell}")]
    InvalidHarmonicIndex { ell: i64, orders: Vec<i64> },

    #[error("harmonic index has {got} orders but the design has dimension {d}")]
    IndexDimensionMismatch { d: usize, got: usize },

    #[error("multiplicity overflows the integer range at ell = {ell}, d = {d}")]
    MultiplicityOverflow { ell: usize, d: usize },

    #[error("offset s0 = {s0} below the lower bound -ell/2 for ell = {ell}")]
    OffsetBelowBound { s0: i64, ell: i64 },

    #[error("offsets (s0 = {s0}, s = {s:?}, r = {r}) do not produce a valid target index")]
    InvalidOffsets { s0: i64, s: Vec<i64>, r: i64 },

    #[error("power spectrum values must be non-negative, got {0}")]
    NegativeSpectrum(f64),

    #[error("spectrum does not cover degree {needed} required by the folding truncation")]
    InsufficientSpectrum { needed: usize },

    #[error("band limit {band} exceeds the degrees covered by the spectrum")]
    BandExceedsSpectrum { band: usize },

    #[error("sample vector has {got} entries but the design has {expected} nodes")]
    SampleLengthMismatch { expected: usize, got: usize },

    #[error("coefficient set is missing entries at degree {ell}: expected {expected}, got {got}")]
    IncompleteDegree { ell: usize, expected: usize, got: usize },

    #[error("serialized design is malformed: {0}")]
    MalformedDesign(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
