//! Hyperspherical harmonics: index enumeration, pointwise evaluation, and the
//! degree-projection kernel.
//!
//! A harmonic on `S^d` is indexed by a degree `ell` and an order chain
//! `(m_1, ..., m_{d-1})` with `ell >= m_1 >= ... >= m_{d-2} >= |m_{d-1}|`.
//! Evaluation composes one Gegenbauer factor per polar angle with a complex
//! exponential in the azimuth; for a negative last order the polar factors
//! use its absolute value and the exponential carries the sign.

use num_complex::Complex;

use crate::design::SpherePoint;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::specfun::{self, gegenbauer, gegenbauer_sequence, ln_norm_h, log_gamma, surface_area};

/// Degree and order chain of one hyperspherical harmonic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HarmonicIndex {
    ell: i64,
    orders: Vec<i64>,
}

impl HarmonicIndex {
    /// Validates the chain `ell >= m_1 >= ... >= m_{d-2} >= |m_{d-1}|`.
    pub fn new(ell: i64, orders: Vec<i64>) -> Result<Self> {
        if ell < 0 || orders.is_empty() {
            return Err(Error::InvalidHarmonicIndex { ell, orders });
        }
        let mut prev = ell;
        for (pos, &m) in orders.iter().enumerate() {
            let last = pos == orders.len() - 1;
            let magnitude = if last { m.abs() } else { m };
            if magnitude > prev || (!last && m < 0) {
                return Err(Error::InvalidHarmonicIndex { ell, orders });
            }
            prev = magnitude;
        }
        Ok(Self { ell, orders })
    }

    pub fn ell(&self) -> i64 {
        self.ell
    }

    pub fn orders(&self) -> &[i64] {
        &self.orders
    }

    /// Sphere dimension implied by the order-chain length.
    pub fn dim(&self) -> usize {
        self.orders.len() + 1
    }

    /// `m_j` with the convention `m_0 = ell`.
    pub fn order_at(&self, j: usize) -> i64 {
        if j == 0 {
            self.ell
        } else {
            self.orders[j - 1]
        }
    }

    /// Last order `m_{d-1}`, the azimuthal wave number.
    pub fn azimuthal(&self) -> i64 {
        *self.orders.last().expect("order chain is non-empty")
    }
}

impl std::fmt::Display for HarmonicIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "a_{{{}", self.ell)?;
        for m in &self.orders {
            write!(f, ",{m}")?;
        }
        write!(f, "}}")
    }
}

/// All admissible order chains at degree `ell` on `S^d`, lexicographically
/// ordered.
pub fn index_set(ell: usize, d: usize) -> Vec<HarmonicIndex> {
    assert!(d >= 2, "sphere dimension must be at least 2");
    let mut out = Vec::new();
    let mut orders = Vec::with_capacity(d - 1);
    fill(ell as i64, d, ell as i64, &mut orders, &mut out);
    return out;

    fn fill(ell: i64, d: usize, prev: i64, orders: &mut Vec<i64>, out: &mut Vec<HarmonicIndex>) {
        let position = orders.len() + 1;
        if position == d - 1 {
            for m in -prev..=prev {
                let mut chain = orders.clone();
                chain.push(m);
                out.push(HarmonicIndex { ell, orders: chain });
            }
            return;
        }
        for m in 0..=prev {
            orders.push(m);
            fill(ell, d, m, orders, out);
            orders.pop();
        }
    }
}

/// Number of harmonics at degree `ell` on `S^d`:
/// `(2 ell + d - 1) (ell + d - 2)! / (ell! (d-1)!)`, exactly.
pub fn multiplicity(ell: usize, d: usize) -> Result<u128> {
    assert!(d >= 2, "sphere dimension must be at least 2");
    let overflow = || Error::MultiplicityOverflow { ell, d };
    // binomial(ell + d - 2, d - 2), exact at every step
    let mut binom: u128 = 1;
    for i in 1..=(d - 2) as u128 {
        let numer = (ell as u128 + i).checked_mul(binom).ok_or_else(overflow)?;
        binom = numer / i;
    }
    let linear = 2 * ell as u128 + d as u128 - 1;
    let product = binom.checked_mul(linear).ok_or_else(overflow)?;
    debug_assert_eq!(product % (d as u128 - 1), 0);
    Ok(product / (d as u128 - 1))
}

/// Per-index evaluator caching the normalization constants, so repeated
/// evaluation over a grid only pays for the Gegenbauer recurrences.
pub(crate) struct HarmonicEvaluator<T> {
    /// (degree, parameter, |m_j|) per polar coordinate.
    factors: Vec<(usize, T, i64)>,
    ln_norm: T,
    azimuthal: i64,
}

impl<T: Real> HarmonicEvaluator<T> {
    pub fn new(index: &HarmonicIndex) -> Result<Self> {
        let d = index.dim();
        let half = T::of(0.5);
        let mut factors = Vec::with_capacity(d - 1);
        let mut ln_norm = -half * (T::of(2.0) * T::PI()).ln();
        for j in 1..d {
            let m_prev = if j == 1 { index.ell() } else { index.order_at(j - 1) };
            let m = index.order_at(j).abs();
            ln_norm += ln_norm_h::<T>(m_prev, m, j, d)?;
            let alpha = T::of_i64(m) + T::of_usize(d - j) * half;
            factors.push(((m_prev - m) as usize, alpha, m));
        }
        Ok(Self { factors, ln_norm, azimuthal: index.azimuthal() })
    }

    /// Evaluates from precomputed cosines/sines of the polar angles.
    ///
    /// Polar magnitudes are composed in log space to avoid underflow of
    /// `sin^m` at high orders; signs are tracked separately.
    pub fn eval(&self, cos_theta: &[T], sin_theta: &[T], phi: T) -> Complex<T> {
        let mut ln_mag = self.ln_norm;
        let mut negative = false;
        for ((degree, alpha, m), (&c, &s)) in
            self.factors.iter().zip(cos_theta.iter().zip(sin_theta))
        {
            let value = gegenbauer(*degree, *alpha, c);
            if value == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            if *m > 0 {
                if s <= T::zero() {
                    return Complex::new(T::zero(), T::zero());
                }
                ln_mag += T::of_i64(*m) * s.ln();
            }
            ln_mag += value.abs().ln();
            negative ^= value < T::zero();
        }
        let mut magnitude = ln_mag.exp();
        if negative {
            magnitude = -magnitude;
        }
        let phase = T::of_i64(self.azimuthal) * phi;
        Complex::new(magnitude * phase.cos(), magnitude * phase.sin())
    }
}

/// Evaluates `Y_{ell, m}` at a point on `S^d`.
pub fn eval_y<T: Real>(index: &HarmonicIndex, point: &SpherePoint<T>) -> Result<Complex<T>> {
    if point.dim() != index.dim() {
        return Err(Error::IndexDimensionMismatch { d: point.dim(), got: index.dim() });
    }
    let evaluator = HarmonicEvaluator::new(index)?;
    let cos_theta: Vec<T> = point.theta().iter().map(|t| t.cos()).collect();
    let sin_theta: Vec<T> = point.theta().iter().map(|t| t.sin()).collect();
    Ok(evaluator.eval(&cos_theta, &sin_theta, point.phi()))
}

/// Embeds a point of `S^d` as a unit vector in `R^{d+1}`.
pub fn embed<T: Real>(point: &SpherePoint<T>) -> Vec<T> {
    let d = point.dim();
    let mut out = vec![T::zero(); d + 1];
    let mut sin_product = T::one();
    // components ordered so that the all-equatorial point with phi = 0 maps
    // to (1, 0, ..., 0)
    for (j, &theta) in point.theta().iter().enumerate() {
        out[d - j] = sin_product * theta.cos();
        sin_product *= theta.sin();
    }
    out[0] = sin_product * point.phi().cos();
    out[1] = sin_product * point.phi().sin();
    out
}

/// Euclidean inner product of the embedded points, clamped to `[-1, 1]`.
pub fn inner_product<T: Real>(x: &SpherePoint<T>, y: &SpherePoint<T>) -> T {
    let a = embed(x);
    let b = embed(y);
    let mut dot = T::zero();
    for (u, v) in a.iter().zip(&b) {
        dot += *u * *v;
    }
    dot.min(T::one()).max(-T::one())
}

/// Coefficient of the normalized Gegenbauer in the projection kernel:
/// `K_ell(x, y) = (Xi_d(ell) / |S^d|) * C_ell(t) / C_ell(1)`, so the
/// prefactor multiplying the raw `C_ell^{(d-1)/2}` is
/// `(2 ell + d - 1) Gamma((d+1)/2) / (2 pi^{(d+1)/2} (d - 1))`.
pub(crate) fn kernel_prefactor<T: Real>(ell: usize, d: usize) -> T {
    let half = T::of(0.5);
    let ln = (T::of_usize(2 * ell + d - 1)).ln()
        + log_gamma(T::of_usize(d + 1) * half).expect("positive argument")
        - T::of(2.0).ln()
        - T::of_usize(d + 1) * half * T::PI().ln()
        - T::of_usize(d - 1).ln();
    ln.exp()
}

/// Projection kernel `K_ell(x, y)` of the degree-`ell` harmonic space,
/// equal by the addition formula to the sum of `Y conj(Y)` over the degree.
pub fn kernel_k<T: Real>(ell: usize, x: &SpherePoint<T>, y: &SpherePoint<T>, d: usize) -> T {
    debug_assert_eq!(x.dim(), d);
    debug_assert_eq!(y.dim(), d);
    let alpha = T::of_usize(d - 1) * T::of(0.5);
    kernel_prefactor::<T>(ell, d) * gegenbauer(ell, alpha, inner_product(x, y))
}

/// Sum of projection kernels over degrees `0..=ell_max`, used by band-limited
/// reconstruction; all Gegenbauer degrees come from one recurrence pass.
pub fn kernel_sum<T: Real>(
    ell_max: usize,
    x: &SpherePoint<T>,
    y: &SpherePoint<T>,
    d: usize,
) -> T {
    let alpha = T::of_usize(d - 1) * T::of(0.5);
    let values = gegenbauer_sequence(ell_max, alpha, inner_product(x, y));
    let mut out = T::zero();
    for (ell, value) in values.into_iter().enumerate() {
        out += kernel_prefactor::<T>(ell, d) * value;
    }
    out
}

/// Surface area of the sphere, re-exported next to the kernel it normalizes.
pub fn sphere_surface<T: Real>(d: usize) -> T {
    surface_area(d)
}

/// Continuous-normalization helper: `Y_{0,...,0}` is the constant
/// `1 / sqrt(|S^d|)`.
pub fn constant_harmonic_value<T: Real>(d: usize) -> T {
    specfun::surface_area::<T>(d).sqrt().recip()
}
