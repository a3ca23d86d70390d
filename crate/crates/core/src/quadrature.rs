//! One-dimensional quadrature: Gauss-Gegenbauer rules for the polar
//! coordinates and the trapezoidal rule for the azimuth.
//!
//! Rules are normalized so weights sum to one; the integral of `t^p` against
//! the weight `nu_alpha(t) = (1 - t^2)^{alpha - 1/2}` is then
//! `abar * sum_k w_k t_k^p` with `abar` the total mass of `nu_alpha`.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::specfun::{self, log_gamma};

/// An `r`-point Gauss-Gegenbauer rule on `(-1, 1)`.
///
/// Nodes are strictly increasing zeros of `C_r^alpha` with exact symmetry
/// `t_k == -t_{r-1-k}`; weights are positive, symmetric, and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule1D<T> {
    alpha: T,
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> Rule1D<T> {
    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total mass of the weight function, `abar = integral of nu_alpha`.
    pub fn total_mass(&self) -> T {
        nu_mass(self.alpha)
    }
}

/// Uniform azimuth rule: `2M` angles `phi_q = q pi / M` with weight `pi / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct AzimuthRule<T> {
    m: usize,
    angles: Vec<T>,
    weight: T,
}

impl<T: Real> AzimuthRule<T> {
    pub fn half_count(&self) -> usize {
        self.m
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn weight(&self) -> T {
        self.weight
    }
}

/// Builds the `r`-point Gauss-Gegenbauer rule for parameter `alpha > 0`.
///
/// The rule is exact to degree `2r - 1`: nodes are the zeros of `C_r^alpha`
/// and the weights come from the squared first components of the Jacobi
/// matrix eigenvectors.
pub fn gauss_gegenbauer<T: Real>(r: usize, alpha: T) -> Result<Rule1D<T>> {
    if r == 0 {
        return Err(Error::EmptyRule);
    }
    if !(alpha > T::zero()) || !alpha.is_finite() {
        return Err(Error::NonPositiveParameter(alpha.to_f64().unwrap_or(f64::NAN)));
    }
    let (nodes, weights) = specfun::gauss_nodes_weights(r, alpha)?;
    Ok(Rule1D { alpha, nodes, weights })
}

/// Builds the `2M`-point trapezoidal rule on `[0, 2 pi)`.
pub fn trapezoid_phi<T: Real>(m: usize) -> Result<AzimuthRule<T>> {
    if m == 0 {
        return Err(Error::EmptyAzimuth);
    }
    let step = T::PI() / T::of_usize(m);
    let angles = (0..2 * m).map(|q| T::of_usize(q) * step).collect();
    Ok(AzimuthRule { m, angles, weight: step })
}

/// Closed-form moment `integral of nu_alpha(t) t^p dt` via the Beta function.
///
/// Odd moments vanish; even moments are
/// `B((p+1)/2, alpha + 1/2) = Gamma((p+1)/2) Gamma(alpha + 1/2) / Gamma(alpha + 1 + p/2)`.
pub fn nu_moment<T: Real>(alpha: T, p: usize) -> T {
    if p % 2 == 1 {
        return T::zero();
    }
    let half = T::of(0.5);
    let a = T::of_usize(p + 1) * half;
    let b = alpha + half;
    let ln = log_gamma(a).expect("positive argument")
        + log_gamma(b).expect("alpha > -1/2")
        - log_gamma(a + b).expect("positive argument");
    ln.exp()
}

/// Total mass `abar` of `nu_alpha`.
pub fn nu_mass<T: Real>(alpha: T) -> T {
    nu_moment(alpha, 0)
}

/// Maximum relative moment error of `rule` over powers `p = 0..=p_max`.
///
/// Vanishing exact moments (odd `p`) are compared absolutely against the
/// total mass scale.
pub fn rule_exactness_error<T: Real>(rule: &Rule1D<T>, p_max: usize) -> T {
    let abar = rule.total_mass();
    let mut worst = T::zero();
    for p in 0..=p_max {
        let mut approx = T::zero();
        for (t, w) in rule.nodes().iter().zip(rule.weights()) {
            approx += *w * t.powi(p as i32);
        }
        approx *= abar;
        let exact = nu_moment(rule.alpha(), p);
        let scale = if exact == T::zero() { abar } else { exact.abs() };
        let err = (approx - exact).abs() / scale;
        if err > worst {
            worst = err;
        }
    }
    worst
}
