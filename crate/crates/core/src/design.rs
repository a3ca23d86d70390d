//! The separable sampling scheme on `S^d`: Gauss-Gegenbauer rules for the
//! polar angles combined with a trapezoidal rule for the azimuth.
//!
//! For coordinate `j = 1..=d-1` the nodes are `theta_k = arccos(t_k)` with
//! `t_k` the zeros of `C_{Q_{j-1}}^{(d-j)/2}`, the node weights are the
//! unnormalized Gauss weights (summing to the mass of `nu_{(d-j)/2}`), and
//! the angular weights divide out `sin^{d-j}`. Mirrored angles and weights
//! are constructed to be bit-exact: `theta_k == pi - theta_{Q-k-1}` and
//! `w_k == w_{Q-k-1}` hold exactly.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::real::Real;

/// A point on `S^d` in polar coordinates: `d-1` polar angles in `[0, pi]`
/// and an azimuth in `[0, 2 pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<T> {
    theta: Vec<T>,
    phi: T,
}

impl<T: Real> SpherePoint<T> {
    pub fn new(theta: Vec<T>, phi: T) -> Result<Self> {
        for &angle in &theta {
            if !(angle >= T::zero() && angle <= T::PI()) {
                return Err(Error::AngleOutOfRange(angle.to_f64().unwrap_or(f64::NAN)));
            }
        }
        let two_pi = T::of(2.0) * T::PI();
        if !(phi >= T::zero() && phi < two_pi) {
            return Err(Error::AngleOutOfRange(phi.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// Sphere dimension implied by the coordinate count.
    pub fn dim(&self) -> usize {
        self.theta.len() + 1
    }
}

/// Sampling data for one polar coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarCoordinate<T> {
    /// Angles `theta_k = arccos(t_k)`, ordered by ascending node `t_k`.
    pub theta: Vec<T>,
    /// Raw Gauss nodes `t_k = cos(theta_k)`, kept so evaluation never
    /// re-takes `cos(arccos(t))`.
    pub cos_theta: Vec<T>,
    pub sin_theta: Vec<T>,
    /// Angular weights `w_k = omega_k / sin(theta_k)^{d-j}`.
    pub weight: Vec<T>,
    /// Unnormalized Gauss weights `omega_k` (summing to the mass of the
    /// Gegenbauer weight function).
    pub node_weight: Vec<T>,
}

/// The spherical uniform design on `S^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalDesign<T> {
    d: usize,
    q: Vec<usize>,
    m: usize,
    polar: Vec<PolarCoordinate<T>>,
    phi: Vec<T>,
    phi_weight: T,
}

/// Builds the spherical uniform design for dimension `d >= 2` with polar node
/// counts `q = (Q_0, ..., Q_{d-2})` and azimuth half-count `M`.
pub fn uniform_design<T: Real>(d: usize, q: &[usize], m: usize) -> Result<SphericalDesign<T>> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if q.len() != d - 1 {
        return Err(Error::NodeCountMismatch { d, expected: d - 1, got: q.len() });
    }
    if q.iter().any(|&count| count == 0) {
        return Err(Error::EmptyPolarRule);
    }
    if m == 0 {
        return Err(Error::EmptyAzimuth);
    }

    let half = T::of(0.5);
    let mut polar = Vec::with_capacity(d - 1);
    for (j, &count) in (1..=d - 1).zip(q) {
        let alpha = T::of_usize(d - j) * half;
        let rule = quadrature::gauss_gegenbauer(count, alpha)?;
        let mass = rule.total_mass();

        let mut theta = vec![T::zero(); count];
        let mut sin_theta = vec![T::zero(); count];
        let mut node_weight = vec![T::zero(); count];
        for k in 0..count / 2 {
            let mirror = count - 1 - k;
            // nodes ascend, so the first half has t < 0 and theta > pi/2;
            // the mirror angle is constructed exactly as pi - theta
            let angle = rule.nodes()[k].acos();
            theta[k] = angle;
            theta[mirror] = T::PI() - angle;
            let s = angle.sin();
            sin_theta[k] = s;
            sin_theta[mirror] = s;
            let w = rule.weights()[k] * mass;
            node_weight[k] = w;
            node_weight[mirror] = w;
        }
        if count % 2 == 1 {
            let mid = count / 2;
            theta[mid] = T::PI() * half;
            sin_theta[mid] = T::one();
            node_weight[mid] = rule.weights()[mid] * mass;
        }

        let exponent = (d - j) as i32;
        let weight = node_weight
            .iter()
            .zip(&sin_theta)
            .map(|(&w, &s)| w / s.powi(exponent))
            .collect();
        polar.push(PolarCoordinate {
            theta,
            cos_theta: rule.nodes().to_vec(),
            sin_theta,
            weight,
            node_weight,
        });
    }

    let azimuth = quadrature::trapezoid_phi(m)?;
    Ok(SphericalDesign {
        d,
        q: q.to_vec(),
        m,
        phi: azimuth.angles().to_vec(),
        phi_weight: azimuth.weight(),
        polar,
    })
}

/// `f(theta) = prod_j sin(theta_j)^{d-j}`, the polar density of the uniform
/// measure on `S^d`.
pub fn measure_f<T: Real>(theta: &[T], d: usize) -> T {
    let mut out = T::one();
    for (j, &angle) in (1..=d - 1).zip(theta) {
        out *= angle.sin().powi((d - j) as i32);
    }
    out
}

impl<T: Real> SphericalDesign<T> {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn polar_counts(&self) -> &[usize] {
        &self.q
    }

    pub fn azimuth_half_count(&self) -> usize {
        self.m
    }

    pub fn polar(&self) -> &[PolarCoordinate<T>] {
        &self.polar
    }

    pub fn phi(&self) -> &[T] {
        &self.phi
    }

    pub fn phi_weight(&self) -> T {
        self.phi_weight
    }

    /// Total number of sampling points `N = 2M prod_j Q_j`.
    pub fn node_count(&self) -> usize {
        self.q.iter().product::<usize>() * 2 * self.m
    }

    /// Visits every node as `(polar indices, azimuth index, combined weight)`.
    ///
    /// The combined weight is `prod_j omega_{k_j} * pi/M`, i.e. the flattened
    /// design weight already multiplied by the measure factor `f(theta)`; the
    /// `sin^{d-j}` powers cancel exactly in that product.
    pub fn for_each_node<F: FnMut(&[usize], usize, T)>(&self, mut visit: F) {
        let mut indices = vec![0usize; self.d - 1];
        loop {
            let mut polar_weight = T::one();
            for (coord, &k) in self.polar.iter().zip(&indices) {
                polar_weight *= coord.node_weight[k];
            }
            for (qi, _) in self.phi.iter().enumerate() {
                visit(&indices, qi, polar_weight * self.phi_weight);
            }
            // advance the mixed-radix polar index, azimuth handled above
            let mut level = self.d - 1;
            loop {
                if level == 0 {
                    return;
                }
                level -= 1;
                indices[level] += 1;
                if indices[level] < self.q[level] {
                    break;
                }
                indices[level] = 0;
            }
        }
    }

    /// The point at the given polar/azimuth indices.
    pub fn point_at(&self, polar_indices: &[usize], phi_index: usize) -> SpherePoint<T> {
        let theta = self
            .polar
            .iter()
            .zip(polar_indices)
            .map(|(coord, &k)| coord.theta[k])
            .collect();
        SpherePoint { theta, phi: self.phi[phi_index] }
    }

    /// Flattens the grid into `(point, weight)` pairs, the weight being the
    /// product of per-coordinate angular weights and the azimuth weight.
    ///
    /// Ordering is row-major with the azimuth index fastest.
    pub fn flatten(&self) -> Vec<(SpherePoint<T>, T)> {
        let mut out = Vec::with_capacity(self.node_count());
        self.for_each_node(|polar_indices, phi_index, _| {
            let mut weight = self.phi_weight;
            for (coord, &k) in self.polar.iter().zip(polar_indices) {
                weight *= coord.weight[k];
            }
            out.push((self.point_at(polar_indices, phi_index), weight));
        });
        out
    }
}

#[derive(Serialize, Deserialize)]
struct DesignJson<T> {
    d: usize,
    #[serde(rename = "Q")]
    q: Vec<usize>,
    #[serde(rename = "M")]
    m: usize,
    theta: Vec<Vec<T>>,
    w_theta: Vec<Vec<T>>,
    phi: Vec<T>,
    w_phi: T,
}

impl<T: Real + Serialize> SphericalDesign<T> {
    /// Serializes to the design JSON schema
    /// `{"d", "Q", "M", "theta", "w_theta", "phi", "w_phi"}`.
    pub fn to_json(&self) -> String {
        let doc = DesignJson {
            d: self.d,
            q: self.q.clone(),
            m: self.m,
            theta: self.polar.iter().map(|c| c.theta.clone()).collect(),
            w_theta: self.polar.iter().map(|c| c.weight.clone()).collect(),
            phi: self.phi.clone(),
            w_phi: self.phi_weight,
        };
        serde_json::to_string_pretty(&doc).expect("design serialization cannot fail")
    }
}

impl<T: Real + DeserializeOwned> SphericalDesign<T> {
    /// Parses the design JSON schema, rebuilding the trigonometric caches
    /// from the stored angles.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: DesignJson<T> =
            serde_json::from_str(text).map_err(|e| Error::MalformedDesign(e.to_string()))?;
        if doc.d < 2 {
            return Err(Error::DimensionTooSmall(doc.d));
        }
        if doc.q.len() != doc.d - 1 || doc.theta.len() != doc.d - 1 || doc.w_theta.len() != doc.d - 1
        {
            return Err(Error::MalformedDesign("coordinate count mismatch".into()));
        }
        if doc.phi.len() != 2 * doc.m || doc.m == 0 {
            return Err(Error::MalformedDesign("azimuth node count mismatch".into()));
        }
        let mut polar = Vec::with_capacity(doc.d - 1);
        for (j, (angles, weights)) in (1..=doc.d - 1).zip(doc.theta.iter().zip(&doc.w_theta)) {
            if angles.len() != doc.q[j - 1] || weights.len() != doc.q[j - 1] {
                return Err(Error::MalformedDesign(format!("node count mismatch at j={j}")));
            }
            let mut cos_theta = Vec::with_capacity(angles.len());
            let mut sin_theta = Vec::with_capacity(angles.len());
            let mut node_weight = Vec::with_capacity(angles.len());
            let exponent = (doc.d - j) as i32;
            for (&angle, &w) in angles.iter().zip(weights) {
                if !(angle > T::zero() && angle < T::PI()) {
                    return Err(Error::AngleOutOfRange(angle.to_f64().unwrap_or(f64::NAN)));
                }
                if !(w > T::zero()) {
                    return Err(Error::MalformedDesign("non-positive weight".into()));
                }
                let s = angle.sin();
                cos_theta.push(angle.cos());
                sin_theta.push(s);
                node_weight.push(w * s.powi(exponent));
            }
            polar.push(PolarCoordinate {
                theta: angles.clone(),
                cos_theta,
                sin_theta,
                weight: weights.clone(),
                node_weight,
            });
        }
        Ok(Self {
            d: doc.d,
            q: doc.q,
            m: doc.m,
            polar,
            phi: doc.phi,
            phi_weight: doc.w_phi,
        })
    }
}
