//! Angular power spectrum folding, isotropic field synthesis, aliased
//! coefficient computation, and band-limited exactness checks.
//!
//! Sampling an isotropic field on a finite design folds its power spectrum:
//! the estimated spectrum is a nonnegative linear image of the true one,
//! `C~_ell = sum_{s0} Lambda_ell(ell + 2 s0) C_{ell + 2 s0}`, with the folding
//! weights given by sums of squared alias intensities. For band-limited
//! fields a design with enough nodes makes the fold the identity and the
//! harmonic coefficients recover exactly.

use std::collections::HashMap;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::aliasing::{self, SelectionRule};
use crate::design::SphericalDesign;
use crate::error::{Error, Result};
use crate::harmonics::{
    index_set, kernel_prefactor, kernel_sum, multiplicity, HarmonicEvaluator, HarmonicIndex,
};
use crate::real::Real;
use crate::specfun::gegenbauer_sequence;

/// Angular power spectrum `C_0 .. C_L`, optionally declared band-limited so
/// degrees beyond the band read as exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSpectrum<T> {
    values: Vec<T>,
    band_limit: Option<usize>,
}

impl<T: Real> PowerSpectrum<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        for &value in &values {
            if value < T::zero() || !value.is_finite() {
                return Err(Error::NegativeSpectrum(value.to_f64().unwrap_or(f64::NAN)));
            }
        }
        Ok(Self { values, band_limit: None })
    }

    /// Declares the spectrum band-limited: `C_ell = 0` for `ell > band`.
    pub fn with_band(values: Vec<T>, band: usize) -> Result<Self> {
        if band >= values.len() {
            return Err(Error::BandExceedsSpectrum { band });
        }
        let mut out = Self::new(values)?;
        out.band_limit = Some(band);
        Ok(out)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn band_limit(&self) -> Option<usize> {
        self.band_limit
    }

    /// Highest degree with a stored value.
    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }

    /// `C_ell` if defined: stored values, or zero beyond a declared band.
    pub fn value(&self, ell: usize) -> Option<T> {
        if ell < self.values.len() {
            match self.band_limit {
                Some(band) if ell > band => Some(T::zero()),
                _ => Some(self.values[ell]),
            }
        } else if self.band_limit.is_some() {
            Some(T::zero())
        } else {
            None
        }
    }
}

/// Complete set of harmonic coefficients for degrees `0..=ell_max`, laid out
/// degree by degree in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoeffs<T> {
    d: usize,
    ell_max: usize,
    indices: Vec<HarmonicIndex>,
    values: Vec<Complex<T>>,
    positions: HashMap<HarmonicIndex, usize>,
}

impl<T: Real> HarmonicCoeffs<T> {
    pub fn zero(d: usize, ell_max: usize) -> Self {
        let mut indices = Vec::new();
        for ell in 0..=ell_max {
            indices.extend(index_set(ell, d));
        }
        let positions = indices.iter().enumerate().map(|(i, idx)| (idx.clone(), i)).collect();
        let values = vec![Complex::new(T::zero(), T::zero()); indices.len()];
        Self { d, ell_max, indices, values, positions }
    }

    /// Builds from explicit pairs, rejecting any degree that is not complete.
    pub fn from_pairs(
        d: usize,
        ell_max: usize,
        pairs: impl IntoIterator<Item = (HarmonicIndex, Complex<T>)>,
    ) -> Result<Self> {
        let mut out = Self::zero(d, ell_max);
        let mut seen = vec![false; out.indices.len()];
        for (index, value) in pairs {
            let position = *out
                .positions
                .get(&index)
                .ok_or(Error::IndexDimensionMismatch { d, got: index.dim() })?;
            out.values[position] = value;
            seen[position] = true;
        }
        for ell in 0..=ell_max {
            let expected = multiplicity(ell, d)? as usize;
            let got = out
                .indices
                .iter()
                .zip(&seen)
                .filter(|(idx, &s)| idx.ell() == ell as i64 && s)
                .count();
            if got != expected {
                return Err(Error::IncompleteDegree { ell, expected, got });
            }
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn ell_max(&self) -> usize {
        self.ell_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: &HarmonicIndex) -> Option<Complex<T>> {
        self.positions.get(index).map(|&i| self.values[i])
    }

    pub fn set(&mut self, index: &HarmonicIndex, value: Complex<T>) -> Result<()> {
        let position = *self
            .positions
            .get(index)
            .ok_or(Error::IndexDimensionMismatch { d: self.d, got: index.dim() })?;
        self.values[position] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HarmonicIndex, &Complex<T>)> {
        self.indices.iter().zip(self.values.iter())
    }
}

/// One realization of a band-limited random field: its coefficients and the
/// seed that produced them.
#[derive(Debug, Clone)]
pub struct FieldRealization<T> {
    pub d: usize,
    pub band: usize,
    pub coeffs: HarmonicCoeffs<T>,
    pub seed: u64,
}

/// Truncated folding matrix `Lambda_ell(ell + 2 s0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldingMatrix<T> {
    pub ell_max: usize,
    /// Truncation: entries stop at this degree offset.
    pub s0_max: i64,
    pub rows: Vec<FoldingRow<T>>,
}

/// Entries of one folding-matrix row, indexed by the degree offset.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldingRow<T> {
    pub ell: usize,
    /// `(s0, target degree, lambda)` triples for `s0 >= -ell/2`.
    pub entries: Vec<(i64, usize, T)>,
}

impl<T: Real> FoldingMatrix<T> {
    /// The entry at `(ell, target)` if within truncation.
    pub fn entry(&self, ell: usize, target: usize) -> Option<T> {
        self.rows.iter().find(|row| row.ell == ell).and_then(|row| {
            row.entries.iter().find(|(_, t, _)| *t == target).map(|&(_, _, lambda)| lambda)
        })
    }
}

/// Sum of squared alias intensities at one degree offset:
/// `V(ell, m; s0) = sum_{tuples} prod_j h^2 h'^2 I_j^2`, including the
/// unshifted tuple when `s0 = 0`.
pub fn v_fold<T: Real>(design: &SphericalDesign<T>, source: &HarmonicIndex, s0: i64) -> Result<T> {
    if s0 < -(source.ell() / 2) {
        return Err(Error::OffsetBelowBound { s0, ell: source.ell() });
    }
    let middle = source.dim().saturating_sub(2);
    let mut total = T::zero();
    if s0 == 0 {
        let identity = aliasing::eta(design, source, 0, &vec![0; middle], 0)?;
        total += identity * identity;
    }
    for record in aliasing::enumerate_aliases(design, source, s0, SelectionRule::Complete)? {
        if record.s0 == s0 {
            total += record.intensity * record.intensity;
        }
    }
    Ok(total)
}

/// The folding matrix rows for `ell = 0..=ell_max`, truncated at `s0_max`:
/// `Lambda_ell(ell + 2 s0)` is the multiplicity-average of `V` over the
/// degree's order chains.
pub fn lambda_matrix<T: Real>(
    design: &SphericalDesign<T>,
    ell_max: usize,
    s0_max: i64,
) -> Result<FoldingMatrix<T>> {
    let d = design.dim();
    let mut rows = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        let indices = index_set(ell, d);
        let size = T::of_usize(indices.len());
        let mut entries = Vec::new();
        for s0 in -(ell as i64 / 2)..=s0_max {
            let mut sum = T::zero();
            for index in &indices {
                sum += v_fold(design, index, s0)?;
            }
            let target = (ell as i64 + 2 * s0) as usize;
            entries.push((s0, target, sum / size));
        }
        rows.push(FoldingRow { ell, entries });
    }
    Ok(FoldingMatrix { ell_max, s0_max, rows })
}

/// Applies the folding matrix: `C~_ell = sum_{s0} Lambda_ell(ell + 2 s0)
/// C_{ell + 2 s0}`. Fails when the spectrum does not cover a needed degree.
pub fn fold_spectrum<T: Real>(
    matrix: &FoldingMatrix<T>,
    spectrum: &PowerSpectrum<T>,
) -> Result<PowerSpectrum<T>> {
    let mut values = Vec::with_capacity(matrix.rows.len());
    for row in &matrix.rows {
        let mut folded = T::zero();
        for &(_, target, lambda) in &row.entries {
            let c = spectrum.value(target).ok_or(Error::InsufficientSpectrum { needed: target })?;
            folded += lambda * c;
        }
        values.push(folded);
    }
    PowerSpectrum::new(values)
}

/// Covariance of an isotropic field between two points:
/// `sum_ell C_ell K_ell(x, y)` over the spectrum's stored band.
pub fn covariance<T: Real>(
    spectrum: &PowerSpectrum<T>,
    x: &crate::design::SpherePoint<T>,
    y: &crate::design::SpherePoint<T>,
    d: usize,
) -> T {
    let ell_max = spectrum.max_degree();
    let alpha = T::of_usize(d - 1) * T::of(0.5);
    let values = gegenbauer_sequence(ell_max, alpha, crate::harmonics::inner_product(x, y));
    let mut out = T::zero();
    for (ell, value) in values.into_iter().enumerate() {
        let c = spectrum.value(ell).unwrap_or(T::zero());
        out += c * kernel_prefactor::<T>(ell, d) * value;
    }
    out
}

/// Deterministic child seed for replica `k` of a master seed.
pub fn child_seed(master: u64, replica: u64) -> u64 {
    fn splitmix64(mut x: u64) -> u64 {
        x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = x;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix64(master ^ replica.wrapping_mul(0xA076_1D64_78BD_642F))
}

/// Draws a band-limited field realization: independent circular complex
/// Gaussian coefficients with per-degree variance `C_ell` (real and imaginary
/// parts each carry `C_ell / 2`), deterministic in the seed.
pub fn synthesize_field<T: Real>(
    spectrum: &PowerSpectrum<T>,
    band: usize,
    d: usize,
    seed: u64,
) -> Result<FieldRealization<T>>
where
    StandardNormal: Distribution<T>,
{
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let half = T::of(0.5);
    let mut coeffs = HarmonicCoeffs::zero(d, band);
    for ell in 0..=band {
        let variance =
            spectrum.value(ell).ok_or(Error::InsufficientSpectrum { needed: ell })?;
        let sigma = (variance * half).sqrt();
        for index in index_set(ell, d) {
            let re: T = StandardNormal.sample(&mut rng);
            let im: T = StandardNormal.sample(&mut rng);
            coeffs.set(&index, Complex::new(sigma * re, sigma * im))?;
        }
    }
    Ok(FieldRealization { d, band, coeffs, seed })
}

/// Evaluates the field at every design node, in flattening order.
pub fn sample_field<T: Real>(
    field: &FieldRealization<T>,
    design: &SphericalDesign<T>,
) -> Result<Vec<Complex<T>>> {
    if field.d != design.dim() {
        return Err(Error::IndexDimensionMismatch { d: design.dim(), got: field.d });
    }
    let evaluators: Vec<(HarmonicEvaluator<T>, Complex<T>)> = field
        .coeffs
        .iter()
        .map(|(index, &value)| Ok((HarmonicEvaluator::new(index)?, value)))
        .collect::<Result<_>>()?;

    let coords = design.polar();
    let mut cos_theta = vec![T::zero(); design.dim() - 1];
    let mut sin_theta = vec![T::zero(); design.dim() - 1];
    let mut samples = Vec::with_capacity(design.node_count());
    design.for_each_node(|polar, phi_index, _| {
        for (slot, (coord, &k)) in coords.iter().zip(polar).enumerate() {
            cos_theta[slot] = coord.cos_theta[k];
            sin_theta[slot] = coord.sin_theta[k];
        }
        let phi = design.phi()[phi_index];
        let mut value = Complex::new(T::zero(), T::zero());
        for (evaluator, coeff) in &evaluators {
            value += *coeff * evaluator.eval(&cos_theta, &sin_theta, phi);
        }
        samples.push(value);
    });
    Ok(samples)
}

/// Discrete harmonic coefficients of sampled values:
/// `a~_{ell, m} = sum_i w_i T(x_i) conj(Y_{ell, m}(x_i)) f(theta_i)` for all
/// degrees up to `ell_max`. Samples must align with the flattening order.
pub fn aliased_coeffs<T: Real>(
    samples: &[Complex<T>],
    design: &SphericalDesign<T>,
    ell_max: usize,
) -> Result<HarmonicCoeffs<T>> {
    if samples.len() != design.node_count() {
        return Err(Error::SampleLengthMismatch {
            expected: design.node_count(),
            got: samples.len(),
        });
    }
    let d = design.dim();
    let mut coeffs = HarmonicCoeffs::zero(d, ell_max);
    let evaluators: Vec<(HarmonicIndex, HarmonicEvaluator<T>)> = coeffs
        .indices
        .iter()
        .map(|index| Ok((index.clone(), HarmonicEvaluator::new(index)?)))
        .collect::<Result<_>>()?;

    let coords = design.polar();
    let mut cos_theta = vec![T::zero(); d - 1];
    let mut sin_theta = vec![T::zero(); d - 1];
    let mut totals = vec![Complex::new(T::zero(), T::zero()); evaluators.len()];
    let mut node = 0usize;
    design.for_each_node(|polar, phi_index, weight| {
        for (slot, (coord, &k)) in coords.iter().zip(polar).enumerate() {
            cos_theta[slot] = coord.cos_theta[k];
            sin_theta[slot] = coord.sin_theta[k];
        }
        let phi = design.phi()[phi_index];
        let sample = samples[node] * weight;
        for ((_, evaluator), total) in evaluators.iter().zip(totals.iter_mut()) {
            *total += sample * evaluator.eval(&cos_theta, &sin_theta, phi).conj();
        }
        node += 1;
    });
    for ((index, _), total) in evaluators.iter().zip(totals) {
        coeffs.set(index, total)?;
    }
    Ok(coeffs)
}

/// Band-limited reconstruction at an arbitrary point: the design-weighted sum
/// of samples against the truncated projection kernel
/// `sum_{ell <= band} K_ell(x, x_i)`.
pub fn reconstruct<T: Real>(
    samples: &[Complex<T>],
    design: &SphericalDesign<T>,
    band: usize,
    x: &crate::design::SpherePoint<T>,
) -> Result<Complex<T>> {
    if samples.len() != design.node_count() {
        return Err(Error::SampleLengthMismatch {
            expected: design.node_count(),
            got: samples.len(),
        });
    }
    let d = design.dim();
    let mut total = Complex::new(T::zero(), T::zero());
    let mut node = 0usize;
    design.for_each_node(|polar, phi_index, weight| {
        let point = design.point_at(polar, phi_index);
        let kernel = kernel_sum(band, x, &point, d);
        total += samples[node] * (weight * kernel);
        node += 1;
    });
    Ok(total)
}

/// Per-degree spectrum estimate from a complete coefficient set: the
/// multiplicity-average of `|a~_{ell, m}|^2` (the field is centered, so no
/// mean is subtracted).
pub fn estimate_spectrum<T: Real>(coeffs: &HarmonicCoeffs<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(coeffs.ell_max() + 1);
    for ell in 0..=coeffs.ell_max() {
        let mut sum = T::zero();
        let mut count = 0usize;
        for (index, value) in coeffs.iter() {
            if index.ell() == ell as i64 {
                sum += value.norm_sqr();
                count += 1;
            }
        }
        out.push(sum / T::of_usize(count));
    }
    out
}

/// Design parameters guaranteeing alias-free recovery of a band-limited
/// field, and the implied sample size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleSize {
    /// Common polar node count `Q = L0 + 1`.
    pub q: usize,
    /// Azimuth half-count `M = L0 + 1`.
    pub m: usize,
    /// Total node count `N = 2 M Q^{d-1}`.
    pub n: u128,
    /// The lower bound `2 L0^d` that `n` satisfies.
    pub bound: u128,
}

/// Smallest uniform design of the standard shape recovering bandwidth `L0`
/// exactly: `Q = M = L0 + 1`, so `N = 2 (L0 + 1)^d >= 2 L0^d`.
pub fn check_sample_size(band: usize, d: usize) -> SampleSize {
    let q = band + 1;
    let n = 2 * (q as u128).pow(d as u32);
    let bound = 2 * (band as u128).pow(d as u32);
    debug_assert!(n >= bound);
    SampleSize { q, m: q, n, bound }
}

/// Folding matrix in the interchange schema
/// `{"ell_max", "s0_max", "rows": [{"ell", "entries": [{"ell_target", "lambda"}]}]}`,
/// optionally with a folded spectrum attached.
pub fn folding_json<T: Real + Serialize>(
    matrix: &FoldingMatrix<T>,
    folded: Option<&PowerSpectrum<T>>,
) -> String {
    let rows: Vec<serde_json::Value> = matrix
        .rows
        .iter()
        .map(|row| {
            let entries: Vec<serde_json::Value> = row
                .entries
                .iter()
                .map(|&(_, target, lambda)| {
                    serde_json::json!({ "ell_target": target, "lambda": lambda })
                })
                .collect();
            serde_json::json!({ "ell": row.ell, "entries": entries })
        })
        .collect();
    let mut doc = serde_json::json!({
        "ell_max": matrix.ell_max,
        "s0_max": matrix.s0_max,
        "rows": rows,
    });
    if let Some(spectrum) = folded {
        doc["folded"] = serde_json::json!(spectrum.values());
    }
    serde_json::to_string_pretty(&doc).expect("folding serialization cannot fail")
}

/// CSV rows `ell,ell_target,lambda` for the folding matrix.
pub fn folding_csv<T: Real>(matrix: &FoldingMatrix<T>) -> String {
    let mut out = String::from("ell,ell_target,lambda\n");
    for row in &matrix.rows {
        for &(_, target, lambda) in &row.entries {
            out.push_str(&format!("{},{target},{lambda:e}\n", row.ell));
        }
    }
    out
}
