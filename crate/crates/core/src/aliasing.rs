//! The aliasing function of a sampling design, its separable factorization,
//! and closed-form alias enumeration with intensities.
//!
//! Under a separable design the aliasing function `tau(l, m; l', m')`, the
//! discrete inner product of two harmonics, factorizes into one weighted
//! Gegenbauer product sum per polar coordinate and a geometric sum over the
//! azimuth. The azimuth factor collapses to `2 pi` exactly when the last
//! orders differ by a multiple of `2M` and vanishes otherwise, so every alias
//! of `a_{l, m}` has the form `a_{l + 2 s_0, m + 2 s}` with the last offset
//! `s_{d-1} = r M`.
//!
//! Offset tuples are filtered by one of two [`SelectionRule`]s:
//!
//! - [`SelectionRule::Complete`] drops a tuple only when one of its factors
//!   provably vanishes: a zero offset at level `j` following a nonzero
//!   predecessor that sits inside the exactness window of the level-`j` rule
//!   makes the factor an exact Gegenbauer orthogonality integral. This rule
//!   reproduces the support of the aliasing function (the brute-force scan)
//!   up to numerically null intensities.
//! - [`SelectionRule::Restricted`] additionally drops zero offsets after any
//!   in-window predecessor (even a zero one) and enforces the monotone chain
//!   `s_1 >= ... >= s_{d-2} >= r M`. This is the filter behind the grouped
//!   alias tables; it misses zero-offset chains such as `a_{4,0,0}` aliasing
//!   `a_{0,0,0}` at `Q = 2`, which `Complete` retains and the brute-force
//!   oracle confirms.

use num_complex::Complex;
use serde::Serialize;

use crate::design::SphericalDesign;
use crate::error::{Error, Result};
use crate::harmonics::{HarmonicEvaluator, HarmonicIndex};
use crate::quadrature;
use crate::real::Real;
use crate::specfun::{gegenbauer, ln_norm_h, log_gamma, norm_h};
use crate::tolerance::NULL_INTENSITY;

/// Alias location class: primary locations survive every admissible choice of
/// sampling parameters, secondary ones can be annihilated by growing the
/// design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LocationClass {
    Primary,
    Secondary,
}

/// Which offset tuples the enumeration keeps; see the module docs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelectionRule {
    #[default]
    Complete,
    Restricted,
}

/// One alias of a harmonic coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasRecord<T> {
    pub source: HarmonicIndex,
    pub target: HarmonicIndex,
    /// Degree offset: `ell' = ell + 2 s0`.
    pub s0: i64,
    /// Middle-order offsets `s_1 .. s_{d-2}` (empty for `d = 2`).
    pub s: Vec<i64>,
    /// Azimuthal multiplier: `m'_{d-1} = m_{d-1} + 2 r M`.
    pub r: i64,
    /// Intensity `eta`, the aliasing function with the azimuth factor
    /// collapsed to `2 pi`.
    pub intensity: T,
    /// Frequency-domain distance `2 sqrt(sum s_i^2 + (r M)^2)`.
    pub distance: T,
    pub class: LocationClass,
}

/// Offset tuple admitted by the restricted index machinery at a fixed `s0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetTuple {
    /// Middle offsets `s_1 .. s_{d-2}`.
    pub s: Vec<i64>,
    pub r: i64,
}

/// Materialized restricted index sets at one degree offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AliasIndexSets {
    pub s0: i64,
    /// Whether `s0` lies beyond the exactness window of the first coordinate.
    pub s0_in_b: bool,
    /// Admissible `(s_1 .. s_{d-2}, r)` tuples, lexicographically ordered.
    pub tuples: Vec<OffsetTuple>,
}

/// Source-chain view with `m_0 = ell`.
fn source_orders(index: &HarmonicIndex) -> Vec<i64> {
    let mut orders = Vec::with_capacity(index.dim());
    orders.push(index.ell());
    orders.extend_from_slice(index.orders());
    orders
}

/// Exactness-window test: level `i` offsets up to `Q_i - m_i - 1` keep the
/// level-`(i+1)` factor inside the Gaussian exactness degree.
fn in_window_a(q: &[usize], m: &[i64], level: usize, offset: i64) -> bool {
    offset <= q[level] as i64 - m[level] - 1
}

/// Legality window for the middle offset `s_level` given the previous target
/// order: `-m/2 <= s <= (m_prev_target - m) / 2`.
fn middle_window(m: &[i64], level: usize, prev_target: i64) -> (i64, i64) {
    let lo = -(m[level] / 2);
    let hi = (prev_target - m[level]).div_euclid(2);
    (lo, hi)
}

/// Legality window for the azimuth multiplier `r`:
/// `|m_{d-1} + 2 r M| <= previous target order`.
fn azimuth_window(m_last: i64, prev_target: i64, m_azimuth: usize) -> (i64, i64) {
    let step = 2 * m_azimuth as i64;
    (ceil_div(-(prev_target + m_last), step), (prev_target - m_last).div_euclid(step))
}

/// The `j`-th aliasing factor: the weighted Gegenbauer product sum over the
/// `j`-th polar coordinate (1-based `j`).
///
/// Signed orders are admitted at the last coordinate; the polar parts use
/// their absolute values.
pub fn factor_i<T: Real>(
    design: &SphericalDesign<T>,
    j: usize,
    m_prev: i64,
    m: i64,
    m_prev_t: i64,
    m_t: i64,
) -> Result<T> {
    let d = design.dim();
    if j == 0 || j > d - 1 {
        return Err(Error::CoordinateIndex { j, d, max: d - 1 });
    }
    let ma = m.abs();
    let mta = m_t.abs();
    if m_prev < ma {
        return Err(Error::InvalidOrderPair { m_prev, m: ma });
    }
    if m_prev_t < mta {
        return Err(Error::InvalidOrderPair { m_prev: m_prev_t, m: mta });
    }
    let half = T::of(0.5);
    let alpha_s = T::of_i64(ma) + T::of_usize(d - j) * half;
    let alpha_t = T::of_i64(mta) + T::of_usize(d - j) * half;
    let degree_s = (m_prev - ma) as usize;
    let degree_t = (m_prev_t - mta) as usize;
    let sin_power = (ma + mta) as i32;

    let coord = &design.polar()[j - 1];
    let mut sum = T::zero();
    for k in 0..coord.cos_theta.len() {
        let t = coord.cos_theta[k];
        let term = coord.node_weight[k]
            * coord.sin_theta[k].powi(sin_power)
            * gegenbauer(degree_s, alpha_s, t)
            * gegenbauer(degree_t, alpha_t, t);
        sum += term;
    }
    Ok(sum)
}

/// The azimuth factor in closed form: `2 pi` when the last orders differ by a
/// multiple of `2M`, else zero.
pub fn factor_j<T: Real>(m_last: i64, m_last_t: i64, m_azimuth: usize) -> T {
    if (m_last_t - m_last).rem_euclid(2 * m_azimuth as i64) == 0 {
        T::of(2.0) * T::PI()
    } else {
        T::zero()
    }
}

/// The azimuth factor as the literal `2M`-term geometric sum.
pub fn factor_j_sum<T: Real>(m_last: i64, m_last_t: i64, m_azimuth: usize) -> Complex<T> {
    let weight = T::PI() / T::of_usize(m_azimuth);
    let delta = T::of_i64(m_last_t - m_last);
    let mut sum = Complex::new(T::zero(), T::zero());
    for q in 0..2 * m_azimuth {
        let phase = delta * T::of_usize(q) * T::PI() / T::of_usize(m_azimuth);
        sum += Complex::new(phase.cos(), phase.sin());
    }
    sum * weight
}

/// The aliasing function by direct summation over the flattened design:
/// `sum_i w_i Y_target(x_i) conj(Y_source(x_i)) f(theta_i)`.
pub fn tau_direct<T: Real>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    target: &HarmonicIndex,
) -> Result<Complex<T>> {
    if source.dim() != design.dim() || target.dim() != design.dim() {
        return Err(Error::IndexDimensionMismatch {
            d: design.dim(),
            got: source.dim().max(target.dim()),
        });
    }
    let source_eval = HarmonicEvaluator::new(source)?;
    let target_eval = HarmonicEvaluator::new(target)?;
    let coords = design.polar();
    let mut cos_theta = vec![T::zero(); design.dim() - 1];
    let mut sin_theta = vec![T::zero(); design.dim() - 1];
    let mut sum = Complex::new(T::zero(), T::zero());
    design.for_each_node(|polar, phi_index, weight| {
        for (slot, (coord, &k)) in coords.iter().zip(polar).enumerate() {
            cos_theta[slot] = coord.cos_theta[k];
            sin_theta[slot] = coord.sin_theta[k];
        }
        let phi = design.phi()[phi_index];
        let y_target = target_eval.eval(&cos_theta, &sin_theta, phi);
        let y_source = source_eval.eval(&cos_theta, &sin_theta, phi);
        sum += y_target * y_source.conj() * weight;
    });
    Ok(sum)
}

/// The aliasing function through its separable factorization:
/// `(2 pi)^{-1} prod_j h h' I_j` times the closed-form azimuth factor.
pub fn tau_separable<T: Real>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    target: &HarmonicIndex,
) -> Result<Complex<T>> {
    if source.dim() != design.dim() || target.dim() != design.dim() {
        return Err(Error::IndexDimensionMismatch {
            d: design.dim(),
            got: source.dim().max(target.dim()),
        });
    }
    let d = design.dim();
    let azimuth = factor_j::<T>(source.azimuthal(), target.azimuthal(), design.azimuth_half_count());
    if azimuth == T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let mut ln_mag = azimuth.ln() - (T::of(2.0) * T::PI()).ln();
    let mut negative = false;
    for j in 1..d {
        let m_prev = source.order_at(j - 1);
        let m = source.order_at(j);
        let m_prev_t = target.order_at(j - 1);
        let m_t = target.order_at(j);
        ln_mag += ln_norm_h::<T>(m_prev, m.abs(), j, d)?;
        ln_mag += ln_norm_h::<T>(m_prev_t, m_t.abs(), j, d)?;
        let factor = factor_i(design, j, m_prev, m, m_prev_t, m_t)?;
        if factor == T::zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        ln_mag += factor.abs().ln();
        negative ^= factor < T::zero();
    }
    let mut value = ln_mag.exp();
    if negative {
        value = -value;
    }
    Ok(Complex::new(value, T::zero()))
}

/// Alias intensity: the aliasing function with the azimuth factor collapsed,
/// `prod_j h_{source} h_{target} I_j` over the polar coordinates.
///
/// `s` holds the middle offsets `s_1 .. s_{d-2}`; the last offset is `r M`.
pub fn eta<T: Real>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    s0: i64,
    s: &[i64],
    r: i64,
) -> Result<T> {
    let target = offsets_to_target(source, s0, s, r, design.azimuth_half_count())?;
    eta_for_target(design, source, &target)
}

fn eta_for_target<T: Real>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    target: &HarmonicIndex,
) -> Result<T> {
    let d = design.dim();
    let mut product = T::one();
    for j in 1..d {
        let m_prev = source.order_at(j - 1);
        let m = source.order_at(j);
        let m_prev_t = target.order_at(j - 1);
        let m_t = target.order_at(j);
        product *= norm_h::<T>(m_prev, m.abs(), j, d)?;
        product *= norm_h::<T>(m_prev_t, m_t.abs(), j, d)?;
        product *= factor_i(design, j, m_prev, m, m_prev_t, m_t)?;
    }
    Ok(product)
}

/// Builds the target index `(ell + 2 s0, m + 2 s, m_{d-1} + 2 r M)`.
pub fn offsets_to_target(
    source: &HarmonicIndex,
    s0: i64,
    s: &[i64],
    r: i64,
    m_azimuth: usize,
) -> Result<HarmonicIndex> {
    let d = source.dim();
    if s.len() != d.saturating_sub(2) {
        return Err(Error::InvalidOffsets { s0, s: s.to_vec(), r });
    }
    let ell = source.ell() + 2 * s0;
    let mut orders = Vec::with_capacity(d - 1);
    for (level, &offset) in (1..=d - 2).zip(s) {
        orders.push(source.order_at(level) + 2 * offset);
    }
    orders.push(source.azimuthal() + 2 * r * m_azimuth as i64);
    HarmonicIndex::new(ell, orders)
        .map_err(|_| Error::InvalidOffsets { s0, s: s.to_vec(), r })
}

/// Frequency-domain distance between a coefficient and its alias,
/// `2 sqrt(s0^2 + sum s_j^2 + (r M)^2)`.
pub fn alias_distance<T: Real>(s0: i64, s: &[i64], r: i64, m_azimuth: usize) -> T {
    let mut total = s0 * s0;
    for &offset in s {
        total += offset * offset;
    }
    let last = r * m_azimuth as i64;
    total += last * last;
    T::of(2.0) * T::of_i64(total).sqrt()
}

/// Whether each polar offset sits inside (`A`) or beyond (`B`) the exactness
/// window of its coordinate; the table columns group by this pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WindowClass {
    A,
    B,
}

impl std::fmt::Display for WindowClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WindowClass::A => write!(f, "A"),
            WindowClass::B => write!(f, "B"),
        }
    }
}

/// Window classes of the polar offsets `(s0, s_1 .. s_{d-2})`.
pub fn offset_classes(source: &HarmonicIndex, s0: i64, s: &[i64], q: &[usize]) -> Vec<WindowClass> {
    let m = source_orders(source);
    let mut offsets = Vec::with_capacity(q.len());
    offsets.push(s0);
    offsets.extend_from_slice(s);
    offsets
        .iter()
        .enumerate()
        .map(|(level, &offset)| {
            if in_window_a(q, &m, level, offset) {
                WindowClass::A
            } else {
                WindowClass::B
            }
        })
        .collect()
}

/// Location classification: primary when every polar offset lies beyond its
/// exactness window (`s_i >= Q_i - m_i` for `i = 0..=d-2`), secondary
/// otherwise.
pub fn classify_location(
    source: &HarmonicIndex,
    s0: i64,
    s: &[i64],
    q: &[usize],
) -> LocationClass {
    if offset_classes(source, s0, s, q).iter().all(|&class| class == WindowClass::B) {
        LocationClass::Primary
    } else {
        LocationClass::Secondary
    }
}

/// Visits every offset tuple admitted by `rule` at degree offset `s0`.
fn visit_tuples<F: FnMut(&[i64], i64)>(
    source: &HarmonicIndex,
    q: &[usize],
    m_azimuth: usize,
    s0: i64,
    rule: SelectionRule,
    mut visit: F,
) {
    let d = source.dim();
    let m = source_orders(source);
    let mut stack = Vec::with_capacity(d.saturating_sub(2));

    descend(&m, q, m_azimuth, s0, rule, d, 1, &mut stack, &mut visit);

    #[allow(clippy::too_many_arguments)]
    fn descend<F: FnMut(&[i64], i64)>(
        m: &[i64],
        q: &[usize],
        m_azimuth: usize,
        s0: i64,
        rule: SelectionRule,
        d: usize,
        level: usize,
        stack: &mut Vec<i64>,
        visit: &mut F,
    ) {
        let prev_offset = if level == 1 { s0 } else { stack[level - 2] };
        let prev_target = m[level - 1] + 2 * prev_offset;
        let prev_in_a = in_window_a(q, m, level - 1, prev_offset);

        // a zero offset is annihilated by exact Gegenbauer orthogonality when
        // the predecessor offset is inside the exactness window; the
        // restricted rule also drops it for a zero predecessor
        let zero_allowed = match rule {
            SelectionRule::Complete => prev_offset == 0 || !prev_in_a,
            SelectionRule::Restricted => !prev_in_a,
        };

        if level == d - 1 {
            let (lo, hi) = azimuth_window(m[d - 1], prev_target, m_azimuth);
            for r in lo..=hi {
                if r == 0 && !zero_allowed {
                    continue;
                }
                if rule == SelectionRule::Restricted && d > 2 {
                    let last = stack[d - 3];
                    if last < r * m_azimuth as i64 {
                        continue;
                    }
                }
                if r == 0 && s0 == 0 && stack.iter().all(|&x| x == 0) {
                    continue; // the coefficient itself, not an alias
                }
                visit(stack, r);
            }
            return;
        }

        let (lo, hi) = middle_window(m, level, prev_target);
        for offset in lo..=hi {
            if offset == 0 && !zero_allowed {
                continue;
            }
            if rule == SelectionRule::Restricted && level >= 2 && stack[level - 2] < offset {
                continue;
            }
            stack.push(offset);
            descend(m, q, m_azimuth, s0, rule, d, level + 1, stack, visit);
            stack.pop();
        }
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

/// Materializes the restricted index sets for one degree offset `s0`.
pub fn alias_index_sets(
    source: &HarmonicIndex,
    q: &[usize],
    m_azimuth: usize,
    s0: i64,
) -> Result<AliasIndexSets> {
    if s0 < -(source.ell() / 2) {
        return Err(Error::OffsetBelowBound { s0, ell: source.ell() });
    }
    let m = source_orders(source);
    let mut tuples = Vec::new();
    visit_tuples(source, q, m_azimuth, s0, SelectionRule::Restricted, |s, r| {
        tuples.push(OffsetTuple { s: s.to_vec(), r });
    });
    Ok(AliasIndexSets { s0, s0_in_b: !in_window_a(q, &m, 0, s0), tuples })
}

/// Enumerates the aliases of `source` with `s0 <= s0_max`, dropping records
/// whose intensity is numerically null. Records are sorted by
/// `(s0, lexicographic s, r)`, which is the construction order.
pub fn enumerate_aliases<T: Real>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    s0_max: i64,
    rule: SelectionRule,
) -> Result<Vec<AliasRecord<T>>> {
    if source.dim() != design.dim() {
        return Err(Error::IndexDimensionMismatch { d: design.dim(), got: source.dim() });
    }
    let q = design.polar_counts();
    let m_azimuth = design.azimuth_half_count();
    let null = T::of(NULL_INTENSITY);

    let mut raw: Vec<(i64, Vec<i64>, i64)> = Vec::new();
    for s0 in -(source.ell() / 2)..=s0_max {
        visit_tuples(source, q, m_azimuth, s0, rule, |s, r| {
            raw.push((s0, s.to_vec(), r));
        });
    }

    let mut records = Vec::with_capacity(raw.len());
    for (s0, s, r) in raw {
        let target = offsets_to_target(source, s0, &s, r, m_azimuth)?;
        let intensity = eta_for_target(design, source, &target)?;
        if intensity.abs() <= null {
            continue;
        }
        let class = classify_location(source, s0, &s, q);
        let distance = alias_distance(s0, &s, r, m_azimuth);
        records.push(AliasRecord { source: source.clone(), target, s0, s, r, intensity, distance, class });
    }
    Ok(records)
}

/// Brute-force alias scan: every target with degree at most `ell_scan` whose
/// direct aliasing-function value exceeds `threshold` in magnitude.
pub fn brute_force_aliases<T: Real>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    ell_scan: usize,
    threshold: T,
) -> Result<Vec<(HarmonicIndex, Complex<T>)>> {
    if source.dim() != design.dim() {
        return Err(Error::IndexDimensionMismatch { d: design.dim(), got: source.dim() });
    }
    let d = design.dim();
    let coords = design.polar();

    // cache conj(Y_source) and the combined weights over the grid
    let source_eval = HarmonicEvaluator::new(source)?;
    let mut weighted_source = Vec::with_capacity(design.node_count());
    let mut phis = Vec::with_capacity(design.node_count());
    let mut grid = Vec::with_capacity(design.node_count());
    let mut cos_theta = vec![T::zero(); d - 1];
    let mut sin_theta = vec![T::zero(); d - 1];
    design.for_each_node(|polar, phi_index, weight| {
        for (slot, (coord, &k)) in coords.iter().zip(polar).enumerate() {
            cos_theta[slot] = coord.cos_theta[k];
            sin_theta[slot] = coord.sin_theta[k];
        }
        let phi = design.phi()[phi_index];
        let y = source_eval.eval(&cos_theta, &sin_theta, phi);
        weighted_source.push(y.conj() * weight);
        phis.push(phi);
        grid.push((cos_theta.clone(), sin_theta.clone()));
    });

    let mut out = Vec::new();
    for ell in 0..=ell_scan {
        for target in crate::harmonics::index_set(ell, d) {
            if &target == source {
                continue;
            }
            let target_eval = HarmonicEvaluator::new(&target)?;
            let mut tau = Complex::new(T::zero(), T::zero());
            for ((trig, &phi), ws) in grid.iter().zip(&phis).zip(&weighted_source) {
                tau += target_eval.eval(&trig.0, &trig.1, phi) * *ws;
            }
            if tau.norm() > threshold {
                out.push((target, tau));
            }
        }
    }
    Ok(out)
}

/// Aliases on the 2-sphere through the explicit associated-Legendre double
/// sum, an implementation path independent of [`enumerate_aliases`].
pub fn aliases_2d<T: Real>(
    ell: i64,
    m: i64,
    q: usize,
    m_azimuth: usize,
    s_max: i64,
) -> Result<Vec<AliasRecord<T>>> {
    if ell < 0 || m.abs() > ell {
        return Err(Error::InvalidHarmonicIndex { ell, orders: vec![m] });
    }
    if q == 0 {
        return Err(Error::EmptyRule);
    }
    if m_azimuth == 0 {
        return Err(Error::EmptyAzimuth);
    }
    let source = HarmonicIndex::new(ell, vec![m])?;
    let rule = quadrature::gauss_gegenbauer::<T>(q, T::of(0.5))?;
    let mass = rule.total_mass();
    let null = T::of(NULL_INTENSITY);
    let step = 2 * m_azimuth as i64;

    let zeta = |l: i64, order: i64| -> Result<T> {
        let oa = order.abs();
        let half = T::of(0.5);
        let ln = half
            * ((T::of_i64(2 * l + 1) * half).ln() + log_gamma(T::of_i64(l - oa + 1))?
                - log_gamma(T::of_i64(l + oa + 1))?);
        Ok(ln.exp())
    };

    let mut records = Vec::new();
    for s in -(ell / 2)..=s_max {
        let ell_t = ell + 2 * s;
        let in_a = s <= q as i64 - ell - 1;
        let lo = ceil_div(-(ell_t + m), step);
        let hi = (ell_t - m).div_euclid(step);
        for r in lo..=hi {
            if s == 0 && r == 0 {
                continue;
            }
            // zero azimuth offset survives only outside the exactness window
            // or from the unshifted degree
            if r == 0 && s != 0 && in_a {
                continue;
            }
            let m_t = m + r * step;
            let mut integral = T::zero();
            for (t, w) in rule.nodes().iter().zip(rule.weights()) {
                integral += *w
                    * mass
                    * assoc_legendre(ell, m.abs(), *t)
                    * assoc_legendre(ell_t, m_t.abs(), *t);
            }
            let intensity = zeta(ell, m)? * zeta(ell_t, m_t)? * integral;
            if intensity.abs() <= null {
                continue;
            }
            let target = HarmonicIndex::new(ell_t, vec![m_t])?;
            let class = if in_a { LocationClass::Secondary } else { LocationClass::Primary };
            records.push(AliasRecord {
                source: source.clone(),
                target,
                s0: s,
                s: Vec::new(),
                r,
                intensity,
                distance: alias_distance(s, &[], r, m_azimuth),
                class,
            });
        }
    }
    Ok(records)
}

/// Alias report in the interchange schema:
/// `{"source", "design", "s0_max", "rule", "aliases": [...]}`.
pub fn report_json<T: Real + Serialize>(
    design: &SphericalDesign<T>,
    source: &HarmonicIndex,
    s0_max: i64,
    rule: SelectionRule,
    records: &[AliasRecord<T>],
) -> String {
    let design_value: serde_json::Value =
        serde_json::from_str(&design.to_json()).expect("design JSON is well-formed");
    let aliases: Vec<serde_json::Value> = records
        .iter()
        .map(|record| {
            serde_json::json!({
                "ell": record.target.ell(),
                "m": record.target.orders(),
                "s0": record.s0,
                "s": record.s,
                "r": record.r,
                "intensity": serde_json::to_value(record.intensity).expect("finite"),
                "distance": serde_json::to_value(record.distance).expect("finite"),
                "class": record.class,
            })
        })
        .collect();
    let doc = serde_json::json!({
        "source": { "ell": source.ell(), "m": source.orders() },
        "design": design_value,
        "s0_max": s0_max,
        "rule": match rule {
            SelectionRule::Complete => "complete",
            SelectionRule::Restricted => "restricted",
        },
        "aliases": aliases,
    });
    serde_json::to_string_pretty(&doc).expect("report serialization cannot fail")
}

/// CSV alias report: one alias per row with intensity and distance columns.
pub fn report_csv<T: Real>(d: usize, records: &[AliasRecord<T>]) -> String {
    let mut out = String::from("ell");
    for j in 1..d {
        out.push_str(&format!(",m{j}"));
    }
    out.push_str(",s0");
    for j in 1..d - 1 {
        out.push_str(&format!(",s{j}"));
    }
    out.push_str(",r,intensity,distance,class\n");
    for record in records {
        out.push_str(&record.target.ell().to_string());
        for m in record.target.orders() {
            out.push_str(&format!(",{m}"));
        }
        out.push_str(&format!(",{}", record.s0));
        for s in &record.s {
            out.push_str(&format!(",{s}"));
        }
        let class = match record.class {
            LocationClass::Primary => "primary",
            LocationClass::Secondary => "secondary",
        };
        out.push_str(&format!(
            ",{},{:e},{:e},{class}\n",
            record.r, record.intensity, record.distance
        ));
    }
    out
}

/// Associated Legendre `P_{l, m}(x)` for `m >= 0`, without the
/// Condon-Shortley phase.
fn assoc_legendre<T: Real>(l: i64, m: i64, x: T) -> T {
    debug_assert!(m >= 0 && l >= m);
    let mut pmm = T::one();
    if m > 0 {
        let somx2 = ((T::one() - x) * (T::one() + x)).sqrt();
        let mut fact = T::one();
        for _ in 0..m {
            pmm *= fact * somx2;
            fact += T::of(2.0);
        }
    }
    if l == m {
        return pmm;
    }
    let mut pmmp1 = x * T::of_i64(2 * m + 1) * pmm;
    if l == m + 1 {
        return pmmp1;
    }
    let mut pll = T::zero();
    for ll in m + 2..=l {
        pll = (x * T::of_i64(2 * ll - 1) * pmmp1 - T::of_i64(ll + m - 1) * pmm)
            / T::of_i64(ll - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    pll
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::uniform_design;
    use crate::tolerance::{FACTORIZATION_ABS, ORACLE_MEMBERSHIP};

    fn idx(ell: i64, orders: &[i64]) -> HarmonicIndex {
        HarmonicIndex::new(ell, orders.to_vec()).unwrap()
    }

    fn design3(q: usize, m: usize) -> SphericalDesign<f64> {
        uniform_design(3, &[q, q], m).unwrap()
    }

    #[test]
    fn tau_identity_within_exactness() {
        let design = design3(4, 4);
        for source in [idx(0, &[0, 0]), idx(1, &[1, -1]), idx(2, &[2, 0]), idx(3, &[2, 1])] {
            let tau = tau_direct(&design, &source, &source).unwrap();
            assert!((tau.re - 1.0).abs() < 1e-12 && tau.im.abs() < 1e-12, "{source}");
        }
    }

    #[test]
    fn tau_known_alias_and_parity_zero() {
        let design = design3(2, 1);
        let tau = tau_direct(&design, &idx(0, &[0, 0]), &idx(2, &[2, 2])).unwrap();
        assert!(tau.norm() > 1e-3, "a_{{2,2,2}} must alias a_{{0,0,0}}");
        let tau = tau_direct(&design, &idx(0, &[0, 0]), &idx(1, &[0, 0])).unwrap();
        assert!(tau.norm() <= 1e-12, "odd-parity target must annihilate");
    }

    #[test]
    fn azimuth_factor_closed_form_and_sum_agree() {
        assert_eq!(factor_j::<f64>(0, 0, 2), 2.0 * std::f64::consts::PI);
        assert_eq!(factor_j::<f64>(0, 2, 1), 2.0 * std::f64::consts::PI);
        assert_eq!(factor_j::<f64>(0, 2, 2), 0.0);
        for (m, mt, half) in [(0i64, 0i64, 2usize), (0, 2, 1), (0, 2, 2), (-3, 5, 2), (1, 7, 3)] {
            let closed = factor_j::<f64>(m, mt, half);
            let literal = factor_j_sum::<f64>(m, mt, half);
            assert!((literal.re - closed).abs() <= 1e-12 && literal.im.abs() <= 1e-12);
        }
    }

    #[test]
    fn factor_i_orthogonality_cases() {
        let design = design3(4, 2);
        // odd-parity products vanish by node symmetry
        let odd = factor_i(&design, 1, 2, 1, 3, 1).unwrap();
        assert!(odd.abs() <= 1e-12);

        // diagonal case within exactness matches the closed form
        let d = 3usize;
        for (j, m_prev, m) in [(1usize, 2i64, 1i64), (1, 3, 2), (2, 2, 0), (2, 2, 1)] {
            let got = factor_i(&design, j, m_prev, m, m_prev, m).unwrap();
            let dj = (d - j) as f64;
            let a = m as f64 + dj / 2.0;
            let ln = std::f64::consts::PI.ln() + (1.0 - 2.0 * a) * 2.0f64.ln()
                + log_gamma((m_prev + m) as f64 + dj).unwrap()
                - log_gamma((m_prev - m) as f64 + 1.0).unwrap()
                - (m_prev as f64 + dj / 2.0).ln()
                - 2.0 * log_gamma(a).unwrap();
            let expected = ln.exp();
            assert!(
                (got - expected).abs() <= 1e-12 * expected.abs(),
                "closed form at j={j}, m_prev={m_prev}, m={m}: {got} vs {expected}"
            );
        }

        // off-diagonal degree shift within exactness vanishes
        let shifted = factor_i(&design, 1, 1, 1, 3, 1).unwrap();
        assert!(shifted.abs() <= 1e-13);
    }

    #[test]
    fn separable_factorization_matches_direct() {
        let design = design3(4, 2);
        let mut state = 1234567u64;
        let mut next = move |bound: usize| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % bound
        };
        let mut pool = Vec::new();
        for ell in 0..=6usize {
            pool.extend(crate::harmonics::index_set(ell, 3));
        }
        for _ in 0..50 {
            let a = pool[next(pool.len())].clone();
            let b = pool[next(pool.len())].clone();
            let direct = tau_direct(&design, &a, &b).unwrap();
            let separable = tau_separable(&design, &a, &b).unwrap();
            assert!(
                (direct - separable).norm() <= FACTORIZATION_ABS,
                "factorization mismatch at {a} -> {b}"
            );
        }
    }

    #[test]
    fn eta_matches_direct_alias_value() {
        let design = design3(2, 1);
        let source = idx(0, &[0, 0]);
        // (s0, s1, r) = (1, 1, 1) targets a_{2,2,2}
        let eta_value = eta(&design, &source, 1, &[1], 1).unwrap();
        let tau = tau_direct(&design, &source, &idx(2, &[2, 2])).unwrap();
        assert!((eta_value - tau.re).abs() <= 1e-10 && tau.im.abs() <= 1e-12);

        // zero-offset chain: a_{4,0,0} is a genuine alias the direct sum sees
        let eta_value = eta(&design, &source, 2, &[0], 0).unwrap();
        let tau = tau_direct(&design, &source, &idx(4, &[0, 0])).unwrap();
        assert!(eta_value.abs() > 0.05);
        assert!((eta_value - tau.re).abs() <= 1e-10);
    }

    #[test]
    fn eta_identity_is_one() {
        let design = design3(4, 4);
        for source in [idx(0, &[0, 0]), idx(2, &[1, 0]), idx(3, &[3, -2])] {
            let value = eta(&design, &source, 0, &[0], 0).unwrap();
            assert!((value - 1.0).abs() < 1e-12, "{source}");
        }
    }

    #[test]
    fn worked_prefactor_closed_form() {
        // eps_{s0,s1,s2} = h_{0,0;1} h_{2s0,2s1;1} h_{0,0;2} h_{2s1,2s2;2}
        // has the closed form printed in the worked example
        let cases = [(1i64, 1i64, 1i64), (2, 1, 1), (2, 2, 0), (3, 2, 2)];
        for (s0, s1, s2) in cases {
            let product: f64 = norm_h::<f64>(0, 0, 1, 3).unwrap()
                * norm_h::<f64>(2 * s0, 2 * s1, 1, 3).unwrap()
                * norm_h::<f64>(0, 0, 2, 3).unwrap()
                * norm_h::<f64>(2 * s1, 2 * s2.abs(), 2, 3).unwrap();
            let fact = |n: i64| -> f64 {
                (1..=n).map(|k| k as f64).product::<f64>()
            };
            let expected = ((fact(2 * s0 - 2 * s1) * fact(2 * s1 - 2 * s2)
                * (2 * s0 + 1) as f64
                * (4 * s1 + 1) as f64)
                / (fact(2 * s0 + 2 * s1 + 1) * fact(2 * s1 + 2 * s2)))
                .sqrt()
                * 2f64.powi((2 * (s1 - s2)) as i32)
                * fact(2 * s1)
                * fact(4 * s2)
                / (std::f64::consts::PI * fact(2 * s2));
            assert!(
                (product - expected).abs() <= 1e-12 * expected.abs(),
                "prefactor at ({s0},{s1},{s2}): {product} vs {expected}"
            );
        }
    }

    #[test]
    fn index_sets_worked_example() {
        let source = idx(0, &[0, 0]);
        // s0 = 1 sits inside the window: s1 must be nonzero, r nonzero
        let sets = alias_index_sets(&source, &[2, 2], 1, 1).unwrap();
        assert!(!sets.s0_in_b);
        let s1_values: Vec<i64> = sets.tuples.iter().map(|t| t.s[0]).collect();
        assert!(s1_values.iter().all(|&v| v == 1));
        let r_values: Vec<i64> = sets.tuples.iter().map(|t| t.r).collect();
        assert_eq!(r_values, vec![-1, 1]);

        // s0 = 2 is beyond the window: s1 = 2 admits the full azimuth range
        let sets = alias_index_sets(&source, &[2, 2], 1, 2).unwrap();
        assert!(sets.s0_in_b);
        let expected: Vec<(i64, i64)> = vec![(1, -1), (1, 1), (2, -2), (2, -1), (2, 0), (2, 1), (2, 2)];
        let got: Vec<(i64, i64)> = sets.tuples.iter().map(|t| (t.s[0], t.r)).collect();
        assert_eq!(got, expected);

        assert!(alias_index_sets(&source, &[2, 2], 1, -1).is_err());
    }

    #[test]
    fn index_sets_empty_when_all_b_empty() {
        // within the window with no admissible nonzero offsets
        let source = idx(0, &[0, 0]);
        let sets = alias_index_sets(&source, &[4, 4], 2, 1).unwrap();
        assert!(sets.tuples.is_empty());
    }

    #[test]
    fn enumeration_reproduces_first_table_row() {
        let design = design3(2, 1);
        let records =
            enumerate_aliases(&design, &idx(0, &[0, 0]), 1, SelectionRule::Complete).unwrap();
        let targets: Vec<String> = records.iter().map(|r| r.target.to_string()).collect();
        assert_eq!(targets, vec!["a_{2,2,-2}", "a_{2,2,2}"]);
    }

    #[test]
    fn enumeration_empty_cases() {
        let design: SphericalDesign<f64> = uniform_design(3, &[4, 4], 2).unwrap();
        let records =
            enumerate_aliases(&design, &idx(0, &[0, 0]), 1, SelectionRule::Complete).unwrap();
        assert!(records.is_empty());

        let design: SphericalDesign<f64> = uniform_design(3, &[4, 4], 4).unwrap();
        let records =
            enumerate_aliases(&design, &idx(0, &[0, 0]), 3, SelectionRule::Complete).unwrap();
        assert!(records.is_empty());
        // confirmed by the direct scan over all low degrees
        let brute = brute_force_aliases(&design, &idx(0, &[0, 0]), 6, ORACLE_MEMBERSHIP).unwrap();
        assert!(brute.is_empty());
    }

    #[test]
    fn complete_rule_keeps_zero_chains_restricted_drops_them() {
        let design = design3(2, 1);
        let source = idx(0, &[0, 0]);
        let complete =
            enumerate_aliases(&design, &source, 2, SelectionRule::Complete).unwrap();
        let restricted =
            enumerate_aliases(&design, &source, 2, SelectionRule::Restricted).unwrap();
        let has_zero_chain =
            |records: &[AliasRecord<f64>]| records.iter().any(|r| r.target == idx(4, &[0, 0]));
        assert!(has_zero_chain(&complete));
        assert!(!has_zero_chain(&restricted));
        // the direct aliasing function adjudicates for the complete rule
        let tau = tau_direct(&design, &source, &idx(4, &[0, 0])).unwrap();
        assert!(tau.norm() > ORACLE_MEMBERSHIP);
    }

    #[test]
    fn classification_examples() {
        let source = idx(0, &[0, 0]);
        // a_{2,2,2} at Q = 2: s0 = 1 within the window -> secondary
        assert_eq!(classify_location(&source, 1, &[1], &[2, 2]), LocationClass::Secondary);
        // a_{4,4,4}: both offsets beyond -> primary
        assert_eq!(classify_location(&source, 2, &[2], &[2, 2]), LocationClass::Primary);
    }

    #[test]
    fn corollary_hypotheses_make_restricted_aliases_primary() {
        // equal Q with M > Q: every restricted-rule alias is primary
        for (q, m) in [(2usize, 3usize), (3, 4)] {
            let design = design3(q, m);
            for ell in 0..=2usize {
                for source in crate::harmonics::index_set(ell, 3) {
                    let records =
                        enumerate_aliases(&design, &source, 6, SelectionRule::Restricted).unwrap();
                    for record in records {
                        assert_eq!(
                            record.class,
                            LocationClass::Primary,
                            "restricted alias {} of {source} at Q={q}, M={m}",
                            record.target
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn distance_values() {
        let d: f64 = alias_distance(1, &[1], 1, 1);
        assert!((d - 2.0 * 3.0f64.sqrt()).abs() < 1e-15);
        let d: f64 = alias_distance(0, &[0], 0, 1);
        assert_eq!(d, 0.0);
    }

    #[test]
    fn two_sphere_formula_matches_enumeration() {
        let mut state = 77u64;
        let mut next = move |bound: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % bound
        };
        for _ in 0..20 {
            let ell = next(4) as i64;
            let m = if ell == 0 { 0 } else { next(2 * ell as u64 + 1) as i64 - ell };
            let q = 2 + next(3) as usize;
            let m_azimuth = 1 + next(3) as usize;
            let s_max = 3 + next(3) as i64;

            let design: SphericalDesign<f64> = uniform_design(2, &[q], m_azimuth).unwrap();
            let source = HarmonicIndex::new(ell, vec![m]).unwrap();
            let general =
                enumerate_aliases(&design, &source, s_max, SelectionRule::Complete).unwrap();
            let special = aliases_2d::<f64>(ell, m, q, m_azimuth, s_max).unwrap();

            assert_eq!(
                general.len(),
                special.len(),
                "count mismatch at ell={ell}, m={m}, Q={q}, M={m_azimuth}"
            );
            for (a, b) in general.iter().zip(&special) {
                assert_eq!(a.target, b.target);
                assert!(
                    (a.intensity - b.intensity).abs() <= 1e-10 * a.intensity.abs().max(1.0),
                    "intensity mismatch at {}: {} vs {}",
                    a.target,
                    a.intensity,
                    b.intensity
                );
                assert_eq!(a.class, b.class);
            }
        }
    }

    #[test]
    fn two_sphere_zeta_prefactor() {
        // zeta_{0,0} = sqrt(1/2): the constant harmonic on S^2 is
        // (2 pi)^{-1/2} zeta_{0,0} P_{0,0} = 1 / sqrt(4 pi)
        let zeta00 = 0.5f64.sqrt();
        let constant = (2.0 * std::f64::consts::PI).sqrt().recip() * zeta00;
        let expected = crate::harmonics::constant_harmonic_value::<f64>(2);
        assert!((constant - expected).abs() < 1e-15);
        // and the normalization h_{l,|m|;1} on S^2 is zeta times the
        // Gegenbauer-to-Legendre conversion constant (2m)! / (2^m m!)
        for (l, m) in [(3i64, 2i64), (5, 0), (4, 4)] {
            let h: f64 = norm_h(l, m, 1, 2).unwrap();
            let fact = |n: i64| (1..=n).map(|k| k as f64).product::<f64>();
            let zeta = ((2 * l + 1) as f64 / 2.0 * fact(l - m) / fact(l + m)).sqrt();
            let conversion = fact(2 * m) / (2f64.powi(m as i32) * fact(m));
            assert!((h - zeta * conversion).abs() <= 1e-13 * h.abs());
        }
    }

    #[test]
    fn azimuth_window_respects_legality() {
        // every enumerated target is a valid harmonic index
        let design = design3(3, 2);
        for ell in 0..=2usize {
            for source in crate::harmonics::index_set(ell, 3) {
                for record in
                    enumerate_aliases(&design, &source, 5, SelectionRule::Complete).unwrap()
                {
                    assert_eq!(record.target.dim(), 3);
                }
            }
        }
    }
}
