//! Right-hand side of the integral representation
//!
//! ```text
//! G_n(a+z) = A_n(a) + z - R(z),
//! R(z) = sum_l sin(l pi/n)/pi * int_{a_l}^{a_{l+1}} prod_k |a_k - t|^{1/n} / (t + z) dt
//! ```
//!
//! `R` is a Stieltjes transform of a nonnegative density, which gives the
//! AM-GM inequality at `z = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::boundary::{segments_of, SegmentDensity};
use crate::error::{Error, Result};
use crate::means::{self, arithmetic_mean, check_off_cut, principal_gmean, Sequence};
use crate::quadrature::{integrate_near_pole, QuadratureSpec};

/// Below this distance from `[-a_n, -a_1]` the result is flagged.
pub const ILL_CONDITIONED_DISTANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentContribution {
    pub index: usize,
    #[serde(with = "crate::serde_complex")]
    pub value: Complex64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemainderValue {
    #[serde(with = "crate::serde_complex")]
    pub value: Complex64,
    pub per_segment: Vec<SegmentContribution>,
    pub total_error_estimate: f64,
    /// Set when `z` is within [`ILL_CONDITIONED_DISTANCE`] of the segments'
    /// image on the cut; the error estimate then carries a conditioning term.
    pub ill_conditioned: bool,
}

/// Paired direct and representation values of `G_n(a + z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    #[serde(with = "crate::serde_complex")]
    pub direct_value: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub repr_value: Complex64,
    pub abs_error: f64,
    pub quad_error_estimate: f64,
    pub segments_evaluated: usize,
}

fn segment_integral(
    seg: &SegmentDensity<'_>,
    z: Complex64,
    spec: &QuadratureSpec,
    density_scale: f64,
) -> Result<SegmentContribution> {
    let integrand = |t: f64| (z + t).inv() * (density_scale * seg.density(t));
    // integrate_near_pole falls back to plain integration when -re z is outside.
    let r = integrate_near_pole(integrand, seg.lo, seg.hi, -z.re, spec)?;
    let r = r.require_converged().map_err(|e| match e {
        Error::QuadratureFailure {
            partial,
            error_estimate,
            subdivisions,
        } => Error::QuadratureFailure {
            partial: partial * seg.weight,
            error_estimate: error_estimate * seg.weight,
            subdivisions,
        },
        other => other,
    })?;
    Ok(SegmentContribution {
        index: seg.index,
        value: r.value * seg.weight,
        error_estimate: r.error_estimate * seg.weight,
    })
}

/// The Stieltjes sum over the segments of `points` (ascending, possibly with
/// a zero first entry). `density_scale` multiplies every density and exists
/// for fault injection.
pub(crate) fn stieltjes_sum(
    points: &[f64],
    z: Complex64,
    spec: &QuadratureSpec,
    density_scale: f64,
) -> Result<RemainderValue> {
    spec.validate()?;
    let segs = segments_of(points);
    let per_segment = segs
        .iter()
        .map(|seg| segment_integral(seg, z, spec, density_scale))
        .collect::<Result<Vec<_>>>()?;
    let value = per_segment.iter().map(|s| s.value).sum::<Complex64>();
    let mut total_error_estimate = per_segment
        .iter()
        .map(|s| s.error_estimate)
        .fold(0.0, |acc, e| acc + e);

    let dist = distance_to_interval(z, -points[points.len() - 1], -points[0]);
    let ill_conditioned = !segs.is_empty() && dist < ILL_CONDITIONED_DISTANCE;
    if ill_conditioned {
        // Rounding in 1/(t+z) is amplified by the largest |1/(t+z)|.
        total_error_estimate += f64::EPSILON * points[points.len() - 1]
            / dist.max(f64::MIN_POSITIVE)
            * value.norm().max(1.0);
    }
    Ok(RemainderValue {
        value,
        per_segment,
        total_error_estimate,
        ill_conditioned,
    })
}

fn distance_to_interval(z: Complex64, lo: f64, hi: f64) -> f64 {
    let dx = if z.re < lo {
        lo - z.re
    } else if z.re > hi {
        z.re - hi
    } else {
        0.0
    };
    dx.hypot(z.im)
}

/// `R(z)`, the remainder `A_n(a) + z - G_n(a + z)` as a Stieltjes sum.
pub fn remainder(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &QuadratureSpec,
) -> Result<RemainderValue> {
    remainder_scaled(a, z, spec, 1.0)
}

/// [`remainder`] with every density multiplied by `density_scale`.
pub fn remainder_scaled(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &QuadratureSpec,
    density_scale: f64,
) -> Result<RemainderValue> {
    let z = z.into();
    check_off_cut(z, -a.min())?;
    stieltjes_sum(a.values(), z, spec, density_scale)
}

/// `A_n(a) + z - R(z)`.
pub fn gmean_via_representation(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let z = z.into();
    let r = remainder(a, z, spec)?;
    Ok(arithmetic_mean(a) + z - r.value)
}

/// `h_n(z) = A_n(a - a_1) - R_shifted(z)` over the shifted segments
/// `(a_l - a_1, a_{l+1} - a_1)`.
pub fn h_via_representation(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let z = z.into();
    check_off_cut(z, 0.0)?;
    let offsets = a.offsets();
    let r = stieltjes_sum(&offsets, z, spec, 1.0)?;
    Ok(means::offset_mean(&offsets) - r.value)
}

/// `A_n(a) - G_n(a)` as `Re R(0)`.
pub fn am_gm_gap(a: &Sequence, spec: &QuadratureSpec) -> Result<f64> {
    Ok(remainder(a, 0.0, spec)?.value.re)
}

/// Direct and representation evaluation of `G_n(a + z)` side by side.
pub fn evaluate(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &QuadratureSpec,
) -> Result<EvalReport> {
    evaluate_scaled(a, z, spec, 1.0)
}

pub(crate) fn evaluate_scaled(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &QuadratureSpec,
    density_scale: f64,
) -> Result<EvalReport> {
    let z = z.into();
    let direct_value = principal_gmean(a, z)?;
    let r = remainder_scaled(a, z, spec, density_scale)?;
    let repr_value = arithmetic_mean(a) + z - r.value;
    Ok(EvalReport {
        direct_value,
        repr_value,
        abs_error: (direct_value - repr_value).norm(),
        quad_error_estimate: r.total_error_estimate,
        segments_evaluated: r.per_segment.len(),
    })
}
