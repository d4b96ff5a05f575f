//! Boundary values of `h_n` on the branch cut and the segment densities.
//!
//! On the upper edge of the cut, `Im h_n(-t + i0)` equals
//! `prod_k |a_k - a_1 - t|^{1/n} * sin(l pi / n)` where `l` counts the
//! offsets `a_k - a_1` strictly left of `t`. It vanishes at the junctions
//! `t = a_{l+1} - a_1` (a zero factor) and beyond `a_n - a_1` (`sin(pi) = 0`).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::means::{self, Sequence};
use crate::quadrature::{integrate_real, QuadratureSpec};

/// One branch-cut segment `(a_l, a_{l+1})` of the representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentDensity<'a> {
    /// `l`, 1-based.
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    /// `sin(l pi / n) / pi`.
    pub weight: f64,
    points: &'a [f64],
}

impl SegmentDensity<'_> {
    /// `prod_k |a_k - t|^{1/n}`, evaluated in log space.
    pub fn density(&self, t: f64) -> f64 {
        log_space_root(self.points, t)
    }

    pub fn weighted_density(&self, t: f64) -> f64 {
        self.weight * self.density(t)
    }

    pub fn points(&self) -> &[f64] {
        self.points
    }
}

/// `prod_k |p_k - t|^{1/n}`; exactly zero when `t` hits a point.
pub(crate) fn log_space_root(points: &[f64], t: f64) -> f64 {
    let sum: f64 = points.iter().map(|p| (p - t).abs().ln()).sum();
    (sum / points.len() as f64).exp()
}

/// Segments of an ascending point list, zero-length segments dropped.
pub(crate) fn segments_of(points: &[f64]) -> Vec<SegmentDensity<'_>> {
    let n = points.len() as f64;
    points
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0] < w[1])
        .map(|(i, w)| {
            let index = i + 1;
            SegmentDensity {
                index,
                lo: w[0],
                hi: w[1],
                weight: (index as f64 * PI / n).sin() / PI,
                points,
            }
        })
        .collect()
}

/// The `n - 1` segments of the representation in ascending order, without
/// zero-length ones.
pub fn segments(a: &Sequence) -> Vec<SegmentDensity<'_>> {
    segments_of(a.values())
}

/// Closed form of `lim_{eps -> 0+} Im h_n(-t + i eps)` for `t > 0`.
pub fn boundary_im_closed(a: &Sequence, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "boundary value needs t > 0, got {t}"
        )));
    }
    Ok(closed_from_offsets(&a.offsets(), t))
}

pub(crate) fn closed_from_offsets(offsets: &[f64], t: f64) -> f64 {
    let n = offsets.len();
    if offsets.contains(&t) {
        return 0.0;
    }
    let left = offsets.iter().filter(|&&d| d < t).count();
    if left == n {
        return 0.0;
    }
    log_space_root(offsets, t) * (left as f64 * PI / n as f64).sin()
}

/// `Im h_n(-t + i eps)`, evaluated directly.
pub fn boundary_im_numeric(a: &Sequence, t: f64, eps: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!(
            "boundary value needs t > 0, got {t}"
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Domain(format!(
            "boundary offset needs eps > 0, got {eps}"
        )));
    }
    Ok(means::excess(&a.offsets(), Complex64::new(-t, eps)).im)
}

/// Two-point Richardson extrapolation in `eps` of [`boundary_im_numeric`],
/// assuming a leading error linear in `eps` (valid away from junctions).
pub fn boundary_im_extrapolated(a: &Sequence, t: f64, eps: f64) -> Result<f64> {
    let coarse = boundary_im_numeric(a, t, eps)?;
    let fine = boundary_im_numeric(a, t, 0.5 * eps)?;
    Ok(2.0 * fine - coarse)
}

/// `sum_l weight_l * int_{a_l}^{a_{l+1}} t^m density(t) dt`.
pub fn density_moment(a: &Sequence, order: u32, quad: &QuadratureSpec) -> Result<f64> {
    let mut total = 0.0;
    for seg in segments(a) {
        let r = integrate_real(
            |t| t.powi(order as i32) * seg.density(t),
            seg.lo,
            seg.hi,
            quad,
        )?;
        if !r.converged {
            return Err(Error::QuadratureFailure {
                partial: Complex64::new(total + seg.weight * r.value, 0.0),
                error_estimate: seg.weight * r.error_estimate,
                subdivisions: r.subdivisions_used,
            });
        }
        total += seg.weight * r.value;
    }
    Ok(total)
}

/// One row of the density export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensitySample {
    pub t: f64,
    pub density: f64,
    pub weighted_density: f64,
    pub segment_index: usize,
}

/// Samples each segment at `per_segment` interior midpoints.
pub fn sample_densities(a: &Sequence, per_segment: usize) -> Vec<DensitySample> {
    let mut out = Vec::new();
    for seg in segments(a) {
        let width = seg.hi - seg.lo;
        for j in 0..per_segment {
            let t = seg.lo + width * (j as f64 + 0.5) / per_segment as f64;
            let density = seg.density(t);
            out.push(DensitySample {
                t,
                density,
                weighted_density: seg.weight * density,
                segment_index: seg.index,
            });
        }
    }
    out
}
