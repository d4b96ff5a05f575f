//! Keyhole-contour evaluation of `h_n` by Cauchy's integral formula.
//!
//! The contour `C(eps, r)` runs counter-clockwise along the outer circle of
//! radius `r`, right along the upper line `x + i eps` (`-r <= x <= 0`),
//! clockwise around the small half circle `eps e^{i theta}`
//! (`theta` from `pi/2` to `-pi/2`), and back left along the lower line
//! `x - i eps`. The lines stop at `x = -r` and the outer arc covers the full
//! angle range `(-pi, pi)`; the vertical gap of height `2 eps` at `x = -r`
//! contributes `O(eps / r)` and is left out.
//!
//! This module is diagnostic only. Arcs use composite Gauss-Legendre panels
//! in `theta`; lines use the adaptive engine split at the junctions
//! `-(a_k - a_1)` where `h_n(x +- i eps)` has `eps`-wide features.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::means::{self, check_off_cut, Sequence};
use crate::quadrature::{composite_gauss, integrate_with_breaks, QuadratureSpec};
use crate::representation::stieltjes_sum;

const ARC_ORDER: usize = 16;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    /// Small half-circle radius and line offset.
    pub eps: f64,
    /// Outer radius.
    pub r: f64,
    /// Gauss nodes per arc (rounded down to whole 16-point panels).
    pub points_per_arc: usize,
    /// Panel budget for each line integral.
    pub points_per_line: usize,
}

impl ContourSpec {
    pub fn new(eps: f64, r: f64) -> Result<Self> {
        let spec = Self {
            eps,
            r,
            points_per_arc: 512,
            points_per_line: 4096,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps > 0.0 && self.eps < self.r && self.r.is_finite()) {
            return Err(Error::Geometry(format!(
                "need 0 < eps < r, got eps = {}, r = {}",
                self.eps, self.r
            )));
        }
        if self.points_per_arc < 8 || self.points_per_line < 8 {
            return Err(Error::Geometry("point counts must be at least 8".into()));
        }
        Ok(())
    }

    fn line_quadrature(&self) -> QuadratureSpec {
        QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: self.points_per_line,
            ..QuadratureSpec::default()
        }
    }
}

/// The four summands of the Cauchy integral and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourBreakdown {
    #[serde(with = "crate::serde_complex")]
    pub small_arc: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub outer_arc: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub upper_line: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub lower_line: Complex64,
    #[serde(with = "crate::serde_complex")]
    pub total: Complex64,
}

fn arc_panels(points: usize) -> usize {
    (points / ARC_ORDER).max(1)
}

fn small_arc(offsets: &[f64], z: Complex64, eps: f64, points: usize) -> Complex64 {
    let integrand = |theta: f64| {
        let w = Complex64::from_polar(eps, theta);
        I * w * means::excess(offsets, w) / (w - z)
    };
    // theta runs from pi/2 down to -pi/2.
    -composite_gauss(
        integrand,
        -PI / 2.0,
        PI / 2.0,
        arc_panels(points),
        ARC_ORDER,
    ) / (2.0 * PI * I)
}

fn outer_arc(offsets: &[f64], z: Complex64, r: f64, points: usize) -> Complex64 {
    let integrand = |theta: f64| {
        let w = Complex64::from_polar(r, theta);
        I * w * means::excess(offsets, w) / (w - z)
    };
    composite_gauss(integrand, -PI, PI, arc_panels(points), ARC_ORDER) / (2.0 * PI * I)
}

/// `(h(x + i eps)/(x + i eps - z), h(x - i eps)/(x - i eps - z))`.
pub fn line_integrands(a: &Sequence, z: Complex64, eps: f64, x: f64) -> (Complex64, Complex64) {
    line_pair(&a.offsets(), z, eps, x)
}

fn line_pair(offsets: &[f64], z: Complex64, eps: f64, x: f64) -> (Complex64, Complex64) {
    let up = Complex64::new(x, eps);
    let down = Complex64::new(x, -eps);
    (
        means::excess(offsets, up) / (up - z),
        means::excess(offsets, down) / (down - z),
    )
}

fn lines(
    offsets: &[f64],
    z: Complex64,
    eps: f64,
    r: f64,
    quad: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    let mut breaks: Vec<f64> = offsets.iter().map(|d| -d).collect();
    breaks.push(z.re);
    let upper = integrate_with_breaks(
        |x| means::excess(offsets, Complex64::new(x, eps)) / (Complex64::new(x, eps) - z),
        -r,
        0.0,
        &breaks,
        quad,
    )?
    .require_converged()?;
    let lower = integrate_with_breaks(
        |x| means::excess(offsets, Complex64::new(x, -eps)) / (Complex64::new(x, -eps) - z),
        -r,
        0.0,
        &breaks,
        quad,
    )?
    .require_converged()?;
    let scale = 2.0 * PI * I;
    Ok((upper.value / scale, -lower.value / scale))
}

fn distance_to_segment(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let s = ((z - p).re * d.re + (z - p).im * d.im) / d.norm_sqr();
    (z - (p + d * s.clamp(0.0, 1.0))).norm()
}

fn check_geometry(z: Complex64, eps: f64, r: f64) -> Result<()> {
    check_off_cut(z, 0.0).map_err(|e| Error::Geometry(e.to_string()))?;
    let modulus = z.norm();
    if !(eps < modulus && modulus < r) {
        return Err(Error::Geometry(format!(
            "need eps < |z| < r, got eps = {eps}, |z| = {modulus}, r = {r}"
        )));
    }
    let upper = distance_to_segment(z, Complex64::new(-r, eps), Complex64::new(0.0, eps));
    let lower = distance_to_segment(z, Complex64::new(-r, -eps), Complex64::new(0.0, -eps));
    let arc = if z.re >= 0.0 {
        (modulus - eps).abs()
    } else {
        (z - Complex64::new(0.0, eps))
            .norm()
            .min((z + Complex64::new(0.0, eps)).norm())
    };
    let dist = upper.min(lower).min(arc).min(r - modulus);
    if dist <= 0.5 * eps {
        return Err(Error::Geometry(format!(
            "z is {dist:e} from the contour, need more than eps/2 = {:e}",
            0.5 * eps
        )));
    }
    Ok(())
}

/// Cauchy integral `(1/2 pi i) oint h_n(w)/(w - z) dw` over `C(eps, r)`,
/// piece by piece.
pub fn cauchy_eval(
    a: &Sequence,
    z: impl Into<Complex64>,
    spec: &ContourSpec,
) -> Result<ContourBreakdown> {
    let z = z.into();
    spec.validate()?;
    check_geometry(z, spec.eps, spec.r)?;
    let offsets = a.offsets();
    let small = small_arc(&offsets, z, spec.eps, spec.points_per_arc);
    let outer = outer_arc(&offsets, z, spec.r, spec.points_per_arc);
    let (upper, lower) = lines(&offsets, z, spec.eps, spec.r, &spec.line_quadrature())?;
    Ok(ContourBreakdown {
        small_arc: small,
        outer_arc: outer,
        upper_line: upper,
        lower_line: lower,
        total: small + outer + upper + lower,
    })
}

/// The small half-circle summand; vanishes as `eps -> 0+`.
pub fn small_circle_term(a: &Sequence, z: impl Into<Complex64>, eps: f64) -> Result<Complex64> {
    let z = z.into();
    check_off_cut(z, 0.0)?;
    if !(eps > 0.0 && eps < z.norm()) {
        return Err(Error::Geometry(format!(
            "need 0 < eps < |z|, got eps = {eps}"
        )));
    }
    Ok(small_arc(&a.offsets(), z, eps, 512))
}

/// The full outer-circle summand; tends to `A_n(a - a_1)` as `r -> inf`.
pub fn big_circle_term(a: &Sequence, z: impl Into<Complex64>, r: f64) -> Result<Complex64> {
    let z = z.into();
    means::check_finite(z)?;
    if !(r > z.norm() && r > a.max() && r.is_finite()) {
        return Err(Error::Geometry(format!(
            "need r > |z| and r > a_n, got r = {r}, |z| = {}, a_n = {}",
            z.norm(),
            a.max()
        )));
    }
    Ok(outer_arc(&a.offsets(), z, r, 512))
}

/// Returns `(upper + lower line summands, collapsed boundary-density form)`.
///
/// The collapsed form is `(1/2 pi i)(-2i) int_0^r Im h_n(-t + i0)/(t + z) dt`.
pub fn line_collapse_check(
    a: &Sequence,
    z: impl Into<Complex64>,
    eps: f64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    let z = z.into();
    ContourSpec::new(eps, r)?;
    check_geometry(z, eps, r)?;
    let offsets = a.offsets();
    let (upper, lower) = lines(&offsets, z, eps, r, spec)?;
    // The boundary density vanishes beyond a_n - a_1.
    let collapsed = if r >= offsets[offsets.len() - 1] {
        -stieltjes_sum(&offsets, z, spec, 1.0)?.value
    } else {
        truncated_collapse(&offsets, z, r, spec)?
    };
    Ok((upper + lower, collapsed))
}

fn truncated_collapse(
    offsets: &[f64],
    z: Complex64,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64> {
    let breaks: Vec<f64> = offsets.to_vec();
    let r = integrate_with_breaks(
        |t| (z + t).inv() * crate::boundary::closed_from_offsets(offsets, t),
        0.0,
        r,
        &breaks,
        spec,
    )?
    .require_converged()?;
    Ok(-r.value / PI)
}
