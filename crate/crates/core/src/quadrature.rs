//! Adaptive one-dimensional quadrature.
//!
//! The integration range is cut into pieces. Each piece that touches an
//! endpoint of the original range is mapped through the tanh-sinh
//! (double-exponential) substitution, which turns algebraic endpoint behavior
//! such as `|t - lo|^{1/n}` into a smooth, double-exponentially decaying
//! integrand on a truncated `s` interval. All pieces then feed one global
//! adaptive Gauss-Kronrod (G7/K15) refinement loop that always bisects the
//! panel with the largest error estimate.
//!
//! Complex integrands are integrated as two coupled real integrals sharing
//! panels; the panel error is the modulus of the complex Kronrod-Gauss
//! difference.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointTransform {
    None,
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_transform: EndpointTransform,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            endpoint_transform: EndpointTransform::DoubleExponential,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Result<Self> {
        let spec = Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidSpec(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// `max(abs_tol, rel_tol * |value|)`.
    pub fn tolerance_for(&self, magnitude: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * magnitude)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult<T> {
    pub value: T,
    pub error_estimate: f64,
    pub subdivisions_used: usize,
    pub converged: bool,
}

impl QuadratureResult<Complex64> {
    /// Turns a non-converged result into [`Error::QuadratureFailure`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureFailure {
                partial: self.value,
                error_estimate: self.error_estimate,
                subdivisions: self.subdivisions_used,
            })
        }
    }

    pub fn re(self) -> QuadratureResult<f64> {
        QuadratureResult {
            value: self.value.re,
            error_estimate: self.error_estimate,
            subdivisions_used: self.subdivisions_used,
            converged: self.converged,
        }
    }
}

// G7/K15 abscissae and weights on [-1, 1]; odd indices of XGK are Kronrod-only.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Half-width of the truncated tanh-sinh parameter range. At `|s| = 3.5` the
/// substitution weight is below `1e-20` of the interval length.
const DE_HALF_RANGE: f64 = 3.5;

/// Initial panels per double-exponential piece.
const DE_INITIAL_PANELS: usize = 4;

/// Geometric grading levels on each side of a near pole.
const POLE_GRADING_LEVELS: i32 = 4;
const POLE_GRADING_RATIO: f64 = 8.0;

/// One application of the K15 rule and its embedded G7 rule on `[a, b]`.
///
/// Returns `(kronrod, gauss, integral of |f|)`.
pub fn kronrod15<F>(f: &F, a: f64, b: f64) -> (Complex64, Complex64, f64)
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        let pair = f1 + f2;
        kronrod += pair * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, gauss * half, abs_sum * half.abs())
}

/// A sub-interval `[lo, hi]` of the original range and its parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Piece {
    lo: f64,
    hi: f64,
    transform: EndpointTransform,
}

impl Piece {
    fn param_range(&self) -> (f64, f64) {
        match self.transform {
            EndpointTransform::None => (self.lo, self.hi),
            EndpointTransform::DoubleExponential => (-DE_HALF_RANGE, DE_HALF_RANGE),
        }
    }

    /// Maps a parameter value to `(t, dt/ds)`.
    fn map(&self, s: f64) -> (f64, f64) {
        match self.transform {
            EndpointTransform::None => (s, 1.0),
            EndpointTransform::DoubleExponential => {
                let half = 0.5 * (self.hi - self.lo);
                let u = FRAC_PI_2 * s.sinh();
                // 1 - tanh|u|, computed without cancellation.
                let e = (2.0 * u.abs()).exp();
                let gap = 2.0 / (1.0 + e);
                let t = if s < 0.0 {
                    self.lo + half * gap
                } else {
                    self.hi - half * gap
                };
                let cosh_u = u.cosh();
                let jac = half * FRAC_PI_2 * s.cosh() / (cosh_u * cosh_u);
                (t.clamp(self.lo, self.hi), jac)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    piece: usize,
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Max-heap on error; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.piece.cmp(&self.piece))
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn evaluate_panel<F>(f: &F, pieces: &[Piece], piece: usize, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let p = pieces[piece];
    let g = |s: f64| {
        let (t, jac) = p.map(s);
        if jac == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            f(t) * jac
        }
    };
    let (kronrod, gauss, abs_int) = kronrod15(&g, a, b);
    let raw = (kronrod - gauss).norm();
    let error = if kronrod.re.is_finite() && kronrod.im.is_finite() {
        raw.max(50.0 * f64::EPSILON * abs_int)
    } else {
        f64::INFINITY
    };
    Panel {
        piece,
        a,
        b,
        value: kronrod,
        error,
    }
}

fn integrate_pieces<F>(
    f: &F,
    pieces: &[Piece],
    spec: &QuadratureSpec,
) -> QuadratureResult<Complex64>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let mut heap = BinaryHeap::new();
    for (idx, piece) in pieces.iter().enumerate() {
        let (s0, s1) = piece.param_range();
        let parts = match piece.transform {
            EndpointTransform::None => 1,
            EndpointTransform::DoubleExponential => DE_INITIAL_PANELS,
        };
        let width = (s1 - s0) / parts as f64;
        for k in 0..parts {
            let a = s0 + width * k as f64;
            let b = if k + 1 == parts { s1 } else { a + width };
            heap.push(evaluate_panel(f, pieces, idx, a, b));
        }
    }

    let totals = |heap: &BinaryHeap<Panel>| {
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by(|x, y| x.piece.cmp(&y.piece).then(x.a.total_cmp(&y.a)));
        panels
            .iter()
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| {
                (v + p.value, e + p.error)
            })
    };

    let (mut value, mut error) = totals(&heap);
    let mut subdivisions = 0;
    while error > spec.tolerance_for(value.norm()) && subdivisions < spec.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) || !worst.error.is_finite() {
            // Panel cannot be split further.
            heap.push(worst);
            break;
        }
        let left = evaluate_panel(f, pieces, worst.piece, worst.a, mid);
        let right = evaluate_panel(f, pieces, worst.piece, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        subdivisions += 1;
    }

    // Fresh, position-ordered reduction for a deterministic final sum.
    let (value, error) = totals(&heap);
    QuadratureResult {
        value,
        error_estimate: error,
        subdivisions_used: subdivisions,
        converged: error <= spec.tolerance_for(value.norm()),
    }
}

fn check_range(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Domain(format!(
            "integration range [{lo}, {hi}] is invalid"
        )));
    }
    Ok(())
}

fn zero_result() -> QuadratureResult<Complex64> {
    QuadratureResult {
        value: Complex64::new(0.0, 0.0),
        error_estimate: 0.0,
        subdivisions_used: 0,
        converged: true,
    }
}

/// Integrates `f` over `[lo, hi]`.
///
/// A non-converged result is returned as `Ok` with `converged == false`; use
/// [`QuadratureResult::require_converged`] to turn it into an error.
pub fn integrate<F>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    check_range(lo, hi)?;
    if lo == hi {
        return Ok(zero_result());
    }
    let piece = Piece {
        lo,
        hi,
        transform: spec.endpoint_transform,
    };
    Ok(integrate_pieces(&f, &[piece], spec))
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<f64>>
where
    F: Fn(f64) -> f64,
{
    integrate(|t| Complex64::new(f(t), 0.0), lo, hi, spec).map(QuadratureResult::re)
}

/// Integrates `f` over `[lo, hi]` when `f` has a sharp feature (typically
/// `1/(t + z)` with small `|im z|`) at real coordinate `pole`.
///
/// If `pole` lies in `[lo, hi]`, the range is split there and each side is
/// graded geometrically toward the pole. Pieces touching `lo` or `hi` keep
/// the configured endpoint transform; interior pieces use plain bisection.
/// Otherwise this is exactly [`integrate`].
pub fn integrate_near_pole<F>(
    f: F,
    lo: f64,
    hi: f64,
    pole: f64,
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    if !(lo <= pole && pole <= hi) {
        return integrate(f, lo, hi, spec);
    }
    spec.validate()?;
    check_range(lo, hi)?;
    if lo == hi {
        return Ok(zero_result());
    }
    let mut cuts = vec![lo];
    if pole > lo {
        let side = pole - lo;
        cuts.extend((1..=POLE_GRADING_LEVELS).map(|k| pole - side * POLE_GRADING_RATIO.powi(-k)));
        cuts.push(pole);
    }
    if pole < hi {
        let side = hi - pole;
        cuts.extend(
            (1..=POLE_GRADING_LEVELS)
                .rev()
                .map(|k| pole + side * POLE_GRADING_RATIO.powi(-k)),
        );
    }
    cuts.push(hi);
    cuts.dedup();
    Ok(integrate_pieces(
        &f,
        &pieces_from_cuts(&cuts, lo, hi, spec.endpoint_transform),
        spec,
    ))
}

/// Integrates over `[lo, hi]` split at the interior `breaks`, applying the
/// endpoint transform on every piece so that nodes cluster toward each break.
pub(crate) fn integrate_with_breaks<F>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadratureResult<Complex64>>
where
    F: Fn(f64) -> Complex64,
{
    spec.validate()?;
    check_range(lo, hi)?;
    if lo == hi {
        return Ok(zero_result());
    }
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|b| lo < *b && *b < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    cuts.extend(inner);
    cuts.push(hi);
    cuts.dedup();
    let pieces: Vec<Piece> = cuts
        .windows(2)
        .map(|w| Piece {
            lo: w[0],
            hi: w[1],
            transform: spec.endpoint_transform,
        })
        .collect();
    Ok(integrate_pieces(&f, &pieces, spec))
}

fn pieces_from_cuts(cuts: &[f64], lo: f64, hi: f64, transform: EndpointTransform) -> Vec<Piece> {
    cuts.windows(2)
        .filter(|w| w[0] < w[1])
        .map(|w| Piece {
            lo: w[0],
            hi: w[1],
            transform: if w[0] == lo || w[1] == hi {
                transform
            } else {
                EndpointTransform::None
            },
        })
        .collect()
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let step = p / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre rule over `[a, b]` with `panels` equal panels of
/// `order` nodes each.
pub(crate) fn composite_gauss<F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let (nodes, weights) = gauss_legendre(order);
    let width = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + width * p as f64;
        let center = lo + 0.5 * width;
        let mut panel = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(&weights) {
            panel += f(center + 0.5 * width * x) * *w;
        }
        total += panel * (0.5 * width);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_integrand() {
        let r = integrate(|_| c(0.0, 0.0), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
        assert_eq!(r.error_estimate, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn semicircle_area() {
        let f = |t: f64| ((t - 1.0) * (2.0 - t)).max(0.0).sqrt();
        let r = integrate_real(f, 1.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert!(r.converged);
        assert!((r.value - PI / 8.0).abs() < 1e-10, "{}", r.value - PI / 8.0);
    }

    /// Midpoint rule with 10^7 points; the integrand's endpoint behavior
    /// limits it to about 1e-10.
    fn midpoint(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..n).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
    }

    #[test]
    fn semicircle_over_t() {
        let f = |t: f64| ((t - 1.0) * (2.0 - t)).max(0.0).sqrt() / t;
        let want = PI * (1.5 - std::f64::consts::SQRT_2);
        let brute = midpoint(f, 1.0, 2.0, 10_000_000);
        assert!((brute - want).abs() < 1e-9, "{}", brute - want);
        let r = integrate_real(f, 1.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert!((r.value - want).abs() < 1e-9);
    }

    #[test]
    fn pole_outside_range_matches_integrate_bitwise() {
        let z = c(0.5, 0.0);
        let f = |t: f64| (z + t).inv();
        let spec = QuadratureSpec::default();
        let plain = integrate(f, 1.0, 2.0, &spec).unwrap();
        let near = integrate_near_pole(f, 1.0, 2.0, -0.5, &spec).unwrap();
        assert_eq!(plain, near);
        assert!((near.value.re - (2.5f64 / 1.5).ln()).abs() < 1e-12);
    }

    #[test]
    fn near_pole_log_closed_form() {
        let z = c(-1.5, 1e-3);
        let f = |t: f64| (z + t).inv();
        let r = integrate_near_pole(f, 1.0, 2.0, 1.5, &QuadratureSpec::default()).unwrap();
        let want = (z + 2.0).ln() - (z + 1.0).ln();
        assert!(r.converged);
        assert!(
            (r.value - want).norm() < 1e-10,
            "{}",
            (r.value - want).norm()
        );
        assert!((r.value.im.abs() - PI).abs() < 5e-3);
    }

    #[test]
    fn near_pole_tiny_imaginary_part() {
        let z = c(-1.3, 1e-7);
        let f = |t: f64| ((t - 1.0) * (2.0 - t)).max(0.0).sqrt() * (z + t).inv();
        let spec = QuadratureSpec::default();
        let r = integrate_near_pole(f, 1.0, 2.0, 1.3, &spec).unwrap();
        assert!(r.converged, "{r:?}");
        // Sokhotski-Plemelj: Im -> -pi * density(1.3).
        let density = (0.3f64 * 0.7).sqrt();
        assert!((r.value.im + PI * density).abs() < 1e-5);
    }

    #[test]
    fn kronrod_exact_on_polynomials() {
        for k in 0..=22 {
            let (kr, _, _) = kronrod15(&|t: f64| c(t.powi(k), 0.0), 0.0, 1.0);
            let want = 1.0 / (k as f64 + 1.0);
            assert!((kr.re - want).abs() / want < 1e-13, "degree {k}");
        }
        // G7 alone is exact to degree 13.
        let (_, g, _) = kronrod15(&|t: f64| c(t.powi(13), 0.0), 0.0, 1.0);
        assert!((g.re - 1.0 / 14.0).abs() < 1e-14);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 1,
            endpoint_transform: EndpointTransform::None,
            ..QuadratureSpec::default()
        };
        let r = integrate(|t| c((50.0 * t).sin() * t.sqrt(), 0.0), 0.0, 3.0, &spec).unwrap();
        assert!(!r.converged);
        assert_eq!(r.subdivisions_used, 1);
        assert!(matches!(
            r.require_converged(),
            Err(Error::QuadratureFailure { .. })
        ));
    }

    #[test]
    fn without_transform_still_handles_sqrt_endpoint() {
        let spec = QuadratureSpec {
            endpoint_transform: EndpointTransform::None,
            ..QuadratureSpec::default()
        };
        let r = integrate_real(|t| t.max(0.0).sqrt(), 0.0, 1.0, &spec).unwrap();
        assert!(r.converged);
        assert!((r.value - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn invalid_inputs() {
        let spec = QuadratureSpec::default();
        assert!(integrate(|_| c(1.0, 0.0), 1.0, 0.0, &spec).is_err());
        assert!(QuadratureSpec::with_tolerances(0.0, 1e-3).is_err());
        assert!(QuadratureSpec::with_tolerances(1e-3, -1.0).is_err());
        let r = integrate(|_| c(1.0, 0.0), 2.0, 2.0, &spec).unwrap();
        assert_eq!(r.value, c(0.0, 0.0));
    }

    #[test]
    fn gauss_legendre_nodes() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // Exact for x^30.
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        let v = composite_gauss(|t| c(t.cos(), 0.0), 0.0, PI / 2.0, 4, 8);
        assert!((v.re - 1.0).abs() < 1e-14);
    }
}
