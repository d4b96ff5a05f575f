//! Arithmetic and geometric means, and the principal branch of `G_n(a + z)`.
//!
//! The principal branch is the exponential of the average of the principal
//! logarithms of the factors `a_k + z`. Internally every evaluation is done
//! relative to the smallest element: with `w = z + a_1` and offsets
//! `d_k = a_k - a_1 >= 0`,
//!
//! ```text
//! G_n(a + z) = w * exp(mean_k Log(1 + d_k / w))
//! ```
//!
//! Both `w` and `w + d_k` lie in the same closed half-plane, so the argument
//! of `1 + d_k / w` is the exact difference of arguments and no `2 pi` wrap
//! occurs. The form is exact for constant sequences and keeps `G - z`
//! accurate for large `|z|`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cmath;
use crate::error::{Error, Result};

/// A positive sequence, sorted ascending on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sequence {
    values: Vec<f64>,
}

impl Sequence {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("sequence is empty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(Error::InvalidSequence(format!(
                "entries must be finite and positive, got {bad}"
            )));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn constant(value: f64, n: usize) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `a_1`.
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    /// `a_n`.
    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn is_constant(&self) -> bool {
        self.min() == self.max()
    }

    /// The shifted sequence `a - a_1`; its first entry is zero.
    pub fn offsets(&self) -> Vec<f64> {
        let a1 = self.min();
        self.values.iter().map(|v| v - a1).collect()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * factor).collect())
    }
}

impl From<Sequence> for Vec<f64> {
    fn from(s: Sequence) -> Self {
        s.values
    }
}

impl TryFrom<Vec<f64>> for Sequence {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl FromStr for Sequence {
    type Err = Error;

    /// Comma-separated positive decimals, e.g. `"3,1,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|part| {
                part.trim().parse::<f64>().map_err(|_| {
                    Error::InvalidSequence(format!("cannot parse {:?} as a number", part.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A finite complex number. Accepts `a+bi` syntax when parsed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint(Complex64);

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::try_from(Complex64::new(re, im))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl TryFrom<Complex64> for ComplexPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        if z.re.is_finite() && z.im.is_finite() {
            Ok(Self(z))
        } else {
            Err(Error::NonFinite { re: z.re, im: z.im })
        }
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.0
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.0.re, self.0.im)
    }
}

impl FromStr for ComplexPoint {
    type Err = Error;

    /// Accepts `x`, `x+yi`, `x-yi`, `yi`, `i`, `-i` with optional exponents
    /// and no interior whitespace.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse {s:?} as a complex number"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix(['i', 'j']) else {
            let re: f64 = s.parse().map_err(|_| bad())?;
            return Self::new(re, 0.0);
        };
        // Split at the last sign that is not the leading sign and not part of an exponent.
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&i| {
            (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E')
        });
        let imag_part = |t: &str| -> Result<f64> {
            match t {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => t.parse().map_err(|_| bad()),
            }
        };
        let (re, im) = match split {
            Some(i) => (
                body[..i].parse().map_err(|_| bad())?,
                imag_part(&body[i..])?,
            ),
            None => (0.0, imag_part(body)?),
        };
        Self::new(re, im)
    }
}

pub(crate) fn check_finite(z: Complex64) -> Result<()> {
    ComplexPoint::try_from(z).map(|_| ())
}

/// Rejects `z` on the ray `(-inf, cut_end]`.
pub fn check_off_cut(z: Complex64, cut_end: f64) -> Result<()> {
    check_finite(z)?;
    if z.im == 0.0 && z.re <= cut_end {
        return Err(Error::CutViolation { z: z.re, cut_end });
    }
    Ok(())
}

/// `mean_k Log(1 + d_k / w)`.
fn mean_log_ratio(offsets: &[f64], w: Complex64) -> Complex64 {
    let winv = w.inv();
    let sum: Complex64 = offsets.iter().map(|&d| cmath::log1p(winv * d)).sum();
    sum / offsets.len() as f64
}

/// `G_n(d + w) - w` for offsets `d` (with `d_1 = 0`) and `w` off `(-inf, 0]`.
///
/// This is `h_n(w)`. No domain checks.
pub(crate) fn excess(offsets: &[f64], w: Complex64) -> Complex64 {
    if offsets.iter().all(|&d| d == 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    w * cmath::expm1(mean_log_ratio(offsets, w))
}

/// Mean of the offsets, `A_n(a - a_1)`.
pub(crate) fn offset_mean(offsets: &[f64]) -> f64 {
    offsets.iter().sum::<f64>() / offsets.len() as f64
}

/// `A_n(a) = (1/n) sum a_k`.
pub fn arithmetic_mean(a: &Sequence) -> f64 {
    let mean = a.min() + offset_mean(&a.offsets());
    mean.clamp(a.min(), a.max())
}

/// `G_n(a) = (prod a_k)^{1/n}`, evaluated in log space.
pub fn geometric_mean(a: &Sequence) -> f64 {
    let a1 = a.min();
    let mean_log = a
        .values()
        .iter()
        .map(|v| ((v - a1) / a1).ln_1p())
        .sum::<f64>()
        / a.len() as f64;
    (a1 * mean_log.exp()).clamp(a.min(), a.max())
}

/// Principal branch of `G_n(a + z)` for `z` off `(-inf, -a_1]`.
pub fn principal_gmean(a: &Sequence, z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    check_off_cut(z, -a.min())?;
    let w = z + a.min();
    let offsets = a.offsets();
    if a.is_constant() {
        return Ok(w);
    }
    Ok(w * mean_log_ratio(&offsets, w).exp())
}

/// `f_n(z) = G_n(a + z) - z`.
pub fn f_n(a: &Sequence, z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    check_off_cut(z, -a.min())?;
    Ok(excess(&a.offsets(), z + a.min()) + a.min())
}

/// `f_n(z) - A_n(a)`, without the cancellation of forming both terms.
pub fn f_n_minus_mean(a: &Sequence, z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    check_off_cut(z, -a.min())?;
    let offsets = a.offsets();
    Ok(excess(&offsets, z + a.min()) - offset_mean(&offsets))
}

/// `h_n(z) = G_n(a - a_1 + z) - z` for `z` off `(-inf, 0]`.
pub fn h_n(a: &Sequence, z: impl Into<Complex64>) -> Result<Complex64> {
    let z = z.into();
    check_off_cut(z, 0.0)?;
    Ok(excess(&a.offsets(), z))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[f64]) -> Sequence {
        Sequence::new(v.to_vec()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sequence_validation() {
        assert!(Sequence::new(vec![]).is_err());
        assert!(Sequence::new(vec![1.0, 0.0]).is_err());
        assert!(Sequence::new(vec![1.0, -2.0]).is_err());
        assert!(Sequence::new(vec![1.0, f64::NAN]).is_err());
        assert!(Sequence::new(vec![f64::INFINITY]).is_err());
        assert_eq!(seq(&[3.0, 1.0, 2.0]).values(), &[1.0, 2.0, 3.0]);
        assert_eq!(
            "3, 1,2".parse::<Sequence>().unwrap().values(),
            &[1.0, 2.0, 3.0]
        );
        assert!("1,x".parse::<Sequence>().is_err());
    }

    #[test]
    fn complex_point_parsing() {
        let p = |s: &str| s.parse::<ComplexPoint>().map(ComplexPoint::value);
        assert_eq!(p("0").unwrap(), c(0.0, 0.0));
        assert_eq!(p("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(p("1+1i").unwrap(), c(1.0, 1.0));
        assert_eq!(p("2-3i").unwrap(), c(2.0, -3.0));
        assert_eq!(p("-2.5e-1+4e2i").unwrap(), c(-0.25, 400.0));
        assert_eq!(p("1e-3-2E+1i").unwrap(), c(1e-3, -20.0));
        assert_eq!(p("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(p("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(p("i").unwrap(), c(0.0, 1.0));
        assert_eq!(p("1-i").unwrap(), c(1.0, -1.0));
        assert!(p("").is_err());
        assert!(p("1+").is_err());
        assert!(p("abc").is_err());
        assert!(p("nan").is_err());
    }

    #[test]
    fn arithmetic_mean_examples() {
        assert_eq!(arithmetic_mean(&seq(&[1.0, 2.0, 3.0])), 2.0);
        assert_eq!(arithmetic_mean(&seq(&[0.1; 3])), 0.1);
        assert_eq!(arithmetic_mean(&seq(&[7.25; 5])), 7.25);
        assert!((arithmetic_mean(&seq(&[0.1, 10.0])) - 5.05).abs() < 1e-15);
    }

    #[test]
    fn geometric_mean_examples() {
        assert_eq!(geometric_mean(&seq(&[2.0, 8.0])), 4.0);
        assert_eq!(geometric_mean(&seq(&[0.3; 4])), 0.3);
        // exp((ln 1 + ln 2 + ln 3)/3) = 6^(1/3)
        let want = 1.817_120_592_832_139_7;
        assert!((geometric_mean(&seq(&[1.0, 2.0, 3.0])) - want).abs() < 1e-15);
    }

    #[test]
    fn principal_gmean_examples() {
        let g = principal_gmean(&seq(&[1.0, 2.0, 3.0]), 0.0).unwrap();
        assert!((g.re - 1.817_120_592_832_139_7).abs() < 1e-15);
        assert_eq!(g.im, 0.0);

        let z = c(-3.0, 0.7);
        assert_eq!(principal_gmean(&seq(&[2.5; 4]), z).unwrap(), z + 2.5);

        // sqrt((1+i)(2+i)) = sqrt(1+3i), principal root via polar form.
        let g = principal_gmean(&seq(&[1.0, 2.0]), c(0.0, 1.0)).unwrap();
        let r = 10f64.sqrt().sqrt();
        let half_arg = 3f64.atan2(1.0) / 2.0;
        let want = c(r * half_arg.cos(), r * half_arg.sin());
        assert!((g - want).norm() < 1e-15);
    }

    #[test]
    fn cut_is_rejected() {
        let a = seq(&[1.0, 2.0]);
        assert!(matches!(
            principal_gmean(&a, -1.0),
            Err(Error::CutViolation { cut_end, .. }) if cut_end == -1.0
        ));
        assert!(principal_gmean(&a, -5.0).is_err());
        assert!(principal_gmean(&a, c(-5.0, -0.0)).is_err());
        assert!(principal_gmean(&a, c(-5.0, 1e-300)).is_ok());
        assert!(principal_gmean(&a, -0.999).is_ok());
        assert!(h_n(&a, 0.0).is_err());
        assert!(h_n(&a, -0.5).is_err());
        assert!(h_n(&a, 1e-300).is_ok());
        assert!(f_n(&a, c(f64::NAN, 1.0)).is_err());
    }

    #[test]
    fn f_n_examples() {
        let a = seq(&[4.0; 3]);
        assert_eq!(f_n(&a, c(-7.0, 2.0)).unwrap(), c(4.0, 0.0));
        let f = f_n(&seq(&[1.0, 2.0, 3.0]), 1e6).unwrap();
        assert!((f.re - 2.0).abs() <= 5e-7);
        let f = f_n(&seq(&[1.0, 2.0]), 0.0).unwrap();
        assert!((f.re - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn h_n_examples() {
        assert_eq!(h_n(&seq(&[3.0; 2]), c(1.0, 1.0)).unwrap(), c(0.0, 0.0));
        let h = h_n(&seq(&[1.0, 3.0]), c(-1.0, 1e-6)).unwrap();
        assert!((h - c(1.0, 1.0)).norm() < 1e-5, "{h}");
        let h = h_n(&seq(&[1.0, 2.0]), 1.0).unwrap();
        assert!((h.re - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn h_n_is_shifted_f_n() {
        let a = seq(&[0.5, 1.25, 4.0, 4.0, 9.0]);
        for z in [c(0.3, 0.0), c(-0.2, 2.0), c(5.0, -3.0), c(-20.0, 0.1)] {
            let h = h_n(&a, z).unwrap();
            let f = f_n(&a, z - a.min()).unwrap() - a.min();
            assert!((h - f).norm() < 1e-12 * (1.0 + h.norm()));
        }
    }

    #[test]
    fn schwarz_reflection_is_bitwise() {
        let a = seq(&[0.2, 1.0, 7.0]);
        for z in [c(0.4, 1.3), c(-2.0, 0.01), c(30.0, -4.0)] {
            assert_eq!(h_n(&a, z.conj()).unwrap(), h_n(&a, z).unwrap().conj());
        }
    }

    #[test]
    fn single_element_sequence() {
        let a = seq(&[2.5]);
        assert_eq!(arithmetic_mean(&a), 2.5);
        assert_eq!(geometric_mean(&a), 2.5);
        assert_eq!(f_n(&a, c(1.0, -1.0)).unwrap(), c(2.5, 0.0));
    }
}
