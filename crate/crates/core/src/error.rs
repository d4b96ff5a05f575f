use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("non-finite complex point {re}{im:+}i")]
    NonFinite { re: f64, im: f64 },

    /// `z` lies on the branch cut `(-inf, cut_end]`.
    #[error("z = {z} lies on the branch cut (-inf, {cut_end}]")]
    CutViolation { z: f64, cut_end: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),

    /// The subdivision budget ran out. The partial estimate is kept.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (value {}{:+}i, error estimate {error_estimate:e})",
        partial.re, partial.im
    )]
    QuadratureFailure {
        partial: Complex64,
        error_estimate: f64,
        subdivisions: usize,
    },

    #[error("contour geometry: {0}")]
    Geometry(String),
}
