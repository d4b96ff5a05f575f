//! Integral representation of the principal branch of the geometric mean.
//!
//! For a positive sequence `a = (a_1 <= ... <= a_n)` and `z` off the ray
//! `(-inf, -a_1]`, the principal branch of `G_n(a + z)` satisfies
//!
//! ```text
//! G_n(a+z) = A_n(a) + z - (1/pi) sum_{l=1}^{n-1} sin(l pi / n)
//!            * int_{a_l}^{a_{l+1}} prod_k |a_k - t|^{1/n} dt / (t + z)
//! ```
//!
//! Setting `z = 0` recovers the AM-GM inequality, since every density in the
//! sum is nonnegative.
//!
//! The crate is organized by layer:
//!
//! - [`means`]: direct complex evaluation of `A_n`, `G_n`, `G_n(a+z)`, `f_n`, `h_n`.
//! - [`boundary`]: branch-cut boundary values of `Im h_n` and the segment densities.
//! - [`quadrature`]: adaptive Gauss-Kronrod integration with a double-exponential
//!   endpoint transform.
//! - [`representation`]: the Stieltjes-type right-hand side and its corollaries.
//! - [`contour`]: numerical keyhole-contour evaluation of the Cauchy integral.
//! - [`harness`]: seeded instance generation, verification suites and CSV tables.

pub mod boundary;
mod cmath;
pub mod contour;
pub mod error;
pub mod harness;
pub mod means;
pub mod quadrature;
pub mod representation;
pub mod serde_complex;

pub use boundary::{
    boundary_im_closed, boundary_im_extrapolated, boundary_im_numeric, density_moment, segments,
    SegmentDensity,
};
pub use contour::{
    big_circle_term, cauchy_eval, line_collapse_check, small_circle_term, ContourBreakdown,
    ContourSpec,
};
pub use error::{Error, Result};
pub use means::{
    arithmetic_mean, f_n, geometric_mean, h_n, principal_gmean, ComplexPoint, Sequence,
};
pub use quadrature::{
    integrate, integrate_near_pole, EndpointTransform, QuadratureResult, QuadratureSpec,
};
pub use representation::{
    am_gm_gap, evaluate, gmean_via_representation, h_via_representation, remainder, EvalReport,
    RemainderValue,
};

pub use num_complex::Complex64;
