//! Complex `log1p` / `expm1` with relative accuracy near zero.

use num_complex::Complex64;

/// Principal `Log(1 + u)`.
pub(crate) fn log1p(u: Complex64) -> Complex64 {
    let (x, y) = (u.re, u.im);
    let re = if x.abs() < 0.5 && y.abs() < 0.5 {
        // |1+u|^2 - 1 = x(x+2) + y^2
        0.5 * x.mul_add(x + 2.0, y * y).ln_1p()
    } else {
        (1.0 + x).hypot(y).ln()
    };
    Complex64::new(re, y.atan2(1.0 + x))
}

/// `exp(w) - 1`.
pub(crate) fn expm1(w: Complex64) -> Complex64 {
    let (p, q) = (w.re, w.im);
    let half = (0.5 * q).sin();
    Complex64::new(p.exp_m1() * q.cos() - 2.0 * half * half, p.exp() * q.sin())
}
