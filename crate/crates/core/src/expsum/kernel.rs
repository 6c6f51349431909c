use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// `E_y(β) = Σ_{1<=n<=y} e(βn)` in closed form.
///
/// β is first reduced to `[-1/2, 1/2)`; then
/// `E_y(β) = e((y+1)β/2) sin(πyβ) / sin(πβ)`, with `E_y(k) = y` for integers.
pub fn geometric_kernel(y: u64, beta: f64) -> Complex64 {
    let b = beta - beta.round();
    if b == 0.0 {
        return Complex64::new(y as f64, 0.0);
    }
    let yf = y as f64;
    let ratio = (PI * yf * b).sin() / (PI * b).sin();
    Complex64::from_polar(ratio, PI * (yf + 1.0) * b)
}

/// [`geometric_kernel`] at an exact rational β, reduced modulo 1 before
/// rounding to double precision.
pub fn geometric_kernel_exact(y: u64, beta: &BigRational) -> Complex64 {
    let reduced = beta - beta.round();
    geometric_kernel(y, reduced.to_f64().unwrap_or(0.0))
}
