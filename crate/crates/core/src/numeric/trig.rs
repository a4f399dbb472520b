use num_complex::Complex64;
use std::f64::consts::{LN_2, PI};

/// Splits `x = m + w` with `m` the nearest integer and `|w| <= 1/2`.
#[inline]
fn reduce(x: f64) -> (f64, f64) {
    let m = x.round();
    (m, x - m)
}

#[inline]
fn parity_sign(m: f64) -> f64 {
    if (m * 0.5).fract() == 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `sin(pi x)`, exactly zero at integers.
pub fn sin_pi(x: f64) -> f64 {
    let (m, w) = reduce(x);
    parity_sign(m) * (PI * w).sin()
}

/// `cos(pi x)`, exactly `+-1` at integers.
pub fn cos_pi(x: f64) -> f64 {
    let (m, w) = reduce(x);
    parity_sign(m) * (PI * w).cos()
}

/// `sin(pi z)` for complex `z`.
pub fn sin_pi_complex(z: Complex64) -> Complex64 {
    let py = PI * z.im;
    Complex64::new(sin_pi(z.re) * py.cosh(), cos_pi(z.re) * py.sinh())
}

/// Normalised sinc, `sin(pi x)/(pi x)`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let t = PI * x;
        let t2 = t * t;
        1.0 - t2 / 6.0 * (1.0 - t2 / 20.0)
    } else {
        sin_pi(x) / (PI * x)
    }
}

pub fn sinc_complex(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        let t = w * PI;
        let t2 = t * t;
        Complex64::new(1.0, 0.0) - t2 / 6.0 * (Complex64::new(1.0, 0.0) - t2 / 20.0)
    } else {
        sin_pi_complex(w) / (w * PI)
    }
}

/// A branch of `log sin(pi z)` with the real part exact and free of
/// overflow for large `|Im z|`. The imaginary part is only determined
/// modulo `2 pi`.
pub fn log_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im < -0.5 {
        // sin(pi z) = e^{i pi z} (1 - e^{-2 pi i z}) / (2i)
        let e = (-2.0 * PI * i * z).exp();
        i * PI * z + (Complex64::new(1.0, 0.0) - e).ln() - Complex64::new(LN_2, PI / 2.0)
    } else if z.im > 0.5 {
        // sin(pi z) = -e^{-i pi z} (1 - e^{2 pi i z}) / (2i) = e^{-i pi z}(1 - e^{2 pi i z}) i / 2
        let e = (2.0 * PI * i * z).exp();
        -i * PI * z + (Complex64::new(1.0, 0.0) - e).ln() + Complex64::new(-LN_2, PI / 2.0)
    } else {
        sin_pi_complex(z).ln()
    }
}

/// `pi cot(pi z)`, stable for large `|Im z|`.
pub fn pi_cot_pi(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    if z.im > 1.0 {
        let q = (2.0 * PI * i * z).exp();
        i * (q + one) / (q - one) * PI
    } else if z.im < -1.0 {
        let q = (-2.0 * PI * i * z).exp();
        i * (one + q) / (one - q) * PI
    } else {
        let s = sin_pi_complex(z);
        let c = Complex64::new(cos_pi(z.re) * (PI * z.im).cosh(), -sin_pi(z.re) * (PI * z.im).sinh());
        c / s * PI
    }
}

/// `pi cot(pi w) - 1/w`, regular at `w = 0`.
pub fn pi_cot_pi_minus_recip(w: Complex64) -> Complex64 {
    if w.norm() < 1e-3 {
        // -pi^2 w / 3 - pi^4 w^3 / 45 - 2 pi^6 w^5 / 945
        let p2 = PI * PI;
        let w2 = w * w;
        let one = Complex64::new(1.0, 0.0);
        -w * (p2 / 3.0) * (one + w2 * (p2 / 15.0) * (one + w2 * (2.0 * p2 / 63.0)))
    } else {
        pi_cot_pi(w) - w.inv()
    }
}
