//! Complex log-domain helpers.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// `ln(1 + w)` without cancellation in the real part for small `w`.
pub fn ln_1p(w: C64) -> C64 {
    let re = 0.5 * (2.0 * w.re + w.norm_sqr()).ln_1p();
    let im = w.im.atan2(1.0 + w.re);
    C64::new(re, im)
}

/// `ln(2 cosh z)` evaluated on the half-plane where the correction term is small.
///
/// Satisfies `exp(log_2cosh(z)) == 2 cosh(z)` without overflow for large `|Re z|`.
/// Returns a real part of `-inf` at the zeros of cosh.
pub fn log_2cosh(z: C64) -> C64 {
    if z.re >= 0.0 {
        z + ln_1p((-2.0 * z).exp())
    } else {
        -z + ln_1p((2.0 * z).exp())
    }
}

/// `ln(cosh z)`.
pub fn log_cosh(z: C64) -> C64 {
    log_2cosh(z) - std::f64::consts::LN_2
}

/// `ln(e^x + e^y)`.
pub fn log_add_exp(x: C64, y: C64) -> C64 {
    if x.re == f64::NEG_INFINITY {
        return y;
    }
    if y.re == f64::NEG_INFINITY {
        return x;
    }
    let (hi, lo) = if x.re >= y.re { (x, y) } else { (y, x) };
    hi + ln_1p((lo - hi).exp())
}

/// Real `ln(2 cosh x)`.
pub fn log_2cosh_re(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Running complex log-sum-exp accumulator.
#[derive(Debug, Clone, Copy)]
pub struct LogSum {
    scale: f64,
    acc: C64,
}

impl Default for LogSum {
    fn default() -> Self {
        LogSum { scale: f64::NEG_INFINITY, acc: ZERO }
    }
}

impl LogSum {
    pub fn add(&mut self, x: C64) {
        if x.re == f64::NEG_INFINITY {
            return;
        }
        if x.re > self.scale {
            if self.scale > f64::NEG_INFINITY {
                self.acc *= (self.scale - x.re).exp();
            }
            self.scale = x.re;
        }
        self.acc += C64::new(0.0, x.im).exp() * (x.re - self.scale).exp();
    }

    pub fn value(&self) -> C64 {
        if self.scale == f64::NEG_INFINITY {
            return C64::new(f64::NEG_INFINITY, 0.0);
        }
        self.acc.ln() + self.scale
    }
}

/// Magnitude-relative closeness of two complex numbers.
pub fn rel_diff(x: C64, y: C64) -> f64 {
    let d = (x - y).norm();
    let s = x.norm().max(y.norm());
    if s == 0.0 {
        0.0
    } else {
        d / s
    }
}

/// Distance between two complex logarithms modulo 2πi.
pub fn log_diff(x: C64, y: C64) -> f64 {
    let d = x - y;
    let tau = 2.0 * std::f64::consts::PI;
    let im = d.im - tau * (d.im / tau).round();
    C64::new(d.re, im).norm()
}
