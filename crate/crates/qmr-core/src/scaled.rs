//! Log-scaled arithmetic for quantities proportional to `omega^(2n)`.
//!
//! Shell norms scale like `omega^(2n)`, which reaches ~1e-84 already at
//! (n = 21, omega = 1e-2) and underflows double precision well before the
//! mode orders the design module can request. Every norm and field
//! amplitude is therefore carried as a mantissa together with a natural-log
//! scale factor, `value = mantissa * exp(log_scale)`. Ratios of two scaled
//! quantities — the payload of every theorem reproduced here — are then
//! exact to double precision regardless of the common scale.

use num_complex::Complex64;

/// A nonnegative real carried as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled {
    pub mantissa: f64,
    pub log_scale: f64,
}

impl LogScaled {
    pub const ZERO: LogScaled = LogScaled { mantissa: 0.0, log_scale: 0.0 };

    /// Wrap a mantissa/log pair as given. Correlated quantities built on the
    /// same log scale keep exact ratios; call `normalized` to fold the
    /// mantissa magnitude into the log when it may drift far from 1.
    pub fn new(mantissa: f64, log_scale: f64) -> Self {
        LogScaled { mantissa, log_scale }
    }

    /// Wrap a plain double (log_scale = 0).
    pub fn from_f64(value: f64) -> Self {
        LogScaled { mantissa: value, log_scale: 0.0 }.normalized()
    }

    /// Fold the mantissa magnitude into the log scale so |mantissa| = 1
    /// (sign preserved). Zero stays zero with log_scale = 0.
    pub fn normalized(self) -> Self {
        let a = self.mantissa.abs();
        if a == 0.0 {
            return LogScaled::ZERO;
        }
        LogScaled { mantissa: self.mantissa / a, log_scale: self.log_scale + a.ln() }
    }

    /// Reconstruct the plain double where representable (may under/overflow).
    pub fn value(self) -> f64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == 0.0
    }

    pub fn mul(self, other: LogScaled) -> Self {
        LogScaled {
            mantissa: self.mantissa * other.mantissa,
            log_scale: self.log_scale + other.log_scale,
        }
        .normalized()
    }

    pub fn mul_f64(self, factor: f64) -> Self {
        LogScaled { mantissa: self.mantissa * factor, log_scale: self.log_scale }.normalized()
    }

    pub fn div(self, other: LogScaled) -> Self {
        LogScaled {
            mantissa: self.mantissa / other.mantissa,
            log_scale: self.log_scale - other.log_scale,
        }
        .normalized()
    }

    /// Ratio of two scaled quantities as a plain double.
    pub fn ratio(self, other: LogScaled) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        (self.mantissa / other.mantissa) * (self.log_scale - other.log_scale).exp()
    }

    /// Sum, rescaled to the larger of the two scales.
    pub fn add(self, other: LogScaled) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let l = self.log_scale.max(other.log_scale);
        let m = self.mantissa * (self.log_scale - l).exp()
            + other.mantissa * (other.log_scale - l).exp();
        LogScaled { mantissa: m, log_scale: l }.normalized()
    }

    pub fn sub(self, other: LogScaled) -> Self {
        self.add(other.mul_f64(-1.0))
    }

    /// Multiply by exp(extra) without touching the mantissa.
    pub fn shift_log(self, extra: f64) -> Self {
        LogScaled { mantissa: self.mantissa, log_scale: self.log_scale + extra }
    }

    /// self^p for nonnegative quantities (p real).
    pub fn powf(self, p: f64) -> Self {
        debug_assert!(self.mantissa >= 0.0);
        if self.is_zero() {
            return LogScaled::ZERO;
        }
        LogScaled { mantissa: self.mantissa.powf(p), log_scale: self.log_scale * p }.normalized()
    }
}

/// A complex amplitude carried as `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { mantissa: Complex64 { re: 0.0, im: 0.0 }, log_scale: 0.0 };

    /// Wrap a mantissa/log pair as given; see `LogScaled::new`.
    pub fn new(mantissa: Complex64, log_scale: f64) -> Self {
        LogComplex { mantissa, log_scale }
    }

    pub fn from_complex(value: Complex64) -> Self {
        LogComplex { mantissa: value, log_scale: 0.0 }.normalized()
    }

    /// Fold the mantissa magnitude into the log scale so |mantissa| = 1.
    pub fn normalized(self) -> Self {
        let a = self.mantissa.norm();
        if a == 0.0 {
            return LogComplex::ZERO;
        }
        LogComplex { mantissa: self.mantissa / a, log_scale: self.log_scale + a.ln() }
    }

    pub fn value(self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    pub fn is_zero(self) -> bool {
        self.mantissa == Complex64::new(0.0, 0.0)
    }

    pub fn mul(self, other: LogComplex) -> Self {
        LogComplex {
            mantissa: self.mantissa * other.mantissa,
            log_scale: self.log_scale + other.log_scale,
        }
        .normalized()
    }

    pub fn mul_complex(self, factor: Complex64) -> Self {
        LogComplex { mantissa: self.mantissa * factor, log_scale: self.log_scale }.normalized()
    }

    pub fn div(self, other: LogComplex) -> Self {
        LogComplex {
            mantissa: self.mantissa / other.mantissa,
            log_scale: self.log_scale - other.log_scale,
        }
        .normalized()
    }

    /// Complex ratio as a plain value (the scales mostly cancel).
    pub fn ratio(self, other: LogComplex) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        (self.mantissa / other.mantissa) * (self.log_scale - other.log_scale).exp()
    }

    pub fn add(self, other: LogComplex) -> Self {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let l = self.log_scale.max(other.log_scale);
        let m = self.mantissa * (self.log_scale - l).exp()
            + other.mantissa * (other.log_scale - l).exp();
        LogComplex { mantissa: m, log_scale: l }.normalized()
    }

    pub fn sub(self, other: LogComplex) -> Self {
        self.add(other.mul_complex(Complex64::new(-1.0, 0.0)))
    }

    /// |self|^2 as a scaled nonnegative real.
    pub fn abs_sq(self) -> LogScaled {
        LogScaled::new(self.mantissa.norm_sqr(), 2.0 * self.log_scale)
    }

    /// |self| as a scaled nonnegative real.
    pub fn abs(self) -> LogScaled {
        LogScaled::new(self.mantissa.norm(), self.log_scale)
    }

    pub fn shift_log(self, extra: f64) -> Self {
        LogComplex { mantissa: self.mantissa, log_scale: self.log_scale + extra }
    }
}
