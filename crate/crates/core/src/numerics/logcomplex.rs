//! Complex numbers with a detached exponent.
//!
//! A [`LogComplex`] represents `mantissa · e^{scale}` where `scale` is a real
//! log-magnitude and `mantissa` a complex number of moderate size. Weights such
//! as `e^{-nV(z)/2}` and Hermite values at large index live in this form until
//! the final combination, so nothing over- or underflows in between.

use num_complex::Complex64 as C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogComplex {
    pub mantissa: C64,
    pub scale: f64,
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex { mantissa: C64::new(0.0, 0.0), scale: 0.0 };

    pub fn new(mantissa: C64, scale: f64) -> Self {
        LogComplex { mantissa, scale }
    }

    pub fn from_c64(z: C64) -> Self {
        LogComplex { mantissa: z, scale: 0.0 }
    }

    /// `e^{w}` for complex `w`, kept exact in magnitude.
    pub fn exp(w: C64) -> Self {
        LogComplex { mantissa: C64::from_polar(1.0, w.im), scale: w.re }
    }

    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.scale
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == C64::new(0.0, 0.0)
    }

    /// Move the magnitude of the mantissa into the exponent.
    pub fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        let l = m.ln();
        LogComplex { mantissa: self.mantissa / m, scale: self.scale + l }
    }

    pub fn to_c64(&self) -> C64 {
        if self.is_zero() {
            return C64::new(0.0, 0.0);
        }
        self.mantissa * self.scale.exp()
    }

    pub fn mul(self, o: LogComplex) -> Self {
        LogComplex { mantissa: self.mantissa * o.mantissa, scale: self.scale + o.scale }
    }

    pub fn conj(self) -> Self {
        LogComplex { mantissa: self.mantissa.conj(), scale: self.scale }
    }

    pub fn scale_by(self, c: C64) -> Self {
        LogComplex { mantissa: self.mantissa * c, scale: self.scale }
    }

    pub fn add(self, o: LogComplex) -> Self {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        if self.scale >= o.scale {
            LogComplex {
                mantissa: self.mantissa + o.mantissa * (o.scale - self.scale).exp(),
                scale: self.scale,
            }
        } else {
            o.add(self)
        }
    }
}
