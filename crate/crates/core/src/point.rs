use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point of the closed right half-plane `Re z >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub const ORIGIN: HalfPlanePoint = HalfPlanePoint { x: 0.0, y: 0.0 };

    /// Rejects non-finite coordinates and `x < 0`. A negative zero real part
    /// is normalized to `+0`.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("non-finite point ({x}, {y})")));
        }
        if x < 0.0 {
            return Err(Error::Domain(format!("Re z = {x} < 0 is outside the half-plane")));
        }
        Ok(Self { x: x + 0.0, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// Point on the imaginary axis.
    pub fn imaginary(y: f64) -> Result<Self> {
        Self::new(0.0, y)
    }

    pub fn real(x: f64) -> Result<Self> {
        Self::new(x, 0.0)
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn conj(&self) -> Self {
        Self { x: self.x, y: -self.y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_origin(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }

    /// Requires a strictly positive real part.
    pub(crate) fn require_interior(&self, what: &str) -> Result<()> {
        if self.x > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain(format!("{what} requires Re z > 0, got z = {self}")))
        }
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y < 0.0 {
            write!(f, "{}-{}i", self.x, -self.y)
        } else {
            write!(f, "{}+{}i", self.x, self.y)
        }
    }
}

impl TryFrom<Complex64> for HalfPlanePoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::from_complex(z)
    }
}
