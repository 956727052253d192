//! Shared real constants. Each is written out to full double precision once
//! and used everywhere else, so every module agrees bit-for-bit.

/// √(2/π) = R(0), the shift in the normalization S(z) = R(z)/(z + √(2/π)).
pub const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// 2/π.
pub const TWO_OVER_PI: f64 = std::f64::consts::FRAC_2_PI;

/// √(π/2) = r(0).
pub const SQRT_PI_OVER_2: f64 = 1.253_314_137_315_500_3;

/// √(2π).
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// 1/√(2π) = φ(0).
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// ln √(2π).
pub const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Largest |Im z| at which φ(iy) and Φ̄(iy) are formed explicitly. e^{y²/2}
/// leaves the double range near y ≈ 37.7.
pub const Y_OVERFLOW: f64 = 37.0;

/// Rigorous lower bracket of min |S| over the half-plane.
pub const BAND_FLOOR: f64 = 0.6861;
