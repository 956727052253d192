//! Closed-form envelopes: the band `0.686… < |S| < 1`, the modulus envelope
//! `|R(z)| < |z + √(2/π)|`, the derivative envelope `R⁽ⁿ⁾_max` and the
//! integral `J(a, b) = ∫₀^{2π} √(a + b cos t) dt`.

use std::f64::consts::PI;

use crate::consts::{BAND_FLOOR, LN_SQRT_2PI, SQRT_2_OVER_PI};
use crate::error::{Error, Result};
use crate::gaussian::{inverse_mills, normalized_ratio};
use crate::point::HalfPlanePoint;
use crate::quadrature::integrate;

/// Outcome of comparing a computed quantity against an envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub point: HalfPlanePoint,
    pub quantity: f64,
    /// Upper envelope.
    pub envelope: f64,
    /// Lower envelope for two-sided checks.
    pub floor: Option<f64>,
    /// Distance to the nearest envelope; positive inside.
    pub margin: f64,
    /// The point is one where the envelope is attained (the origin), so
    /// equality within `tolerance` counts as a pass.
    pub boundary_equality: bool,
    pub tolerance: f64,
    pub passed: bool,
}

impl BoundReport {
    fn new(point: HalfPlanePoint, quantity: f64, envelope: f64, floor: Option<f64>, boundary: bool) -> Self {
        let mut margin = envelope - quantity;
        if let Some(lo) = floor {
            margin = margin.min(quantity - lo);
        }
        let tolerance = if boundary { 4.0 * f64::EPSILON * envelope } else { 0.0 };
        let passed = if boundary { margin >= -tolerance } else { margin > 0.0 };
        BoundReport { point, quantity, envelope, floor, margin, boundary_equality: boundary, tolerance, passed }
    }
}

/// Checks `floor < |S(z)| < 1` with the certified floor 0.6861.
pub fn s_band_check(z: HalfPlanePoint) -> BoundReport {
    s_band_check_with_floor(z, BAND_FLOOR)
}

/// [`s_band_check`] with a caller-supplied floor.
pub fn s_band_check_with_floor(z: HalfPlanePoint, floor: f64) -> BoundReport {
    let s = normalized_ratio(z).value.norm();
    BoundReport::new(z, s, 1.0, Some(floor), z.is_origin())
}

/// Checks `|R(z)| < |z + √(2/π)|`; equality at the origin.
pub fn r_envelope_check(z: HalfPlanePoint) -> BoundReport {
    let r = inverse_mills(z).value.norm();
    let env = (z.z() + SQRT_2_OVER_PI).norm();
    BoundReport::new(z, r, env, None, z.is_origin())
}

fn require_derivative_domain(n: u32, z: HalfPlanePoint) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("derivative order must be at least 1".into()));
    }
    z.require_interior("derivative bound")
}

fn envelope_radicand(z: HalfPlanePoint) -> f64 {
    (z.z() + SQRT_2_OVER_PI).norm_sqr() + z.x() * z.x()
}

/// `R⁽ⁿ⁾_max(z) = (n!/xⁿ)·√(|z + √(2/π)|² + x²)`.
///
/// Returns [`Error::Overflow`] when the value does not fit in a double; use
/// [`log_derivative_bound`] then.
pub fn derivative_bound(n: u32, z: HalfPlanePoint) -> Result<f64> {
    require_derivative_domain(n, z)?;
    let x = z.x();
    let mut v = envelope_radicand(z).sqrt();
    for k in 1..=n {
        v *= k as f64 / x;
    }
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("R^({n})_max at {z} is e^{:.6}", log_derivative_bound(n, z)?)))
    }
}

/// Natural logarithm of [`derivative_bound`], valid for any order.
pub fn log_derivative_bound(n: u32, z: HalfPlanePoint) -> Result<f64> {
    require_derivative_domain(n, z)?;
    Ok(ln_factorial(n) - n as f64 * z.x().ln() + 0.5 * envelope_radicand(z).ln())
}

/// `ln n!`: exact summation for small `n`, Stirling series beyond.
pub fn ln_factorial(n: u32) -> f64 {
    if n < 32 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let m = n as f64;
    let m2 = m * m;
    m * m.ln() - m
        + 0.5 * m.ln()
        + LN_SQRT_2PI
        + (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * m2)) / m2) / m2) / m
}

/// `J(a, b) = ∫₀^{2π} √(a + b cos t) dt` for `0 ≤ b ≤ a`, by quadrature of
/// the symmetric half `[0, π]`, whose endpoint π carries the square-root zero
/// when `b = a`.
pub fn elliptic_j(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite() && (0.0..=a).contains(&b)) {
        return Err(Error::Domain(format!("J(a, b) needs a > 0 and 0 <= b <= a, got ({a}, {b})")));
    }
    let q = integrate(|t: f64| (a + b * t.cos()).max(0.0).sqrt(), 0.0, PI, 0.0, 1e-14)?;
    Ok(2.0 * q.value)
}

/// Parameters `a = |z + √(2/π)|² + x²`, `b = 2x·|z + √(2/π)|`,
/// `θ = arctan(y / (x + √(2/π)))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParams {
    pub a: f64,
    pub b: f64,
    pub theta: f64,
}

pub fn elliptic_params(z: HalfPlanePoint) -> Result<EllipticParams> {
    z.require_interior("elliptic parameters")?;
    let x = z.x();
    let m = (z.z() + SQRT_2_OVER_PI).norm();
    let b = 2.0 * x * m;
    let a = (m * m + x * x).max(b);
    let theta = (z.y() / (x + SQRT_2_OVER_PI)).atan();
    Ok(EllipticParams { a, b, theta })
}
