//! The standard normal density φ, its upper tail Φ̄, the Mills ratio
//! r = Φ̄/φ, the inverse Mills ratio R = φ/Φ̄, the normalized ratio
//! S = R/(z + √(2/π)) and the imaginary-axis quantities (rescaled Dawson
//! function, antiderivative E) on the closed right half-plane.
//!
//! Everything is built on the Mills ratio, which stays bounded on the
//! half-plane where φ and Φ̄ individually overflow. Three evaluation routes
//! cover the half-plane:
//!
//! * on the imaginary axis, r(iy) = √(π/2)·e^{−y²/2} − i·t̃r(y) is exact;
//! * for `x < 2` and `|z| < 10`, r is continued from the axis point `iy` by one
//!   Taylor step of length `x`, using the recurrence for Taylor coefficients
//!   that follows from `r′ = z·r − 1`;
//! * elsewhere the Laplace continued fraction
//!   r(z) = 1/(z + 1/(z + 2/(z + 3/(z + …)))) is evaluated by modified Lentz.
//!
//! Every evaluation at a point with `Im z < 0` is done at the conjugate point
//! and conjugated, so conjugation symmetry holds bit-for-bit.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::consts::{INV_SQRT_2PI, SQRT_2_OVER_PI, SQRT_PI_OVER_2, TWO_OVER_PI, Y_OVERFLOW};
use crate::error::{Error, Result};
use crate::point::HalfPlanePoint;

const EPS: f64 = f64::EPSILON;

/// Continued fraction is used at and beyond this real part...
const CF_MIN_RE: f64 = 2.0;
/// ...and at and beyond this modulus.
const CF_MIN_MODULUS: f64 = 10.0;
/// Relative change between successive convergents that ends the continued fraction.
const CF_TOLERANCE: f64 = 1e-15;
/// Level cap for the continued fraction. The evaluation regions keep the
/// actual depth near 110 in the worst case (z = 2).
pub const CF_MAX_LEVELS: usize = 200;

const TAYLOR_MAX_TERMS: usize = 400;

/// Spacing of the precomputed t̃r anchors on [0, 10].
const DAWSON_ANCHOR_STEP: f64 = 0.25;
const DAWSON_ANCHORS: usize = 41;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Taylor series (Maclaurin at the origin, or a step off the imaginary axis).
    Taylor,
    ContinuedFraction,
    Quadrature,
    /// Closed form on the imaginary axis built from the rescaled Dawson function.
    ScaledImaginaryAxis,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Taylor => "taylor",
            Method::ContinuedFraction => "continued_fraction",
            Method::Quadrature => "quadrature",
            Method::ScaledImaginaryAxis => "scaled_imaginary_axis",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A complex value with a first-order absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: Method,
}

impl Evaluation {
    fn new(value: Complex64, abs_error_estimate: f64, method: Method) -> Self {
        debug_assert!(abs_error_estimate >= 0.0);
        Self { value, abs_error_estimate, method }
    }

    fn conj(self) -> Self {
        Self { value: self.value.conj(), ..self }
    }

    /// Relative error estimate, `abs_error_estimate / |value|`.
    pub fn rel_error_estimate(&self) -> f64 {
        self.abs_error_estimate / self.value.norm()
    }
}

/// log|φ(z)| and arg φ(z). Never overflows.
pub fn phi_log(z: Complex64) -> (f64, f64) {
    // -z²/2 = (y² - x²)/2 - i·xy
    let log_magnitude = (z.im - z.re) * (z.im + z.re) / 2.0 - crate::consts::LN_SQRT_2PI;
    (log_magnitude, -z.re * z.im)
}

/// φ(z) = e^{−z²/2}/√(2π) for any finite complex z.
pub fn phi(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("phi of non-finite {z}")));
    }
    let (x, y) = (z.re, z.im.abs());
    let scale = ((y - x) * (y + x) / 2.0).exp();
    if !scale.is_finite() {
        return Err(Error::Overflow(format!(
            "|phi({z})| = e^{} exceeds the double range; use phi_log",
            (y - x) * (y + x) / 2.0
        )));
    }
    let phase = x * y;
    let v = Complex64::new(phase.cos(), -phase.sin()) * (INV_SQRT_2PI * scale);
    Ok(if z.im < 0.0 { v.conj() } else { v })
}

/// Mills ratio r(z) = Φ̄(z)/φ(z).
pub fn mills_ratio(p: HalfPlanePoint) -> Evaluation {
    let (x, y) = (p.x(), p.y().abs());
    let ev = mills_ratio_upper(x, y);
    if p.y() < 0.0 {
        ev.conj()
    } else {
        ev
    }
}

/// r at (x, y) with y >= 0.
fn mills_ratio_upper(x: f64, y: f64) -> Evaluation {
    if x == 0.0 {
        if y == 0.0 {
            return Evaluation::new(Complex64::new(SQRT_PI_OVER_2, 0.0), 0.0, Method::Taylor);
        }
        let (value, err) = axis_mills_ratio(y);
        return Evaluation::new(value, err, Method::ScaledImaginaryAxis);
    }
    if x >= CF_MIN_RE || x.hypot(y) >= CF_MIN_MODULUS {
        let cf = continued_fraction(Complex64::new(x, y));
        return Evaluation::new(cf.value, cf.abs_error, Method::ContinuedFraction);
    }
    let (value, err) = taylor_from_axis(x, y);
    Evaluation::new(value, err, Method::Taylor)
}

/// r(iy) = √(π/2)·e^{−y²/2} − i·t̃r(y), y >= 0.
fn axis_mills_ratio(y: f64) -> (Complex64, f64) {
    let re = SQRT_PI_OVER_2 * (-y * y / 2.0).exp();
    let (tr, tr_err) = dawson_rescaled_with_error(y);
    let value = Complex64::new(re, -tr);
    (value, tr_err + 2.0 * EPS * re)
}

/// Continues r from `iy` to `x + iy`. Taylor coefficients c_k of r about z₀
/// satisfy c₁ = z₀c₀ − 1 and (k+1)·c_{k+1} = z₀·c_k + c_{k−1}.
fn taylor_from_axis(x: f64, y: f64) -> (Complex64, f64) {
    let z0 = Complex64::new(0.0, y);
    let (c0, c0_err) = axis_mills_ratio(y);
    let mut prev = c0;
    let mut cur = z0 * c0 - 1.0;
    let mut power = x;
    let mut sum = c0 + cur * power;
    let mut magnitude = c0.norm() + (cur * power).norm();
    let mut last_term = (cur * power).norm();
    let min_terms = 3 + (3.0 * x * y).ceil() as usize;
    let mut k = 1;
    while k < TAYLOR_MAX_TERMS {
        let next = (z0 * cur + prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
        power *= x;
        let term = cur * power;
        sum += term;
        let t = term.norm();
        magnitude += t;
        k += 1;
        let small = 0.1 * EPS * sum.norm();
        if k > min_terms && t < small && last_term < small {
            last_term = t;
            break;
        }
        last_term = t;
    }
    // Error in c₀ is carried along with a factor |e^{z₀x + x²/2}| = e^{x²/2}.
    let err = last_term + 2.0 * EPS * magnitude + c0_err * (x * x / 2.0).exp();
    (sum, err)
}

struct ContinuedFraction {
    value: Complex64,
    abs_error: f64,
    levels: usize,
}

/// Modified Lentz evaluation of 1/(z + 1/(z + 2/(z + 3/(z + …)))), carried
/// out on the denominator g = z + 1/(z + 2/(z + …)) so the leading term is
/// nonzero.
fn continued_fraction(z: Complex64) -> ContinuedFraction {
    // Squared magnitudes of this must not underflow inside complex division.
    const TINY: f64 = 1e-150;
    let tiny = Complex64::new(TINY, 0.0);
    let mut g = if z.norm() < TINY { tiny } else { z };
    let mut c = g;
    let mut d = Complex64::new(0.0, 0.0);
    let mut increment = f64::INFINITY;
    let mut levels = 0;
    for k in 1..=CF_MAX_LEVELS {
        let a = k as f64;
        d = z + d * a;
        if d.norm() < TINY {
            d = tiny;
        }
        c = z + a / c;
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        g *= delta;
        increment = (delta - 1.0).norm();
        levels = k;
        if increment < CF_TOLERANCE {
            break;
        }
    }
    debug_assert!(
        increment < CF_TOLERANCE,
        "continued fraction at {z} stopped at {levels} levels with increment {increment}"
    );
    let value = g.inv();
    ContinuedFraction { value, abs_error: (increment + 8.0 * EPS) * value.norm(), levels }
}

/// Depth the continued fraction needs at `z` (diagnostic).
pub fn continued_fraction_levels(z: Complex64) -> usize {
    continued_fraction(Complex64::new(z.re, z.im.abs())).levels
}

/// Inverse Mills ratio R(z) = φ(z)/Φ̄(z) = 1/r(z).
pub fn inverse_mills(p: HalfPlanePoint) -> Evaluation {
    if p.is_origin() {
        return Evaluation::new(Complex64::new(SQRT_2_OVER_PI, 0.0), 0.0, Method::Taylor);
    }
    let r = mills_ratio(p);
    let value = r.value.inv();
    let err = value.norm() * (r.rel_error_estimate() + EPS);
    Evaluation::new(value, err, r.method)
}

/// S(z) = R(z)/(z + √(2/π)).
pub fn normalized_ratio(p: HalfPlanePoint) -> Evaluation {
    if p.is_origin() {
        return Evaluation::new(Complex64::new(1.0, 0.0), 0.0, Method::Taylor);
    }
    let r = mills_ratio(p);
    let value = (r.value * (p.z() + SQRT_2_OVER_PI)).inv();
    let err = value.norm() * (r.rel_error_estimate() + 2.0 * EPS);
    Evaluation::new(value, err, r.method)
}

/// Upper tail Φ̄(z) = erfc(z/√2)/2.
///
/// On the imaginary axis Φ̄(iy) = 1/2 − i·E(y), whose size is e^{y²/2}; the
/// exact value is refused for |y| > 37 and, off the axis, whenever
/// y² − x² > 37² (use [`mills_ratio`] or [`s_imaginary_axis_stable`]).
pub fn gaussian_tail(p: HalfPlanePoint) -> Result<Evaluation> {
    let (x, y) = (p.x(), p.y().abs());
    if p.is_origin() {
        return Ok(Evaluation::new(Complex64::new(0.5, 0.0), 0.0, Method::Taylor));
    }
    if (y - x) * (y + x) > Y_OVERFLOW * Y_OVERFLOW {
        return Err(Error::Overflow(format!(
            "|gaussian_tail({p})| grows like e^(y^2/2); |Im z| is beyond the explicit range"
        )));
    }
    let ev = if x == 0.0 {
        let e = imaginary_axis_integral(y)?;
        let e_err = 4.0 * EPS * e;
        Evaluation::new(Complex64::new(0.5, -e), e_err, Method::ScaledImaginaryAxis)
    } else {
        let r = mills_ratio_upper(x, y);
        let density = phi(Complex64::new(x, y))?;
        let value = r.value * density;
        let err = value.norm() * (r.rel_error_estimate() + 4.0 * EPS * (1.0 + x * y));
        Evaluation::new(value, err, r.method)
    };
    Ok(if p.y() < 0.0 { ev.conj() } else { ev })
}

/// Rescaled Dawson function t̃r(y) = e^{−y²/2}·∫₀^y e^{u²/2} du, extended to
/// negative y as an odd function.
pub fn dawson_rescaled(y: f64) -> f64 {
    let v = dawson_rescaled_with_error(y.abs()).0;
    if y < 0.0 {
        -v
    } else {
        v
    }
}

/// t̃r(y) and an absolute error estimate, y >= 0.
fn dawson_rescaled_with_error(y: f64) -> (f64, f64) {
    if y.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    if y == 0.0 {
        return (0.0, 0.0);
    }
    let top = DAWSON_ANCHOR_STEP * (DAWSON_ANCHORS - 1) as f64;
    if y < top {
        let j = (y / DAWSON_ANCHOR_STEP).round() as usize;
        let y0 = j as f64 * DAWSON_ANCHOR_STEP;
        let (v, err) = dawson_taylor(y0, dawson_anchors()[j], y - y0);
        (v, err + 4.0 * EPS * v)
    } else {
        // r(iy) = √(π/2)e^{−y²/2} − i·t̃r(y); the real part is below 1e-21 here.
        let cf = continued_fraction(Complex64::new(0.0, y));
        (-cf.value.im, cf.abs_error)
    }
}

/// Taylor step for t̃r from (y₀, t̃r(y₀)) by h. Coefficients satisfy
/// d₁ = 1 − y₀d₀ and (k+1)·d_{k+1} = −y₀·d_k − d_{k−1}.
fn dawson_taylor(y0: f64, d0: f64, h: f64) -> (f64, f64) {
    if h == 0.0 {
        return (d0, 0.0);
    }
    let mut prev = d0;
    let mut cur = 1.0 - y0 * d0;
    let mut power = h;
    let mut sum = d0 + cur * power;
    let mut magnitude = d0.abs() + (cur * power).abs();
    let mut last_term = (cur * power).abs();
    let min_terms = 3 + (3.0 * (y0 * h).abs()).ceil() as usize;
    let mut k = 1;
    while k < TAYLOR_MAX_TERMS {
        let next = (-y0 * cur - prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
        power *= h;
        let t = (cur * power).abs();
        sum += cur * power;
        magnitude += t;
        k += 1;
        let small = 0.1 * EPS * sum.abs();
        if k > min_terms && t < small && last_term < small {
            last_term = t;
            break;
        }
        last_term = t;
    }
    (sum, last_term + 2.0 * EPS * magnitude)
}

/// t̃r at 0, 0.25, …, 10, built once by forward Taylor stepping from t̃r(0) = 0.
/// Forward steps damp earlier errors, since the homogeneous solution
/// e^{−y²/2} decays.
fn dawson_anchors() -> &'static [f64; DAWSON_ANCHORS] {
    static ANCHORS: OnceLock<[f64; DAWSON_ANCHORS]> = OnceLock::new();
    ANCHORS.get_or_init(|| {
        let mut a = [0.0; DAWSON_ANCHORS];
        for j in 1..DAWSON_ANCHORS {
            let y0 = (j - 1) as f64 * DAWSON_ANCHOR_STEP;
            a[j] = dawson_taylor(y0, a[j - 1], DAWSON_ANCHOR_STEP).0;
        }
        a
    })
}

/// E(y) = ∫₀^y φ(iv) dv = e^{y²/2}·t̃r(y)/√(2π). Odd in y; refused for |y| > 37.
pub fn imaginary_axis_integral(y: f64) -> Result<f64> {
    if y.abs() > Y_OVERFLOW {
        return Err(Error::Overflow(format!(
            "E({y}) ~ e^(y^2/2) is beyond the explicit range; use imaginary_axis_integral_scaled"
        )));
    }
    Ok((y * y / 2.0).exp() * dawson_rescaled(y) * INV_SQRT_2PI)
}

/// e^{−y²/2}·E(y) = t̃r(y)/√(2π). Never overflows.
pub fn imaginary_axis_integral_scaled(y: f64) -> f64 {
    dawson_rescaled(y) * INV_SQRT_2PI
}

/// |S(iy)|² = 1/[(y² + 2/π)·((π/2)e^{−y²} + t̃r(y)²)], the form of f/g with
/// e^{y²} divided out of both. Valid for every finite y.
pub fn s_imaginary_axis_stable(y: f64) -> f64 {
    let tr = dawson_rescaled(y);
    let gaussian = std::f64::consts::FRAC_PI_2 * (-y * y).exp();
    1.0 / ((y * y + TWO_OVER_PI) * (gaussian + tr * tr))
}
