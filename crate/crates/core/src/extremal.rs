//! Extremal structure of `|S|`.
//!
//! On the imaginary axis `s(y) = |S(iy)|² = f(y)/g(y)` with
//!
//! ```text
//! f(y) = φ(iy)² / (y² + c),   g(y) = (1/2)² + E(y)²,   c = 2/π,
//! ```
//!
//! and the monotonicity of `s` is read off the derivative ratios
//!
//! ```text
//! s₁ = f′/g′ = y·φ(iy)·(y² + c − 1) / (E(y)·(y² + c)²)
//!            = y·(y² + c − 1) / (t̃r(y)·(y² + c)²),
//!
//! s₂ = f₁′/g₁′  where  f₁ = y·φ(iy)·(y² + c − 1)/(y² + c)²,  g₁ = E,
//!    = N(y)/D(y),
//!      N(y) = y⁶ + (2c − 2)·y⁴ + (c² − c + 3)·y² + (c² − c),
//!      D(y) = (y² + c)³.
//! ```
//!
//! On the real axis the ratio of `f = φ(x)/(x + c′)` and `g = Φ̄(x)`,
//! `c′ = √(2/π)`, has `f′/g′ = h(x) = (x² + c′x + 1)/(x + c′)²`, whose only
//! critical point is `x* = (π − 1)·c′`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::consts::{SQRT_2_OVER_PI, TWO_OVER_PI};
use crate::error::{Error, Result};
use crate::gaussian::{dawson_rescaled, normalized_ratio, s_imaginary_axis_stable};
use crate::optimize::{bisect_sign, golden_section, Bracket};
use crate::point::HalfPlanePoint;

const C: f64 = TWO_OVER_PI;

/// Coefficients of `N(y)` in powers `y⁰, y², y⁴, y⁶`.
pub const S2_NUMERATOR: [f64; 4] = [C * C - C, C * C - C + 3.0, 2.0 * C - 2.0, 1.0];

/// Known bracket for the minimizer of `s`.
pub const Y_STAR_CERTIFIED: Bracket = Bracket { lo: 1.6267, hi: 1.6268 };

/// Certified bracket for `|S(iy*)|`.
pub const S_AT_Y_STAR_CERTIFIED: Bracket = Bracket { lo: 0.6861, hi: 0.6863 };

const FD_STEP: f64 = 1e-7;

/// `s(y) = |S(iy)|²`; even in `y`.
pub fn s(y: f64) -> f64 {
    s_imaginary_axis_stable(y.abs())
}

/// Central finite difference of `s` with step `1e-7`.
pub fn s_prime_fd(y: f64) -> f64 {
    (s(y + FD_STEP) - s(y - FD_STEP)) / (2.0 * FD_STEP)
}

/// `s₁ = f′/g′`, with the limit `(c − 1)/c²` at `y = 0`.
pub fn s1(y: f64) -> f64 {
    let y = y.abs();
    let q = y * y + C;
    if y == 0.0 {
        return (C - 1.0) / (C * C);
    }
    y * (q - 1.0) / (dawson_rescaled(y) * q * q)
}

/// `s₁′(y)`, differentiated in closed form using `t̃r′ = 1 − y·t̃r`.
pub fn s1_prime(y: f64) -> f64 {
    let q = y * y + C;
    let p = y * (q - 1.0);
    let dp = 3.0 * y * y + C - 1.0;
    let den = q * q;
    let dden = 4.0 * y * q;
    let tr = dawson_rescaled(y);
    let dtr = 1.0 - y * tr;
    (dp * tr * den - p * (dtr * den + tr * dden)) / (tr * den).powi(2)
}

/// `lim_{y↓0} s₁′(y)/y = π(2 − 4π + 3π²)/6`, from the series of `s₁` at 0.
pub fn s1_prime_over_y_limit() -> f64 {
    PI * (2.0 - 4.0 * PI + 3.0 * PI * PI) / 6.0
}

pub fn s2_numerator(y: f64) -> f64 {
    let t = y * y;
    ((S2_NUMERATOR[3] * t + S2_NUMERATOR[2]) * t + S2_NUMERATOR[1]) * t + S2_NUMERATOR[0]
}

pub fn s2_denominator(y: f64) -> f64 {
    (y * y + C).powi(3)
}

/// `s₂ = N/D`.
pub fn s2(y: f64) -> f64 {
    s2_numerator(y) / s2_denominator(y)
}

/// `s₂′ = (N′·(y² + c) − 6y·N)/(y² + c)⁴`.
pub fn s2_prime(y: f64) -> f64 {
    let t = y * y;
    let q = t + C;
    let dn = y * (6.0 * t * t + 4.0 * S2_NUMERATOR[2] * t + 2.0 * S2_NUMERATOR[1]);
    (dn * q - 6.0 * y * s2_numerator(y)) / q.powi(4)
}

/// The two turning points of `s₂` (local maximum, then local minimum).
pub fn s2_turning_points() -> Result<(Bracket, Bracket)> {
    let y21 = bisect_sign(s2_prime, 0.5, 0.9, 1e-12)?;
    let y22 = bisect_sign(s2_prime, 1.2, 1.6, 1e-12)?;
    Ok((y21, y22))
}

/// The minimizer `y*` of `s` with its bracket and `|S(iy*)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YStar {
    pub y_star: f64,
    pub bracket: Bracket,
    pub s_at_y_star: f64,
}

/// Minimizes `s` on `[0.5, 3]`: golden section to width `1e-4`, then
/// bisection on the sign of the finite-difference `s′` to width `1e-6`.
/// Fails unless `s′` changes sign across the certified bracket
/// `(1.6267, 1.6268)`.
pub fn find_y_star() -> Result<YStar> {
    let coarse = golden_section(s, 0.5, 3.0, 1e-4);
    let pad = coarse.width();
    let bracket = bisect_sign(s_prime_fd, coarse.lo - pad, coarse.hi + pad, 1e-6)?;
    let (lo, hi) = (Y_STAR_CERTIFIED.lo, Y_STAR_CERTIFIED.hi);
    if !(s_prime_fd(lo) < 0.0 && s_prime_fd(hi) > 0.0) {
        return Err(Error::Accuracy(format!(
            "s' does not change sign across [{lo}, {hi}]: {:e}, {:e}",
            s_prime_fd(lo),
            s_prime_fd(hi)
        )));
    }
    let y_star = bracket.mid();
    Ok(YStar { y_star, bracket, s_at_y_star: s(y_star).sqrt() })
}

/// `h(x) = (x² + c′x + 1)/(x + c′)²`.
pub fn real_axis_ratio(x: f64) -> f64 {
    let c = SQRT_2_OVER_PI;
    (x * x + c * x + 1.0) / ((x + c) * (x + c))
}

/// `h′(x) = (c′x + c′² − 2)/(x + c′)³`.
pub fn real_axis_ratio_prime(x: f64) -> f64 {
    let c = SQRT_2_OVER_PI;
    (c * x + c * c - 2.0) / (x + c).powi(3)
}

/// `x* = (π − 1)·√(2/π)`.
pub fn x_star() -> f64 {
    (PI - 1.0) * SQRT_2_OVER_PI
}

/// Every extremal constant in one place.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremalConstants {
    pub y_star: f64,
    pub y_star_bracket: Bracket,
    pub s_at_y_star: f64,
    pub x_star: f64,
    pub s_at_x_star: f64,
    pub y21: f64,
    pub y21_bracket: Bracket,
    pub y22: f64,
    pub y22_bracket: Bracket,
    pub s1_prime_at_y22: f64,
    pub s1_prime_over_y_limit: f64,
}

pub fn extremal_constants() -> Result<ExtremalConstants> {
    let ys = find_y_star()?;
    let (b21, b22) = s2_turning_points()?;
    let xs = x_star();
    Ok(ExtremalConstants {
        y_star: ys.y_star,
        y_star_bracket: ys.bracket,
        s_at_y_star: ys.s_at_y_star,
        x_star: xs,
        s_at_x_star: normalized_ratio(HalfPlanePoint::real(xs)?).value.re,
        y21: b21.mid(),
        y21_bracket: b21,
        y22: b22.mid(),
        y22_bracket: b22,
        s1_prime_at_y22: s1_prime(b22.mid()),
        s1_prime_over_y_limit: s1_prime_over_y_limit(),
    })
}

/// Minimum of `|S(x + iy)|` over `y` on one vertical line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalMinimum {
    pub x: f64,
    pub y_at_min: f64,
    pub min_abs_s: f64,
    /// The range actually searched; larger than requested when the
    /// requested end still had `|S| ≤ 0.99`.
    pub y_range: f64,
}

/// Default search range for [`vertical_min_sweep`].
pub const SWEEP_Y_RANGE: f64 = 20.0;

const SWEEP_SCAN_POINTS: usize = 800;
const SWEEP_MAX_EXTENSIONS: usize = 6;

fn abs_s(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        s(y).sqrt()
    } else {
        normalized_ratio(HalfPlanePoint::new(x, y).expect("sweep point in the half-plane")).value.norm()
    }
}

fn vertical_min(x: f64, y_range: f64) -> Result<VerticalMinimum> {
    let mut range = y_range;
    let mut extensions = 0;
    while abs_s(x, range) <= 0.99 {
        if extensions == SWEEP_MAX_EXTENSIONS {
            return Err(Error::Accuracy(format!("|S({x} + iy)| still <= 0.99 at y = {range}")));
        }
        range *= 2.0;
        extensions += 1;
    }
    let step = range / SWEEP_SCAN_POINTS as f64;
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for k in 0..=SWEEP_SCAN_POINTS {
        let v = abs_s(x, k as f64 * step);
        if v < best_v {
            best = k;
            best_v = v;
        }
    }
    let lo = (best as f64 - 1.0).max(0.0) * step;
    let hi = (best as f64 + 1.0).min(SWEEP_SCAN_POINTS as f64) * step;
    let b = golden_section(|y| abs_s(x, y), lo, hi, 1e-9);
    let y = b.mid();
    let v = abs_s(x, y);
    let (y_at_min, min_abs_s) = if v <= best_v { (y, v) } else { (best as f64 * step, best_v) };
    Ok(VerticalMinimum { x, y_at_min, min_abs_s, y_range: range })
}

/// For each `x`, the minimum of `|S(x + iy)|` over `y ∈ [0, y_range]`; `y < 0`
/// is covered by conjugation symmetry. The range is doubled as needed until
/// `|S(x + i·y_range)| > 0.99`.
pub fn vertical_min_sweep(x_list: &[f64], y_range: f64) -> Result<Vec<VerticalMinimum>> {
    if !(y_range > 0.0 && y_range.is_finite()) {
        return Err(Error::Domain(format!("y_range must be positive, got {y_range}")));
    }
    if let Some(x) = x_list.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(Error::Domain(format!("sweep abscissae must be finite and >= 0, got {x}")));
    }
    x_list.par_iter().map(|&x| vertical_min(x, y_range)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{gaussian_tail, imaginary_axis_integral, phi};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn s_examples() {
        assert_eq!(s(0.0), 1.0);
        assert!((0.5525..0.5545).contains(&s(1.0)));
        assert!((0.6695..0.6715).contains(&s(3.0)));
        assert_eq!(s(-1.3), s(1.3));
    }

    #[test]
    fn s1_matches_defining_ratio() {
        // f′/g′ with f = φ(iy)²/(y² + c), g = 1/4 + E², straight from the primitives.
        for y in [0.2, 0.9, 1.7, 3.0, 5.0] {
            let ph = phi(Complex64::new(0.0, y)).unwrap().re;
            let e = imaginary_axis_integral(y).unwrap();
            let q = y * y + C;
            let df = 2.0 * y * ph * ph / q - ph * ph * 2.0 * y / (q * q);
            let dg = 2.0 * e * ph;
            assert_relative_eq!(s1(y), df / dg, max_relative = 1e-12);
        }
    }

    #[test]
    fn s1_prime_closed_form_matches_difference() {
        for y in [0.1, 0.7, 1.407, 2.5, 5.0] {
            let h = 1e-5;
            let fd = (s1(y + h) - s1(y - h)) / (2.0 * h);
            assert_relative_eq!(s1_prime(y), fd, max_relative = 1e-8);
        }
        assert_relative_eq!(s1(1e-9), s1(0.0), max_relative = 1e-9);
    }

    #[test]
    fn s1_prime_limit_at_origin() {
        let y = 1e-3;
        let fd = (s1(y + 1e-5) - s1(y - 1e-5)) / 2e-5 / y;
        assert!((fd - s1_prime_over_y_limit()).abs() < 1e-3, "{fd}");
    }

    #[test]
    fn s2_is_ratio_of_derivatives() {
        // f₁′/g₁′ with g₁′ = φ(iy), by numerical differentiation of f₁.
        let f1 = |y: f64| {
            let q = y * y + C;
            y * phi(Complex64::new(0.0, y)).unwrap().re * (q - 1.0) / (q * q)
        };
        for y in [0.1, 0.5, 0.686, 1.0, 1.407, 2.0, 3.3, 5.0] {
            let h = 1e-5;
            let fd = (f1(y + h) - f1(y - h)) / (2.0 * h);
            let g1p = phi(Complex64::new(0.0, y)).unwrap().re;
            assert_relative_eq!(s2(y), fd / g1p, max_relative = 1e-8);
            assert_relative_eq!(s2_numerator(2.0 * y), s2(2.0 * y) * s2_denominator(2.0 * y), max_relative = 1e-14);
        }
    }

    #[test]
    fn s2_turning_points_values() {
        let (a, b) = s2_turning_points().unwrap();
        assert!(a.width() < 1e-8 && b.width() < 1e-8);
        assert!((0.685..0.686).contains(&a.mid()));
        assert!((1.407..1.408).contains(&b.mid()));
        assert!(s2_prime(0.3) > 0.0 && s2_prime(1.0) < 0.0 && s2_prime(2.0) > 0.0);
    }

    #[test]
    fn y_star_is_certified() {
        let ys = find_y_star().unwrap();
        assert!(ys.bracket.width() <= 1e-6);
        assert!(Y_STAR_CERTIFIED.lo < ys.bracket.lo && ys.bracket.hi < Y_STAR_CERTIFIED.hi);
        assert!(S_AT_Y_STAR_CERTIFIED.contains(ys.s_at_y_star));
    }

    #[test]
    fn real_axis_ratio_is_derivative_ratio() {
        // f = φ(x)/(x + c′), g = Φ̄(x): f′/g′ by central differences.
        let c = SQRT_2_OVER_PI;
        let f = |x: f64| phi(Complex64::new(x, 0.0)).unwrap().re / (x + c);
        let g = |x: f64| gaussian_tail(HalfPlanePoint::real(x).unwrap()).unwrap().value.re;
        for x in [0.1, 0.5, 1.0, 1.7, 2.5, 4.0] {
            let h = 1e-5;
            let r = (f(x + h) - f(x - h)) / (g(x + h) - g(x - h));
            assert_relative_eq!(real_axis_ratio(x), r, max_relative = 1e-8);
        }
        assert!(real_axis_ratio_prime(x_star()).abs() < 1e-15);
        assert!(real_axis_ratio_prime(1.0) < 0.0 && real_axis_ratio_prime(3.0) > 0.0);
    }

    #[test]
    fn constants_report() {
        let k = extremal_constants().unwrap();
        assert_relative_eq!(k.x_star, 1.7087437, max_relative = 1e-7);
        assert!((0.8435..0.8455).contains(&k.s_at_x_star));
        assert!(k.y21 < k.y22);
    }

    #[test]
    fn sweep_is_increasing() {
        let xs = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
        let m = vertical_min_sweep(&xs, SWEEP_Y_RANGE).unwrap();
        let ys = find_y_star().unwrap();
        assert!((m[0].min_abs_s - ys.s_at_y_star).abs() < 1e-3);
        for w in m.windows(2) {
            assert!(w[1].min_abs_s > w[0].min_abs_s, "{w:?}");
        }
        assert!(m.iter().all(|v| v.min_abs_s > 0.686 && v.min_abs_s < 1.0));
        assert!(vertical_min_sweep(&[-1.0], 20.0).is_err());
    }
}
