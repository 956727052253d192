//! Independent evaluation of the Mills ratio from the real integrals
//! `r(z) = A(z) − i·B(z)` taken along the hyperbola `uv = xy`.
//!
//! This path is much slower than [`crate::gaussian::mills_ratio`] and exists to
//! cross-check it. Both integrals are computed after a change of variables
//! that makes the integrand decay like `e^{−s}` from the endpoint where it is
//! largest, over geometric panels `[0,1], [1,2], [2,4], …`, stopping once a
//! rigorous bound on the remaining tail is negligible.

use num_complex::Complex64;

use crate::consts::SQRT_PI_OVER_2;
use crate::error::{Error, Result};
use crate::gaussian::{Evaluation, Method};
use crate::point::HalfPlanePoint;
use crate::quadrature::{integrate, QuadResult};

/// Lower clamp for the `v` variable of `B`; the integrand is far below
/// underflow long before this.
pub const V_FLOOR: f64 = 1e-30;

const PANEL_REL_TOL: f64 = 1e-13;
const TAIL_REL_TOL: f64 = 1e-17;
const MAX_PANELS: usize = 64;

/// The phase `a(u) = x²y²/(2u²) − u²/2` of the hyperbolic contour through `x + iy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseFunction {
    x: f64,
    y: f64,
}

impl PhaseFunction {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || x <= 0.0 {
            return Err(Error::Domain(format!("phase function needs finite x > 0 and finite y, got ({x}, {y})")));
        }
        Ok(PhaseFunction { x, y })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn eval(&self, u: f64) -> f64 {
        let xy = self.x * self.y;
        xy * xy / (2.0 * u * u) - u * u / 2.0
    }

    /// `a(x + t) − a(x)` for `t ≥ 0`, in a form without cancellation.
    fn drop_from_x(&self, t: f64) -> f64 {
        let u = self.x + t;
        -0.5 * t * (self.x + u) * (1.0 + (self.y / u).powi(2))
    }

    /// `a(y) − a(y − t)` for `0 ≤ t < |y|`, in a form without cancellation.
    fn rise_to_y(&self, t: f64) -> f64 {
        let y = self.y.abs();
        let v = (y - t).max(V_FLOOR);
        -0.5 * t * (y + v) * (1.0 + (self.x / v).powi(2))
    }
}

/// `a_{xy}(u)`.
pub fn phase(p: &PhaseFunction, u: f64) -> f64 {
    p.eval(u)
}

fn require_positive_x(z: HalfPlanePoint, what: &str) -> Result<PhaseFunction> {
    z.require_interior(what)?;
    PhaseFunction::new(z.x(), z.y().abs())
}

/// `A(z) = ∫_x^∞ e^{a(u) − a(x)} du`.
pub fn a_integral(z: HalfPlanePoint) -> Result<QuadResult> {
    let p = require_positive_x(z, "A integral")?;
    let x = p.x;
    let y = p.y;
    // Slope of a(u) − a(x) at u = x.
    let lambda = x + y * y / x;
    let integrand = |s: f64| p.drop_from_x(s / lambda).exp();

    let mut value = 0.0;
    let mut abs_error = 0.0;
    let mut evaluations = 0;
    let mut lo = 0.0;
    let mut hi = 1.0;
    for _ in 0..MAX_PANELS {
        let q = integrate(integrand, lo, hi, 0.0, PANEL_REL_TOL)?;
        value += q.value / lambda;
        abs_error += q.abs_error / lambda;
        evaluations += q.evaluations;
        // For u ≥ u_e: a(u) − a(x) ≤ (a(u_e) − a(x)) − (u² − u_e²)/2, and
        // ∫_{u_e}^∞ e^{−(u² − u_e²)/2} du = r(u_e) < min(√(π/2), 1/u_e).
        let u_e = x + hi / lambda;
        let tail = p.drop_from_x(hi / lambda).exp() * SQRT_PI_OVER_2.min(1.0 / u_e);
        if tail <= TAIL_REL_TOL * value {
            return Ok(QuadResult { value, abs_error: abs_error + tail, evaluations });
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::NoConvergence {
        method: "A integral",
        detail: format!("tail still significant after {MAX_PANELS} panels at {z}"),
    })
}

/// `B(z) = ∫_0^{|y|} e^{a(y) − a(v)} dv`, returned for `|y|`; odd extension is
/// the caller's business (see [`mills_ratio_ab`]).
pub fn b_integral(z: HalfPlanePoint) -> Result<QuadResult> {
    let p = require_positive_x(z, "B integral")?;
    let x = p.x;
    let y = p.y;
    if y == 0.0 {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    // Slope of a(y) − a(v) at v = y.
    let mu = x * x / y + y;
    let s_end = mu * (y - V_FLOOR);
    let integrand = |s: f64| p.rise_to_y(s / mu).exp();

    let mut value = 0.0;
    let mut abs_error = 0.0;
    let mut evaluations = 0;
    let mut lo = 0.0;
    let mut hi = 1.0f64.min(s_end);
    for _ in 0..MAX_PANELS {
        let q = integrate(integrand, lo, hi, 0.0, PANEL_REL_TOL)?;
        value += q.value / mu;
        abs_error += q.abs_error / mu;
        evaluations += q.evaluations;
        if hi >= s_end {
            return Ok(QuadResult { value, abs_error: abs_error + V_FLOOR, evaluations });
        }
        // The integrand increases with v, so the rest is at most v_e times its value at v_e.
        let v_e = y - hi / mu;
        let tail = v_e * p.rise_to_y(hi / mu).exp();
        if tail <= TAIL_REL_TOL * value {
            return Ok(QuadResult { value, abs_error: abs_error + tail, evaluations });
        }
        lo = hi;
        hi = (2.0 * hi).min(s_end);
    }
    Err(Error::NoConvergence {
        method: "B integral",
        detail: format!("tail still significant after {MAX_PANELS} panels at {z}"),
    })
}

/// `r(z) = A − i·sign(y)·B`.
pub fn mills_ratio_ab(z: HalfPlanePoint) -> Result<Evaluation> {
    let a = a_integral(z)?;
    let b = b_integral(z)?;
    let im = if z.y() < 0.0 { b.value } else { -b.value };
    Ok(Evaluation {
        value: Complex64::new(a.value, im),
        abs_error_estimate: a.abs_error + b.abs_error,
        method: Method::Quadrature,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::gaussian::{dawson_rescaled, mills_ratio};
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn phase_values() {
        assert_eq!(PhaseFunction::new(1.0, 0.0).unwrap().eval(2.0), -2.0);
        assert_eq!(phase(&PhaseFunction::new(1.0, 1.0).unwrap(), 1.0), 0.0);
        let p = PhaseFunction::new(0.7, 2.3).unwrap();
        assert_eq!(p.drop_from_x(0.0), 0.0);
        assert_relative_eq!(p.drop_from_x(1.2), p.eval(1.9) - p.eval(0.7), max_relative = 1e-13);
        assert_relative_eq!(p.rise_to_y(1.9), p.eval(2.3) - p.eval(0.4), max_relative = 1e-13);
        assert!(PhaseFunction::new(0.0, 1.0).is_err());
    }

    #[test]
    fn a_reduces_to_classical_mills_integral() {
        let a = a_integral(pt(1.0, 0.0)).unwrap();
        assert_relative_eq!(a.value, 0.65567954241879847, max_relative = 1e-13);
        assert!(a.abs_error < 1e-12);
    }

    #[test]
    fn contour_bounds() {
        let z = pt(2.0, 3.0);
        let a = a_integral(z).unwrap().value;
        let b = b_integral(z).unwrap().value;
        assert!(a >= mills_ratio(pt(2.0 + 9.0 / 2.0, 0.0)).value.re);
        assert!(b <= dawson_rescaled(3.0 + 4.0 / 3.0));
        assert!(b > 0.0);
    }

    #[test]
    fn matches_primary_path() {
        for (x, y) in [(1.0, 1.0), (2.0, 3.0), (0.5, 5.0), (0.1, 8.0), (8.0, 0.1), (3.0, -2.0)] {
            let z = pt(x, y);
            let o = mills_ratio_ab(z).unwrap().value;
            let r = mills_ratio(z).value;
            assert!((o - r).norm() / r.norm() < 1e-12, "{z}: {o} vs {r}");
        }
    }

    #[test]
    fn requires_interior_point() {
        assert!(a_integral(pt(0.0, 1.0)).is_err());
        assert!(b_integral(pt(0.0, 1.0)).is_err());
        assert!(mills_ratio_ab(pt(0.0, 0.0)).is_err());
        assert_eq!(b_integral(pt(3.0, 0.0)).unwrap().value, 0.0);
    }
}
