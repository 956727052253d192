//! Derivatives of the inverse Mills ratio by the Cauchy integral formula,
//!
//! ```text
//! R⁽ⁿ⁾(z) = n!/(2π ρⁿ) ∫₀^{2π} R(z + ρ e^{it}) e^{−int} dt,
//! ```
//!
//! discretised by the trapezoid rule on `N` equispaced nodes. The integrand is
//! periodic and analytic, so the rule converges geometrically; the error
//! estimate is the difference to the rule on the `N/2` even-numbered nodes,
//! which costs nothing extra. One node set yields every order at once.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{inverse_mills, Evaluation, Method};
use crate::pairwise::pairwise_sum;
use crate::point::HalfPlanePoint;

/// Node count is doubled up to this before giving up.
pub const MAX_NODES: usize = 4096;

/// Relative agreement required between the `N` and `N/2` rules.
pub const DOUBLING_REL_TOL: f64 = 1e-8;

/// Below this many nodes the integrand is evaluated on the calling thread.
const PARALLEL_NODES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CauchyConfig {
    radius_fraction: f64,
    node_count: usize,
}

impl CauchyConfig {
    /// `radius_fraction ∈ (0, 1)` (circle radius `= radius_fraction·x`) and a
    /// power-of-two `node_count ≥ 16`.
    pub fn new(radius_fraction: f64, node_count: usize) -> Result<Self> {
        if !(radius_fraction > 0.0 && radius_fraction < 1.0) {
            return Err(Error::Domain(format!("radius fraction must lie in (0, 1), got {radius_fraction}")));
        }
        if node_count < 16 || !node_count.is_power_of_two() {
            return Err(Error::Domain(format!("node count must be a power of two >= 16, got {node_count}")));
        }
        Ok(CauchyConfig { radius_fraction, node_count })
    }

    pub fn radius_fraction(&self) -> f64 {
        self.radius_fraction
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }
}

impl Default for CauchyConfig {
    fn default() -> Self {
        CauchyConfig { radius_fraction: 0.5, node_count: 256 }
    }
}

/// `e^{−2πi·j/N}` with the index reduced first so large `n·k` stay exact.
fn twiddle(j: usize, nodes: usize) -> Complex64 {
    let t = -TAU * (j % nodes) as f64 / nodes as f64;
    Complex64::new(t.cos(), t.sin())
}

struct Attempt {
    values: Vec<Complex64>,
    estimates: Vec<f64>,
    floors: Vec<f64>,
}

fn attempt(center: Complex64, rho: f64, nodes: usize, max_order: u32) -> Attempt {
    let eval = |k: usize| {
        let w = center + twiddle(k, nodes).conj() * rho;
        // The circle lies in Re w > 0, so the point is always valid.
        inverse_mills(HalfPlanePoint::new(w.re.max(0.0), w.im).expect("node inside the half-plane")).value
    };
    let f: Vec<Complex64> = if nodes >= PARALLEL_NODES {
        (0..nodes).into_par_iter().map(eval).collect()
    } else {
        (0..nodes).map(eval).collect()
    };
    let mean_abs = pairwise_sum(&f.iter().map(|v| v.norm()).collect::<Vec<_>>(), 0.0) / nodes as f64;

    let mut values = Vec::with_capacity(max_order as usize);
    let mut estimates = Vec::with_capacity(max_order as usize);
    let mut floors = Vec::with_capacity(max_order as usize);
    let mut scale = 1.0;
    let mut terms = vec![Complex64::new(0.0, 0.0); nodes];
    for n in 1..=max_order as usize {
        scale *= n as f64 / rho;
        for (k, t) in terms.iter_mut().enumerate() {
            *t = f[k] * twiddle(n * k, nodes);
        }
        let zero = Complex64::new(0.0, 0.0);
        let full = pairwise_sum(&terms, zero) * (scale / nodes as f64);
        let even: Vec<Complex64> = terms.iter().step_by(2).copied().collect();
        let half = pairwise_sum(&even, zero) * (scale / (nodes / 2) as f64);
        values.push(full);
        estimates.push((full - half).norm());
        floors.push(32.0 * f64::EPSILON * scale * mean_abs);
    }
    Attempt { values, estimates, floors }
}

/// R⁽¹⁾(z), …, R⁽ᵐᵃˣ⁾(z) from one node set. The node count is doubled from
/// `cfg.node_count` until every order passes the `N` vs `N/2` test (relative
/// [`DOUBLING_REL_TOL`], or below the rounding floor of the sum).
pub fn derivatives_cauchy(max_order: u32, z: HalfPlanePoint, cfg: CauchyConfig) -> Result<Vec<Evaluation>> {
    derivatives_counted(max_order, z, cfg).map(|(d, _)| d)
}

/// [`derivatives_cauchy`] plus the number of `R` evaluations it took.
pub(crate) fn derivatives_counted(
    max_order: u32,
    z: HalfPlanePoint,
    cfg: CauchyConfig,
) -> Result<(Vec<Evaluation>, usize)> {
    if max_order == 0 {
        return Err(Error::Domain("derivative order must be at least 1".into()));
    }
    z.require_interior("Cauchy differentiation")?;
    let center = Complex64::new(z.x(), z.y().abs());
    let rho = cfg.radius_fraction * z.x();
    let mut nodes = cfg.node_count;
    let mut evaluations = 0;
    loop {
        let a = attempt(center, rho, nodes, max_order);
        evaluations += nodes;
        let ok =
            (0..a.values.len()).all(|i| a.estimates[i] <= (DOUBLING_REL_TOL * a.values[i].norm()).max(a.floors[i]));
        if ok {
            let d = (0..a.values.len())
                .map(|i| {
                    let mut v = a.values[i];
                    if z.y() == 0.0 {
                        v.im = 0.0;
                    } else if z.y() < 0.0 {
                        v = v.conj();
                    }
                    Evaluation {
                        value: v,
                        abs_error_estimate: a.estimates[i].max(a.floors[i]),
                        method: Method::Quadrature,
                    }
                })
                .collect();
            return Ok((d, evaluations));
        }
        if nodes >= MAX_NODES {
            let worst = (0..a.values.len())
                .max_by(|&i, &j| {
                    (a.estimates[i] / a.values[i].norm()).total_cmp(&(a.estimates[j] / a.values[j].norm()))
                })
                .unwrap_or(0);
            return Err(Error::Accuracy(format!(
                "R^({}) at {z}: N and N/2 trapezoid rules differ by {:e} (value {:e}) with N = {nodes}",
                worst + 1,
                a.estimates[worst],
                a.values[worst].norm()
            )));
        }
        nodes *= 2;
    }
}

/// R⁽ⁿ⁾(z) by the Cauchy integral.
pub fn derivative_cauchy(n: u32, z: HalfPlanePoint, cfg: CauchyConfig) -> Result<Evaluation> {
    let all = derivatives_cauchy(n, z, cfg)?;
    Ok(all[n as usize - 1])
}

/// `|R⁽ⁿ⁾(x) − [n = 1]|·xⁿ⁻¹` at each real `x`.
///
/// These ratios tend to 0 as `x → ∞` (for `n ≥ 1` they behave like `1/x²`),
/// which is the finite-sample face of `|R⁽ⁿ⁾(z) − [n = 1]| ≪ |z|/xⁿ`.
pub fn vanishing_ratio(n: u32, x_list: &[f64]) -> Result<Vec<f64>> {
    if x_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("x values must be strictly increasing".into()));
    }
    x_list
        .iter()
        .map(|&x| {
            if x < 1.0 {
                return Err(Error::Domain(format!("x values must be >= 1, got {x}")));
            }
            let d = derivative_cauchy(n, HalfPlanePoint::real(x)?, CauchyConfig::default())?.value.re;
            let shift = if n == 1 { 1.0 } else { 0.0 };
            Ok((d - shift).abs() * x.powi(n as i32 - 1))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::derivative_bound;
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    fn r(x: f64, y: f64) -> Complex64 {
        inverse_mills(pt(x, y)).value
    }

    #[test]
    fn config_validation() {
        assert!(CauchyConfig::new(0.0, 256).is_err());
        assert!(CauchyConfig::new(1.0, 256).is_err());
        assert!(CauchyConfig::new(0.5, 8).is_err());
        assert!(CauchyConfig::new(0.5, 100).is_err());
        assert_eq!(CauchyConfig::new(0.5, 256).unwrap(), CauchyConfig::default());
    }

    #[test]
    fn first_derivative_identity() {
        // R′ = R(R − x) on the real axis, from φ′ = −xφ and Φ̄′ = −φ.
        for x in [0.3, 1.0, 2.0, 7.5] {
            let d = derivative_cauchy(1, pt(x, 0.0), CauchyConfig::default()).unwrap().value;
            let rx = r(x, 0.0).re;
            assert_relative_eq!(d.re, rx * (rx - x), max_relative = 1e-10);
            assert_eq!(d.im, 0.0);
        }
    }

    #[test]
    fn complex_first_derivative_identity() {
        let z = pt(1.0, 2.0);
        let rz = r(1.0, 2.0);
        let d = derivative_cauchy(1, z, CauchyConfig::default()).unwrap().value;
        assert!((d - rz * (rz - z.z())).norm() < 1e-10 * d.norm());
    }

    #[test]
    fn matches_central_difference() {
        let h = 1e-5;
        let fd = (r(2.0 + h, 0.0) - r(2.0 - h, 0.0)) / (2.0 * h);
        let d = derivative_cauchy(1, pt(2.0, 0.0), CauchyConfig::default()).unwrap().value;
        assert!((d - fd).norm() < 1e-6);
    }

    #[test]
    fn within_envelope() {
        let z = pt(1.0, 2.0);
        let d = derivative_cauchy(3, z, CauchyConfig::default()).unwrap();
        assert!(d.value.norm() <= derivative_bound(3, z).unwrap());
    }

    #[test]
    fn conjugation_is_exact() {
        let a = derivatives_cauchy(5, pt(1.3, 0.7), CauchyConfig::default()).unwrap();
        let b = derivatives_cauchy(5, pt(1.3, -0.7), CauchyConfig::default()).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.value, q.value.conj());
        }
    }

    #[test]
    fn all_orders_agree_with_single_order() {
        let z = pt(2.0, 1.0);
        let all = derivatives_cauchy(6, z, CauchyConfig::default()).unwrap();
        for n in 1..=6 {
            assert_eq!(all[n - 1].value, derivative_cauchy(n as u32, z, CauchyConfig::default()).unwrap().value);
        }
    }

    #[test]
    fn vanishing_ratio_trend() {
        let xs = [10.0, 30.0, 100.0, 300.0];
        for n in 1..=3 {
            let v = vanishing_ratio(n, &xs).unwrap();
            assert!(v.windows(2).all(|w| w[1] < w[0]), "n = {n}: {v:?}");
            assert!(v[3] < 1e-2 * v[0]);
        }
        assert!(vanishing_ratio(1, &[100.0]).unwrap()[0] < 1e-3);
        assert!(vanishing_ratio(1, &[2.0, 1.0]).is_err());
        assert!(vanishing_ratio(1, &[0.5]).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(derivative_cauchy(1, pt(0.0, 1.0), CauchyConfig::default()).is_err());
        assert!(derivative_cauchy(0, pt(1.0, 1.0), CauchyConfig::default()).is_err());
    }
}
