//! Numerical verification of the inequalities, constants and asymptotics,
//! organised as named suites over deterministic pseudo-random samples.
//!
//! Every suite draws from its own ChaCha8 stream (seed, suite index), so the
//! outcome depends only on the seed and level, not on scheduling.

use std::f64::consts::PI;
use std::fmt::Display;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounds::{derivative_bound, elliptic_j, elliptic_params, r_envelope_check, s_band_check_with_floor};
use crate::consts::{BAND_FLOOR, SQRT_2_OVER_PI};
use crate::derivatives::{derivatives_cauchy, vanishing_ratio, CauchyConfig};
use crate::error::Result;
use crate::extremal::{
    extremal_constants, find_y_star, real_axis_ratio, s, s1, s2, vertical_min_sweep, x_star, SWEEP_Y_RANGE,
    S_AT_Y_STAR_CERTIFIED, Y_STAR_CERTIFIED,
};
use crate::figure::{grid_values, GridQuantity, GridSpec};
use crate::gaussian::{
    dawson_rescaled, gaussian_tail, imaginary_axis_integral, inverse_mills, mills_ratio, normalized_ratio, phi,
    s_imaginary_axis_stable,
};
use crate::oracle::{a_integral, b_integral, mills_ratio_ab};
use crate::point::HalfPlanePoint;
use crate::summation::{sum_direct, sum_euler_maclaurin, SumRequest};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

impl Level {
    fn pick(self, quick: usize, full: usize) -> usize {
        match self {
            Level::Quick => quick,
            Level::Full => full,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub level: Level,
    pub seed: u64,
    /// Lower end of the `|S|` band used by the band checks. Only test
    /// fixtures should change it.
    pub band_floor: f64,
}

impl VerifyConfig {
    pub fn new(level: Level, seed: u64) -> Self {
        VerifyConfig { level, seed, band_floor: BAND_FLOOR }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub check: String,
    pub point: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VerificationSummary {
    pub suites: Vec<SuiteReport>,
    pub wall_time: Duration,
}

impl VerificationSummary {
    pub fn checks_run(&self) -> usize {
        self.suites.iter().map(|s| s.checks).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = (&'static str, &Failure)> {
        self.suites.iter().flat_map(|s| s.failures.iter().map(move |f| (s.name, f)))
    }

    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

struct Recorder {
    checks: usize,
    failures: Vec<Failure>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, check: &str, point: impl Display, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(Failure { check: check.to_string(), point: point.to_string(), detail: detail() });
        }
    }

    /// Records a library error as a failed check.
    fn ok<T>(&mut self, r: Result<T>, check: &str, point: impl Display) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, check, point, || e.to_string());
                None
            }
        }
    }

    fn merge(&mut self, other: Recorder) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }

    /// Runs `f` over `items` in parallel and merges in input order.
    fn each<T: Sync, F: Fn(&mut Recorder, &T) + Sync + Send>(&mut self, items: &[T], f: F) {
        let parts: Vec<Recorder> = items
            .par_iter()
            .map(|item| {
                let mut r = Recorder::new();
                f(&mut r, item);
                r
            })
            .collect();
        for p in parts {
            self.merge(p);
        }
    }
}

type SuiteFn = fn(&VerifyConfig, &mut ChaCha8Rng, &mut Recorder);

const SUITES: &[(&str, SuiteFn)] = &[
    ("conjugation", suite_conjugation),
    ("sign_structure", suite_sign_structure),
    ("s_band", suite_s_band),
    ("r_envelope", suite_r_envelope),
    ("oracle_equivalence", suite_oracle),
    ("imaginary_axis_stability", suite_axis_stability),
    ("ode_identities", suite_ode),
    ("extremal_constants", suite_constants),
    ("derivative_ratios", suite_derivative_ratios),
    ("monotonicity", suite_monotonicity),
    ("vertical_sweep", suite_vertical_sweep),
    ("derivative_envelope", suite_derivative_envelope),
    ("derivative_consistency", suite_derivative_consistency),
    ("vanishing_ratio", suite_vanishing_ratio),
    ("asymptotics", suite_asymptotics),
    ("elliptic_bracketing", suite_elliptic),
    ("summation", suite_summation),
    ("figure_band", suite_figure),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

fn run_one(index: usize, cfg: &VerifyConfig) -> SuiteReport {
    let (name, f) = SUITES[index];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let mut rec = Recorder::new();
    f(cfg, &mut rng, &mut rec);
    SuiteReport { name, checks: rec.checks, failures: rec.failures }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Option<SuiteReport> {
    SUITES.iter().position(|(n, _)| *n == name).map(|i| run_one(i, cfg))
}

/// Runs every suite.
pub fn run(cfg: &VerifyConfig) -> VerificationSummary {
    let start = Instant::now();
    let suites = (0..SUITES.len()).into_par_iter().map(|i| run_one(i, cfg)).collect();
    VerificationSummary { suites, wall_time: start.elapsed() }
}

fn pt(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new(x, y).expect("sample point lies in the half-plane")
}

/// Points with `|z| ≤ radius`: half uniform over the half-disc, half with
/// log-uniform modulus down to 1e-3 so the neighbourhood of 0 is covered.
fn sample_half_disc(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<HalfPlanePoint> {
    (0..n)
        .map(|k| {
            let rho = if k % 2 == 0 {
                radius * rng.gen::<f64>().sqrt()
            } else {
                (rng.gen_range((1e-3f64).ln()..radius.ln())).exp()
            };
            let th = rng.gen_range(-PI / 2.0..=PI / 2.0);
            pt((rho * th.cos()).max(0.0), rho * th.sin())
        })
        .collect()
}

fn sample_box(rng: &mut ChaCha8Rng, n: usize, x: (f64, f64), y: (f64, f64)) -> Vec<HalfPlanePoint> {
    (0..n).map(|_| pt(rng.gen_range(x.0..=x.1), rng.gen_range(y.0..=y.1))).collect()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn suite_conjugation(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let pts = sample_half_disc(rng, cfg.level.pick(1000, 1000), 20.0);
    rec.each(&pts, |rec, &z| {
        let c = z.conj();
        if let (Ok(a), Ok(b)) = (phi(z.z()), phi(c.z())) {
            rec.check(b == a.conj(), "phi(conj z) = conj phi(z)", z, || format!("{b} vs {}", a.conj()));
        }
        if let (Ok(a), Ok(b)) = (gaussian_tail(z), gaussian_tail(c)) {
            rec.check(b.value == a.value.conj(), "tail(conj z) = conj tail(z)", z, || {
                format!("{} vs {}", b.value, a.value.conj())
            });
        }
        let (a, b) = (inverse_mills(z).value, inverse_mills(c).value);
        rec.check(b == a.conj(), "R(conj z) = conj R(z)", z, || format!("{b} vs {}", a.conj()));
        let (a, b) = (normalized_ratio(z).value, normalized_ratio(c).value);
        rec.check(b == a.conj() && a.norm() == b.norm(), "S(conj z) = conj S(z)", z, || format!("{b} vs {}", a.conj()));
    });
}

fn suite_sign_structure(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let mut pts = sample_half_disc(rng, cfg.level.pick(2000, 10_000), 50.0);
    pts.extend((0..50).map(|k| pt(0.2 * k as f64, 0.0)));
    rec.each(&pts, |rec, &z| {
        let r = inverse_mills(z).value;
        rec.check(r.re > 0.0, "Re R > 0", z, || format!("Re R = {:e}", r.re));
        let same = (r.im > 0.0) == (z.y() > 0.0) && (r.im < 0.0) == (z.y() < 0.0);
        rec.check(same, "sign Im R = sign Im z", z, || format!("Im R = {:e}, Im z = {:e}", r.im, z.y()));
    });
}

/// Sample for the band checks, with the equality points excluded.
fn band_sample(cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Vec<HalfPlanePoint> {
    let y_star = 0.5 * (Y_STAR_CERTIFIED.lo + Y_STAR_CERTIFIED.hi);
    let mut pts: Vec<HalfPlanePoint> = sample_half_disc(rng, cfg.level.pick(2000, 10_000), 50.0)
        .into_iter()
        .filter(|z| z.norm() > 1e-3 && (z.z() - Complex64::new(0.0, y_star)).norm() > 1e-3)
        .filter(|z| (z.z() - Complex64::new(0.0, -y_star)).norm() > 1e-3)
        .collect();
    // The imaginary axis, where the band is tightest.
    pts.extend((1..=200).map(|k| pt(0.0, 0.05 * k as f64)));
    pts
}

fn suite_s_band(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let floor = cfg.band_floor;
    let o = s_band_check_with_floor(HalfPlanePoint::ORIGIN, floor);
    rec.check(o.passed && o.boundary_equality, "|S(0)| = 1", o.point, || format!("|S(0)| = {}", o.quantity));
    let pts = band_sample(cfg, rng);
    rec.each(&pts, |rec, &z| {
        let b = s_band_check_with_floor(z, floor);
        rec.check(b.passed, "floor < |S| < 1", z, || format!("|S| = {:e}, band ({floor}, 1)", b.quantity));
    });
}

fn suite_r_envelope(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let o = r_envelope_check(HalfPlanePoint::ORIGIN);
    rec.check(o.passed && o.boundary_equality, "|R(0)| = sqrt(2/pi)", o.point, || {
        format!("{} vs {}", o.quantity, o.envelope)
    });
    let pts = band_sample(cfg, rng);
    rec.each(&pts, |rec, &z| {
        let b = r_envelope_check(z);
        rec.check(b.passed, "|R| < |z + sqrt(2/pi)|", z, || format!("{:e} vs {:e}", b.quantity, b.envelope));
    });
}

fn suite_oracle(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let n = cfg.level.pick(12, 30);
    let pts: Vec<HalfPlanePoint> = (0..n)
        .flat_map(|i| {
            let x = 0.1 * 80f64.powf(i as f64 / (n - 1) as f64);
            (0..n).map(move |j| pt(x, 8.0 * j as f64 / (n - 1) as f64))
        })
        .collect();
    rec.each(&pts, |rec, &z| {
        let r = mills_ratio(z).value;
        if let Some(o) = rec.ok(mills_ratio_ab(z), "A - iB evaluates", z) {
            let d = rel(o.value, r);
            rec.check(d < 1e-10, "A - iB = r", z, || format!("{} vs {r} (rel {d:e})", o.value));
            rec.check(o.value.re > 0.0, "A > 0", z, || format!("A = {:e}", o.value.re));
            let b_ok = if z.y() > 0.0 { o.value.im < 0.0 } else { o.value.im == 0.0 };
            rec.check(b_ok, "B > 0 iff y > 0", z, || format!("B = {:e}", -o.value.im));
        }
    });
}

fn suite_axis_stability(_cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let ys: Vec<f64> = (0..=600).map(|k| k as f64 / 100.0).collect();
    rec.each(&ys, |rec, &y| {
        let z = pt(0.0, y);
        let stable = s_imaginary_axis_stable(y);
        let direct = normalized_ratio(z).value.norm_sqr();
        rec.check((stable - direct).abs() < 1e-12, "stable s = |S(iy)|^2", z, || format!("{stable:e} vs {direct:e}"));
        if let (Ok(t), Ok(e)) = (gaussian_tail(z), imaginary_axis_integral(y)) {
            let ok = t.value.re == 0.5 && (t.value.im + e).abs() <= 1e-12 * e.abs().max(1.0);
            rec.check(ok, "tail(iy) = 1/2 - iE(y)", z, || format!("{} vs 0.5 - {e:e}i", t.value));
        }
    });
}

fn suite_ode(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let h = 1e-5;
    let pts: Vec<HalfPlanePoint> =
        sample_half_disc(rng, cfg.level.pick(100, 400), 20.0).into_iter().map(|z| pt(z.x().max(0.1), z.y())).collect();
    rec.each(&pts, |rec, &z| {
        let r = |w: Complex64| mills_ratio(HalfPlanePoint::from_complex(w).expect("step stays inside")).value;
        let c = z.z();
        let fd = (r(c + h) - r(c - h)) / (2.0 * h);
        let rhs = c * r(c) - 1.0;
        rec.check((fd - rhs).norm() <= 1e-6, "r' = z r - 1", z, || format!("{fd} vs {rhs}"));
    });
    let ys: Vec<f64> = (0..cfg.level.pick(100, 400)).map(|_| rng.gen_range(h..20.0)).collect();
    rec.each(&ys, |rec, &y| {
        let fd = (dawson_rescaled(y + h) - dawson_rescaled(y - h)) / (2.0 * h);
        let rhs = 1.0 - y * dawson_rescaled(y);
        rec.check((fd - rhs).abs() <= 1e-6, "tr' = 1 - y tr", y, || format!("{fd:e} vs {rhs:e}"));
    });
}

fn in_open(v: f64, lo: f64, hi: f64) -> bool {
    lo < v && v < hi
}

fn suite_constants(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let Some(k) = rec.ok(extremal_constants(), "extremal constants", "-") else { return };
    let b = k.y_star_bracket;
    rec.check(
        Y_STAR_CERTIFIED.lo < b.lo && b.hi < Y_STAR_CERTIFIED.hi && b.width() <= 1e-6,
        "y* in (1.6267, 1.6268), bracket <= 1e-6",
        "y*",
        || format!("bracket [{}, {}]", b.lo, b.hi),
    );
    rec.check(
        cfg.band_floor <= k.s_at_y_star && k.s_at_y_star <= S_AT_Y_STAR_CERTIFIED.hi,
        "|S(iy*)| in [floor, 0.6863]",
        "iy*",
        || format!("{} vs [{}, {}]", k.s_at_y_star, cfg.band_floor, S_AT_Y_STAR_CERTIFIED.hi),
    );
    let xs = (PI - 1.0) * (2.0 / PI).sqrt();
    rec.check((k.x_star - xs).abs() < 1e-12, "x* = (pi - 1) sqrt(2/pi)", "x*", || format!("{} vs {xs}", k.x_star));
    rec.check(in_open(k.s_at_x_star, 0.8435, 0.8455), "S(x*) in (0.8435, 0.8455)", "x*", || {
        format!("{}", k.s_at_x_star)
    });
    rec.check(in_open(k.y21, 0.684, 0.687), "y21 in (0.684, 0.687)", "y21", || format!("{}", k.y21));
    rec.check(in_open(k.y22, 1.406, 1.409), "y22 in (1.406, 1.409)", "y22", || format!("{}", k.y22));
    rec.check(k.y21_bracket.width() <= 1e-8 && k.y22_bracket.width() <= 1e-8, "turning point brackets", "-", || {
        format!("{} / {}", k.y21_bracket.width(), k.y22_bracket.width())
    });
    rec.check(in_open(s(1.0), 0.5525, 0.5545), "s(1) in (0.5525, 0.5545)", 1.0, || format!("{}", s(1.0)));
    rec.check(in_open(s(3.0), 0.6695, 0.6715), "s(3) in (0.6695, 0.6715)", 3.0, || format!("{}", s(3.0)));
    rec.check(s(0.0) == 1.0, "s(0) = 1", 0.0, || format!("{}", s(0.0)));
}

/// Agreement to 1e-8, relative away from 0 and absolute near a zero (s₁
/// vanishes at y² = 1 − 2/π).
fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-8 * b.abs().max(1.0)
}

fn suite_derivative_ratios(_cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let c = 2.0 / PI;
    let h = 1e-5;
    let ys: Vec<f64> = (0..20).map(|_| rng.gen_range(0.1..5.0)).collect();
    rec.each(&ys, |rec, &y| {
        let phi_iy = |v: f64| phi(Complex64::new(0.0, v)).expect("moderate y").re;
        let f = |v: f64| phi_iy(v).powi(2) / (v * v + c);
        let g = |v: f64| 0.25 + imaginary_axis_integral(v).expect("moderate y").powi(2);
        let ratio = (f(y + h) - f(y - h)) / (g(y + h) - g(y - h));
        rec.check(close(s1(y), ratio), "s1 = f'/g'", y, || format!("{} vs {ratio}", s1(y)));
        let f1 = |v: f64| v * phi_iy(v) * (v * v + c - 1.0) / (v * v + c).powi(2);
        let ratio2 = (f1(y + h) - f1(y - h)) / (2.0 * h) / phi_iy(y);
        rec.check(close(s2(y), ratio2), "s2 = f1'/g1'", y, || format!("{} vs {ratio2}", s2(y)));
    });
    let xs: Vec<f64> = (0..20).map(|_| rng.gen_range(0.05..6.0)).collect();
    rec.each(&xs, |rec, &x| {
        let f = |v: f64| phi(Complex64::new(v, 0.0)).expect("real").re / (v + SQRT_2_OVER_PI);
        let g = |v: f64| gaussian_tail(pt(v, 0.0)).expect("real").value.re;
        let ratio = (f(x + h) - f(x - h)) / (g(x + h) - g(x - h));
        let hx = real_axis_ratio(x);
        rec.check(close(hx, ratio), "h = f'/g' on the real axis", x, || format!("{hx} vs {ratio}"));
    });
}

/// Indices where the sign of successive differences changes.
fn sign_changes(values: &[f64]) -> (Vec<bool>, Vec<usize>) {
    let up: Vec<bool> = values.windows(2).map(|w| w[1] > w[0]).collect();
    let changes = up.windows(2).enumerate().filter(|(_, w)| w[0] != w[1]).map(|(i, _)| i + 1).collect();
    (up, changes)
}

fn suite_monotonicity(_cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    // s: down then up, one change, bracketing y*.
    let grid: Vec<f64> = (0..=600).map(|k| k as f64 / 100.0).collect();
    let (up, ch) = sign_changes(&grid.iter().map(|&y| s(y)).collect::<Vec<_>>());
    let ok = ch.len() == 1 && !up[0] && {
        let k = ch[0];
        grid[k - 1] < Y_STAR_CERTIFIED.lo && Y_STAR_CERTIFIED.hi < grid[k + 1]
    };
    rec.check(ok, "s decreases then increases, turning at y*", "y in [0, 6]", || format!("changes at {ch:?}"));
    // s1 increasing.
    let g1: Vec<f64> = (1..=600).map(|k| k as f64 / 100.0).collect();
    let v1: Vec<f64> = g1.iter().map(|&y| s1(y)).collect();
    let bad = v1.windows(2).position(|w| w[1] <= w[0]);
    rec.check(bad.is_none(), "s1 increasing on (0, 6]", "y in (0, 6]", || {
        format!("fails after y = {}", g1[bad.unwrap_or(0)])
    });
    // s2: up, down, up with turns near y21, y22.
    let g2: Vec<f64> = (0..=1200).map(|k| k as f64 / 200.0).collect();
    let (up2, ch2) = sign_changes(&g2.iter().map(|&y| s2(y)).collect::<Vec<_>>());
    let ok = up2[0] && ch2.len() == 2 && (g2[ch2[0]] - 0.68585).abs() < 1e-2 && (g2[ch2[1]] - 1.40738).abs() < 1e-2;
    rec.check(ok, "s2 rises, falls, rises", "y in [0, 6]", || {
        format!("changes at {:?}", ch2.iter().map(|&k| g2[k]).collect::<Vec<_>>())
    });
    // h: down on [0, x*], up after.
    let xs = x_star();
    let gh: Vec<f64> = (0..=800).map(|k| k as f64 / 100.0).collect();
    let (uph, chh) = sign_changes(&gh.iter().map(|&x| real_axis_ratio(x)).collect::<Vec<_>>());
    let ok = !uph[0] && chh.len() == 1 && gh[chh[0] - 1] < xs && xs < gh[chh[0] + 1];
    rec.check(ok, "h decreases then increases, turning at x*", "x in [0, 8]", || format!("changes at {chh:?}"));
}

fn suite_vertical_sweep(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let xs = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];
    let Some(m) = rec.ok(vertical_min_sweep(&xs, SWEEP_Y_RANGE), "vertical sweep", "-") else { return };
    for w in m.windows(2) {
        rec.check(w[1].min_abs_s > w[0].min_abs_s, "minima strictly increasing in x", w[1].x, || {
            format!("{} after {}", w[1].min_abs_s, w[0].min_abs_s)
        });
    }
    for v in &m {
        rec.check(cfg.band_floor < v.min_abs_s && v.min_abs_s < 1.0, "minimum inside the band", v.x, || {
            format!("{} vs ({}, 1)", v.min_abs_s, cfg.band_floor)
        });
    }
    if let Some(ys) = rec.ok(find_y_star(), "y*", "-") {
        rec.check((m[0].min_abs_s - ys.s_at_y_star).abs() < 1e-3, "minimum at x = 0 is |S(iy*)|", 0.0, || {
            format!("{} vs {}", m[0].min_abs_s, ys.s_at_y_star)
        });
    }
}

fn suite_derivative_envelope(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let pts = sample_box(rng, cfg.level.pick(10, 50), (0.5, 8.0), (-8.0, 8.0));
    rec.each(&pts, |rec, &z| {
        let Some(d) = rec.ok(derivatives_cauchy(10, z, CauchyConfig::default()), "Cauchy derivatives", z) else {
            return;
        };
        for (i, e) in d.iter().enumerate() {
            let n = i as u32 + 1;
            if let Some(b) = rec.ok(derivative_bound(n, z), "derivative bound", z) {
                rec.check(e.value.norm() < b, "|R^(n)| < R^(n)_max", z, || {
                    format!("n = {n}: {:e} vs {b:e}", e.value.norm())
                });
            }
        }
    });
}

fn suite_derivative_consistency(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let pts = sample_box(rng, cfg.level.pick(10, 30), (0.5, 8.0), (-8.0, 8.0));
    let wide = CauchyConfig::new(0.9, 256).expect("valid config");
    rec.each(&pts, |rec, &z| {
        let r = |w: Complex64| inverse_mills(HalfPlanePoint::from_complex(w).expect("step stays inside")).value;
        let Some(d) = rec.ok(derivatives_cauchy(6, z, CauchyConfig::default()), "Cauchy derivatives", z) else {
            return;
        };
        let c = z.z();
        let fd1 = (r(c + 1e-5) - r(c - 1e-5)) / 2e-5;
        rec.check((d[0].value - fd1).norm() < 1e-6, "R' vs central difference", z, || {
            format!("{} vs {fd1}", d[0].value)
        });
        let fd2 = (r(c + 1e-3) - 2.0 * r(c) + r(c - 1e-3)) / 1e-6;
        rec.check((d[1].value - fd2).norm() < 1e-4, "R'' vs central difference", z, || {
            format!("{} vs {fd2}", d[1].value)
        });
        if let Some(w) = rec.ok(derivatives_cauchy(6, z, wide), "Cauchy derivatives, radius 0.9x", z) {
            // Near the axis the small-radius sum is rounding-limited; its own
            // estimate then exceeds 1e-8 relative and is the yardstick.
            for (n, (p, q)) in d.iter().zip(&w).enumerate() {
                let e = rel(q.value, p.value);
                let allowed = (1e-8f64).max((p.abs_error_estimate + q.abs_error_estimate) / p.value.norm());
                rec.check(e < allowed, "radius invariance", z, || {
                    format!("n = {}: rel {e:e}, allowed {allowed:e}", n + 1)
                });
            }
        }
        if let Some(cj) = rec.ok(derivatives_cauchy(6, z.conj(), CauchyConfig::default()), "conjugate", z) {
            for (p, q) in d.iter().zip(&cj) {
                rec.check((p.value - q.value.conj()).norm() <= 1e-10 * p.value.norm(), "R^(n)(conj z)", z, || {
                    format!("{} vs {}", q.value, p.value.conj())
                });
            }
        }
    });
    let x = 1.0;
    if let Some(d) = rec.ok(derivatives_cauchy(1, pt(x, 0.0), CauchyConfig::default()), "R'(1)", x) {
        let rx = inverse_mills(pt(x, 0.0)).value.re;
        let want = rx * (rx - x);
        rec.check((d[0].value.re - want).abs() < 1e-8, "R'(x) = R(R - x)", x, || {
            format!("{} vs {want}", d[0].value.re)
        });
    }
}

fn suite_vanishing_ratio(_cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let xs = [10.0, 30.0, 100.0, 300.0];
    for n in 1..=3u32 {
        if let Some(v) = rec.ok(vanishing_ratio(n, &xs), "vanishing ratio", n) {
            let ok = v.windows(2).all(|w| w[1] < w[0]) && v[3] < 1e-2 * v[0];
            rec.check(ok, "ratio decreasing, last < 1e-2 first", format!("n = {n}"), || format!("{v:?}"));
        }
    }
}

fn suite_asymptotics(_cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let mut pts: Vec<HalfPlanePoint> =
        [15.0f64, 45.0, 75.0].iter().map(|d| pt(1e3 * d.to_radians().cos(), 1e3 * d.to_radians().sin())).collect();
    pts.push(pt(0.01, 1e3));
    for &z in &pts {
        let q = inverse_mills(z).value / z.z();
        rec.check((q - 1.0).norm() < 1e-2, "R(z)/z -> 1", z, || format!("R/z = {q}"));
    }
    for &z in &pts[..3] {
        let m = z.norm().powi(2);
        if let (Some(a), Some(b)) = (rec.ok(a_integral(z), "A", z), rec.ok(b_integral(z), "B", z)) {
            let (ra, rb) = (a.value * m / z.x(), b.value * m / z.y());
            rec.check((ra - 1.0).abs() < 1e-2, "A (x^2 + y^2)/x -> 1", z, || format!("{ra}"));
            rec.check((rb - 1.0).abs() < 1e-2, "B (x^2 + y^2)/y -> 1", z, || format!("{rb}"));
        }
    }
    let xr = 1e3 * mills_ratio(pt(1e3, 0.0)).value.re;
    rec.check((xr - 1.0).abs() < 1e-2, "x r(x) -> 1", 1e3, || format!("{xr}"));
    let yt = 1e3 * dawson_rescaled(1e3);
    rec.check((yt - 1.0).abs() < 1e-2, "y tr(y) -> 1", 1e3, || format!("{yt}"));
    let y50 = 50.0 * dawson_rescaled(50.0);
    rec.check((y50 - 1.0).abs() < 1e-3, "50 tr(50) near 1", 50.0, || format!("{y50}"));
    let r100 = inverse_mills(pt(100.0, 0.0)).value.re / 100.0;
    rec.check((0.9999..=1.0001).contains(&r100), "R(100)/100 near 1", 100.0, || format!("{r100}"));
    let s1000 = normalized_ratio(pt(1e3, 0.0)).value.norm();
    rec.check(s1000 > 0.999, "|S(1000)| > 0.999", 1e3, || format!("{s1000}"));
}

fn suite_elliptic(_cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let bs: Vec<f64> = (0..50).map(|k| k as f64 / 49.0).collect();
    let js: Vec<Option<f64>> = bs.iter().map(|&b| rec.ok(elliptic_j(1.0, b), "J(1, b)", b)).collect();
    if js.iter().all(Option::is_some) {
        let j: Vec<f64> = js.into_iter().flatten().collect();
        let bad = j.windows(2).position(|w| w[1] > w[0]);
        rec.check(bad.is_none(), "J(1, b) nonincreasing", "b in [0, 1]", || format!("{bad:?}"));
        let bad = j.windows(3).position(|w| w[0] - 2.0 * w[1] + w[2] > 1e-13);
        rec.check(bad.is_none(), "J(1, b) concave", "b in [0, 1]", || format!("{bad:?}"));
        let ratio = j[49] / j[0];
        rec.check(in_open(ratio, 0.9002, 0.9004), "J(1,1)/J(1,0) in (0.9002, 0.9004)", 1.0, || format!("{ratio}"));
        rec.check(ratio > 0.9, "J(a, a) > (9/10) J(a, 0)", 1.0, || format!("{ratio}"));
    }
    for a in [0.5, 1.0, 4.0, 30.0] {
        if let (Some(j0), Some(ja)) = (rec.ok(elliptic_j(a, 0.0), "J(a, 0)", a), rec.ok(elliptic_j(a, a), "J(a, a)", a))
        {
            let want0 = 2.0 * PI * a.sqrt();
            let wanta = 4.0 * (2.0 * a).sqrt();
            rec.check((j0 / want0 - 1.0).abs() < 1e-12, "J(a, 0) = 2 pi sqrt(a)", a, || format!("{j0} vs {want0}"));
            rec.check((ja / wanta - 1.0).abs() < 1e-12, "J(a, a) = 4 sqrt(2a)", a, || format!("{ja} vs {wanta}"));
        }
    }
    for z in sample_box(rng, 50, (0.01, 10.0), (-10.0, 10.0)) {
        if let Some(p) = rec.ok(elliptic_params(z), "elliptic parameters", z) {
            rec.check(0.0 <= p.b && p.b <= p.a, "0 <= b <= a", z, || format!("a = {}, b = {}", p.a, p.b));
        }
    }
}

fn suite_summation(cfg: &VerifyConfig, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let reqs: Vec<SumRequest> = (0..cfg.level.pick(4, 10))
        .map(|_| {
            SumRequest::new(rng.gen_range(10.0..=50.0), rng.gen_range(0.01..=0.5), rng.gen_range(100..=5000), 4)
                .expect("valid request")
        })
        .collect();
    rec.each(&reqs, |rec, req| {
        let label = format!("x0 = {}, delta = {}, N = {}", req.x0, req.delta, req.count);
        if let (Some(d), Some(e)) =
            (rec.ok(sum_direct(req), "direct sum", &label), rec.ok(sum_euler_maclaurin(req), "Euler-Maclaurin", &label))
        {
            let gap = (d.value - e.value).abs();
            rec.check(gap <= e.remainder_bound, "|EM - direct| <= remainder bound", &label, || {
                format!("{gap:e} vs {:e}", e.remainder_bound)
            });
            let rb = e.remainder_bound / d.value.abs();
            rec.check(rb < 1e-6, "remainder bound / |sum| < 1e-6", &label, || format!("{rb:e}"));
        }
    });
}

fn suite_figure(cfg: &VerifyConfig, _rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let spec = GridSpec::default_for(GridQuantity::AbsS);
    if let Some(g) = rec.ok(grid_values(&spec, GridQuantity::AbsS), "absS grid", "default") {
        let v: Vec<f64> = g.iter().flatten().map(|p| p.value).collect();
        let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        rec.check(
            in_open(lo, 0.686, 0.687) && lo > cfg.band_floor,
            "min |S| on the grid in (0.686, 0.687)",
            "absS",
            || format!("{lo}"),
        );
        rec.check(hi <= 1.0 + 1e-12, "max |S| on the grid <= 1", "absS", || format!("{hi}"));
    }
    let spec = GridSpec::default_for(GridQuantity::ImS);
    if let Some(g) = rec.ok(grid_values(&spec, GridQuantity::ImS), "imS grid", "default") {
        let worst = g
            .iter()
            .map(|b| (0..b.len()).map(|j| (b[j].value + b[b.len() - 1 - j].value).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        rec.check(worst <= 1e-12, "Im S antisymmetric in y", "imS", || format!("{worst:e}"));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn at_least_twelve_suites() {
        assert!(suite_names().len() >= 12);
    }

    #[test]
    fn quick_run_passes() {
        let summary = run(&VerifyConfig::new(Level::Quick, 1));
        let fails: Vec<_> = summary.failures().collect();
        assert!(summary.passed(), "{fails:#?}");
        assert!(summary.checks_run() > 1000);
    }

    #[test]
    fn raised_floor_is_caught() {
        let cfg = VerifyConfig { band_floor: 0.7, ..VerifyConfig::new(Level::Quick, 1) };
        let band = run_suite("s_band", &cfg).unwrap();
        assert!(!band.passed());
        assert!(!run_suite("vertical_sweep", &cfg).unwrap().passed());
        assert!(run_suite("no_such_suite", &cfg).is_none());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = VerifyConfig::new(Level::Quick, 5);
        let a = run_suite("s_band", &cfg).unwrap();
        let b = run_suite("s_band", &cfg).unwrap();
        assert_eq!(a, b);
    }
}
