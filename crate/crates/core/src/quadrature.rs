//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Subdivision budget before [`integrate`] gives up.
pub const MAX_SUBDIVISIONS: usize = 4000;

/// Smallest relative tolerance [`integrate`] will try to meet.
pub const MIN_REL_TOL: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod panel on [a, b] with the QUADPACK error heuristic.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut gauss = 0.0;
    let mut kronrod = fc * WGK[10];
    let mut abs_sum = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    (result, err)
}

/// ∫_a^b f by bisecting the panel with the largest error estimate until the
/// total estimate is at most `max(abs_tol, rel_tol·|value|)`.
///
/// `rel_tol` below [`MIN_REL_TOL`] is raised to it: the per-panel estimate
/// never drops below the rounding floor `50·eps·∫|f|`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<QuadResult> {
    let rel_tol = rel_tol.max(MIN_REL_TOL);
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration limits [{a}, {b}] must be finite")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let (value, error) = gauss_kronrod_21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    let mut evaluations = 21;
    let mut subdivisions = 0;
    while total_err > abs_tol.max(rel_tol * total.abs()) {
        if subdivisions >= MAX_SUBDIVISIONS {
            return Err(Error::NoConvergence {
                method: "adaptive Gauss-Kronrod",
                detail: format!(
                    "on [{a}, {b}] after {subdivisions} subdivisions: value {total:e}, error {total_err:e}"
                ),
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Panel cannot be split further in floating point; accept what we have.
            heap.push(worst);
            break;
        }
        let (v1, e1) = gauss_kronrod_21(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_21(&f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-add from scratch to shed the drift of the running updates.
    let value: f64 = heap.iter().map(|p| p.value).sum();
    let abs_error: f64 = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult { value, abs_error, evaluations })
}
