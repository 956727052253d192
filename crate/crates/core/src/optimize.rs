//! Scalar minimization and root bracketing.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// A closed interval known to contain the point of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Golden-section search for a minimum of a unimodal `f` on `[a, b]`,
/// shrinking the bracket to width `tol`.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Bracket {
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    Bracket { lo: a, hi: b }
}

/// Bisection on the sign of `g`, which must differ strictly at `a` and `b`.
pub fn bisect_sign<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, tol: f64) -> Result<Bracket> {
    let (mut lo, mut hi) = (a.min(b), a.max(b));
    let g_lo = g(lo);
    let g_hi = g(hi);
    if (g_lo * g_hi).is_nan() || g_lo * g_hi >= 0.0 {
        return Err(Error::NoConvergence {
            method: "sign bisection",
            detail: format!("no sign change on [{lo}, {hi}]: g = {g_lo:e}, {g_hi:e}"),
        });
    }
    let lo_negative = g_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(Bracket { lo: mid, hi: mid });
        }
        if (gm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracket { lo, hi })
}
