//! Bessel functions of the first kind, their derivatives and zeros.
//!
//! Everything here targets absolute/relative accuracy around 1e-13 for the
//! argument range this library actually visits (`x` up to ~110, integer
//! orders up to [`MAX_ORDER`]). Two evaluation strategies are combined:
//!
//! * the ascending power series
//!   `J_k(x) = sum_m (-1)^m (x/2)^(k+2m) / (m! (k+m)!)`
//!   wherever it is well conditioned (small `x`, or `x` well below the
//!   turning point `2 sqrt(k+1)` where the terms start to grow), and
//! * Miller's backward recurrence with the even-order normalization
//!   `J_0 + 2 J_2 + 2 J_4 + ... = 1` everywhere else.
//!
//! The naive forward recurrence is unstable for `k > x` and is never used.
//! Zeros of `J_k` and `J_k'` are located by a coarse sign-change scan
//! followed by Brent refinement, and cached per order.

use std::sync::OnceLock;

use crate::roots::{find_root_bracketed, BracketedRoot};
use crate::{Error, Result};

/// Largest supported integer order.
///
/// The shape-perturbation sums run to mode 60 and need `J_{k+1}`, so the cap
/// sits a little above that. Zero tables (which drive the disk spectrum) are
/// only provided for orders up to [`MAX_ZERO_ORDER`].
pub const MAX_ORDER: usize = 64;

/// Largest order for which zero tables of `J_k` / `J_k'` are provided.
pub const MAX_ZERO_ORDER: usize = 20;

/// Largest zero index served by [`bessel_zero`] / [`bessel_deriv_zero`].
pub const MAX_ZERO_INDEX: usize = 20;

/// `J_k(x)` for integer order `k >= 0` and `x >= 0`.
///
/// # Errors
///
/// * [`Error::Domain`] for negative or non-finite `x`;
/// * [`Error::UnsupportedOrder`] for `k > MAX_ORDER`.
pub fn bessel_j(k: usize, x: f64) -> Result<f64> {
    check_order_arg(k, x)?;
    Ok(jn(k, x))
}

/// `J_k'(x)`, computed from the exact recurrences
/// `J_0' = -J_1` and `J_k' = (J_{k-1} - J_{k+1}) / 2`.
pub fn bessel_j_deriv(k: usize, x: f64) -> Result<f64> {
    check_order_arg(k, x)?;
    Ok(jn_deriv(k, x))
}

/// `J_k(x) / x`, stable down to `x = 0` (limit: `1/2` for `k = 1`, `0` for
/// `k >= 2`). Undefined for `k = 0`, where the quotient diverges at zero.
pub fn bessel_j_over_x(k: usize, x: f64) -> Result<f64> {
    check_order_arg(k, x)?;
    if k == 0 {
        return Err(Error::Domain(
            "J_0(x)/x diverges at x = 0; use k >= 1".into(),
        ));
    }
    if x > 1e-3 {
        return Ok(jn(k, x) / x);
    }
    // Three series terms keep the truncation error below 1e-26 for x <= 1e-3.
    let half = 0.5 * x;
    let q = half * half;
    let mut t = 0.5 * half.powi(k as i32 - 1) / factorial(k);
    let mut sum = t;
    for m in 1..=3u32 {
        t *= -q / (f64::from(m) * (m as f64 + k as f64));
        sum += t;
    }
    Ok(sum)
}

/// `n`-th positive zero `j_{k,n}` of `J_k`, with the bracket that isolated
/// it, `|J_k(root)|` as residual, and the refinement iteration count.
///
/// Results are cached per order; requests need `k <= 20`, `1 <= n <= 20`.
pub fn bessel_zero(k: usize, n: usize) -> Result<BracketedRoot> {
    zero_from_table(k, n, &J_ZERO_TABLES, build_j_zero_table)
}

/// `n`-th positive zero `j'_{k,n}` of `J_k'`, for `1 <= k <= 20`,
/// `1 <= n <= 20`. (Order 0 is excluded: `j'_{0,n} = j_{1,n}`.)
pub fn bessel_deriv_zero(k: usize, n: usize) -> Result<BracketedRoot> {
    if k == 0 {
        return Err(Error::Domain(
            "derivative zeros are tabulated for k >= 1 (J_0' = -J_1, so use bessel_zero(1, n))"
                .into(),
        ));
    }
    zero_from_table(k, n, &JP_ZERO_TABLES, build_jp_zero_table)
}

/// Logarithmic derivative `psi_k(x) = x J_k'(x) / J_k(x)` on `(0, j_{k,1})`.
///
/// On that interval `J_k > 0`, `psi_k` decreases from `psi_k(0+) = k` and
/// diverges to `-inf` at `j_{k,1}`; requires `1 <= k <= 20`.
pub fn psi(k: usize, x: f64) -> Result<f64> {
    if k == 0 || k > MAX_ZERO_ORDER {
        return Err(Error::Domain(format!(
            "psi requires 1 <= k <= {MAX_ZERO_ORDER}, got {k}"
        )));
    }
    let jk1 = bessel_zero(k, 1)?.value;
    if !(x > 0.0 && x < jk1) {
        return Err(Error::Domain(format!(
            "psi_{k} is defined on (0, {jk1:.12}), got x = {x}"
        )));
    }
    Ok(x * jn_deriv(k, x) / jn(k, x))
}

fn check_order_arg(k: usize, x: f64) -> Result<()> {
    if k > MAX_ORDER {
        return Err(Error::UnsupportedOrder(k));
    }
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!(
            "bessel argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(())
}

/// Unchecked evaluation used by the rest of the crate after argument
/// validation has happened once at the API boundary.
pub(crate) fn jn(k: usize, x: f64) -> f64 {
    debug_assert!(k <= MAX_ORDER && x >= 0.0);
    if x == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    // The series terms decrease from the start once x < 2 sqrt(k+1); with a
    // 25% safety margin it is exact-arithmetic-stable and fast. The x <= 6
    // branch tolerates mild cancellation (few ulps at k = 0) and keeps the
    // common small-argument path cheap.
    if x <= 6.0 || x * x <= 2.25 * (k as f64 + 1.0) {
        j_series(k, x)
    } else {
        j_miller(k, x)
    }
}

pub(crate) fn jn_deriv(k: usize, x: f64) -> f64 {
    if k == 0 {
        -jn(1, x)
    } else {
        0.5 * (jn(k - 1, x) - jn(k + 1, x))
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, m| acc * m as f64)
}

/// Ascending series with term-ratio stopping at 1e-17.
fn j_series(k: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = half * half;
    // First term (x/2)^k / k!; build it factor by factor so k = 64 with tiny
    // x underflows gracefully instead of 0 * inf.
    let mut term = 1.0;
    for m in 1..=k {
        term *= half / m as f64;
    }
    let mut sum = term;
    let mut scale = term.abs();
    let mut m = 1.0f64;
    while m < 250.0 {
        term *= -q / (m * (m + k as f64));
        sum += term;
        scale = scale.max(sum.abs());
        if term.abs() <= 1e-17 * scale {
            break;
        }
        m += 1.0;
    }
    sum
}

/// Miller's algorithm: run the three-term recurrence downward from an index
/// high enough that the spurious solution has decayed below 1e-16 relative,
/// then normalize with `J_0 + 2 sum_{m even >= 2} J_m = 1`.
fn j_miller(k: usize, x: f64) -> f64 {
    let start = {
        let base = (k as f64).max(x.ceil()) + 25.0 + 4.5 * x.sqrt();
        let mut m = base.ceil() as usize;
        if m % 2 == 1 {
            m += 1;
        }
        m
    };
    let mut jp = 0.0_f64; // J_{m+1} (unnormalized)
    let mut jc = 1e-30_f64; // J_m
    let mut even_sum = 0.0_f64; // sum of J_m over even m >= 2
    let mut target = if k == start { jc } else { 0.0 };
    let mut m = start;
    while m > 0 {
        let jm = (2.0 * m as f64 / x) * jc - jp; // J_{m-1}
        jp = jc;
        jc = jm;
        m -= 1;
        if m == k {
            target = jc;
        }
        if m >= 2 && m % 2 == 0 {
            even_sum += jc;
        }
        if jc.abs() > 1e250 {
            jc *= 1e-250;
            jp *= 1e-250;
            even_sum *= 1e-250;
            target *= 1e-250;
        }
    }
    // jc now holds the unnormalized J_0.
    target / (jc + 2.0 * even_sum)
}

// --- zero tables ---------------------------------------------------------

const SCAN_START_FLOOR: f64 = 1.0;
const SCAN_STEP: f64 = 0.25;
const SCAN_END: f64 = 100.0;

type ZeroTable = OnceLock<Vec<BracketedRoot>>;

#[allow(clippy::declare_interior_mutable_const)]
const EMPTY_TABLE: ZeroTable = OnceLock::new();
static J_ZERO_TABLES: [ZeroTable; MAX_ZERO_ORDER + 1] = [EMPTY_TABLE; MAX_ZERO_ORDER + 1];
static JP_ZERO_TABLES: [ZeroTable; MAX_ZERO_ORDER + 1] = [EMPTY_TABLE; MAX_ZERO_ORDER + 1];

fn zero_from_table(
    k: usize,
    n: usize,
    tables: &'static [ZeroTable; MAX_ZERO_ORDER + 1],
    build: fn(usize) -> Vec<BracketedRoot>,
) -> Result<BracketedRoot> {
    if k > MAX_ZERO_ORDER {
        return Err(Error::Domain(format!(
            "zero tables cover orders 0..={MAX_ZERO_ORDER}, got k = {k}"
        )));
    }
    if n == 0 || n > MAX_ZERO_INDEX {
        return Err(Error::Domain(format!(
            "zero index must satisfy 1 <= n <= {MAX_ZERO_INDEX}, got n = {n}"
        )));
    }
    let table = tables[k].get_or_init(|| build(k));
    table.get(n - 1).cloned().ok_or_else(|| {
        Error::BracketScanFailed(format!(
            "zero scan for order {k} found only {} roots",
            table.len()
        ))
    })
}

fn build_j_zero_table(k: usize) -> Vec<BracketedRoot> {
    scan_zeros(|x| jn(k, x), (k as f64).max(SCAN_START_FLOOR))
}

fn build_jp_zero_table(k: usize) -> Vec<BracketedRoot> {
    scan_zeros(|x| jn_deriv(k, x), (k as f64).max(SCAN_START_FLOOR))
}

/// March [`SCAN_STEP`]-sized brackets from `start` to [`SCAN_END`], refining
/// each sign change with Brent. Consecutive zeros of every `J_k` (and `J_k'`)
/// are separated by more than the step, so no root is skipped.
fn scan_zeros(f: impl Fn(f64) -> f64, start: f64) -> Vec<BracketedRoot> {
    let mut out = Vec::with_capacity(MAX_ZERO_INDEX);
    let mut lo = start;
    let mut flo = f(lo);
    while lo < SCAN_END && out.len() < MAX_ZERO_INDEX {
        let hi = lo + SCAN_STEP;
        let fhi = f(hi);
        if flo == 0.0 || flo * fhi < 0.0 {
            let root = find_root_bracketed(&f, lo, hi, 1e-14)
                .expect("scan bracket must contain a sign change");
            out.push(root);
        }
        lo = hi;
        flo = fhi;
    }
    out
}
