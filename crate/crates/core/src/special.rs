//! Bessel function of the first kind, order zero.
//!
//! Three regimes, each accurate to a few ulp of the normalization sum:
//!
//! * `|x| <= 2`: the power series `sum (-x^2/4)^m / (m!)^2`, whose terms never
//!   exceed 1 there, so there is no cancellation.
//! * `2 < |x| <= 200`: Miller's backward recurrence on `J_n`, normalized with
//!   `J_0 + 2 sum_k J_{2k} = 1`.
//! * `|x| > 200`: Hankel's asymptotic expansion; the smallest term is of order
//!   `exp(-2|x|)`, far below double precision.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{require_finite, Result};

const SERIES_LIMIT: f64 = 2.0;
const ASYMPTOTIC_LIMIT: f64 = 200.0;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J0(x)`, rejecting non-finite input.
pub fn bessel_j0(x: f64) -> Result<f64> {
    require_finite("x", x)?;
    Ok(j0(x))
}

/// Unchecked `J0(x)` for internal hot loops. Returns NaN for non-finite input.
pub(crate) fn j0(x: f64) -> f64 {
    let ax = x.abs();
    if !ax.is_finite() {
        return f64::NAN;
    }
    if ax <= SERIES_LIMIT {
        series(ax)
    } else if ax <= ASYMPTOTIC_LIMIT {
        miller(ax)
    } else {
        hankel(ax)
    }
}

fn series(ax: f64) -> f64 {
    let q = -0.25 * ax * ax;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..40 {
        let mf = m as f64;
        term *= q / (mf * mf);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn miller(ax: f64) -> f64 {
    // Starting order well past the turning point n ~ x; more terms only help.
    let start = 2 * (((1.2 * ax + 40.0) / 2.0).ceil() as usize);
    let two_over_x = 2.0 / ax;

    let mut next = 0.0; // b_{k+1}
    let mut cur = 1e-30; // b_k, k = start
    let mut even_sum = 0.0; // sum of b_{2j}, j >= 1

    for k in (1..=start).rev() {
        let prev = (k as f64) * two_over_x * cur - next;
        next = cur;
        cur = prev;
        let order = k - 1;
        if order > 0 && order % 2 == 0 {
            even_sum += cur;
        }
        if cur.abs() > RESCALE_ABOVE {
            cur *= RESCALE_BY;
            next *= RESCALE_BY;
            even_sum *= RESCALE_BY;
        }
    }
    cur / (cur + 2.0 * even_sum)
}

fn hankel(ax: f64) -> f64 {
    // |a_k| = prod_{j=1..k} (2j-1)^2 / (k! 8^k), a_k alternating from a_1 < 0;
    // P = sum (-1)^m a_2m x^-2m, Q = sum (-1)^m a_(2m+1) x^-(2m+1).
    let inv = 1.0 / ax;
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0;
    let mut power = 1.0;
    let mut last = f64::INFINITY;
    for k in 0..60usize {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= odd * odd / (8.0 * k as f64);
            power *= inv;
        }
        let term = a * power;
        if term > last {
            break;
        }
        last = term;
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q -= signed;
        }
        if term < 1e-17 {
            break;
        }
    }
    let chi = ax - FRAC_PI_4;
    (2.0 / (PI * ax)).sqrt() * (p * chi.cos() - q * chi.sin())
}
