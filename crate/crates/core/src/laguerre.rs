//! Laguerre polynomials `L_n^α` by the forward three-term recurrence.
//!
//! Most callers want the damped values `L_n^α(x) e^{-x/2}`, which stay bounded
//! on the whole half-line while the raw polynomials overflow for large `x`.

use crate::error::{Error, Result};
use crate::special::binom_a;

/// Rescale threshold for the damped recurrence.
const RESCALE: f64 = 1e150;

/// `L_n^α(x)`; fails if the value leaves the f64 range.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> Result<f64> {
    let v = laguerre_raw(n, alpha, x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { n, alpha, x })
    }
}

/// `R_n^α(x) = L_n^α(x) / A_n^α`.
pub fn laguerre_normalized(n: usize, alpha: f64, x: f64) -> Result<f64> {
    Ok(laguerre(n, alpha, x)? / binom_a(n, alpha))
}

/// Unchecked `L_n^α(x)`; may return ±inf.
pub fn laguerre_raw(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Fills `out[k] = L_k^α(x)` for `k < out.len()`.
pub fn laguerre_into(alpha: f64, x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    out[0] = 1.0;
    if n == 1 {
        return;
    }
    out[1] = 1.0 + alpha - x;
    for k in 1..n - 1 {
        let kf = k as f64;
        out[k + 1] = ((2.0 * kf + 1.0 + alpha - x) * out[k] - (kf + alpha) * out[k - 1]) / (kf + 1.0);
    }
}

/// Fills `out[k] = L_k^α(x) e^{-x/2}` for `k < out.len()`.
///
/// The recurrence runs on unscaled values with a running exponent, so neither
/// `e^{-x/2}` underflow nor polynomial overflow destroys the product.
pub fn damped_laguerre_into(alpha: f64, x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let mut log_scale = -0.5 * x;
    let mut factor = log_scale.exp();
    let mut prev = 1.0;
    out[0] = factor;
    if n == 1 {
        return;
    }
    let mut cur = 1.0 + alpha - x;
    out[1] = cur * factor;
    for k in 1..n - 1 {
        let kf = k as f64;
        let mut next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        if next.abs() > RESCALE {
            next /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
            factor = log_scale.exp();
        }
        cur = next;
        out[k + 1] = cur * factor;
    }
}

/// `L_n^α(x) e^{-x/2}` for a single degree.
pub fn damped_laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    damped_laguerre_into(alpha, x, &mut buf);
    buf[n]
}

/// Evaluates `Σ_k c_k L_k^α(x) e^{-x/2}` with the damped recurrence.
pub fn damped_series(coeffs: &[f64], alpha: f64, x: f64) -> f64 {
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    let mut log_scale = -0.5 * x;
    let mut acc = coeffs[0];
    if n == 1 {
        return acc * log_scale.exp();
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    acc += coeffs[1] * cur;
    for k in 1..n - 1 {
        let kf = k as f64;
        let mut next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        if next.abs() > RESCALE {
            next /= RESCALE;
            prev /= RESCALE;
            acc /= RESCALE;
            log_scale += RESCALE.ln();
        }
        cur = next;
        acc += coeffs[k + 1] * cur;
    }
    acc * log_scale.exp()
}
