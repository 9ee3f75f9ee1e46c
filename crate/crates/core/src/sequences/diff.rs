//! Fractional differences `Δ^δ m_k = Σ_j A_j^{-δ-1} m_{k+j}`.

use super::MultiplierSeq;
use crate::error::{Error, Result};

/// Default absolute tolerance on the truncated tail of `Δ^δ`.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// A fractional difference value with its truncation error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracDiff {
    pub value: f64,
    pub error_bound: f64,
    /// Number of summed terms.
    pub terms: usize,
}

/// `Δ^δ` for a fixed order, with the tail constant `C_δ` precomputed.
#[derive(Debug, Clone)]
pub struct FracDiffOperator {
    delta: f64,
    integer: Option<usize>,
    /// `C_δ ≥ |A_j^{-δ-1}| (j+1)^{δ+1}` for all `j`.
    c_delta: f64,
}

impl FracDiffOperator {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidArgument(format!("difference order must be positive, got {delta}")));
        }
        let integer = (delta.fract() == 0.0 && delta <= 1e6).then_some(delta as usize);
        // |A_j^{-δ-1}| (j+1)^{δ+1} decreases to 1/|Γ(-δ)| once j exceeds δ, so a window
        // reaching well past δ attains the maximum.
        let window = 256 + 4 * delta.ceil() as usize;
        let mut w = 1.0f64;
        let mut c_delta = 1.0f64;
        for j in 0..window {
            c_delta = c_delta.max(w.abs() * (j as f64 + 1.0).powf(delta + 1.0));
            w *= (j as f64 - delta) / (j as f64 + 1.0);
        }
        Ok(FracDiffOperator { delta, integer, c_delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tail_constant(&self) -> f64 {
        self.c_delta
    }

    /// Default truncation `J = max(4096, 64 (k+1))`.
    pub fn default_truncation(k: usize) -> usize {
        4096usize.max(64 * (k + 1))
    }

    /// `Δ^δ m_k` summing `j = 0..=J`, with the tail policy:
    /// exact for integer `δ` and finite support; telescoped against the limit for
    /// families with one; otherwise bounded by `sup|m| C_δ (J+1)^{-δ} / δ`.
    pub fn apply(&self, m: &MultiplierSeq, k: usize, truncation: usize, tol: f64) -> Result<FracDiff> {
        if let Some(n) = self.integer {
            return Ok(self.finite_sum(m, k, n, 0.0));
        }
        if let Some(s) = m.support() {
            if k >= s {
                return Ok(FracDiff { value: 0.0, error_bound: 0.0, terms: 0 });
            }
            return Ok(self.finite_sum(m, k, s - 1 - k, 0.0));
        }
        let (shift, bound) = match (m.limit(), m.deviation_sum(k + truncation + 1)) {
            (Some(lim), Some(dev)) => (lim, self.c_delta * (truncation as f64 + 2.0).powf(-self.delta - 1.0) * dev),
            _ => (0.0, m.sup_abs() * self.c_delta * (truncation as f64 + 1.0).powf(-self.delta) / self.delta),
        };
        if bound > tol {
            return Err(Error::TailUnreachable { family: m.spec().to_string(), bound, tol });
        }
        let mut r = self.finite_sum(m, k, truncation, shift);
        r.error_bound = bound;
        Ok(r)
    }

    /// Picks the smallest power-of-two truncation meeting `tol` for geometrically
    /// converging families, the default truncation otherwise.
    pub fn apply_auto(&self, m: &MultiplierSeq, k: usize, tol: f64) -> Result<FracDiff> {
        let default = Self::default_truncation(k);
        if self.integer.is_none() && m.support().is_none() && m.limit().is_some() {
            let mut j = 16usize;
            while j < default {
                if let Some(dev) = m.deviation_sum(k + j + 1) {
                    if self.c_delta * (j as f64 + 2.0).powf(-self.delta - 1.0) * dev <= tol {
                        return self.apply(m, k, j, tol);
                    }
                }
                j *= 2;
            }
        }
        self.apply(m, k, default, tol)
    }

    fn finite_sum(&self, m: &MultiplierSeq, k: usize, last: usize, shift: f64) -> FracDiff {
        let mut w = 1.0;
        let mut sum = 0.0;
        for j in 0..=last {
            sum += w * (m.value(k + j) - shift);
            w *= (j as f64 - self.delta) / (j as f64 + 1.0);
            if w == 0.0 {
                return FracDiff { value: sum, error_bound: 0.0, terms: j + 1 };
            }
        }
        FracDiff { value: sum, error_bound: 0.0, terms: last + 1 }
    }
}

/// `Δ^δ m_k` truncated at `J` with the default tail tolerance.
pub fn frac_diff(m: &MultiplierSeq, delta: f64, k: usize, truncation: usize) -> Result<FracDiff> {
    FracDiffOperator::new(delta)?.apply(m, k, truncation, DEFAULT_TAIL_TOL)
}

/// `Δ^δ m_k` with an automatically chosen truncation.
pub fn frac_diff_auto(m: &MultiplierSeq, delta: f64, k: usize, tol: f64) -> Result<FracDiff> {
    FracDiffOperator::new(delta)?.apply_auto(m, k, tol)
}

/// `Δ^δ` of a finite vector (zero beyond its end), all entries.
pub fn frac_diff_finite(c: &[f64], delta: f64) -> Vec<f64> {
    let n = c.len();
    let mut weights = Vec::with_capacity(n);
    let mut w = 1.0;
    for j in 0..n {
        weights.push(w);
        w *= (j as f64 - delta) / (j as f64 + 1.0);
    }
    (0..n).map(|k| c[k..].iter().zip(&weights).map(|(v, w)| v * w).sum()).collect()
}
