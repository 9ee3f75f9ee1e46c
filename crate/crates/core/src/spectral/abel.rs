//! Abel–Poisson means `P_r(m)(x) = Γ(α+1)^{-1} Σ_k r^k m_k L_k^α(x)`.

use crate::error::{Error, Result};
use crate::laguerre::damped_series;
use crate::norms::{integrate_power, sup_norm, WeightedFunction};
use crate::sequences::{Family, MultiplierSeq};
use crate::special::{ln_gamma, Order};

/// Default absolute tolerance on the truncated tail of the damped kernel.
pub const DEFAULT_ABEL_TOL: f64 = 1e-12;
/// Largest number of terms a truncated mean may use.
pub const MAX_ABEL_TERMS: usize = 1 << 21;

/// Kernel value with the bound on its neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: f64,
    /// Bound on `|tail| e^{-x/2}`; the undamped tail is at most `bound · e^{x/2}`.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `ρ` and `M` with `|r^k m_k| ≤ M ρ^k`.
fn geometric_envelope(m: &MultiplierSeq, r: f64) -> (f64, f64) {
    match m.family() {
        Family::Abel(s) => (r * s, 1.0),
        _ => (r, m.sup_abs()),
    }
}

/// Truncation index `K` (terms `0..=K`) and the resulting tail bound.
///
/// Starts from `K = ⌈ln(tol (1-ρ)^{α+2}) / ln ρ⌉` and grows it until
/// `M Σ_{k>K} ρ^k max(A_k^α, 2) / Γ(α+1) ≤ tol`, using `|L_k^α(x)| e^{-x/2} ≤ max(A_k^α, 2)`.
pub fn abel_truncation(m: &MultiplierSeq, r: f64, order: Order, tol: f64) -> Result<(usize, f64)> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidRadius(r));
    }
    let (rho, big_m) = geometric_envelope(m, r);
    let last = m.support().map(|s| s.saturating_sub(1));
    if rho == 0.0 || big_m == 0.0 {
        return Ok((0, 0.0));
    }
    let a = order.get();
    let k0 = ((tol * (1.0 - rho).powf(a + 2.0)).ln() / rho.ln()).ceil().max(1.0);
    if last.is_none() && k0 > MAX_ABEL_TERMS as f64 {
        return Err(Error::AbelTruncation { r, max_terms: MAX_ABEL_TERMS });
    }
    let mut k = k0.min(MAX_ABEL_TERMS as f64) as usize;
    if let Some(l) = last {
        if k >= l {
            return Ok((l, 0.0));
        }
    }
    let lg_mass = ln_gamma(a + 1.0);
    let bound = |k: usize| -> f64 {
        let j = (k + 1) as f64;
        let ln_a = ln_gamma(j + a + 1.0) - ln_gamma(j + 1.0) - lg_mass;
        let ln_b = ln_a.max(2f64.ln());
        let q = rho * ((j + 1.0 + a) / (j + 1.0)).max(1.0);
        if q >= 1.0 {
            return f64::INFINITY;
        }
        big_m * (j * rho.ln() + ln_b - lg_mass).exp() / (1.0 - q)
    };
    let mut b = bound(k);
    while b > tol {
        k = k + k / 4 + 1;
        if k > MAX_ABEL_TERMS {
            return Err(Error::AbelTruncation { r, max_terms: MAX_ABEL_TERMS });
        }
        if let Some(l) = last {
            if k >= l {
                return Ok((l, 0.0));
            }
        }
        b = bound(k);
    }
    Ok((k, b))
}

/// `P_r(m)` at a fixed radius and order.
///
/// Constant and Abel families are evaluated through the generating function
/// `G(t, x) = Σ_k L_k^α(x) t^k = (1-t)^{-α-1} e^{-xt/(1-t)}`. The oscillating family
/// uses `(k+1)^{ia} = (k+1) Γ(1-ia)^{-1} ∫_0^∞ s^{-ia} e^{-(k+1)s} ds`, which turns the
/// mean into `Re Γ(1-ia)^{-1} ∫_0^∞ s^{-ia} e^{-s} ∂_t(tG)(re^{-s}, x) ds`. Every other
/// family is summed as a truncated series.
#[derive(Debug, Clone)]
pub struct AbelMean {
    order: Order,
    r: f64,
    kind: MeanKind,
    terms: usize,
    tail_bound: f64,
}

#[derive(Debug, Clone)]
enum MeanKind {
    Closed { scale: f64, t: f64 },
    Oscillating(Vec<OscNode>),
    Series(Vec<f64>),
}

/// Node of the `s`-integral: `t = re^{-s}` and the real part of the complex weight
/// divided by `Γ(1-ia)`. The rest of the integrand is real, so only that part is needed.
#[derive(Debug, Clone, Copy)]
struct OscNode {
    t: f64,
    ln_1mt: f64,
    w_re: f64,
}

/// Step of the trapezoidal rule in `u = ln s`. The integrand is analytic in a strip of
/// half-width π around the real axis, so the discretization error is far below rounding.
const OSC_STEP: f64 = 0.2;

/// Rounding in the weights grows like `1/|Γ(1-ia)| ≈ e^{π|a|/2}`, so large frequencies lose digits.
fn oscillating_nodes(a: f64, r: f64) -> Vec<OscNode> {
    // s below 1e-16 (1-r) or above 40 contributes under rounding
    let u_lo = (1.0 - r).ln() - 37.0;
    let u_hi = 40f64.ln();
    let n = ((u_hi - u_lo) / OSC_STEP).ceil() as usize;
    let mut raw = Vec::with_capacity(n + 1);
    let (mut g_re, mut g_im) = (0.0, 0.0);
    for j in 0..=n {
        let u = u_lo + j as f64 * OSC_STEP;
        let s = u.exp();
        let mag = OSC_STEP * (u - s).exp();
        let (w_re, w_im) = (mag * (a * u).cos(), -mag * (a * u).sin());
        g_re += w_re;
        g_im += w_im;
        let t = r * (-s).exp();
        raw.push((t, w_re, w_im));
    }
    // divide by the rule's own Γ(1-ia) so the constant is consistent with the nodes
    let g2 = g_re * g_re + g_im * g_im;
    raw.into_iter()
        .map(|(t, w_re, w_im)| OscNode {
            t,
            ln_1mt: (-t).ln_1p(),
            w_re: (w_re * g_re + w_im * g_im) / g2,
        })
        .collect()
}

impl AbelMean {
    pub fn new(m: &MultiplierSeq, r: f64, order: Order, tol: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::InvalidRadius(r));
        }
        let closed = match m.family() {
            Family::Constant(c) => Some((*c, r)),
            Family::Abel(s) => Some((1.0, r * s)),
            _ => None,
        };
        if let Some((scale, t)) = closed {
            return Ok(AbelMean { order, r, kind: MeanKind::Closed { scale, t }, terms: 0, tail_bound: 0.0 });
        }
        if let Family::Oscillating(a) = m.family() {
            return Ok(AbelMean { order, r, kind: MeanKind::Oscillating(oscillating_nodes(*a, r)), terms: 0, tail_bound: 0.0 });
        }
        Self::series(m, r, order, tol)
    }

    /// Forces the truncated series for every family.
    pub fn series(m: &MultiplierSeq, r: f64, order: Order, tol: f64) -> Result<Self> {
        let (k, tail_bound) = abel_truncation(m, r, order, tol)?;
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut rk = 1.0;
        for j in 0..=k {
            coeffs.push(rk * m.value(j));
            rk *= r;
        }
        Ok(AbelMean { order, r, kind: MeanKind::Series(coeffs), terms: k + 1, tail_bound })
    }

    pub fn radius(&self) -> f64 {
        self.r
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Number of series terms (0 for the closed form).
    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Right end of the integration range for norms.
    fn x_max(&self) -> f64 {
        let a = self.order.get();
        match &self.kind {
            MeanKind::Closed { t, .. } => 1500.0 * (1.0 - t) / (1.0 + t) + 10.0 * (a + 1.0),
            // the range a series with 40/(1-r) terms would need
            MeanKind::Oscillating(_) => 160.0 / (1.0 - self.r) + 2.0 * a + 260.0 / (1.0 - self.r).sqrt() + 100.0,
            MeanKind::Series(c) => {
                let k = c.len() as f64;
                4.0 * k + 2.0 * a + 40.0 * k.sqrt() + 100.0
            }
        }
    }

    /// Undamped value `P_r(m)(x)` with its truncation bound.
    pub fn value(&self, x: f64) -> KernelValue {
        let grow = (0.5 * x).exp();
        KernelValue { value: self.damped(x) * grow, tail_bound: self.tail_bound, terms: self.terms }
    }

    /// `‖P_r(m)‖_{L^p_{w(α)}}`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            let scale = 1.0 - self.r;
            let nodes: Vec<f64> = (-8..=40).map(|k| scale * (k as f64 / 4.0).exp2()).collect();
            return sup_norm(self, &nodes);
        }
        // |P_r|^p has kinks at sign changes, which caps the trapezoid near 1e-7 relative;
        // only the positive closed-form kernels are smooth enough for a tight target
        let tol = if matches!(self.kind, MeanKind::Closed { .. }) { 1e-11 } else { 1e-8 };
        let est = integrate_power(|x| self.damped(x), p, self.order.get(), self.x_max(), tol)?;
        Ok(est.value.powf(1.0 / p))
    }
}

impl WeightedFunction for AbelMean {
    fn damped(&self, x: f64) -> f64 {
        let a = self.order.get();
        match &self.kind {
            MeanKind::Closed { scale, t } => {
                let ln = -(a + 1.0) * (-t).ln_1p() - x * t / (1.0 - t) - 0.5 * x - ln_gamma(a + 1.0);
                scale * ln.exp()
            }
            MeanKind::Oscillating(nodes) => {
                // ∂_t(tG) = G (1 + t(α+1)/(1-t) - xt/(1-t)²), damped by e^{-x/2}
                let lg = ln_gamma(a + 1.0);
                nodes
                    .iter()
                    .map(|n| {
                        let inv = 1.0 / (1.0 - n.t);
                        let g = (-(a + 1.0) * n.ln_1mt - 0.5 * x * (1.0 + n.t) * inv - lg).exp();
                        n.w_re * g * (1.0 + n.t * inv * (a + 1.0 - x * inv))
                    })
                    .sum()
            }
            MeanKind::Series(c) => damped_series(c, a, x) / self.order.mass(),
        }
    }
}

/// `P_r(m)(x)` by the truncated series with the default tolerance.
pub fn abel_poisson_kernel(m: &MultiplierSeq, r: f64, order: Order, x: f64) -> Result<KernelValue> {
    Ok(AbelMean::series(m, r, order, DEFAULT_ABEL_TOL)?.value(x))
}
