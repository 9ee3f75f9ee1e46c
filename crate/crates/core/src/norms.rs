//! Weighted Lebesgue norms `‖f‖_{L^p_{w(γ)}} = (∫ |f(x) e^{-x/2}|^p x^γ dx)^{1/p}`.

use crate::error::{Error, Result};
use crate::quadrature::QuadratureRule;
use crate::special::Order;

/// A function on the half-line, evaluated together with its weight `e^{-x/2}`.
pub trait WeightedFunction {
    /// `f(x) e^{-x/2}`
    fn damped(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64> WeightedFunction for F {
    fn damped(&self, x: f64) -> f64 {
        self(x) * (-0.5 * x).exp()
    }
}

/// A function supplied directly in damped form, `x ↦ f(x) e^{-x/2}`.
pub struct Damped<F>(pub F);

impl<F: Fn(f64) -> f64> WeightedFunction for Damped<F> {
    fn damped(&self, x: f64) -> f64 {
        (self.0)(x)
    }
}

/// The space `L^p_{w(γ)}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpaceParams {
    p: f64,
    gamma: Order,
}

impl SpaceParams {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(SpaceParams { p, gamma: Order::new(gamma)? })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma.get()
    }

    pub fn is_sup(&self) -> bool {
        self.p.is_infinite()
    }
}

/// Norm of `f` in `L^p_{w(γ)}` using `rule`.
///
/// For finite `p` the substitution `u = p x / 2` turns the integral into
/// `(2/p)^{γ+1} ∫ |f(2u/p)|^p e^{-u} u^γ du`, so `rule` must have order `γ`.
/// The result is exact when `|f|^p` is a polynomial of degree `< 2n`.
/// For `p = ∞` the supremum of `|f e^{-x/2}|` is searched over the rule's nodes,
/// a geometric grid and a golden-section refinement.
pub fn weighted_lp_norm<W: WeightedFunction + ?Sized>(f: &W, space: SpaceParams, rule: &QuadratureRule) -> Result<f64> {
    if space.is_sup() {
        return sup_norm(f, rule.nodes());
    }
    rule.check_order(space.gamma())?;
    let p = space.p;
    let scale = 2.0 / p;
    let mut sum = 0.0;
    for (&u, &w) in rule.nodes().iter().zip(rule.damped_weights()) {
        let x = scale * u;
        let v = f.damped(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        sum += w * pow_abs(v, p);
    }
    Ok((scale.powf(space.gamma() + 1.0) * sum).powf(1.0 / p))
}

#[inline]
pub(crate) fn pow_abs(v: f64, p: f64) -> f64 {
    if p == 2.0 {
        v * v
    } else if p == 1.0 {
        v.abs()
    } else {
        v.abs().powf(p)
    }
}

/// Sup of `|f(x) e^{-x/2}|` over `x ≥ 0`.
///
/// Candidates: `0`, the supplied nodes and `x = 2^{k/8}` for `k = -40..=60`; the best
/// candidate is then refined by golden-section search between its neighbours.
pub fn sup_norm<W: WeightedFunction + ?Sized>(f: &W, nodes: &[f64]) -> Result<f64> {
    let mut grid: Vec<f64> = Vec::with_capacity(nodes.len() + 102);
    grid.push(0.0);
    grid.extend((-40..=60).map(|k| (k as f64 / 8.0).exp2()));
    grid.extend(nodes.iter().copied().filter(|x| *x >= 0.0));
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();

    let mut best = (0usize, -1.0f64);
    for (i, &x) in grid.iter().enumerate() {
        let v = f.damped(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        if v.abs() > best.1 {
            best = (i, v.abs());
        }
    }
    let (i, mut top) = best;
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    if hi > lo {
        let refined = golden_max(|x| f.damped(x).abs(), lo, hi, 80);
        if refined.is_finite() {
            top = top.max(refined);
        }
    }
    Ok(top)
}

fn golden_max<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..iters {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
        if (b - a).abs() <= 1e-14 * b.abs().max(1e-300) {
            break;
        }
    }
    gc.max(gd)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveEstimate {
    pub value: f64,
    /// Relative change between the last two refinement levels.
    pub residual: f64,
    pub evaluations: usize,
}

/// `∫_0^∞ |F(x)|^p x^γ dx` for a damped function `F` without polynomial structure.
///
/// Uses `x = e^t` and the trapezoidal rule in `t` on `[ln x_lo, ln x_max]`, halving
/// the step until the relative change drops below `tol` (at most eight levels).
/// The contribution of `(0, x_lo)` is added as `|F(x_lo)|^p x_lo^{γ+1} / (γ+1)`.
pub fn integrate_power<F: Fn(f64) -> f64>(f: F, p: f64, gamma: f64, x_max: f64, tol: f64) -> Result<AdaptiveEstimate> {
    let t_lo = (-40.0 / (gamma + 1.0)).max(-600.0);
    let t_hi = x_max.max(1.0).ln();
    let g = |t: f64| -> Result<f64> {
        let x = t.exp();
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { x, value: v });
        }
        Ok(pow_abs(v, p) * ((gamma + 1.0) * t).exp())
    };
    let n0 = (((t_hi - t_lo) / 0.125).ceil() as usize).max(8);
    let mut h = (t_hi - t_lo) / n0 as f64;
    let mut sum = 0.5 * (g(t_lo)? + g(t_hi)?);
    for j in 1..n0 {
        sum += g(t_lo + j as f64 * h)?;
    }
    let mut evaluations = n0 + 1;
    let mut estimate = h * sum;
    let mut residual = f64::INFINITY;
    let mut intervals = n0;
    for level in 1..=8 {
        let mut mid = 0.0;
        for j in 0..intervals {
            mid += g(t_lo + (j as f64 + 0.5) * h)?;
        }
        evaluations += intervals;
        sum += mid;
        intervals *= 2;
        h *= 0.5;
        let next = h * sum;
        residual = if next == 0.0 { 0.0 } else { ((next - estimate) / next).abs() };
        estimate = next;
        if level >= 2 && residual <= tol {
            break;
        }
    }
    let x_lo = t_lo.exp();
    let left = pow_abs(f(x_lo), p) * x_lo.powf(gamma + 1.0) / (gamma + 1.0);
    Ok(AdaptiveEstimate { value: estimate + left, residual, evaluations })
}
