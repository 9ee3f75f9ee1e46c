use super::expansion::LaguerreExpansion;
use crate::error::{Error, Result};
use crate::laguerre::{laguerre, laguerre_raw};
use crate::norms::{weighted_lp_norm, SpaceParams};
use crate::quadrature::QuadratureRule;
use crate::special::{gamma, Order};

fn check_orders(alpha: Order, beta: Order) -> Result<()> {
    if beta.get() < alpha.get() {
        Ok(())
    } else {
        Err(Error::ProjectionOrder { alpha: alpha.get(), beta: beta.get() })
    }
}

/// Carries the coefficients of an order-α expansion to order `β < α` unchanged.
pub fn project_order(e: &LaguerreExpansion, beta: Order) -> Result<LaguerreExpansion> {
    check_orders(e.order(), beta)?;
    Ok(e.retag(beta))
}

/// Both sides of `e^{-x} L_n^β(x) = Γ(α-β)^{-1} ∫_x^∞ (y-x)^{α-β-1} e^{-y} L_n^α(y) dy`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AskeyFitchCheck {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
    pub integral: f64,
    pub expected: f64,
    /// `|integral - expected|` relative to `Γ(α-β)^{-1} ∫ |integrand|`.
    pub defect: f64,
}

/// Evaluates the integral with `y = x + t` against a Gauss rule for `t^{α-β-1} e^{-t}`,
/// exact for the degree-`n` integrand.
pub fn projection_check(n: usize, alpha: Order, beta: Order, x: f64) -> Result<AskeyFitchCheck> {
    check_orders(alpha, beta)?;
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("x must be nonnegative, got {x}")));
    }
    let (a, b) = (alpha.get(), beta.get());
    let rule = QuadratureRule::new(Order::new(a - b - 1.0)?, n + 8)?;
    let norm = (-x).exp() / gamma(a - b);
    let (mut sum, mut abs) = (0.0, 0.0);
    for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
        let v = w * laguerre(n, a, x + t)?;
        sum += v;
        abs += v.abs();
    }
    let integral = norm * sum;
    let expected = (-x).exp() * laguerre_raw(n, b, x);
    let scale = (norm * abs).max(expected.abs());
    let defect = if scale == 0.0 { 0.0 } else { (integral - expected).abs() / scale };
    Ok(AskeyFitchCheck { n, alpha: a, beta: b, x, integral, expected, defect })
}

/// `‖g‖_{L^p_{w(β)}} / ‖f‖_{L^p_{w(α)}}` where `g` carries the coefficients of `f` at order β.
pub fn projection_norm_ratio(e: &LaguerreExpansion, beta: Order, p: f64) -> Result<f64> {
    let g = project_order(e, beta)?;
    let n = 2 * e.len() + 32;
    let norm = |h: &LaguerreExpansion| -> Result<f64> {
        let order = h.order();
        weighted_lp_norm(h, SpaceParams::new(p, order.get())?, &QuadratureRule::new(order, n)?)
    };
    let nf = norm(e)?;
    if nf == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(norm(&g)? / nf)
}
