use rayon::prelude::*;

use super::{NormKind, NormParams, NormReport, Truncation};
use crate::error::{Error, Result};
use crate::sequences::MultiplierSeq;
use crate::spectral::{AbelMean, DEFAULT_ABEL_TOL};
use crate::special::Order;

/// Largest admissible radius in an r-grid.
pub const MAX_RADIUS: f64 = 0.999;

/// `r_j = 1 - 2^{-j/(2d)}` for `j = 0..=19d`: density `d` subdivides the default grid
/// while keeping its endpoint `1 - 2^{-9.5} ≈ 0.9986`.
pub fn r_grid(density: usize) -> Vec<f64> {
    let d = density.max(1);
    (0..=19 * d).map(|j| 1.0 - (-(j as f64) / (2 * d) as f64).exp2()).collect()
}

/// [`r_grid`] at density 1.
pub fn default_r_grid() -> Vec<f64> {
    r_grid(1)
}

/// `max_{r ∈ grid} ‖P_r(m)‖_{L^p_{w(α)}}`, the Abel–Poisson characterization of the
/// `M^{p',∞}` norm (valid for `α ≥ 0`). The per-radius curve is kept in the report.
pub fn mpinfty_norm(m: &MultiplierSeq, p: f64, alpha: Order, r_grid: &[f64]) -> Result<NormReport> {
    if alpha.get() < 0.0 {
        return Err(Error::Hypothesis(format!("the Abel-Poisson characterization needs alpha >= 0, got {alpha}")));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if r_grid.is_empty() {
        return Err(Error::InvalidArgument("empty r-grid".into()));
    }
    if let Some(r) = r_grid.iter().find(|r| !(**r >= 0.0 && **r <= MAX_RADIUS)) {
        return Err(Error::InvalidArgument(format!("radius {r} outside [0, {MAX_RADIUS}]")));
    }
    let curve: Vec<(f64, f64)> = r_grid
        .par_iter()
        .map(|&r| Ok((r, AbelMean::new(m, r, alpha, DEFAULT_ABEL_TOL)?.lp_norm(p)?)))
        .collect::<Result<_>>()?;
    let value = curve.iter().map(|c| c.1).fold(0.0, f64::max);
    let mut rep = NormReport::new(NormKind::PrCharacterization, value, NormParams::new(p, f64::INFINITY, alpha.get(), alpha.get(), f64::NAN));
    rep.truncation = Truncation { r_grid: r_grid.len(), ..Truncation::default() };
    rep.curve = curve;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::{weighted_lp_norm, SpaceParams};
    use crate::quadrature::QuadratureRule;
    use crate::spectral::LaguerreExpansion;
    use approx::assert_relative_eq;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn grids() {
        let g = default_r_grid();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.0);
        assert!(*g.last().unwrap() <= MAX_RADIUS);
        let d = r_grid(2);
        assert_eq!(d.len(), 39);
        assert_eq!(d.last(), g.last());
        assert!(g.iter().all(|r| d.contains(r)));
    }

    #[test]
    fn constant_curve_closed_form() {
        for &a in &[0.0, 1.0, 2.0] {
            let rep = mpinfty_norm(&MultiplierSeq::constant(1.0), 1.0, ord(a), &default_r_grid()).unwrap();
            for &(r, v) in &rep.curve {
                assert_relative_eq!(v, ((1.0 + r) / 2.0).powf(-a - 1.0), max_relative = 1e-8);
            }
            assert_relative_eq!(rep.value, 2f64.powf(a + 1.0), max_relative = 1e-10);
        }
    }

    #[test]
    fn zero_sequence() {
        let rep = mpinfty_norm(&MultiplierSeq::constant(0.0), 2.0, ord(1.0), &default_r_grid()).unwrap();
        assert_eq!(rep.value, 0.0);
    }

    #[test]
    fn polynomial_coefficients_approach_the_function_norm() {
        // the coefficients of g = L_2^α as a multiplier: P_r g → g as r → 1
        let a = 1.0;
        let g = LaguerreExpansion::mode(ord(a), 2);
        let m = MultiplierSeq::tabulated(g.coeffs().to_vec()).unwrap();
        let rule = QuadratureRule::new(ord(a), 16).unwrap();
        let target = weighted_lp_norm(&g, SpaceParams::new(2.0, a).unwrap(), &rule).unwrap();
        let rep = mpinfty_norm(&m, 2.0, ord(a), &default_r_grid()).unwrap();
        let tail: Vec<f64> = rep.curve.iter().filter(|c| c.0 >= 0.5).map(|c| c.1).collect();
        assert!(tail.windows(2).all(|w| w[1] >= w[0] - 1e-12));
        // P_r g = r² g exactly, and the grid ends at r = 1 - 2^{-9.5}
        let r_end = *default_r_grid().last().unwrap();
        assert_relative_eq!(*tail.last().unwrap(), r_end * r_end * target, max_relative = 1e-8);
    }

    #[test]
    fn hypotheses() {
        let m = MultiplierSeq::constant(1.0);
        assert!(matches!(mpinfty_norm(&m, 1.0, ord(-0.5), &[0.5]), Err(Error::Hypothesis(_))));
        assert!(mpinfty_norm(&m, 1.0, ord(0.5), &[0.9995]).is_err());
        assert!(mpinfty_norm(&m, 1.0, ord(0.5), &[]).is_err());
    }
}
