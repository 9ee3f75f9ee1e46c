//! Generalized Gauss–Laguerre quadrature for the weight `x^α e^{-x}` on `(0, ∞)`.
//!
//! Nodes are the eigenvalues of the symmetric Jacobi matrix (diagonal `2k + α + 1`,
//! off-diagonal `sqrt(k (k + α))`), polished by Newton steps on `L_n^α`. Weights
//! come from the Christoffel formula evaluated with damped Laguerre values, which
//! keeps their relative accuracy for the far nodes where `e^{-x}` underflows.

use crate::error::{Error, Result};
use crate::laguerre::damped_laguerre_into;
use crate::special::{ln_gamma, Order};

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    alpha: Order,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `w_i e^{x_i}`
    damped_weights: Vec<f64>,
}

impl QuadratureRule {
    /// Builds the `n`-point rule for `x^α e^{-x}`.
    pub fn new(alpha: Order, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("quadrature degree must be at least 1".into()));
        }
        let a = alpha.get();
        let mut diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + a + 1.0).collect();
        let mut off: Vec<f64> = (0..n)
            .map(|k| if k + 1 < n { ((k as f64 + 1.0) * (k as f64 + 1.0 + a)).sqrt() } else { 0.0 })
            .collect();
        tridiagonal_eigenvalues(&mut diag, &mut off).map_err(|_| Error::EigenNoConvergence { alpha: a, n })?;
        diag.sort_by(|x, y| x.total_cmp(y));

        let mut table = vec![0.0; n + 2];
        let nf = n as f64;
        for x in diag.iter_mut() {
            for _ in 0..3 {
                damped_laguerre_into(a, *x, &mut table[..n + 1]);
                let (ln, lm) = (table[n], table[n - 1]);
                let deriv = nf * ln - (nf + a) * lm;
                if deriv == 0.0 {
                    break;
                }
                let step = ln * *x / deriv;
                let next = *x - step;
                if !(next > 0.0) || step.abs() > 0.1 * *x {
                    break;
                }
                *x = next;
                if step.abs() <= 4.0 * f64::EPSILON * *x {
                    break;
                }
            }
        }

        let log_scale = ln_gamma(nf + a + 1.0) - ln_gamma(nf + 1.0);
        let mut damped_weights = Vec::with_capacity(n);
        for &x in &diag {
            damped_laguerre_into(a, x, &mut table[..n + 2]);
            let d = table[n + 1];
            damped_weights.push((log_scale + x.ln() - 2.0 * ((nf + 1.0) * d.abs()).ln()).exp());
        }
        // the closed form is exact up to the log-Gamma error; pin the total mass exactly
        let scale = alpha.mass() / damped_weights.iter().zip(&diag).map(|(w, x)| w * (-x).exp()).sum::<f64>();
        damped_weights.iter_mut().for_each(|w| *w *= scale);
        let weights = diag.iter().zip(&damped_weights).map(|(x, w)| w * (-x).exp()).collect();

        if diag.windows(2).any(|w| !(w[0] < w[1])) || !(diag[0] > 0.0) {
            return Err(Error::EigenNoConvergence { alpha: a, n });
        }
        Ok(QuadratureRule { alpha, nodes: diag, weights, damped_weights })
    }

    pub fn alpha(&self) -> Order {
        self.alpha
    }

    /// Number of nodes.
    pub fn degree(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `w_i e^{x_i}`; pair these with integrands already multiplied by `e^{-x}`.
    pub fn damped_weights(&self) -> &[f64] {
        &self.damped_weights
    }

    /// `∫ f(x) x^α e^{-x} dx`
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// `∫ h(x) x^α dx` where `h` already carries the factor `e^{-x}`.
    pub fn integrate_damped<F: FnMut(f64) -> f64>(&self, mut h: F) -> f64 {
        self.nodes.iter().zip(&self.damped_weights).map(|(&x, &w)| w * h(x)).sum()
    }

    pub(crate) fn check_order(&self, expected: f64) -> Result<()> {
        if (self.alpha.get() - expected).abs() > 1e-14 * (1.0 + expected.abs()) {
            Err(Error::OrderMismatch { expected, found: self.alpha.get() })
        } else {
            Ok(())
        }
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.
///
/// `diag` is overwritten with the eigenvalues (unsorted); `off[i]` couples rows `i` and `i+1`.
fn tridiagonal_eigenvalues(diag: &mut [f64], off: &mut [f64]) -> std::result::Result<(), ()> {
    let n = diag.len();
    if n <= 1 {
        return Ok(());
    }
    off[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 100 {
                return Err(());
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laguerre::laguerre_raw;
    use crate::special::{binom_a, gamma, gamma_ratio};
    use approx::assert_relative_eq;

    fn order(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn single_node_rule() {
        let r = QuadratureRule::new(order(0.5), 1).unwrap();
        assert_relative_eq!(r.nodes()[0], 1.5, max_relative = 1e-15);
        assert_relative_eq!(r.weights()[0], gamma(1.5), max_relative = 1e-14);
    }

    #[test]
    fn nodes_sorted_and_positive() {
        for &a in &[-0.9, -0.5, 0.0, 2.7, 10.0] {
            for &n in &[2, 7, 64, 300] {
                let r = QuadratureRule::new(order(a), n).unwrap();
                assert_eq!(r.degree(), n);
                assert!(r.nodes()[0] > 0.0);
                assert!(r.nodes().windows(2).all(|w| w[0] < w[1]));
                assert!(r.damped_weights().iter().all(|w| *w > 0.0 && w.is_finite()));
            }
        }
    }

    #[test]
    fn moment_zero() {
        for &a in &[-0.5, 0.0, 0.5, 1.0, 2.7] {
            for &n in &[1, 5, 20, 100, 256] {
                let r = QuadratureRule::new(order(a), n).unwrap();
                let s: f64 = r.weights().iter().sum();
                assert_relative_eq!(s, gamma(a + 1.0), max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn nodes_are_roots() {
        let r = QuadratureRule::new(order(1.5), 12).unwrap();
        for &x in r.nodes() {
            let scale = (0..=12).map(|j| binom_a(12 - j, 1.5 + j as f64).abs() * x.powi(j as i32) / gamma(j as f64 + 1.0)).sum::<f64>();
            assert!(laguerre_raw(12, 1.5, x).abs() < 1e-12 * scale);
        }
    }

    #[test]
    fn monomial_moments() {
        // ∫ x^j x^α e^{-x} = Γ(α + j + 1)
        let a = 0.5;
        let r = QuadratureRule::new(order(a), 10).unwrap();
        for j in 0..20 {
            let q = r.integrate(|x| x.powi(j));
            assert_relative_eq!(q, gamma(a + j as f64 + 1.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn orthogonality_of_low_degrees() {
        let r = QuadratureRule::new(order(0.3), 4).unwrap();
        let v = r.integrate(|x| laguerre_raw(2, 0.3, x) * laguerre_raw(3, 0.3, x));
        assert!(v.abs() < 1e-10);
        let n2 = r.integrate(|x| laguerre_raw(3, 0.3, x).powi(2));
        assert_relative_eq!(n2, gamma_ratio(3.0 + 0.3 + 1.0, 4.0), max_relative = 1e-12);
    }

    #[test]
    fn eigen_solver_small_matrix() {
        let mut d = vec![2.0, 2.0];
        let mut e = vec![1.0, 0.0];
        tridiagonal_eigenvalues(&mut d, &mut e).unwrap();
        d.sort_by(|a, b| a.total_cmp(b));
        assert_relative_eq!(d[0], 1.0, epsilon = 1e-14);
        assert_relative_eq!(d[1], 3.0, epsilon = 1e-14);
    }
}
