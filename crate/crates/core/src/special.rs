//! Gamma function and the binomial coefficients `A_n^a = binom(n + a, n)`.

use crate::error::{Error, Result};

/// Γ(x). The Lanczos approximation is evaluated on `[1, 2)` and shifted by the
/// functional equation, which keeps the relative error near 1e-14 up to 171.
pub fn gamma(x: f64) -> f64 {
    if !(1.0..=171.7).contains(&x) {
        return statrs::function::gamma::gamma(x);
    }
    if x.fract() == 0.0 {
        return (2..x as usize).fold(1.0, |acc, j| acc * j as f64);
    }
    let mut acc = 1.0;
    let mut y = x;
    while y >= 2.0 {
        y -= 1.0;
        acc *= y;
    }
    acc * statrs::function::gamma::gamma(y)
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    statrs::function::gamma::ln_gamma(x)
}

/// Γ(a) / Γ(b) for positive arguments, switching to log-Gamma before either factor overflows.
pub fn gamma_ratio(a: f64, b: f64) -> f64 {
    if a < 150.0 && b < 150.0 {
        gamma(a) / gamma(b)
    } else {
        (ln_gamma(a) - ln_gamma(b)).exp()
    }
}

/// `A_n^a = Π_{j=1..n} (a + j) / j`, a polynomial of degree n in `a`.
///
/// Total for every real `a`; `A_0^a = 1`.
pub fn binom_a(n: usize, a: f64) -> f64 {
    (1..=n).fold(1.0, |acc, j| {
        let j = j as f64;
        acc * (a + j) / j
    })
}

/// `A_0^a, ..., A_{n_max}^a` by the same product, accumulated.
pub fn binom_a_table(n_max: usize, a: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut acc = 1.0;
    out.push(acc);
    for j in 1..=n_max {
        let jf = j as f64;
        acc *= (a + jf) / jf;
        out.push(acc);
    }
    out
}

/// Validated Laguerre order (also used for weight exponents).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, serde::Serialize, serde::Deserialize)]
pub struct Order(f64);

impl Order {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > -1.0 {
            Ok(Order(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }

    /// Γ(α + 1), the mass of the weight `x^α e^{-x}`.
    pub fn mass(self) -> f64 {
        gamma(self.0 + 1.0)
    }
}

impl TryFrom<f64> for Order {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Order::new(value)
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_known_values() {
        assert_relative_eq!(gamma(0.5), std::f64::consts::PI.sqrt(), max_relative = 1e-13);
        assert_relative_eq!(gamma(1.0), 1.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(11.0), 3_628_800.0, max_relative = 1e-13);
        assert_relative_eq!(gamma(3.7), 4.170_651_783_796_603, max_relative = 1e-13);
        let mut fact = 1.0f64;
        for n in 1..170 {
            fact *= n as f64;
            assert_relative_eq!(gamma(n as f64 + 1.0), fact, max_relative = 1e-13);
        }
    }

    #[test]
    fn gamma_ratio_large_arguments() {
        // Γ(n + 1.5) / Γ(n + 1) ~ sqrt(n)
        let r = gamma_ratio(400.5, 400.0);
        assert_relative_eq!(r, 399.75f64.sqrt(), max_relative = 1e-4);
        assert_relative_eq!(gamma_ratio(5.0, 3.0), 12.0, max_relative = 1e-13);
    }

    #[test]
    fn binom_small_cases() {
        assert_eq!(binom_a(0, 3.3), 1.0);
        assert_eq!(binom_a(0, -7.0), 1.0);
        assert_eq!(binom_a(1, -2.0), -1.0);
        assert_eq!(binom_a(2, -2.0), 0.0);
        assert_eq!(binom_a(2, -3.0), 1.0);
        assert_eq!(binom_a(1, -3.0), -2.0);
        // binom(n + a, n) for integer a
        assert_relative_eq!(binom_a(4, 3.0), 35.0, max_relative = 1e-15);
    }

    #[test]
    fn binom_matches_gamma_quotient() {
        for &a in &[-0.5, 0.0, 0.7, 2.7, 10.0] {
            for n in 0..60 {
                let q = gamma_ratio(n as f64 + a + 1.0, n as f64 + 1.0) / gamma(a + 1.0);
                assert_relative_eq!(binom_a(n, a), q, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let t = binom_a_table(50, -1.5);
        for (n, v) in t.iter().enumerate() {
            assert_relative_eq!(*v, binom_a(n, -1.5), max_relative = 1e-14);
        }
    }

    #[test]
    fn telescoping_sum() {
        for &a in &[-2.5, -1.5, -0.5, 0.0, 1.7] {
            let t = binom_a_table(200, a);
            let mut partial = 0.0;
            for (j, v) in t.iter().enumerate() {
                partial += v;
                let target = binom_a(j, a + 1.0);
                let scale = target.abs().max(1e-300);
                assert!(
                    (partial - target).abs() <= 1e-12 * scale.max(1.0) + 1e-10 * scale,
                    "a={a} J={j}: {partial} vs {target}"
                );
            }
        }
    }

    #[test]
    fn order_validation() {
        assert!(Order::new(-1.0).is_err());
        assert!(Order::new(f64::NAN).is_err());
        assert!(Order::new(-0.999).is_ok());
    }
}
