use rand::Rng;

use crate::error::{Error, Result};
use crate::laguerre::{damped_laguerre_into, damped_series, laguerre_into};
use crate::norms::{weighted_lp_norm, SpaceParams, WeightedFunction};
use crate::quadrature::QuadratureRule;
use crate::sequences::frac_diff_finite;
use crate::special::{binom_a, binom_a_table, Order};

/// Finite Laguerre expansion `f = Γ(α+1)^{-1} Σ_k ĥ(k) L_k^α`, with
/// `ĥ(k) = ∫ f R_k^α x^α e^{-x} dx`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LaguerreExpansion {
    order: Order,
    coeffs: Vec<f64>,
}

impl LaguerreExpansion {
    pub fn new(order: Order, coeffs: Vec<f64>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite coefficient {c}")));
        }
        Ok(LaguerreExpansion { order, coeffs })
    }

    /// The expansion of `L_n^α` itself: `Γ(α+1) δ_{kn}`.
    pub fn mode(order: Order, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = order.mass();
        LaguerreExpansion { order, coeffs }
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Same coefficients under a different order tag.
    pub fn retag(&self, order: Order) -> Self {
        LaguerreExpansion { order, coeffs: self.coeffs.clone() }
    }

    /// `f(x)`; fails where a polynomial leaves the f64 range.
    pub fn synthesize(&self, x: f64) -> Result<f64> {
        let mut table = vec![0.0; self.coeffs.len()];
        laguerre_into(self.order.get(), x, &mut table);
        let v = self.coeffs.iter().zip(&table).map(|(c, l)| c * l).sum::<f64>() / self.order.mass();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Overflow { n: self.coeffs.len().saturating_sub(1), alpha: self.order.get(), x })
        }
    }

    /// `Σ_k A_k^α |ĥ(k)|² / Γ(α+1)`, the coefficient side of Parseval's formula.
    pub fn parseval_sum(&self) -> f64 {
        let a = binom_a_table(self.coeffs.len().saturating_sub(1), self.order.get());
        self.coeffs.iter().zip(&a).map(|(c, a)| a * c * c).sum::<f64>() / self.order.mass()
    }
}

impl WeightedFunction for LaguerreExpansion {
    fn damped(&self, x: f64) -> f64 {
        damped_series(&self.coeffs, self.order.get(), x) / self.order.mass()
    }
}

/// Coefficients `ĥ_α(0..=n)` of `f` by quadrature at order α.
///
/// Exact for polynomial `f` of degree `d` when `d + n < 2 · rule.degree()`.
pub fn analyze<W: WeightedFunction + ?Sized>(f: &W, order: Order, n: usize, rule: &QuadratureRule) -> Result<LaguerreExpansion> {
    rule.check_order(order.get())?;
    if rule.degree() < n + 1 {
        return Err(Error::RuleTooSmall { nodes: rule.degree(), required: n + 1 });
    }
    let a = order.get();
    let mut coeffs = vec![0.0; n + 1];
    let mut table = vec![0.0; n + 1];
    for (&x, &w) in rule.nodes().iter().zip(rule.damped_weights()) {
        let fx = f.damped(x);
        if !fx.is_finite() {
            return Err(Error::NonFinite { x, value: fx });
        }
        damped_laguerre_into(a, x, &mut table);
        let wf = w * fx;
        for (c, l) in coeffs.iter_mut().zip(&table) {
            *c += wf * l;
        }
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c /= binom_a(k, a);
    }
    LaguerreExpansion::new(order, coeffs)
}

/// `f(x)` from its expansion.
pub fn synthesize(e: &LaguerreExpansion, x: f64) -> Result<f64> {
    e.synthesize(x)
}

/// Relative gap between the two sides of Parseval's formula
/// `Γ(α+1)^{-1} Σ A_k^α |ĥ(k)|² = ∫ |f e^{-x/2}|² x^α dx`, the right side by `rule`.
pub fn parseval_defect<W: WeightedFunction + ?Sized>(e: &LaguerreExpansion, f: &W, rule: &QuadratureRule) -> Result<f64> {
    let lhs = e.parseval_sum();
    let rhs = weighted_lp_norm(f, SpaceParams::new(2.0, e.order.get())?, rule)?.powi(2);
    Ok(relative_gap(lhs, rhs))
}

pub(crate) fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `Σ_k A_k^{α+λ} |Δ^λ ĥ_α(k)|²` divided by `∫ |f e^{-x/2}|² x^{α+λ} dx`.
///
/// For polynomials the ratio is exactly `Γ(α+1)² / Γ(α+λ+1)`; at `λ = 0` it is `Γ(α+1)`.
pub fn pardif_ratio(e: &LaguerreExpansion, lambda: f64, rule_shifted: &QuadratureRule) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be nonnegative, got {lambda}")));
    }
    let shifted = e.order.get() + lambda;
    rule_shifted.check_order(shifted)?;
    let diffs = if lambda == 0.0 { e.coeffs.clone() } else { frac_diff_finite(&e.coeffs, lambda) };
    let a = binom_a_table(diffs.len().saturating_sub(1), shifted);
    let lhs: f64 = diffs.iter().zip(&a).map(|(d, a)| a * d * d).sum();
    let rhs = weighted_lp_norm(e, SpaceParams::new(2.0, shifted)?, rule_shifted)?.powi(2);
    if rhs == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(lhs / rhs)
}

/// Polynomial in the monomial basis, `Σ_j c_j x^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Polynomial { coeffs }
    }

    /// Coefficients uniform in `[-1, 1]`, leading one nonzero.
    pub fn random<R: Rng + ?Sized>(degree: usize, rng: &mut R) -> Self {
        let mut coeffs: Vec<f64> = (0..=degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        if coeffs[degree] == 0.0 {
            coeffs[degree] = 1.0;
        }
        Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

impl WeightedFunction for Polynomial {
    fn damped(&self, x: f64) -> f64 {
        self.eval(x) * (-0.5 * x).exp()
    }
}

/// Least-squares fit of `Δ^λ ĥ_α(k) ≈ C ĥ_{α+λ}(k)` over a bank of polynomials.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LcoeffFit {
    pub constant: f64,
    /// `max over the bank of max_k |Δ^λ ĥ_α(k) − C ĥ_{α+λ}(k)| / max_k |Δ^λ ĥ_α(k)|`
    pub residual: f64,
}

/// Residual threshold above which [`lcoeff_constant`] reports an identity violation.
pub const LCOEFF_THRESHOLD: f64 = 1e-6;

/// Fits the constant relating order-α differences to order-(α+λ) coefficients.
pub fn lcoeff_constant(alpha: Order, lambda: f64, testbank: &[Polynomial]) -> Result<LcoeffFit> {
    if testbank.is_empty() {
        return Err(Error::InvalidArgument("lcoeff_constant needs a nonempty test bank".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let shifted = Order::new(alpha.get() + lambda)?;
    let deg = testbank.iter().map(Polynomial::degree).max().unwrap_or(0);
    let rule_a = QuadratureRule::new(alpha, deg + 8)?;
    let rule_s = QuadratureRule::new(shifted, deg + 8)?;
    let mut pairs = Vec::with_capacity(testbank.len());
    for f in testbank {
        let d = f.degree();
        let lhs = frac_diff_finite(analyze(f, alpha, d, &rule_a)?.coeffs(), lambda);
        let rhs = analyze(f, shifted, d, &rule_s)?.into_coeffs();
        pairs.push((lhs, rhs));
    }
    // each polynomial is scaled to unit max so large-degree members do not dominate the fit
    let (mut num, mut den) = (0.0, 0.0);
    for (l, r) in &pairs {
        let s = l.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        num += l.iter().zip(r).map(|(a, b)| a * b).sum::<f64>() / (s * s);
        den += r.iter().map(|b| b * b).sum::<f64>() / (s * s);
    }
    let constant = num / den;
    let residual = pairs
        .iter()
        .map(|(l, r)| {
            let s = l.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let worst = l.iter().zip(r).fold(0.0f64, |m, (a, b)| m.max((a - constant * b).abs()));
            if s == 0.0 {
                worst
            } else {
                worst / s
            }
        })
        .fold(0.0, f64::max);
    if residual > LCOEFF_THRESHOLD {
        return Err(Error::IdentityViolation { residual, threshold: LCOEFF_THRESHOLD });
    }
    Ok(LcoeffFit { constant, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laguerre::laguerre;
    use crate::special::{gamma, gamma_ratio};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    #[test]
    fn modes_analyze_to_deltas() {
        for &a in &[-0.5, 0.0, 0.5, 2.7] {
            let rule = QuadratureRule::new(ord(a), 24).unwrap();
            for n in 0..=10 {
                let f = |x: f64| laguerre(n, a, x).unwrap();
                let e = analyze(&f, ord(a), 12, &rule).unwrap();
                for (k, c) in e.coeffs().iter().enumerate() {
                    let expected = if k == n { gamma(a + 1.0) } else { 0.0 };
                    assert!((c - expected).abs() <= 1e-10 * gamma(a + 1.0), "a={a} n={n} k={k} c={c}");
                }
            }
        }
    }

    #[test]
    fn zero_and_constant() {
        let rule = QuadratureRule::new(ord(1.5), 10).unwrap();
        let z = analyze(&|_x: f64| 0.0, ord(1.5), 5, &rule).unwrap();
        assert!(z.coeffs().iter().all(|c| *c == 0.0));
        let one = analyze(&|_x: f64| 1.0, ord(1.5), 5, &rule).unwrap();
        assert_relative_eq!(one.coeffs()[0], gamma(2.5), max_relative = 1e-12);
        assert!(one.coeffs()[1..].iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn rule_checks() {
        let rule = QuadratureRule::new(ord(0.0), 4).unwrap();
        assert!(matches!(analyze(&|x: f64| x, ord(0.5), 2, &rule), Err(Error::OrderMismatch { .. })));
        assert!(matches!(analyze(&|x: f64| x, ord(0.0), 4, &rule), Err(Error::RuleTooSmall { .. })));
    }

    #[test]
    fn synthesis_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &a in &[0.0, 0.5, 2.7] {
            let rule = QuadratureRule::new(ord(a), 16).unwrap();
            let f = |x: f64| laguerre(3, a, x).unwrap();
            let e = analyze(&f, ord(a), 8, &rule).unwrap();
            for _ in 0..50 {
                let x: f64 = rng.random_range(0.0..30.0);
                assert_relative_eq!(e.synthesize(x).unwrap(), f(x), max_relative = 1e-8, epsilon = 1e-9);
            }
        }
        let unit = LaguerreExpansion::new(ord(0.7), vec![gamma(1.7), 0.0, 0.0]).unwrap();
        assert_relative_eq!(unit.synthesize(3.3).unwrap(), 1.0, epsilon = 1e-14);
        let rule = QuadratureRule::new(ord(0.0), 4).unwrap();
        let id = analyze(&|x: f64| x, ord(0.0), 1, &rule).unwrap();
        assert_relative_eq!(id.synthesize(2.0).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn damped_form_matches_plain() {
        let e = LaguerreExpansion::new(ord(1.0), vec![0.3, -1.0, 2.0, 0.7]).unwrap();
        for &x in &[0.0, 0.5, 3.0, 40.0] {
            assert_relative_eq!(e.damped(x), e.synthesize(x).unwrap() * (-0.5 * x).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn round_trip_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[8usize, 64, 256] {
            let a = 0.5;
            let coeffs: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let e = LaguerreExpansion::new(ord(a), coeffs).unwrap();
            let rule = QuadratureRule::new(ord(a), n + 8).unwrap();
            let back = analyze(&e, ord(a), n, &rule).unwrap();
            let scale = e.coeffs().iter().fold(0.0f64, |m, c| m.max(c.abs()));
            for (b, c) in back.coeffs().iter().zip(e.coeffs()) {
                assert!((b - c).abs() <= 1e-9 * scale, "n={n}: {b} vs {c}");
            }
        }
    }

    #[test]
    fn parseval_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &a in &[0.0, 0.5, 1.0, 2.7] {
            for d in [0usize, 5, 17, 40] {
                let f = Polynomial::random(d, &mut rng);
                let rule = QuadratureRule::new(ord(a), d + 4).unwrap();
                let e = analyze(&f, ord(a), d, &rule).unwrap();
                let check = QuadratureRule::new(ord(a), 2 * d + 12).unwrap();
                let defect = parseval_defect(&e, &f, &check).unwrap();
                assert!(defect <= 1e-8, "a={a} d={d}: {defect}");
            }
        }
        let zero = LaguerreExpansion::new(ord(0.0), vec![0.0; 3]).unwrap();
        let rule = QuadratureRule::new(ord(0.0), 4).unwrap();
        assert_eq!(parseval_defect(&zero, &|_x: f64| 0.0, &rule).unwrap(), 0.0);
    }

    #[test]
    fn pardif_ratio_closed_form() {
        for &a in &[0.0, 0.5, 2.0] {
            for &l in &[0.0, 0.5, 1.0, 2.0] {
                let rule = QuadratureRule::new(ord(a + l), 80).unwrap();
                let expected = gamma(a + 1.0).powi(2) / gamma(a + l + 1.0);
                let mut ratios = Vec::new();
                for n in 1..=32 {
                    let r = pardif_ratio(&LaguerreExpansion::mode(ord(a), n), l, &rule).unwrap();
                    assert_relative_eq!(r, expected, max_relative = 1e-9);
                    ratios.push(r);
                }
                let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(lo, hi), r| (lo.min(*r), hi.max(*r)));
                assert!(hi / lo < 100.0);
            }
        }
        let rule = QuadratureRule::new(ord(1.0), 8).unwrap();
        let zero = LaguerreExpansion::new(ord(0.0), vec![0.0; 4]).unwrap();
        assert!(matches!(pardif_ratio(&zero, 1.0, &rule), Err(Error::ZeroFunction)));
    }

    #[test]
    fn lcoeff_matches_gamma_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for &a in &[0.0, 0.5, 1.0] {
            for &l in &[0.5, 1.0, 2.0] {
                let bank1: Vec<Polynomial> = (0..4).map(|i| Polynomial::random(3 + 5 * i, &mut rng)).collect();
                let bank2: Vec<Polynomial> = (0..4).map(|i| Polynomial::random(4 + 6 * i, &mut rng)).collect();
                let f1 = lcoeff_constant(ord(a), l, &bank1).unwrap();
                let f2 = lcoeff_constant(ord(a), l, &bank2).unwrap();
                assert!(f1.residual <= 1e-6 && f2.residual <= 1e-6);
                assert_relative_eq!(f1.constant, f2.constant, max_relative = 1e-6);
                assert_relative_eq!(f1.constant, gamma_ratio(a + 1.0, a + l + 1.0), max_relative = 1e-6);
            }
        }
        // λ → 0: Δ^λ tends to the identity
        let bank: Vec<Polynomial> = (0..3).map(|i| Polynomial::random(4 + i, &mut rng)).collect();
        let fit = lcoeff_constant(ord(0.5), 1e-9, &bank).unwrap();
        assert_relative_eq!(fit.constant, 1.0, max_relative = 1e-6);
    }
}
