use super::{NormKind, NormParams, NormReport, Truncation};
use crate::error::{Error, Result};
use crate::sequences::MultiplierSeq;
use crate::spectral::LaguerreExpansion;

/// `T_m e`: coefficients `m_k ĥ(k)`, same order.
pub fn apply_multiplier(m: &MultiplierSeq, e: &LaguerreExpansion) -> LaguerreExpansion {
    let coeffs = e.coeffs().iter().enumerate().map(|(k, c)| m.value(k) * c).collect();
    LaguerreExpansion::new(e.order(), coeffs).expect("bounded multiplier keeps coefficients finite")
}

/// Largest gap in `Δ(m_k h_k) = m_k Δh_k + h_{k+1} Δm_k` over the finite vectors
/// (zero beyond their ends), relative to `max|m| · max|h|`.
pub fn leibniz_defect(m: &[f64], h: &[f64]) -> f64 {
    let n = m.len().max(h.len());
    let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
    let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs())) * h.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    (0..n)
        .map(|k| {
            let lhs = at(m, k) * at(h, k) - at(m, k + 1) * at(h, k + 1);
            let rhs = at(m, k) * (at(h, k) - at(h, k + 1)) + at(h, k + 1) * (at(m, k) - at(m, k + 1));
            (lhs - rhs).abs()
        })
        .fold(0.0, f64::max)
        / scale
}

/// `‖m‖_{M²_{α;α}} = sup_k |m_k|`: the maximum over `k ≤ K` joined with the family's tail sup.
pub fn m2_norm_exact(m: &MultiplierSeq, k_max: usize) -> Result<NormReport> {
    let head = (0..=k_max).map(|k| m.value(k).abs()).fold(0.0, f64::max);
    let tail = m.tail_sup(k_max);
    if !tail.is_finite() {
        return Err(Error::Hypothesis(format!("no tail bound for {}", m.spec())));
    }
    let mut r = NormReport::new(NormKind::Exact, head.max(tail), NormParams::new(2.0, 2.0, f64::NAN, f64::NAN, f64::NAN));
    r.truncation = Truncation { basis: k_max + 1, ..Truncation::default() };
    r.diagnostics.insert("head_sup".into(), head);
    r.diagnostics.insert("tail_sup".into(), tail);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::WeightedFunction;
    use crate::special::{gamma, Order};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_and_projection() {
        let o = Order::new(0.5).unwrap();
        let e = LaguerreExpansion::new(o, vec![1.0, -2.0, 3.0]).unwrap();
        assert_eq!(apply_multiplier(&MultiplierSeq::constant(1.0), &e), e);
        let p = apply_multiplier(&MultiplierSeq::characteristic(1), &e);
        assert_eq!(p.coeffs(), &[1.0, 0.0, 0.0]);
        for &x in &[0.0, 1.0, 9.0] {
            assert_relative_eq!(p.synthesize(x).unwrap(), 1.0 / gamma(1.5), max_relative = 1e-14);
            assert!(p.damped(x).is_finite());
        }
    }

    #[test]
    fn leibniz_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let n = rng.random_range(1..64);
            let m: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let h: Vec<f64> = (0..rng.random_range(1..64)).map(|_| rng.random_range(-10.0..10.0)).collect();
            assert!(leibniz_defect(&m, &h) <= 1e-12);
        }
    }

    #[test]
    fn exact_norms() {
        let r = m2_norm_exact(&MultiplierSeq::constant(-2.5), 10).unwrap();
        assert_eq!((r.kind, r.value), (NormKind::Exact, 2.5));
        assert_eq!(m2_norm_exact(&MultiplierSeq::abel(0.9).unwrap(), 10).unwrap().value, 1.0);
        assert_eq!(m2_norm_exact(&MultiplierSeq::riesz(16, 1.5).unwrap(), 4).unwrap().value, 1.0);
        let osc = m2_norm_exact(&MultiplierSeq::oscillating(2.0).unwrap(), 10).unwrap();
        assert_eq!(osc.value, 1.0);
        let t = MultiplierSeq::tabulated(vec![0.1, -0.7, 0.2]).unwrap();
        assert_eq!(m2_norm_exact(&t, 1).unwrap().value, 0.7);
    }
}
