use super::diff::{FracDiffOperator, DEFAULT_TAIL_TOL};
use super::MultiplierSeq;
use crate::error::{Error, Result};

/// Weak-bounded-variation norm `‖m‖_{q,δ}` evaluated on dyadic blocks.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct WbvReport {
    pub q: f64,
    pub delta: f64,
    /// `sup_k |m_k|`
    pub sup_part: f64,
    /// `(N, block value)` for `N ∈ {0, 1, 2, 4, ...}`.
    pub block_sups: Vec<(usize, f64)>,
    /// `sup_part + max(block values)`
    pub norm: f64,
    /// Largest truncation used for `Δ^δ`.
    pub truncation_tail: usize,
}

/// Block terms `(k+1)^δ |Δ^δ m_k|` for `k = N..=2N`.
fn block_terms(op: &FracDiffOperator, m: &MultiplierSeq, n: usize, trunc: &mut usize) -> Result<Vec<f64>> {
    (n..=2 * n)
        .map(|k| {
            let d = op.apply_auto(m, k, DEFAULT_TAIL_TOL)?;
            *trunc = (*trunc).max(d.terms);
            Ok((k as f64 + 1.0).powf(op.delta()) * d.value.abs())
        })
        .collect()
}

fn block_value(terms: &[f64], n: usize, q: f64) -> f64 {
    if q.is_infinite() {
        terms.iter().fold(0.0, |a, t| a.max(*t))
    } else {
        terms
            .iter()
            .enumerate()
            .map(|(i, t)| t.powf(q) / (n + i + 1) as f64)
            .sum::<f64>()
            .powf(1.0 / q)
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(q))
    }
}

/// One block `(Σ_{k=N}^{2N} |(k+1)^δ Δ^δ m_k|^q / (k+1))^{1/q}` (max form for `q = ∞`).
pub fn wbv_block(m: &MultiplierSeq, q: f64, delta: f64, n: usize) -> Result<f64> {
    check_q(q)?;
    let op = FracDiffOperator::new(delta)?;
    let mut t = 0;
    Ok(block_value(&block_terms(&op, m, n, &mut t)?, n, q))
}

/// `‖m‖_{q,δ}` with the sup over `N` taken on `N ∈ {0} ∪ {2^j ≤ n_max}`.
pub fn wbv_norm(m: &MultiplierSeq, q: f64, delta: f64, n_max: usize) -> Result<WbvReport> {
    check_q(q)?;
    if n_max < 1 {
        return Err(Error::InvalidArgument("wbv_norm needs n_max >= 1".into()));
    }
    let op = FracDiffOperator::new(delta)?;
    let mut trunc = 0;
    let mut block_sups = Vec::new();
    for n in dyadic_blocks(n_max) {
        // past the support every block vanishes
        if matches!(m.support(), Some(s) if n >= s) {
            block_sups.push((n, 0.0));
            continue;
        }
        let terms = block_terms(&op, m, n, &mut trunc)?;
        block_sups.push((n, block_value(&terms, n, q)));
    }
    let sup_part = m.sup_abs();
    let top = block_sups.iter().fold(0.0f64, |a, (_, v)| a.max(*v));
    Ok(WbvReport { q, delta, sup_part, block_sups, norm: sup_part + top, truncation_tail: trunc })
}

fn dyadic_blocks(n_max: usize) -> impl Iterator<Item = usize> {
    std::iter::once(0).chain((0..usize::BITS).map(|j| 1usize << j).take_while(move |n| *n <= n_max))
}

/// Largest ratio, over dyadic blocks, of the `q = 2` block value to the Hölder bound
/// `block_{q'} · (Σ_{k=N}^{2N} 1/(k+1))^{1/2 - 1/q'}` for `q' ≥ 2`. Never exceeds 1.
pub fn block_holder_excess(m: &MultiplierSeq, delta: f64, q_big: f64, n_max: usize) -> Result<f64> {
    if !(q_big >= 2.0) {
        return Err(Error::InvalidExponent(q_big));
    }
    let op = FracDiffOperator::new(delta)?;
    let mut trunc = 0;
    let mut worst = 0.0f64;
    for n in dyadic_blocks(n_max) {
        let terms = block_terms(&op, m, n, &mut trunc)?;
        let two = block_value(&terms, n, 2.0);
        if two == 0.0 {
            continue;
        }
        let mass: f64 = (n..=2 * n).map(|k| 1.0 / (k as f64 + 1.0)).sum();
        let exponent = if q_big.is_infinite() { 0.5 } else { 0.5 - 1.0 / q_big };
        let bound = block_value(&terms, n, q_big) * mass.powf(exponent);
        worst = worst.max(two / bound);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constant_norm_is_its_modulus() {
        for &d in &[0.5, 1.0, 2.0] {
            let r = wbv_norm(&MultiplierSeq::constant(-1.5), 2.0, d, 1 << 10).unwrap();
            assert_relative_eq!(r.norm, 1.5, epsilon = 1e-11);
        }
    }

    #[test]
    fn unit_impulse() {
        let m = MultiplierSeq::tabulated(vec![1.0]).unwrap();
        for &d in &[0.5, 1.0, 2.0] {
            let r = wbv_norm(&m, 2.0, d, 64).unwrap();
            assert_relative_eq!(r.norm, 2.0, epsilon = 1e-14);
            assert_eq!(r.block_sups[0], (0, 1.0));
            assert!(r.block_sups[1..].iter().all(|(_, v)| *v == 0.0));
        }
    }

    #[test]
    fn abel_blocks_decay_past_scale() {
        let r = 0.95;
        let m = MultiplierSeq::abel(r).unwrap();
        let rep = wbv_norm(&m, 2.0, 1.0, 1 << 12).unwrap();
        assert!(rep.norm.is_finite());
        let scale = 1.0 / (1.0 - r);
        let tail: Vec<f64> = rep.block_sups.iter().filter(|(n, _)| *n as f64 >= 2.0 * scale).map(|(_, v)| *v).collect();
        assert!(tail.windows(2).all(|w| w[1] <= w[0]));
        // closed form: (k+1) r^k (1-r) summed against 1/(k+1)
        for &(n, v) in &rep.block_sups {
            let exact: f64 = (n..=2 * n).map(|k| ((k as f64 + 1.0) * r.powi(k as i32) * (1.0 - r)).powi(2) / (k as f64 + 1.0)).sum::<f64>().sqrt();
            assert_relative_eq!(v, exact, max_relative = 1e-10, epsilon = 1e-300);
        }
    }

    #[test]
    fn sup_form() {
        let m = MultiplierSeq::characteristic(5);
        let r = wbv_norm(&m, f64::INFINITY, 1.0, 64).unwrap();
        // Δm_4 = 1 gives (4+1) · 1
        assert_relative_eq!(r.norm, 1.0 + 5.0, epsilon = 1e-14);
    }

    #[test]
    fn norm_nondecreasing_in_n_max() {
        let m = MultiplierSeq::oscillating(2.0).unwrap();
        let mut prev = 0.0;
        for j in 0..14 {
            let r = wbv_norm(&m, 2.0, 1.0, 1 << j).unwrap();
            assert!(r.norm >= prev);
            prev = r.norm;
        }
    }

    #[test]
    fn holder_between_block_norms() {
        let bank = ["abel:0.9", "riesz:16:0.5", "char:8", "osc:2", "constant:1"];
        for s in bank {
            let m = MultiplierSeq::parse(s).unwrap();
            for &q in &[2.0, 3.0, 4.0, f64::INFINITY] {
                assert!(block_holder_excess(&m, 1.0, q, 1 << 10).unwrap() <= 1.0 + 1e-12, "{s} q={q}");
            }
        }
    }

    #[test]
    fn dense_blocks_comparable_to_dyadic() {
        // the dyadic sup is within a factor 2 of the sup over all N on this range
        let m = MultiplierSeq::oscillating(3.0).unwrap();
        let rep = wbv_norm(&m, 2.0, 1.0, 256).unwrap();
        let dyadic = rep.norm - rep.sup_part;
        let dense = (0..=256).map(|n| wbv_block(&m, 2.0, 1.0, n).unwrap()).fold(0.0f64, f64::max);
        assert!(dense >= dyadic - 1e-15);
        assert!(dense <= 2.0 * dyadic);
    }
}
