//! Finite sections of `T_m` on `L²_{w(α+λ)}` for order-α expansions.
//!
//! With `ψ_j = L_j^{α+λ} / s_j`, `s_j² = Γ(j+α+λ+1)/j!`, the span of `ψ_0..ψ_{N-1}` is the
//! polynomials of degree `< N`, which `T_m` maps into itself. The section
//! `M_{ij} = ⟨ψ_i, T_m ψ_j⟩_{α+λ}` is therefore exact, upper triangular, and its
//! largest singular value is nondecreasing in `N`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{NormKind, NormParams, NormReport, Truncation};
use crate::error::{Error, Result};
use crate::laguerre::damped_laguerre_into;
use crate::quadrature::QuadratureRule;
use crate::sequences::MultiplierSeq;
use crate::special::{binom_a_table, ln_gamma, Order};

/// How the section matrix is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixRoute {
    /// Analysis at order α and re-expansion at order α+λ, both by Gauss rules.
    Quadrature,
    /// Closed-form connection coefficients between orders α and α+λ.
    Connection,
}

/// Power-iteration controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    /// Up to `2 · iters` steps on `AᵀA`.
    pub iters: usize,
    pub seed: u64,
    /// Relative change of the Rayleigh quotient that counts as converged.
    pub tol: f64,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { iters: 2000, seed: 0x1a6e, tol: 1e-10 }
    }
}

/// Number of leading order-α modes removed from the domain: `⌈(λ-1-α)/2⌉` when positive.
pub fn restricted_modes(alpha: f64, lambda: f64) -> usize {
    let c = ((lambda - 1.0 - alpha) / 2.0).ceil();
    if c > 0.0 {
        c as usize
    } else {
        0
    }
}

fn basis_scales(n: usize, shifted: f64) -> Vec<f64> {
    (0..n).map(|j| (0.5 * (ln_gamma(j as f64 + shifted + 1.0) - ln_gamma(j as f64 + 1.0))).exp()).collect()
}

/// Section pieces: `coef[k][j]` is the order-α coefficient `ĥ_α(k)` of `ψ_j`, and
/// `gram[i][k] = ⟨ψ_i, L_k^α⟩_{α+λ}`, so that `M = gram · diag(m/Γ(α+1)) · coef`.
struct Pieces {
    coef: Vec<Vec<f64>>,
    gram: Vec<Vec<f64>>,
}

fn pieces_quadrature(alpha: Order, lambda: f64, n: usize) -> Result<Pieces> {
    let a = alpha.get();
    let shifted = Order::new(a + lambda)?;
    let s = basis_scales(n, shifted.get());
    let a_tab = binom_a_table(n, a);
    let rule_a = QuadratureRule::new(alpha, n + 8)?;
    let rule_s = QuadratureRule::new(shifted, n + 8)?;
    let mut coef = vec![vec![0.0; n]; n];
    let mut gram = vec![vec![0.0; n]; n];
    let (mut la, mut ls) = (vec![0.0; n], vec![0.0; n]);
    for (&x, &w) in rule_a.nodes().iter().zip(rule_a.damped_weights()) {
        damped_laguerre_into(a, x, &mut la);
        damped_laguerre_into(shifted.get(), x, &mut ls);
        for (k, row) in coef.iter_mut().enumerate() {
            let wl = w * la[k] / a_tab[k];
            for j in k..n {
                row[j] += wl * ls[j] / s[j];
            }
        }
    }
    for (&x, &w) in rule_s.nodes().iter().zip(rule_s.damped_weights()) {
        damped_laguerre_into(a, x, &mut la);
        damped_laguerre_into(shifted.get(), x, &mut ls);
        for (i, row) in gram.iter_mut().enumerate() {
            let wp = w * ls[i] / s[i];
            for k in i..n {
                row[k] += wp * la[k];
            }
        }
    }
    // entries below the diagonal vanish by orthogonality; drop their rounding noise
    for i in 0..n {
        for k in 0..i {
            gram[i][k] = 0.0;
            coef[i][k] = 0.0;
        }
    }
    Ok(Pieces { coef, gram })
}

/// `L_j^{α+λ} = Σ_k A_{j-k}^{λ-1} L_k^α` and `L_k^α = Σ_i A_{k-i}^{-λ-1} L_i^{α+λ}`.
fn pieces_connection(alpha: Order, lambda: f64, n: usize) -> Result<Pieces> {
    let s = basis_scales(n, alpha.get() + lambda);
    let up = binom_a_table(n, lambda - 1.0);
    let down = binom_a_table(n, -lambda - 1.0);
    let mass = alpha.mass();
    let mut coef = vec![vec![0.0; n]; n];
    let mut gram = vec![vec![0.0; n]; n];
    for k in 0..n {
        for j in k..n {
            coef[k][j] = mass * up[j - k] / s[j];
            gram[k][j] = down[j - k] * s[k];
        }
    }
    Ok(Pieces { coef, gram })
}

/// The `N × N` section `⟨ψ_i, T_m ψ_j⟩_{α+λ}`, row-major.
pub fn weighted_m2_matrix(m: &MultiplierSeq, alpha: Order, lambda: f64, n: usize, route: MatrixRoute) -> Result<Vec<Vec<f64>>> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let p = match route {
        MatrixRoute::Quadrature => pieces_quadrature(alpha, lambda, n)?,
        MatrixRoute::Connection => pieces_connection(alpha, lambda, n)?,
    };
    let mass = alpha.mass();
    let mk: Vec<f64> = m.values(n).iter().map(|v| v / mass).collect();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for k in i..n {
            let g = p.gram[i][k] * mk[k];
            if g == 0.0 {
                continue;
            }
            for j in k..n {
                out[i][j] += g * p.coef[k][j];
            }
        }
    }
    Ok(out)
}

/// Orthonormal basis (as rows) of the span of the first `r` rows of `coef`, by Gram–Schmidt.
fn constraint_basis(coef: &[Vec<f64>], r: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(r);
    for row in coef.iter().take(r) {
        let mut v = row.clone();
        for _ in 0..2 {
            for b in &q {
                let d: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            q.push(v);
        }
    }
    q
}

struct Section {
    a: Vec<Vec<f64>>,
    constraints: Vec<Vec<f64>>,
}

impl Section {
    fn project(&self, x: &mut [f64]) {
        for b in &self.constraints {
            let d: f64 = x.iter().zip(b).map(|(u, v)| u * v).sum();
            x.iter_mut().zip(b).for_each(|(u, v)| *u -= d * v);
        }
    }

    /// `‖A P x‖² / ‖P x‖²` and `Pᵀ Aᵀ A P x`, after projecting `x` in place.
    fn step(&self, x: &mut [f64]) -> (f64, Vec<f64>) {
        self.project(x);
        let n = x.len();
        let xx: f64 = x.iter().map(|v| v * v).sum();
        let ax: Vec<f64> = self.a.iter().map(|row| row.iter().zip(x.iter()).map(|(u, v)| u * v).sum()).collect();
        let mut y = vec![0.0; n];
        for (row, s) in self.a.iter().zip(&ax) {
            for (yj, r) in y.iter_mut().zip(row) {
                *yj += r * s;
            }
        }
        self.project(&mut y);
        let rq = if xx > 0.0 { ax.iter().map(|v| v * v).sum::<f64>() / xx } else { 0.0 };
        (rq, y)
    }
}

struct PowerResult {
    value: f64,
    vector: Vec<f64>,
    steps: usize,
    residual: f64,
    converged: bool,
}

fn power_iteration(sec: &Section, start: Vec<f64>, noise: f64, opts: &PowerOptions, rng: &mut ChaCha8Rng) -> PowerResult {
    let mut x = start;
    let (mut best, _) = sec.step(&mut x.clone());
    let mut best_vec = x.clone();
    if noise > 0.0 {
        let scale = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
        x.iter_mut().for_each(|v| *v += noise * scale * rng.random_range(-1.0..1.0));
    }
    let mut prev = f64::NAN;
    let mut residual = f64::INFINITY;
    let mut steps = 0;
    let mut converged = false;
    for _ in 0..2 * opts.iters.max(1) {
        let (rq, y) = sec.step(&mut x);
        steps += 1;
        if rq > best {
            best = rq;
            best_vec = x.clone();
        }
        residual = if rq == 0.0 { 0.0 } else { ((rq - prev) / rq).abs() };
        if residual < opts.tol {
            converged = true;
            break;
        }
        prev = rq;
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            converged = true;
            residual = 0.0;
            break;
        }
        x = y.into_iter().map(|v| v / norm).collect();
    }
    let norm = best_vec.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        best_vec.iter_mut().for_each(|v| *v /= norm);
    }
    PowerResult { value: best.max(0.0).sqrt(), vector: best_vec, steps, residual, converged }
}

fn build_section(m: &MultiplierSeq, alpha: Order, lambda: f64, n: usize, route: MatrixRoute) -> Result<Section> {
    let a = weighted_m2_matrix(m, alpha, lambda, n, route)?;
    let r = restricted_modes(alpha.get(), lambda);
    let constraints = if r > 0 {
        let p = match route {
            MatrixRoute::Quadrature => pieces_quadrature(alpha, lambda, n)?,
            MatrixRoute::Connection => pieces_connection(alpha, lambda, n)?,
        };
        constraint_basis(&p.coef, r)
    } else {
        Vec::new()
    };
    Ok(Section { a, constraints })
}

/// Largest singular values of the sections at each size in `sizes` (ascending),
/// each run warm-started from the previous top vector so the values never decrease.
pub fn weighted_m2_sweep(
    m: &MultiplierSeq,
    alpha: Order,
    lambda: f64,
    sizes: &[usize],
    opts: &PowerOptions,
) -> Result<Vec<NormReport>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("section sizes must increase".into()));
    }
    if let Some(&n) = sizes.first() {
        if n < 8 {
            return Err(Error::InvalidArgument(format!("basis size must be at least 8, got {n}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut prev: Option<Vec<f64>> = None;
    let mut out = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let sec = build_section(m, alpha, lambda, n, MatrixRoute::Quadrature)?;
        let (start, noise) = match prev.take() {
            Some(mut v) => {
                v.resize(n, 0.0);
                (v, 1e-2)
            }
            None => ((0..n).map(|_| rng.random_range(-1.0..1.0)).collect(), 0.0),
        };
        let res = power_iteration(&sec, start, noise, opts, &mut rng);
        let mut r = NormReport::new(NormKind::SvLower, res.value, NormParams::new(2.0, 2.0, alpha.get(), alpha.get() + lambda, alpha.get() + lambda));
        r.truncation = Truncation { basis: n, iterations: res.steps, r_grid: 0 };
        r.residual = res.residual;
        r.converged = res.converged;
        r.diagnostics.insert("lambda".into(), lambda);
        r.diagnostics.insert("restricted_modes".into(), sec.constraints.len() as f64);
        out.push(r);
        prev = Some(res.vector);
    }
    Ok(out)
}

/// `‖T_m‖` on `L²_{w(α+λ)}` restricted to polynomials of degree `< N`, a lower bound for
/// the multiplier norm. For `α < λ - 1` the first `⌈(λ-1-α)/2⌉` order-α coefficients are
/// constrained to vanish.
///
/// Runs the warm-started sweep over `8, 16, ..., N` so that values at different `N`
/// with the same options are ordered.
pub fn weighted_m2_norm(m: &MultiplierSeq, alpha: Order, lambda: f64, n: usize, opts: &PowerOptions) -> Result<NormReport> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!("basis size must be at least 8, got {n}")));
    }
    let mut sizes: Vec<usize> = (3..usize::BITS).map(|j| 1usize << j).take_while(|s| *s < n).collect();
    sizes.push(n);
    let mut reports = weighted_m2_sweep(m, alpha, lambda, &sizes, opts)?;
    Ok(reports.pop().expect("sizes is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn ord(a: f64) -> Order {
        Order::new(a).unwrap()
    }

    fn dense_top_sv(a: &[Vec<f64>], constraints: &[Vec<f64>]) -> f64 {
        let n = a.len();
        let mut mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
        if !constraints.is_empty() {
            let mut p = DMatrix::identity(n, n);
            for b in constraints {
                let v = nalgebra::DVector::from_column_slice(b);
                p -= &v * v.transpose();
            }
            mat *= p;
        }
        mat.singular_values().max()
    }

    #[test]
    fn routes_agree() {
        for &(a, l) in &[(0.5, 1.0), (2.7, 1.0), (-0.5, 1.0), (0.3, 2.0), (2.5, 2.0)] {
            let m = MultiplierSeq::parse("riesz:16:1.5").unwrap();
            let q = weighted_m2_matrix(&m, ord(a), l, 48, MatrixRoute::Quadrature).unwrap();
            let c = weighted_m2_matrix(&m, ord(a), l, 48, MatrixRoute::Connection).unwrap();
            let scale = c.iter().flatten().fold(0.0f64, |s, v| s.max(v.abs()));
            for (rq, rc) in q.iter().zip(&c) {
                for (x, y) in rq.iter().zip(rc) {
                    assert!((x - y).abs() <= 1e-10 * scale, "a={a} l={l}: {x} vs {y}");
                }
            }
        }
    }

    #[test]
    fn identity_has_norm_one() {
        for &a in &[-0.5, 0.5, 1.0, 2.7] {
            for &l in &[1.0, 2.0] {
                let r = weighted_m2_norm(&MultiplierSeq::constant(1.0), ord(a), l, 32, &PowerOptions::default()).unwrap();
                assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn restriction_counts() {
        assert_eq!(restricted_modes(-0.5, 1.0), 1);
        assert_eq!(restricted_modes(0.5, 1.0), 0);
        assert_eq!(restricted_modes(0.3, 2.0), 1);
        assert_eq!(restricted_modes(2.5, 2.0), 0);
        assert_eq!(restricted_modes(-0.9, 2.0), 1);
    }

    #[test]
    fn matches_dense_svd() {
        let opts = PowerOptions { iters: 20_000, ..PowerOptions::default() };
        for (spec, a, l) in [("char:1", 0.5, 1.0), ("abel:0.9", 1.0, 1.0), ("riesz:8:1", -0.5, 1.0), ("char:4", 0.3, 2.0)] {
            let m = MultiplierSeq::parse(spec).unwrap();
            let sec = build_section(&m, ord(a), l, 64, MatrixRoute::Connection).unwrap();
            let dense = dense_top_sv(&sec.a, &sec.constraints);
            let r = weighted_m2_norm(&m, ord(a), l, 64, &opts).unwrap();
            assert!(r.value <= dense * (1.0 + 1e-9), "{spec}: {} > {dense}", r.value);
            assert_relative_eq!(r.value, dense, max_relative = 1e-6);
        }
    }

    #[test]
    fn sweep_is_monotone() {
        let m = MultiplierSeq::parse("char:8").unwrap();
        let reps = weighted_m2_sweep(&m, ord(0.5), 1.0, &[8, 16, 32, 64], &PowerOptions::default()).unwrap();
        assert!(reps.windows(2).all(|w| w[1].value >= w[0].value));
        let single = weighted_m2_norm(&m, ord(0.5), 1.0, 64, &PowerOptions::default()).unwrap();
        assert_eq!(single.value, reps[3].value);
    }

    #[test]
    fn small_basis_rejected() {
        let m = MultiplierSeq::constant(1.0);
        assert!(weighted_m2_norm(&m, ord(0.5), 1.0, 4, &PowerOptions::default()).is_err());
    }
}
