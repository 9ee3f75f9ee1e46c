use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::apply::apply_multiplier;
use super::{NormKind, NormParams, NormReport, Truncation};
use crate::error::{Error, Result};
use crate::norms::{weighted_lp_norm, SpaceParams};
use crate::quadrature::QuadratureRule;
use crate::sequences::MultiplierSeq;
use crate::spectral::LaguerreExpansion;
use crate::special::Order;

/// Candidate recipe for [`mpq_lower_bound_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    /// Highest polynomial degree among the candidates.
    pub max_degree: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_degree: 64, trials: 64, seed: 0 }
    }
}

const ABEL_RADII: [f64; 5] = [0.5, 0.7, 0.8, 0.9, 0.95];

/// Structured candidates first (single modes, dyadic blocks, Abel means), then random draws.
fn candidates(order: Order, opts: &SearchOptions) -> Vec<(String, LaguerreExpansion)> {
    let d = opts.max_degree;
    let mut out = Vec::new();
    for k in 0..=d {
        out.push((format!("mode:{k}"), LaguerreExpansion::mode(order, k)));
    }
    let mut j = 0;
    while (1usize << j) <= d {
        let lo = 1usize << j;
        let hi = (lo << 1).min(d + 1);
        let mut c = vec![0.0; hi];
        c[lo..hi].iter_mut().for_each(|v| *v = 1.0);
        out.push((format!("block:{lo}"), LaguerreExpansion::new(order, c).expect("finite")));
        j += 1;
    }
    for r in ABEL_RADII {
        let c: Vec<f64> = (0..=d).map(|k| r.powi(k as i32)).collect();
        out.push((format!("abel:{r}"), LaguerreExpansion::new(order, c).expect("finite")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in 0..opts.trials {
        let deg = rng.random_range(0..=d);
        let c: Vec<f64> = (0..=deg).map(|_| rng.random_range(-1.0..1.0)).collect();
        out.push((format!("random:{t}"), LaguerreExpansion::new(order, c).expect("finite")));
    }
    out
}

fn rule_for(space: SpaceParams, degree: usize) -> Result<QuadratureRule> {
    // exact for p = 2; a generous size for other exponents
    QuadratureRule::new(Order::new(space.gamma())?, 2 * degree + 32)
}

/// Lower bound for `‖m‖_{M^{p,q}_{α;γ,δ}}` with the default candidate degree 64.
pub fn mpq_lower_bound(m: &MultiplierSeq, from: SpaceParams, to: SpaceParams, alpha: Order, trials: usize, seed: u64) -> Result<NormReport> {
    mpq_lower_bound_with(m, from, to, alpha, &SearchOptions { trials, seed, ..SearchOptions::default() })
}

/// `max ‖T_m f‖_{L^q_{w(δ)}} / ‖f‖_{L^p_{w(γ)}}` over a fixed, seeded candidate set.
///
/// The diagnostics keep the best single-mode ratio and the index of the winning candidate.
pub fn mpq_lower_bound_with(m: &MultiplierSeq, from: SpaceParams, to: SpaceParams, alpha: Order, opts: &SearchOptions) -> Result<NormReport> {
    if opts.trials < 1 {
        return Err(Error::InvalidArgument("at least one random trial is required".into()));
    }
    let rule_from = rule_for(from, opts.max_degree)?;
    let rule_to = rule_for(to, opts.max_degree)?;
    let cands = candidates(alpha, opts);
    let mut best = (0.0f64, 0usize);
    let mut mode_best = 0.0f64;
    for (i, (name, f)) in cands.iter().enumerate() {
        let den = weighted_lp_norm(f, from, &rule_from)?;
        if den == 0.0 {
            continue;
        }
        let num = weighted_lp_norm(&apply_multiplier(m, f), to, &rule_to)?;
        let ratio = num / den;
        if name.starts_with("mode:") {
            mode_best = mode_best.max(ratio);
        }
        if ratio > best.0 {
            best = (ratio, i);
        }
    }
    let mut rep = NormReport::new(NormKind::SearchLower, best.0, NormParams::new(from.p(), to.p(), alpha.get(), from.gamma(), to.gamma()));
    rep.truncation = Truncation { basis: opts.max_degree + 1, iterations: cands.len(), r_grid: 0 };
    rep.diagnostics.insert("single_mode_max".into(), mode_best);
    rep.diagnostics.insert("best_candidate".into(), best.1 as f64);
    Ok(rep)
}

/// Lower bounds in the `(p, γ)` setting and its dual `(p', αp' - γp'/p)`.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct DualityReport {
    pub primal: NormReport,
    pub dual: NormReport,
    pub dual_gamma: f64,
    /// `primal / dual`
    pub ratio: f64,
}

/// Compares the search bounds for `M^p_{α;γ}` and `M^{p'}_{α;αp'-γp'/p}` on the same
/// candidate recipe (degree `≤ n`).
pub fn adjoint_duality_check(m: &MultiplierSeq, p: f64, gamma: f64, alpha: Order, n: usize, trials: usize, seed: u64) -> Result<DualityReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidExponent(p));
    }
    let a = alpha.get();
    if !(gamma > -1.0 && gamma < p * (a + 1.0) - 1.0) {
        return Err(Error::Hypothesis(format!("duality needs -1 < gamma < p(alpha+1) - 1, got gamma = {gamma}")));
    }
    let pp = p / (p - 1.0);
    let dual_gamma = a * pp - gamma * pp / p;
    let opts = SearchOptions { max_degree: n, trials, seed };
    let s = SpaceParams::new(p, gamma)?;
    let sd = SpaceParams::new(pp, dual_gamma)?;
    let primal = mpq_lower_bound_with(m, s, s, alpha, &opts)?;
    let dual = mpq_lower_bound_with(m, sd, sd, alpha, &opts)?;
    let ratio = if dual.value == 0.0 { f64::NAN } else { primal.value / dual.value };
    Ok(DualityReport { primal, dual, dual_gamma, ratio })
}
