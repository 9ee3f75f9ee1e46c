//! Multiplier operators `T_m: ĥ(k) ↦ m_k ĥ(k)` and estimators for their norms.

mod apply;
mod mpinfty;
mod search;
mod weighted;

use std::collections::BTreeMap;

pub use apply::{apply_multiplier, leibniz_defect, m2_norm_exact};
pub use mpinfty::{mpinfty_norm, r_grid, default_r_grid, MAX_RADIUS};
pub use search::{adjoint_duality_check, mpq_lower_bound, mpq_lower_bound_with, DualityReport, SearchOptions};
pub use weighted::{
    restricted_modes, weighted_m2_matrix, weighted_m2_norm, weighted_m2_sweep, MatrixRoute, PowerOptions,
};

/// How a [`NormReport`] value relates to the true norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// The norm itself.
    Exact,
    /// Largest singular value of a finite section; a lower bound.
    SvLower,
    /// `sup_r ‖P_r(m)‖`, equivalent to the norm up to constants.
    PrCharacterization,
    /// Best ratio over a candidate set; a lower bound.
    SearchLower,
}

impl std::fmt::Display for NormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormKind::Exact => "exact",
            NormKind::SvLower => "sv_lower",
            NormKind::PrCharacterization => "pr_characterization",
            NormKind::SearchLower => "search_lower",
        })
    }
}

/// Exponents and weights of the norm being estimated. Unused entries are NaN.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormParams {
    pub p: f64,
    pub q: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl NormParams {
    pub fn new(p: f64, q: f64, alpha: f64, gamma: f64, delta: f64) -> Self {
        NormParams { p, q, alpha, gamma, delta }
    }
}

/// Sizes that bound the computation.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct Truncation {
    pub basis: usize,
    pub iterations: usize,
    pub r_grid: usize,
}

/// A norm value or estimate with its provenance.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct NormReport {
    pub kind: NormKind,
    pub value: f64,
    pub params: NormParams,
    pub truncation: Truncation,
    /// Convergence indicator of the method; 0 for closed forms.
    pub residual: f64,
    pub converged: bool,
    /// `(r, ‖P_r(m)‖)` for the Abel–Poisson characterization.
    pub curve: Vec<(f64, f64)>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl NormReport {
    fn new(kind: NormKind, value: f64, params: NormParams) -> Self {
        NormReport {
            kind,
            value,
            params,
            truncation: Truncation::default(),
            residual: 0.0,
            converged: true,
            curve: Vec::new(),
            diagnostics: BTreeMap::new(),
        }
    }
}
