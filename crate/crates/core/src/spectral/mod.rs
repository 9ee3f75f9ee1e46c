//! Fourier–Laguerre analysis and synthesis, Abel–Poisson means and the order-lowering projection.

mod abel;
mod expansion;
mod projection;

pub use abel::{abel_poisson_kernel, abel_truncation, AbelMean, KernelValue, DEFAULT_ABEL_TOL, MAX_ABEL_TERMS};
pub use expansion::{
    analyze, lcoeff_constant, pardif_ratio, parseval_defect, synthesize, LaguerreExpansion, LcoeffFit, Polynomial,
    LCOEFF_THRESHOLD,
};
pub use projection::{project_order, projection_check, projection_norm_ratio, AskeyFitchCheck};
