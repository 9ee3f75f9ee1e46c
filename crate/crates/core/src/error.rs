use thiserror::Error;

/// Errors raised by the numerical routines and the experiment drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("order must exceed -1, got {0}")]
    InvalidOrder(f64),

    #[error("invalid Lebesgue exponent {0}: expected p in [1, inf]")]
    InvalidExponent(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("L_{n}^{alpha}({x}) overflows f64")]
    Overflow { n: usize, alpha: f64, x: f64 },

    #[error("non-finite integrand value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("eigen-solver failed to converge for the Jacobi matrix (alpha = {alpha}, n = {n})")]
    EigenNoConvergence { alpha: f64, n: usize },

    #[error("quadrature rule has order {found} but order {expected} is required")]
    OrderMismatch { expected: f64, found: f64 },

    #[error("quadrature rule with {nodes} nodes cannot resolve {required} coefficients")]
    RuleTooSmall { nodes: usize, required: usize },

    #[error("fractional difference tail bound {bound:e} exceeds tolerance {tol:e} ({family})")]
    TailUnreachable { family: String, bound: f64, tol: f64 },

    #[error("Abel-Poisson radius must lie in [0, 1), got {0}")]
    InvalidRadius(f64),

    #[error("Abel-Poisson truncation needs more than {max_terms} terms at r = {r}")]
    AbelTruncation { r: f64, max_terms: usize },

    #[error("projection requires -1 < beta < alpha, got alpha = {alpha}, beta = {beta}")]
    ProjectionOrder { alpha: f64, beta: f64 },

    #[error("ratio undefined for the zero function")]
    ZeroFunction,

    #[error("identity violated: residual {residual:e} above threshold {threshold:e}")]
    IdentityViolation { residual: f64, threshold: f64 },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
