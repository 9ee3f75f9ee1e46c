pub mod error;
pub mod experiments;
pub mod hardy;
pub mod laguerre;
pub mod multiplier;
pub mod norms;
pub mod quadrature;
pub mod sequences;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};
