//! System definitions: dynamics and observation maps as expression trees,
//! with symbolic Jacobians and Hessians for interval bounding.

mod builtin;
mod expr;
mod grid;
mod system;

pub use builtin::{example1, unicycle, UnicycleParams};
pub use expr::{compose_affine, eval_point, Expr};
pub use grid::{jacobian_bounds_over_box, ExprGrid};
pub use system::SystemModel;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("interval domain error: {0}")]
    IntervalDomainError(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("variable index {index} out of range for arity {arity}")]
    ArityViolation { index: usize, arity: usize },
    #[error("unknown model '{0}'")]
    ModelNotFound(String),
    #[error("invalid model parameter: {0}")]
    InvalidParameter(String),
}
