//! Set representations and the set algebra used by the estimators.
//!
//! * [`Zonotope`]: `{G ξ + c : ‖ξ‖∞ ≤ 1}`
//! * [`ConstrainedZonotope`]: a zonotope whose coefficients also satisfy `A ξ = b`
//! * [`ZonotopeBundle`]: the intersection of several zonotopes
//! * [`HPolytope`]: `{z : A z ≤ b}`
//! * [`SetEnclosure`]: the intersection of several constrained zonotopes

mod bundle;
mod constrained;
mod enclosure;
mod polytope;
mod projection;
mod spec;
mod volume;
mod zonotope;

pub use bundle::ZonotopeBundle;
pub use constrained::{constraint_interval_bound, ConstrainedZonotope, Support};
pub use enclosure::{MembershipOracle, SetEnclosure};
pub use polytope::HPolytope;
pub use projection::{polygon_area, project_2d};
pub use spec::SetSpec;
pub use volume::{mc_volume, sample_uniform, UniformSampler, VolumeEstimate};
pub use zonotope::Zonotope;

use thiserror::Error;

use crate::interval::IntervalError;
use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SetError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("set is empty")]
    EmptySet,
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("rejection sampling gave up after {attempts} attempts")]
    RejectionBudgetExceeded { attempts: usize },
    #[error("invalid set specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<(), SetError> {
    if expected == found {
        Ok(())
    } else {
        Err(SetError::DimensionMismatch { expected, found })
    }
}
