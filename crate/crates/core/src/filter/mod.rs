//! Estimator pipelines: propagation and update for each method, and the
//! recursive estimation loop.
//!
//! | method | propagation                          | update                         |
//! |--------|--------------------------------------|--------------------------------|
//! | RRSR   | mean-value extension                 | mean-value extension           |
//! | D-RRSR | mean-value extension, refined bounds | mean-value extension, refined  |
//! | D-ZB   | decomposition over zonotope members  | decomposition, one CZ per pair |
//! | D-CZ   | decomposition over one CZ            | decomposition over one CZ      |
//! | COMB   | all four, intersected                | all four, intersected          |

mod decomposition;
mod estimator;
mod rrsr;

pub use decomposition::{combined_propagate, dcz_propagate, dcz_update, dzb_propagate, dzb_update};
pub use estimator::{
    anchor_to_hull, observation_set, parallelotope_bundle, Estimator, MethodId, StepRecord,
    StepStatus,
};
pub use rrsr::{
    cz_bound_product, cz_bound_product_with, rrsr_propagate, rrsr_update, JacobianSource,
};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::interval::IntervalError;
use crate::mixmono::MixMonoError;
use crate::model::ModelError;
use crate::sets::SetError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("expansion point is not a member of the propagated set")]
    HNotInX,
    #[error("linearization point is not a member of the prior set")]
    X0NotInPrior,
    #[error("unknown method '{0}'")]
    UnknownMethod(String),
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    MixMono(#[from] MixMonoError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

/// Generator block `diag(r)` with the all-zero columns left out.
pub(crate) fn diag_generators(r: &DVector<f64>) -> DMatrix<f64> {
    let nz: Vec<usize> = (0..r.len()).filter(|&i| r[i] != 0.0).collect();
    let mut g = DMatrix::zeros(r.len(), nz.len());
    for (col, &i) in nz.iter().enumerate() {
        g[(i, col)] = r[i];
    }
    g
}
