//! Guaranteed set-membership state estimation for bounded-error nonlinear
//! discrete-time systems.
//!
//! Sets are represented as zonotopes, constrained zonotopes, zonotope
//! bundles and intersection lists of constrained zonotopes. Five estimators
//! are provided: mean-value-extension propagation and update (`RRSR`), the
//! same with decomposition-refined Jacobian bounds (`D-RRSR`),
//! decomposition-based propagation and update over zonotope bundles (`D-ZB`)
//! and over constrained zonotopes (`D-CZ`), and the intersection of all four
//! (`COMB`).

pub mod filter;
pub mod interval;
pub mod linalg;
pub mod lp;
pub mod mixmono;
pub mod model;
pub mod runner;
pub mod scenario;
pub mod sets;
pub mod simulate;

pub use filter::{Estimator, FilterError, MethodId, StepRecord, StepStatus};
pub use interval::{ArithOp, Interval, IntervalError, IntervalMatrix, IntervalVector};
pub use lp::{FeasibilityResult, LinearProgram, LpError, LpSolution, FEASIBILITY_TOL};
pub use mixmono::FamilyStrategy;
pub use model::{Expr, ExprGrid, ModelError, SystemModel};
pub use runner::{run, MetricRow, RunError, RunOutput};
pub use scenario::{Scenario, ScenarioError};
pub use sets::{
    ConstrainedZonotope, HPolytope, SetEnclosure, SetError, SetSpec, Zonotope, ZonotopeBundle,
};
