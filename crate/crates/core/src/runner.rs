//! End-to-end estimation runs: simulate, estimate, measure.

use nalgebra::DVector;
use thiserror::Error;

use crate::filter::{Estimator, FilterError, MethodId, StepRecord, StepStatus};
use crate::scenario::{Scenario, ScenarioError};
use crate::sets::{mc_volume, SetEnclosure, SetError, VolumeEstimate};
use crate::simulate::{sample_consistent, simulate_truth, SimError, Trajectory};

/// Rejected proposals allowed per requested consistent trajectory.
const REJECTIONS_PER_TRAJECTORY: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Set(#[from] SetError),
}

/// One line of the metrics table.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricRow {
    pub k: usize,
    pub method: MethodId,
    pub wall_time: f64,
    pub volume: Option<VolumeEstimate>,
    /// Fraction of the consistent trajectories whose state lies in the set.
    pub containment: Option<f64>,
    pub status: StepStatus,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<StepRecord>,
    pub truth: Trajectory,
    pub samples: Vec<Vec<DVector<f64>>>,
    pub rows: Vec<MetricRow>,
}

fn method_index(m: MethodId) -> u64 {
    MethodId::ALL.iter().position(|&x| x == m).unwrap_or(0) as u64
}

/// Seed of the volume estimate for step `k` and method `m`.
pub fn volume_seed(seed: u64, k: usize, m: MethodId) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ ((k as u64) << 8 | method_index(m)).wrapping_add(0xD1B5_4A32_D192_ED03)
}

fn containment(
    set: &SetEnclosure,
    samples: &[Vec<DVector<f64>>],
    k: usize,
) -> Result<Option<f64>, SetError> {
    if samples.is_empty() {
        return Ok(None);
    }
    let oracle = set.oracle()?;
    let mut hits = 0usize;
    for traj in samples {
        if oracle.contains(&traj[k])? {
            hits += 1;
        }
    }
    Ok(Some(hits as f64 / samples.len() as f64))
}

/// Runs every selected method on a simulated trajectory and reports
/// Monte-Carlo volume and containment for each step.
pub fn run(scenario: &Scenario) -> Result<RunOutput, RunError> {
    let (model, sets) = scenario.validate()?;
    let start = scenario
        .true_x0
        .as_ref()
        .map(|t| DVector::from_column_slice(t));
    let truth = simulate_truth(
        &model,
        &sets.x0,
        &sets.w,
        &sets.v,
        scenario.steps,
        scenario.seed,
        start.as_ref(),
    )?;
    let samples = sample_consistent(
        &model,
        &truth,
        &sets.x0,
        &sets.w,
        &sets.v,
        scenario.trajectories,
        scenario.seed.wrapping_add(1),
        scenario
            .trajectories
            .saturating_mul(REJECTIONS_PER_TRAJECTORY),
    )?;
    let w = sets.w.combined()?;
    let v = sets.v.combined()?;
    let family = scenario.family.with_seed(scenario.seed);
    let mut est = Estimator::new(&model, &sets.x0, w, v, family, &scenario.methods)?;
    let mut records = est.initial_records(&sets.x0);
    for k in 1..scenario.steps {
        records.extend(est.step(&truth.measurements[k])?);
    }
    let mut rows = Vec::with_capacity(records.len());
    for r in &mut records {
        let (volume, contained) = match (&r.status, &r.updated) {
            (StepStatus::Ok, Some(set)) => (
                Some(mc_volume(
                    set,
                    scenario.samples,
                    volume_seed(scenario.seed, r.k, r.method),
                )?),
                containment(set, &samples, r.k)?,
            ),
            (StepStatus::Empty, _) => (None, (!samples.is_empty()).then_some(0.0)),
            _ => (None, None),
        };
        r.volume = volume;
        rows.push(MetricRow {
            k: r.k,
            method: r.method,
            wall_time: r.wall_time,
            volume,
            containment: contained,
            status: r.status.clone(),
        });
    }
    Ok(RunOutput {
        records,
        truth,
        samples,
        rows,
    })
}
