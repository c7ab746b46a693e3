//! Simulated ground truth and measurement-consistent trajectory sampling.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{ModelError, SystemModel};
use crate::sets::{SetEnclosure, SetError, UniformSampler};

/// Proposals allowed per uniform draw from a noise or initial set.
const DRAW_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// States `x_0, …, x_{n−1}`, the disturbances `w_0, …, w_{n−2}` driving
/// them and the measurements `y_k = μ(x_k) + v_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<DVector<f64>>,
    pub disturbances: Vec<DVector<f64>>,
    pub measurements: Vec<DVector<f64>>,
}

/// Draws `x_0` uniformly from `x0` (or uses `start`), `w_k` and `v_k`
/// uniformly from `w` and `v`, and iterates the model for `steps` states.
pub fn simulate_truth(
    model: &SystemModel,
    x0: &SetEnclosure,
    w: &SetEnclosure,
    v: &SetEnclosure,
    steps: usize,
    seed: u64,
    start: Option<&DVector<f64>>,
) -> Result<Trajectory, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ws = UniformSampler::new(w)?;
    let vs = UniformSampler::new(v)?;
    let mut x = match start {
        Some(s) => s.clone(),
        None => UniformSampler::new(x0)?.sample(&mut rng, DRAW_ATTEMPTS)?,
    };
    let mut t = Trajectory {
        states: Vec::new(),
        disturbances: Vec::new(),
        measurements: Vec::new(),
    };
    for k in 0..steps {
        if k > 0 {
            let wk = ws.sample(&mut rng, DRAW_ATTEMPTS)?;
            x = model.step(&x, &wk)?;
            t.disturbances.push(wk);
        }
        let vk = vs.sample(&mut rng, DRAW_ATTEMPTS)?;
        t.measurements.push(model.observe(&x)? + vk);
        t.states.push(x.clone());
    }
    Ok(t)
}

/// `n` state sequences that are admissible (`x_0 ∈ x0`, `w_k ∈ w`) and
/// consistent with `truth`'s measurements at `k ≥ 1` (`y_k − μ(x_k) ∈ v`).
/// The first one is the truth itself. Proposals blend the truth with a
/// uniform draw, `x_0 = x_0* + t (u − x_0*)` and likewise for every `w_k`,
/// with `t` uniform on `[0, 1]`; this keeps proposals admissible and
/// covers both the neighbourhood of the truth and the far reaches of the
/// sets. Fails with `RejectionBudgetExceeded` after `budget` rejections.
#[allow(clippy::too_many_arguments)]
pub fn sample_consistent(
    model: &SystemModel,
    truth: &Trajectory,
    x0: &SetEnclosure,
    w: &SetEnclosure,
    v: &SetEnclosure,
    n: usize,
    seed: u64,
    budget: usize,
) -> Result<Vec<Vec<DVector<f64>>>, SimError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs = UniformSampler::new(x0)?;
    let ws = UniformSampler::new(w)?;
    let vo = v.oracle()?;
    let steps = truth.states.len();
    let mut out = Vec::with_capacity(n);
    if n > 0 {
        out.push(truth.states.clone());
    }
    let mut rejected = 0;
    'proposal: while out.len() < n {
        let t: f64 = rng.random_range(0.0..=1.0);
        let blend = |star: &DVector<f64>, u: DVector<f64>| star + t * (u - star);
        let mut x = blend(&truth.states[0], xs.sample(&mut rng, DRAW_ATTEMPTS)?);
        let mut states = vec![x.clone()];
        for k in 1..steps {
            let wk = blend(
                &truth.disturbances[k - 1],
                ws.sample(&mut rng, DRAW_ATTEMPTS)?,
            );
            x = model.step(&x, &wk)?;
            let residual = &truth.measurements[k] - model.observe(&x)?;
            if !vo.contains(&residual)? {
                rejected += 1;
                if rejected > budget {
                    return Err(SetError::RejectionBudgetExceeded { attempts: rejected }.into());
                }
                continue 'proposal;
            }
            states.push(x.clone());
        }
        out.push(states);
    }
    Ok(out)
}
