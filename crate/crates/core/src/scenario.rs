//! Estimation run configuration.
//!
//! ```json
//! {
//!   "model": "unicycle",
//!   "params": {"sampling_period": 1.0, "linear_speed": 0.3, "angular_speed": 0.15},
//!   "landmarks": [[-2.0, 0.0], [2.0, 2.0]],
//!   "x0": {"type": "interval", "lo": [0.08, 0.18, 0.98], "hi": [0.12, 0.22, 1.02]},
//!   "w": {"type": "interval", "lo": [-0.06, -0.04, -0.08], "hi": [0.04, 0.02, 0.04]},
//!   "v": {"type": "interval", "lo": [-0.01, -0.01, -0.02, -0.03], "hi": [0.01, 0.02, 0.01, 0.02]},
//!   "steps": 5,
//!   "seed": 7,
//!   "methods": ["RRSR", "D-RRSR", "D-ZB", "D-CZ", "COMB"],
//!   "family": "adaptive",
//!   "samples": 10000,
//!   "trajectories": 1000,
//!   "true_x0": [0.1, 0.2, 1.0]
//! }
//! ```
//!
//! `steps` counts the recorded steps `k = 0, …, steps − 1`; `k = 0` holds
//! the initial set. `samples` is the Monte-Carlo volume budget per set and
//! `trajectories` the number of measurement-consistent trajectories used
//! for the containment check. `true_x0` fixes the simulated initial state;
//! without it the state is drawn uniformly from `x0`.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filter::MethodId;
use crate::mixmono::FamilyStrategy;
use crate::model::{example1, unicycle, ModelError, SystemModel, UnicycleParams};
use crate::sets::{SetEnclosure, SetError, SetSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("cannot parse scenario: {0}")]
    Parse(String),
    #[error("cannot read scenario: {0}")]
    Io(String),
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Set(#[from] SetError),
}

fn all_methods() -> Vec<MethodId> {
    MethodId::ALL.to_vec()
}

fn default_samples() -> usize {
    10_000
}

fn default_trajectories() -> usize {
    1_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub model: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub landmarks: Option<Vec<[f64; 2]>>,
    pub x0: SetSpec,
    pub w: SetSpec,
    pub v: SetSpec,
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "all_methods")]
    pub methods: Vec<MethodId>,
    #[serde(default)]
    pub family: FamilyStrategy,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_x0: Option<Vec<f64>>,
}

/// The scenario's sets in solver form.
#[derive(Debug, Clone)]
pub struct ScenarioSets {
    pub x0: SetEnclosure,
    pub w: SetEnclosure,
    pub v: SetEnclosure,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScenarioError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn build_model(&self) -> Result<SystemModel, ScenarioError> {
        match self.model.as_str() {
            "example1" => {
                if let Some(k) = self.params.keys().next() {
                    return Err(ModelError::InvalidParameter(format!(
                        "example1 takes no parameter '{k}'"
                    ))
                    .into());
                }
                Ok(example1())
            }
            "unicycle" => {
                let mut p = UnicycleParams::default();
                for (k, &v) in &self.params {
                    match k.as_str() {
                        "sampling_period" => p.sampling_period = v,
                        "linear_speed" => p.linear_speed = v,
                        "angular_speed" => p.angular_speed = v,
                        _ => {
                            return Err(ModelError::InvalidParameter(format!(
                                "unicycle has no parameter '{k}'"
                            ))
                            .into())
                        }
                    }
                }
                if let Some(l) = &self.landmarks {
                    if l.len() != 2 {
                        return Err(ModelError::InvalidParameter(format!(
                            "unicycle needs 2 landmarks, got {}",
                            l.len()
                        ))
                        .into());
                    }
                    p.landmarks = [(l[0][0], l[0][1]), (l[1][0], l[1][1])];
                }
                Ok(unicycle(&p)?)
            }
            other => Err(ModelError::ModelNotFound(other.to_string()).into()),
        }
    }

    pub fn sets(&self) -> Result<ScenarioSets, ScenarioError> {
        Ok(ScenarioSets {
            x0: self.x0.to_enclosure()?,
            w: self.w.to_enclosure()?,
            v: self.v.to_enclosure()?,
        })
    }

    /// Builds the model and sets and checks every dimension and count.
    pub fn validate(&self) -> Result<(SystemModel, ScenarioSets), ScenarioError> {
        if self.steps == 0 {
            return Err(ScenarioError::Invalid("steps must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(ScenarioError::Invalid("no methods selected".into()));
        }
        if self.samples == 0 {
            return Err(ScenarioError::Invalid("samples must be at least 1".into()));
        }
        if self.landmarks.is_some() && self.model != "unicycle" {
            return Err(ScenarioError::Invalid(format!(
                "model '{}' takes no landmarks",
                self.model
            )));
        }
        let model = self.build_model()?;
        let sets = self.sets()?;
        for (name, set, dim) in [
            ("x0", &sets.x0, model.nx()),
            ("w", &sets.w, model.nw()),
            ("v", &sets.v, model.nmu()),
        ] {
            if set.dim() != dim {
                return Err(ScenarioError::Invalid(format!(
                    "{name} has dimension {}, model expects {dim}",
                    set.dim()
                )));
            }
            if set.is_empty_set()? {
                return Err(ScenarioError::Invalid(format!("{name} is empty")));
            }
        }
        if let Some(t) = &self.true_x0 {
            let t = DVector::from_column_slice(t);
            if t.len() != model.nx() || !sets.x0.contains(&t)? {
                return Err(ScenarioError::Invalid(
                    "true_x0 is not a point of x0".into(),
                ));
            }
        }
        Ok((model, sets))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"{
        "model": "example1",
        "x0": {"type": "zonotope", "G": [[0.1, 0.2, -0.1], [0.1, 0.1, 0.0]], "c": [0.5, 0.5]},
        "w": {"type": "interval", "lo": [-0.1, -0.1], "hi": [0.1, 0.1]},
        "v": {"type": "interval", "lo": [-0.4, -0.4], "hi": [0.4, 0.4]},
        "steps": 5,
        "seed": 3
    }"#;

    #[test]
    fn defaults_and_round_trip() {
        let s = Scenario::from_json(EXAMPLE).unwrap();
        assert_eq!(s.methods, MethodId::ALL.to_vec());
        assert_eq!(s.family, FamilyStrategy::Adaptive);
        assert_eq!(s.samples, 10_000);
        let (m, sets) = s.validate().unwrap();
        assert_eq!(m.name(), "example1");
        assert_eq!(sets.x0.members()[0].ngen(), 3);
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn rejects_bad_scenarios() {
        let mut s = Scenario::from_json(EXAMPLE).unwrap();
        s.model = "lorenz".into();
        assert!(matches!(
            s.validate(),
            Err(ScenarioError::Model(ModelError::ModelNotFound(_)))
        ));
        let mut s = Scenario::from_json(EXAMPLE).unwrap();
        s.steps = 0;
        assert!(matches!(s.validate(), Err(ScenarioError::Invalid(_))));
        let mut s = Scenario::from_json(EXAMPLE).unwrap();
        s.v = SetSpec::Interval {
            lo: vec![-1.0],
            hi: vec![1.0],
        };
        assert!(matches!(s.validate(), Err(ScenarioError::Invalid(_))));
        let mut s = Scenario::from_json(EXAMPLE).unwrap();
        s.true_x0 = Some(vec![2.0, 2.0]);
        assert!(matches!(s.validate(), Err(ScenarioError::Invalid(_))));
        assert!(matches!(
            Scenario::from_json("{\"model\": 1}"),
            Err(ScenarioError::Parse(_))
        ));
        let text = EXAMPLE.replace("\"seed\": 3", "\"seed\": 3, \"methods\": [\"EKF\"]");
        assert!(matches!(
            Scenario::from_json(&text),
            Err(ScenarioError::Parse(_))
        ));
    }

    #[test]
    fn unicycle_parameters_are_applied() {
        let text = r#"{
            "model": "unicycle",
            "params": {"sampling_period": 0.5},
            "landmarks": [[-3.0, 0.0], [3.0, 3.0]],
            "x0": {"type": "interval", "lo": [0.08, 0.18, 0.98], "hi": [0.12, 0.22, 1.02]},
            "w": {"type": "interval", "lo": [-0.06, -0.04, -0.08], "hi": [0.04, 0.02, 0.04]},
            "v": {"type": "interval", "lo": [-0.01, -0.01, -0.02, -0.03], "hi": [0.01, 0.02, 0.01, 0.02]},
            "steps": 3
        }"#;
        let s = Scenario::from_json(text).unwrap();
        let (m, _) = s.validate().unwrap();
        let next = m
            .step(&DVector::from_vec(vec![0.0, 0.0, 0.0]), &DVector::zeros(3))
            .unwrap();
        assert!((next[0] - 0.5 * 0.3).abs() < 1e-15 && (next[2] - 0.5 * 0.15).abs() < 1e-15);
        let y = m.observe(&DVector::zeros(3)).unwrap();
        assert!((y[0] - 3.0).abs() < 1e-15);
        let mut bad = s.clone();
        bad.params.insert("mass".into(), 1.0);
        assert!(matches!(
            bad.validate(),
            Err(ScenarioError::Model(ModelError::InvalidParameter(_)))
        ));
    }
}
