//! Scenario runner: loads a scenario, runs the estimators and writes
//! `metrics.csv`, `sets/{k}_{method}.json` and `polygons/{k}_{method}.csv`.

use std::fs;
use std::path::{Path, PathBuf};

use czest_core::filter::MethodId;
use czest_core::mixmono::FamilyStrategy;
use czest_core::runner::{run, MetricRow, RunError, RunOutput};
use czest_core::scenario::{Scenario, ScenarioError};
use czest_core::sets::{project_2d, SetError, SetSpec};
use czest_core::ModelError;
use thiserror::Error;

/// Directions sampled for each projection polygon.
pub const POLYGON_DIRECTIONS: usize = 64;

pub const METRICS_HEADER: [&str; 7] = [
    "k",
    "method",
    "wall_time_s",
    "mc_volume",
    "mc_stderr",
    "containment_fraction",
    "status",
];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    ModelNotFound(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Run(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
            CliError::ModelNotFound(_) => 4,
            CliError::Run(_) => 1,
        }
    }
}

impl From<ScenarioError> for CliError {
    fn from(e: ScenarioError) -> Self {
        match e {
            ScenarioError::Parse(_) => CliError::Parse(e.to_string()),
            ScenarioError::Io(_) => CliError::Io(e.to_string()),
            ScenarioError::Model(ModelError::ModelNotFound(_)) => {
                CliError::ModelNotFound(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<RunError> for CliError {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Scenario(s) => s.into(),
            other => CliError::Run(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Command-line replacements for scenario fields.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub methods: Option<Vec<MethodId>>,
    pub steps: Option<usize>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub family: Option<FamilyStrategy>,
}

impl Overrides {
    pub fn apply(&self, s: &mut Scenario) {
        if let Some(m) = &self.methods {
            s.methods = m.clone();
        }
        if let Some(n) = self.steps {
            s.steps = n;
        }
        if let Some(seed) = self.seed {
            s.seed = seed;
        }
        if let Some(n) = self.samples {
            s.samples = n;
        }
        if let Some(f) = self.family {
            s.family = f;
        }
    }
}

/// Parses a comma-separated method list such as `RRSR,D-CZ`.
pub fn parse_methods(list: &str) -> Result<Vec<MethodId>, String> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e| format!("{e}")))
        .collect()
}

pub fn load_scenario(path: &Path, overrides: &Overrides) -> Result<Scenario, CliError> {
    let mut s = Scenario::load(path)?;
    overrides.apply(&mut s);
    s.validate()?;
    Ok(s)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn metric_fields(r: &MetricRow) -> [String; 7] {
    [
        r.k.to_string(),
        r.method.to_string(),
        format!("{:.6}", r.wall_time),
        opt(r.volume.map(|v| v.estimate)),
        opt(r.volume.map(|v| v.stderr)),
        opt(r.containment),
        r.status.to_string(),
    ]
}

/// Writes the metrics table, the updated sets and their projections.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<(), CliError> {
    let sets_dir = dir.join("sets");
    let poly_dir = dir.join("polygons");
    for d in [dir, &sets_dir, &poly_dir] {
        fs::create_dir_all(d).map_err(|e| io_err(d, e))?;
    }
    let metrics = dir.join("metrics.csv");
    let mut w = csv::Writer::from_path(&metrics).map_err(|e| io_err(&metrics, e))?;
    w.write_record(METRICS_HEADER)
        .map_err(|e| io_err(&metrics, e))?;
    for r in &out.rows {
        w.write_record(metric_fields(r))
            .map_err(|e| io_err(&metrics, e))?;
    }
    w.flush().map_err(|e| io_err(&metrics, e))?;
    for rec in &out.records {
        let Some(set) = rec.updated.as_ref().filter(|_| rec.status.is_ok()) else {
            continue;
        };
        let stem = format!("{}_{}", rec.k, rec.method);
        let path = sets_dir.join(format!("{stem}.json"));
        let json = serde_json::to_string_pretty(&SetSpec::from_enclosure(set))
            .expect("set spec serializes");
        fs::write(&path, json + "\n").map_err(|e| io_err(&path, e))?;
        if set.dim() < 2 {
            continue;
        }
        let poly = match project_2d(set, (0, 1), POLYGON_DIRECTIONS) {
            Ok(p) => p,
            Err(SetError::EmptySet) => Vec::new(),
            Err(e) => return Err(CliError::Run(format!("projection of {stem}: {e}"))),
        };
        let path = poly_dir.join(format!("{stem}.csv"));
        let mut pw = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
        pw.write_record(["x", "y"]).map_err(|e| io_err(&path, e))?;
        for (x, y) in poly {
            pw.write_record([x.to_string(), y.to_string()])
                .map_err(|e| io_err(&path, e))?;
        }
        pw.flush().map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}

/// Loads, runs and writes one scenario. Returns the run for inspection.
pub fn run_scenario(
    path: &Path,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<RunOutput, CliError> {
    let scenario = load_scenario(path, overrides)?;
    let out = run(&scenario)?;
    write_outputs(&out, out_dir)?;
    Ok(out)
}

/// Path of the metrics table inside an output directory.
pub fn metrics_path(out_dir: &Path) -> PathBuf {
    out_dir.join("metrics.csv")
}
