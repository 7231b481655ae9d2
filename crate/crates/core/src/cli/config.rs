use std::f64::consts::TAU;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::CliError;
use crate::metrics::{AsymmetryIndex, GridRange};
use crate::model::{
    solve_steady_state, BareDriveParams, BranchSelection, CouplingParams, ModeParams, SteadyState,
    SystemModel, Topology,
};
use crate::spectra::{Convention, SpectrumOptions};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub system: SystemConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    pub topology: Topology,
    pub modes: Vec<ModeParams>,
    /// Linearized couplings. Mutually exclusive with `drive`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<CouplingParams>>,
    /// Kelvin.
    pub temperature: f64,
    /// Bare drive of a DU; the coupling and the high-mode detuning are then
    /// taken from the mean-field steady state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drive: Option<DriveConfig>,
    #[serde(default)]
    pub convention: Convention,
    #[serde(default)]
    pub psi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    /// rad/s
    pub g: f64,
    /// rad/s
    pub epsilon: f64,
    /// rad/s
    pub drive_frequency: f64,
    #[serde(default)]
    pub branch: BranchSelection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_omega")]
    pub omega: GridRange,
    #[serde(default = "default_theta")]
    pub theta: GridRange,
    #[serde(default = "default_delta")]
    pub delta: GridRange,
    #[serde(default = "default_search")]
    pub omega_search: GridRange,
}

fn default_omega() -> GridRange {
    GridRange::new(-3.0, 3.0, 1201)
}

fn default_theta() -> GridRange {
    GridRange::new(0.0, TAU, 361)
}

fn default_delta() -> GridRange {
    GridRange::new(-2.0, 2.0, 41)
}

fn default_search() -> GridRange {
    crate::metrics::DEFAULT_SEARCH
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            omega: default_omega(),
            theta: default_theta(),
            delta: default_delta(),
            omega_search: default_search(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    /// File name stem, defaults to the task kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stem: Option<String>,
    #[serde(default)]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskConfig {
    Spectrum {
        /// Mode labels whose output spectra are tabulated; all by default.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ports: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sweep: Option<Sweep>,
    },
    Asymmetry {
        omegas: Vec<f64>,
        /// Indices of the couplings whose phases are scanned over the theta
        /// grid: one index gives a line, two give a plane.
        phases: Vec<usize>,
    },
    Snr {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        signal: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        readout: Option<String>,
        /// Adds the incoherent-scattering baseline columns.
        #[serde(default)]
        baseline: bool,
    },
    Fmap {},
    Chain {
        n_min: usize,
        n_max: usize,
        omega: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alternating_detuning: Option<[f64; 2]>,
    },
    Oracle {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ports: Option<Vec<String>>,
        #[serde(default)]
        seed: u64,
        #[serde(default = "default_ensemble")]
        ensemble: usize,
        #[serde(default = "default_segments")]
        segments: usize,
        #[serde(default = "default_segment_len")]
        segment_len: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dt: Option<f64>,
        /// Convention of the frequency-domain prediction. The time-domain
        /// integration corresponds to `physical`.
        #[serde(default = "physical")]
        compare_convention: Convention,
        #[serde(default = "default_pass")]
        min_pass_fraction: f64,
    },
    Optimize {
        goal: Goal,
    },
}

fn default_ensemble() -> usize {
    64
}

fn default_segments() -> usize {
    16
}

fn default_segment_len() -> usize {
    4096
}

fn physical() -> Convention {
    Convention::Physical
}

fn default_pass() -> f64 {
    0.99
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    /// Dotted path below `system`, e.g. `modes.0.kappa`.
    pub path: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Goal {
    PhaseTarget {
        which: AsymmetryIndex,
        target: f64,
        omega: f64,
        #[serde(default = "default_phase_points")]
        points: usize,
    },
    MaxSnr,
}

fn default_phase_points() -> usize {
    721
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskKind {
    Spectrum,
    Asymmetry,
    Snr,
    Fmap,
    Chain,
    Oracle,
    Optimize,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Spectrum => "spectrum",
            TaskKind::Asymmetry => "asymmetry",
            TaskKind::Snr => "snr",
            TaskKind::Fmap => "fmap",
            TaskKind::Chain => "chain",
            TaskKind::Oracle => "oracle",
            TaskKind::Optimize => "optimize",
        }
    }
}

impl TaskConfig {
    pub fn kind(&self) -> TaskKind {
        match self {
            TaskConfig::Spectrum { .. } => TaskKind::Spectrum,
            TaskConfig::Asymmetry { .. } => TaskKind::Asymmetry,
            TaskConfig::Snr { .. } => TaskKind::Snr,
            TaskConfig::Fmap {} => TaskKind::Fmap,
            TaskConfig::Chain { .. } => TaskKind::Chain,
            TaskConfig::Oracle { .. } => TaskKind::Oracle,
            TaskConfig::Optimize { .. } => TaskKind::Optimize,
        }
    }

    /// Task block used when a config has none for the requested kind.
    pub fn default_for(kind: TaskKind) -> Result<Self, CliError> {
        let t = match kind {
            TaskKind::Spectrum => TaskConfig::Spectrum {
                ports: None,
                sweep: None,
            },
            TaskKind::Snr => TaskConfig::Snr {
                signal: None,
                readout: None,
                baseline: false,
            },
            TaskKind::Fmap => TaskConfig::Fmap {},
            TaskKind::Oracle => serde_json::from_value(serde_json::json!({ "kind": "oracle" }))
                .expect("oracle defaults deserialize"),
            other => {
                return Err(CliError::Config(format!(
                    "task.{} needs an explicit task block in the config",
                    other.name()
                )))
            }
        };
        Ok(t)
    }
}

/// Config with the model built and validated.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub model: SystemModel,
    pub options: SpectrumOptions,
    pub steady: Option<SteadyState>,
    pub hash: String,
}

impl ScenarioConfig {
    pub fn from_value(v: Value) -> Result<Self, CliError> {
        serde_json::from_value(v).map_err(|e| CliError::Config(format!("config: {e}")))
    }

    /// Builds the linear model, solving for the steady state if a drive is
    /// given.
    pub fn build_model(&self) -> Result<(SystemModel, Option<SteadyState>), CliError> {
        let s = &self.system;
        let prefix = |e: crate::Error| CliError::Config(format!("system.{}", strip_prefix(&e)));
        let (model, steady) = match (&s.couplings, &s.drive) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "system.couplings and system.drive are mutually exclusive".into(),
                ))
            }
            (None, None) => return Err(CliError::Config("system.couplings is required without system.drive".into())),
            (Some(c), None) => (
                SystemModel {
                    topology: s.topology,
                    modes: s.modes.clone(),
                    couplings: c.clone(),
                    temperature: s.temperature,
                },
                None,
            ),
            (None, Some(d)) => {
                if s.topology != Topology::Du || s.modes.len() != 2 {
                    return Err(CliError::Config("system.drive is only supported for the du topology".into()));
                }
                let bare = BareDriveParams {
                    g: d.g,
                    epsilon: d.epsilon,
                    drive_frequency: d.drive_frequency,
                };
                let st = solve_steady_state(&bare, &s.modes[0], &s.modes[1], d.branch).map_err(|e| match e {
                    crate::Error::InvalidParameter(m) => CliError::Config(format!("system.drive: {m}")),
                    other => other.into(),
                })?;
                let mut modes = s.modes.clone();
                modes[0].detuning = st.effective_detuning();
                let g = st.coupling(&bare, &s.modes[1]);
                (
                    SystemModel {
                        topology: s.topology,
                        modes,
                        couplings: vec![g],
                        temperature: s.temperature,
                    },
                    Some(st),
                )
            }
        };
        model.validate().map_err(prefix)?;
        if !s.psi.is_finite() {
            return Err(CliError::Config("system.psi must be finite".into()));
        }
        Ok((model, steady))
    }

    pub fn validate_grids(&self) -> Result<(), CliError> {
        let g = &self.grid;
        for (name, r) in [
            ("grid.omega", g.omega),
            ("grid.theta", g.theta),
            ("grid.delta", g.delta),
            ("grid.omega_search", g.omega_search),
        ] {
            r.validate(name).map_err(|e| CliError::Config(strip_prefix(&e)))?;
        }
        Ok(())
    }

    pub fn resolve(self) -> Result<Scenario, CliError> {
        self.validate_grids()?;
        let (model, steady) = self.build_model()?;
        let options = SpectrumOptions {
            convention: self.system.convention,
            psi: self.system.psi,
        };
        let hash = config_hash(&self);
        Ok(Scenario {
            config: self,
            model,
            options,
            steady,
            hash,
        })
    }
}

fn strip_prefix(e: &crate::Error) -> String {
    match e {
        crate::Error::InvalidParameter(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Canonical form: the fully defaulted config without its `output` block, as
/// compact JSON with sorted keys.
pub fn canonical_json(cfg: &ScenarioConfig) -> String {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v.as_object_mut().expect("config is an object").remove("output");
    serde_json::to_string(&sort_keys(v)).expect("value serializes")
}

fn sort_keys(v: Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut entries: Vec<(String, Value)> = m.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sort_keys(v))).collect())
        }
        Value::Array(a) => Value::Array(a.into_iter().map(sort_keys).collect()),
        other => other,
    }
}

/// Hex SHA-256 of [`canonical_json`].
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let digest = Sha256::digest(canonical_json(cfg).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Applies `path=value` to a JSON document. Numeric segments index arrays,
/// missing object keys are created. The value is parsed as JSON when
/// possible and taken as a string otherwise.
pub fn apply_override(doc: &mut Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("--set expects path=value, got '{assignment}'")))?;
    let path = path.trim();
    if path.is_empty() {
        return Err(CliError::Config("--set path is empty".into()));
    }
    let value = serde_json::from_str(raw.trim()).unwrap_or_else(|_| Value::String(raw.to_string()));
    set_path(doc, path, value)
}

pub fn set_path(doc: &mut Value, path: &str, value: Value) -> Result<(), CliError> {
    let mut cur = doc;
    let segs: Vec<&str> = path.split('.').collect();
    for (k, seg) in segs.iter().enumerate() {
        let last = k + 1 == segs.len();
        cur = match cur {
            Value::Array(a) => {
                let i: usize = seg
                    .parse()
                    .map_err(|_| CliError::Config(format!("{path}: '{seg}' is not an array index")))?;
                let len = a.len();
                a.get_mut(i)
                    .ok_or_else(|| CliError::Config(format!("{path}: index {i} out of range (length {len})")))?
            }
            Value::Object(m) => m.entry(seg.to_string()).or_insert(Value::Null),
            Value::Null => {
                *cur = Value::Object(Default::default());
                cur.as_object_mut()
                    .expect("just created")
                    .entry(seg.to_string())
                    .or_insert(Value::Null)
            }
            _ => return Err(CliError::Config(format!("{path}: '{seg}' descends into a scalar"))),
        };
        if last {
            *cur = value;
            return Ok(());
        }
    }
    unreachable!("split yields at least one segment")
}
