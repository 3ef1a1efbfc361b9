//! Experiment configuration: a TOML file plus command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use qobs_core::data;
use qobs_core::encode::EncodingKind;
use qobs_core::overlap::{LcuVariant, SignPolicy};
use qobs_core::pauli::{parse_pauli_sum, PauliSum};
use qobs_core::vqe::{Ansatz, OptimizerConfig};
use serde::{Deserialize, Serialize};

use crate::error::{io_error, CliError, Result};

pub const DEFAULT_SHOTS: u64 = 100_000;
pub const DEFAULT_RUNS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Encoding {
    #[default]
    Gc,
    Jw,
}

impl From<Encoding> for EncodingKind {
    fn from(e: Encoding) -> Self {
        match e {
            Encoding::Gc => EncodingKind::GrayCode,
            Encoding::Jw => EncodingKind::JordanWigner,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[default]
    Htest,
    LcuSwap,
    LcuDswap,
    Exact,
}

impl Method {
    pub fn lcu_variant(self) -> Option<LcuVariant> {
        match self {
            Method::LcuSwap => Some(LcuVariant::Swap),
            Method::LcuDswap => Some(LcuVariant::DSwap),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SignPolicyArg {
    #[default]
    Oracle,
    AssumePositive,
    HtestSign,
}

impl From<SignPolicyArg> for SignPolicy {
    fn from(s: SignPolicyArg) -> Self {
        match s {
            SignPolicyArg::Oracle => SignPolicy::Oracle,
            SignPolicyArg::AssumePositive => SignPolicy::AssumePositive,
            SignPolicyArg::HtestSign => SignPolicy::HtestSign,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum AnsatzKind {
    SingleRy,
    #[default]
    Ladder,
}

fn default_depth() -> usize {
    1
}

/// VQE state source; the optimized parameters are re-prepared for every
/// estimator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VqeSource {
    pub hamiltonian: String,
    #[serde(default)]
    pub ansatz: AnsatzKind,
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Shots per energy evaluation; `0` evaluates exactly.
    #[serde(default)]
    pub shots: u64,
    #[serde(default)]
    pub restarts: Option<usize>,
    #[serde(default)]
    pub max_evaluations: Option<usize>,
}

impl VqeSource {
    pub fn new(hamiltonian: impl Into<String>) -> Self {
        Self {
            hamiltonian: hamiltonian.into(),
            ansatz: AnsatzKind::default(),
            depth: default_depth(),
            shots: 0,
            restarts: None,
            max_evaluations: None,
        }
    }

    pub fn ansatz(&self, n_qubits: usize) -> Ansatz {
        match self.ansatz {
            AnsatzKind::SingleRy => Ansatz::single_ry(),
            AnsatzKind::Ladder => Ansatz::ladder(n_qubits, self.depth),
        }
    }

    pub fn optimizer(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::default();
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(m) = self.max_evaluations {
            cfg.max_evaluations = m;
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StateSource {
    /// Real mode amplitudes, encoded with the configured encoding.
    Amplitudes(Vec<f64>),
    Vqe(VqeSource),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Operator file path, or the name of a bundled operator (`q2_gc`, ...).
    pub operator: String,
    #[serde(default)]
    pub encoding: Encoding,
    pub state: StateSource,
    #[serde(default)]
    pub method: Method,
    #[serde(default = "default_shots")]
    pub shots: u64,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub sign_policy: SignPolicyArg,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
    /// Directory relative operator paths resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

fn default_runs() -> usize {
    DEFAULT_RUNS
}

impl ExperimentConfig {
    pub fn new(operator: impl Into<String>, state: StateSource) -> Self {
        Self {
            operator: operator.into(),
            encoding: Encoding::default(),
            state,
            method: Method::default(),
            shots: DEFAULT_SHOTS,
            runs: DEFAULT_RUNS,
            seed: 0,
            sign_policy: SignPolicyArg::default(),
            output: None,
            format: OutputFormat::default(),
            base_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Loads and validates a config file; relative operator paths resolve
    /// against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(CliError::InvalidConfig("runs must be at least 1".into()));
        }
        if self.shots == 0 && self.method != Method::Exact {
            return Err(CliError::InvalidConfig(format!(
                "shots must be at least 1 for method {:?}",
                self.method
            )));
        }
        match &self.state {
            StateSource::Amplitudes(a) if a.is_empty() => {
                Err(CliError::InvalidConfig("amplitudes must not be empty".into()))
            }
            StateSource::Amplitudes(a) if a.iter().any(|x| !x.is_finite()) => {
                Err(CliError::InvalidConfig("amplitudes must be finite".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn operator(&self) -> Result<PauliSum> {
        resolve_operator(&self.operator, self.base_dir.as_deref())
    }
}

/// Reads `spec` as a path (relative to `base_dir` first, then the working
/// directory) and falls back to the bundled operators by name.
pub fn resolve_operator(spec: &str, base_dir: Option<&Path>) -> Result<PauliSum> {
    let path = Path::new(spec);
    let mut candidates = Vec::new();
    if let (Some(dir), true) = (base_dir, path.is_relative()) {
        candidates.push(dir.join(path));
    }
    candidates.push(path.to_path_buf());
    for candidate in candidates {
        if candidate.is_file() {
            let text = fs::read_to_string(&candidate).map_err(io_error(&candidate))?;
            return Ok(parse_pauli_sum(&text)?);
        }
    }
    match data::bundled(spec) {
        Some(text) => Ok(parse_pauli_sum(text)?),
        None => Err(CliError::OperatorNotFound(spec.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
operator = "q2_gc"
[state]
amplitudes = [0.2759, 0.9611]
"#;

    #[test]
    fn defaults() {
        let cfg = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.method, Method::Htest);
        assert_eq!(cfg.encoding, Encoding::Gc);
        assert_eq!(cfg.shots, DEFAULT_SHOTS);
        assert_eq!(cfg.runs, DEFAULT_RUNS);
        assert_eq!(cfg.state, StateSource::Amplitudes(vec![0.2759, 0.9611]));
        assert_eq!(cfg.operator().unwrap().len(), 3);
    }

    #[test]
    fn vqe_source() {
        let cfg = ExperimentConfig::from_toml(
            r#"
operator = "yy_pos"
method = "lcu-dswap"
sign-policy = "oracle"
[state.vqe]
hamiltonian = "yy_neg"
depth = 2
"#,
        );
        // Field names are snake_case; the kebab-case key is rejected.
        assert!(cfg.is_err());
        let cfg = ExperimentConfig::from_toml(
            r#"
operator = "yy_pos"
method = "lcu-dswap"
sign_policy = "htest-sign"
[state.vqe]
hamiltonian = "yy_neg"
depth = 2
"#,
        )
        .unwrap();
        let StateSource::Vqe(v) = &cfg.state else { panic!() };
        assert_eq!(v.depth, 2);
        assert_eq!(v.ansatz(2).parameter_count(), 6);
        assert_eq!(cfg.sign_policy, SignPolicyArg::HtestSign);
        assert_eq!(cfg.method.lcu_variant(), Some(LcuVariant::DSwap));
    }

    #[test]
    fn invalid_configs() {
        let bad_runs = MINIMAL.replace("operator", "runs = 0\noperator");
        assert!(matches!(
            ExperimentConfig::from_toml(&bad_runs),
            Err(CliError::InvalidConfig(_))
        ));
        let zero_shots = MINIMAL.replace("operator", "shots = 0\noperator");
        assert!(ExperimentConfig::from_toml(&zero_shots).is_err());
        let exact = MINIMAL.replace("operator", "shots = 0\nmethod = \"exact\"\noperator");
        assert!(ExperimentConfig::from_toml(&exact).is_ok());
        assert!(ExperimentConfig::from_toml("operator = 3").is_err());
    }

    #[test]
    fn unknown_operator() {
        assert!(matches!(
            resolve_operator("no_such_operator", None),
            Err(CliError::OperatorNotFound(_))
        ));
    }
}
