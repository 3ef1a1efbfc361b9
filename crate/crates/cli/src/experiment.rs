//! The runs x shots protocol: per-run state preparation (fixed amplitudes
//! or a fresh VQE), one estimate per run, median / MAD aggregation.

use std::time::Instant;

use log::{debug, info};
use qobs_core::encode::EncodingScheme;
use qobs_core::overlap::{estimate_htest, estimate_lcu, Mode};
use qobs_core::parallel::{map_indexed, Execution};
use qobs_core::pauli::{expectation_exact, lcu_normal_form, PauliSum};
use qobs_core::simulator::{Circuit, StateVector};
use qobs_core::vqe::{minimize, prepare_ansatz, Ansatz, Layout, OptimizerConfig};

use crate::config::{resolve_operator, ExperimentConfig, Method, StateSource};
use crate::error::{CliError, Result};
use crate::report::{EstimateReport, LcuDiagnostics, SCHEMA_VERSION};
use crate::stats::summarize;

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub value: f64,
    pub vqe_energy: Option<f64>,
    pub success_probability: Option<f64>,
    /// LCU only: the estimate with its radicand clamped at zero.
    pub clamped_value: Option<f64>,
    pub clamped: bool,
}

enum Preparation {
    Fixed(Circuit),
    Vqe {
        hamiltonian: PauliSum,
        ansatz: Ansatz,
        mode: Mode,
        optimizer: OptimizerConfig,
    },
}

struct Plan {
    operator: PauliSum,
    preparation: Preparation,
    reference_value: Option<f64>,
}

fn plan(config: &ExperimentConfig) -> Result<Plan> {
    config.validate()?;
    let operator = config.operator()?;
    let (n_state, preparation) = match &config.state {
        StateSource::Amplitudes(amps) => {
            let scheme = EncodingScheme::new(config.encoding.into(), amps.len());
            (scheme.n_qubits, Preparation::Fixed(scheme.prep_circuit(amps)?))
        }
        StateSource::Vqe(v) => {
            let hamiltonian = resolve_operator(&v.hamiltonian, config.base_dir.as_deref())?;
            let n = hamiltonian.n_qubits().max(operator.n_qubits()).max(1);
            let ansatz = v.ansatz(n);
            if ansatz.layout == Layout::SingleRy && n > 1 {
                return Err(CliError::SizeMismatch { operator: n, state: 1 });
            }
            let hamiltonian = PauliSum::with_qubits(n, hamiltonian.terms().iter().cloned())?;
            let preparation = Preparation::Vqe {
                hamiltonian,
                ansatz,
                mode: Mode::from_shots(v.shots),
                optimizer: v.optimizer(),
            };
            (n, preparation)
        }
    };
    if operator.n_qubits() > n_state {
        return Err(CliError::SizeMismatch {
            operator: operator.n_qubits(),
            state: n_state,
        });
    }
    let operator = PauliSum::with_qubits(n_state, operator.terms().iter().cloned())?;
    let reference_value = match &preparation {
        Preparation::Fixed(prep) => Some(expectation_exact(&operator, &run_prep(prep)?)?),
        Preparation::Vqe { .. } => None,
    };
    Ok(Plan {
        operator,
        preparation,
        reference_value,
    })
}

fn run_prep(prep: &Circuit) -> Result<StateVector> {
    let mut psi = StateVector::new(prep.n_qubits())?;
    psi.run(prep)?;
    Ok(psi)
}

/// VQE seed of run `r`.
pub fn vqe_seed(config: &ExperimentConfig, r: usize) -> u64 {
    config.seed.wrapping_add(r as u64)
}

/// Estimator seed of run `r`.
pub fn estimator_seed(config: &ExperimentConfig, r: usize) -> u64 {
    config.seed.wrapping_add((config.runs + r) as u64)
}

fn run_one(config: &ExperimentConfig, plan: &Plan, r: usize) -> Result<RunOutcome> {
    let (prep, vqe_energy) = match &plan.preparation {
        Preparation::Fixed(prep) => (prep.clone(), None),
        Preparation::Vqe {
            hamiltonian,
            ansatz,
            mode,
            optimizer,
        } => {
            let result = minimize(hamiltonian, ansatz, *mode, optimizer, vqe_seed(config, r))?;
            debug!(
                "run {r}: VQE energy {} after {} evaluations",
                result.energy, result.evaluations
            );
            (prepare_ansatz(ansatz, &result.best_params)?, Some(result.energy))
        }
    };
    let seed = estimator_seed(config, r);
    let shots = Mode::Sampled { shots: config.shots };
    let mut outcome = RunOutcome {
        value: 0.0,
        vqe_energy,
        success_probability: None,
        clamped_value: None,
        clamped: false,
    };
    match config.method {
        Method::Exact => outcome.value = expectation_exact(&plan.operator, &run_prep(&prep)?)?,
        Method::Htest => outcome.value = estimate_htest(&plan.operator, &prep, shots, seed)?,
        Method::LcuSwap | Method::LcuDswap => {
            let variant = config.method.lcu_variant().expect("LCU method");
            let est = estimate_lcu(&plan.operator, &prep, shots, seed, variant, config.sign_policy.into())?;
            outcome.value = est.raw_signed_value;
            outcome.clamped_value = Some(est.signed_value);
            outcome.success_probability = Some(est.success_probability);
            outcome.clamped = est.clamped;
        }
    }
    Ok(outcome)
}

/// Runs every configured run and aggregates in run order.
pub fn run_experiment(config: &ExperimentConfig, exec: Execution) -> Result<EstimateReport> {
    let start = Instant::now();
    let plan = plan(config)?;
    let outcomes: Vec<RunOutcome> = map_indexed(exec, config.runs, |r| run_one(config, &plan, r))
        .into_iter()
        .collect::<Result<_>>()?;

    let per_run_values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let (median, mad) = summarize(&per_run_values)?;
    let is_vqe = matches!(plan.preparation, Preparation::Vqe { .. });
    let lcu = config.method.lcu_variant().map(|_| -> Result<LcuDiagnostics> {
        let form = lcu_normal_form(&plan.operator, true)?;
        let clamped_values: Vec<f64> = outcomes.iter().filter_map(|o| o.clamped_value).collect();
        Ok(LcuDiagnostics {
            clamped_median: summarize(&clamped_values)?.0,
            clamped_values,
            lambda: form.lambda,
            identity_offset: form.identity_offset,
            clamped_runs: outcomes.iter().filter(|o| o.clamped).count(),
            mean_success_probability: outcomes.iter().filter_map(|o| o.success_probability).sum::<f64>()
                / outcomes.len() as f64,
        })
    });
    let lcu = lcu.transpose()?;
    let report = EstimateReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        median,
        mad,
        seeds: (0..config.runs).map(|r| estimator_seed(config, r)).collect(),
        vqe_seeds: is_vqe.then(|| (0..config.runs).map(|r| vqe_seed(config, r)).collect()),
        vqe_energies: is_vqe.then(|| outcomes.iter().map(|o| o.vqe_energy.expect("VQE run")).collect()),
        per_run_values,
        reference_value: plan.reference_value,
        lcu,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    info!(
        "{:?}: median {:.6} MAD {:.2e} over {} runs in {:.2}s",
        config.method, report.median, report.mad, config.runs, report.wall_time_s
    );
    Ok(report)
}
