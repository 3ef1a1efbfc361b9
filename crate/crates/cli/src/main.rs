use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qobs::config::{
    resolve_operator, AnsatzKind, Encoding, ExperimentConfig, Method, OutputFormat, SignPolicyArg, StateSource,
    VqeSource,
};
use qobs::report::{emit_report, write_csv, write_json};
use qobs::run_experiment;
use qobs::stats::{shot_budget_hint, DEFAULT_MAX_SHOTS};
use qobs_core::encode::{gray_encode, jw_encode, jw_encode_strict, EncodingScheme, OneBodyMatrix};
use qobs_core::lcu::build_block;
use qobs_core::overlap::{hadamard_circuit, lcu_circuit, Mode, Part};
use qobs_core::parallel::Execution;
use qobs_core::pauli::{lcu_normal_form, PauliSum};
use qobs_core::vqe::minimize;

#[derive(Parser)]
#[command(
    name = "qobs",
    version,
    about = "Expectation values of Pauli-sum observables on a statevector simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a runs x shots experiment and report median / MAD.
    Run(RunArgs),
    /// Encode a one-body matrix file as a Pauli sum.
    Encode {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Encoding::Gc)]
        encoding: Encoding,
        /// Keep the Jordan-Wigner Z strings (valid beyond one particle).
        #[arg(long)]
        strict: bool,
    },
    /// Minimize a Hamiltonian over an ansatz.
    Vqe {
        hamiltonian: String,
        #[arg(long, value_enum, default_value_t = AnsatzKind::Ladder)]
        ansatz: AnsatzKind,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Shots per energy evaluation; 0 evaluates exactly.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        restarts: Option<usize>,
    },
    /// Advisory Hadamard-test shot count for an expected value.
    ShotsHint {
        #[arg(allow_hyphen_values = true)]
        value: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_SHOTS)]
        max: u64,
    },
    /// Print the circuit an estimator would run, one gate per line.
    Circuit {
        operator: String,
        #[arg(long, value_enum, default_value_t = Method::LcuDswap)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Encoding::Gc)]
        encoding: Encoding,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        amplitudes: Option<Vec<f64>>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Operator file or bundled name (q2_gc, q2_jw, q4_gc, q4_jw, yy_pos, yy_neg).
    #[arg(long)]
    operator: Option<String>,
    #[arg(long, value_enum)]
    encoding: Option<Encoding>,
    /// Comma-separated real mode amplitudes.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "vqe_hamiltonian"
    )]
    amplitudes: Option<Vec<f64>>,
    #[arg(long)]
    vqe_hamiltonian: Option<String>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    sign_policy: Option<SignPolicyArg>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Run sequentially even when built with the parallel feature.
    #[arg(long)]
    sequential: bool,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let state_flag = match (&self.amplitudes, &self.vqe_hamiltonian) {
            (Some(a), _) => Some(StateSource::Amplitudes(a.clone())),
            (_, Some(h)) => Some(StateSource::Vqe(VqeSource::new(h))),
            _ => None,
        };
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => {
                let (Some(op), Some(state)) = (&self.operator, &state_flag) else {
                    bail!("without --config, --operator and one of --amplitudes / --vqe-hamiltonian are required");
                };
                ExperimentConfig::new(op.clone(), state.clone())
            }
        };
        if let Some(op) = &self.operator {
            cfg.operator = op.clone();
        }
        if let Some(state) = state_flag {
            cfg.state = state;
        }
        macro_rules! set {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    cfg.$field = v.clone();
                }
            )*};
        }
        set!(encoding, method, shots, runs, seed, sign_policy, format);
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(args: RunArgs) -> Result<()> {
    let cfg = args.config()?;
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let report = run_experiment(&cfg, exec)?;
    match &cfg.output {
        Some(path) => {
            emit_report(&report, cfg.format, path).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "median {:.6}  MAD {:.6}  runs {}  -> {}",
                report.median,
                report.mad,
                cfg.runs,
                path.display()
            );
        }
        None => match cfg.format {
            OutputFormat::Json => write_json(&report, std::io::stdout().lock())?,
            OutputFormat::Csv => write_csv(&report, std::io::stdout().lock())?,
        },
    }
    Ok(())
}

fn circuit(operator: &str, method: Method, encoding: Encoding, amplitudes: Option<Vec<f64>>) -> Result<()> {
    let op = resolve_operator(operator, None)?;
    let amps = amplitudes.unwrap_or_else(|| vec![1.0]);
    let scheme = EncodingScheme::new(encoding.into(), amps.len());
    let prep = scheme.prep_circuit(&amps)?;
    let n = prep.n_qubits().max(op.n_qubits());
    let op = PauliSum::with_qubits(n, op.terms().iter().cloned())?;
    let mut padded = qobs_core::simulator::Circuit::new(n);
    padded.append_at(&prep, 0)?;
    match method.lcu_variant() {
        Some(variant) => {
            let block = build_block(lcu_normal_form(&op, true)?)?;
            print!("{}", block.dump()?);
            let (c, layout) = lcu_circuit(&block, &padded, variant)?;
            println!(
                "# full circuit: system {:?} ancillas {:?} reference {:?} readout {:?}",
                layout.system, layout.ancillas, layout.reference, layout.readout
            );
            print!("{}", c.dump());
        }
        None => {
            for term in op.terms().iter().filter(|t| !t.string.is_identity()) {
                println!("# {} {}", term.coefficient, term.string);
                print!(
                    "{}",
                    hadamard_circuit(&term.string.clone().into(), &padded, Part::Re)?.dump()
                );
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Run(args) => run(args)?,
        Command::Encode {
            matrix,
            encoding,
            strict,
        } => {
            let text = fs::read_to_string(&matrix).with_context(|| format!("reading {}", matrix.display()))?;
            let m = OneBodyMatrix::parse(&text)?;
            let op = match (encoding, strict) {
                (Encoding::Gc, _) => gray_encode(&m),
                (Encoding::Jw, false) => jw_encode(&m),
                (Encoding::Jw, true) => jw_encode_strict(&m),
            };
            print!("{op}");
        }
        Command::Vqe {
            hamiltonian,
            ansatz,
            depth,
            shots,
            seed,
            restarts,
        } => {
            let mut source = VqeSource::new(&hamiltonian);
            source.ansatz = ansatz;
            source.depth = depth;
            source.restarts = restarts;
            let h = resolve_operator(&hamiltonian, None)?;
            if source.ansatz == AnsatzKind::SingleRy && h.n_qubits() > 1 {
                bail!(
                    "single-ry is a one-qubit ansatz; {hamiltonian} acts on {} qubits",
                    h.n_qubits()
                );
            }
            let ansatz = source.ansatz(h.n_qubits().max(1));
            let r = minimize(&h, &ansatz, Mode::from_shots(shots), &source.optimizer(), seed)?;
            println!("energy {}", r.energy);
            println!("params {:?}", r.best_params);
            println!("evaluations {} converged {}", r.evaluations, r.converged);
        }
        Command::ShotsHint { value, max } => {
            let hint = shot_budget_hint(value, max)?;
            println!("{}{}", hint.shots, if hint.capped { " (capped)" } else { "" });
        }
        Command::Circuit {
            operator,
            method,
            encoding,
            amplitudes,
        } => circuit(&operator, method, encoding, amplitudes)?,
    }
    Ok(())
}
