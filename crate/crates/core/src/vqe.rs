//! Minimal variational eigensolver: real-amplitude ansatz circuits, energy
//! evaluation, and a Nelder–Mead simplex minimizer with random restarts.

use std::f64::consts::PI;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::overlap::{estimate_htest, Mode};
use crate::pauli::{expectation_exact, PauliSum};
use crate::rng;
use crate::simulator::{uniform, Circuit, Gate, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// One `RY` on qubit 0.
    SingleRy,
    /// `depth` blocks of (`RY` on every qubit, CNOT chain `q -> q+1`),
    /// followed by a final `RY` layer.
    RyCnotLadder { depth: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ansatz {
    pub n_qubits: usize,
    pub layout: Layout,
}

impl Ansatz {
    pub fn single_ry() -> Self {
        Self {
            n_qubits: 1,
            layout: Layout::SingleRy,
        }
    }

    pub fn ladder(n_qubits: usize, depth: usize) -> Self {
        Self {
            n_qubits,
            layout: Layout::RyCnotLadder { depth },
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self.layout {
            Layout::SingleRy => 1,
            Layout::RyCnotLadder { depth } => self.n_qubits * (depth + 1),
        }
    }
}

pub fn prepare_ansatz(ansatz: &Ansatz, params: &[f64]) -> Result<Circuit> {
    if ansatz.n_qubits == 0 {
        return Err(Error::EmptyRegister);
    }
    if params.len() != ansatz.parameter_count() {
        return Err(Error::SizeMismatch {
            expected: ansatz.parameter_count(),
            found: params.len(),
        });
    }
    let n = ansatz.n_qubits;
    let mut c = Circuit::new(n);
    match ansatz.layout {
        Layout::SingleRy => {
            c.push(Gate::ry(0, params[0]))?;
        }
        Layout::RyCnotLadder { depth } => {
            for (layer, angles) in params.chunks(n).enumerate() {
                for (q, &theta) in angles.iter().enumerate() {
                    c.push(Gate::ry(q, theta))?;
                }
                if layer < depth {
                    for q in 0..n - 1 {
                        c.push(Gate::cnot(q, q + 1))?;
                    }
                }
            }
        }
    }
    Ok(c)
}

/// `<psi(params)|H|psi(params)>`; sampled mode uses per-term Hadamard tests.
pub fn energy(hamiltonian: &PauliSum, ansatz: &Ansatz, params: &[f64], mode: Mode, seed: u64) -> Result<f64> {
    if hamiltonian.n_qubits() > ansatz.n_qubits {
        return Err(Error::SizeMismatch {
            expected: ansatz.n_qubits,
            found: hamiltonian.n_qubits(),
        });
    }
    let prep = prepare_ansatz(ansatz, params)?;
    match mode {
        Mode::Exact => {
            let mut psi = StateVector::new(ansatz.n_qubits)?;
            psi.run(&prep)?;
            expectation_exact(hamiltonian, &psi)
        }
        Mode::Sampled { .. } => estimate_htest(hamiltonian, &prep, mode, seed),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Number of independent random starts (at least one is always run).
    pub restarts: usize,
    /// Energy evaluations per start.
    pub max_evaluations: usize,
    /// Initial simplex edge length.
    pub initial_step: f64,
    /// Converged once the simplex diameter falls below this.
    pub x_tol: f64,
    /// ... or once the best energy improves by less than this over
    /// `stall_iterations` iterations.
    pub f_tol: f64,
    pub stall_iterations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 4,
            max_evaluations: 2000,
            initial_step: 0.5,
            x_tol: 1e-6,
            f_tol: 1e-8,
            stall_iterations: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub best_params: Vec<f64>,
    /// Lowest energy seen; in sampled mode this is a noisy estimate.
    pub energy: f64,
    /// Total evaluations across restarts.
    pub evaluations: usize,
    /// The best start stopped on a tolerance rather than the budget.
    pub converged: bool,
}

struct Outcome {
    x: Vec<f64>,
    f: f64,
    evaluations: usize,
    converged: bool,
}

fn nelder_mead(f: &mut dyn FnMut(&[f64]) -> Result<f64>, start: &[f64], config: &OptimizerConfig) -> Result<Outcome> {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let dim = start.len();
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evaluations: &mut usize| -> Result<f64> {
        *evaluations += 1;
        f(x)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), eval(start, &mut evaluations)?));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += config.initial_step;
        let fx = eval(&x, &mut evaluations)?;
        simplex.push((x, fx));
    }

    let mut history = vec![f64::INFINITY; config.stall_iterations.max(1)];
    let mut iteration = 0usize;
    let converged = loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;

        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        let slot = iteration % history.len();
        let stalled = iteration >= history.len() && (history[slot] - best).abs() < config.f_tol;
        history[slot] = best;
        iteration += 1;
        if diameter < config.x_tol || stalled {
            break true;
        }
        if evaluations + dim + 2 > config.max_evaluations {
            break false;
        }

        let worst = simplex[dim].clone();
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let towards = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst.0).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = towards(REFLECT);
        let fr = eval(&xr, &mut evaluations)?;
        if fr < simplex[0].1 {
            let xe = towards(EXPAND);
            let fe = eval(&xe, &mut evaluations)?;
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = towards(REFLECT * CONTRACT);
            let fc = eval(&xc, &mut evaluations)?;
            (xc, fc)
        } else {
            let xc = towards(-CONTRACT);
            let fc = eval(&xc, &mut evaluations)?;
            (xc, fc)
        };
        if fc < fr.min(worst.1) {
            simplex[dim] = (xc, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            for (x, a) in vertex.0.iter_mut().zip(&anchor) {
                *x = a + SHRINK * (*x - a);
            }
            vertex.1 = eval(&vertex.0, &mut evaluations)?;
        }
    };

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, f) = simplex.swap_remove(0);
    Ok(Outcome {
        x,
        f,
        evaluations,
        converged,
    })
}

/// Minimizes the ansatz energy from `config.restarts` random starts in
/// `[-pi, pi)`. Start `r` and, in sampled mode, every energy evaluation
/// draw from streams of `seed`, so results are reproducible.
pub fn minimize(
    hamiltonian: &PauliSum,
    ansatz: &Ansatz,
    mode: Mode,
    config: &OptimizerConfig,
    seed: u64,
) -> Result<VqeResult> {
    if config.max_evaluations == 0 || config.initial_step.is_nan() || config.initial_step <= 0.0 {
        return Err(Error::InvalidConfig(format!("{config:?}")));
    }
    let dim = ansatz.parameter_count();
    let mut best: Option<VqeResult> = None;
    let mut total = 0usize;
    for r in 0..config.restarts.max(1) {
        let mut start_rng = rng::stream(seed, 2 * r as u64);
        let start: Vec<f64> = (0..dim).map(|_| uniform(&mut start_rng, -PI, PI)).collect();
        let mut eval_rng = rng::stream(seed, 2 * r as u64 + 1);
        let mut f = |x: &[f64]| energy(hamiltonian, ansatz, x, mode, eval_rng.next_u64());
        let out = nelder_mead(&mut f, &start, config)?;
        total += out.evaluations;
        if best.as_ref().is_none_or(|b| out.f < b.energy) {
            best = Some(VqeResult {
                best_params: out.x,
                energy: out.f,
                evaluations: 0,
                converged: out.converged,
            });
        }
    }
    let mut best = best.expect("at least one start");
    best.evaluations = total;
    Ok(best)
}
