//! Linear-combination-of-unitaries block encoding.
//!
//! For `O = sum_i beta_i U_i` with `beta_i > 0` and `Lambda = sum_i beta_i`,
//! the prepare circuit loads `sum_i sqrt(beta_i / Lambda) |i>` onto
//! `ceil(log2 k)` ancillas, the select operator applies `U_i` on ancilla
//! pattern `i`, and `W = V_P^dagger V_S V_P` leaves `O|psi> / Lambda` on the
//! all-zero ancilla branch.
//!
//! Joint registers place the system at qubits `0..n` and the ancillas above
//! it, so a joint amplitude index reads `(ancilla pattern << n) | system`.

use crate::encode::{ceil_log2, load_label};
use crate::error::{Error, Result};
use crate::pauli::{LcuForm, PhasedPauli};
use crate::simulator::{Circuit, Gate, StateVector, NORM_TOLERANCE};

/// Largest number of LCU terms a block accepts.
pub const MAX_TERMS: usize = 1 << 20;

/// Post-selection probabilities below this are treated as a null vector.
pub const DEGENERATE_PROBABILITY: f64 = 1e-14;

fn bits(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&q| mask >> q & 1 == 1)
}

/// State-preparation walk over a sequence of basis labels.
///
/// Starting from `labels[0]`, each step moves the remaining amplitude from
/// `labels[i-1]` to `labels[i]`: a rotation `RY(2 theta)` on the single qubit
/// that flips 0 -> 1, controlled on the qubits set in `labels[i-1]`, then a
/// CNOT clearing each qubit that flips 1 -> 0, controlled on the qubits set
/// in `labels[i]`. With non-negative amplitudes
/// `theta = acos(a_{i-1} / sqrt(1 - sum_{j<i-1} a_j^2))`; negative amplitudes
/// are handled by taking `theta` from `atan2`, which only the last step needs.
///
/// Binary counting labels and one-hot labels both satisfy the walk's
/// requirements; other sequences are checked and rejected when a step would
/// disturb amplitude already placed.
pub fn prepare_by_walk(n_qubits: usize, labels: &[usize], amplitudes: &[f64]) -> Result<Circuit> {
    if labels.is_empty() {
        return Err(Error::Empty("walk"));
    }
    if labels.len() != amplitudes.len() {
        return Err(Error::SizeMismatch {
            expected: labels.len(),
            found: amplitudes.len(),
        });
    }
    let norm: f64 = amplitudes.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >> n_qubits != 0) {
        return Err(Error::QubitOutOfRange {
            index: (usize::BITS - bad.leading_zeros() - 1) as usize,
            n_qubits,
        });
    }

    let k = labels.len();
    // tail[i] = sqrt(sum_{j >= i} a_j^2)
    let mut tail = vec![0.0; k + 1];
    for i in (0..k).rev() {
        tail[i] = (tail[i + 1] * tail[i + 1] + amplitudes[i] * amplitudes[i]).sqrt();
    }

    let mut circuit = Circuit::new(n_qubits);
    load_label(&mut circuit, labels[0])?;
    for i in 1..k {
        let (prev, cur) = (labels[i - 1], labels[i]);
        let raised = cur & !prev;
        if raised.count_ones() != 1 {
            return Err(Error::InvalidWalk { from: prev, to: cur });
        }
        // Earlier labels must not satisfy either control set.
        if labels[..i - 1].iter().any(|&l| l & prev == prev || l & cur == cur) {
            return Err(Error::InvalidWalk { from: prev, to: cur });
        }
        let s = if i == k - 1 { amplitudes[k - 1] } else { tail[i] };
        let theta = s.atan2(amplitudes[i - 1]);
        if s == 0.0 && theta == 0.0 {
            // Nothing left to move.
            break;
        }
        let target = raised.trailing_zeros() as usize;
        circuit.push(Gate::ry(target, 2.0 * theta).controlled_by(bits(prev)))?;
        for q in bits(prev & !cur) {
            circuit.push(Gate::x(q).controlled_by(bits(cur)))?;
        }
    }
    Ok(circuit)
}

/// Prepare circuit `V_P` for positive weights, over `ceil(log2 k)` qubits.
pub fn synthesize_vp(betas: &[f64]) -> Result<Circuit> {
    if betas.is_empty() {
        return Err(Error::Empty("LCU weights"));
    }
    if let Some(&b) = betas.iter().find(|&&b| b <= 0.0 || !b.is_finite()) {
        return Err(Error::NonPositiveWeight(b));
    }
    let lambda: f64 = betas.iter().sum();
    let amplitudes: Vec<f64> = betas.iter().map(|b| (b / lambda).sqrt()).collect();
    // Absorb the rounding of sqrt so the walk's norm check sees exactly 1.
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    let amplitudes: Vec<f64> = amplitudes.iter().map(|a| a / norm).collect();
    let labels: Vec<usize> = (0..betas.len()).collect();
    prepare_by_walk(ceil_log2(betas.len()), &labels, &amplitudes)
}

/// Prepare and select data for one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuBlock {
    pub form: LcuForm,
    pub n_ancilla: usize,
    pub vp: Circuit,
    /// Ancilla pattern and the unitary it selects.
    pub vs: Vec<(usize, PhasedPauli)>,
}

pub fn build_block(form: LcuForm) -> Result<LcuBlock> {
    let k = form.len();
    if k > MAX_TERMS {
        return Err(Error::TooLarge {
            what: "LCU term count",
            size: k,
            limit: MAX_TERMS,
        });
    }
    let vp = synthesize_vp(&form.betas)?;
    let vs = form.unitaries.iter().cloned().enumerate().collect();
    Ok(LcuBlock {
        n_ancilla: ceil_log2(k),
        vp,
        vs,
        form,
    })
}

impl LcuBlock {
    pub fn n_system(&self) -> usize {
        self.form.n_qubits
    }

    pub fn lambda(&self) -> f64 {
        self.form.lambda
    }

    fn ancillas(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.n_system();
        n..n + self.n_ancilla
    }

    /// `V_S = sum_i |i><i| (x) U_i` on the joint register. Zero ancilla bits
    /// are matched by conjugating with `X`; unused patterns act as identity.
    pub fn select_circuit(&self) -> Result<Circuit> {
        let n = self.n_system();
        let mut circuit = Circuit::new(n + self.n_ancilla);
        for (pattern, u) in &self.vs {
            let flips: Vec<usize> = (0..self.n_ancilla)
                .filter(|b| pattern >> b & 1 == 0)
                .map(|b| n + b)
                .collect();
            for &q in &flips {
                circuit.push(Gate::x(q))?;
            }
            circuit.push(Gate::pauli(u.clone()).controlled_by(self.ancillas()))?;
            for &q in &flips {
                circuit.push(Gate::x(q))?;
            }
        }
        Ok(circuit)
    }

    /// `W = V_P^dagger V_S V_P` on the joint register.
    pub fn w_circuit(&self) -> Result<Circuit> {
        let n = self.n_system();
        let mut w = Circuit::new(n + self.n_ancilla);
        w.append_at(&self.vp, n)?;
        w.append_at(&self.select_circuit()?, 0)?;
        w.append_at(&self.vp.inverse(), n)?;
        Ok(w)
    }

    /// Listing of the prepare and select stages.
    pub fn dump(&self) -> Result<String> {
        let mut out = String::from("# prepare\n");
        let mut vp = Circuit::new(self.n_system() + self.n_ancilla);
        vp.append_at(&self.vp, self.n_system())?;
        out.push_str(&vp.dump());
        out.push_str("# select\n");
        out.push_str(&self.select_circuit()?.dump());
        Ok(out)
    }
}

/// Runs `W` on `|0...0>_ancilla (x) |psi>`.
pub fn apply_w(block: &LcuBlock, psi: &StateVector) -> Result<StateVector> {
    if psi.n_qubits() != block.n_system() {
        return Err(Error::SizeMismatch {
            expected: block.n_system(),
            found: psi.n_qubits(),
        });
    }
    let mut joint = psi.extended(block.n_ancilla)?;
    joint.run(&block.w_circuit()?)?;
    Ok(joint)
}

/// Projects the top `ancilla_count` qubits onto `|0...0>`.
///
/// Returns the branch probability and the renormalized system state.
pub fn post_select(joint: &StateVector, ancilla_count: usize) -> Result<(f64, StateVector)> {
    if ancilla_count >= joint.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: joint.n_qubits() - 1,
            found: ancilla_count,
        });
    }
    let dim = 1usize << (joint.n_qubits() - ancilla_count);
    let branch = &joint.amplitudes()[..dim];
    let probability: f64 = branch.iter().map(|a| a.norm_sqr()).sum();
    if probability < DEGENERATE_PROBABILITY {
        return Err(Error::DegeneratePostSelection(probability));
    }
    let scale = probability.sqrt();
    let state = StateVector::from_amplitudes(branch.iter().map(|a| a / scale).collect())?;
    Ok((probability, state))
}
