//! Measurement protocols: Hadamard test, SWAP test, destructive SWAP test,
//! and the LCU estimator that combines the block encoding with either SWAP
//! variant.
//!
//! Every protocol runs in exact mode (probabilities read off the
//! statevector) or sampled mode (a multinomial draw of `shots` outcomes of
//! the measured qubits).

use log::warn;

use crate::error::{Error, Result};
use crate::lcu::{build_block, LcuBlock};
use crate::pauli::{expectation_exact, lcu_normal_form, PauliSum, PhasedPauli};
use crate::rng::{self, Rng};
use crate::simulator::{sample_counts, Circuit, Gate, StateVector};

/// Below this post-selection probability the LCU estimate is flagged and its
/// variance bound widened to the trivial `Lambda^2`.
pub const LOW_SUCCESS_PROBABILITY: f64 = 1e-3;

// Streams 0.. are used per Pauli term; sign estimation gets its own range.
const SIGN_STREAM_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled { shots: u64 },
}

impl Mode {
    /// `0` selects exact mode.
    pub fn from_shots(shots: u64) -> Self {
        if shots == 0 {
            Mode::Exact
        } else {
            Mode::Sampled { shots }
        }
    }

    pub fn shots(self) -> u64 {
        match self {
            Mode::Exact => 0,
            Mode::Sampled { shots } => shots,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Re,
    Im,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    HTestRe,
    HTestIm,
    Swap,
    DSwap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapEstimate {
    pub value: f64,
    pub variance_bound: f64,
    /// `0` in exact mode.
    pub shots: u64,
    pub protocol: Protocol,
}

impl OverlapEstimate {
    /// `p(0) - p(1)` style estimate (`2 p(0) - 1` for the SWAP family); the
    /// variance of a `+-1` outcome mean is `(1 - v^2) / shots`.
    fn from_signed_mean(value: f64, mode: Mode, protocol: Protocol) -> Self {
        let variance_bound = match mode {
            Mode::Exact => 0.0,
            Mode::Sampled { shots } => (1.0 - value.clamp(-1.0, 1.0).powi(2)) / shots as f64,
        };
        Self {
            value,
            variance_bound,
            shots: mode.shots(),
            protocol,
        }
    }

    /// Value restricted to the protocol's range.
    pub fn clamped(&self) -> f64 {
        match self.protocol {
            Protocol::HTestRe | Protocol::HTestIm => self.value.clamp(-1.0, 1.0),
            Protocol::Swap | Protocol::DSwap => self.value.clamp(0.0, 1.0),
        }
    }
}

/// Distribution of `qubits`, exact or as empirical frequencies.
fn measure(state: &StateVector, qubits: &[usize], mode: Mode, rng: &mut Rng) -> Result<Vec<f64>> {
    let dist = state.marginal_distribution(qubits)?;
    match mode {
        Mode::Exact => Ok(dist),
        Mode::Sampled { shots } => {
            let counts = sample_counts(&dist, shots, rng)?;
            Ok(counts.into_iter().map(|c| c as f64 / shots as f64).collect())
        }
    }
}

fn system_size(prep: &Circuit, u: &PhasedPauli) -> usize {
    prep.n_qubits().max(u.string.max_qubit().map_or(0, |q| q + 1)).max(1)
}

/// `p(0) - p(1)` of the Hadamard-test ancilla.
pub fn htest_value(p0: f64, p1: f64) -> f64 {
    p0 - p1
}

/// Hadamard-test circuit: system on `0..n`, ancilla at `n`.
///
/// The Im variant applies `S^dagger` to the ancilla after the controlled
/// unitary, which makes `p(0) - p(1) = Im <psi|U|psi>`.
pub fn hadamard_circuit(u: &PhasedPauli, prep_psi: &Circuit, part: Part) -> Result<Circuit> {
    let n = system_size(prep_psi, u);
    let anc = n;
    let mut c = Circuit::new(n + 1);
    c.append_at(prep_psi, 0)?;
    c.push(Gate::h(anc))?;
    c.push(Gate::pauli(u.clone()).controlled_by([anc]))?;
    if part == Part::Im {
        c.push(Gate::sdg(anc))?;
    }
    c.push(Gate::h(anc))?;
    Ok(c)
}

fn hadamard_with(
    u: &PhasedPauli,
    prep_psi: &Circuit,
    mode: Mode,
    part: Part,
    rng: &mut Rng,
) -> Result<OverlapEstimate> {
    let circuit = hadamard_circuit(u, prep_psi, part)?;
    let mut state = StateVector::new(circuit.n_qubits())?;
    state.run(&circuit)?;
    let dist = measure(&state, &[circuit.n_qubits() - 1], mode, rng)?;
    let protocol = match part {
        Part::Re => Protocol::HTestRe,
        Part::Im => Protocol::HTestIm,
    };
    Ok(OverlapEstimate::from_signed_mean(
        htest_value(dist[0], dist[1]),
        mode,
        protocol,
    ))
}

/// Re or Im of `<psi|U|psi>` with `psi = prep_psi |0...0>`.
pub fn hadamard_test(
    u: &PhasedPauli,
    prep_psi: &Circuit,
    mode: Mode,
    seed: u64,
    part: Part,
) -> Result<OverlapEstimate> {
    hadamard_with(u, prep_psi, mode, part, &mut rng::stream(seed, 0))
}

/// Identity offset plus one Hadamard-test estimate per Pauli term.
#[derive(Debug, Clone, PartialEq)]
pub struct HtestBreakdown {
    pub identity_offset: f64,
    /// `(coefficient, estimate of <P>)` per non-identity term.
    pub terms: Vec<(f64, OverlapEstimate)>,
}

impl HtestBreakdown {
    pub fn value(&self) -> f64 {
        combine_htest(self.identity_offset, self.terms.iter().map(|(c, e)| (*c, e.value)))
    }

    pub fn variance_bound(&self) -> f64 {
        self.terms.iter().map(|(c, e)| c * c * e.variance_bound).sum()
    }
}

/// `offset + sum_i c_i <P_i>`.
pub fn combine_htest(identity_offset: f64, terms: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    identity_offset + terms.into_iter().map(|(c, v)| c * v).sum::<f64>()
}

fn htest_breakdown_from(
    op: &PauliSum,
    prep_psi: &Circuit,
    mode: Mode,
    seed: u64,
    stream_base: u64,
) -> Result<HtestBreakdown> {
    let mut identity_offset = 0.0;
    let mut terms = Vec::with_capacity(op.len());
    for (t, term) in op.terms().iter().enumerate() {
        if term.string.is_identity() {
            identity_offset += term.coefficient;
            continue;
        }
        let mut rng = rng::stream(seed, stream_base + t as u64);
        let u = PhasedPauli::from(term.string.clone());
        terms.push((term.coefficient, hadamard_with(&u, prep_psi, mode, Part::Re, &mut rng)?));
    }
    Ok(HtestBreakdown { identity_offset, terms })
}

/// Per-term Hadamard tests; term `t` draws from stream `t` of `seed`.
pub fn htest_breakdown(op: &PauliSum, prep_psi: &Circuit, mode: Mode, seed: u64) -> Result<HtestBreakdown> {
    htest_breakdown_from(op, prep_psi, mode, seed, 0)
}

/// `<psi|O|psi>` from one Hadamard test per term.
pub fn estimate_htest(op: &PauliSum, prep_psi: &Circuit, mode: Mode, seed: u64) -> Result<f64> {
    Ok(htest_breakdown(op, prep_psi, mode, seed)?.value())
}

fn check_pair(a: &Circuit, b: &Circuit) -> Result<usize> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: a.n_qubits(),
            found: b.n_qubits(),
        });
    }
    if a.n_qubits() == 0 {
        return Err(Error::EmptyRegister);
    }
    Ok(a.n_qubits())
}

/// Appends a SWAP test between registers `a` and `b` reading out on `anc`.
///
/// The full form is `H`, controlled-SWAP of every pair, `H`. The reduced
/// form drops the ancilla Hadamards and the trailing CNOT: per pair
/// `CNOT(a -> b)`, `H(a)`, Toffoli onto `anc`. Both leave `anc` reading 0
/// with probability `(1 + |<a|b>|^2) / 2`.
pub fn append_swap_test(circuit: &mut Circuit, a: &[usize], b: &[usize], anc: usize, reduced: bool) -> Result<()> {
    if reduced {
        for (&qa, &qb) in a.iter().zip(b) {
            circuit.push(Gate::cnot(qa, qb))?;
            circuit.push(Gate::h(qa))?;
            circuit.push(Gate::toffoli(qa, qb, anc))?;
        }
    } else {
        circuit.push(Gate::h(anc))?;
        for (&qa, &qb) in a.iter().zip(b) {
            circuit.push(Gate::swap(qa, qb).controlled_by([anc]))?;
        }
        circuit.push(Gate::h(anc))?;
    }
    Ok(())
}

/// Appends the destructive SWAP rotation: per pair `CNOT(a -> b)`, `H(a)`.
pub fn append_destructive_swap(circuit: &mut Circuit, a: &[usize], b: &[usize]) -> Result<()> {
    for (&qa, &qb) in a.iter().zip(b) {
        circuit.push(Gate::cnot(qa, qb))?;
        circuit.push(Gate::h(qa))?;
    }
    Ok(())
}

/// Whether an odd number of pairs read `(1, 1)`; `a` occupies the low `n`
/// bits of `outcome` and `b` the next `n`.
pub fn odd_pair_parity(outcome: usize, n: usize) -> bool {
    let mask = (1usize << n) - 1;
    ((outcome & mask) & ((outcome >> n) & mask)).count_ones() % 2 == 1
}

/// SWAP-test circuit for two `n`-qubit preparations: `a` on `0..n`, `b` on
/// `n..2n`, ancilla at `2n`.
pub fn swap_test_circuit(prep_a: &Circuit, prep_b: &Circuit, reduced: bool) -> Result<Circuit> {
    let n = check_pair(prep_a, prep_b)?;
    let mut c = Circuit::new(2 * n + 1);
    c.append_at(prep_a, 0)?;
    c.append_at(prep_b, n)?;
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    append_swap_test(&mut c, &a, &b, 2 * n, reduced)?;
    Ok(c)
}

/// `|<a|b>|^2` as `2 p(anc = 0) - 1`.
pub fn swap_test(prep_a: &Circuit, prep_b: &Circuit, mode: Mode, seed: u64, reduced: bool) -> Result<OverlapEstimate> {
    let c = swap_test_circuit(prep_a, prep_b, reduced)?;
    let mut state = StateVector::new(c.n_qubits())?;
    state.run(&c)?;
    let dist = measure(&state, &[c.n_qubits() - 1], mode, &mut rng::stream(seed, 0))?;
    Ok(OverlapEstimate::from_signed_mean(
        2.0 * dist[0] - 1.0,
        mode,
        Protocol::Swap,
    ))
}

/// `|<a|b>|^2` as `1 - 2 P(odd number of (1,1) pairs)`, no ancilla.
pub fn destructive_swap_test(prep_a: &Circuit, prep_b: &Circuit, mode: Mode, seed: u64) -> Result<OverlapEstimate> {
    let n = check_pair(prep_a, prep_b)?;
    let mut c = Circuit::new(2 * n);
    c.append_at(prep_a, 0)?;
    c.append_at(prep_b, n)?;
    let a: Vec<usize> = (0..n).collect();
    let b: Vec<usize> = (n..2 * n).collect();
    append_destructive_swap(&mut c, &a, &b)?;
    let mut state = StateVector::new(2 * n)?;
    state.run(&c)?;
    let all: Vec<usize> = (0..2 * n).collect();
    let dist = measure(&state, &all, mode, &mut rng::stream(seed, 0))?;
    let odd: f64 = dist
        .iter()
        .enumerate()
        .filter(|&(k, _)| odd_pair_parity(k, n))
        .map(|(_, p)| p)
        .sum();
    Ok(OverlapEstimate::from_signed_mean(
        1.0 - 2.0 * odd,
        mode,
        Protocol::DSwap,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LcuVariant {
    Swap,
    DSwap,
}

/// Where the sign of `<psi|O'|psi>` comes from; SWAP-type tests only see
/// its magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignPolicy {
    /// Exact statevector sign.
    #[default]
    Oracle,
    AssumePositive,
    /// Sign of a Hadamard-test estimate run with the same shot budget.
    HtestSign,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcuEstimate {
    /// Estimate of `|<psi|O'|psi>|`, `O'` the non-identity part; the
    /// radicand is clamped at zero.
    pub magnitude: f64,
    /// `identity_offset + sign * magnitude`.
    pub signed_value: f64,
    /// `Lambda sgn(r) sqrt|r|` for radicand `r`: unclamped, so shot noise
    /// around zero keeps its spread instead of piling up at zero.
    pub raw_magnitude: f64,
    /// `identity_offset + sign * raw_magnitude`.
    pub raw_signed_value: f64,
    /// Probability of the LCU ancillas reading all zeros.
    pub success_probability: f64,
    /// `P0 * (overlap conditioned on success)` before the square root; can
    /// dip below zero under shot noise.
    pub radicand: f64,
    /// Radicand was negative and clamped to zero.
    pub clamped: bool,
    pub lambda: f64,
    pub identity_offset: f64,
    pub sign: f64,
    pub variance_bound: f64,
    pub shots: u64,
}

/// Qubit layout of the joint LCU + overlap circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LcuLayout {
    pub system: Vec<usize>,
    pub ancillas: Vec<usize>,
    pub reference: Vec<usize>,
    /// SWAP-test readout qubit (SWAP variant only).
    pub readout: Option<usize>,
    pub n_qubits: usize,
}

/// Joint circuit: `psi` prepared on the system copy and on a reference
/// copy, `W` on (system, ancillas), then the overlap stage between the two
/// copies.
pub fn lcu_circuit(block: &LcuBlock, prep_psi: &Circuit, variant: LcuVariant) -> Result<(Circuit, LcuLayout)> {
    let n = block.n_system();
    if prep_psi.n_qubits() > n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: prep_psi.n_qubits(),
        });
    }
    let na = block.n_ancilla;
    let system: Vec<usize> = (0..n).collect();
    let ancillas: Vec<usize> = (n..n + na).collect();
    let reference: Vec<usize> = (n + na..2 * n + na).collect();
    let readout = (variant == LcuVariant::Swap).then_some(2 * n + na);
    let n_qubits = 2 * n + na + readout.map_or(0, |_| 1);

    let mut c = Circuit::new(n_qubits);
    c.append_at(prep_psi, 0)?;
    c.append_at(prep_psi, n + na)?;
    c.append_at(&block.w_circuit()?, 0)?;
    match readout {
        Some(anc) => append_swap_test(&mut c, &system, &reference, anc, false)?,
        None => append_destructive_swap(&mut c, &system, &reference)?,
    }
    let layout = LcuLayout {
        system,
        ancillas,
        reference,
        readout,
        n_qubits,
    };
    Ok((c, layout))
}

/// `<psi|O|psi>` through the LCU block and a SWAP-type overlap.
///
/// With `P0` the ancilla success probability and `v` the overlap between
/// `psi` and the post-selected state, `|<psi|O'|psi>| = Lambda sqrt(P0 v)`.
/// `P0 v` is estimated directly from joint frequencies so that no division
/// by a noisy `P0` occurs.
pub fn estimate_lcu(
    op: &PauliSum,
    prep_psi: &Circuit,
    mode: Mode,
    seed: u64,
    variant: LcuVariant,
    sign_policy: SignPolicy,
) -> Result<LcuEstimate> {
    let form = lcu_normal_form(op, true)?;
    let identity_offset = form.identity_offset;
    let lambda = form.lambda;
    let block = build_block(form)?;
    let (circuit, layout) = lcu_circuit(&block, prep_psi, variant)?;
    let mut state = StateVector::new(layout.n_qubits)?;
    state.run(&circuit)?;

    let na = layout.ancillas.len();
    let n = layout.system.len();
    let mut measured = layout.ancillas.clone();
    match layout.readout {
        Some(anc) => measured.push(anc),
        None => {
            measured.extend(&layout.system);
            measured.extend(&layout.reference);
        }
    }
    let dist = measure(&state, &measured, mode, &mut rng::stream(seed, 0))?;
    let anc_mask = (1usize << na) - 1;
    let mut success = 0.0;
    let mut radicand = 0.0;
    for (k, p) in dist.iter().enumerate().filter(|&(k, _)| k & anc_mask == 0) {
        let readout = k >> na;
        success += p;
        let weight = match variant {
            // 2 P(anc0, s=0) - P0
            LcuVariant::Swap => {
                if readout == 0 {
                    1.0
                } else {
                    -1.0
                }
            }
            // P0 - 2 P(anc0, odd)
            LcuVariant::DSwap => {
                if odd_pair_parity(readout, n) {
                    -1.0
                } else {
                    1.0
                }
            }
        };
        radicand += weight * p;
    }

    let clamped = radicand < 0.0;
    let magnitude = lambda * radicand.max(0.0).sqrt();
    let raw_magnitude = lambda * radicand.signum() * radicand.abs().sqrt();
    let mut variance_bound = match mode {
        Mode::Exact => 0.0,
        // |sqrt x - sqrt y| <= sqrt|x - y| and Var(radicand) <= 1 / shots.
        Mode::Sampled { shots } => lambda * lambda / (shots as f64).sqrt(),
    };
    if success < LOW_SUCCESS_PROBABILITY {
        warn!("LCU post-selection probability {success:e} is below {LOW_SUCCESS_PROBABILITY:e}");
        variance_bound = variance_bound.max(lambda * lambda);
    }

    let sign = match sign_policy {
        SignPolicy::AssumePositive => 1.0,
        SignPolicy::Oracle => {
            let mut psi = StateVector::new(n)?;
            psi.run(prep_psi)?;
            sign_of(expectation_exact(&op.without_identity(), &psi)?)
        }
        SignPolicy::HtestSign => {
            let b = htest_breakdown_from(&op.without_identity(), prep_psi, mode, seed, SIGN_STREAM_BASE)?;
            sign_of(b.value())
        }
    };

    Ok(LcuEstimate {
        magnitude,
        signed_value: identity_offset + sign * magnitude,
        raw_magnitude,
        raw_signed_value: identity_offset + sign * raw_magnitude,
        success_probability: success,
        radicand,
        clamped,
        lambda,
        identity_offset,
        sign,
        variance_bound,
        shots: mode.shots(),
    })
}

fn sign_of(v: f64) -> f64 {
    if v < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{parse_pauli_sum, Axis, PauliString, Phase};
    use approx::assert_abs_diff_eq;

    fn eq9_prep() -> Circuit {
        let mut c = Circuit::new(1);
        // Normalized (0.2759, 0.9611), positive amplitudes.
        let theta = 2.0 * 0.9611f64.atan2(0.2759);
        c.push(Gate::ry(0, theta)).unwrap();
        c
    }

    fn single(axis: Axis) -> PhasedPauli {
        PauliString::single(0, axis).into()
    }

    #[test]
    fn htest_x_and_z_on_ground_state() {
        let x = hadamard_test(&single(Axis::X), &eq9_prep(), Mode::Exact, 0, Part::Re).unwrap();
        let z = hadamard_test(&single(Axis::Z), &eq9_prep(), Mode::Exact, 0, Part::Re).unwrap();
        assert_abs_diff_eq!(x.value, 0.53034, epsilon = 5e-4);
        assert_abs_diff_eq!(z.value, -0.84759, epsilon = 5e-4);
        assert_eq!(x.shots, 0);
        assert_eq!(x.variance_bound, 0.0);
        assert_eq!(x.protocol, Protocol::HTestRe);
    }

    #[test]
    fn htest_identity() {
        let id = PhasedPauli::default();
        let prep = eq9_prep();
        assert_abs_diff_eq!(
            hadamard_test(&id, &prep, Mode::Exact, 0, Part::Re).unwrap().value,
            1.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            hadamard_test(&id, &prep, Mode::Exact, 0, Part::Im).unwrap().value,
            0.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn htest_im_sign_convention() {
        // <0| iI |0> = i.
        let u = PhasedPauli::new(Phase::I, PauliString::identity());
        let est = hadamard_test(&u, &Circuit::new(1), Mode::Exact, 0, Part::Im).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-15);
        assert_eq!(est.protocol, Protocol::HTestIm);
    }

    #[test]
    fn htest_combiner_replays_single_run() {
        let x = htest_value(0.76539, 0.23461);
        let z = htest_value(0.0765, 0.9235);
        assert_abs_diff_eq!(x, 0.53078, epsilon = 1e-12);
        assert_abs_diff_eq!(z, -0.847, epsilon = 1e-12);
        let q = combine_htest(-0.18144, [(0.18144, z), (0.28394, x)]);
        assert_abs_diff_eq!(q, -0.18441, epsilon = 5e-6);
    }

    #[test]
    fn estimate_htest_exact() {
        let op = parse_pauli_sum("-0.18144 I\n0.18144 Z0\n0.28394 X0").unwrap();
        let q = estimate_htest(&op, &eq9_prep(), Mode::Exact, 0).unwrap();
        assert_abs_diff_eq!(q, -0.1846, epsilon = 5e-4);
    }

    #[test]
    fn sampled_htest_is_deterministic() {
        let op = parse_pauli_sum("-0.18144 I\n0.18144 Z0\n0.28394 X0").unwrap();
        let mode = Mode::Sampled { shots: 1000 };
        let a = estimate_htest(&op, &eq9_prep(), mode, 9).unwrap();
        let b = estimate_htest(&op, &eq9_prep(), mode, 9).unwrap();
        let c = estimate_htest(&op, &eq9_prep(), mode, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn swap_identical_and_orthogonal() {
        let zero = Circuit::new(1);
        let mut one = Circuit::new(1);
        one.push(Gate::x(0)).unwrap();
        for reduced in [false, true] {
            let same = swap_test(&eq9_prep(), &eq9_prep(), Mode::Exact, 0, reduced).unwrap();
            assert_abs_diff_eq!(same.value, 1.0, epsilon = 1e-12);
            let orth = swap_test(&zero, &one, Mode::Exact, 0, reduced).unwrap();
            assert_abs_diff_eq!(orth.value, 0.0, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            destructive_swap_test(&eq9_prep(), &eq9_prep(), Mode::Exact, 0)
                .unwrap()
                .value,
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            destructive_swap_test(&zero, &one, Mode::Exact, 0).unwrap().value,
            0.0,
            epsilon = 1e-12
        );
        assert!(matches!(
            swap_test(&zero, &Circuit::new(2), Mode::Exact, 0, false),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(destructive_swap_test(&Circuit::new(2), &zero, Mode::Exact, 0).is_err());
    }

    #[test]
    fn parity_rule() {
        assert!(!odd_pair_parity(0b00, 1));
        assert!(odd_pair_parity(0b11, 1));
        assert!(!odd_pair_parity(0b1111, 2));
        assert!(odd_pair_parity(0b0101, 2));
        assert!(!odd_pair_parity(0b0110, 2));
    }

    #[test]
    fn lcu_basis2_exact() {
        let op = parse_pauli_sum("-0.18144 I\n0.18144 Z0\n0.28394 X0").unwrap();
        let mut psi = StateVector::new(1).unwrap();
        psi.run(&eq9_prep()).unwrap();
        let exact = expectation_exact(&op, &psi).unwrap();
        for variant in [LcuVariant::Swap, LcuVariant::DSwap] {
            let est = estimate_lcu(&op, &eq9_prep(), Mode::Exact, 0, variant, SignPolicy::Oracle).unwrap();
            assert_abs_diff_eq!(est.magnitude, 0.00316, epsilon = 5e-5);
            assert_abs_diff_eq!(est.signed_value, exact, epsilon = 1e-10);
            assert_abs_diff_eq!(est.signed_value, -0.1846, epsilon = 5e-4);
            assert_abs_diff_eq!(est.lambda, 0.46538, epsilon = 1e-12);
            assert!(!est.clamped);
        }
    }

    #[test]
    fn lcu_single_unitary() {
        let op = parse_pauli_sum("1 X0").unwrap();
        let est = estimate_lcu(
            &op,
            &eq9_prep(),
            Mode::Exact,
            0,
            LcuVariant::DSwap,
            SignPolicy::AssumePositive,
        )
        .unwrap();
        assert_abs_diff_eq!(est.success_probability, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(est.magnitude, 0.53034, epsilon = 1e-4);
    }

    #[test]
    fn sign_policies() {
        let op = parse_pauli_sum("-0.18144 I\n0.18144 Z0\n0.28394 X0").unwrap();
        let prep = eq9_prep();
        let pos = estimate_lcu(
            &op,
            &prep,
            Mode::Exact,
            0,
            LcuVariant::DSwap,
            SignPolicy::AssumePositive,
        )
        .unwrap();
        assert_eq!(pos.sign, 1.0);
        let ht = estimate_lcu(&op, &prep, Mode::Exact, 0, LcuVariant::DSwap, SignPolicy::HtestSign).unwrap();
        assert_eq!(ht.sign, -1.0);
    }

    #[test]
    fn lcu_layout_sizes() {
        let op = parse_pauli_sum("0.2 Z0\n0.3 X0").unwrap();
        let block = build_block(lcu_normal_form(&op, true).unwrap()).unwrap();
        let (_, swap) = lcu_circuit(&block, &eq9_prep(), LcuVariant::Swap).unwrap();
        assert_eq!(swap.n_qubits, 4);
        let (_, dswap) = lcu_circuit(&block, &eq9_prep(), LcuVariant::DSwap).unwrap();
        assert_eq!(dswap.n_qubits, 3);
        assert_eq!(dswap.readout, None);
    }
}
