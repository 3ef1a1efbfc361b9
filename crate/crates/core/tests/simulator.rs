mod common;

use common::*;
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qobs_core::rng;
use qobs_core::simulator::{sample_counts, Gate, GateKind, StateVector};

fn one_qubit(kind: &GateKind) -> [[Complex64; 2]; 2] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match *kind {
        GateKind::X => [[z, o], [o, z]],
        GateKind::Y => [[z, -i], [i, z]],
        GateKind::Z => [[o, z], [z, -o]],
        GateKind::H => [[c(r, 0.0), c(r, 0.0)], [c(r, 0.0), c(-r, 0.0)]],
        GateKind::S => [[o, z], [z, i]],
        GateKind::Sdg => [[o, z], [z, -i]],
        GateKind::Ry(t) => [
            [c((t / 2.0).cos(), 0.0), c(-(t / 2.0).sin(), 0.0)],
            [c((t / 2.0).sin(), 0.0), c((t / 2.0).cos(), 0.0)],
        ],
        GateKind::Rz(t) => [
            [Complex64::from_polar(1.0, -t / 2.0), z],
            [z, Complex64::from_polar(1.0, t / 2.0)],
        ],
        _ => unreachable!(),
    }
}

/// Column-by-column dense matrix of a gate on `n` qubits.
fn gate_dense(g: &Gate, n: usize) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    let pauli = match &g.kind {
        GateKind::Pauli(u) => Some(string_dense(&u.string, n) * u.phase.value()),
        _ => None,
    };
    for b in 0..dim {
        if !g.controls.iter().all(|&q| b >> q & 1 == 1) {
            m[(b, b)] = c(1.0, 0.0);
            continue;
        }
        match &g.kind {
            GateKind::Swap => {
                let (p, q) = (g.targets[0], g.targets[1]);
                let (bp, bq) = (b >> p & 1, b >> q & 1);
                let out = (b & !(1 << p) & !(1 << q)) | (bq << p) | (bp << q);
                m[(out, b)] = c(1.0, 0.0);
            }
            GateKind::Pauli(_) => {
                let p = pauli.as_ref().unwrap();
                for r in 0..dim {
                    m[(r, b)] = p[(r, b)];
                }
            }
            kind => {
                let t = g.targets[0];
                let u = one_qubit(kind);
                let j = b >> t & 1;
                for i in 0..2 {
                    m[((b & !(1 << t)) | (i << t), b)] = u[i][j];
                }
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gates_match_dense_oracle(g in arb_gate(4), psi in arb_state(4)) {
        let mut out = psi.clone();
        out.apply(&g).unwrap();
        let expected = gate_dense(&g, 4) * to_vector(&psi);
        for (a, b) in out.amplitudes().iter().zip(expected.iter()) {
            prop_assert!((a - b).norm() < 1e-12, "{g}");
        }
    }

    #[test]
    fn circuits_preserve_norm(circuit in arb_circuit(5, 40), psi in arb_state(5)) {
        let mut out = psi.clone();
        out.run(&circuit).unwrap();
        prop_assert!((out.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_undoes_circuit(circuit in arb_circuit(4, 30), psi in arb_state(4)) {
        let mut out = psi.clone();
        out.run(&circuit).unwrap();
        out.run(&circuit.inverse()).unwrap();
        prop_assert!(distance(&out, &psi) < 1e-11);
    }

    #[test]
    fn self_inverse_gates(q in 0usize..3, psi in arb_state(3)) {
        for g in [Gate::x(q), Gate::y(q), Gate::z(q), Gate::h(q)] {
            let mut out = psi.clone();
            out.apply(&g).unwrap();
            out.apply(&g).unwrap();
            prop_assert!(distance(&out, &psi) < 1e-13);
        }
    }

    #[test]
    fn ry_angles_add(a in -7.0f64..7.0, b in -7.0f64..7.0, psi in arb_state(2)) {
        let mut twice = psi.clone();
        twice.apply(&Gate::ry(1, a)).unwrap();
        twice.apply(&Gate::ry(1, b)).unwrap();
        let mut once = psi.clone();
        once.apply(&Gate::ry(1, a + b)).unwrap();
        prop_assert!(distance(&twice, &once) < 1e-12);
    }

    #[test]
    fn marginals_sum_to_one(psi in arb_state(4), mask in 1usize..16) {
        let qubits: Vec<usize> = (0..4).filter(|q| mask >> q & 1 == 1).collect();
        let dist = psi.marginal_distribution(&qubits).unwrap();
        prop_assert_eq!(dist.len(), 1 << qubits.len());
        prop_assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sampled_frequencies_converge() {
    let psi = state_from(&[
        (0.1, 0.2),
        (0.5, -0.1),
        (0.0, 0.3),
        (0.4, 0.4),
        (0.2, 0.0),
        (0.05, 0.1),
        (0.3, -0.3),
        (0.1, 0.1),
    ]);
    let probs = psi.probabilities();
    let shots = 1_000_000;
    let counts = sample_counts(&probs, shots, &mut rng::stream(11, 0)).unwrap();
    assert_eq!(counts.iter().sum::<u64>(), shots);
    let tv: f64 = counts
        .iter()
        .zip(&probs)
        .map(|(&n, p)| (n as f64 / shots as f64 - p).abs())
        .sum::<f64>()
        / 2.0;
    assert!(tv < 0.005, "total variation {tv}");
}

#[test]
fn zero_probability_outcomes_never_drawn() {
    let probs = [0.0, 0.5, 0.0, 0.5];
    let counts = sample_counts(&probs, 10_000, &mut rng::stream(1, 0)).unwrap();
    assert_eq!(counts[0], 0);
    assert_eq!(counts[2], 0);
}

#[test]
fn bell_sampling_is_correlated() {
    let mut psi = StateVector::new(2).unwrap();
    psi.apply(&Gate::h(0)).unwrap();
    psi.apply(&Gate::cnot(0, 1)).unwrap();
    let counts = psi.sample(4000, 7).unwrap();
    assert!(counts.keys().all(|k| k == "00" || k == "11"));
    assert_eq!(counts.values().sum::<u64>(), 4000);
    assert_eq!(counts, psi.sample(4000, 7).unwrap());
}
