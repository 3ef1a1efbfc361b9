//! Independent dense-matrix oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;
use qobs_core::pauli::{Axis, PauliString, PauliSum, PauliTerm};
use qobs_core::simulator::{Circuit, Gate, StateVector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn axis_matrix(axis: Option<Axis>) -> DMatrix<Complex64> {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match axis {
        None => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        Some(Axis::X) => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        Some(Axis::Y) => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        Some(Axis::Z) => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// Kronecker product with qubit 0 as the rightmost factor.
pub fn string_dense(s: &PauliString, n: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::from_element(1, 1, c(1.0, 0.0));
    for q in (0..n).rev() {
        let axis = s.factors().iter().find(|(k, _)| *k == q).map(|(_, a)| *a);
        m = m.kronecker(&axis_matrix(axis));
    }
    m
}

pub fn sum_dense(op: &PauliSum, n: usize) -> DMatrix<Complex64> {
    let dim = 1 << n;
    let mut m = DMatrix::zeros(dim, dim);
    for t in op.terms() {
        m += string_dense(&t.string, n) * c(t.coefficient, 0.0);
    }
    m
}

pub fn to_vector(psi: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(psi.amplitudes())
}

pub fn expectation_dense(op: &PauliSum, psi: &StateVector) -> f64 {
    let v = to_vector(psi);
    (v.adjoint() * sum_dense(op, psi.n_qubits()) * &v)[(0, 0)].re
}

pub fn state_from(values: &[(f64, f64)]) -> StateVector {
    let norm = values.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
    StateVector::from_amplitudes(values.iter().map(|&(a, b)| c(a / norm, b / norm)).collect()).unwrap()
}

/// Random complex state on `n` qubits (entries away from the all-zero vector).
pub fn arb_state(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| state_from(&v))
}

pub fn arb_axis() -> impl Strategy<Value = Option<Axis>> {
    prop_oneof![
        Just(None),
        Just(Some(Axis::X)),
        Just(Some(Axis::Y)),
        Just(Some(Axis::Z))
    ]
}

pub fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
    prop::collection::vec(arb_axis(), n)
        .prop_map(|axes| PauliString::new(axes.into_iter().enumerate().filter_map(|(q, a)| a.map(|a| (q, a)))).unwrap())
}

/// Pauli sum on exactly `n` qubits with up to `max_terms` terms.
pub fn arb_sum(n: usize, max_terms: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((-2.0f64..2.0, arb_string(n)), 1..=max_terms)
        .prop_map(move |terms| PauliSum::with_qubits(n, terms.into_iter().map(|(c, s)| PauliTerm::new(c, s))).unwrap())
}

/// Gate over `n >= 3` qubits drawn from every kind the simulator supports.
pub fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let q = 0..n;
    let angle = -6.3f64..6.3;
    let distinct3 = Just(()).prop_perturb(move |_, mut rng| {
        let mut qs: Vec<usize> = (0..n).collect();
        for i in 0..3 {
            let j = i + (rng.next_u32() as usize) % (n - i);
            qs.swap(i, j);
        }
        (qs[0], qs[1], qs[2])
    });
    prop_oneof![
        q.clone().prop_map(Gate::x),
        q.clone().prop_map(Gate::y),
        q.clone().prop_map(Gate::z),
        q.clone().prop_map(Gate::h),
        q.clone().prop_map(Gate::s),
        q.clone().prop_map(Gate::sdg),
        (q.clone(), angle.clone()).prop_map(|(t, a)| Gate::ry(t, a)),
        (q.clone(), angle).prop_map(|(t, a)| Gate::rz(t, a)),
        distinct3.clone().prop_map(|(a, b, _)| Gate::cnot(a, b)),
        distinct3.clone().prop_map(|(a, b, t)| Gate::toffoli(a, b, t)),
        distinct3
            .clone()
            .prop_map(|(a, b, ctl)| Gate::swap(a, b).controlled_by([ctl])),
        (arb_string(n), distinct3).prop_map(move |(s, _)| Gate::pauli(s.into())),
    ]
}

pub fn arb_circuit(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(arb_gate(n), 0..=max_len).prop_map(move |gates| {
        let mut circuit = Circuit::new(n);
        for g in gates {
            circuit.push(g).unwrap();
        }
        circuit
    })
}

pub fn run(circuit: &Circuit, n: usize) -> StateVector {
    let mut psi = StateVector::new(n).unwrap();
    psi.run(circuit).unwrap();
    psi
}

pub fn distance(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
