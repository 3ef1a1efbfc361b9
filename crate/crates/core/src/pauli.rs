//! Weighted Pauli-string algebra.
//!
//! Operators are real-weighted sums of tensor products of `{I, X, Y, Z}`, which
//! makes every [`PauliSum`] Hermitian by construction. Terms keep the order in
//! which they first appear (the order fixes the LCU ancilla labelling); use
//! [`PauliSum::canonical`] for order-independent comparison.
//!
//! Text format, one term per line:
//!
//! ```text
//! # comment
//! -0.18144 I
//! 0.18144 Z0
//! 0.28394 X0
//! ```

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::simulator::StateVector;

/// Largest register `to_matrix` will densify.
pub const DENSE_QUBIT_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn letter(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis; qubits not listed carry `I`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    // sorted by qubit, one entry per qubit
    factors: Vec<(usize, Axis)>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(factors: impl IntoIterator<Item = (usize, Axis)>) -> Result<Self> {
        let mut factors: Vec<_> = factors.into_iter().collect();
        factors.sort();
        if let Some(w) = factors.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateQubit { line: 0, qubit: w[0].0 });
        }
        Ok(Self { factors })
    }

    pub fn single(qubit: usize, axis: Axis) -> Self {
        Self {
            factors: vec![(qubit, axis)],
        }
    }

    pub fn factors(&self) -> &[(usize, Axis)] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.factors.iter().map(|&(q, _)| q)
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.factors.last().map(|&(q, _)| q)
    }

    /// Relabels qubit `q` as `q + offset`.
    pub fn shifted(&self, offset: usize) -> Self {
        Self {
            factors: self.factors.iter().map(|&(q, a)| (q + offset, a)).collect(),
        }
    }

    /// Bit-flip mask, phase-flip mask and `Y` count.
    ///
    /// The string acts on a basis state as
    /// `P|b> = i^ny (-1)^popcount(b & z) |b ^ x>`.
    pub fn masks(&self) -> (usize, usize, u32) {
        let (mut x, mut z, mut ny) = (0usize, 0usize, 0u32);
        for &(q, axis) in &self.factors {
            match axis {
                Axis::X => x |= 1 << q,
                Axis::Z => z |= 1 << q,
                Axis::Y => {
                    x |= 1 << q;
                    z |= 1 << q;
                    ny += 1;
                }
            }
        }
        (x, z, ny)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for (i, (q, a)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", a.letter(), q)?;
        }
        Ok(())
    }
}

/// `i^k` for `k` in `0..4`.
pub(crate) fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Unit phase from `{1, i, -1, -i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Phase {
    #[default]
    One,
    I,
    MinusOne,
    MinusI,
}

impl Phase {
    fn power(self) -> u32 {
        match self {
            Phase::One => 0,
            Phase::I => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    fn from_power(k: u32) -> Self {
        match k % 4 {
            0 => Phase::One,
            1 => Phase::I,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn from_sign(sign: f64) -> Self {
        if sign < 0.0 {
            Phase::MinusOne
        } else {
            Phase::One
        }
    }

    pub fn value(self) -> Complex64 {
        i_pow(self.power())
    }

    pub fn conj(self) -> Self {
        Self::from_power(4 - self.power())
    }
}

/// A Pauli string times a unit phase: the unitaries used by the estimators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl PhasedPauli {
    pub fn new(phase: Phase, string: PauliString) -> Self {
        Self { phase, string }
    }

    pub fn signed(sign: f64, string: PauliString) -> Self {
        Self::new(Phase::from_sign(sign), string)
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.phase.conj(), self.string.clone())
    }

    /// `+1` or `-1` for real phases.
    pub fn sign(&self) -> Option<f64> {
        match self.phase {
            Phase::One => Some(1.0),
            Phase::MinusOne => Some(-1.0),
            _ => None,
        }
    }
}

impl From<PauliString> for PhasedPauli {
    fn from(string: PauliString) -> Self {
        Self::new(Phase::One, string)
    }
}

impl fmt::Display for PhasedPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            Phase::One => "+",
            Phase::I => "+i",
            Phase::MinusOne => "-",
            Phase::MinusI => "-i",
        };
        write!(f, "{prefix}{}", self.string)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Self {
        Self { coefficient, string }
    }
}

/// Real-weighted sum of Pauli strings over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    /// Merges repeated strings, drops exact zeros, and sizes the register to
    /// the largest qubit index used (at least one qubit).
    pub fn new(terms: impl IntoIterator<Item = PauliTerm>) -> Self {
        let terms: Vec<_> = terms.into_iter().collect();
        let n = terms
            .iter()
            .filter_map(|t| t.string.max_qubit())
            .max()
            .map_or(1, |q| q + 1);
        Self {
            n_qubits: n,
            terms: merge(terms),
        }
    }

    pub fn with_qubits(n_qubits: usize, terms: impl IntoIterator<Item = PauliTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::EmptyRegister);
        }
        let terms: Vec<_> = terms.into_iter().collect();
        if let Some(q) = terms.iter().filter_map(|t| t.string.max_qubit()).max() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
        }
        Ok(Self {
            n_qubits,
            terms: merge(terms),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn identity_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .find(|t| t.string.is_identity())
            .map_or(0.0, |t| t.coefficient)
    }

    /// The sum without its identity term.
    pub fn without_identity(&self) -> PauliSum {
        PauliSum {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().filter(|t| !t.string.is_identity()).cloned().collect(),
        }
    }

    /// Terms sorted by qubit index, then axis; identity first.
    pub fn canonical(&self) -> PauliSum {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.string.cmp(&b.string));
        PauliSum {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    pub fn scaled(&self, factor: f64) -> PauliSum {
        PauliSum::with_qubits(
            self.n_qubits,
            self.terms
                .iter()
                .map(|t| PauliTerm::new(t.coefficient * factor, t.string.clone())),
        )
        .expect("scaling keeps the register")
    }

    pub fn plus(&self, other: &PauliSum) -> PauliSum {
        let n = self.n_qubits.max(other.n_qubits);
        PauliSum::with_qubits(n, self.terms.iter().chain(&other.terms).cloned()).expect("union of valid registers")
    }

    /// Largest coefficient difference against `other` after canonicalizing
    /// both; strings missing on one side count with coefficient zero.
    pub fn max_coefficient_distance(&self, other: &PauliSum) -> f64 {
        let diff = self.plus(&other.scaled(-1.0));
        diff.terms.iter().map(|t| t.coefficient.abs()).fold(0.0, f64::max)
    }
}

fn merge(terms: Vec<PauliTerm>) -> Vec<PauliTerm> {
    let mut index: HashMap<PauliString, usize> = HashMap::new();
    let mut merged: Vec<PauliTerm> = Vec::with_capacity(terms.len());
    for t in terms {
        match index.get(&t.string) {
            Some(&i) => merged[i].coefficient += t.coefficient,
            None => {
                index.insert(t.string.clone(), merged.len());
                merged.push(t);
            }
        }
    }
    merged.retain(|t| t.coefficient != 0.0);
    merged
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.terms {
            writeln!(f, "{} {}", t.coefficient, t.string)?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pauli_sum(s)
    }
}

/// Parses the operator text format.
pub fn parse_pauli_sum(text: &str) -> Result<PauliSum> {
    let mut terms = Vec::new();
    let mut n_qubits = 1;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let coeff_tok = tokens.next().expect("non-empty line has a token");
        let coefficient = parse_coefficient(coeff_tok).ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("malformed coefficient '{coeff_tok}' (coefficients must be real)"),
        })?;
        let mut factors: Vec<(usize, Axis)> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for tok in tokens {
            if tok == "I" {
                continue;
            }
            let (letter, index) = tok.split_at(tok.chars().next().map_or(0, char::len_utf8));
            let axis = match letter {
                "I" => None,
                "X" => Some(Axis::X),
                "Y" => Some(Axis::Y),
                "Z" => Some(Axis::Z),
                _ => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown factor '{tok}'"),
                    })
                }
            };
            if index.starts_with('-') || index.starts_with('\u{2212}') {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("negative qubit index in '{tok}'"),
                });
            }
            let q: usize = index.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("malformed factor '{tok}'"),
            })?;
            if seen.contains(&q) {
                return Err(Error::DuplicateQubit {
                    line: line_no,
                    qubit: q,
                });
            }
            seen.push(q);
            n_qubits = n_qubits.max(q + 1);
            if let Some(axis) = axis {
                factors.push((q, axis));
            }
        }
        let string = PauliString::new(factors).expect("duplicates rejected above");
        terms.push(PauliTerm::new(coefficient, string));
    }
    PauliSum::with_qubits(n_qubits, terms)
}

fn parse_coefficient(tok: &str) -> Option<f64> {
    let normalized = tok.replace('\u{2212}', "-");
    normalized.parse::<f64>().ok().filter(|c| c.is_finite())
}

/// Dense `2^n x 2^n` matrix of the operator.
pub fn to_matrix(op: &PauliSum) -> Result<DMatrix<Complex64>> {
    let n = op.n_qubits;
    if n > DENSE_QUBIT_LIMIT {
        return Err(Error::TooLarge {
            what: "dense operator register",
            size: n,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in &op.terms {
        let (x, z, ny) = t.string.masks();
        let base = i_pow(ny) * t.coefficient;
        for b in 0..dim {
            let sign = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            m[(b ^ x, b)] += base * sign;
        }
    }
    Ok(m)
}

/// `<psi|P|psi>` for one string, without materializing `P|psi>`.
pub(crate) fn string_expectation(string: &PauliString, amps: &[Complex64]) -> Complex64 {
    let (x, z, ny) = string.masks();
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, &a) in amps.iter().enumerate() {
        let s = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        acc += amps[b ^ x].conj() * a * s;
    }
    acc * i_pow(ny)
}

/// `<psi|O|psi>` evaluated term by term on the statevector.
pub fn expectation_exact(op: &PauliSum, state: &StateVector) -> Result<f64> {
    if op.n_qubits != state.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: op.n_qubits,
            found: state.n_qubits(),
        });
    }
    let amps = state.amplitudes();
    let total: Complex64 = op
        .terms
        .iter()
        .map(|t| string_expectation(&t.string, amps) * t.coefficient)
        .sum();
    debug_assert!(
        total.im.abs() < 1e-8,
        "Hermitian expectation has imaginary part {}",
        total.im
    );
    Ok(total.re)
}

/// Real coefficients guarantee Hermiticity; the dense check confirms it for
/// registers small enough to densify.
pub fn is_hermitian(op: &PauliSum) -> bool {
    if op.terms.iter().any(|t| !t.coefficient.is_finite()) {
        return false;
    }
    match to_matrix(op) {
        Ok(m) => {
            let adj = m.adjoint();
            m.iter().zip(adj.iter()).all(|(a, b)| (a - b).norm() <= 1e-12)
        }
        Err(_) => true,
    }
}

/// `O = identity_offset * I + sum_i beta_i U_i` with every `beta_i > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LcuForm {
    pub n_qubits: usize,
    pub lambda: f64,
    pub betas: Vec<f64>,
    pub unitaries: Vec<PhasedPauli>,
    pub identity_offset: f64,
}

impl LcuForm {
    pub fn len(&self) -> usize {
        self.betas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.betas.is_empty()
    }

    /// The block-encoded part `sum_i beta_i U_i` as a Pauli sum.
    pub fn encoded_operator(&self) -> PauliSum {
        PauliSum::with_qubits(
            self.n_qubits,
            self.betas
                .iter()
                .zip(&self.unitaries)
                .map(|(&b, u)| PauliTerm::new(b * u.sign().expect("LCU unitaries carry real signs"), u.string.clone())),
        )
        .expect("form was built from a valid sum")
    }

    /// Re-expands offset and signed terms to the source operator.
    pub fn reconstruct(&self) -> PauliSum {
        let offset = PauliTerm::new(self.identity_offset, PauliString::identity());
        PauliSum::with_qubits(
            self.n_qubits,
            std::iter::once(offset).chain(self.encoded_operator().terms),
        )
        .expect("form was built from a valid sum")
    }
}

/// Splits `op` into positive weights and signed unitaries.
///
/// With `drop_identity` the identity coefficient moves to `identity_offset`;
/// otherwise the identity is encoded like any other unitary.
pub fn lcu_normal_form(op: &PauliSum, drop_identity: bool) -> Result<LcuForm> {
    if op.is_empty() {
        return Err(Error::Empty("operator"));
    }
    let mut offset = 0.0;
    let mut betas = Vec::new();
    let mut unitaries = Vec::new();
    for t in &op.terms {
        if drop_identity && t.string.is_identity() {
            offset += t.coefficient;
            continue;
        }
        betas.push(t.coefficient.abs());
        unitaries.push(PhasedPauli::signed(t.coefficient, t.string.clone()));
    }
    if betas.is_empty() {
        return Err(Error::IdentityOnly);
    }
    Ok(LcuForm {
        n_qubits: op.n_qubits,
        lambda: betas.iter().sum(),
        betas,
        unitaries,
        identity_offset: offset,
    })
}
