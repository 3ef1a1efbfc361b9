//! One-body operators `sum_ij O_ij a_i^dagger a_j` mapped onto qubits.
//!
//! Two encodings are supported:
//!
//! * Jordan-Wigner (direct): one qubit per mode, a single particle occupies a
//!   one-hot bitstring. Interior Z-strings are omitted by default, which is
//!   exact on the one-particle sector; [`jw_encode_strict`] keeps them.
//! * Gray code (dense): `ceil(log2 k)` qubits, mode `i` stored at bitstring
//!   `i ^ (i >> 1)`, operator expanded over all `4^n` Pauli strings.
//!
//! Mode order for the deuteron basis is `(n, l) = (0,0), (0,2), (1,0), (1,2), ...`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lcu::prepare_by_walk;
use crate::pauli::{i_pow, to_matrix, Axis, PauliString, PauliSum, PauliTerm, DENSE_QUBIT_LIMIT};
use crate::simulator::{Circuit, Gate, StateVector};

const SYMMETRY_TOLERANCE: f64 = 1e-12;
const DROP_TOLERANCE: f64 = 1e-12;

/// Real symmetric `k x k` matrix of one-body matrix elements.
#[derive(Debug, Clone, PartialEq)]
pub struct OneBodyMatrix {
    entries: DMatrix<f64>,
    basis_labels: Vec<(u32, u32)>,
}

/// `(n, l)` of mode `i` in the deuteron harmonic-oscillator ordering.
pub fn deuteron_label(i: usize) -> (u32, u32) {
    ((i / 2) as u32, 2 * (i % 2) as u32)
}

impl OneBodyMatrix {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let labels = (0..entries.nrows()).map(deuteron_label).collect();
        Self::with_labels(entries, labels)
    }

    pub fn with_labels(entries: DMatrix<f64>, basis_labels: Vec<(u32, u32)>) -> Result<Self> {
        let k = entries.nrows();
        if k == 0 {
            return Err(Error::Empty("one-body matrix"));
        }
        if entries.ncols() != k {
            return Err(Error::SizeMismatch {
                expected: k,
                found: entries.ncols(),
            });
        }
        if basis_labels.len() != k {
            return Err(Error::SizeMismatch {
                expected: k,
                found: basis_labels.len(),
            });
        }
        for r in 0..k {
            for c in r + 1..k {
                let delta = (entries[(r, c)] - entries[(c, r)]).abs();
                if delta > SYMMETRY_TOLERANCE || !delta.is_finite() {
                    return Err(Error::NotSymmetric { row: r, col: c, delta });
                }
            }
        }
        Ok(Self { entries, basis_labels })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let k = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::SizeMismatch {
                expected: k,
                found: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(k, k, |r, c| rows[r][c]))
    }

    /// Matrix file: first line `k`, then `k` rows of `k` decimals.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (first, head) = lines.next().ok_or(Error::Empty("matrix file"))?;
        let k: usize = head.parse().map_err(|_| Error::Parse {
            line: first,
            message: format!("expected mode count, found '{head}'"),
        })?;
        let mut rows = Vec::with_capacity(k);
        for (line, l) in lines.by_ref().take(k) {
            let row = l
                .split_whitespace()
                .map(|t| {
                    t.replace('\u{2212}', "-").parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("malformed entry '{t}'"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != k {
                return Err(Error::Parse {
                    line,
                    message: format!("expected {k} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != k {
            return Err(Error::Parse {
                line: first,
                message: format!("expected {k} rows, found {}", rows.len()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "trailing content after matrix".into(),
            });
        }
        Self::from_rows(&rows)
    }

    pub fn k(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn basis_labels(&self) -> &[(u32, u32)] {
        &self.basis_labels
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingKind {
    JordanWigner,
    GrayCode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingScheme {
    pub kind: EncodingKind,
    pub n_modes: usize,
    pub n_qubits: usize,
}

impl EncodingScheme {
    pub fn new(kind: EncodingKind, n_modes: usize) -> Self {
        let n_qubits = match kind {
            EncodingKind::JordanWigner => n_modes,
            EncodingKind::GrayCode => ceil_log2(n_modes).max(1),
        };
        Self {
            kind,
            n_modes,
            n_qubits,
        }
    }

    /// Basis-state index holding mode `i`.
    pub fn label(&self, mode: usize) -> usize {
        match self.kind {
            EncodingKind::JordanWigner => 1 << mode,
            EncodingKind::GrayCode => gray(mode),
        }
    }

    /// Encoded state for real mode amplitudes (normalized on the way in).
    pub fn state(&self, mode_amplitudes: &[f64]) -> Result<StateVector> {
        self.check_modes(mode_amplitudes.len())?;
        let mut values = vec![0.0; 1 << self.n_qubits];
        for (i, &a) in mode_amplitudes.iter().enumerate() {
            values[self.label(i)] = a;
        }
        StateVector::from_real_unnormalized(&values)
    }

    /// Circuit taking `|0...0>` to [`Self::state`].
    pub fn prep_circuit(&self, mode_amplitudes: &[f64]) -> Result<Circuit> {
        self.check_modes(mode_amplitudes.len())?;
        let norm = mode_amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        let amps: Vec<f64> = mode_amplitudes.iter().map(|a| a / norm).collect();
        match self.kind {
            EncodingKind::JordanWigner => {
                let labels: Vec<usize> = (0..self.n_modes).map(|i| self.label(i)).collect();
                prepare_by_walk(self.n_qubits, &labels, &amps)
            }
            EncodingKind::GrayCode => {
                // Gray neighbours can differ by a 1->0 flip alone, so walk the
                // binary order over the permuted amplitude vector instead.
                let mut dense = vec![0.0; 1 << self.n_qubits];
                for (i, &a) in amps.iter().enumerate() {
                    dense[gray(i)] = a;
                }
                let labels: Vec<usize> = (0..dense.len()).collect();
                prepare_by_walk(self.n_qubits, &labels, &dense)
            }
        }
    }

    fn check_modes(&self, len: usize) -> Result<()> {
        if len != self.n_modes {
            return Err(Error::SizeMismatch {
                expected: self.n_modes,
                found: len,
            });
        }
        Ok(())
    }
}

pub(crate) fn ceil_log2(k: usize) -> usize {
    if k <= 1 {
        0
    } else {
        (usize::BITS - (k - 1).leading_zeros()) as usize
    }
}

/// Reflected binary code of `i`.
pub fn gray(i: usize) -> usize {
    i ^ (i >> 1)
}

fn finish(n_qubits: usize, terms: Vec<PauliTerm>) -> PauliSum {
    let merged = PauliSum::with_qubits(n_qubits, terms).expect("indices below n_qubits");
    PauliSum::with_qubits(
        n_qubits,
        merged
            .terms()
            .iter()
            .filter(|t| t.coefficient.abs() >= DROP_TOLERANCE)
            .cloned(),
    )
    .expect("subset of a valid sum")
}

fn jw_terms(m: &OneBodyMatrix, strict: bool) -> PauliSum {
    let k = m.k();
    let e = m.entries();
    let mut terms = Vec::new();
    for i in 0..k {
        terms.push(PauliTerm::new(e[(i, i)] / 2.0, PauliString::identity()));
    }
    for i in 0..k {
        terms.push(PauliTerm::new(-e[(i, i)] / 2.0, PauliString::single(i, Axis::Z)));
    }
    for i in 0..k {
        for j in i + 1..k {
            let half = e[(i, j)] / 2.0;
            for axis in [Axis::X, Axis::Y] {
                let interior = if strict { i + 1..j } else { j..j };
                let factors = std::iter::once((i, axis))
                    .chain(interior.map(|q| (q, Axis::Z)))
                    .chain(std::iter::once((j, axis)));
                let string = PauliString::new(factors).expect("distinct qubits");
                terms.push(PauliTerm::new(half, string));
            }
        }
    }
    finish(k, terms)
}

/// Jordan-Wigner image without interior Z-strings (one-particle sector).
pub fn jw_encode(m: &OneBodyMatrix) -> PauliSum {
    jw_terms(m, false)
}

/// Full Jordan-Wigner image, valid on every particle-number sector.
pub fn jw_encode_strict(m: &OneBodyMatrix) -> PauliSum {
    jw_terms(m, true)
}

/// Gray-code image: `c_P = Tr(P M) / 2^n` over every Pauli string, terms
/// ordered by (bit-flip mask, phase-flip mask).
pub fn gray_encode(m: &OneBodyMatrix) -> PauliSum {
    let scheme = EncodingScheme::new(EncodingKind::GrayCode, m.k());
    let n = scheme.n_qubits;
    let dim = 1usize << n;
    let mut dense = DMatrix::<f64>::zeros(dim, dim);
    for r in 0..m.k() {
        for c in 0..m.k() {
            dense[(gray(r), gray(c))] = m.entries()[(r, c)];
        }
    }
    let mut terms = Vec::new();
    for x in 0..dim {
        for z in 0..dim {
            let ny = (x & z).count_ones();
            let mut trace = 0.0;
            for b in 0..dim {
                let s = if (b & z).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
                trace += s * dense[(b, b ^ x)];
            }
            // Strings with an odd number of Y have an imaginary trace against a
            // real symmetric matrix, and that trace vanishes.
            let coefficient = (i_pow(ny) * trace).re / dim as f64;
            if coefficient.abs() < DROP_TOLERANCE {
                continue;
            }
            let factors = (0..n).filter_map(|q| {
                let (xb, zb) = ((x >> q) & 1 == 1, (z >> q) & 1 == 1);
                match (xb, zb) {
                    (true, true) => Some((q, Axis::Y)),
                    (true, false) => Some((q, Axis::X)),
                    (false, true) => Some((q, Axis::Z)),
                    (false, false) => None,
                }
            });
            terms.push(PauliTerm::new(
                coefficient,
                PauliString::new(factors).expect("distinct qubits"),
            ));
        }
    }
    finish(n, terms)
}

/// Matrix of `op` between one-hot basis states `e_i` (bit `i` set).
pub fn one_hot_restrict(op: &PauliSum) -> Result<DMatrix<f64>> {
    let k = op.n_qubits();
    if k > DENSE_QUBIT_LIMIT {
        return Err(Error::TooLarge {
            what: "one-hot register",
            size: k,
            limit: DENSE_QUBIT_LIMIT,
        });
    }
    let full = to_matrix(op)?;
    Ok(DMatrix::from_fn(k, k, |i, j| full[(1 << i, 1 << j)].re))
}

/// Matrix of a Gray-encoded `op` between the first `k` mode labels.
pub fn gray_restrict(op: &PauliSum, k: usize) -> Result<DMatrix<f64>> {
    let scheme = EncodingScheme::new(EncodingKind::GrayCode, k);
    if scheme.n_qubits != op.n_qubits() {
        return Err(Error::SizeMismatch {
            expected: scheme.n_qubits,
            found: op.n_qubits(),
        });
    }
    let full = to_matrix(op)?;
    Ok(DMatrix::from_fn(k, k, |i, j| full[(gray(i), gray(j))].re))
}

/// Applies an `X` to every qubit of `label`.
pub(crate) fn load_label(circuit: &mut Circuit, label: usize) -> Result<()> {
    let mut bits = label;
    while bits != 0 {
        let q = bits.trailing_zeros() as usize;
        circuit.push(Gate::x(q))?;
        bits &= bits - 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_pauli_sum;
    use approx::assert_abs_diff_eq;

    fn q2() -> OneBodyMatrix {
        OneBodyMatrix::from_rows(&[vec![0.0, 0.28394], vec![0.28394, -0.36288]]).unwrap()
    }

    #[test]
    fn gray_code_values() {
        assert_eq!((0..4).map(gray).collect::<Vec<_>>(), vec![0, 1, 3, 2]);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(9), 4);
    }

    #[test]
    fn basis2_gray_reproduces_published_operator() {
        let got = gray_encode(&q2());
        let want = parse_pauli_sum("-0.18144 I\n0.18144 Z0\n0.28394 X0").unwrap();
        assert!(got.max_coefficient_distance(&want) < 1e-5);
        // Term order matches the published one.
        assert_eq!(got.terms()[1].string.to_string(), "Z0");
    }

    #[test]
    fn basis2_jw_reproduces_published_operator() {
        let got = jw_encode(&q2());
        let want = parse_pauli_sum("-0.18144 I\n0.18144 Z1\n0.14197 X0 X1\n0.14197 Y0 Y1").unwrap();
        assert!(got.max_coefficient_distance(&want) < 1e-5);
    }

    #[test]
    fn identity_matrix_is_number_operator() {
        let m = OneBodyMatrix::new(DMatrix::identity(2, 2)).unwrap();
        let got = jw_encode(&m);
        let want = parse_pauli_sum("1.0 I\n-0.5 Z0\n-0.5 Z1").unwrap();
        assert!(got.max_coefficient_distance(&want) < 1e-15);
    }

    #[test]
    fn constant_diagonal_gray_is_identity() {
        let m = OneBodyMatrix::from_rows(&[vec![0.7, 0.0], vec![0.0, 0.7]]).unwrap();
        let got = gray_encode(&m);
        assert_eq!(got.len(), 1);
        assert!(got.terms()[0].string.is_identity());
        assert_abs_diff_eq!(got.terms()[0].coefficient, 0.7, epsilon = 1e-15);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let err = OneBodyMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::NotSymmetric { row: 0, col: 1, .. }));
    }

    #[test]
    fn matrix_file_parsing() {
        let m = OneBodyMatrix::parse("# Q, basis 2\n2\n0 0.28394\n0.28394 -0.36288\n").unwrap();
        assert_eq!(m, q2());
        assert_eq!(m.basis_labels(), &[(0, 0), (0, 2)]);
        assert!(OneBodyMatrix::parse("2\n0 1\n").is_err());
        assert!(OneBodyMatrix::parse("2\n0 1\n1\n").is_err());
        assert!(matches!(
            OneBodyMatrix::parse("2\n0 1\n2 0\n"),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(OneBodyMatrix::parse("1\n3\n4\n").is_err());
    }

    #[test]
    fn identity_only_restriction() {
        let op = PauliSum::with_qubits(3, [PauliTerm::new(1.0, PauliString::identity())]).unwrap();
        assert_eq!(one_hot_restrict(&op).unwrap(), DMatrix::identity(3, 3));
    }

    #[test]
    fn strict_jw_has_interior_z() {
        let mut rows = vec![vec![0.0; 3]; 3];
        rows[0][2] = 0.4;
        rows[2][0] = 0.4;
        let m = OneBodyMatrix::from_rows(&rows).unwrap();
        let strict = jw_encode_strict(&m);
        let strings: Vec<String> = strict.terms().iter().map(|t| t.string.to_string()).collect();
        assert_eq!(strings, vec!["X0 Z1 X2", "Y0 Z1 Y2"]);
        // Same action on the one-particle sector.
        assert_eq!(
            one_hot_restrict(&strict).unwrap(),
            one_hot_restrict(&jw_encode(&m)).unwrap()
        );
    }

    #[test]
    fn padded_gray_encoding() {
        let m = OneBodyMatrix::from_rows(&[vec![1.0, 0.2, 0.0], vec![0.2, -0.5, 0.3], vec![0.0, 0.3, 0.25]]).unwrap();
        let op = gray_encode(&m);
        assert_eq!(op.n_qubits(), 2);
        let back = gray_restrict(&op, 3).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                assert_abs_diff_eq!(back[(r, c)], m.entries()[(r, c)], epsilon = 1e-12);
            }
        }
        // The padded label carries nothing.
        let full = to_matrix(&op).unwrap();
        assert_abs_diff_eq!(full[(gray(3), gray(3))].re, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn encoded_states_and_prep_circuits_agree() {
        let amps = [0.2759, 0.9611, -0.1, 0.05];
        for kind in [EncodingKind::GrayCode, EncodingKind::JordanWigner] {
            let scheme = EncodingScheme::new(kind, 4);
            let direct = scheme.state(&amps).unwrap();
            let mut prepared = StateVector::new(scheme.n_qubits).unwrap();
            prepared.run(&scheme.prep_circuit(&amps).unwrap()).unwrap();
            for (a, b) in direct.amplitudes().iter().zip(prepared.amplitudes()) {
                assert_abs_diff_eq!(a.re, b.re, epsilon = 1e-12);
                assert_abs_diff_eq!(a.im, b.im, epsilon = 1e-12);
            }
        }
        let scheme = EncodingScheme::new(EncodingKind::GrayCode, 4);
        assert!(matches!(scheme.state(&[1.0]), Err(Error::SizeMismatch { .. })));
    }
}
