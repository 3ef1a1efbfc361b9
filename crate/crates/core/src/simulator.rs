//! Exact statevector engine.
//!
//! Qubit 0 is the least-significant bit of the amplitude index. Controlled
//! gates act directly on the amplitudes; nothing is decomposed into
//! elementary two-qubit gates.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::pauli::{i_pow, PhasedPauli};
use crate::rng;

/// Default register cap for [`StateVector::new`].
pub const MAX_QUBITS: usize = 24;

/// Tolerance on the norm of states built from explicit amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    /// `RY(t)|0> = cos(t/2)|0> + sin(t/2)|1>`.
    Ry(f64),
    /// `diag(e^{-it/2}, e^{it/2})`.
    Rz(f64),
    Swap,
    /// Multi-qubit Pauli string with a unit phase; targets are its qubits.
    Pauli(PhasedPauli),
}

/// A gate application, controlled on `controls` all reading `|1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
}

impl Gate {
    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            targets: vec![target],
            controls: Vec::new(),
        }
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }
    pub fn y(target: usize) -> Self {
        Self::single(GateKind::Y, target)
    }
    pub fn z(target: usize) -> Self {
        Self::single(GateKind::Z, target)
    }
    pub fn h(target: usize) -> Self {
        Self::single(GateKind::H, target)
    }
    pub fn s(target: usize) -> Self {
        Self::single(GateKind::S, target)
    }
    pub fn sdg(target: usize) -> Self {
        Self::single(GateKind::Sdg, target)
    }
    pub fn ry(target: usize, theta: f64) -> Self {
        Self::single(GateKind::Ry(theta), target)
    }
    pub fn rz(target: usize, theta: f64) -> Self {
        Self::single(GateKind::Rz(theta), target)
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self::x(target).controlled_by([control])
    }

    pub fn toffoli(c0: usize, c1: usize, target: usize) -> Self {
        Self::x(target).controlled_by([c0, c1])
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self {
            kind: GateKind::Swap,
            targets: vec![a, b],
            controls: Vec::new(),
        }
    }

    pub fn pauli(u: PhasedPauli) -> Self {
        let targets = u.string.qubits().collect();
        Self {
            kind: GateKind::Pauli(u),
            targets,
            controls: Vec::new(),
        }
    }

    pub fn controlled_by(mut self, controls: impl IntoIterator<Item = usize>) -> Self {
        self.controls.extend(controls);
        self
    }

    /// Checks arity, index range, disjointness and finite angles.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let arity_ok = match &self.kind {
            GateKind::Swap => self.targets.len() == 2,
            GateKind::Pauli(u) => self.targets.iter().copied().eq(u.string.qubits()),
            _ => self.targets.len() == 1,
        };
        if !arity_ok {
            return Err(Error::InvalidGate(format!(
                "{} does not match targets {:?}",
                self.label(),
                self.targets
            )));
        }
        if let GateKind::Ry(t) | GateKind::Rz(t) = self.kind {
            if !t.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle {t}")));
            }
        }
        let mut seen = 0usize;
        for &q in self.targets.iter().chain(&self.controls) {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { index: q, n_qubits });
            }
            if seen & (1 << q) != 0 {
                return Err(Error::OverlappingQubits(q));
            }
            seen |= 1 << q;
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::Pauli(u) => GateKind::Pauli(u.adjoint()),
            k => k.clone(),
        };
        Self {
            kind,
            targets: self.targets.clone(),
            controls: self.controls.clone(),
        }
    }

    /// Relabels every qubit through `map`.
    pub fn remapped(&self, map: impl Fn(usize) -> usize) -> Self {
        let kind = match &self.kind {
            GateKind::Pauli(u) => {
                let string = crate::pauli::PauliString::new(u.string.factors().iter().map(|&(q, a)| (map(q), a)))
                    .expect("injective relabelling");
                GateKind::Pauli(PhasedPauli::new(u.phase, string))
            }
            k => k.clone(),
        };
        Self {
            kind,
            targets: self.targets.iter().map(|&q| map(q)).collect(),
            controls: self.controls.iter().map(|&q| map(q)).collect(),
        }
    }

    fn label(&self) -> String {
        match &self.kind {
            GateKind::X => "X".into(),
            GateKind::Y => "Y".into(),
            GateKind::Z => "Z".into(),
            GateKind::H => "H".into(),
            GateKind::S => "S".into(),
            GateKind::Sdg => "SDG".into(),
            GateKind::Ry(t) => format!("RY({t})"),
            GateKind::Rz(t) => format!("RZ({t})"),
            GateKind::Swap => "SWAP".into(),
            GateKind::Pauli(u) => format!("PAULI({u})"),
        }
    }

    fn matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let i = Complex64::new(0.0, 1.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Some(match self.kind {
            GateKind::X => [[ZERO, ONE], [ONE, ZERO]],
            GateKind::Y => [[ZERO, -i], [i, ZERO]],
            GateKind::Z => [[ONE, ZERO], [ZERO, -ONE]],
            GateKind::H => [[h, h], [h, -h]],
            GateKind::S => [[ONE, ZERO], [ZERO, i]],
            GateKind::Sdg => [[ONE, ZERO], [ZERO, -i]],
            GateKind::Ry(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                [[c.into(), (-s).into()], [s.into(), c.into()]]
            }
            GateKind::Rz(t) => [
                [Complex64::from_polar(1.0, -t / 2.0), ZERO],
                [ZERO, Complex64::from_polar(1.0, t / 2.0)],
            ],
            GateKind::Swap | GateKind::Pauli(_) => return None,
        })
    }
}

/// One line per gate: `GATE(params) targets | controls`.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |qs: &[usize]| qs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        write!(f, "{} {} | {}", self.label(), join(&self.targets), join(&self.controls))
    }
}

/// Ordered gate list over a fixed register.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Gate] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.ops.push(gate);
        Ok(self)
    }

    /// Appends `other` with its qubit `q` placed at `map[q]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<&mut Self> {
        if map.len() < other.n_qubits {
            return Err(Error::SizeMismatch {
                expected: other.n_qubits,
                found: map.len(),
            });
        }
        for g in &other.ops {
            self.push(g.remapped(|q| map[q]))?;
        }
        Ok(self)
    }

    /// Appends `other` shifted up by `offset` qubits.
    pub fn append_at(&mut self, other: &Circuit, offset: usize) -> Result<&mut Self> {
        let map: Vec<usize> = (offset..offset + other.n_qubits).collect();
        self.append_mapped(other, &map)
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Text listing, one gate per line.
    pub fn dump(&self) -> String {
        self.ops.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// Complex amplitudes over `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits, at most [`MAX_QUBITS`].
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::with_cap(n_qubits, MAX_QUBITS)
    }

    pub fn with_cap(n_qubits: usize, cap: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::EmptyRegister);
        }
        if n_qubits > cap {
            return Err(Error::QubitCap {
                requested: n_qubits,
                cap,
            });
        }
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wraps explicit amplitudes, which must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::SizeMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::QubitCap {
                requested: n_qubits,
                cap: MAX_QUBITS,
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    /// Normalizes real amplitudes (length `2^n`) into a state.
    pub fn from_real_unnormalized(values: &[f64]) -> Result<Self> {
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        Self::from_amplitudes(values.iter().map(|&v| Complex64::new(v / norm, 0.0)).collect())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// This state tensored with `extra` fresh qubits above it.
    pub fn extended(&self, extra: usize) -> Result<StateVector> {
        let mut out = StateVector::new(self.n_qubits + extra)?;
        out.amplitudes[..self.amplitudes.len()].copy_from_slice(&self.amplitudes);
        Ok(out)
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let cmask = gate.controls.iter().fold(0usize, |m, &q| m | (1 << q));
        match &gate.kind {
            GateKind::Swap => self.apply_swap(gate.targets[0], gate.targets[1], cmask),
            GateKind::Pauli(u) => self.apply_pauli(u, cmask),
            _ => {
                let m = gate.matrix().expect("single-qubit kind");
                self.apply_single(&m, gate.targets[0], cmask);
            }
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n_qubits > self.n_qubits {
            return Err(Error::SizeMismatch {
                expected: circuit.n_qubits,
                found: self.n_qubits,
            });
        }
        circuit.ops.iter().try_for_each(|g| self.apply(g))
    }

    fn apply_single(&mut self, m: &[[Complex64; 2]; 2], target: usize, cmask: usize) {
        let tbit = 1usize << target;
        for i in 0..self.amplitudes.len() {
            if i & tbit != 0 || i & cmask != cmask {
                continue;
            }
            let j = i | tbit;
            let (a, b) = (self.amplitudes[i], self.amplitudes[j]);
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    fn apply_swap(&mut self, a: usize, b: usize, cmask: usize) {
        let (abit, bbit) = (1usize << a, 1usize << b);
        for i in 0..self.amplitudes.len() {
            if i & abit != 0 && i & bbit == 0 && i & cmask == cmask {
                self.amplitudes.swap(i, i ^ abit ^ bbit);
            }
        }
    }

    fn apply_pauli(&mut self, u: &PhasedPauli, cmask: usize) {
        let (x, z, ny) = u.string.masks();
        let base = u.phase.value() * i_pow(ny);
        let factor = |b: usize| {
            if (b & z).count_ones() % 2 == 1 {
                -base
            } else {
                base
            }
        };
        if x == 0 {
            for (b, a) in self.amplitudes.iter_mut().enumerate() {
                if b & cmask == cmask {
                    *a *= factor(b);
                }
            }
            return;
        }
        let top = 1usize << (usize::BITS - 1 - x.leading_zeros());
        for b in 0..self.amplitudes.len() {
            if b & top != 0 || b & cmask != cmask {
                continue;
            }
            let c = b ^ x;
            let (ab, ac) = (self.amplitudes[b], self.amplitudes[c]);
            self.amplitudes[c] = factor(b) * ab;
            self.amplitudes[b] = factor(c) * ac;
        }
    }

    /// `|amplitude|^2` for every basis state.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that each `qubits[k]` reads `outcome[k]`.
    pub fn marginal_probability(&self, qubits: &[usize], outcome: &[bool]) -> Result<f64> {
        if qubits.len() != outcome.len() {
            return Err(Error::SizeMismatch {
                expected: qubits.len(),
                found: outcome.len(),
            });
        }
        let (mut mask, mut want) = (0usize, 0usize);
        for (&q, &bit) in qubits.iter().zip(outcome) {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
            mask |= 1 << q;
            if bit {
                want |= 1 << q;
            }
        }
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i & mask == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Joint distribution of `qubits`; bit `k` of the outcome index is
    /// `qubits[k]`.
    pub fn marginal_distribution(&self, qubits: &[usize]) -> Result<Vec<f64>> {
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        let mut dist = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let key = qubits
                .iter()
                .enumerate()
                .fold(0usize, |k, (pos, &q)| k | (((i >> q) & 1) << pos));
            dist[key] += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Measures every qubit `shots` times. Keys print qubit `n-1` first.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<BTreeMap<String, u64>> {
        let mut rng = rng::stream(seed, 0);
        let counts = sample_counts(&self.probabilities(), shots, &mut rng)?;
        Ok(counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(i, c)| (format!("{:0width$b}", i, width = self.n_qubits), c))
            .collect())
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`, insensitive to global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr())
    }
}

/// Multinomial draw of `shots` outcomes from `probs` by chained binomials.
///
/// Slightly negative or unnormalized entries from round-off are tolerated.
pub fn sample_counts(probs: &[f64], shots: u64, rng: &mut rng::Rng) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let mut counts = vec![0u64; probs.len()];
    let mut remaining = shots;
    let mut mass: f64 = probs.iter().map(|p| p.max(0.0)).sum();
    let last = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p.max(0.0);
        let ratio = if mass > 0.0 { (p / mass).min(1.0) } else { 1.0 };
        let draw = if i >= last || ratio >= 1.0 {
            remaining
        } else if ratio <= 0.0 {
            0
        } else {
            Binomial::new(remaining, ratio).expect("ratio in (0, 1)").sample(rng)
        };
        counts[i] = draw;
        remaining -= draw;
        mass -= p;
    }
    debug_assert_eq!(counts.iter().sum::<u64>(), shots);
    Ok(counts)
}

/// Uniform draw in `[lo, hi)` from a seeded stream.
pub(crate) fn uniform(rng: &mut rng::Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
