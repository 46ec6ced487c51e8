//! Dense statevector simulation of the layered Ry/CNOT ansatz.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of the amplitude
//! index, matching the Pauli label order (leftmost character = qubit 0).

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::encoding::IMAGINARY_TOLERANCE;
use crate::hamiltonian::QubitHamiltonian;
use crate::pauli::{Phase, MAX_DENSE_QUBITS};

/// Circuit angles in radians.
pub type ParameterVector = Vec<f64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("CNOT control and target are both qubit {0}")]
    SameQubit(usize),
    #[error("expected {expected} parameters, got {found}")]
    ParameterCount { expected: usize, found: usize },
    #[error("state has {state} qubits, operator has {operator}")]
    DimensionMismatch { state: usize, operator: usize },
    #[error("basis state {index} does not fit in {n_qubits} qubits")]
    BasisOutOfRange { index: usize, n_qubits: usize },
    #[error("{0} qubits exceed the simulator limit of {MAX_DENSE_QUBITS}")]
    TooManyQubits(usize),
    #[error("a register needs at least one qubit")]
    NoQubits,
    #[error("expectation has imaginary part {0:e}")]
    NonRealExpectation(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self, SimError> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(SimError::BasisOutOfRange { index, n_qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Wrap raw amplitudes; the length must be a power of two. No
    /// normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::NoQubits);
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn bit(&self, qubit: usize) -> Result<usize, SimError> {
        if qubit >= self.n_qubits {
            return Err(SimError::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(1 << (self.n_qubits - 1 - qubit))
    }

    /// `Ry(θ) = [[cos θ/2, -sin θ/2], [sin θ/2, cos θ/2]]` on one qubit.
    pub fn apply_ry(&mut self, qubit: usize, angle: f64) -> Result<(), SimError> {
        let bit = self.bit(qubit)?;
        let (s, c) = (0.5 * angle).sin_cos();
        ry_kernel(&mut self.amplitudes, bit, c, s);
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<(), SimError> {
        if control == target {
            return Err(SimError::SameQubit(control));
        }
        let cbit = self.bit(control)?;
        let tbit = self.bit(target)?;
        cnot_kernel(&mut self.amplitudes, cbit, tbit);
        Ok(())
    }
}

fn check_register(n_qubits: usize) -> Result<(), SimError> {
    if n_qubits == 0 {
        return Err(SimError::NoQubits);
    }
    if n_qubits > MAX_DENSE_QUBITS {
        return Err(SimError::TooManyQubits(n_qubits));
    }
    Ok(())
}

fn ry_kernel(amps: &mut [Complex64], bit: usize, c: f64, s: f64) {
    let dim = amps.len();
    let mut block = 0;
    while block < dim {
        for i0 in block..block + bit {
            let i1 = i0 | bit;
            let (a0, a1) = (amps[i0], amps[i1]);
            amps[i0] = a0 * c - a1 * s;
            amps[i1] = a0 * s + a1 * c;
        }
        block += 2 * bit;
    }
}

fn cnot_kernel(amps: &mut [Complex64], cbit: usize, tbit: usize) {
    for i in 0..amps.len() {
        if i & cbit != 0 && i & tbit == 0 {
            amps.swap(i, i | tbit);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    /// CNOT(i -> j) for every pair i < j, lexicographic.
    #[default]
    Full,
    /// CNOT(i -> i+1) chain.
    Linear,
}

impl fmt::Display for Entangler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Entangler::Full => "full",
            Entangler::Linear => "linear",
        })
    }
}

impl FromStr for Entangler {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(Entangler::Full),
            "linear" => Ok(Entangler::Linear),
            other => Err(format!("unknown entangler {other:?} (expected full or linear)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    /// Rotation on `qubit` driven by parameter `param`.
    Ry {
        qubit: usize,
        param: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

/// Basis-state preparation, one Ry row, then `depth` × [entangler, Ry row].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnsatzCircuit {
    n_qubits: usize,
    depth: usize,
    entangler: Entangler,
    initial_state: usize,
}

impl AnsatzCircuit {
    pub fn new(n_qubits: usize, depth: usize, entangler: Entangler, initial_state: usize) -> Result<Self, SimError> {
        check_register(n_qubits)?;
        if initial_state >= 1 << n_qubits {
            return Err(SimError::BasisOutOfRange {
                index: initial_state,
                n_qubits,
            });
        }
        Ok(Self {
            n_qubits,
            depth,
            entangler,
            initial_state,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn entangler(&self) -> Entangler {
        self.entangler
    }

    pub fn initial_state(&self) -> usize {
        self.initial_state
    }

    pub fn parameter_count(&self) -> usize {
        self.n_qubits * (self.depth + 1)
    }

    fn entangling_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_qubits;
        match self.entangler {
            Entangler::Full => (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect(),
            Entangler::Linear => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    /// Gate sequence after basis-state preparation.
    pub fn gates(&self) -> Vec<Gate> {
        let n = self.n_qubits;
        let pairs = self.entangling_pairs();
        let mut gates = Vec::with_capacity(self.parameter_count() + self.depth * pairs.len());
        for layer in 0..=self.depth {
            if layer > 0 {
                gates.extend(pairs.iter().map(|&(control, target)| Gate::Cnot { control, target }));
            }
            gates.extend((0..n).map(|q| Gate::Ry {
                qubit: q,
                param: layer * n + q,
            }));
        }
        gates
    }

    pub fn run(&self, theta: &[f64]) -> Result<StateVector, SimError> {
        self.check_parameters(theta)?;
        let mut state = StateVector::basis(self.n_qubits, self.initial_state)?;
        self.run_unchecked(theta, &mut state);
        Ok(state)
    }

    fn check_parameters(&self, theta: &[f64]) -> Result<(), SimError> {
        if theta.len() != self.parameter_count() {
            return Err(SimError::ParameterCount {
                expected: self.parameter_count(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    fn run_unchecked(&self, theta: &[f64], state: &mut StateVector) {
        let n = self.n_qubits;
        let bit = |q: usize| 1usize << (n - 1 - q);
        let pairs: Vec<(usize, usize)> = self
            .entangling_pairs()
            .into_iter()
            .map(|(c, t)| (bit(c), bit(t)))
            .collect();
        let amps = &mut state.amplitudes;
        for layer in 0..=self.depth {
            if layer > 0 {
                for &(c, t) in &pairs {
                    cnot_kernel(amps, c, t);
                }
            }
            for q in 0..n {
                let (s, c) = (0.5 * theta[layer * n + q]).sin_cos();
                ry_kernel(amps, bit(q), c, s);
            }
        }
    }
}

/// Run `circuit` with angles `theta`.
pub fn run_circuit(circuit: &AnsatzCircuit, theta: &[f64]) -> Result<StateVector, SimError> {
    circuit.run(theta)
}

/// Map angles into `[0, 2π)` for reporting.
pub fn canonicalize_angles(theta: &[f64]) -> ParameterVector {
    theta
        .iter()
        .map(|t| {
            let r = t.rem_euclid(TAU);
            if r >= TAU {
                0.0
            } else {
                r
            }
        })
        .collect()
}

/// A Hamiltonian pre-lowered to index-space masks for fast expectations.
#[derive(Debug, Clone)]
pub struct CompiledHamiltonian {
    n_qubits: usize,
    terms: Vec<CompiledTerm>,
}

#[derive(Debug, Clone, Copy)]
struct CompiledTerm {
    coeff: Complex64,
    x: usize,
    z: usize,
}

impl CompiledHamiltonian {
    pub fn new(h: &QubitHamiltonian) -> Self {
        let terms = h
            .terms()
            .iter()
            .map(|t| {
                let (x, z) = t.pauli.index_masks();
                CompiledTerm {
                    coeff: Phase::from_exponent(t.pauli.y_count()).to_complex() * t.coeff,
                    x,
                    z,
                }
            })
            .collect();
        Self {
            n_qubits: h.n_qubits(),
            terms,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// `⟨v|H|v⟩` as a complex number, summed in term order.
    fn expectation_complex(&self, amps: &[Complex64]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, a) in amps.iter().enumerate() {
                let v = amps[j ^ t.x].conj() * a;
                if (j & t.z).count_ones() & 1 == 0 {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
            total += t.coeff * acc;
        }
        total
    }

    pub fn expectation(&self, v: &StateVector) -> Result<f64, SimError> {
        if v.n_qubits != self.n_qubits {
            return Err(SimError::DimensionMismatch {
                state: v.n_qubits,
                operator: self.n_qubits,
            });
        }
        let e = self.expectation_complex(&v.amplitudes);
        if e.im.abs() > IMAGINARY_TOLERANCE {
            return Err(SimError::NonRealExpectation(e.im));
        }
        Ok(e.re)
    }
}

/// `Σ_k h_k ⟨v|P_k|v⟩`.
pub fn expectation(h: &QubitHamiltonian, v: &StateVector) -> Result<f64, SimError> {
    CompiledHamiltonian::new(h).expectation(v)
}

/// `θ ↦ ⟨ψ(θ)|H|ψ(θ)⟩` with a call counter.
#[derive(Debug)]
pub struct Objective {
    circuit: AnsatzCircuit,
    hamiltonian: CompiledHamiltonian,
    calls: AtomicUsize,
}

impl Objective {
    pub fn new(circuit: &AnsatzCircuit, h: &QubitHamiltonian) -> Result<Self, SimError> {
        if h.n_qubits() != circuit.n_qubits() {
            return Err(SimError::DimensionMismatch {
                state: circuit.n_qubits(),
                operator: h.n_qubits(),
            });
        }
        Ok(Self {
            circuit: circuit.clone(),
            hamiltonian: CompiledHamiltonian::new(h),
            calls: AtomicUsize::new(0),
        })
    }

    pub fn circuit(&self) -> &AnsatzCircuit {
        &self.circuit
    }

    pub fn parameter_count(&self) -> usize {
        self.circuit.parameter_count()
    }

    /// Energy at `theta`. Counts one call.
    ///
    /// # Panics
    /// If `theta` has the wrong length; use [`Objective::try_value`] to check.
    pub fn value(&self, theta: &[f64]) -> f64 {
        self.try_value(theta).expect("parameter count checked by caller")
    }

    pub fn try_value(&self, theta: &[f64]) -> Result<f64, SimError> {
        self.circuit.check_parameters(theta)?;
        self.calls.fetch_add(1, Ordering::Relaxed);
        let mut state = StateVector::basis(self.circuit.n_qubits, self.circuit.initial_state)?;
        self.circuit.run_unchecked(theta, &mut state);
        // Ry and CNOT are real, so the state stays real and the imaginary
        // part is identically zero for a Hermitian H.
        Ok(self.hamiltonian.expectation_complex(&state.amplitudes).re)
    }

    /// Objective evaluations so far.
    pub fn calls(&self) -> usize {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, DVector};
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn ry_pi_maps_zero_to_one() {
        let mut v = StateVector::basis(1, 0).unwrap();
        v.apply_ry(0, PI).unwrap();
        assert!((v.amplitudes()[0].re).abs() < 1e-15);
        assert!((v.amplitudes()[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ry_matches_kron_lifted_matrix() {
        let amps: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()))
            .collect();
        let theta = 1.234;
        for q in 0..3 {
            let mut v = StateVector::from_amplitudes(amps.clone()).unwrap();
            v.apply_ry(q, theta).unwrap();
            let (s, co) = (theta / 2.0).sin_cos();
            let ry = DMatrix::from_row_slice(2, 2, &[c(co), c(-s), c(s), c(co)]);
            let id = DMatrix::<Complex64>::identity(2, 2);
            let mut m = DMatrix::from_element(1, 1, c(1.0));
            for k in 0..3 {
                m = m.kronecker(if k == q { &ry } else { &id });
            }
            let expect = m * DVector::from_vec(amps.clone());
            for (a, b) in v.amplitudes().iter().zip(expect.iter()) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cnot_basis_action() {
        let mut v = StateVector::basis(2, 0b10).unwrap();
        v.apply_cnot(0, 1).unwrap();
        assert_eq!(v.amplitudes()[0b11], c(1.0));
        let mut v = StateVector::basis(2, 0b00).unwrap();
        v.apply_cnot(0, 1).unwrap();
        assert_eq!(v.amplitudes()[0], c(1.0));
        assert!(matches!(v.apply_cnot(1, 1), Err(SimError::SameQubit(1))));
        assert!(v.apply_cnot(0, 2).is_err());
    }

    #[test]
    fn circuit_structure_counts() {
        let a = AnsatzCircuit::new(4, 2, Entangler::Full, 0).unwrap();
        assert_eq!(a.parameter_count(), 12);
        let cnots = a.gates().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
        assert_eq!(cnots, 12);
        let a0 = AnsatzCircuit::new(4, 0, Entangler::Full, 0).unwrap();
        assert_eq!(a0.parameter_count(), 4);
        assert!(a0.gates().iter().all(|g| matches!(g, Gate::Ry { .. })));
        let lin = AnsatzCircuit::new(4, 1, Entangler::Linear, 0).unwrap();
        assert_eq!(lin.gates().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count(), 3);
    }

    #[test]
    fn gate_list_and_fast_path_agree() {
        let a = AnsatzCircuit::new(3, 2, Entangler::Full, 0b101).unwrap();
        let theta: Vec<f64> = (0..a.parameter_count()).map(|k| 0.3 * k as f64 - 1.0).collect();
        let fast = a.run(&theta).unwrap();
        let mut slow = StateVector::basis(3, 0b101).unwrap();
        for g in a.gates() {
            match g {
                Gate::Ry { qubit, param } => slow.apply_ry(qubit, theta[param]).unwrap(),
                Gate::Cnot { control, target } => slow.apply_cnot(control, target).unwrap(),
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn two_qubit_hand_computed_state() {
        // Ry(π/2) on both qubits of |00⟩ gives the uniform superposition.
        let a = AnsatzCircuit::new(2, 1, Entangler::Full, 0).unwrap();
        let v = a.run(&[PI / 2.0, PI / 2.0, 0.0, 0.0]).unwrap();
        // CNOT(0->1) swaps |10⟩ and |11⟩, both 1/2.
        for amp in v.amplitudes() {
            assert!((amp.re - 0.5).abs() < 1e-15);
        }
        let v = a.run(&[PI / 2.0, 0.0, 0.0, 0.0]).unwrap();
        // (|00⟩ + |10⟩)/√2 then CNOT → Bell state (|00⟩ + |11⟩)/√2.
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [r, 0.0, 0.0, r];
        for (amp, e) in v.amplitudes().iter().zip(expect) {
            assert!((amp.re - e).abs() < 1e-15 && amp.im == 0.0);
        }
    }

    #[test]
    fn z_expectation_signs() {
        let h = QubitHamiltonian::from_labels([(0.7, "Z")]).unwrap();
        assert_eq!(expectation(&h, &StateVector::basis(1, 0).unwrap()).unwrap(), 0.7);
        assert_eq!(expectation(&h, &StateVector::basis(1, 1).unwrap()).unwrap(), -0.7);
    }

    #[test]
    fn expectation_matches_dense() {
        let h = QubitHamiltonian::from_labels([(0.3, "XYZ"), (-1.1, "ZZI"), (0.25, "YIY"), (0.5, "III")]).unwrap();
        let amps: Vec<Complex64> = (0..8)
            .map(|k| Complex64::new((k as f64 + 0.5).sin(), (2.0 * k as f64).cos()))
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let amps: Vec<Complex64> = amps.into_iter().map(|a| a / norm).collect();
        let v = StateVector::from_amplitudes(amps.clone()).unwrap();
        let mut m = DMatrix::<Complex64>::zeros(8, 8);
        for t in h.terms() {
            m += t.pauli.dense_matrix().unwrap() * c(t.coeff);
        }
        let dv = DVector::from_vec(amps);
        let dense = (dv.adjoint() * &m * &dv)[(0, 0)];
        assert!((expectation(&h, &v).unwrap() - dense.re).abs() < 1e-12);
    }

    #[test]
    fn expectation_rejects_size_mismatch() {
        let h = QubitHamiltonian::from_labels([(1.0, "ZZ")]).unwrap();
        let v = StateVector::basis(1, 0).unwrap();
        assert!(matches!(expectation(&h, &v), Err(SimError::DimensionMismatch { .. })));
    }

    #[test]
    fn objective_counts_calls_and_is_deterministic() {
        let h = QubitHamiltonian::from_labels([(1.0, "ZI"), (0.5, "XX")]).unwrap();
        let a = AnsatzCircuit::new(2, 1, Entangler::Full, 0).unwrap();
        let f = Objective::new(&a, &h).unwrap();
        let theta = [0.1, 0.2, 0.3, 0.4];
        let e1 = f.value(&theta);
        let e2 = f.value(&theta);
        assert_eq!(e1.to_bits(), e2.to_bits());
        assert_eq!(f.calls(), 2);
        assert!(f.try_value(&[0.0]).is_err());
        assert_eq!(f.calls(), 2);
    }

    #[test]
    fn canonical_angles_in_range() {
        let t = canonicalize_angles(&[-0.1, TAU, 7.0, -1e-18]);
        assert!(t.iter().all(|&x| (0.0..TAU).contains(&x)));
        assert!((t[0] - (TAU - 0.1)).abs() < 1e-15);
        assert_eq!(t[1], 0.0);
    }
}
