//! n-qubit Pauli strings in symplectic (x, z) bitmask form.
//!
//! Qubit `q` owns bit `q` of both masks and is the `q`-th character of the
//! text label, counting from the left. In a state vector of length `2^n` the
//! same qubit is amplitude-index bit `n - 1 - q`, so qubit 0 is the most
//! significant bit. `Y` is stored as `x = z = 1` and carries an implicit
//! factor of `i` (`Y = i·X·Z`).

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Largest register a `PauliString` can describe.
pub const MAX_QUBITS: usize = 64;

/// Largest register for which a dense `2^n x 2^n` matrix is built.
pub const MAX_DENSE_QUBITS: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PauliError {
    #[error("empty Pauli label")]
    EmptyLabel,
    #[error("invalid character {found:?} at position {position} of Pauli label")]
    InvalidCharacter { found: char, position: usize },
    #[error("Pauli strings act on {MAX_QUBITS} qubits at most, got {0}")]
    TooManyQubits(usize),
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },
    #[error("state of length {len} does not match a {n_qubits}-qubit operator")]
    DimensionMismatch { n_qubits: usize, len: usize },
    #[error("dense matrices are limited to {MAX_DENSE_QUBITS} qubits, got {0}")]
    DenseTooLarge(usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
}

/// A power of `i`: `i^k` for `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

/// Tensor product of single-qubit Paulis, without phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
}

fn width_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self, PauliError> {
        Self::from_masks(n_qubits, 0, 0)
    }

    /// Build from qubit-indexed masks (bit `q` is qubit `q`).
    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self, PauliError> {
        if n_qubits > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n_qubits));
        }
        let w = width_mask(n_qubits);
        if x_mask & !w != 0 || z_mask & !w != 0 {
            let top = 63 - (x_mask | z_mask).leading_zeros() as usize;
            return Err(PauliError::QubitOutOfRange { index: top, n_qubits });
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
        })
    }

    /// Single non-identity factor on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self, PauliError> {
        if qubit >= n_qubits {
            return Err(PauliError::QubitOutOfRange { index: qubit, n_qubits });
        }
        let (x, z) = p.bits();
        Self::from_masks(n_qubits, (x as u64) << qubit, (z as u64) << qubit)
    }

    pub fn from_label(label: &str) -> Result<Self, PauliError> {
        if label.is_empty() {
            return Err(PauliError::EmptyLabel);
        }
        let n = label.chars().count();
        if n > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in label.chars().enumerate() {
            let p = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => {
                    return Err(PauliError::InvalidCharacter {
                        found: other,
                        position: q,
                    })
                }
            };
            let (bx, bz) = p.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        Ok(Self {
            n_qubits: n,
            x_mask: x,
            z_mask: z,
        })
    }

    pub fn to_label(&self) -> String {
        (0..self.n_qubits).map(|q| self.factor(q).to_char()).collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Number of non-identity factors.
    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x_mask >> qubit & 1 == 1, self.z_mask >> qubit & 1 == 1)
    }

    /// Masks re-expressed in amplitude-index bit order (qubit 0 = MSB).
    pub fn index_masks(&self) -> (usize, usize) {
        (
            reverse_low_bits(self.x_mask, self.n_qubits) as usize,
            reverse_low_bits(self.z_mask, self.n_qubits) as usize,
        )
    }

    fn check_same_size(&self, other: &PauliString) -> Result<(), PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::QubitMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Symplectic inner-product test.
    pub fn commutes_with(&self, other: &PauliString) -> Result<bool, PauliError> {
        self.check_same_size(other)?;
        let s = (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        Ok(s % 2 == 0)
    }

    /// `self · other` as a phased string.
    pub fn multiply(&self, other: &PauliString) -> Result<PhasedPauli, PauliError> {
        self.check_same_size(other)?;
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // self = i^y1 X^x1 Z^z1; Z^z1 X^x2 = (-1)^|z1 & x2| X^x2 Z^z1
        let k =
            self.y_count() + other.y_count() + 2 * (self.z_mask & other.x_mask).count_ones() + 3 * (x & z).count_ones();
        Ok(PhasedPauli {
            phase: Phase::from_exponent(k),
            string: PauliString {
                n_qubits: self.n_qubits,
                x_mask: x,
                z_mask: z,
            },
        })
    }

    /// Apply to a state vector in place of a matrix product.
    pub fn apply(&self, state: &[Complex64]) -> Result<Vec<Complex64>, PauliError> {
        let mut out = vec![Complex64::new(0.0, 0.0); state.len()];
        self.apply_into(state, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, state: &[Complex64], out: &mut [Complex64]) -> Result<(), PauliError> {
        if state.len() != 1usize << self.n_qubits || out.len() != state.len() {
            return Err(PauliError::DimensionMismatch {
                n_qubits: self.n_qubits,
                len: state.len(),
            });
        }
        let (xm, zm) = self.index_masks();
        let base = Phase::from_exponent(self.y_count()).to_complex();
        for (j, amp) in state.iter().enumerate() {
            let sign = if (j & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            out[j ^ xm] = base * *amp * sign;
        }
        Ok(())
    }

    /// Dense `2^n x 2^n` matrix, qubit 0 as the leftmost Kronecker factor.
    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>, PauliError> {
        if self.n_qubits > MAX_DENSE_QUBITS {
            return Err(PauliError::DenseTooLarge(self.n_qubits));
        }
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for q in 0..self.n_qubits {
            let f = self.factor(q).matrix();
            let f = DMatrix::from_fn(2, 2, |r, c| f[r][c]);
            m = m.kronecker(&f);
        }
        Ok(m)
    }
}

fn reverse_low_bits(v: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        v.reverse_bits() >> (64 - n)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_label())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::from_label(s)
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic order of labels (`I < X < Y < Z`), shorter strings first.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n_qubits.cmp(&other.n_qubits).then_with(|| {
            for q in 0..self.n_qubits {
                let o = (self.factor(q) as u8).cmp(&(other.factor(q) as u8));
                if o.is_ne() {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
    }
}

/// Pauli-group element: a string times a power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhasedPauli {
    pub phase: Phase,
    pub string: PauliString,
}

impl PhasedPauli {
    pub fn new(phase: Phase, string: PauliString) -> Self {
        Self { phase, string }
    }

    pub fn multiply(&self, other: &PhasedPauli) -> Result<PhasedPauli, PauliError> {
        let p = self.string.multiply(&other.string)?;
        Ok(PhasedPauli {
            phase: self.phase * other.phase * p.phase,
            string: p.string,
        })
    }

    pub fn dense_matrix(&self) -> Result<DMatrix<Complex64>, PauliError> {
        Ok(self.string.dense_matrix()? * self.phase.to_complex())
    }
}

impl From<PauliString> for PhasedPauli {
    fn from(string: PauliString) -> Self {
        Self {
            phase: Phase::ONE,
            string,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_labels(n: usize) -> Vec<String> {
        let mut out = vec![String::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|s| "IXYZ".chars().map(move |c| format!("{s}{c}")))
                .collect();
        }
        out
    }

    fn close(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>, tol: f64) -> bool {
        (a - b).iter().all(|d| d.norm() <= tol)
    }

    #[test]
    fn label_masks() {
        let id = PauliString::from_label("IIII").unwrap();
        assert!(id.is_identity());
        assert_eq!(id.n_qubits(), 4);
        let p = PauliString::from_label("XYZI").unwrap();
        assert_eq!(p.x_mask(), 0b0011);
        assert_eq!(p.z_mask(), 0b0110);
    }

    #[test]
    fn label_errors() {
        assert_eq!(PauliString::from_label(""), Err(PauliError::EmptyLabel));
        assert_eq!(
            PauliString::from_label("XQ"),
            Err(PauliError::InvalidCharacter {
                found: 'Q',
                position: 1
            })
        );
        assert!(matches!(
            PauliString::from_label("xz"),
            Err(PauliError::InvalidCharacter { .. })
        ));
    }

    #[test]
    fn label_round_trip_all_four_qubit() {
        let labels = all_labels(4);
        assert_eq!(labels.len(), 256);
        for s in labels {
            assert_eq!(PauliString::from_label(&s).unwrap().to_label(), s);
        }
    }

    #[test]
    fn x_times_y_is_i_z() {
        let x = PauliString::from_label("X").unwrap();
        let y = PauliString::from_label("Y").unwrap();
        let p = x.multiply(&y).unwrap();
        assert_eq!(p.phase, Phase::I);
        assert_eq!(p.string.to_label(), "Z");
    }

    #[test]
    fn single_factor_involution() {
        for l in ["I", "X", "Y", "Z"] {
            let p = PauliString::from_label(l).unwrap();
            let sq = p.multiply(&p).unwrap();
            assert_eq!(sq.phase, Phase::ONE);
            assert!(sq.string.is_identity());
        }
    }

    #[test]
    fn multiply_matches_dense_three_qubits() {
        let labels = all_labels(3);
        let mats: Vec<_> = labels
            .iter()
            .map(|l| PauliString::from_label(l).unwrap().dense_matrix().unwrap())
            .collect();
        for (i, a) in labels.iter().enumerate() {
            let pa = PauliString::from_label(a).unwrap();
            for (j, b) in labels.iter().enumerate() {
                let pb = PauliString::from_label(b).unwrap();
                let prod = pa.multiply(&pb).unwrap();
                let expect = &mats[i] * &mats[j];
                assert!(close(&prod.dense_matrix().unwrap(), &expect, 1e-14), "{a} * {b}");
            }
        }
    }

    #[test]
    fn phased_multiply_is_associative() {
        let labels = all_labels(2);
        let ps: Vec<PhasedPauli> = labels
            .iter()
            .enumerate()
            .map(|(k, l)| PhasedPauli::new(Phase::from_exponent(k as u32), PauliString::from_label(l).unwrap()))
            .collect();
        for a in &ps {
            for b in &ps {
                for c in &ps {
                    let left = a.multiply(b).unwrap().multiply(c).unwrap();
                    let right = a.multiply(&b.multiply(c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let a = PauliString::from_label("XX").unwrap();
        let b = PauliString::from_label("X").unwrap();
        assert!(matches!(a.multiply(&b), Err(PauliError::QubitMismatch { .. })));
        assert!(a.commutes_with(&b).is_err());
    }

    #[test]
    fn commutation_simple() {
        let x = PauliString::from_label("X").unwrap();
        let z = PauliString::from_label("Z").unwrap();
        assert!(x.commutes_with(&x).unwrap());
        assert!(!x.commutes_with(&z).unwrap());
    }

    #[test]
    fn commutation_matches_dense_two_qubits() {
        let labels = all_labels(2);
        for a in &labels {
            for b in &labels {
                let pa = PauliString::from_label(a).unwrap();
                let pb = PauliString::from_label(b).unwrap();
                let (ma, mb) = (pa.dense_matrix().unwrap(), pb.dense_matrix().unwrap());
                let dense = close(&(&ma * &mb), &(&mb * &ma), 1e-14);
                assert_eq!(pa.commutes_with(&pb).unwrap(), dense, "{a} {b}");
            }
        }
    }

    #[test]
    fn z_eigenvectors() {
        let z = PauliString::from_label("Z").unwrap();
        let zero = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let one = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        assert_eq!(z.apply(&zero).unwrap(), zero.to_vec());
        assert_eq!(z.apply(&one).unwrap()[1], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn identity_apply_is_noop() {
        let id = PauliString::identity(3).unwrap();
        let v: Vec<_> = (0..8).map(|k| Complex64::new(k as f64, -(k as f64))).collect();
        assert_eq!(id.apply(&v).unwrap(), v);
    }

    #[test]
    fn apply_matches_dense_five_qubits() {
        // deterministic pseudo-random vector
        let mut s = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let v: Vec<Complex64> = (0..32).map(|_| Complex64::new(next(), next())).collect();
        let dv = nalgebra::DVector::from_vec(v.clone());
        for label in ["XYZIY", "ZZZZZ", "YIIIX", "IXIYI", "YYYYY"] {
            let p = PauliString::from_label(label).unwrap();
            let got = p.apply(&v).unwrap();
            let expect = p.dense_matrix().unwrap() * &dv;
            for (g, e) in got.iter().zip(expect.iter()) {
                assert!((g - e).norm() < 1e-12, "{label}");
            }
        }
    }

    #[test]
    fn apply_rejects_wrong_length() {
        let p = PauliString::from_label("XX").unwrap();
        assert!(matches!(
            p.apply(&[Complex64::new(1.0, 0.0); 2]),
            Err(PauliError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dense_small_cases() {
        let i = PauliString::from_label("I").unwrap().dense_matrix().unwrap();
        assert_eq!(i, DMatrix::identity(2, 2));
        let z = PauliString::from_label("Z").unwrap().dense_matrix().unwrap();
        assert_eq!(z[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(z[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(z[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn dense_limit_enforced() {
        let p = PauliString::identity(15).unwrap();
        assert_eq!(p.dense_matrix().unwrap_err(), PauliError::DenseTooLarge(15));
    }

    #[test]
    fn dense_eigenvalues_are_plus_minus_one() {
        for label in all_labels(2).into_iter().skip(1) {
            let m = PauliString::from_label(&label).unwrap().dense_matrix().unwrap();
            let eig = m.symmetric_eigenvalues();
            let (lo, hi) = eig.iter().fold((f64::MAX, f64::MIN), |(a, b), &e| (a.min(e), b.max(e)));
            assert!((lo + 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12, "{label}");
        }
    }

    #[test]
    fn qubit_zero_is_most_significant_amplitude_bit() {
        // X on qubit 0 of a 3-qubit register flips index bit 2
        let p = PauliString::from_label("XII").unwrap();
        let mut v = vec![Complex64::new(0.0, 0.0); 8];
        v[0] = Complex64::new(1.0, 0.0);
        assert_eq!(p.apply(&v).unwrap()[4], Complex64::new(1.0, 0.0));
    }
}
