//! Dense exact diagonalization, used as the reference for every VQE run.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use thiserror::Error;

use crate::fermion::TermClass;
use crate::hamiltonian::QubitHamiltonian;
use crate::pauli::{Phase, MAX_DENSE_QUBITS};
use crate::statevector::{SimError, StateVector};

/// Largest tolerated `|M - M†|` entry before symmetrization.
pub const HERMITICITY_TOLERANCE: f64 = 1e-9;
/// Eigenpair residual bound, relative to `max(1, |λ|)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("{0} qubits exceed the dense limit of {MAX_DENSE_QUBITS}")]
    TooLarge(usize),
    #[error("Hamiltonian has no qubits")]
    NoQubits,
    #[error("matrix is not Hermitian: asymmetry {0:e}")]
    NotHermitian(f64),
    #[error("eigenpair residual {residual:e} exceeds bound {bound:e}")]
    Residual { residual: f64, bound: f64 },
    #[error("fixed qubit {qubit} out of range for {n_qubits} qubits")]
    FixedQubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error(transparent)]
    Simulation(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub ground_energy: f64,
    pub ground_vector: StateVector,
    /// Ascending eigenvalues.
    pub full_spectrum: Option<Vec<f64>>,
    /// `‖Hv − λv‖₂` of the reported pair.
    pub residual: f64,
}

fn check_size(h: &QubitHamiltonian) -> Result<usize, ExactError> {
    let n = h.n_qubits();
    if n == 0 {
        return Err(ExactError::NoQubits);
    }
    if n > MAX_DENSE_QUBITS {
        return Err(ExactError::TooLarge(n));
    }
    Ok(n)
}

/// Dense matrix of `h` in the amplitude-index basis.
pub fn dense_matrix(h: &QubitHamiltonian) -> Result<DMatrix<Complex64>, ExactError> {
    let n = check_size(h)?;
    let dim = 1usize << n;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for t in h.terms() {
        let (xm, zm) = t.pauli.index_masks();
        let w = Phase::from_exponent(t.pauli.y_count()).to_complex() * t.coeff;
        for col in 0..dim {
            let sign = if (col & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[(col ^ xm, col)] += w * sign;
        }
    }
    Ok(m)
}

/// Symmetrize and return `(real part, imaginary part or None)`.
fn hermitian_parts(m: &DMatrix<Complex64>) -> Result<(DMatrix<f64>, Option<DMatrix<f64>>), ExactError> {
    let asym = (m - m.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));
    if asym > HERMITICITY_TOLERANCE {
        return Err(ExactError::NotHermitian(asym));
    }
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let re = sym.map(|z| z.re);
    let im = sym.map(|z| z.im);
    let imag = if im.iter().all(|&v| v == 0.0) { None } else { Some(im) };
    Ok((re, imag))
}

/// Ascending eigenvalues with eigenvectors as columns.
fn eigh(m: &DMatrix<Complex64>) -> Result<(Vec<f64>, DMatrix<Complex64>), ExactError> {
    let (re, im) = hermitian_parts(m)?;
    let (values, vectors): (Vec<f64>, DMatrix<Complex64>) = match im {
        // Chemistry Hamiltonians are real symmetric; skip complex arithmetic.
        None => {
            let e = SymmetricEigen::new(re);
            (
                e.eigenvalues.iter().copied().collect(),
                e.eigenvectors.map(|v| Complex64::new(v, 0.0)),
            )
        }
        Some(im) => {
            let c = DMatrix::from_fn(re.nrows(), re.ncols(), |r, k| Complex64::new(re[(r, k)], im[(r, k)]));
            let e = SymmetricEigen::new(c);
            (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
        }
    };
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));
    let sorted: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let vecs = DMatrix::from_fn(vectors.nrows(), order.len(), |r, k| vectors[(r, order[k])]);
    Ok((sorted, vecs))
}

fn checked_residual(m: &DMatrix<Complex64>, v: &DVector<Complex64>, lambda: f64) -> Result<f64, ExactError> {
    let r = (m * v - v * Complex64::new(lambda, 0.0)).norm();
    let bound = RESIDUAL_TOLERANCE * lambda.abs().max(1.0);
    if r > bound {
        return Err(ExactError::Residual { residual: r, bound });
    }
    Ok(r)
}

/// Ground energy and state of `h` by full diagonalization.
pub fn ground_state(h: &QubitHamiltonian) -> Result<SpectrumResult, ExactError> {
    let m = dense_matrix(h)?;
    let (values, vectors) = eigh(&m)?;
    let v: DVector<Complex64> = vectors.column(0).into_owned();
    let residual = checked_residual(&m, &v, values[0])?;
    Ok(SpectrumResult {
        ground_energy: values[0],
        ground_vector: StateVector::from_amplitudes(v.iter().copied().collect())?,
        full_spectrum: Some(values),
        residual,
    })
}

/// Ascending eigenvalues of `h`.
pub fn spectrum(h: &QubitHamiltonian) -> Result<Vec<f64>, ExactError> {
    Ok(eigh(&dense_matrix(h)?)?.0)
}

/// Lowest eigenvalue of `h` restricted to basis states whose qubits in
/// `fixed` take the given values. Only the subspace block is assembled, so
/// the full register may exceed the dense limit as long as the free qubits
/// do not.
pub fn projected_ground_state(h: &QubitHamiltonian, fixed: &BTreeMap<usize, bool>) -> Result<f64, ExactError> {
    let n = h.n_qubits();
    if n == 0 {
        return Err(ExactError::NoQubits);
    }
    let (mut care, mut want) = (0usize, 0usize);
    for (&q, &b) in fixed {
        if q >= n {
            return Err(ExactError::FixedQubitOutOfRange { qubit: q, n_qubits: n });
        }
        let bit = 1usize << (n - 1 - q);
        care |= bit;
        if b {
            want |= bit;
        }
    }
    let free = n - fixed.len();
    if free > MAX_DENSE_QUBITS {
        return Err(ExactError::TooLarge(free));
    }
    // free bits of the full index, low to high
    let free_bits: Vec<usize> = (0..n).map(|b| 1usize << b).filter(|b| b & care == 0).collect();
    let expand = |k: usize| {
        free_bits
            .iter()
            .enumerate()
            .fold(want, |acc, (j, &b)| if k >> j & 1 == 1 { acc | b } else { acc })
    };
    let compress = |i: usize| {
        free_bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (j, &b)| if i & b != 0 { acc | 1 << j } else { acc })
    };
    let dim = 1usize << free;
    let mut sub = DMatrix::<Complex64>::zeros(dim, dim);
    for t in h.terms() {
        let (xm, zm) = t.pauli.index_masks();
        if xm & care != 0 {
            // flips a fixed qubit: no matrix elements inside the subspace
            continue;
        }
        let w = Phase::from_exponent(t.pauli.y_count()).to_complex() * t.coeff;
        for col in 0..dim {
            let full = expand(col);
            let sign = if (full & zm).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            sub[(compress(full ^ xm), col)] += w * sign;
        }
    }
    let (values, vectors) = eigh(&sub)?;
    checked_residual(&sub, &vectors.column(0).into_owned(), values[0])?;
    Ok(values[0])
}

/// `|h_k|` in descending order with each term's class when known. Ties
/// are broken by Pauli label.
pub fn coefficient_distribution(h: &QubitHamiltonian) -> Vec<(f64, Option<TermClass>)> {
    let mut terms: Vec<_> = h.terms().to_vec();
    terms.sort_by(|a, b| {
        b.coeff
            .abs()
            .total_cmp(&a.coeff.abs())
            .then_with(|| a.pauli.cmp(&b.pauli))
    });
    terms.into_iter().map(|t| (t.coeff.abs(), t.class)).collect()
}
