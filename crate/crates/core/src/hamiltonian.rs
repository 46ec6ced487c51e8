//! Real-coefficient sums of Pauli strings.

use std::collections::HashMap;

use thiserror::Error;

use crate::fermion::TermClass;
use crate::pauli::{PauliError, PauliString};

/// Merged coefficients smaller than this are dropped.
pub const MERGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamiltonianError {
    #[error("term acts on {found} qubits, Hamiltonian has {expected}")]
    QubitMismatch { expected: usize, found: usize },
    #[error("non-finite coefficient {0}")]
    NonFinite(f64),
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

/// One `h_k P_k` term. `class` records which fermionic operator class the
/// term came from, when it was produced by an encoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub pauli: PauliString,
    pub class: Option<TermClass>,
}

impl Term {
    pub fn new(coeff: f64, pauli: PauliString) -> Self {
        Self {
            coeff,
            pauli,
            class: None,
        }
    }

    pub fn with_class(coeff: f64, pauli: PauliString, class: TermClass) -> Self {
        Self {
            coeff,
            pauli,
            class: Some(class),
        }
    }
}

/// `H = Σ_k h_k P_k` with distinct strings, kept in insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl QubitHamiltonian {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// Merge duplicate strings (first occurrence keeps its position and
    /// class) and drop merged coefficients below [`MERGE_TOLERANCE`].
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self, HamiltonianError>
    where
        I: IntoIterator<Item = Term>,
    {
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if t.pauli.n_qubits() != n_qubits {
                return Err(HamiltonianError::QubitMismatch {
                    expected: n_qubits,
                    found: t.pauli.n_qubits(),
                });
            }
            if !t.coeff.is_finite() {
                return Err(HamiltonianError::NonFinite(t.coeff));
            }
            match index.get(&t.pauli) {
                Some(&k) => merged[k].coeff += t.coeff,
                None => {
                    index.insert(t.pauli, merged.len());
                    merged.push(t);
                }
            }
        }
        merged.retain(|t| t.coeff.abs() >= MERGE_TOLERANCE);
        Ok(Self {
            n_qubits,
            terms: merged,
        })
    }

    /// Parse `(coefficient, label)` pairs.
    pub fn from_labels<'a, I>(terms: I) -> Result<Self, HamiltonianError>
    where
        I: IntoIterator<Item = (f64, &'a str)>,
    {
        let parsed: Vec<Term> = terms
            .into_iter()
            .map(|(c, l)| Ok(Term::new(c, PauliString::from_label(l)?)))
            .collect::<Result<_, PauliError>>()?;
        let n = parsed.first().map_or(0, |t| t.pauli.n_qubits());
        Self::from_terms(n, parsed)
    }

    /// Terms at the given distinct indices, in that order.
    pub(crate) fn select(&self, order: &[usize]) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: order.iter().map(|&k| self.terms[k]).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// First `k` terms, in current order.
    pub fn prefix(&self, k: usize) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms[..k.min(self.terms.len())].to_vec(),
        }
    }

    /// Coefficient of the identity string, 0 if absent.
    pub fn constant(&self) -> f64 {
        self.terms
            .iter()
            .find(|t| t.pauli.is_identity())
            .map_or(0.0, |t| t.coeff)
    }

    pub fn has_classes(&self) -> bool {
        self.terms.iter().all(|t| t.class.is_some())
    }

    /// Drop class provenance from every term.
    pub fn without_classes(mut self) -> Self {
        for t in &mut self.terms {
            t.class = None;
        }
        self
    }

    /// Sum of two Hamiltonians on the same register.
    pub fn add(&self, other: &QubitHamiltonian) -> Result<Self, HamiltonianError> {
        if self.n_qubits != other.n_qubits {
            return Err(HamiltonianError::QubitMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        Self::from_terms(self.n_qubits, self.terms.iter().chain(other.terms.iter()).copied())
    }

    /// Terms as a map from string to coefficient (order-free comparison).
    pub fn coefficient_map(&self) -> HashMap<PauliString, f64> {
        self.terms.iter().map(|t| (t.pauli, t.coeff)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_merge_in_place() {
        let h = QubitHamiltonian::from_labels([(1.0, "XZ"), (0.5, "II"), (2.0, "XZ")]).unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.terms()[0].pauli.to_label(), "XZ");
        assert_eq!(h.terms()[0].coeff, 3.0);
        assert_eq!(h.constant(), 0.5);
    }

    #[test]
    fn cancelling_terms_dropped() {
        let h = QubitHamiltonian::from_labels([(1.0, "ZZ"), (-1.0, "ZZ"), (1e-13, "XX")]).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn mismatched_width_rejected() {
        let err = QubitHamiltonian::from_labels([(1.0, "ZZ"), (1.0, "Z")]).unwrap_err();
        assert!(matches!(err, HamiltonianError::QubitMismatch { .. }));
    }

    #[test]
    fn prefix_and_add() {
        let h = QubitHamiltonian::from_labels([(1.0, "ZI"), (2.0, "IZ"), (3.0, "XX")]).unwrap();
        let p = h.prefix(2);
        assert_eq!(p.len(), 2);
        let s = p.add(&h.prefix(1)).unwrap();
        assert_eq!(s.coefficient_map()[&PauliString::from_label("ZI").unwrap()], 2.0);
    }
}
