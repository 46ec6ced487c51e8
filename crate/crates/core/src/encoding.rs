//! Fermion-to-qubit encodings.
//!
//! Both encodings are expressed through Majorana strings: for mode `j`,
//! `a_j = (c_j + i d_j)/2` and `a+_j = (c_j - i d_j)/2`. Jordan–Wigner uses
//! `c_j = Z_0…Z_{j-1} X_j`, `d_j = Z_0…Z_{j-1} Y_j`. Bravyi–Kitaev stores on
//! qubit `i` the parity of modes `i & (i+1) ..= i` (a Fenwick tree) and uses
//! `c_j = X_U(j) X_j Z_P(j)`, `d_j = X_U(j) Y_j Z_R(j)` with the update,
//! parity and remainder sets of that tree.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermion::{classify_term, FermionError, FermionOperatorSum, LadderOp, TermClass};
use crate::hamiltonian::{HamiltonianError, QubitHamiltonian, Term, MERGE_TOLERANCE};
use crate::pauli::{PauliError, PauliString, Phase, PhasedPauli};

/// Imaginary residue above this after encoding means the input was not Hermitian.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum EncodingError {
    #[error("encoded term {label} keeps imaginary coefficient {value:e}")]
    ResidualImaginary { label: String, value: f64 },
    #[error("need at least one mode")]
    NoModes,
    #[error("{electrons} electrons exceed {modes} modes")]
    TooManyElectrons { electrons: usize, modes: usize },
    #[error(transparent)]
    Fermion(#[from] FermionError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    JordanWigner,
    BravyiKitaev,
}

impl Encoding {
    pub fn short_name(self) -> &'static str {
        match self {
            Encoding::JordanWigner => "jw",
            Encoding::BravyiKitaev => "bk",
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jw" | "jordan_wigner" | "jordan-wigner" => Ok(Encoding::JordanWigner),
            "bk" | "bravyi_kitaev" | "bravyi-kitaev" => Ok(Encoding::BravyiKitaev),
            other => Err(format!("unknown encoding {other:?} (expected jw or bk)")),
        }
    }
}

fn fenwick_size(n: usize) -> usize {
    n.next_power_of_two()
}

/// Qubits other than `j` whose stored parity includes mode `j`.
pub fn update_set(j: usize, n: usize) -> Vec<usize> {
    let size = fenwick_size(n);
    let mut out = Vec::new();
    let mut i = j | (j + 1);
    while i < size {
        out.push(i);
        i |= i + 1;
    }
    out.retain(|&i| i < n);
    out
}

/// Qubits whose XOR is the parity of modes `0..j`.
pub fn parity_set(j: usize, n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut i = j as isize - 1;
    while i >= 0 {
        out.push(i as usize);
        i = (i & (i + 1)) - 1;
    }
    out.retain(|&i| i < n);
    out
}

/// Qubits whose XOR with qubit `j` gives the occupation of mode `j`.
pub fn flip_set(j: usize, n: usize) -> Vec<usize> {
    let lo = (j & (j + 1)) as isize;
    let mut out = Vec::new();
    let mut i = j as isize - 1;
    while i >= lo {
        out.push(i as usize);
        i = (i & (i + 1)) - 1;
    }
    out.retain(|&i| i < n);
    out
}

/// Parity set minus flip set.
pub fn remainder_set(j: usize, n: usize) -> Vec<usize> {
    let flip = flip_set(j, n);
    parity_set(j, n).into_iter().filter(|i| !flip.contains(i)).collect()
}

fn mask(qubits: &[usize]) -> u64 {
    qubits.iter().fold(0u64, |m, &q| m | 1 << q)
}

/// Majorana pair `(c_j, d_j)` for mode `j` of `n`.
pub fn majoranas(encoding: Encoding, j: usize, n: usize) -> Result<(PauliString, PauliString), PauliError> {
    let bit = 1u64 << j;
    let (cx, cz, dx, dz) = match encoding {
        Encoding::JordanWigner => {
            let below = bit - 1;
            (bit, below, bit, below | bit)
        }
        Encoding::BravyiKitaev => {
            let u = mask(&update_set(j, n));
            (
                u | bit,
                mask(&parity_set(j, n)),
                u | bit,
                mask(&remainder_set(j, n)) | bit,
            )
        }
    };
    Ok((PauliString::from_masks(n, cx, cz)?, PauliString::from_masks(n, dx, dz)?))
}

/// Encoded ladder operator as `(weight, string)` pairs.
pub fn encode_ladder(encoding: Encoding, op: LadderOp, n: usize) -> Result<[(Complex64, PauliString); 2], PauliError> {
    let (c, d) = majoranas(encoding, op.mode, n)?;
    let half = Complex64::new(0.5, 0.0);
    let d_weight = if op.dagger {
        Complex64::new(0.0, -0.5)
    } else {
        Complex64::new(0.0, 0.5)
    };
    Ok([(half, c), (d_weight, d)])
}

/// Encode a Hermitian fermionic operator. Each qubit term is labelled with
/// the class of the fermionic terms that contribute most to it.
pub fn encode(op: &FermionOperatorSum, encoding: Encoding) -> Result<QubitHamiltonian, EncodingError> {
    let n = op.n_modes();
    if n == 0 {
        return Err(EncodingError::NoModes);
    }
    let mut ladder_cache: HashMap<LadderOp, [(Complex64, PauliString); 2]> = HashMap::new();
    let mut index: HashMap<PauliString, usize> = HashMap::new();
    // (string, total, per-class contribution)
    let mut acc: Vec<(PauliString, Complex64, [Complex64; 5])> = Vec::new();
    let identity = PauliString::identity(n)?;

    for term in op.terms() {
        let class = if term.is_constant() {
            TermClass::Number
        } else {
            classify_term(term)?
        };
        let mut products: Vec<(Complex64, PhasedPauli)> =
            vec![(Complex64::new(term.coeff, 0.0), PhasedPauli::from(identity))];
        for lop in &term.ops {
            if !ladder_cache.contains_key(lop) {
                ladder_cache.insert(*lop, encode_ladder(encoding, *lop, n)?);
            }
            let parts = &ladder_cache[lop];
            let mut next = Vec::with_capacity(products.len() * 2);
            for (w, p) in &products {
                for (pw, ps) in parts {
                    next.push((w * pw, p.multiply(&PhasedPauli::from(*ps))?));
                }
            }
            products = next;
        }
        for (w, p) in products {
            let value = w * p.phase.to_complex();
            let k = *index.entry(p.string).or_insert_with(|| {
                acc.push((p.string, Complex64::new(0.0, 0.0), [Complex64::new(0.0, 0.0); 5]));
                acc.len() - 1
            });
            acc[k].1 += value;
            acc[k].2[class.index()] += value;
        }
    }

    let mut terms = Vec::with_capacity(acc.len());
    for (string, total, by_class) in acc {
        if total.im.abs() > IMAGINARY_TOLERANCE {
            return Err(EncodingError::ResidualImaginary {
                label: string.to_label(),
                value: total.im,
            });
        }
        if total.re.abs() < MERGE_TOLERANCE {
            continue;
        }
        let mut class = TermClass::Number;
        let mut best = -1.0;
        for c in TermClass::ALL {
            let m = by_class[c.index()].re.abs();
            if m > best {
                best = m;
                class = c;
            }
        }
        terms.push(Term::with_class(total.re, string, class));
    }
    Ok(QubitHamiltonian::from_terms(n, terms)?)
}

pub fn jordan_wigner(op: &FermionOperatorSum) -> Result<QubitHamiltonian, EncodingError> {
    encode(op, Encoding::JordanWigner)
}

pub fn bravyi_kitaev(op: &FermionOperatorSum) -> Result<QubitHamiltonian, EncodingError> {
    encode(op, Encoding::BravyiKitaev)
}

/// Qubit values that encode the given mode occupations.
pub fn occupation_to_qubits(encoding: Encoding, occupation: &[bool]) -> Vec<bool> {
    match encoding {
        Encoding::JordanWigner => occupation.to_vec(),
        Encoding::BravyiKitaev => (0..occupation.len())
            .map(|i| (i & (i + 1)..=i).fold(false, |p, k| p ^ occupation[k]))
            .collect(),
    }
}

/// Amplitude index of a computational basis state given per-qubit values.
pub fn basis_index(qubits: &[bool]) -> usize {
    let n = qubits.len();
    qubits
        .iter()
        .enumerate()
        .fold(0usize, |idx, (q, &b)| idx | (b as usize) << (n - 1 - q))
}

/// Basis index of the Hartree–Fock state: modes `0..n_electrons` occupied.
pub fn hf_state(n_electrons: usize, encoding: Encoding, n_modes: usize) -> Result<usize, EncodingError> {
    if n_electrons > n_modes {
        return Err(EncodingError::TooManyElectrons {
            electrons: n_electrons,
            modes: n_modes,
        });
    }
    let occupation: Vec<bool> = (0..n_modes).map(|m| m < n_electrons).collect();
    Ok(basis_index(&occupation_to_qubits(encoding, &occupation)))
}

/// Complex-weighted Pauli sum of one encoded ladder product, for tests that
/// check operator identities.
pub fn encode_product(
    encoding: Encoding,
    ops: &[LadderOp],
    n: usize,
) -> Result<Vec<(Complex64, PauliString)>, PauliError> {
    let mut products = vec![(Complex64::new(1.0, 0.0), PhasedPauli::from(PauliString::identity(n)?))];
    for lop in ops {
        let parts = encode_ladder(encoding, *lop, n)?;
        let mut next = Vec::with_capacity(products.len() * 2);
        for (w, p) in &products {
            for (pw, ps) in &parts {
                next.push((w * pw, p.multiply(&PhasedPauli::new(Phase::ONE, *ps))?));
            }
        }
        products = next;
    }
    Ok(products
        .into_iter()
        .map(|(w, p)| (w * p.phase.to_complex(), p.string))
        .collect())
}
