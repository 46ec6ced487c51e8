//! Plain-text qubit Hamiltonian files.
//!
//! ```text
//! # qubits: 4
//! # encoding: bk
//! -0.098863969335458 IIII
//! +0.045322202052874 XZXI number_excitation
//! ```
//!
//! Header lines start with `#`; `key: value` headers are kept as metadata.
//! Body lines hold a signed decimal coefficient, a Pauli label and an
//! optional operator-class name. Coefficients are written with at least 15
//! decimals and as many more as needed to parse back to the same `f64`.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fermion::TermClass;
use crate::hamiltonian::{HamiltonianError, QubitHamiltonian, Term};
use crate::pauli::{PauliError, PauliString};

#[derive(Debug, Error)]
pub enum HamFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Label { line: usize, source: PauliError },
    #[error("label width {found} disagrees with {expected} qubits")]
    Width { expected: usize, found: usize },
    #[error("no '# qubits:' header and no terms to infer the width from")]
    UnknownWidth,
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianFile {
    pub hamiltonian: QubitHamiltonian,
    /// `key: value` header pairs other than `qubits`, in file order.
    pub metadata: Vec<(String, String)>,
}

impl HamiltonianFile {
    pub fn new(hamiltonian: QubitHamiltonian) -> Self {
        Self {
            hamiltonian,
            metadata: Vec::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Self, HamFileError> {
        let mut n_qubits: Option<usize> = None;
        let mut metadata = Vec::new();
        let mut terms = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(comment) = trimmed.strip_prefix('#') {
                if let Some((key, value)) = comment.split_once(':') {
                    let (key, value) = (key.trim(), value.trim());
                    if key == "qubits" {
                        n_qubits = Some(value.parse().map_err(|_| HamFileError::Syntax {
                            line,
                            message: format!("invalid qubit count {value:?}"),
                        })?);
                    } else {
                        metadata.push((key.to_string(), value.to_string()));
                    }
                }
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(HamFileError::Syntax {
                    line,
                    message: format!("expected 'coefficient label [class]', found {} fields", fields.len()),
                });
            }
            let coeff: f64 = fields[0].parse().map_err(|_| HamFileError::Syntax {
                line,
                message: format!("invalid coefficient {:?}", fields[0]),
            })?;
            if !coeff.is_finite() {
                return Err(HamFileError::Syntax {
                    line,
                    message: "coefficient is not finite".into(),
                });
            }
            let pauli = PauliString::from_label(fields[1]).map_err(|source| HamFileError::Label { line, source })?;
            let class = fields
                .get(2)
                .map(|c| {
                    c.parse::<TermClass>().map_err(|_| HamFileError::Syntax {
                        line,
                        message: format!("unknown term class {c:?}"),
                    })
                })
                .transpose()?;
            terms.push(Term { coeff, pauli, class });
        }
        let n = match (n_qubits, terms.first()) {
            (Some(n), _) => n,
            (None, Some(t)) => t.pauli.n_qubits(),
            (None, None) => return Err(HamFileError::UnknownWidth),
        };
        if let Some(t) = terms.iter().find(|t| t.pauli.n_qubits() != n) {
            return Err(HamFileError::Width {
                expected: n,
                found: t.pauli.n_qubits(),
            });
        }
        Ok(Self {
            hamiltonian: QubitHamiltonian::from_terms(n, terms)?,
            metadata,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# qubits: {}", self.hamiltonian.n_qubits());
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for t in self.hamiltonian.terms() {
            out.push_str(&format_coefficient(t.coeff));
            out.push(' ');
            out.push_str(&t.pauli.to_label());
            if let Some(c) = t.class {
                out.push(' ');
                out.push_str(c.name());
            }
            out.push('\n');
        }
        out
    }
}

/// Signed fixed-point text that parses back to exactly `x`.
pub fn format_coefficient(x: f64) -> String {
    (15..=1100)
        .map(|p| format!("{x:+.p$}"))
        .find(|s| s.parse::<f64>().ok() == Some(x))
        .expect("a finite f64 has an exact decimal expansion")
}
