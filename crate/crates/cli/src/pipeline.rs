//! Input loading: FCIDUMP → fermionic operator → frozen active space →
//! encoded qubit Hamiltonian, or a ready-made Hamiltonian file.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use hotstart_core::{
    build_fermion_hamiltonian, encode, hf_state, parse_fcidump, stride_select, AnsatzCircuit, Encoding, Entangler,
    HamiltonianFile, QubitHamiltonian, SpinOrder,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// A qubit Hamiltonian together with what the ansatz needs to start from
/// the Hartree–Fock state.
#[derive(Debug, Clone)]
pub struct Problem {
    pub hamiltonian: QubitHamiltonian,
    pub encoding: Encoding,
    pub n_electrons: usize,
}

impl Problem {
    pub fn hf_index(&self) -> Result<usize, CliError> {
        hf_state(self.n_electrons, self.encoding, self.hamiltonian.n_qubits())
            .map_err(|e| CliError::input(e.to_string()))
    }

    pub fn circuit(&self, depth: usize, entangler: Entangler) -> Result<AnsatzCircuit, CliError> {
        AnsatzCircuit::new(self.hamiltonian.n_qubits(), depth, entangler, self.hf_index()?)
            .map_err(|e| CliError::input(e.to_string()))
    }
}

fn fmt_list(v: &[usize]) -> String {
    format!("[{}]", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Encode an FCIDUMP file with the given active space.
pub fn transform(
    path: &Path,
    encoding: Encoding,
    frozen_occupied: &[usize],
    removed_virtual: &[usize],
    spin_order: SpinOrder,
) -> Result<HamiltonianFile, CliError> {
    let file = File::open(path).map_err(|e| CliError::input(format!("cannot open {}: {e}", path.display())))?;
    let ints = parse_fcidump(BufReader::new(file)).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let frozen_electrons = 2 * frozen_occupied.len();
    if frozen_electrons > ints.n_electrons() {
        return Err(CliError::input(format!(
            "{} frozen occupied orbitals need {frozen_electrons} electrons, the file has {}",
            frozen_occupied.len(),
            ints.n_electrons()
        )));
    }
    let fop = build_fermion_hamiltonian(&ints, spin_order)
        .freeze_orbitals(frozen_occupied, removed_virtual, spin_order)
        .map_err(|e| CliError::input(e.to_string()))?;
    let h = encode(&fop, encoding).map_err(|e| CliError::runtime(e.to_string()))?;
    Ok(HamiltonianFile::new(h)
        .with_meta(
            "source",
            path.file_name()
                .map_or_else(String::new, |n| n.to_string_lossy().into_owned()),
        )
        .with_meta("encoding", encoding)
        .with_meta("spin_order", spin_order)
        .with_meta("frozen_occupied", fmt_list(frozen_occupied))
        .with_meta("removed_virtual", fmt_list(removed_virtual))
        .with_meta("electrons", ints.n_electrons() - frozen_electrons))
}

pub fn read_hamiltonian_file(path: &Path) -> Result<HamiltonianFile, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    HamiltonianFile::parse(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn is_hamiltonian_file(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("ham"))
}

/// Build the problem described by `cfg`, applying stride selection.
pub fn load_problem(cfg: &ExperimentConfig) -> Result<Problem, CliError> {
    let file = if is_hamiltonian_file(&cfg.input) {
        read_hamiltonian_file(&cfg.input)?
    } else {
        transform(
            &cfg.input,
            cfg.encoding,
            &cfg.frozen_occupied,
            &cfg.removed_virtual,
            cfg.spin_order,
        )?
    };
    let encoding = match file.meta("encoding") {
        Some(e) => e.parse().map_err(CliError::input)?,
        None => cfg.encoding,
    };
    let n_electrons = match (cfg.n_electrons, file.meta("electrons")) {
        (Some(n), _) => n,
        (None, Some(v)) => v
            .parse()
            .map_err(|_| CliError::input(format!("bad '# electrons:' header {v:?}")))?,
        (None, None) => {
            return Err(CliError::input(
                "electron count unknown: set n_electrons or add an '# electrons:' header",
            ))
        }
    };
    let mut hamiltonian = file.hamiltonian;
    if cfg.stride > 0 {
        hamiltonian =
            stride_select(&hamiltonian, cfg.stride, cfg.stride_base).map_err(|e| CliError::input(e.to_string()))?;
    }
    if hamiltonian.is_empty() {
        return Err(CliError::input("Hamiltonian has no terms"));
    }
    Ok(Problem {
        hamiltonian,
        encoding,
        n_electrons,
    })
}
