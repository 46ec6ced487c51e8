//! Workloads shared by the criterion benchmarks.

use std::path::PathBuf;

use hotstart_core::{
    build_fermion_hamiltonian, encode, hf_state, parse_fcidump, AnsatzCircuit, Encoding, Entangler, FermionOperatorSum,
    QubitHamiltonian, SpinOrder,
};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

/// LiH active space as a fermionic operator, before encoding.
pub fn lih_fermion(frozen: &[usize], removed: &[usize]) -> FermionOperatorSum {
    let text = std::fs::read_to_string(fixture("lih_sto3g.fcidump")).expect("fixture present");
    build_fermion_hamiltonian(
        &parse_fcidump(text.as_bytes()).expect("valid fixture"),
        SpinOrder::Interleaved,
    )
    .freeze_orbitals(frozen, removed, SpinOrder::Interleaved)
    .expect("valid active space")
}

pub fn lih_qubit(frozen: &[usize], removed: &[usize]) -> QubitHamiltonian {
    encode(&lih_fermion(frozen, removed), Encoding::BravyiKitaev).expect("encodable")
}

/// Full-entangler ansatz from the two-electron Hartree–Fock state.
pub fn ansatz(n_qubits: usize, depth: usize) -> AnsatzCircuit {
    let hf = hf_state(2, Encoding::BravyiKitaev, n_qubits).expect("enough modes");
    AnsatzCircuit::new(n_qubits, depth, Entangler::Full, hf).expect("valid circuit")
}
