//! Hot-Start VQE: incremental minimization over magnitude-sorted prefixes
//! of a qubit Hamiltonian, with the supporting chemistry-to-qubit pipeline,
//! a statevector simulator, gradients, BFGS and an exact oracle.
//!
//! Typical flow: [`parse_fcidump`] → [`build_fermion_hamiltonian`] →
//! [`FermionOperatorSum::freeze_orbitals`] → [`encode`] → [`hot_start`],
//! checked against [`ground_state`].

pub mod encoding;
pub mod exact;
pub mod fcidump;
pub mod fermion;
pub mod gradients;
pub mod hamfile;
pub mod hamiltonian;
pub mod hotstart;
pub mod optimizer;
pub mod pauli;
pub mod statevector;

pub use encoding::{bravyi_kitaev, encode, hf_state, jordan_wigner, Encoding, EncodingError};
pub use exact::{coefficient_distribution, ground_state, projected_ground_state, ExactError, SpectrumResult};
pub use fcidump::{parse_fcidump, FcidumpError};
pub use fermion::{
    build_fermion_hamiltonian, FermionError, FermionIntegrals, FermionOperatorSum, FermionTerm, LadderOp, SpinOrder,
    TermClass,
};
pub use gradients::{evaluation_count, gradient, GradientError, GradientMethod, GradientSpec};
pub use hamfile::{HamFileError, HamiltonianFile};
pub use hamiltonian::{HamiltonianError, QubitHamiltonian, Term};
pub use hotstart::{
    class_batches, compare_orderings, hot_start, sort_terms, stride_select, Batching, HotStartError, HotStartResult,
    HotStartSchedule, OrderingRow, OrderingStrategy, StageRecord,
};
pub use optimizer::{
    minimize, minimize_with_hessian, random_initial_angles, IterationRecord, ObjectiveFunction, OptimizationResult,
    OptimizationTrace, OptimizerConfig, OptimizerError, Status, VqeObjective,
};
pub use pauli::{Pauli, PauliError, PauliString, Phase, PhasedPauli};
pub use statevector::{
    expectation, run_circuit, AnsatzCircuit, Entangler, Objective, ParameterVector, SimError, StateVector,
};
