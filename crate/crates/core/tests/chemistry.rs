//! Encoders and exact energies against independently generated reference
//! data in `fixtures/`.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use hotstart_core::exact::spectrum as spectrum_of;
use hotstart_core::fermion::determinant_energy;
use hotstart_core::{
    build_fermion_hamiltonian, encode, expectation, ground_state, hf_state, parse_fcidump, projected_ground_state,
    stride_select, Encoding, FermionIntegrals, HamiltonianFile, QubitHamiltonian, SpinOrder, StateVector,
};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn integrals(molecule: &str) -> FermionIntegrals {
    let text = fs::read_to_string(fixture(&format!("{molecule}.fcidump"))).unwrap();
    parse_fcidump(text.as_bytes()).unwrap()
}

fn meta(molecule: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(fixture(&format!("{molecule}.json"))).unwrap()).unwrap()
}

fn usizes(v: &Value) -> Vec<usize> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap() as usize)
        .collect()
}

fn encoded(molecule: &str, frozen: &[usize], removed: &[usize], enc: Encoding) -> QubitHamiltonian {
    let op = build_fermion_hamiltonian(&integrals(molecule), SpinOrder::Interleaved)
        .freeze_orbitals(frozen, removed, SpinOrder::Interleaved)
        .unwrap();
    encode(&op, enc).unwrap()
}

fn reference_name(molecule: &str, frozen: &[usize], removed: &[usize], enc: Encoding) -> String {
    let mut parts = vec![molecule.to_string()];
    parts.extend(frozen.iter().map(|i| format!("f{i}")));
    parts.extend(removed.iter().map(|i| format!("r{i}")));
    format!("reference/{}_{}.ham", parts.join("_"), enc.short_name())
}

/// (molecule, frozen, removed) for every active space in the JSON files.
fn active_spaces() -> Vec<(&'static str, Vec<usize>, Vec<usize>, Value)> {
    let mut out = Vec::new();
    for molecule in ["h2_sto3g", "lih_sto3g"] {
        for space in meta(molecule)["active_spaces"].as_array().unwrap() {
            out.push((
                molecule,
                usizes(&space["frozen_occupied"]),
                usizes(&space["removed_virtual"]),
                space.clone(),
            ));
        }
    }
    out
}

#[test]
fn encodings_match_reference_files() {
    for (molecule, frozen, removed, space) in active_spaces() {
        for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
            let ours = encoded(molecule, &frozen, &removed, enc);
            let name = reference_name(molecule, &frozen, &removed, enc);
            let text = fs::read_to_string(fixture(&name)).unwrap();
            let theirs = HamiltonianFile::parse(&text).unwrap().hamiltonian;
            assert_eq!(ours.n_qubits(), theirs.n_qubits(), "{name}");
            let key = if enc == Encoding::JordanWigner {
                "n_terms_jw"
            } else {
                "n_terms_bk"
            };
            assert_eq!(ours.len() as u64, space[key].as_u64().unwrap(), "{name}");
            let (a, b) = (ours.coefficient_map(), theirs.coefficient_map());
            assert_eq!(a.len(), b.len(), "{name}");
            for (p, c) in &a {
                let r = b.get(p).unwrap_or_else(|| panic!("{name}: {} missing", p.to_label()));
                assert!((c - r).abs() < 1e-12, "{name}: {} {c} vs {r}", p.to_label());
            }
        }
    }
}

#[test]
fn term_counts() {
    let counts: Vec<usize> = [(vec![0], vec![3, 4]), (vec![0], vec![1, 2]), (vec![0], vec![3])]
        .iter()
        .map(|(f, r)| encoded("lih_sto3g", f, r, Encoding::BravyiKitaev).len())
        .collect();
    assert_eq!(counts, vec![118, 34, 193]);
    let h8 = encoded("lih_sto3g", &[0], &[3], Encoding::BravyiKitaev);
    assert_eq!(stride_select(&h8, 20, 0).unwrap().len(), 10);
}

#[test]
fn encodings_are_isospectral() {
    for (molecule, frozen, removed, _) in active_spaces() {
        let jw = spectrum_of(&encoded(molecule, &frozen, &removed, Encoding::JordanWigner)).unwrap();
        let bk = spectrum_of(&encoded(molecule, &frozen, &removed, Encoding::BravyiKitaev)).unwrap();
        for (a, b) in jw.iter().zip(&bk) {
            assert!((a - b).abs() < 1e-10, "{molecule} {frozen:?} {removed:?}: {a} vs {b}");
        }
    }
}

#[test]
fn h2_ground_energy_is_fci() {
    let m = meta("h2_sto3g");
    let fci = m["fci_energy_ha"].as_f64().unwrap();
    for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
        let e = ground_state(&encoded("h2_sto3g", &[], &[], enc)).unwrap().ground_energy;
        assert!((e - fci).abs() < 1e-6, "{enc:?}: {e} vs {fci}");
    }
}

#[test]
fn active_space_energies_match_casci() {
    for (molecule, frozen, removed, space) in active_spaces() {
        let Some(casci) = space["casci_energy_ha"].as_f64() else {
            continue;
        };
        let qubit = space["qubit_ground_energy_ha"].as_f64().unwrap();
        let h = encoded(molecule, &frozen, &removed, Encoding::BravyiKitaev);
        let e = ground_state(&h).unwrap().ground_energy;
        assert!(
            (e - qubit).abs() < 1e-9,
            "{molecule} {frozen:?} {removed:?}: {e} vs {qubit}"
        );
        assert!(
            e <= casci + 1e-9,
            "{molecule} {frozen:?} {removed:?}: {e} above CASCI {casci}"
        );
    }
}

/// Freezing by projection: encode the full problem with Jordan–Wigner, pin
/// the frozen modes to occupied and the removed modes to empty, and
/// diagonalize what is left.
#[test]
fn freezing_equals_projection() {
    let full = encode(
        &build_fermion_hamiltonian(&integrals("lih_sto3g"), SpinOrder::Interleaved),
        Encoding::JordanWigner,
    )
    .unwrap();
    for (frozen, removed) in [(vec![0], vec![3, 4]), (vec![0], vec![1, 2])] {
        let mut fixed = BTreeMap::new();
        for &i in &frozen {
            fixed.insert(2 * i, true);
            fixed.insert(2 * i + 1, true);
        }
        for &i in &removed {
            fixed.insert(2 * i, false);
            fixed.insert(2 * i + 1, false);
        }
        let projected = projected_ground_state(&full, &fixed).unwrap();
        let active = ground_state(&encoded("lih_sto3g", &frozen, &removed, Encoding::JordanWigner))
            .unwrap()
            .ground_energy;
        assert!(
            (projected - active).abs() < 1e-9,
            "{frozen:?} {removed:?}: {projected} vs {active}"
        );
    }
}

#[test]
fn hartree_fock_energy_three_ways() {
    for molecule in ["h2_sto3g", "lih_sto3g"] {
        let ints = integrals(molecule);
        let m = meta(molecule);
        let reference = m["hf_energy_ha"].as_f64().unwrap();
        let ne = ints.n_electrons();
        let occupied: Vec<usize> = (0..ne).collect();
        let direct = determinant_energy(&ints, &occupied, SpinOrder::Interleaved);
        assert!((direct - reference).abs() < 1e-9, "{molecule}: {direct} vs {reference}");
        for enc in [Encoding::JordanWigner, Encoding::BravyiKitaev] {
            let h = encode(&build_fermion_hamiltonian(&ints, SpinOrder::Interleaved), enc).unwrap();
            let v = StateVector::basis(h.n_qubits(), hf_state(ne, enc, h.n_qubits()).unwrap()).unwrap();
            let e = expectation(&h, &v).unwrap();
            assert!((e - reference).abs() < 1e-9, "{molecule} {enc:?}: {e} vs {reference}");
        }
    }
}

#[test]
fn spin_orders_are_isospectral() {
    let ints = integrals("h2_sto3g");
    let a = spectrum_of(
        &encode(
            &build_fermion_hamiltonian(&ints, SpinOrder::Interleaved),
            Encoding::JordanWigner,
        )
        .unwrap(),
    )
    .unwrap();
    let b = spectrum_of(
        &encode(
            &build_fermion_hamiltonian(&ints, SpinOrder::Blocked),
            Encoding::JordanWigner,
        )
        .unwrap(),
    )
    .unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-10);
    }
}
