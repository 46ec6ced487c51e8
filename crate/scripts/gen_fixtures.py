#!/usr/bin/env python3
"""Regenerate the bundled FCIDUMP fixtures and their reference metadata.

Requires PySCF and OpenFermion. The Rust code never calls this script; it
only reads the files it writes. Term counts and qubit-space ground energies
in the metadata are computed by OpenFermion from the FCIDUMP as written, so
they serve as independent reference values for the Rust encoders.
Run from the repository root:

    python3 scripts/gen_fixtures.py
"""
import json
import pathlib

import numpy as np
import pyscf
from pyscf import gto, scf, fci, mcscf, ao2mo
from pyscf.tools import fcidump
import openfermion as of
from openfermion.ops.representations import (
    get_active_space_integrals,
    get_tensors_from_integrals,
)

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"

MOLECULES = {
    "h2_sto3g": dict(atom="H 0 0 0; H 0 0 0.7414", basis="sto-3g"),
    "lih_sto3g": dict(atom="Li 0 0 0; H 0 0 1.595", basis="sto-3g"),
}

# (frozen occupied, removed virtual) spatial-orbital sets for which a
# reference CASCI energy is recorded.
ACTIVE_SPACES = {
    "lih_sto3g": [([0], [3, 4]), ([0], [1, 2]), ([0], [3]), ([0], [4])],
    "h2_sto3g": [([], [])],
}


def casci_energy(mf, frozen, removed):
    norb = mf.mo_coeff.shape[1]
    if not frozen and not removed:
        return float(fci.FCI(mf).kernel()[0]), list(range(norb)), mf.mol.nelectron
    active = [i for i in range(norb) if i not in frozen and i not in removed]
    nelec = mf.mol.nelectron - 2 * len(frozen)
    # plain CASCI: the symmetry-adapted variant refuses to split the pi pair
    mc = mcscf.casci.CASCI(mf, len(active), nelec)
    mo = mc.sort_mo([i + 1 for i in active], mf.mo_coeff)
    # sort_mo fills core from the lowest remaining orbitals, so `frozen` must
    # be exactly those
    mc.verbose = 0
    e = mc.kernel(mo)[0]
    return float(e), active, nelec


def write_reference(path, qubit_op, n_qubits, header):
    lines = [f"# qubits: {n_qubits}"] + [f"# {h}" for h in header]
    rows = []
    for term, coeff in qubit_op.terms.items():
        label = ["I"] * n_qubits
        for q, p in term:
            label[q] = p
        assert abs(coeff.imag) < 1e-10
        rows.append((float(coeff.real), "".join(label)))
    rows.sort(key=lambda r: r[1])
    lines += [f"{c:+.15f} {l}" for c, l in rows]
    path.write_text("\n".join(lines) + "\n")


def openfermion_reference(path, frozen, removed, tag=None):
    """Encode the FCIDUMP at `path` with OpenFermion; return per-encoding
    term counts and the lowest eigenvalue over the whole Fock space."""
    data = fcidump.read(str(path))
    norb = data["NORB"]
    h1 = np.asarray(data["H1"]).reshape(norb, norb)
    eri = ao2mo.restore(1, data["H2"], norb)
    # OpenFermion wants h_pqrs = (ps|qr)
    tb = eri.transpose(0, 2, 3, 1)
    active = [i for i in range(norb) if i not in frozen and i not in removed]
    core, h1a, tba = get_active_space_integrals(h1, tb, frozen, active)
    one, two = get_tensors_from_integrals(h1a, tba)
    op = of.get_fermion_operator(of.InteractionOperator(core + data["ECORE"], one, two))
    out = {}
    for name, enc in (("jw", of.jordan_wigner), ("bk", of.bravyi_kitaev)):
        q = enc(op)
        q.compress(1e-12)
        out[f"n_terms_{name}"] = len(q.terms)
        if tag is not None:
            ref = OUT / "reference" / f"{tag}_{name}.ham"
            write_reference(
                ref,
                q,
                2 * len(active),
                [
                    "source: openfermion " + of.__version__,
                    f"encoding: {name}",
                    f"frozen_occupied: {frozen}",
                    f"removed_virtual: {removed}",
                ],
            )
        if name == "jw":
            out["qubit_ground_energy_ha"] = float(
                of.get_ground_state(of.get_sparse_operator(q))[0]
            )
    out["n_qubits"] = 2 * len(active)
    return out


def main():
    (OUT / "reference").mkdir(parents=True, exist_ok=True)
    for name, spec in MOLECULES.items():
        mol = gto.M(unit="Angstrom", symmetry=True, verbose=0, **spec)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        fcidump.from_scf(mf, str(OUT / f"{name}.fcidump"), tol=1e-15)
        cis = fci.FCI(mf)
        cis.conv_tol = 1e-12
        e_fci = float(cis.kernel()[0])
        meta = {
            "molecule": name,
            "atom": spec["atom"],
            "basis": spec["basis"],
            "unit": "Angstrom",
            "generator": f"pyscf {pyscf.__version__}",
            "n_spatial_orbitals": int(mf.mo_coeff.shape[1]),
            "n_electrons": int(mol.nelectron),
            "hf_energy_ha": float(mf.e_tot),
            "fci_energy_ha": e_fci,
            "nuclear_repulsion_ha": float(mol.energy_nuc()),
            "active_spaces": [],
        }
        for frozen, removed in ACTIVE_SPACES.get(name, []):
            e, active, nelec = casci_energy(mf, frozen, removed)
            tag = name + "".join(f"_f{i}" for i in frozen) + "".join(f"_r{i}" for i in removed)
            ref = openfermion_reference(OUT / f"{name}.fcidump", frozen, removed, tag)
            meta["active_spaces"].append(
                {
                    **ref,
                    "frozen_occupied": frozen,
                    "removed_virtual": removed,
                    "active": active,
                    "n_active_electrons": nelec,
                    "casci_energy_ha": e,
                }
            )
        (OUT / f"{name}.json").write_text(json.dumps(meta, indent=2) + "\n")
        print(name, meta["fci_energy_ha"], meta["hf_energy_ha"])


if __name__ == "__main__":
    main()
