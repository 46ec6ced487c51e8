//! Second-quantized electronic Hamiltonians.
//!
//! Spatial integrals are lifted to spin orbitals, normal ordered and merged.
//! A normal-ordered term lists all creation operators before all
//! annihilation operators, each block with strictly decreasing mode index.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Merged fermionic coefficients smaller than this are dropped.
pub const FERMION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FermionError {
    #[error("{0} electrons do not fit in {1} spatial orbitals")]
    TooManyElectrons(usize, usize),
    #[error("orbital index {index} out of range ({limit} available)")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("orbital {0} is listed as both frozen and removed")]
    OverlappingFrozenSets(usize),
    #[error("term has an odd number ({0}) of ladder operators")]
    OddOperatorCount(usize),
    #[error("term with {creations} creations and {annihilations} annihilations does not conserve particle number")]
    NotParticleConserving { creations: usize, annihilations: usize },
    #[error("only 2- and 4-operator terms are classified, got {0}")]
    UnsupportedLength(usize),
    #[error("term is not normal ordered")]
    NotNormalOrdered,
    #[error("mode count {0} is not twice a spatial-orbital count")]
    OddModeCount(usize),
    #[error("unknown term class {0:?}")]
    UnknownClass(String),
}

/// One- and two-electron integrals over real spatial orbitals, in Hartree.
///
/// Two-electron integrals use chemist notation `(ij|kl)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionIntegrals {
    n_orbitals: usize,
    n_electrons: usize,
    ms2: i64,
    pub core_energy: f64,
    one_body: Vec<f64>,
    two_body: Vec<f64>,
}

impl FermionIntegrals {
    pub fn new(n_orbitals: usize, n_electrons: usize) -> Result<Self, FermionError> {
        if n_electrons > 2 * n_orbitals {
            return Err(FermionError::TooManyElectrons(n_electrons, n_orbitals));
        }
        Ok(Self {
            n_orbitals,
            n_electrons,
            ms2: 0,
            core_energy: 0.0,
            one_body: vec![0.0; n_orbitals * n_orbitals],
            two_body: vec![0.0; n_orbitals.pow(4)],
        })
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn ms2(&self) -> i64 {
        self.ms2
    }

    pub fn set_ms2(&mut self, ms2: i64) {
        self.ms2 = ms2;
    }

    fn check(&self, idx: &[usize]) -> Result<(), FermionError> {
        match idx.iter().find(|&&i| i >= self.n_orbitals) {
            Some(&i) => Err(FermionError::IndexOutOfRange {
                index: i,
                limit: self.n_orbitals,
            }),
            None => Ok(()),
        }
    }

    pub fn one_body(&self, i: usize, j: usize) -> f64 {
        self.one_body[i * self.n_orbitals + j]
    }

    pub fn two_body(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n_orbitals;
        self.two_body[((i * n + j) * n + k) * n + l]
    }

    /// Set `h_ij` and its symmetric partner.
    pub fn set_one_body(&mut self, i: usize, j: usize, v: f64) -> Result<(), FermionError> {
        self.check(&[i, j])?;
        let n = self.n_orbitals;
        self.one_body[i * n + j] = v;
        self.one_body[j * n + i] = v;
        Ok(())
    }

    /// Set `(ij|kl)` and all eight permutational partners.
    pub fn set_two_body(&mut self, i: usize, j: usize, k: usize, l: usize, v: f64) -> Result<(), FermionError> {
        self.check(&[i, j, k, l])?;
        let n = self.n_orbitals;
        for (a, b, c, d) in [
            (i, j, k, l),
            (j, i, k, l),
            (i, j, l, k),
            (j, i, l, k),
            (k, l, i, j),
            (l, k, i, j),
            (k, l, j, i),
            (l, k, j, i),
        ] {
            self.two_body[((a * n + b) * n + c) * n + d] = v;
        }
        Ok(())
    }
}

/// How spatial orbital `i` with spin `σ` maps to a spin-orbital mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinOrder {
    /// `2i + σ`
    #[default]
    Interleaved,
    /// `i + σ·n_orbitals`
    Blocked,
}

impl SpinOrder {
    pub fn mode(self, orbital: usize, spin: usize, n_orbitals: usize) -> usize {
        match self {
            SpinOrder::Interleaved => 2 * orbital + spin,
            SpinOrder::Blocked => orbital + spin * n_orbitals,
        }
    }
}

impl FromStr for SpinOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "interleaved" => Ok(SpinOrder::Interleaved),
            "blocked" => Ok(SpinOrder::Blocked),
            other => Err(format!("unknown spin order {other:?}")),
        }
    }
}

impl fmt::Display for SpinOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpinOrder::Interleaved => "interleaved",
            SpinOrder::Blocked => "blocked",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LadderOp {
    pub mode: usize,
    pub dagger: bool,
}

impl LadderOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }
}

impl fmt::Display for LadderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dagger {
            write!(f, "a+{}", self.mode)
        } else {
            write!(f, "a{}", self.mode)
        }
    }
}

/// `coeff · op_1 op_2 …`; an empty operator list is the constant term.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coeff: f64,
    pub ops: Vec<LadderOp>,
}

impl FermionTerm {
    pub fn is_constant(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn is_normal_ordered(&self) -> bool {
        let split = self.ops.iter().take_while(|o| o.dagger).count();
        let (c, a) = self.ops.split_at(split);
        a.iter().all(|o| !o.dagger)
            && c.windows(2).all(|w| w[0].mode > w[1].mode)
            && a.windows(2).all(|w| w[0].mode > w[1].mode)
    }

    /// Hermitian conjugate, normal ordered.
    pub fn adjoint(&self) -> FermionTerm {
        let ops: Vec<LadderOp> = self
            .ops
            .iter()
            .rev()
            .map(|o| LadderOp {
                mode: o.mode,
                dagger: !o.dagger,
            })
            .collect();
        let (sign, ops) = normal_order(&ops).expect("adjoint of a normal-ordered term is non-zero");
        FermionTerm {
            coeff: sign * self.coeff,
            ops,
        }
    }
}

impl fmt::Display for FermionTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.coeff)?;
        for o in &self.ops {
            write!(f, " {o}")?;
        }
        Ok(())
    }
}

/// Order a creation block followed by an annihilation block into strictly
/// decreasing modes within each block. Returns the permutation sign, or
/// `None` when a mode repeats within a block (the product vanishes).
fn normal_order(ops: &[LadderOp]) -> Option<(f64, Vec<LadderOp>)> {
    let split = ops.iter().take_while(|o| o.dagger).count();
    debug_assert!(ops[split..].iter().all(|o| !o.dagger));
    let mut out = ops.to_vec();
    let mut sign = 1.0;
    let (creations, annihilations) = out.split_at_mut(split);
    for block in [creations, annihilations] {
        // insertion sort, counting transpositions
        for i in 1..block.len() {
            let mut j = i;
            while j > 0 && block[j - 1].mode < block[j].mode {
                block.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
            if j > 0 && block[j - 1].mode == block[j].mode {
                return None;
            }
        }
        if block.windows(2).any(|w| w[0].mode == w[1].mode) {
            return None;
        }
    }
    Some((sign, out))
}

/// Physical class of a particle-conserving term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TermClass {
    Number,
    CoulombExchange,
    Excitation,
    NumberExcitation,
    DoubleExcitation,
}

impl TermClass {
    /// Batch order used by class-batched schedules.
    pub const ALL: [TermClass; 5] = [
        TermClass::Number,
        TermClass::CoulombExchange,
        TermClass::Excitation,
        TermClass::NumberExcitation,
        TermClass::DoubleExcitation,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            TermClass::Number => "number",
            TermClass::CoulombExchange => "coulomb_exchange",
            TermClass::Excitation => "excitation",
            TermClass::NumberExcitation => "number_excitation",
            TermClass::DoubleExcitation => "double_excitation",
        }
    }
}

impl fmt::Display for TermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TermClass {
    type Err = FermionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TermClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| FermionError::UnknownClass(s.to_string()))
    }
}

/// Classify a normal-ordered 2- or 4-operator term.
pub fn classify_term(term: &FermionTerm) -> Result<TermClass, FermionError> {
    let n = term.ops.len();
    if n % 2 == 1 {
        return Err(FermionError::OddOperatorCount(n));
    }
    let creations = term.ops.iter().filter(|o| o.dagger).count();
    if creations != n - creations {
        return Err(FermionError::NotParticleConserving {
            creations,
            annihilations: n - creations,
        });
    }
    if !term.is_normal_ordered() {
        return Err(FermionError::NotNormalOrdered);
    }
    let (c, a) = term.ops.split_at(creations);
    match n {
        2 if c[0].mode == a[0].mode => Ok(TermClass::Number),
        2 => Ok(TermClass::Excitation),
        4 => {
            let shared = c.iter().filter(|x| a.iter().any(|y| y.mode == x.mode)).count();
            Ok(match shared {
                2 => TermClass::CoulombExchange,
                1 => TermClass::NumberExcitation,
                _ => TermClass::DoubleExcitation,
            })
        }
        other => Err(FermionError::UnsupportedLength(other)),
    }
}

/// Sum of normal-ordered fermionic terms over `n_modes` spin orbitals.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperatorSum {
    n_modes: usize,
    terms: Vec<FermionTerm>,
}

/// Accumulates normal-ordered products, merging repeats in first-seen order.
#[derive(Default)]
struct TermAccumulator {
    index: HashMap<Vec<LadderOp>, usize>,
    terms: Vec<FermionTerm>,
}

impl TermAccumulator {
    fn add(&mut self, coeff: f64, ops: &[LadderOp]) {
        if coeff == 0.0 {
            return;
        }
        let Some((sign, ops)) = normal_order(ops) else {
            return;
        };
        match self.index.get(&ops) {
            Some(&k) => self.terms[k].coeff += sign * coeff,
            None => {
                self.index.insert(ops.clone(), self.terms.len());
                self.terms.push(FermionTerm {
                    coeff: sign * coeff,
                    ops,
                });
            }
        }
    }

    fn finish(mut self, n_modes: usize) -> FermionOperatorSum {
        self.terms.retain(|t| t.coeff.abs() >= FERMION_TOLERANCE);
        FermionOperatorSum {
            n_modes,
            terms: self.terms,
        }
    }
}

impl FermionOperatorSum {
    /// Build from arbitrary creation-then-annihilation products; each is
    /// normal ordered and repeats are merged.
    pub fn from_terms<I>(n_modes: usize, terms: I) -> Result<Self, FermionError>
    where
        I: IntoIterator<Item = FermionTerm>,
    {
        let mut acc = TermAccumulator::default();
        for t in terms {
            if let Some(o) = t.ops.iter().find(|o| o.mode >= n_modes) {
                return Err(FermionError::IndexOutOfRange {
                    index: o.mode,
                    limit: n_modes,
                });
            }
            let split = t.ops.iter().take_while(|o| o.dagger).count();
            if t.ops[split..].iter().any(|o| o.dagger) {
                return Err(FermionError::NotNormalOrdered);
            }
            acc.add(t.coeff, &t.ops);
        }
        Ok(acc.finish(n_modes))
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn constant(&self) -> f64 {
        self.terms.iter().filter(|t| t.is_constant()).map(|t| t.coeff).sum()
    }

    /// True when every term's adjoint is present with equal coefficient.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let map: HashMap<&[LadderOp], f64> = self.terms.iter().map(|t| (t.ops.as_slice(), t.coeff)).collect();
        self.terms.iter().all(|t| {
            let adj = t.adjoint();
            map.get(adj.ops.as_slice())
                .is_some_and(|&c| (c - adj.coeff).abs() <= tol)
        })
    }

    /// Project onto occupied `occupied` modes and empty `removed` modes,
    /// then renumber the remaining modes densely in their original order.
    pub fn freeze_modes(&self, occupied: &[usize], removed: &[usize]) -> Result<Self, FermionError> {
        let n = self.n_modes;
        for &m in occupied.iter().chain(removed) {
            if m >= n {
                return Err(FermionError::IndexOutOfRange { index: m, limit: n });
            }
        }
        if let Some(&m) = occupied.iter().find(|m| removed.contains(m)) {
            return Err(FermionError::OverlappingFrozenSets(m));
        }
        let mut new_index = vec![None; n];
        let mut next = 0;
        for (m, slot) in new_index.iter_mut().enumerate() {
            if !occupied.contains(&m) && !removed.contains(&m) {
                *slot = Some(next);
                next += 1;
            }
        }

        let mut acc = TermAccumulator::default();
        'terms: for t in &self.terms {
            if t.ops.iter().any(|o| removed.contains(&o.mode)) {
                continue;
            }
            let split = t.ops.iter().take_while(|o| o.dagger).count();
            let mut sign = 1.0;
            let mut creations: Vec<LadderOp> = t.ops[..split].to_vec();
            let mut annihilations: Vec<LadderOp> = t.ops[split..].to_vec();
            for &f in occupied {
                let c = creations.iter().position(|o| o.mode == f);
                let a = annihilations.iter().position(|o| o.mode == f);
                match (c, a) {
                    (None, None) => {}
                    (Some(ci), Some(ai)) => {
                        // move a+_f to the end of the creation block and a_f to
                        // the front of the annihilation block; n_f -> 1
                        let hops = (creations.len() - 1 - ci) + ai;
                        if hops % 2 == 1 {
                            sign = -sign;
                        }
                        creations.remove(ci);
                        annihilations.remove(ai);
                    }
                    // changes the occupation of a frozen mode
                    _ => continue 'terms,
                }
            }
            let ops: Vec<LadderOp> = creations
                .into_iter()
                .chain(annihilations)
                .map(|o| LadderOp {
                    mode: new_index[o.mode].expect("frozen modes removed above"),
                    dagger: o.dagger,
                })
                .collect();
            acc.add(sign * t.coeff, &ops);
        }
        Ok(acc.finish(next))
    }

    /// Spatial-orbital version of [`freeze_modes`](Self::freeze_modes):
    /// each listed orbital is expanded to both spin modes.
    pub fn freeze_orbitals(
        &self,
        frozen_occupied: &[usize],
        removed_virtual: &[usize],
        spin_order: SpinOrder,
    ) -> Result<Self, FermionError> {
        if self.n_modes % 2 != 0 {
            return Err(FermionError::OddModeCount(self.n_modes));
        }
        let n_orb = self.n_modes / 2;
        if let Some(&i) = frozen_occupied.iter().find(|i| removed_virtual.contains(i)) {
            return Err(FermionError::OverlappingFrozenSets(i));
        }
        let expand = |orbs: &[usize]| -> Result<Vec<usize>, FermionError> {
            let mut out = Vec::with_capacity(2 * orbs.len());
            for &i in orbs {
                if i >= n_orb {
                    return Err(FermionError::IndexOutOfRange { index: i, limit: n_orb });
                }
                out.push(spin_order.mode(i, 0, n_orb));
                out.push(spin_order.mode(i, 1, n_orb));
            }
            Ok(out)
        };
        self.freeze_modes(&expand(frozen_occupied)?, &expand(removed_virtual)?)
    }
}

/// `H = E_core + Σ h_ij a+_i a_j + ½ Σ (ij|kl) a+_iσ a+_kτ a_lτ a_jσ` over
/// spin orbitals.
pub fn build_fermion_hamiltonian(ints: &FermionIntegrals, spin_order: SpinOrder) -> FermionOperatorSum {
    let n = ints.n_orbitals();
    let mode = |i: usize, s: usize| spin_order.mode(i, s, n);
    let mut acc = TermAccumulator::default();
    acc.add(ints.core_energy, &[]);
    for i in 0..n {
        for j in 0..n {
            let h = ints.one_body(i, j);
            for s in 0..2 {
                acc.add(h, &[LadderOp::create(mode(i, s)), LadderOp::annihilate(mode(j, s))]);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let v = 0.5 * ints.two_body(p, q, r, s);
                    if v == 0.0 {
                        continue;
                    }
                    for sigma in 0..2 {
                        for tau in 0..2 {
                            acc.add(
                                v,
                                &[
                                    LadderOp::create(mode(p, sigma)),
                                    LadderOp::create(mode(r, tau)),
                                    LadderOp::annihilate(mode(s, tau)),
                                    LadderOp::annihilate(mode(q, sigma)),
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    acc.finish(2 * n)
}

/// Hartree–Fock energy of a closed or open shell determinant, from the
/// integrals directly. `occupied` lists spin-orbital modes.
pub fn determinant_energy(ints: &FermionIntegrals, occupied: &[usize], spin_order: SpinOrder) -> f64 {
    let n = ints.n_orbitals();
    let split = |m: usize| match spin_order {
        SpinOrder::Interleaved => (m / 2, m % 2),
        SpinOrder::Blocked => (m % n, m / n),
    };
    let mut e = ints.core_energy;
    for &p in occupied {
        let (i, _) = split(p);
        e += ints.one_body(i, i);
    }
    for &p in occupied {
        for &q in occupied {
            let ((i, si), (j, sj)) = (split(p), split(q));
            e += 0.5 * ints.two_body(i, i, j, j);
            if si == sj {
                e -= 0.5 * ints.two_body(i, j, j, i);
            }
        }
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(coeff: f64, ops: &[(usize, bool)]) -> FermionTerm {
        FermionTerm {
            coeff,
            ops: ops.iter().map(|&(mode, dagger)| LadderOp { mode, dagger }).collect(),
        }
    }

    #[test]
    fn one_orbital_one_body_lift() {
        let mut ints = FermionIntegrals::new(1, 0).unwrap();
        ints.set_one_body(0, 0, -1.0).unwrap();
        ints.core_energy = 0.25;
        let op = build_fermion_hamiltonian(&ints, SpinOrder::Interleaved);
        assert_eq!(op.n_modes(), 2);
        assert_eq!(op.constant(), 0.25);
        let number: Vec<_> = op.terms().iter().filter(|t| !t.is_constant()).collect();
        assert_eq!(number.len(), 2);
        assert_eq!(*number[0], term(-1.0, &[(0, true), (0, false)]));
        assert_eq!(*number[1], term(-1.0, &[(1, true), (1, false)]));
    }

    #[test]
    fn normal_order_signs() {
        let ops = [
            LadderOp::create(1),
            LadderOp::create(3),
            LadderOp::annihilate(0),
            LadderOp::annihilate(2),
        ];
        let (s, o) = normal_order(&ops).unwrap();
        assert_eq!(s, 1.0);
        assert_eq!(o[0].mode, 3);
        assert_eq!(o[2].mode, 2);
        let (s, _) = normal_order(&ops[..3]).unwrap();
        assert_eq!(s, -1.0);
        assert!(normal_order(&[LadderOp::create(2), LadderOp::create(2)]).is_none());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_term(&term(1.0, &[(0, true), (0, false)])).unwrap(),
            TermClass::Number
        );
        assert_eq!(
            classify_term(&term(1.0, &[(2, true), (0, false)])).unwrap(),
            TermClass::Excitation
        );
        assert_eq!(
            classify_term(&term(1.0, &[(3, true), (2, true), (3, false), (2, false)])).unwrap(),
            TermClass::CoulombExchange
        );
        assert_eq!(
            classify_term(&term(1.0, &[(3, true), (2, true), (2, false), (0, false)])).unwrap(),
            TermClass::NumberExcitation
        );
        assert_eq!(
            classify_term(&term(1.0, &[(3, true), (2, true), (1, false), (0, false)])).unwrap(),
            TermClass::DoubleExcitation
        );
    }

    #[test]
    fn classification_errors() {
        assert_eq!(
            classify_term(&term(1.0, &[(0, true)])),
            Err(FermionError::OddOperatorCount(1))
        );
        assert!(matches!(
            classify_term(&term(1.0, &[(1, true), (0, true)])),
            Err(FermionError::NotParticleConserving { .. })
        ));
    }

    #[test]
    fn two_body_hermitian_and_symmetric() {
        let mut ints = FermionIntegrals::new(2, 2).unwrap();
        ints.set_one_body(0, 1, 0.3).unwrap();
        ints.set_two_body(0, 1, 1, 0, 0.2).unwrap();
        ints.set_two_body(0, 0, 1, 1, 0.7).unwrap();
        ints.set_two_body(0, 1, 0, 0, 0.05).unwrap();
        assert_eq!(ints.two_body(1, 0, 0, 1), 0.2);
        assert_eq!(ints.two_body(1, 1, 0, 0), 0.7);
        for order in [SpinOrder::Interleaved, SpinOrder::Blocked] {
            let op = build_fermion_hamiltonian(&ints, order);
            assert!(op.terms().iter().all(|t| t.is_normal_ordered()));
            assert!(op.is_hermitian(1e-14));
        }
    }

    #[test]
    fn freeze_nothing_is_identity() {
        let mut ints = FermionIntegrals::new(2, 2).unwrap();
        ints.set_one_body(0, 1, 0.3).unwrap();
        ints.set_two_body(0, 1, 1, 0, 0.2).unwrap();
        let op = build_fermion_hamiltonian(&ints, SpinOrder::Interleaved);
        assert_eq!(op.freeze_modes(&[], &[]).unwrap(), op);
    }

    #[test]
    fn freeze_folds_number_operator() {
        // 2 a+1 a1 + 3 a+1 a+0 a0 a1 (= 3 n1 n0), freeze mode 1 occupied
        let op = FermionOperatorSum::from_terms(
            2,
            [
                term(2.0, &[(1, true), (1, false)]),
                term(3.0, &[(1, true), (0, true), (0, false), (1, false)]),
            ],
        )
        .unwrap();
        let frozen = op.freeze_modes(&[1], &[]).unwrap();
        assert_eq!(frozen.n_modes(), 1);
        assert_eq!(frozen.constant(), 2.0);
        let rest: Vec<_> = frozen.terms().iter().filter(|t| !t.is_constant()).collect();
        assert_eq!(*rest[0], term(3.0, &[(0, true), (0, false)]));
    }

    #[test]
    fn freeze_removes_virtual_terms() {
        let op = FermionOperatorSum::from_terms(
            3,
            [
                term(1.0, &[(2, true), (0, false)]),
                term(1.0, &[(0, true), (2, false)]),
                term(0.5, &[(1, true), (1, false)]),
            ],
        )
        .unwrap();
        let r = op.freeze_modes(&[], &[2]).unwrap();
        assert_eq!(r.terms(), &[term(0.5, &[(1, true), (1, false)])]);
    }

    #[test]
    fn freeze_errors() {
        let op = FermionOperatorSum::from_terms(4, []).unwrap();
        assert_eq!(op.freeze_modes(&[1], &[1]), Err(FermionError::OverlappingFrozenSets(1)));
        assert!(matches!(
            op.freeze_modes(&[7], &[]),
            Err(FermionError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            op.freeze_orbitals(&[2], &[], SpinOrder::Interleaved),
            Err(FermionError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn too_many_electrons_rejected() {
        assert!(FermionIntegrals::new(1, 3).is_err());
    }

    #[test]
    fn class_names_round_trip() {
        for c in TermClass::ALL {
            assert_eq!(c.name().parse::<TermClass>().unwrap(), c);
        }
    }
}
