//! Hot-Start: minimize over growing prefixes of a magnitude-sorted
//! Hamiltonian, each stage starting from the previous stage's angles.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ground_state, ExactError};
use crate::fermion::TermClass;
use crate::hamiltonian::QubitHamiltonian;
use crate::optimizer::{
    minimize_with_hessian, random_initial_angles, ObjectiveFunction, OptimizationTrace, OptimizerConfig,
    OptimizerError, Status, VqeObjective,
};
use crate::statevector::{AnsatzCircuit, Objective, ParameterVector, SimError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HotStartError {
    #[error("term {index} ({label}) has no operator-class provenance")]
    MissingClass { index: usize, label: String },
    #[error("invalid stage boundaries: {0}")]
    InvalidSchedule(String),
    #[error("Hamiltonian has no terms")]
    EmptyHamiltonian,
    #[error("stride must be positive")]
    ZeroStride,
    #[error(transparent)]
    Optimizer(#[from] OptimizerError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingStrategy {
    /// Largest `|h_k|` first; ties by Pauli label.
    Descending,
    /// Exact reverse of `Descending`.
    Ascending,
    /// Seeded shuffle of the descending order.
    Random(u64),
    /// Terms as stored.
    FileOrder,
    /// Grouped by operator class, descending within each class.
    ClassBatched,
}

impl fmt::Display for OrderingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingStrategy::Descending => f.write_str("descending"),
            OrderingStrategy::Ascending => f.write_str("ascending"),
            OrderingStrategy::Random(s) => write!(f, "random:{s}"),
            OrderingStrategy::FileOrder => f.write_str("file_order"),
            OrderingStrategy::ClassBatched => f.write_str("class_batched"),
        }
    }
}

impl FromStr for OrderingStrategy {
    type Err = String;

    /// `random` alone means seed 0; `random:<seed>` picks a seed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase().replace('-', "_");
        if let Some(seed) = lower.strip_prefix("random:") {
            return seed
                .parse()
                .map(OrderingStrategy::Random)
                .map_err(|_| format!("invalid random seed {seed:?}"));
        }
        match lower.as_str() {
            "descending" => Ok(OrderingStrategy::Descending),
            "ascending" => Ok(OrderingStrategy::Ascending),
            "random" => Ok(OrderingStrategy::Random(0)),
            "file_order" | "file" => Ok(OrderingStrategy::FileOrder),
            "class_batched" | "class" => Ok(OrderingStrategy::ClassBatched),
            other => Err(format!("unknown ordering {other:?}")),
        }
    }
}

fn descending_order(h: &QubitHamiltonian) -> Vec<usize> {
    let t = h.terms();
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&a, &b| {
        t[b].coeff
            .abs()
            .total_cmp(&t[a].coeff.abs())
            .then_with(|| t[a].pauli.cmp(&t[b].pauli))
    });
    order
}

fn require_classes(h: &QubitHamiltonian) -> Result<Vec<TermClass>, HotStartError> {
    h.terms()
        .iter()
        .enumerate()
        .map(|(index, t)| {
            t.class.ok_or_else(|| HotStartError::MissingClass {
                index,
                label: t.pauli.to_label(),
            })
        })
        .collect()
}

/// Permute the terms of `h` according to `ordering`.
pub fn sort_terms(h: &QubitHamiltonian, ordering: OrderingStrategy) -> Result<QubitHamiltonian, HotStartError> {
    let order = match ordering {
        OrderingStrategy::Descending => descending_order(h),
        OrderingStrategy::Ascending => {
            let mut o = descending_order(h);
            o.reverse();
            o
        }
        OrderingStrategy::Random(seed) => {
            let mut o = descending_order(h);
            o.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            o
        }
        OrderingStrategy::FileOrder => (0..h.len()).collect(),
        OrderingStrategy::ClassBatched => {
            let classes = require_classes(h)?;
            let mut o = descending_order(h);
            // stable: keeps descending order inside each class
            o.sort_by_key(|&k| classes[k].index());
            o
        }
    };
    Ok(h.select(&order))
}

/// Cumulative stage boundaries of the class-batched ordering of `h`:
/// Number, CoulombExchange, Excitation, NumberExcitation, DoubleExcitation,
/// skipping empty classes.
pub fn class_batches(h: &QubitHamiltonian) -> Result<Vec<usize>, HotStartError> {
    let classes = require_classes(h)?;
    let mut counts = [0usize; 5];
    for c in classes {
        counts[c.index()] += 1;
    }
    let mut total = 0;
    Ok(counts
        .iter()
        .filter(|&&n| n > 0)
        .map(|n| {
            total += n;
            total
        })
        .collect())
}

/// Every `stride`-th term of the descending order, starting at rank `base`.
/// The result stays in descending order.
pub fn stride_select(h: &QubitHamiltonian, stride: usize, base: usize) -> Result<QubitHamiltonian, HotStartError> {
    if stride == 0 {
        return Err(HotStartError::ZeroStride);
    }
    let picked: Vec<usize> = descending_order(h).into_iter().skip(base).step_by(stride).collect();
    Ok(h.select(&picked))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Batching {
    /// One term per stage.
    PerTerm,
    /// Stages of a fixed number of terms (the last may be shorter).
    Blocks(usize),
    /// A single stage over the whole Hamiltonian: plain VQE.
    Single,
    /// One stage per operator class; requires class-batched ordering.
    ClassBatches,
}

impl fmt::Display for Batching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Batching::PerTerm => f.write_str("per_term"),
            Batching::Blocks(k) => write!(f, "blocks:{k}"),
            Batching::Single => f.write_str("single"),
            Batching::ClassBatches => f.write_str("class"),
        }
    }
}

impl FromStr for Batching {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.trim().to_ascii_lowercase().replace('-', "_");
        if let Some(k) = lower.strip_prefix("blocks:") {
            return match k.parse() {
                Ok(0) | Err(_) => Err(format!("invalid block size {k:?}")),
                Ok(k) => Ok(Batching::Blocks(k)),
            };
        }
        match lower.as_str() {
            "per_term" | "term" => Ok(Batching::PerTerm),
            "single" => Ok(Batching::Single),
            "class" | "class_batches" => Ok(Batching::ClassBatches),
            other => Err(format!("unknown batching {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HotStartSchedule {
    pub ordering: OrderingStrategy,
    /// Strictly increasing prefix sizes ending at the term count.
    pub boundaries: Vec<usize>,
    /// Reuse the inverse-Hessian estimate across stages.
    pub carry_hessian: bool,
}

impl HotStartSchedule {
    pub fn build(
        h: &QubitHamiltonian,
        ordering: OrderingStrategy,
        batching: Batching,
        carry_hessian: bool,
    ) -> Result<Self, HotStartError> {
        let n = h.len();
        if n == 0 {
            return Err(HotStartError::EmptyHamiltonian);
        }
        let boundaries = match batching {
            Batching::PerTerm => (1..=n).collect(),
            Batching::Blocks(0) => return Err(HotStartError::InvalidSchedule("block size 0".into())),
            Batching::Blocks(k) => {
                let mut b: Vec<usize> = (k..n).step_by(k).collect();
                b.push(n);
                b
            }
            Batching::Single => vec![n],
            Batching::ClassBatches => {
                if ordering != OrderingStrategy::ClassBatched {
                    return Err(HotStartError::InvalidSchedule(
                        "class batches need the class_batched ordering".into(),
                    ));
                }
                class_batches(h)?
            }
        };
        Ok(Self {
            ordering,
            boundaries,
            carry_hessian,
        })
    }

    pub fn validate(&self, n_terms: usize) -> Result<(), HotStartError> {
        if n_terms == 0 {
            return Err(HotStartError::EmptyHamiltonian);
        }
        if self.boundaries.last() != Some(&n_terms) {
            return Err(HotStartError::InvalidSchedule(format!(
                "last boundary must be {n_terms}, got {:?}",
                self.boundaries.last()
            )));
        }
        if self.boundaries[0] == 0 || self.boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(HotStartError::InvalidSchedule(
                "boundaries must be positive and strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    /// 1-based.
    pub stage: usize,
    pub prefix_size: usize,
    /// Prefix energy at the stage's starting angles.
    pub initial_energy_prefix: f64,
    pub energy_prefix: f64,
    pub energy_full: f64,
    /// Cumulative optimization evaluations, excluding full-H reporting.
    pub calls: usize,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HotStartResult {
    pub final_angles: ParameterVector,
    pub final_energy: f64,
    pub stages: Vec<StageRecord>,
    pub traces: Vec<OptimizationTrace>,
    pub total_calls: usize,
}

/// Run the Hot-Start chain described by `schedule`.
pub fn hot_start(
    h: &QubitHamiltonian,
    circuit: &AnsatzCircuit,
    schedule: &HotStartSchedule,
    theta0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<HotStartResult, HotStartError> {
    cfg.validate()?;
    schedule.validate(h.len())?;
    if theta0.len() != circuit.parameter_count() {
        return Err(SimError::ParameterCount {
            expected: circuit.parameter_count(),
            found: theta0.len(),
        }
        .into());
    }
    let sorted = sort_terms(h, schedule.ordering)?;
    let full = Objective::new(circuit, h)?;
    let mut theta = theta0.to_vec();
    let mut hessian: Option<DMatrix<f64>> = None;
    let mut calls = 0;
    let mut stages = Vec::with_capacity(schedule.boundaries.len());
    let mut traces = Vec::with_capacity(schedule.boundaries.len());

    for (k, &size) in schedule.boundaries.iter().enumerate() {
        let prefix = sorted.prefix(size);
        let f = VqeObjective::new(circuit, &prefix, cfg.gradient)?;
        let carried = if schedule.carry_hessian { hessian.take() } else { None };
        let (status, trace, energy_prefix, initial) = match minimize_with_hessian(&f, &theta, cfg, carried) {
            Ok(r) => {
                let initial = r.trace.records[0].energy;
                theta = r.x;
                hessian = Some(r.inverse_hessian);
                (r.trace.status, r.trace, r.energy, initial)
            }
            Err(OptimizerError::NonFiniteStart) => {
                // keep the chain going from the current angles
                let e = f.value(&theta);
                let trace = OptimizationTrace {
                    records: Vec::new(),
                    status: Status::LineSearchFailure,
                };
                (Status::LineSearchFailure, trace, e, e)
            }
            Err(e) => return Err(e.into()),
        };
        calls += f.evaluations();
        stages.push(StageRecord {
            stage: k + 1,
            prefix_size: size,
            initial_energy_prefix: initial,
            energy_prefix,
            energy_full: full.value(&theta),
            calls,
            status,
        });
        traces.push(trace);
    }

    let final_energy = stages.last().map_or(f64::NAN, |s| s.energy_full);
    Ok(HotStartResult {
        final_angles: theta,
        final_energy,
        stages,
        traces,
        total_calls: calls,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingRow {
    pub strategy: OrderingStrategy,
    pub seed: u64,
    pub final_energy: f64,
    /// `final_energy − exact ground energy`.
    pub error: f64,
    pub calls: usize,
}

/// Hot-Start every `(strategy, seed)` cell in parallel. Each seed fixes the
/// starting angles shared by all strategies.
pub fn compare_orderings(
    h: &QubitHamiltonian,
    circuit: &AnsatzCircuit,
    strategies: &[OrderingStrategy],
    seeds: &[u64],
    batching: Batching,
    cfg: &OptimizerConfig,
) -> Result<Vec<OrderingRow>, HotStartError> {
    let exact = ground_state(h)?.ground_energy;
    let cells: Vec<(OrderingStrategy, u64)> = strategies
        .iter()
        .flat_map(|&s| seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    cells
        .into_par_iter()
        .map(|(strategy, seed)| {
            let schedule = HotStartSchedule::build(h, strategy, batching, false)?;
            let theta0 = random_initial_angles(circuit.parameter_count(), seed);
            let r = hot_start(h, circuit, &schedule, &theta0, cfg)?;
            Ok(OrderingRow {
                strategy,
                seed,
                final_energy: r.final_energy,
                error: r.final_energy - exact,
                calls: r.total_calls,
            })
        })
        .collect()
}
