//! Full-memory BFGS with a strong-Wolfe line search.
//!
//! The line search follows the bracketing/zoom scheme of Nocedal & Wright
//! (Algorithms 3.5 and 3.6). Gradients are requested only for trial points
//! that already satisfy sufficient decrease, since each gradient costs
//! `O(D)` objective evaluations.

use std::f64::consts::TAU;
use std::fmt;

use log::debug;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gradients::{gradient_unchecked, GradientError, GradientSpec};
use crate::hamiltonian::QubitHamiltonian;
use crate::statevector::{AnsatzCircuit, Objective, ParameterVector, SimError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("starting point has {expected} parameters expected, {found} given")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("objective or gradient is not finite at the starting point")]
    NonFiniteStart,
    #[error("initial inverse Hessian must be {0}x{0}")]
    HessianShape(usize),
    #[error(transparent)]
    Gradient(#[from] GradientError),
    #[error(transparent)]
    Simulation(#[from] SimError),
}

/// A differentiable objective with an evaluation counter.
pub trait ObjectiveFunction {
    fn dimension(&self) -> usize;
    fn value(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> Vec<f64>;
    /// Objective evaluations performed so far, gradients included.
    fn evaluations(&self) -> usize;
}

/// VQE energy with gradients from [`GradientSpec`].
#[derive(Debug)]
pub struct VqeObjective {
    objective: Objective,
    spec: GradientSpec,
}

impl VqeObjective {
    pub fn new(circuit: &AnsatzCircuit, h: &QubitHamiltonian, spec: GradientSpec) -> Result<Self, OptimizerError> {
        spec.validate()?;
        Ok(Self {
            objective: Objective::new(circuit, h)?,
            spec,
        })
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }
}

impl ObjectiveFunction for VqeObjective {
    fn dimension(&self) -> usize {
        self.objective.parameter_count()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.objective.value(x)
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        gradient_unchecked(|t| self.objective.value(t), x, &self.spec)
    }

    fn evaluations(&self) -> usize {
        self.objective.calls()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub max_iterations: usize,
    /// Stop when `‖g‖∞` falls to this value.
    pub gradient_tolerance: f64,
    pub c1: f64,
    pub c2: f64,
    /// Trial steps per line search before giving up.
    pub max_line_search: usize,
    pub gradient: GradientSpec,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 500,
            gradient_tolerance: 1e-8,
            c1: 1e-4,
            c2: 0.9,
            max_line_search: 40,
            gradient: GradientSpec::analytic(),
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        if !(0.0 < self.c1 && self.c1 < self.c2 && self.c2 < 1.0) {
            return Err(OptimizerError::InvalidConfig(format!(
                "need 0 < c1 < c2 < 1, got c1={} c2={}",
                self.c1, self.c2
            )));
        }
        if self.gradient_tolerance.is_nan() || self.gradient_tolerance <= 0.0 {
            return Err(OptimizerError::InvalidConfig(format!(
                "gradient_tolerance must be positive, got {}",
                self.gradient_tolerance
            )));
        }
        if self.max_line_search == 0 {
            return Err(OptimizerError::InvalidConfig(
                "max_line_search must be at least 1".into(),
            ));
        }
        self.gradient.validate()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterations,
    LineSearchFailure,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::MaxIterations => "max_iterations",
            Status::LineSearchFailure => "line_search_failure",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub energy: f64,
    pub gradient_norm: f64,
    /// Cumulative objective evaluations.
    pub calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationTrace {
    /// Iteration 0 is the starting point.
    pub records: Vec<IterationRecord>,
    pub status: Status,
}

impl OptimizationTrace {
    pub fn iterations(&self) -> usize {
        self.records.len().saturating_sub(1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub x: ParameterVector,
    pub energy: f64,
    pub gradient_norm: f64,
    pub trace: OptimizationTrace,
    pub inverse_hessian: DMatrix<f64>,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn all_finite(v: &DVector<f64>) -> bool {
    v.iter().all(|x| x.is_finite())
}

/// Minimize from `x0` with a fresh identity inverse Hessian.
pub fn minimize<F: ObjectiveFunction + ?Sized>(
    f: &F,
    x0: &[f64],
    cfg: &OptimizerConfig,
) -> Result<OptimizationResult, OptimizerError> {
    minimize_with_hessian(f, x0, cfg, None)
}

/// Minimize from `x0`, optionally seeding the inverse-Hessian estimate.
pub fn minimize_with_hessian<F: ObjectiveFunction + ?Sized>(
    f: &F,
    x0: &[f64],
    cfg: &OptimizerConfig,
    inverse_hessian: Option<DMatrix<f64>>,
) -> Result<OptimizationResult, OptimizerError> {
    cfg.validate()?;
    let n = f.dimension();
    if x0.len() != n {
        return Err(OptimizerError::DimensionMismatch {
            expected: n,
            found: x0.len(),
        });
    }
    let seeded = inverse_hessian.is_some();
    let mut hinv = match inverse_hessian {
        Some(m) if m.nrows() == n && m.ncols() == n => m,
        Some(_) => return Err(OptimizerError::HessianShape(n)),
        None => DMatrix::identity(n, n),
    };

    let mut x = DVector::from_column_slice(x0);
    let mut fx = f.value(x.as_slice());
    let mut g = DVector::from_vec(f.gradient(x.as_slice()));
    if !fx.is_finite() || !all_finite(&g) {
        return Err(OptimizerError::NonFiniteStart);
    }
    let mut records = vec![IterationRecord {
        iteration: 0,
        energy: fx,
        gradient_norm: inf_norm(&g),
        calls: f.evaluations(),
    }];
    let mut first_step = true;
    let mut status = Status::MaxIterations;

    for iteration in 1..=cfg.max_iterations + 1 {
        if inf_norm(&g) <= cfg.gradient_tolerance {
            status = Status::Converged;
            break;
        }
        if iteration > cfg.max_iterations {
            break;
        }
        let mut p = -(&hinv * &g);
        if p.dot(&g) >= 0.0 || !all_finite(&p) {
            debug!("iteration {iteration}: resetting non-descent direction");
            hinv = DMatrix::identity(n, n);
            p = -g.clone();
        }
        let Some(step) = line_search(f, &x, fx, &g, &p, cfg) else {
            status = Status::LineSearchFailure;
            break;
        };
        let s = &step.x - &x;
        let y = &step.g - &g;
        let sy = s.dot(&y);
        if sy > f64::EPSILON * s.norm() * y.norm() {
            if first_step && !seeded {
                hinv *= sy / y.dot(&y);
            }
            let rho = 1.0 / sy;
            let hy = &hinv * &y;
            let yhy = y.dot(&hy);
            // H+ = H - ρ(H y sᵀ + s yᵀ H) + (ρ² yᵀHy + ρ) s sᵀ
            hinv -= (&hy * s.transpose() + &s * hy.transpose()) * rho;
            hinv += (&s * s.transpose()) * (rho * rho * yhy + rho);
        }
        first_step = false;
        x = step.x;
        fx = step.f;
        g = step.g;
        records.push(IterationRecord {
            iteration,
            energy: fx,
            gradient_norm: inf_norm(&g),
            calls: f.evaluations(),
        });
    }

    Ok(OptimizationResult {
        gradient_norm: inf_norm(&g),
        x: x.as_slice().to_vec(),
        energy: fx,
        trace: OptimizationTrace { records, status },
        inverse_hessian: hinv,
    })
}

struct Step {
    x: DVector<f64>,
    f: f64,
    g: DVector<f64>,
}

struct Trial {
    alpha: f64,
    f: f64,
    slope: f64,
    g: Option<DVector<f64>>,
}

/// Strong-Wolfe line search. Returns `None` when no point with sufficient
/// decrease is found.
fn line_search<F: ObjectiveFunction + ?Sized>(
    f: &F,
    x: &DVector<f64>,
    f0: f64,
    g0: &DVector<f64>,
    p: &DVector<f64>,
    cfg: &OptimizerConfig,
) -> Option<Step> {
    const ALPHA_MAX: f64 = 1e6;
    let d0 = g0.dot(p);
    let eval = |alpha: f64| -> (DVector<f64>, f64) {
        let xa = x + p * alpha;
        let fa = f.value(xa.as_slice());
        (xa, fa)
    };
    let armijo = |alpha: f64, fa: f64| fa <= f0 + cfg.c1 * alpha * d0;
    let curvature = |slope: f64| slope.abs() <= -cfg.c2 * d0;

    let mut prev = Trial {
        alpha: 0.0,
        f: f0,
        slope: d0,
        g: Some(g0.clone()),
    };
    let mut alpha = 1.0;
    let mut budget = cfg.max_line_search;
    let (lo, hi) = loop {
        if budget == 0 {
            return prev.g.filter(|_| prev.alpha > 0.0).map(|g| Step {
                x: x + p * prev.alpha,
                f: prev.f,
                g,
            });
        }
        budget -= 1;
        let (xa, fa) = eval(alpha);
        if !fa.is_finite() {
            alpha = 0.5 * (prev.alpha + alpha);
            continue;
        }
        if !armijo(alpha, fa) || (prev.alpha > 0.0 && fa >= prev.f) {
            let hi = Trial {
                alpha,
                f: fa,
                slope: f64::NAN,
                g: None,
            };
            break (prev, hi);
        }
        let ga = DVector::from_vec(f.gradient(xa.as_slice()));
        if !all_finite(&ga) {
            return None;
        }
        let slope = ga.dot(p);
        if curvature(slope) {
            return Some(Step { x: xa, f: fa, g: ga });
        }
        let cur = Trial {
            alpha,
            f: fa,
            slope,
            g: Some(ga),
        };
        if slope >= 0.0 {
            break (cur, prev);
        }
        prev = cur;
        alpha = (2.0 * alpha).min(ALPHA_MAX);
        if prev.alpha >= ALPHA_MAX {
            let g = prev.g.take().expect("gradient evaluated");
            return Some(Step {
                x: x + p * prev.alpha,
                f: prev.f,
                g,
            });
        }
    };
    zoom(f, x, f0, d0, p, lo, hi, budget, cfg)
}

#[allow(clippy::too_many_arguments)]
fn zoom<F: ObjectiveFunction + ?Sized>(
    f: &F,
    x: &DVector<f64>,
    f0: f64,
    d0: f64,
    p: &DVector<f64>,
    mut lo: Trial,
    mut hi: Trial,
    mut budget: usize,
    cfg: &OptimizerConfig,
) -> Option<Step> {
    while budget > 0 {
        budget -= 1;
        let width = hi.alpha - lo.alpha;
        if width.abs() <= 1e-16 * lo.alpha.abs().max(1.0) {
            break;
        }
        // Quadratic through (lo.f, lo.slope) and hi.f, safeguarded.
        let denom = 2.0 * (hi.f - lo.f - lo.slope * width);
        let mut alpha = if denom.is_finite() && denom > 0.0 {
            lo.alpha - lo.slope * width * width / denom
        } else {
            f64::NAN
        };
        let (a, b) = if lo.alpha < hi.alpha {
            (lo.alpha, hi.alpha)
        } else {
            (hi.alpha, lo.alpha)
        };
        let margin = 0.1 * (b - a);
        if !(alpha > a + margin && alpha < b - margin) {
            alpha = 0.5 * (a + b);
        }
        let xa = x + p * alpha;
        let fa = f.value(xa.as_slice());
        if !fa.is_finite() || fa > f0 + cfg.c1 * alpha * d0 || fa >= lo.f {
            hi = Trial {
                alpha,
                f: if fa.is_finite() { fa } else { f64::INFINITY },
                slope: f64::NAN,
                g: None,
            };
            continue;
        }
        let ga = DVector::from_vec(f.gradient(xa.as_slice()));
        if !all_finite(&ga) {
            break;
        }
        let slope = ga.dot(p);
        if slope.abs() <= -cfg.c2 * d0 {
            return Some(Step { x: xa, f: fa, g: ga });
        }
        if slope * (hi.alpha - lo.alpha) >= 0.0 {
            hi = std::mem::replace(
                &mut lo,
                Trial {
                    alpha: 0.0,
                    f: 0.0,
                    slope: 0.0,
                    g: None,
                },
            );
        }
        lo = Trial {
            alpha,
            f: fa,
            slope,
            g: Some(ga),
        };
    }
    // Curvature not met, but a sufficient-decrease point is still progress.
    if lo.alpha > 0.0 && lo.f < f0 {
        let g = lo.g.expect("lo carries a gradient once it has moved");
        return Some(Step {
            x: x + p * lo.alpha,
            f: lo.f,
            g,
        });
    }
    None
}

/// `count` angles drawn uniformly from `[0, 2π)` with ChaCha8 seeded by
/// `seed`.
pub fn random_initial_angles(count: usize, seed: u64) -> ParameterVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random_range(0.0..TAU)).collect()
}
