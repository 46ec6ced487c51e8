//! Gradients of the VQE energy.
//!
//! Every ansatz parameter drives a single `Ry = exp(-iθY/2)`, so the exact
//! derivative is the two-point shift `½[f(θ + π/2 e_k) − f(θ − π/2 e_k)]`.
//! Forward and central differences are provided for comparison.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_FORWARD_STEP: f64 = 1e-6;
pub const DEFAULT_CENTRAL_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GradientError {
    #[error("finite-difference step must be positive and finite, got {0}")]
    InvalidStep(f64),
    #[error("expected {expected} parameters, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradientMethod {
    AnalyticShift,
    ForwardDifference,
    CentralDifference,
}

impl fmt::Display for GradientMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GradientMethod::AnalyticShift => "analytic_shift",
            GradientMethod::ForwardDifference => "forward_difference",
            GradientMethod::CentralDifference => "central_difference",
        })
    }
}

impl FromStr for GradientMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "analytic_shift" | "analytic" | "shift" => Ok(GradientMethod::AnalyticShift),
            "forward_difference" | "forward" => Ok(GradientMethod::ForwardDifference),
            "central_difference" | "central" => Ok(GradientMethod::CentralDifference),
            other => Err(format!("unknown gradient method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientSpec {
    pub method: GradientMethod,
    /// Finite-difference step in radians; unused by the analytic method.
    pub step: f64,
}

impl Default for GradientSpec {
    fn default() -> Self {
        Self::analytic()
    }
}

impl GradientSpec {
    pub fn analytic() -> Self {
        Self {
            method: GradientMethod::AnalyticShift,
            step: 0.0,
        }
    }

    /// Spec with the default step for `method`.
    pub fn new(method: GradientMethod) -> Self {
        let step = match method {
            GradientMethod::AnalyticShift => 0.0,
            GradientMethod::ForwardDifference => DEFAULT_FORWARD_STEP,
            GradientMethod::CentralDifference => DEFAULT_CENTRAL_STEP,
        };
        Self { method, step }
    }

    pub fn with_step(method: GradientMethod, step: f64) -> Result<Self, GradientError> {
        let spec = Self { method, step };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), GradientError> {
        if self.method != GradientMethod::AnalyticShift && !(self.step > 0.0 && self.step.is_finite()) {
            return Err(GradientError::InvalidStep(self.step));
        }
        Ok(())
    }
}

/// Objective evaluations needed for one gradient of `d` parameters.
pub fn evaluation_count(spec: &GradientSpec, d: usize) -> usize {
    match spec.method {
        GradientMethod::AnalyticShift | GradientMethod::CentralDifference => 2 * d,
        GradientMethod::ForwardDifference => d + 1,
    }
}

/// Gradient of `f` at `theta`.
pub fn gradient<F>(f: F, theta: &[f64], spec: &GradientSpec) -> Result<Vec<f64>, GradientError>
where
    F: Fn(&[f64]) -> f64,
{
    spec.validate()?;
    Ok(gradient_unchecked(f, theta, spec))
}

/// As [`gradient`], additionally checking `theta.len() == expected`.
pub fn gradient_checked<F>(f: F, theta: &[f64], expected: usize, spec: &GradientSpec) -> Result<Vec<f64>, GradientError>
where
    F: Fn(&[f64]) -> f64,
{
    if theta.len() != expected {
        return Err(GradientError::LengthMismatch {
            expected,
            found: theta.len(),
        });
    }
    gradient(f, theta, spec)
}

pub(crate) fn gradient_unchecked<F>(f: F, theta: &[f64], spec: &GradientSpec) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let d = theta.len();
    let mut x = theta.to_vec();
    let mut shifted = |k: usize, delta: f64| {
        x[k] = theta[k] + delta;
        let v = f(&x);
        x[k] = theta[k];
        v
    };
    match spec.method {
        GradientMethod::AnalyticShift => (0..d)
            .map(|k| 0.5 * (shifted(k, FRAC_PI_2) - shifted(k, -FRAC_PI_2)))
            .collect(),
        GradientMethod::CentralDifference => {
            let h = spec.step;
            (0..d).map(|k| (shifted(k, h) - shifted(k, -h)) / (2.0 * h)).collect()
        }
        GradientMethod::ForwardDifference => {
            if d == 0 {
                // keep the D + 1 count honest
                f(theta);
                return Vec::new();
            }
            let h = spec.step;
            let f0 = f(theta);
            (0..d).map(|k| (shifted(k, h) - f0) / h).collect()
        }
    }
}
