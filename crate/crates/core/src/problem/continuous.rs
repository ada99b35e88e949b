use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Sphere,
    Rosenbrock,
    Rastrigin,
}

impl Objective {
    pub const ALL: [Objective; 3] = [Objective::Sphere, Objective::Rosenbrock, Objective::Rastrigin];

    pub fn value(self, x: &[f64]) -> f64 {
        match self {
            Objective::Sphere => x.iter().map(|v| v * v).sum(),
            Objective::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
                .sum(),
            Objective::Rastrigin => {
                10.0 * x.len() as f64
                    + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
            }
        }
    }

    pub fn gradient(self, x: &[f64], grad: &mut [f64]) {
        debug_assert_eq!(x.len(), grad.len());
        match self {
            Objective::Sphere => {
                for (g, v) in grad.iter_mut().zip(x) {
                    *g = 2.0 * v;
                }
            }
            Objective::Rosenbrock => {
                grad.fill(0.0);
                for i in 0..x.len().saturating_sub(1) {
                    let r = x[i + 1] - x[i] * x[i];
                    grad[i] += -400.0 * x[i] * r - 2.0 * (1.0 - x[i]);
                    grad[i + 1] += 200.0 * r;
                }
            }
            Objective::Rastrigin => {
                for (g, v) in grad.iter_mut().zip(x) {
                    *g = 2.0 * v + 20.0 * PI * (2.0 * PI * v).sin();
                }
            }
        }
    }

    /// Conventional search box, identical on every axis.
    pub fn default_bounds(self) -> (f64, f64) {
        match self {
            Objective::Sphere | Objective::Rastrigin => (-5.12, 5.12),
            Objective::Rosenbrock => (-2.048, 2.048),
        }
    }

    fn minimizer(self) -> f64 {
        match self {
            Objective::Rosenbrock => 1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Sphere => "sphere",
            Objective::Rosenbrock => "rosenbrock",
            Objective::Rastrigin => "rastrigin",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(Objective::Sphere),
            "rosenbrock" => Ok(Objective::Rosenbrock),
            "rastrigin" => Ok(Objective::Rastrigin),
            other => Err(Error::config(format!(
                "unknown objective `{other}` (valid: sphere, rosenbrock, rastrigin)"
            ))),
        }
    }
}

/// A box-constrained benchmark function with a known global minimum.
#[derive(Clone, Debug)]
pub struct ContinuousProblem {
    objective: Objective,
    bounds: Vec<(f64, f64)>,
    minimizer: Vec<f64>,
}

impl ContinuousProblem {
    pub fn new(objective: Objective, dim: usize) -> Result<Self> {
        let (lo, hi) = objective.default_bounds();
        Self::with_bounds(objective, vec![(lo, hi); dim])
    }

    pub fn with_bounds(objective: Objective, bounds: Vec<(f64, f64)>) -> Result<Self> {
        let dim = bounds.len();
        if dim == 0 {
            return Err(Error::config("dimension must be at least 1"));
        }
        if objective == Objective::Rosenbrock && dim < 2 {
            return Err(Error::config("rosenbrock needs dimension >= 2"));
        }
        let minimizer = vec![objective.minimizer(); dim];
        for (i, &(lo, hi)) in bounds.iter().enumerate() {
            if !(lo < hi) {
                return Err(Error::config(format!("empty bounds [{lo}, {hi}] on axis {i}")));
            }
            if !(lo..=hi).contains(&minimizer[i]) {
                return Err(Error::config(format!("known minimum outside bounds on axis {i}")));
            }
        }
        Ok(Self {
            objective,
            bounds,
            minimizer,
        })
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn known_minimum(&self) -> (&[f64], f64) {
        (&self.minimizer, 0.0)
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.value(x)
    }

    pub fn gradient(&self, x: &[f64], grad: &mut [f64]) {
        self.objective.gradient(x, grad)
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (v, &(lo, hi)) in x.iter_mut().zip(&self.bounds) {
            *v = v.clamp(lo, hi);
        }
    }
}
