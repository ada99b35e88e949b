//! Colony search over TSP instances: probabilistic tour
//! construction, pheromone evaporation and MAX-MIN style deposit.

mod construct;
mod field;
mod solver;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Tour;

pub use construct::{construct_tour, transition_probabilities, CandidateLists};
pub use field::{HeuristicField, PheromoneField, DISTANCE_FLOOR};
pub use solver::{run_dco, Colony};

/// Parameters of one colony run. Every field has a default so partial JSON
/// documents deserialize.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ColonyConfig {
    /// Pheromone exponent.
    pub alpha: f64,
    /// Heuristic exponent.
    pub beta: f64,
    /// Evaporation rate in `[0, 1]`.
    pub rho: f64,
    /// Ants per iteration; `None` means one ant per city.
    pub ants: Option<usize>,
    pub q_deposit: f64,
    pub max_iterations: usize,
    /// k-nearest candidate lists; 0 disables them.
    pub candidate_list_size: usize,
    /// Initial pheromone; `None` derives it from a nearest-neighbour tour.
    pub tau_init: Option<f64>,
    pub pheromone_bounds: bool,
    /// The global-best tour is reinforced every this many iterations.
    pub global_best_period: usize,
}

impl Default for ColonyConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 2.0,
            rho: 0.1,
            ants: None,
            q_deposit: 1.0,
            max_iterations: 500,
            candidate_list_size: 0,
            tau_init: None,
            pheromone_bounds: true,
            global_best_period: 5,
        }
    }
}

impl ColonyConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::config(msg));
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return bad(format!("alpha must be >= 0, got {}", self.alpha));
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return bad(format!("rho must lie in [0, 1], got {}", self.rho));
        }
        if self.ants == Some(0) {
            return bad("ants must be >= 1".into());
        }
        if !(self.q_deposit > 0.0) {
            return bad(format!("q_deposit must be > 0, got {}", self.q_deposit));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be >= 1".into());
        }
        if matches!(self.tau_init, Some(t) if !(t > 0.0)) {
            return bad("tau_init must be > 0".into());
        }
        if self.global_best_period == 0 {
            return bad("global_best_period must be >= 1".into());
        }
        Ok(())
    }

    /// Colony size for an instance with `n` cities.
    pub fn ants_for(&self, n: usize) -> usize {
        self.ants.unwrap_or(n)
    }
}

/// Best solution carried by a [`RunRecord`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solution {
    Tour(Tour),
    Point(Vec<f64>),
}

/// Live parameters of one iteration, recorded for reporting.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IterationParams {
    pub efficiency: Option<f64>,
    pub rho: f64,
    pub ants: usize,
}

/// Trajectory and totals of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Best-so-far cost after each iteration; non-increasing.
    pub best_cost_per_iteration: Vec<f64>,
    pub best: Solution,
    pub evaluations: u64,
    pub wall_time: f64,
    pub iterations_run: usize,
    /// Per-iteration parameters; empty for solvers without live parameters.
    #[serde(default)]
    pub params: Vec<IterationParams>,
    #[serde(default)]
    pub schedule_resets: usize,
}

impl RunRecord {
    pub fn best_cost(&self) -> f64 {
        *self.best_cost_per_iteration.last().expect("a run has at least one iteration")
    }

    pub fn best_tour(&self) -> Option<&Tour> {
        match &self.best {
            Solution::Tour(t) => Some(t),
            Solution::Point(_) => None,
        }
    }

    /// Equality of everything except wall-clock time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        let a = RunRecord {
            wall_time: 0.0,
            ..self.clone()
        };
        let b = RunRecord {
            wall_time: 0.0,
            ..other.clone()
        };
        a == b && a.best_cost_per_iteration.iter().zip(&b.best_cost_per_iteration).all(|(x, y)| x.to_bits() == y.to_bits())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        ColonyConfig::default().validate().unwrap();
    }

    #[test]
    fn invalid_configs() {
        let base = ColonyConfig::default();
        for cfg in [
            ColonyConfig { alpha: -1.0, ..base.clone() },
            ColonyConfig { rho: 1.5, ..base.clone() },
            ColonyConfig { ants: Some(0), ..base.clone() },
            ColonyConfig { max_iterations: 0, ..base.clone() },
        ] {
            assert!(cfg.validate().is_err(), "{cfg:?}");
        }
    }

    #[test]
    fn partial_json_uses_defaults() {
        let cfg: ColonyConfig = serde_json::from_str(r#"{"beta": 3.0}"#).unwrap();
        assert_eq!(cfg.beta, 3.0);
        assert_eq!(cfg.rho, 0.1);
        assert!(serde_json::from_str::<ColonyConfig>(r#"{"betta": 3.0}"#).is_err());
    }
}
