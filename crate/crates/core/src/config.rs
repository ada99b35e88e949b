//! The JSON configuration document shared by every command.
//!
//! ```json
//! {
//!   "colony":        { "alpha": 1, "beta": 2, "rho": 0.1, "max_iterations": 500 },
//!   "de_controller": { "rho_min": 0.02, "rho_max": 0.2, "stagnation_window": 50 },
//!   "baseline":      { "algorithm": "pso", "population": 20, "objective": "sphere", "dim": 10 },
//!   "scenario":      { "horizon": 200, "tasks": 5, "review_period": 5 },
//!   "experiment":    { "seeds": [1, 2, 3], "problems": [...], "algorithms": [...] }
//! }
//! ```
//!
//! Every section and field is optional. Unknown keys are rejected with their
//! full path.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::{AlgorithmId, BaselineConfig};
use crate::colony::ColonyConfig;
use crate::efficiency::{CouplingPolicy, DynamicEfficiency, EfficiencySchedule};
use crate::error::{Error, Result};
use crate::experiment::ExperimentSpec;
use crate::problem::Objective;
use crate::sim::ScenarioParams;

/// Efficiency controller settings. Absent values resolve from the colony
/// configuration: `k = 10 / max_iterations`, `t0 = max_iterations / 3`,
/// colony size between `ceil(ants_min_fraction * m)` and `m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeControllerConfig {
    pub k: Option<f64>,
    pub t0: Option<f64>,
    pub rho_min: f64,
    pub rho_max: f64,
    pub ants_min: Option<usize>,
    pub ants_max: Option<usize>,
    /// `ants_min = ceil(fraction * ants_max)` when `ants_min` is absent.
    pub ants_min_fraction: f64,
    pub stagnation_window: usize,
    pub stagnation_epsilon: f64,
    pub reset_on_stagnation: bool,
}

impl Default for DeControllerConfig {
    fn default() -> Self {
        let p = CouplingPolicy::for_colony(1);
        Self {
            k: None,
            t0: None,
            rho_min: p.rho_range.0,
            rho_max: p.rho_range.1,
            ants_min: None,
            ants_max: None,
            ants_min_fraction: 0.5,
            stagnation_window: p.stagnation_window,
            stagnation_epsilon: p.stagnation_epsilon,
            reset_on_stagnation: p.reset_on_stagnation,
        }
    }
}

impl DeControllerConfig {
    pub fn resolve(&self, colony: &ColonyConfig, n: usize) -> Result<DynamicEfficiency> {
        let defaults = DynamicEfficiency::defaults_for(colony, n);
        let schedule = EfficiencySchedule::new(
            self.k.unwrap_or(defaults.schedule.k()),
            self.t0.unwrap_or(defaults.schedule.t0()),
        )?;
        let ants_max = self.ants_max.unwrap_or(defaults.policy.ants_range.1);
        if !(self.ants_min_fraction > 0.0 && self.ants_min_fraction <= 1.0) {
            return Err(Error::config("de_controller.ants_min_fraction must lie in (0, 1]"));
        }
        let ants_min = self
            .ants_min
            .unwrap_or(((self.ants_min_fraction * ants_max as f64).ceil() as usize).max(1));
        let policy = CouplingPolicy {
            rho_range: (self.rho_min, self.rho_max),
            ants_range: (ants_min, ants_max),
            stagnation_window: self.stagnation_window,
            stagnation_epsilon: self.stagnation_epsilon,
            reset_on_stagnation: self.reset_on_stagnation,
        };
        policy.validate()?;
        Ok(DynamicEfficiency { schedule, policy })
    }

    /// Copy with every derived value filled in for an instance of `n` cities.
    pub fn materialized(&self, colony: &ColonyConfig, n: usize) -> Result<Self> {
        let d = self.resolve(colony, n)?;
        Ok(Self {
            k: Some(d.schedule.k()),
            t0: Some(d.schedule.t0()),
            ants_min: Some(d.policy.ants_range.0),
            ants_max: Some(d.policy.ants_range.1),
            ..self.clone()
        })
    }
}

/// Defaults for the `baseline` command; flags override.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineSection {
    pub algorithm: Option<AlgorithmId>,
    pub population: usize,
    pub max_iterations: usize,
    pub params: BTreeMap<String, f64>,
    /// Continuous problem used when no TSP instance is given.
    pub objective: Objective,
    pub dim: usize,
}

impl Default for BaselineSection {
    fn default() -> Self {
        Self {
            algorithm: None,
            population: 20,
            max_iterations: 500,
            params: BTreeMap::new(),
            objective: Objective::Sphere,
            dim: 10,
        }
    }
}

impl BaselineSection {
    pub fn to_config(&self, algorithm: AlgorithmId) -> BaselineConfig {
        BaselineConfig {
            algorithm,
            population: self.population,
            max_iterations: self.max_iterations,
            params: self.params.clone(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub colony: ColonyConfig,
    pub de_controller: DeControllerConfig,
    pub baseline: BaselineSection,
    pub scenario: ScenarioParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentSpec>,
}

impl CliConfig {
    /// Parses and validates; errors name the offending key path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: CliConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." || path.is_empty() {
                Error::config(inner.to_string())
            } else {
                Error::config(format!("at `{path}`: {inner}"))
            }
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::InvalidConfig(m) => Error::config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.colony.validate()?;
        self.de_controller.resolve(&self.colony, 3)?;
        if self.baseline.population == 0 || self.baseline.max_iterations == 0 || self.baseline.dim == 0 {
            return Err(Error::config("baseline population, max_iterations and dim must be >= 1"));
        }
        if let Some(alg) = self.baseline.algorithm {
            self.baseline.to_config(alg).validate()?;
        }
        self.scenario.validate()?;
        if let Some(exp) = &self.experiment {
            exp.validate()?;
        }
        Ok(())
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_all_defaults() {
        assert_eq!(CliConfig::from_json("{}").unwrap(), CliConfig::default());
    }

    #[test]
    fn unknown_key_reports_path() {
        let e = CliConfig::from_json(r#"{"colony": {"alpah": 1}}"#).unwrap_err().to_string();
        assert!(e.contains("colony.alpah"), "{e}");
        let e = CliConfig::from_json(r#"{"scenario": {"horizon": 50, "noise": 1}}"#).unwrap_err().to_string();
        assert!(e.contains("scenario.noise"), "{e}");
        let e = CliConfig::from_json(r#"{"colour": {}}"#).unwrap_err().to_string();
        assert!(e.contains("colour"), "{e}");
    }

    #[test]
    fn wrong_type_reports_path() {
        let e = CliConfig::from_json(r#"{"de_controller": {"rho_min": "low"}}"#).unwrap_err().to_string();
        assert!(e.contains("de_controller.rho_min"), "{e}");
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(CliConfig::from_json(r#"{"colony": {"rho": 1.5}}"#).is_err());
        assert!(CliConfig::from_json(r#"{"de_controller": {"rho_min": 0.5, "rho_max": 0.1}}"#).is_err());
        assert!(CliConfig::from_json(r#"{"experiment": {"seeds": []}}"#).is_err());
    }

    #[test]
    fn controller_materializes_defaults() {
        let colony = ColonyConfig {
            max_iterations: 300,
            ..ColonyConfig::default()
        };
        let m = DeControllerConfig::default().materialized(&colony, 51).unwrap();
        assert_eq!(m.k, Some(10.0 / 300.0));
        assert_eq!(m.t0, Some(100.0));
        assert_eq!((m.ants_min, m.ants_max), (Some(26), Some(51)));
    }

    #[test]
    fn round_trip() {
        let cfg = CliConfig::from_json(r#"{"baseline": {"algorithm": "dgd", "params": {"boost": 2}}}"#).unwrap();
        let again = CliConfig::from_json(&cfg.to_json_pretty().unwrap()).unwrap();
        assert_eq!(cfg, again);
    }
}
