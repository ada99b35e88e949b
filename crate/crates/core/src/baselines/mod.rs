//! Comparison algorithms: classic colony search and a genetic algorithm on
//! TSP; gradient descent (plain and efficiency-boosted), evolution strategy,
//! particle swarm and differential evolution on continuous benchmarks.

mod evolution;
mod genetic;
mod gradient;
mod swarm;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::colony::{run_dco, ColonyConfig, RunRecord};
use crate::efficiency::EfficiencySchedule;
use crate::error::{Error, Result};
use crate::problem::{ContinuousProblem, Problem};
use crate::rng::SeededRng;

pub use evolution::{run_de_rand1bin, run_es};
pub use genetic::{order_crossover, run_ga_tsp, swap_mutation};
pub use gradient::{run_dgd, run_dgd_from, run_tgd, run_tgd_from, DgdParams};
pub use swarm::run_pso;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmId {
    AcoClassic,
    GaTsp,
    Tgd,
    Dgd,
    Es,
    Pso,
    DeRand1bin,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 7] = [
        AlgorithmId::AcoClassic,
        AlgorithmId::GaTsp,
        AlgorithmId::Tgd,
        AlgorithmId::Dgd,
        AlgorithmId::Es,
        AlgorithmId::Pso,
        AlgorithmId::DeRand1bin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmId::AcoClassic => "aco_classic",
            AlgorithmId::GaTsp => "ga_tsp",
            AlgorithmId::Tgd => "tgd",
            AlgorithmId::Dgd => "dgd",
            AlgorithmId::Es => "es",
            AlgorithmId::Pso => "pso",
            AlgorithmId::DeRand1bin => "de_rand1bin",
        }
    }

    pub fn is_tsp(self) -> bool {
        matches!(self, AlgorithmId::AcoClassic | AlgorithmId::GaTsp)
    }

    /// Recognised parameter keys and their defaults.
    pub fn default_params(self) -> &'static [(&'static str, f64)] {
        match self {
            AlgorithmId::AcoClassic => &[("alpha", 1.0), ("beta", 2.0), ("rho", 0.1), ("q", 1.0)],
            AlgorithmId::GaTsp => &[("tournament", 3.0), ("crossover_rate", 1.0), ("mutation_scale", 2.0), ("elitism", 1.0)],
            AlgorithmId::Tgd => &[("step", 0.1)],
            // k and t0 default to the budget-derived schedule when absent.
            AlgorithmId::Dgd => &[("step", 0.1), ("boost", 3.0), ("k", f64::NAN), ("t0", f64::NAN)],
            AlgorithmId::Es => &[("mu", 5.0), ("sigma0", 0.1)],
            AlgorithmId::Pso => &[("inertia", 0.729), ("cognitive", 1.49445), ("social", 1.49445), ("vclamp", 0.2)],
            AlgorithmId::DeRand1bin => &[("f", 0.5), ("cr", 0.9)],
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AlgorithmId::ALL.into_iter().find(|a| a.as_str() == s).ok_or_else(|| {
            let valid: Vec<_> = AlgorithmId::ALL.iter().map(|a| a.as_str()).collect();
            Error::config(format!("unknown algorithm `{s}` (valid: {})", valid.join(", ")))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaselineConfig {
    pub algorithm: AlgorithmId,
    #[serde(default = "default_population")]
    pub population: usize,
    #[serde(default = "default_iterations")]
    pub max_iterations: usize,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

fn default_population() -> usize {
    20
}

fn default_iterations() -> usize {
    500
}

impl BaselineConfig {
    pub fn new(algorithm: AlgorithmId, population: usize, max_iterations: usize) -> Self {
        Self {
            algorithm,
            population,
            max_iterations,
            params: BTreeMap::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.population == 0 {
            return Err(Error::config("population must be >= 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::config("max_iterations must be >= 1"));
        }
        let known = self.algorithm.default_params();
        for (key, value) in &self.params {
            if !known.iter().any(|(k, _)| k == key) {
                let names: Vec<_> = known.iter().map(|(k, _)| *k).collect();
                return Err(Error::config(format!(
                    "{} has no parameter `{key}` (valid: {})",
                    self.algorithm,
                    names.join(", ")
                )));
            }
            if !value.is_finite() {
                return Err(Error::config(format!("parameter `{key}` must be finite")));
            }
        }
        Ok(())
    }

    /// Parameter value or its documented default (NaN when the default is
    /// derived elsewhere).
    pub fn param(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or_else(|| {
            self.algorithm
                .default_params()
                .iter()
                .find(|(k, _)| *k == key)
                .map(|(_, v)| *v)
                .unwrap_or(f64::NAN)
        })
    }

    /// All parameters with defaults filled in, for echoing.
    pub fn effective_params(&self) -> BTreeMap<String, f64> {
        self.algorithm
            .default_params()
            .iter()
            .filter_map(|(k, _)| {
                let v = self.param(k);
                v.is_finite().then(|| (k.to_string(), v))
            })
            .collect()
    }
}

pub fn run_baseline(cfg: &BaselineConfig, problem: Problem<'_>, rng: &SeededRng) -> Result<RunRecord> {
    cfg.validate()?;
    match (cfg.algorithm, problem) {
        (AlgorithmId::AcoClassic, Problem::Tsp(inst)) => {
            let colony = ColonyConfig {
                alpha: cfg.param("alpha"),
                beta: cfg.param("beta"),
                rho: cfg.param("rho"),
                q_deposit: cfg.param("q"),
                ants: Some(cfg.population),
                max_iterations: cfg.max_iterations,
                ..ColonyConfig::default()
            };
            run_dco(inst, &colony, None, rng)
        }
        (AlgorithmId::GaTsp, Problem::Tsp(inst)) => run_ga_tsp(inst, cfg, &mut rng.derive(0)),
        (AlgorithmId::Tgd, Problem::Continuous(p)) => {
            run_tgd(p, cfg.param("step"), cfg.max_iterations, &mut rng.derive(0))
        }
        (AlgorithmId::Dgd, Problem::Continuous(p)) => {
            let params = dgd_params(cfg)?;
            run_dgd(p, &params, cfg.max_iterations, &mut rng.derive(0))
        }
        (AlgorithmId::Es, Problem::Continuous(p)) => run_es(p, cfg, &mut rng.derive(0)),
        (AlgorithmId::Pso, Problem::Continuous(p)) => run_pso(p, cfg, &mut rng.derive(0)),
        (AlgorithmId::DeRand1bin, Problem::Continuous(p)) => run_de_rand1bin(p, cfg, &mut rng.derive(0)),
        (alg, problem) => Err(Error::IncompatibleProblem {
            algorithm: alg.as_str(),
            problem: problem.kind(),
        }),
    }
}

fn dgd_params(cfg: &BaselineConfig) -> Result<DgdParams> {
    let default = EfficiencySchedule::for_budget(cfg.max_iterations);
    let k = Some(cfg.param("k")).filter(|v| v.is_finite()).unwrap_or(default.k());
    let t0 = Some(cfg.param("t0")).filter(|v| v.is_finite()).unwrap_or(default.t0());
    Ok(DgdParams {
        schedule: EfficiencySchedule::new(k, t0)?,
        base_step: cfg.param("step"),
        boost: cfg.param("boost"),
    })
}

/// First 1-based iteration whose best cost is within `tolerance` of
/// `target`, or `None` when the run never gets there.
pub fn iterations_to_converge(trajectory: &[f64], target: f64, tolerance: f64) -> Option<usize> {
    let threshold = target + tolerance;
    trajectory.iter().position(|&c| c <= threshold).map(|i| i + 1)
}

/// Uniform point inside the problem box.
pub(crate) fn random_point(problem: &ContinuousProblem, rng: &mut SeededRng) -> Vec<f64> {
    use rand::Rng;
    problem.bounds().iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect()
}

/// Appends the running minimum.
pub(crate) fn push_best(trajectory: &mut Vec<f64>, value: f64) {
    let best = trajectory.last().map_or(value, |&b| b.min(value));
    trajectory.push(best);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{Objective, TspInstance};

    #[test]
    fn convergence_scan() {
        assert_eq!(iterations_to_converge(&[5.0, 2.0, 0.5, 1e-8], 0.0, 1e-6), Some(4));
        assert_eq!(iterations_to_converge(&[5.0, 2.0], 0.0, 1e-6), None);
        assert_eq!(iterations_to_converge(&[5.0, 2.0], 5.0, 1e-6), Some(1));
    }

    #[test]
    fn incompatible_pairs_named() {
        let sphere = ContinuousProblem::new(Objective::Sphere, 2).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::GaTsp, 10, 5);
        let e = run_baseline(&cfg, Problem::Continuous(&sphere), &SeededRng::new(0)).unwrap_err();
        assert!(e.to_string().contains("ga_tsp") && e.to_string().contains("continuous"), "{e}");

        let tri = TspInstance::from_coords("tri", vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::Pso, 10, 5);
        let e = run_baseline(&cfg, Problem::Tsp(&tri), &SeededRng::new(0)).unwrap_err();
        assert!(e.to_string().contains("pso") && e.to_string().contains("tsp"), "{e}");
    }

    #[test]
    fn unknown_parameter_rejected() {
        let cfg = BaselineConfig::new(AlgorithmId::Pso, 10, 5).with_param("momentum", 0.5);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn algorithm_names_round_trip() {
        for a in AlgorithmId::ALL {
            assert_eq!(a.as_str().parse::<AlgorithmId>().unwrap(), a);
            let json = serde_json::to_string(&a).unwrap();
            assert_eq!(json, format!("\"{a}\""));
        }
    }

    #[test]
    fn aco_classic_matches_uncontrolled_colony() {
        let inst = TspInstance::random_euclidean(20, &mut SeededRng::new(3)).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::AcoClassic, 20, 30);
        let rng = SeededRng::new(11);
        let a = run_baseline(&cfg, Problem::Tsp(&inst), &rng).unwrap();
        let colony = ColonyConfig {
            ants: Some(20),
            max_iterations: 30,
            ..ColonyConfig::default()
        };
        let b = run_dco(&inst, &colony, None, &rng).unwrap();
        assert!(a.same_outcome(&b));
    }
}
