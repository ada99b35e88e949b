//! Colony search for TSP with a sigmoid efficiency controller, plus cluster
//! estimation, tree-ensemble optimization, observational prescription,
//! comparison algorithms, a resource-allocation simulator and the experiment
//! harness used by the `dcode` command line.

pub mod advanced;
pub mod baselines;
pub mod colony;
pub mod config;
pub mod efficiency;
pub mod error;
pub mod experiment;
pub mod metrics;
pub mod problem;
pub mod rng;
pub mod sim;

pub use baselines::{run_baseline, AlgorithmId, BaselineConfig};
pub use colony::{run_dco, ColonyConfig, RunRecord, Solution};
pub use efficiency::{CouplingPolicy, DynamicEfficiency, EfficiencySchedule};
pub use config::CliConfig;
pub use error::{Error, Result};
pub use problem::{ContinuousProblem, Objective, Problem, Tour, TspInstance};
pub use rng::SeededRng;
pub use sim::{AllocationPolicy, Scenario, ScenarioKind, UtilizationTrace};
