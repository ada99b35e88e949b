//! Multi-seed experiments: run every (problem, algorithm, seed) triple,
//! compute quality, convergence and throughput metrics, and assemble the
//! comparison tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::advanced::{build_clusters, cluster_candidate_lists};
use crate::baselines::{iterations_to_converge, run_baseline, AlgorithmId, BaselineConfig};
use crate::colony::{Colony, ColonyConfig, RunRecord};
use crate::config::DeControllerConfig;
use crate::error::{Error, Result};
use crate::metrics::{computational_efficiency, convergence_rate, relative_improvement, solution_quality, Aggregate};
use crate::problem::{load_with_best_known, ContinuousProblem, Objective, Problem, TspInstance};
use crate::rng::SeededRng;

/// Stream reserved for clustering so it never collides with ant streams.
const CLUSTER_STREAM: u64 = u64::MAX;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ProblemSpec {
    /// A TSPLIB file. Without an explicit `best_known`, a `best_known.csv`
    /// next to the file is consulted.
    Tsplib {
        path: PathBuf,
        #[serde(default)]
        best_known: Option<f64>,
    },
    RandomEuclidean {
        n: usize,
        seed: u64,
    },
    Continuous {
        objective: Objective,
        dim: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgorithmSpec {
    /// Colony search with fixed parameters.
    Dco {
        #[serde(default)]
        label: Option<String>,
    },
    /// Colony search driven by the efficiency controller.
    DcoDe {
        #[serde(default)]
        label: Option<String>,
    },
    /// Colony search restricted to cluster candidate lists; `clusters`
    /// defaults to `ceil(sqrt(n))`.
    DcoCluster {
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        clusters: Option<usize>,
        #[serde(default)]
        de: bool,
    },
    Baseline {
        #[serde(default)]
        label: Option<String>,
        algorithm: AlgorithmId,
        #[serde(default = "default_population")]
        population: usize,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

fn default_population() -> usize {
    20
}

impl AlgorithmSpec {
    pub fn label(&self) -> String {
        match self {
            AlgorithmSpec::Dco { label } => label.clone().unwrap_or_else(|| "dco".into()),
            AlgorithmSpec::DcoDe { label } => label.clone().unwrap_or_else(|| "dco_de".into()),
            AlgorithmSpec::DcoCluster { label, de, .. } => label
                .clone()
                .unwrap_or_else(|| if *de { "dco_cluster_de".into() } else { "dco_cluster".into() }),
            AlgorithmSpec::Baseline { label, algorithm, .. } => label.clone().unwrap_or_else(|| algorithm.to_string()),
        }
    }

    fn runs_on_tsp(&self) -> bool {
        match self {
            AlgorithmSpec::Baseline { algorithm, .. } => algorithm.is_tsp(),
            _ => true,
        }
    }
}

/// Absolute tolerance on the known minimum (0) for iterations-to-converge.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceTargets {
    pub sphere: f64,
    pub rosenbrock: f64,
    pub rastrigin: f64,
}

impl Default for ConvergenceTargets {
    fn default() -> Self {
        Self {
            sphere: 1e-6,
            rosenbrock: 1e-3,
            rastrigin: 1e-6,
        }
    }
}

impl ConvergenceTargets {
    pub fn tolerance(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Sphere => self.sphere,
            Objective::Rosenbrock => self.rosenbrock,
            Objective::Rastrigin => self.rastrigin,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: String,
    pub seeds: Vec<u64>,
    /// Iteration budget applied to every algorithm.
    pub max_iterations: usize,
    pub problems: Vec<ProblemSpec>,
    pub algorithms: Vec<AlgorithmSpec>,
    /// Stability window and relative threshold for the convergence index.
    pub convergence_window: usize,
    pub convergence_epsilon: f64,
    pub targets: ConvergenceTargets,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            name: "experiment".into(),
            seeds: Vec::new(),
            max_iterations: 500,
            problems: Vec::new(),
            algorithms: Vec::new(),
            convergence_window: 25,
            convergence_epsilon: 1e-4,
            targets: ConvergenceTargets::default(),
            output_dir: None,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::config("experiment.seeds must list at least one seed"));
        }
        if self.max_iterations == 0 {
            return Err(Error::config("experiment.max_iterations must be >= 1"));
        }
        if self.problems.is_empty() || self.algorithms.is_empty() {
            return Err(Error::config("experiment needs at least one problem and one algorithm"));
        }
        if self.convergence_window == 0 {
            return Err(Error::config("experiment.convergence_window must be >= 1"));
        }
        let mut labels: Vec<String> = self.algorithms.iter().map(AlgorithmSpec::label).collect();
        labels.sort();
        if let Some(w) = labels.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::config(format!("duplicate algorithm label `{}`", w[0])));
        }
        Ok(())
    }

    /// Makes relative problem paths relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        for p in &mut self.problems {
            if let ProblemSpec::Tsplib { path, .. } = p {
                if path.is_relative() {
                    *path = base.join(&*path);
                }
            }
        }
    }
}

enum Loaded {
    Tsp(TspInstance),
    Continuous(ContinuousProblem),
}

impl Loaded {
    fn name(&self) -> String {
        match self {
            Loaded::Tsp(t) => t.name().to_string(),
            Loaded::Continuous(c) => format!("{}{}", c.objective(), c.dim()),
        }
    }
}

fn load_problem(spec: &ProblemSpec) -> Result<Loaded> {
    Ok(match spec {
        ProblemSpec::Tsplib { path, best_known } => {
            let fixture = path.parent().map(|d| d.join("best_known.csv")).filter(|p| p.is_file());
            let inst = load_with_best_known(path, fixture.as_deref())?;
            Loaded::Tsp(match best_known {
                Some(b) => inst.with_best_known(*b),
                None => inst,
            })
        }
        ProblemSpec::RandomEuclidean { n, seed } => {
            Loaded::Tsp(TspInstance::random_euclidean(*n, &mut SeededRng::new(*seed))?)
        }
        ProblemSpec::Continuous { objective, dim } => Loaded::Continuous(ContinuousProblem::new(*objective, *dim)?),
    })
}

/// Runs one colony variant on `instance`. Clustering time counts toward the
/// reported wall time.
pub fn run_colony_variant(
    instance: &TspInstance,
    colony: &ColonyConfig,
    de: Option<&DeControllerConfig>,
    clusters: Option<usize>,
    rng: &SeededRng,
) -> Result<RunRecord> {
    let start = Instant::now();
    let controller = de.map(|d| d.resolve(colony, instance.len())).transpose()?;
    let candidates = match clusters {
        Some(k) => {
            let coords = instance
                .coords()
                .ok_or_else(|| Error::config("cluster candidate lists need coordinates"))?;
            let points: Vec<Vec<f64>> = coords.iter().map(|c| c.to_vec()).collect();
            let model = build_clusters(&points, k, 100, &mut rng.derive(CLUSTER_STREAM))?;
            Some(cluster_candidate_lists(instance, &model)?)
        }
        None => None,
    };
    let setup = start.elapsed().as_secs_f64();
    let mut record = Colony::new(instance, colony.clone())
        .with_controller(controller)
        .with_candidates(candidates)
        .run(rng)?;
    record.wall_time += setup;
    Ok(record)
}

/// `ceil(sqrt(n))`, the default cluster count.
pub fn default_clusters(n: usize) -> usize {
    (n as f64).sqrt().ceil() as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub seed: u64,
    pub algorithm: String,
    pub instance: String,
    pub best_cost: f64,
    pub sq: Option<f64>,
    pub cr: Option<usize>,
    pub evals: u64,
    pub wall_s: f64,
    pub evals_per_s: f64,
    /// Continuous problems only.
    pub iterations_to_converge: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub instance: String,
    pub algorithm: String,
    pub runs: usize,
    pub best_cost: Aggregate,
    pub sq: Option<Aggregate>,
    /// Over runs that converged.
    pub cr: Option<Aggregate>,
    pub cr_converged_runs: usize,
    pub wall_s: Aggregate,
    pub evals_per_s: Aggregate,
}

/// One row per instance with both a controlled and an uncontrolled colony.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QualityRow {
    pub instance: String,
    pub sq_dcode: f64,
    pub sq_aco: f64,
    pub runtime_dcode_s: f64,
    pub runtime_aco_s: f64,
    pub relative_improvement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub instance: String,
    pub algorithm: String,
    /// Runs that never converge count as the full budget.
    pub mean_iterations_to_converge: f64,
    pub converged_runs: usize,
    pub runs: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub instance: String,
    pub n: usize,
    pub algorithm: String,
    pub mean_wall_s: f64,
    pub mean_evals_per_s: f64,
    pub mean_sq: Option<f64>,
    pub mean_best_cost: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub name: String,
    pub max_iterations: usize,
    pub convergence_window: usize,
    pub convergence_epsilon: f64,
    /// Per instance: `best_known` or `best_observed` (minimum over all runs).
    pub sq_reference: BTreeMap<String, String>,
    pub runs: Vec<RunRow>,
    pub aggregates: Vec<AggregateRow>,
    pub quality: Vec<QualityRow>,
    pub convergence: Vec<ConvergenceRow>,
    pub scaling: Vec<ScalingRow>,
}

pub fn run_experiment(spec: &ExperimentSpec, colony: &ColonyConfig, de: &DeControllerConfig) -> Result<MetricsReport> {
    spec.validate()?;
    let colony = ColonyConfig {
        max_iterations: spec.max_iterations,
        ..colony.clone()
    };
    colony.validate()?;

    let mut runs = Vec::new();
    let mut sq_reference = BTreeMap::new();
    let mut quality = Vec::new();
    let mut convergence = Vec::new();
    let mut scaling = Vec::new();
    let mut aggregates = Vec::new();

    for pspec in &spec.problems {
        let problem = load_problem(pspec)?;
        let name = problem.name();
        let mut records: Vec<(String, u64, RunRecord)> = Vec::new();
        for alg in &spec.algorithms {
            let is_tsp = matches!(problem, Loaded::Tsp(_));
            if alg.runs_on_tsp() != is_tsp {
                continue;
            }
            for &seed in &spec.seeds {
                let rec = run_one(&problem, alg, &colony, de, spec.max_iterations, seed)
                    .map_err(|e| Error::Seed { seed, source: Box::new(e) })?;
                records.push((alg.label(), seed, rec));
            }
        }

        let reference = match &problem {
            Loaded::Tsp(t) => match t.best_known() {
                Some(b) => {
                    sq_reference.insert(name.clone(), "best_known".into());
                    Some(b)
                }
                None => {
                    sq_reference.insert(name.clone(), "best_observed".into());
                    records.iter().map(|r| r.2.best_cost()).reduce(f64::min)
                }
            },
            Loaded::Continuous(_) => None,
        };

        let mut rows = Vec::with_capacity(records.len());
        for (label, seed, rec) in &records {
            let sq = reference.map(|r| solution_quality(rec.best_cost(), r)).transpose()?;
            let ce = computational_efficiency(rec);
            let itc = match &problem {
                Loaded::Continuous(c) => {
                    iterations_to_converge(&rec.best_cost_per_iteration, c.known_minimum().1, spec.targets.tolerance(c.objective()))
                }
                Loaded::Tsp(_) => None,
            };
            rows.push(RunRow {
                seed: *seed,
                algorithm: label.clone(),
                instance: name.clone(),
                best_cost: rec.best_cost(),
                sq,
                cr: convergence_rate(&rec.best_cost_per_iteration, spec.convergence_window, spec.convergence_epsilon),
                evals: rec.evaluations,
                wall_s: ce.wall_s,
                evals_per_s: ce.evals_per_s,
                iterations_to_converge: itc,
            });
        }

        let labels: Vec<String> = spec
            .algorithms
            .iter()
            .filter(|a| a.runs_on_tsp() == matches!(problem, Loaded::Tsp(_)))
            .map(AlgorithmSpec::label)
            .collect();
        for label in &labels {
            let mine: Vec<&RunRow> = rows.iter().filter(|r| &r.algorithm == label).collect();
            let agg = aggregate(&name, label, &mine);
            match &problem {
                Loaded::Tsp(t) => scaling.push(ScalingRow {
                    instance: name.clone(),
                    n: t.len(),
                    algorithm: label.clone(),
                    mean_wall_s: agg.wall_s.mean,
                    mean_evals_per_s: agg.evals_per_s.mean,
                    mean_sq: agg.sq.map(|a| a.mean),
                    mean_best_cost: agg.best_cost.mean,
                }),
                Loaded::Continuous(c) => {
                    let its: Vec<f64> = mine
                        .iter()
                        .map(|r| r.iterations_to_converge.unwrap_or(spec.max_iterations) as f64)
                        .collect();
                    convergence.push(ConvergenceRow {
                        instance: name.clone(),
                        algorithm: label.clone(),
                        mean_iterations_to_converge: its.iter().sum::<f64>() / its.len() as f64,
                        converged_runs: mine.iter().filter(|r| r.iterations_to_converge.is_some()).count(),
                        runs: mine.len(),
                        tolerance: spec.targets.tolerance(c.objective()),
                    });
                }
            }
            aggregates.push(agg);
        }

        if let Loaded::Tsp(_) = problem {
            if let Some(row) = quality_row(&name, spec, &aggregates)? {
                quality.push(row);
            }
        }
        runs.extend(rows);
    }

    Ok(MetricsReport {
        name: spec.name.clone(),
        max_iterations: spec.max_iterations,
        convergence_window: spec.convergence_window,
        convergence_epsilon: spec.convergence_epsilon,
        sq_reference,
        runs,
        aggregates,
        quality,
        convergence,
        scaling,
    })
}

fn run_one(
    problem: &Loaded,
    alg: &AlgorithmSpec,
    colony: &ColonyConfig,
    de: &DeControllerConfig,
    budget: usize,
    seed: u64,
) -> Result<RunRecord> {
    let rng = SeededRng::new(seed);
    match (problem, alg) {
        (Loaded::Tsp(t), AlgorithmSpec::Dco { .. }) => run_colony_variant(t, colony, None, None, &rng),
        (Loaded::Tsp(t), AlgorithmSpec::DcoDe { .. }) => run_colony_variant(t, colony, Some(de), None, &rng),
        (Loaded::Tsp(t), AlgorithmSpec::DcoCluster { clusters, de: with_de, .. }) => {
            let k = clusters.unwrap_or_else(|| default_clusters(t.len()));
            run_colony_variant(t, colony, with_de.then_some(de), Some(k), &rng)
        }
        (p, AlgorithmSpec::Baseline { algorithm, population, params, .. }) => {
            let cfg = BaselineConfig {
                algorithm: *algorithm,
                population: *population,
                max_iterations: budget,
                params: params.clone(),
            };
            let problem = match p {
                Loaded::Tsp(t) => Problem::Tsp(t),
                Loaded::Continuous(c) => Problem::Continuous(c),
            };
            run_baseline(&cfg, problem, &rng)
        }
        (Loaded::Continuous(_), _) => unreachable!("colony variants are filtered to TSP problems"),
    }
}

fn aggregate(instance: &str, label: &str, rows: &[&RunRow]) -> AggregateRow {
    let col = |f: &dyn Fn(&RunRow) -> f64| Aggregate::of(&rows.iter().map(|r| f(r)).collect::<Vec<_>>()).expect("at least one seed");
    let sq: Vec<f64> = rows.iter().filter_map(|r| r.sq).collect();
    let cr: Vec<f64> = rows.iter().filter_map(|r| r.cr.map(|c| c as f64)).collect();
    AggregateRow {
        instance: instance.to_string(),
        algorithm: label.to_string(),
        runs: rows.len(),
        best_cost: col(&|r| r.best_cost),
        sq: Aggregate::of(&sq),
        cr: Aggregate::of(&cr),
        cr_converged_runs: cr.len(),
        wall_s: col(&|r| r.wall_s),
        evals_per_s: col(&|r| r.evals_per_s),
    }
}

/// Pairs the first controlled colony with the first uncontrolled one
/// (`dco`, else `aco_classic`).
fn quality_row(instance: &str, spec: &ExperimentSpec, aggregates: &[AggregateRow]) -> Result<Option<QualityRow>> {
    let find = |pred: &dyn Fn(&AlgorithmSpec) -> bool| {
        spec.algorithms.iter().find(|a| pred(a)).and_then(|a| {
            let label = a.label();
            aggregates.iter().find(|g| g.instance == instance && g.algorithm == label)
        })
    };
    let de = find(&|a| matches!(a, AlgorithmSpec::DcoDe { .. }));
    let plain = find(&|a| matches!(a, AlgorithmSpec::Dco { .. }))
        .or_else(|| find(&|a| matches!(a, AlgorithmSpec::Baseline { algorithm: AlgorithmId::AcoClassic, .. })));
    let (Some(de), Some(plain)) = (de, plain) else {
        return Ok(None);
    };
    let (Some(sq_de), Some(sq_plain)) = (de.sq, plain.sq) else {
        return Ok(None);
    };
    Ok(Some(QualityRow {
        instance: instance.to_string(),
        sq_dcode: sq_de.mean,
        sq_aco: sq_plain.mean,
        runtime_dcode_s: de.wall_s.mean,
        runtime_aco_s: plain.wall_s.mean,
        relative_improvement: relative_improvement(sq_de.mean, sq_plain.mean)?,
    }))
}

fn opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// Writes `per_seed.csv`, `aggregate.json` and whichever of
/// `quality.csv`/`convergence.csv`/`scaling.csv` have rows.
pub fn write_report(report: &MetricsReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let per_seed = dir.join("per_seed.csv");
    let mut w = csv::Writer::from_path(&per_seed)?;
    w.write_record(["seed", "algorithm", "instance", "best_cost", "sq", "cr", "evals", "wall_s"])?;
    for r in &report.runs {
        w.write_record([
            r.seed.to_string(),
            r.algorithm.clone(),
            r.instance.clone(),
            format!("{:?}", r.best_cost),
            opt(r.sq),
            opt(r.cr),
            r.evals.to_string(),
            format!("{:?}", r.wall_s),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&per_seed, e))?;
    written.push(per_seed);

    let agg = dir.join("aggregate.json");
    let json = serde_json::to_string_pretty(&serde_json::json!({
        "name": report.name,
        "max_iterations": report.max_iterations,
        "convergence_window": report.convergence_window,
        "convergence_epsilon": report.convergence_epsilon,
        "sq_reference": report.sq_reference,
        "aggregates": report.aggregates,
        "quality": report.quality,
        "convergence": report.convergence,
        "scaling": report.scaling,
    }))?;
    fs::write(&agg, json + "\n").map_err(|e| Error::io(&agg, e))?;
    written.push(agg);

    if !report.quality.is_empty() {
        let p = dir.join("quality.csv");
        write_csv(&p, &report.quality)?;
        written.push(p);
    }
    if !report.convergence.is_empty() {
        let p = dir.join("convergence.csv");
        write_csv(&p, &report.convergence)?;
        written.push(p);
    }
    if !report.scaling.is_empty() {
        let p = dir.join("scaling.csv");
        write_csv(&p, &report.scaling)?;
        written.push(p);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(problems: Vec<ProblemSpec>, algorithms: Vec<AlgorithmSpec>, seeds: Vec<u64>, iters: usize) -> ExperimentSpec {
        ExperimentSpec {
            seeds,
            max_iterations: iters,
            problems,
            algorithms,
            ..ExperimentSpec::default()
        }
    }

    #[test]
    fn empty_seed_list_rejected() {
        let s = spec(
            vec![ProblemSpec::RandomEuclidean { n: 10, seed: 0 }],
            vec![AlgorithmSpec::Dco { label: None }],
            vec![],
            5,
        );
        assert!(run_experiment(&s, &ColonyConfig::default(), &DeControllerConfig::default()).is_err());
    }

    #[test]
    fn duplicate_labels_rejected() {
        let s = spec(
            vec![ProblemSpec::RandomEuclidean { n: 10, seed: 0 }],
            vec![AlgorithmSpec::Dco { label: None }, AlgorithmSpec::Dco { label: None }],
            vec![1],
            5,
        );
        assert!(s.validate().is_err());
    }

    #[test]
    fn table_one_arithmetic() {
        let s = spec(
            vec![ProblemSpec::RandomEuclidean { n: 15, seed: 2 }],
            vec![AlgorithmSpec::Dco { label: None }, AlgorithmSpec::DcoDe { label: None }],
            vec![1, 2, 3],
            20,
        );
        let r = run_experiment(&s, &ColonyConfig::default(), &DeControllerConfig::default()).unwrap();
        assert_eq!(r.runs.len(), 6);
        assert_eq!(r.sq_reference["rand15_s2"], "best_observed");
        let row = &r.quality[0];
        let want = relative_improvement(row.sq_dcode, row.sq_aco).unwrap();
        assert_eq!(row.relative_improvement, want);
        assert!(r.runs.iter().all(|x| x.sq.unwrap() <= 100.0));
        assert!(r.runs.iter().any(|x| x.sq == Some(100.0)));
    }

    #[test]
    fn continuous_rows_fill_table_two() {
        let s = spec(
            vec![ProblemSpec::Continuous { objective: Objective::Sphere, dim: 3 }],
            vec![
                AlgorithmSpec::Baseline {
                    label: None,
                    algorithm: AlgorithmId::Tgd,
                    population: 1,
                    params: BTreeMap::new(),
                },
                AlgorithmSpec::Dco { label: None },
            ],
            vec![4],
            100,
        );
        let r = run_experiment(&s, &ColonyConfig::default(), &DeControllerConfig::default()).unwrap();
        assert_eq!(r.runs.len(), 1, "colony is skipped on continuous problems");
        assert_eq!(r.convergence.len(), 1);
        assert!(r.quality.is_empty() && r.scaling.is_empty());
        assert!(r.runs[0].iterations_to_converge.is_some());
    }

    #[test]
    fn algorithm_spec_json_shape() {
        let a: AlgorithmSpec = serde_json::from_str(r#"{"kind":"baseline","algorithm":"pso","population":30}"#).unwrap();
        assert_eq!(a.label(), "pso");
        assert!(serde_json::from_str::<AlgorithmSpec>(r#"{"kind":"dco","colour":1}"#).is_err());
        let p: ProblemSpec = serde_json::from_str(r#"{"random_euclidean":{"n":30,"seed":1}}"#).unwrap();
        assert_eq!(p, ProblemSpec::RandomEuclidean { n: 30, seed: 1 });
    }

    #[test]
    fn failing_seed_is_named() {
        let s = spec(
            vec![ProblemSpec::Continuous { objective: Objective::Sphere, dim: 2 }],
            vec![AlgorithmSpec::Baseline {
                label: None,
                algorithm: AlgorithmId::DeRand1bin,
                population: 2,
                params: BTreeMap::new(),
            }],
            vec![77],
            5,
        );
        let e = run_experiment(&s, &ColonyConfig::default(), &DeControllerConfig::default()).unwrap_err();
        assert!(e.to_string().contains("seed 77"), "{e}");
    }
}
