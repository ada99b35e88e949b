use std::fs::File;
use std::path::{Path, PathBuf};

use dcode_core::advanced::{olp_prescribe, Constraint, Prescription, PrescriptionDataset};
use dcode_core::baselines::iterations_to_converge;
use dcode_core::experiment::{run_colony_variant, run_experiment, write_report, ConvergenceTargets};
use dcode_core::metrics::solution_quality;
use dcode_core::problem::load_with_best_known;
use dcode_core::sim::{generate_scenario, simulate as run_sim, write_trace_csv, AllocationPolicy, ScenarioParams, SimulationSummary};
use dcode_core::{
    run_baseline, AlgorithmId, ContinuousProblem, Objective, Problem, RunRecord, ScenarioKind, SeededRng, Solution,
    TspInstance,
};
use serde_json::json;

use crate::error::{input, CliError, CliResult, EXIT_INFEASIBLE};
use crate::output::{ensure_dir, load_config, write_effective_config, write_json, write_run_csv, write_text};
use crate::{BaselineArgs, BenchArgs, PrescribeArgs, SimulateArgs, SolveArgs};

fn load_instance(path: &Path, best_known: Option<&Path>) -> CliResult<TspInstance> {
    let fixture = match best_known {
        Some(p) => Some(p.to_path_buf()),
        None => path
            .parent()
            .map(|d| d.join("best_known.csv"))
            .filter(|p| p.is_file()),
    };
    input(load_with_best_known(path, fixture.as_deref()))
}

fn quality(instance: &TspInstance, cost: f64) -> CliResult<Option<f64>> {
    instance
        .best_known()
        .map(|b| solution_quality(cost, b))
        .transpose()
        .map_err(CliError::runtime)
}

fn fmt_sq(sq: Option<f64>) -> String {
    sq.map(|v| format!("{v:.3}")).unwrap_or_else(|| "n/a".into())
}

pub fn solve(a: &SolveArgs) -> CliResult<()> {
    let mut cfg = load_config(a.config.as_deref())?;
    let instance = load_instance(&a.instance, a.best_known.as_deref())?;
    let n = instance.len();
    if a.clusters == Some(0) {
        return Err(CliError::config("--clusters must be >= 1"));
    }
    cfg.colony.ants = Some(cfg.colony.ants_for(n));
    let de = if a.no_de {
        None
    } else {
        let m = cfg.de_controller.materialized(&cfg.colony, n)?;
        cfg.de_controller = m.clone();
        Some(m)
    };

    let record = run_colony_variant(&instance, &cfg.colony, de.as_ref(), a.clusters, &SeededRng::new(a.seed))?;
    let sq = quality(&instance, record.best_cost())?;

    ensure_dir(&a.out)?;
    write_run_csv(&a.out.join("run.csv"), &record)?;
    let tour = record.best_tour().map(|t| t.order.clone()).unwrap_or_default();
    write_json(
        &a.out.join("summary.json"),
        &json!({
            "instance": instance.name(),
            "n": n,
            "seed": a.seed,
            "controller": !a.no_de,
            "clusters": a.clusters,
            "best_cost": record.best_cost(),
            "best_known": instance.best_known(),
            "sq": sq,
            "evaluations": record.evaluations,
            "iterations": record.iterations_run,
            "schedule_resets": record.schedule_resets,
            "wall_s": record.wall_time,
            "tour": tour,
        }),
    )?;
    write_effective_config(&a.out, &cfg)?;

    println!("instance {}", instance.name());
    println!("best_cost {:?}", record.best_cost());
    println!("sq {}", fmt_sq(sq));
    Ok(())
}

pub fn baseline(a: &BaselineArgs) -> CliResult<()> {
    let mut cfg = load_config(a.config.as_deref())?;
    let algorithm: AlgorithmId = match (&a.algorithm, cfg.baseline.algorithm) {
        (Some(s), _) => s.parse()?,
        (None, Some(alg)) => alg,
        (None, None) => return Err(CliError::usage("no algorithm: pass --algorithm or set baseline.algorithm")),
    };
    if let Some(o) = &a.objective {
        cfg.baseline.objective = o.parse::<Objective>()?;
    }
    if let Some(d) = a.dim {
        cfg.baseline.dim = d;
    }
    cfg.baseline.algorithm = Some(algorithm);
    let bcfg = cfg.baseline.to_config(algorithm);
    bcfg.validate()?;
    cfg.baseline.params = bcfg.effective_params();

    let tsp = a.instance.as_deref().map(|p| load_instance(p, None)).transpose()?;
    let continuous = match &tsp {
        Some(_) => None,
        None => Some(ContinuousProblem::new(cfg.baseline.objective, cfg.baseline.dim)?),
    };
    let problem = match (&tsp, &continuous) {
        (Some(t), _) => Problem::Tsp(t),
        (None, Some(c)) => Problem::Continuous(c),
        (None, None) => unreachable!(),
    };
    let record = run_baseline(&bcfg, problem, &SeededRng::new(a.seed))?;

    let (problem_name, sq, itc) = match (&tsp, &continuous) {
        (Some(t), _) => (t.name().to_string(), quality(t, record.best_cost())?, None),
        (None, Some(c)) => {
            let tol = ConvergenceTargets::default().tolerance(c.objective());
            let itc = iterations_to_converge(&record.best_cost_per_iteration, c.known_minimum().1, tol);
            (format!("{}{}", c.objective(), c.dim()), None, itc)
        }
        (None, None) => unreachable!(),
    };

    ensure_dir(&a.out)?;
    write_run_csv(&a.out.join("run.csv"), &record)?;
    write_json(
        &a.out.join("summary.json"),
        &json!({
            "algorithm": algorithm,
            "problem": problem_name,
            "seed": a.seed,
            "best_cost": record.best_cost(),
            "sq": sq,
            "iterations_to_converge": itc,
            "evaluations": record.evaluations,
            "iterations": record.iterations_run,
            "wall_s": record.wall_time,
            "best": solution_json(&record),
        }),
    )?;
    write_effective_config(&a.out, &cfg)?;

    println!("algorithm {algorithm}");
    println!("problem {problem_name}");
    println!("best_cost {:?}", record.best_cost());
    if tsp.is_some() {
        println!("sq {}", fmt_sq(sq));
    } else {
        println!(
            "iterations_to_converge {}",
            itc.map(|i| i.to_string()).unwrap_or_else(|| "did not converge".into())
        );
    }
    Ok(())
}

fn solution_json(record: &RunRecord) -> serde_json::Value {
    match &record.best {
        Solution::Tour(t) => json!({ "tour": t.order }),
        Solution::Point(x) => json!({ "point": x }),
    }
}

pub fn bench(a: &BenchArgs) -> CliResult<()> {
    let cfg = input(dcode_core::CliConfig::load(&a.spec))?;
    let mut spec = cfg
        .experiment
        .clone()
        .ok_or_else(|| CliError::config(format!("{}: no `experiment` section", a.spec.display())))?;
    let base = a.spec.parent().map(Path::to_path_buf).unwrap_or_default();
    spec.resolve_paths(&base);
    let out: PathBuf = a
        .out
        .clone()
        .or_else(|| spec.output_dir.as_ref().map(|d| if d.is_relative() { base.join(d) } else { d.clone() }))
        .unwrap_or_else(|| PathBuf::from("dcode_out/bench"));

    let report = run_experiment(&spec, &cfg.colony, &cfg.de_controller)?;
    write_report(&report, &out)?;
    write_effective_config(&out, &cfg)?;

    for g in &report.aggregates {
        let sq = g.sq.map(|s| format!("{:.3}", s.mean)).unwrap_or_else(|| "n/a".into());
        println!(
            "{} {} runs={} best_cost_mean={:?} sq_mean={sq}",
            g.instance, g.algorithm, g.runs, g.best_cost.mean
        );
    }
    for row in &report.quality {
        println!(
            "quality {} sq_dcode={:.3} sq_aco={:.3} relative_improvement={:+.1}",
            row.instance, row.sq_dcode, row.sq_aco, row.relative_improvement
        );
    }
    for row in &report.convergence {
        println!(
            "convergence {} {} mean_iterations_to_converge={:.1} converged={}/{}",
            row.instance, row.algorithm, row.mean_iterations_to_converge, row.converged_runs, row.runs
        );
    }
    Ok(())
}

pub fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let mut cfg = load_config(a.config.as_deref())?;
    let kind: ScenarioKind = a.scenario.parse()?;
    let params = &cfg.scenario;
    let scenario = generate_scenario(kind, params, &mut SeededRng::new(a.seed))?;
    let schedule = params.schedule()?;

    ensure_dir(&a.out)?;
    let mut before = None;
    let mut after = None;
    if !a.de_only {
        let trace = run_sim(&scenario, &AllocationPolicy::static_equal(scenario.tasks()))?;
        write_trace(&a.out.join("trace_static.csv"), &scenario, &trace)?;
        before = Some(trace.mean_percent());
    }
    if !a.static_only {
        let policy = AllocationPolicy::de_adaptive(scenario.tasks(), schedule, params.review_period);
        let trace = run_sim(&scenario, &policy)?;
        write_trace(&a.out.join("trace_de.csv"), &scenario, &trace)?;
        after = Some(trace.mean_percent());
    }
    let summary = SimulationSummary::new(kind.as_str(), before, after)?;
    write_json(&a.out.join("summary.json"), &summary)?;

    cfg.scenario = ScenarioParams {
        load: Some(params.load_for(kind)),
        period: Some(params.period.unwrap_or(params.horizon as f64 / 2.0)),
        k: Some(schedule.k()),
        t0: Some(schedule.t0()),
        ..params.clone()
    };
    write_effective_config(&a.out, &cfg)?;

    println!("{}", serde_json::to_string_pretty(&summary).map_err(CliError::runtime)?);
    Ok(())
}

fn write_trace(path: &Path, scenario: &dcode_core::Scenario, trace: &dcode_core::UtilizationTrace) -> CliResult<()> {
    let file = File::create(path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    write_trace_csv(scenario, trace, file)?;
    Ok(())
}

pub fn prescribe(a: &PrescribeArgs) -> CliResult<()> {
    let file = File::open(&a.data).map_err(|e| CliError::config(format!("{}: {e}", a.data.display())))?;
    let constraints = a
        .constraints
        .iter()
        .map(|c| c.parse::<Constraint>())
        .collect::<dcode_core::Result<Vec<_>>>()?;
    let ds = PrescriptionDataset::from_csv(file)
        .map_err(|e| CliError::config(format!("{}: {e}", a.data.display())))?
        .with_constraints(constraints);
    // Ordering comparisons on categorical columns are malformed constraints.
    let result = olp_prescribe(&ds).map_err(CliError::config)?;

    let constraint_text: Vec<String> = ds.constraints.iter().map(|c| c.to_string()).collect();
    let outcome = match &result {
        Prescription::Feasible { index, record } => {
            let fields: serde_json::Map<String, serde_json::Value> = ds
                .features
                .iter()
                .zip(&record.x)
                .map(|(name, v)| (name.clone(), json!(v.to_string())))
                .collect();
            json!({ "feasible": true, "index": index, "record": fields, "f": record.f, "constraints": constraint_text })
        }
        Prescription::Infeasible => json!({ "feasible": false, "constraints": constraint_text }),
    };
    if let Some(out) = &a.out {
        ensure_dir(out)?;
        write_json(&out.join("prescription.json"), &outcome)?;
        write_effective_config(out, &dcode_core::CliConfig::default())?;
        write_text(&out.join("constraints.txt"), &(constraint_text.join("\n") + "\n"))?;
    }

    match result {
        Prescription::Feasible { index, record } => {
            println!("record {index}");
            for (name, v) in ds.features.iter().zip(&record.x) {
                println!("{name}={v}");
            }
            println!("f={}", record.f);
            Ok(())
        }
        Prescription::Infeasible => Err(CliError {
            code: EXIT_INFEASIBLE,
            message: format!("infeasible: no record satisfies {}", constraint_text.join(", ")),
        }),
    }
}
