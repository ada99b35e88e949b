//! Global-best particle swarm with constriction-style coefficients.

use std::time::Instant;

use rand::Rng;

use crate::colony::{RunRecord, Solution};
use crate::error::{Error, Result};
use crate::problem::ContinuousProblem;
use crate::rng::SeededRng;

use super::{push_best, random_point, BaselineConfig};

pub fn run_pso(problem: &ContinuousProblem, cfg: &BaselineConfig, rng: &mut SeededRng) -> Result<RunRecord> {
    let w = cfg.param("inertia");
    let c1 = cfg.param("cognitive");
    let c2 = cfg.param("social");
    let vclamp = cfg.param("vclamp");
    if !(vclamp > 0.0) {
        return Err(Error::config("pso: vclamp must be positive"));
    }
    let start = Instant::now();
    let np = cfg.population;
    let vmax: Vec<f64> = problem.bounds().iter().map(|(lo, hi)| vclamp * (hi - lo)).collect();

    let mut x: Vec<Vec<f64>> = (0..np).map(|_| random_point(problem, rng)).collect();
    let mut v: Vec<Vec<f64>> = (0..np)
        .map(|_| vmax.iter().map(|&m| rng.gen_range(-m..=m)).collect())
        .collect();
    let mut fx: Vec<f64> = x.iter().map(|p| problem.value(p)).collect();
    let mut evaluations = np as u64;
    let mut pbest = x.clone();
    let mut pbest_f = fx.clone();
    let mut g = argmin(&pbest_f);
    let mut trajectory = Vec::with_capacity(cfg.max_iterations);
    push_best(&mut trajectory, pbest_f[g]);

    for _ in 1..cfg.max_iterations {
        let gbest = pbest[g].clone();
        for i in 0..np {
            for d in 0..problem.dim() {
                let r1: f64 = rng.gen();
                let r2: f64 = rng.gen();
                let vel = w * v[i][d] + c1 * r1 * (pbest[i][d] - x[i][d]) + c2 * r2 * (gbest[d] - x[i][d]);
                v[i][d] = vel.clamp(-vmax[d], vmax[d]);
                x[i][d] += v[i][d];
            }
            problem.clamp(&mut x[i]);
            fx[i] = problem.value(&x[i]);
            evaluations += 1;
            if fx[i] < pbest_f[i] {
                pbest_f[i] = fx[i];
                pbest[i].copy_from_slice(&x[i]);
            }
        }
        g = argmin(&pbest_f);
        push_best(&mut trajectory, pbest_f[g]);
    }

    Ok(RunRecord {
        best_cost_per_iteration: trajectory,
        best: Solution::Point(pbest[g].clone()),
        evaluations,
        wall_time: start.elapsed().as_secs_f64(),
        iterations_run: cfg.max_iterations,
        params: Vec::new(),
        schedule_resets: 0,
    })
}

fn argmin(values: &[f64]) -> usize {
    (0..values.len()).min_by(|&a, &b| values[a].total_cmp(&values[b])).expect("non-empty")
}
