//! Projected gradient descent with a fixed step, and a variant whose step is
//! scaled by the efficiency curve.

use std::time::Instant;

use crate::colony::{IterationParams, RunRecord, Solution};
use crate::efficiency::EfficiencySchedule;
use crate::error::{Error, Result};
use crate::problem::ContinuousProblem;
use crate::rng::SeededRng;

use super::random_point;

/// Step rule for the efficiency-scaled variant: the step at iteration t is
/// `base_step * (1 + E(t) * (boost - 1)) * m`, where `m` starts at 1 and is
/// halved whenever a step fails to decrease the objective.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DgdParams {
    pub schedule: EfficiencySchedule,
    pub base_step: f64,
    pub boost: f64,
}

pub fn run_tgd(problem: &ContinuousProblem, step: f64, max_iterations: usize, rng: &mut SeededRng) -> Result<RunRecord> {
    let x0 = random_point(problem, rng);
    run_tgd_from(problem, step, max_iterations, &x0)
}

pub fn run_dgd(problem: &ContinuousProblem, params: &DgdParams, max_iterations: usize, rng: &mut SeededRng) -> Result<RunRecord> {
    let x0 = random_point(problem, rng);
    run_dgd_from(problem, params, max_iterations, &x0)
}

pub fn run_tgd_from(problem: &ContinuousProblem, step: f64, max_iterations: usize, x0: &[f64]) -> Result<RunRecord> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::config("step must be positive"));
    }
    descend(problem, x0, max_iterations, |_| (step, None), false)
}

pub fn run_dgd_from(problem: &ContinuousProblem, params: &DgdParams, max_iterations: usize, x0: &[f64]) -> Result<RunRecord> {
    if !(params.base_step > 0.0 && params.base_step.is_finite()) {
        return Err(Error::config("step must be positive"));
    }
    if !(params.boost >= 1.0 && params.boost.is_finite()) {
        return Err(Error::config("boost must be >= 1"));
    }
    let DgdParams { schedule, base_step, boost } = *params;
    descend(
        problem,
        x0,
        max_iterations,
        |t| {
            let e = schedule.at(t as f64);
            (base_step * (1.0 + e * (boost - 1.0)), Some(e))
        },
        true,
    )
}

/// One objective+gradient evaluation per iteration. With `guard`, a point
/// that is worse than the previous accepted one is discarded and the step
/// multiplier is halved for the rest of the run.
fn descend(
    problem: &ContinuousProblem,
    x0: &[f64],
    max_iterations: usize,
    step_at: impl Fn(usize) -> (f64, Option<f64>),
    guard: bool,
) -> Result<RunRecord> {
    if max_iterations == 0 {
        return Err(Error::config("max_iterations must be >= 1"));
    }
    if x0.len() != problem.dim() {
        return Err(Error::Domain(format!("start point has {} coordinates, problem has {}", x0.len(), problem.dim())));
    }
    let start = Instant::now();
    let dim = problem.dim();

    let mut x = x0.to_vec();
    problem.clamp(&mut x);
    let mut accepted = x.clone();
    let mut accepted_f = f64::INFINITY;
    let mut accepted_g = vec![0.0; dim];
    let mut grad = vec![0.0; dim];
    let mut multiplier = 1.0;

    let mut best_x = x.clone();
    let mut best_f = f64::INFINITY;
    let mut trajectory = Vec::with_capacity(max_iterations);
    let mut params = Vec::with_capacity(max_iterations);

    for t in 0..max_iterations {
        let f = problem.value(&x);
        problem.gradient(&x, &mut grad);
        if !f.is_finite() || grad.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFiniteGradient { iteration: t + 1 });
        }
        if guard && f > accepted_f {
            multiplier *= 0.5;
        } else {
            accepted.copy_from_slice(&x);
            accepted_f = f;
            accepted_g.copy_from_slice(&grad);
        }
        if f < best_f {
            best_f = f;
            best_x.copy_from_slice(&x);
        }
        trajectory.push(best_f);

        let (step, e) = step_at(t);
        let step = step * multiplier;
        params.push(IterationParams {
            efficiency: e,
            rho: step,
            ants: 1,
        });
        for ((xi, ai), gi) in x.iter_mut().zip(&accepted).zip(&accepted_g) {
            *xi = ai - step * gi;
        }
        problem.clamp(&mut x);
    }

    Ok(RunRecord {
        best_cost_per_iteration: trajectory,
        best: Solution::Point(best_x),
        evaluations: max_iterations as u64,
        wall_time: start.elapsed().as_secs_f64(),
        iterations_run: max_iterations,
        params,
        schedule_resets: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Objective;

    fn sphere(dim: usize) -> ContinuousProblem {
        ContinuousProblem::new(Objective::Sphere, dim).unwrap()
    }

    #[test]
    fn fixed_step_on_sphere_contracts_geometrically() {
        // x <- x - 0.1 * 2x = 0.8x, so f shrinks by 0.64 per step.
        let rec = run_tgd_from(&sphere(2), 0.1, 4, &[1.0, 1.0]).unwrap();
        let expected = [2.0, 1.28, 0.8192, 0.524288];
        for (got, want) in rec.best_cost_per_iteration.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert_eq!(rec.evaluations, 4);
    }

    #[test]
    fn boost_of_one_matches_fixed_step() {
        let p = sphere(3);
        let params = DgdParams {
            schedule: EfficiencySchedule::new(0.5, 10.0).unwrap(),
            base_step: 0.05,
            boost: 1.0,
        };
        let x0 = [1.0, -2.0, 0.5];
        let a = run_dgd_from(&p, &params, 50, &x0).unwrap();
        let b = run_tgd_from(&p, 0.05, 50, &x0).unwrap();
        assert_eq!(a.best_cost_per_iteration, b.best_cost_per_iteration);
    }

    #[test]
    fn guard_rejects_overshoot() {
        // Step 0.6 on the sphere maps x to -0.2x: fine. Step 1.2 maps x to
        // -1.4x, which diverges without the guard.
        let p = sphere(1);
        let params = DgdParams {
            schedule: EfficiencySchedule::new(100.0, 0.0).unwrap(),
            base_step: 0.4,
            boost: 3.0,
        };
        let rec = run_dgd_from(&p, &params, 60, &[1.0]).unwrap();
        assert!(rec.best_cost() < 1e-6, "{}", rec.best_cost());
        let unguarded = run_tgd_from(&p, 1.2, 10, &[1.0]).unwrap();
        assert_eq!(unguarded.best_cost(), 1.0);
    }

    #[test]
    fn trajectory_is_non_increasing() {
        let p = ContinuousProblem::new(Objective::Rastrigin, 4).unwrap();
        let rec = run_tgd(&p, 0.01, 200, &mut SeededRng::new(5)).unwrap();
        assert!(rec.best_cost_per_iteration.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn bad_step_rejected() {
        assert!(run_tgd_from(&sphere(1), 0.0, 5, &[1.0]).is_err());
        assert!(run_tgd_from(&sphere(1), 0.1, 0, &[1.0]).is_err());
    }
}
