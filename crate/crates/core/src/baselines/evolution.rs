//! (mu, lambda) evolution strategy with self-adaptive step size, and
//! DE/rand/1/bin differential evolution.

use std::time::Instant;

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::colony::{RunRecord, Solution};
use crate::error::{Error, Result};
use crate::problem::ContinuousProblem;
use crate::rng::SeededRng;

use super::{push_best, random_point, BaselineConfig};

struct Individual {
    x: Vec<f64>,
    sigma: f64,
    f: f64,
}

pub fn run_es(problem: &ContinuousProblem, cfg: &BaselineConfig, rng: &mut SeededRng) -> Result<RunRecord> {
    let lambda = cfg.population;
    let mu = cfg.param("mu");
    if !(mu >= 1.0 && mu.fract() == 0.0 && (mu as usize) <= lambda) {
        return Err(Error::config(format!("es: mu must be an integer in [1, population={lambda}]")));
    }
    let mu = mu as usize;
    let sigma0 = cfg.param("sigma0");
    if !(sigma0 > 0.0) {
        return Err(Error::config("es: sigma0 must be positive"));
    }
    let start = Instant::now();
    let dim = problem.dim();
    let tau = 1.0 / (dim as f64).sqrt();
    let mean_range = problem.bounds().iter().map(|(lo, hi)| hi - lo).sum::<f64>() / dim as f64;

    let mut evaluations = 0u64;
    let mut trajectory = Vec::with_capacity(cfg.max_iterations);
    let mut best = (f64::INFINITY, Vec::new());

    let mut offspring: Vec<Individual> = (0..lambda)
        .map(|_| {
            let x = random_point(problem, rng);
            Individual {
                f: problem.value(&x),
                x,
                sigma: sigma0 * mean_range,
            }
        })
        .collect();
    evaluations += lambda as u64;

    for it in 0..cfg.max_iterations {
        if it > 0 {
            let parents = &offspring;
            let mut next = Vec::with_capacity(lambda);
            for _ in 0..lambda {
                let p = &parents[rng.gen_range(0..parents.len())];
                let z: f64 = rng.sample(StandardNormal);
                let sigma = p.sigma * (tau * z).exp();
                let mut x: Vec<f64> = p.x.iter().map(|xi| xi + sigma * rng.sample::<f64, _>(StandardNormal)).collect();
                problem.clamp(&mut x);
                next.push(Individual {
                    f: problem.value(&x),
                    x,
                    sigma,
                });
            }
            evaluations += lambda as u64;
            offspring = next;
        }
        for ind in &offspring {
            if ind.f < best.0 {
                best = (ind.f, ind.x.clone());
            }
        }
        push_best(&mut trajectory, best.0);
        // Comma selection: the mu best offspring become the next parents.
        offspring.sort_by(|a, b| a.f.total_cmp(&b.f));
        offspring.truncate(mu);
    }

    Ok(RunRecord {
        best_cost_per_iteration: trajectory,
        best: Solution::Point(best.1),
        evaluations,
        wall_time: start.elapsed().as_secs_f64(),
        iterations_run: cfg.max_iterations,
        params: Vec::new(),
        schedule_resets: 0,
    })
}

pub fn run_de_rand1bin(problem: &ContinuousProblem, cfg: &BaselineConfig, rng: &mut SeededRng) -> Result<RunRecord> {
    let np = cfg.population;
    if np < 4 {
        return Err(Error::config("de_rand1bin needs population >= 4"));
    }
    let f = cfg.param("f");
    let cr = cfg.param("cr");
    if !(f > 0.0 && f <= 2.0) {
        return Err(Error::config("de_rand1bin: f must lie in (0, 2]"));
    }
    if !(0.0..=1.0).contains(&cr) {
        return Err(Error::config("de_rand1bin: cr must lie in [0, 1]"));
    }
    let start = Instant::now();
    let dim = problem.dim();

    let mut pop: Vec<Vec<f64>> = (0..np).map(|_| random_point(problem, rng)).collect();
    let mut fit: Vec<f64> = pop.iter().map(|x| problem.value(x)).collect();
    let mut evaluations = np as u64;
    let mut trajectory = Vec::with_capacity(cfg.max_iterations);
    push_best(&mut trajectory, fit.iter().copied().fold(f64::INFINITY, f64::min));

    for _ in 1..cfg.max_iterations {
        for i in 0..np {
            let [r1, r2, r3] = distinct_others(rng, np, i);
            let jrand = rng.gen_range(0..dim);
            let mut trial: Vec<f64> = (0..dim)
                .map(|j| {
                    if j == jrand || rng.gen::<f64>() < cr {
                        pop[r1][j] + f * (pop[r2][j] - pop[r3][j])
                    } else {
                        pop[i][j]
                    }
                })
                .collect();
            problem.clamp(&mut trial);
            let ft = problem.value(&trial);
            evaluations += 1;
            if ft <= fit[i] {
                pop[i] = trial;
                fit[i] = ft;
            }
        }
        push_best(&mut trajectory, fit.iter().copied().fold(f64::INFINITY, f64::min));
    }

    let best = (0..np).min_by(|&a, &b| fit[a].total_cmp(&fit[b])).expect("population is non-empty");
    Ok(RunRecord {
        best_cost_per_iteration: trajectory,
        best: Solution::Point(pop[best].clone()),
        evaluations,
        wall_time: start.elapsed().as_secs_f64(),
        iterations_run: cfg.max_iterations,
        params: Vec::new(),
        schedule_resets: 0,
    })
}

/// Three distinct indices in `0..n`, none equal to `exclude`.
fn distinct_others(rng: &mut SeededRng, n: usize, exclude: usize) -> [usize; 3] {
    let picked = sample(rng, n - 1, 3);
    let mut out = [0; 3];
    for (o, p) in out.iter_mut().zip(picked.iter()) {
        *o = if p >= exclude { p + 1 } else { p };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::AlgorithmId;
    use crate::problem::Objective;

    #[test]
    fn es_improves_on_sphere_within_budget() {
        let p = ContinuousProblem::new(Objective::Sphere, 5).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::Es, 20, 100);
        let rec = run_es(&p, &cfg, &mut SeededRng::new(1)).unwrap();
        assert!(rec.best_cost() < 1e-2, "{}", rec.best_cost());
        assert_eq!(rec.evaluations, 20 * 100);
        assert!(rec.best_cost_per_iteration.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn de_improves_on_sphere_within_budget() {
        let p = ContinuousProblem::new(Objective::Sphere, 5).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::DeRand1bin, 20, 150);
        let rec = run_de_rand1bin(&p, &cfg, &mut SeededRng::new(1)).unwrap();
        assert!(rec.best_cost() < 1e-3, "{}", rec.best_cost());
        assert!(rec.evaluations <= 20 * 150);
        let Solution::Point(x) = &rec.best else { panic!() };
        assert!(x.iter().zip(p.bounds()).all(|(v, (lo, hi))| lo <= v && v <= hi));
    }

    #[test]
    fn distinct_indices_avoid_target() {
        let mut rng = SeededRng::new(9);
        for i in 0..4 {
            for _ in 0..50 {
                let r = distinct_others(&mut rng, 4, i);
                assert!(!r.contains(&i));
                assert!(r[0] != r[1] && r[1] != r[2] && r[0] != r[2]);
            }
        }
    }

    #[test]
    fn parameter_ranges_checked() {
        let p = ContinuousProblem::new(Objective::Sphere, 2).unwrap();
        let mut rng = SeededRng::new(0);
        assert!(run_de_rand1bin(&p, &BaselineConfig::new(AlgorithmId::DeRand1bin, 3, 5), &mut rng).is_err());
        let cfg = BaselineConfig::new(AlgorithmId::Es, 4, 5).with_param("mu", 5.0);
        assert!(run_es(&p, &cfg, &mut rng).is_err());
    }
}
