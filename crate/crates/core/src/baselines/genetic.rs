//! Permutation genetic algorithm for TSP: tournament selection, order
//! crossover, swap mutation, elitism.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::colony::{RunRecord, Solution};
use crate::error::{Error, Result};
use crate::problem::{tour_cost, Tour, TspInstance};
use crate::rng::SeededRng;

use super::{push_best, BaselineConfig};

pub fn run_ga_tsp(instance: &TspInstance, cfg: &BaselineConfig, rng: &mut SeededRng) -> Result<RunRecord> {
    let n = instance.len();
    let np = cfg.population;
    let tournament = int_param(cfg, "tournament", 1)?;
    let elitism = int_param(cfg, "elitism", 0)?;
    if elitism >= np {
        return Err(Error::config("ga_tsp: elitism must be below the population size"));
    }
    let crossover_rate = cfg.param("crossover_rate");
    if !(0.0..=1.0).contains(&crossover_rate) {
        return Err(Error::config("ga_tsp: crossover_rate must lie in [0, 1]"));
    }
    let mutation_rate = (cfg.param("mutation_scale") / n as f64).clamp(0.0, 1.0);
    let start = Instant::now();

    let mut pop: Vec<Vec<usize>> = (0..np)
        .map(|_| {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            p
        })
        .collect();
    let mut cost: Vec<f64> = pop.iter().map(|p| tour_cost(instance, p)).collect::<Result<_>>()?;
    let mut evaluations = np as u64;
    let mut best = best_of(&pop, &cost);
    let mut trajectory = Vec::with_capacity(cfg.max_iterations);
    push_best(&mut trajectory, best.1);

    for _ in 1..cfg.max_iterations {
        let mut order: Vec<usize> = (0..np).collect();
        order.sort_by(|&a, &b| cost[a].total_cmp(&cost[b]));
        let mut next: Vec<Vec<usize>> = order[..elitism].iter().map(|&i| pop[i].clone()).collect();
        let mut next_cost: Vec<f64> = order[..elitism].iter().map(|&i| cost[i]).collect();
        while next.len() < np {
            let a = select(&cost, tournament, rng);
            let b = select(&cost, tournament, rng);
            let mut child = if rng.gen::<f64>() < crossover_rate {
                order_crossover(&pop[a], &pop[b], rng)
            } else {
                pop[a].clone()
            };
            swap_mutation(&mut child, mutation_rate, rng);
            next_cost.push(tour_cost(instance, &child)?);
            evaluations += 1;
            next.push(child);
        }
        pop = next;
        cost = next_cost;
        let gen_best = best_of(&pop, &cost);
        if gen_best.1 < best.1 {
            best = gen_best;
        }
        push_best(&mut trajectory, best.1);
    }

    Ok(RunRecord {
        best_cost_per_iteration: trajectory,
        best: Solution::Tour(Tour::new(instance, best.0)?),
        evaluations,
        wall_time: start.elapsed().as_secs_f64(),
        iterations_run: cfg.max_iterations,
        params: Vec::new(),
        schedule_resets: 0,
    })
}

fn int_param(cfg: &BaselineConfig, key: &str, min: usize) -> Result<usize> {
    let v = cfg.param(key);
    if v.fract() != 0.0 || v < min as f64 {
        return Err(Error::config(format!("ga_tsp: {key} must be an integer >= {min}")));
    }
    Ok(v as usize)
}

fn best_of(pop: &[Vec<usize>], cost: &[f64]) -> (Vec<usize>, f64) {
    let i = (0..pop.len()).min_by(|&a, &b| cost[a].total_cmp(&cost[b])).expect("non-empty");
    (pop[i].clone(), cost[i])
}

fn select(cost: &[f64], size: usize, rng: &mut SeededRng) -> usize {
    (0..size)
        .map(|_| rng.gen_range(0..cost.len()))
        .min_by(|&a, &b| cost[a].total_cmp(&cost[b]))
        .expect("tournament size >= 1")
}

/// OX: copy a random slice of `a`, fill the rest in the order cities appear
/// in `b` starting after the slice.
pub fn order_crossover(a: &[usize], b: &[usize], rng: &mut impl Rng) -> Vec<usize> {
    let n = a.len();
    if n < 2 {
        return a.to_vec();
    }
    let mut i = rng.gen_range(0..n);
    let mut j = rng.gen_range(0..n);
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    let mut child = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for k in i..=j {
        child[k] = a[k];
        taken[a[k]] = true;
    }
    let mut pos = (j + 1) % n;
    for k in 0..n {
        let city = b[(j + 1 + k) % n];
        if !taken[city] {
            child[pos] = city;
            taken[city] = true;
            pos = (pos + 1) % n;
        }
    }
    child
}

/// Each position is swapped with a uniformly chosen one with probability
/// `rate`.
pub fn swap_mutation(tour: &mut [usize], rate: f64, rng: &mut impl Rng) {
    let n = tour.len();
    for i in 0..n {
        if rng.gen::<f64>() < rate {
            let j = rng.gen_range(0..n);
            tour.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::AlgorithmId;

    fn is_permutation(p: &[usize]) -> bool {
        let mut seen = vec![false; p.len()];
        p.iter().all(|&c| c < p.len() && !std::mem::replace(&mut seen[c], true))
    }

    #[test]
    fn crossover_yields_permutations() {
        let mut rng = SeededRng::new(0);
        let a: Vec<usize> = (0..12).collect();
        let b: Vec<usize> = (0..12).rev().collect();
        for _ in 0..200 {
            let c = order_crossover(&a, &b, &mut rng);
            assert!(is_permutation(&c), "{c:?}");
        }
    }

    #[test]
    fn identical_parents_reproduce() {
        let mut rng = SeededRng::new(1);
        let a = vec![3, 1, 4, 0, 2];
        assert_eq!(order_crossover(&a, &a, &mut rng), a);
    }

    #[test]
    fn triangle_found_in_first_generation() {
        let tri = TspInstance::from_coords("tri", vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::GaTsp, 4, 3);
        let rec = run_ga_tsp(&tri, &cfg, &mut SeededRng::new(0)).unwrap();
        assert_eq!(rec.best_cost_per_iteration, vec![12.0; 3]);
        assert!(rec.evaluations <= 12);
    }

    #[test]
    fn improves_over_random_tours() {
        let inst = TspInstance::random_euclidean(30, &mut SeededRng::new(8)).unwrap();
        let cfg = BaselineConfig::new(AlgorithmId::GaTsp, 40, 200);
        let rec = run_ga_tsp(&inst, &cfg, &mut SeededRng::new(8)).unwrap();
        let first = rec.best_cost_per_iteration[0];
        assert!(rec.best_cost() < 0.7 * first, "{} vs {first}", rec.best_cost());
        assert!(rec.evaluations <= 40 * 200);
        let tour = rec.best_tour().unwrap();
        assert!(is_permutation(&tour.order));
        assert_eq!(tour.cost, rec.best_cost());
    }
}
