use std::time::Instant;

use rayon::prelude::*;

use super::construct::{build, eta_powers, CandidateLists, ChoiceInfo};
use super::field::{HeuristicField, PheromoneField};
use super::{ColonyConfig, IterationParams, RunRecord, Solution};
use crate::efficiency::{detect_stagnation, efficiency, recalibrate, reset_inflection, DynamicEfficiency};
use crate::error::Result;
use crate::problem::{Tour, TspInstance};
use crate::rng::SeededRng;

/// A configured colony run over one instance.
pub struct Colony<'a> {
    instance: &'a TspInstance,
    cfg: ColonyConfig,
    controller: Option<DynamicEfficiency>,
    candidates: Option<CandidateLists>,
}

impl<'a> Colony<'a> {
    pub fn new(instance: &'a TspInstance, cfg: ColonyConfig) -> Self {
        Self {
            instance,
            cfg,
            controller: None,
            candidates: None,
        }
    }

    pub fn with_controller(mut self, controller: Option<DynamicEfficiency>) -> Self {
        self.controller = controller;
        self
    }

    /// Explicit candidate lists; overrides `candidate_list_size`.
    pub fn with_candidates(mut self, candidates: Option<CandidateLists>) -> Self {
        self.candidates = candidates;
        self
    }

    /// Runs `max_iterations` rounds of
    /// {recalibrate → construct ants → evaporate → deposit}.
    pub fn run(&self, rng: &SeededRng) -> Result<RunRecord> {
        let cfg = &self.cfg;
        cfg.validate()?;
        if let Some(c) = &self.controller {
            c.policy.validate()?;
        }
        let instance = self.instance;
        let n = instance.len();
        let start = Instant::now();

        let candidates = match (&self.candidates, cfg.candidate_list_size) {
            (Some(c), _) => Some(c.clone()),
            (None, 0) => None,
            (None, k) => Some(CandidateLists::nearest(instance, k)),
        };
        let heur = HeuristicField::from_instance(instance);
        let eta_pow = eta_powers(&heur, cfg.beta);
        let mut pher = PheromoneField::for_instance(instance, cfg.rho, cfg.tau_init, cfg.pheromone_bounds);
        let mut schedule = self.controller.as_ref().map(|c| c.schedule);
        // Stream stride: the largest colony any iteration can field.
        let stride = match &self.controller {
            Some(c) => c.policy.ants_range.1,
            None => cfg.ants_for(n),
        } as u64;

        let mut global_best: Option<Tour> = None;
        let mut trajectory = Vec::with_capacity(cfg.max_iterations);
        let mut params = Vec::with_capacity(cfg.max_iterations);
        let mut evaluations = 0u64;
        let mut last_reset = 0usize;
        let mut resets = 0usize;

        for t in 0..cfg.max_iterations {
            let (e, live) = match (&self.controller, &schedule) {
                (Some(c), Some(s)) => {
                    let e = efficiency(s, t as f64);
                    (Some(e), recalibrate(cfg, &c.policy, e))
                }
                _ => (None, cfg.clone()),
            };
            let ants = live.ants_for(n);

            let info = ChoiceInfo::new(&pher, &heur, &eta_pow, live.alpha, live.beta);
            let base = t as u64 * stride;
            let tours = (0..ants as u64)
                .into_par_iter()
                .map(|a| {
                    let mut ant_rng = rng.derive(base + a);
                    build(instance, &info, candidates.as_ref(), &mut ant_rng)
                })
                .collect::<Result<Vec<Tour>>>()?;
            evaluations += ants as u64;

            let iteration_best = tours
                .into_iter()
                .reduce(|best, tour| if tour.cost < best.cost { tour } else { best })
                .expect("colony has at least one ant");
            let improved = global_best.as_ref().map_or(true, |g| iteration_best.cost < g.cost);
            if improved {
                global_best = Some(iteration_best.clone());
            }
            let gb = global_best.as_ref().expect("set above");

            pher.evaporate(live.rho);
            pher.deposit(&iteration_best, gb, live.q_deposit, t + 1, live.global_best_period);
            debug_assert!(pher.within_bounds(), "pheromone left its bounds at iteration {t}");

            trajectory.push(gb.cost);
            params.push(IterationParams {
                efficiency: e,
                rho: live.rho,
                ants,
            });

            if let (Some(c), Some(s)) = (&self.controller, schedule.as_mut()) {
                let w = c.policy.stagnation_window;
                if c.policy.reset_on_stagnation
                    && t + 1 - last_reset >= w
                    && detect_stagnation(&trajectory, w, c.policy.stagnation_epsilon)
                {
                    *s = reset_inflection(s, (t + 1) as f64);
                    last_reset = t + 1;
                    resets += 1;
                }
            }
        }

        Ok(RunRecord {
            best_cost_per_iteration: trajectory,
            best: Solution::Tour(global_best.expect("at least one iteration ran")),
            evaluations,
            wall_time: start.elapsed().as_secs_f64(),
            iterations_run: cfg.max_iterations,
            params,
            schedule_resets: resets,
        })
    }
}

/// Colony run with an optional dynamic-efficiency controller. Without a
/// controller this is the classic MAX-MIN style colony.
pub fn run_dco(
    instance: &TspInstance,
    cfg: &ColonyConfig,
    controller: Option<&DynamicEfficiency>,
    rng: &SeededRng,
) -> Result<RunRecord> {
    Colony::new(instance, cfg.clone())
        .with_controller(controller.cloned())
        .run(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::efficiency::CouplingPolicy;

    fn triangle() -> TspInstance {
        TspInstance::from_coords("tri", vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap()
    }

    #[test]
    fn triangle_best_is_twelve() {
        let cfg = ColonyConfig {
            max_iterations: 1,
            ..Default::default()
        };
        let rec = run_dco(&triangle(), &cfg, None, &SeededRng::new(0)).unwrap();
        assert_eq!(rec.best_cost(), 12.0);
        assert_eq!(rec.evaluations, 3);
    }

    #[test]
    fn zero_budget_rejected() {
        let cfg = ColonyConfig {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(run_dco(&triangle(), &cfg, None, &SeededRng::new(0)).is_err());
    }

    #[test]
    fn controller_changes_live_parameters() {
        let inst = TspInstance::random_euclidean(20, &mut SeededRng::new(1)).unwrap();
        let cfg = ColonyConfig {
            max_iterations: 60,
            ants: Some(20),
            ..Default::default()
        };
        let mut de = DynamicEfficiency::defaults_for(&cfg, 20);
        de.policy = CouplingPolicy {
            reset_on_stagnation: false,
            ..de.policy
        };
        let rec = run_dco(&inst, &cfg, Some(&de), &SeededRng::new(2)).unwrap();
        let first = rec.params.first().unwrap();
        let last = rec.params.last().unwrap();
        assert!(first.rho > last.rho);
        assert!(first.ants > last.ants);
        assert_eq!(rec.evaluations, rec.params.iter().map(|p| p.ants as u64).sum::<u64>());
    }

    #[test]
    fn trajectory_non_increasing_and_deterministic() {
        let inst = TspInstance::random_euclidean(25, &mut SeededRng::new(4)).unwrap();
        let cfg = ColonyConfig {
            max_iterations: 40,
            ..Default::default()
        };
        let de = DynamicEfficiency::defaults_for(&cfg, 25);
        let a = run_dco(&inst, &cfg, Some(&de), &SeededRng::new(8)).unwrap();
        let b = run_dco(&inst, &cfg, Some(&de), &SeededRng::new(8)).unwrap();
        assert!(a.same_outcome(&b));
        assert!(a.best_cost_per_iteration.windows(2).all(|w| w[1] <= w[0]));
    }
}
