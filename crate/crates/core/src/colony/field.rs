use crate::problem::{Tour, TspInstance};

/// Distances below this are treated as this value when computing η = 1/d.
pub const DISTANCE_FLOOR: f64 = 1e-6;

/// Pheromone levels τ on every edge, with optional MAX-MIN clamping.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneField {
    n: usize,
    tau: Vec<f64>,
    tau_min: f64,
    tau_max: f64,
    bounded: bool,
    /// Number of completed update rounds.
    pub t: usize,
}

impl PheromoneField {
    pub fn uniform(n: usize, tau: f64) -> Self {
        Self {
            n,
            tau: vec![tau; n * n],
            tau_min: 0.0,
            tau_max: f64::INFINITY,
            bounded: false,
            t: 0,
        }
    }

    /// A field filled with `tau_max` and clamped to `[tau_min, tau_max]`.
    pub fn bounded(n: usize, tau_min: f64, tau_max: f64) -> Self {
        assert!(0.0 <= tau_min && tau_min <= tau_max, "invalid pheromone bounds");
        Self {
            n,
            tau: vec![tau_max; n * n],
            tau_min,
            tau_max,
            bounded: true,
            t: 0,
        }
    }

    /// Initial field for a colony run: `tau_init = 1 / (rho * C_nn)` unless
    /// overridden, `tau_max = tau_init`, `tau_min = tau_max / (2n)`.
    pub fn for_instance(instance: &TspInstance, rho: f64, tau_init: Option<f64>, bounded: bool) -> Self {
        let n = instance.len();
        let tau0 = tau_init.unwrap_or_else(|| {
            let nn = instance.nearest_neighbor_tour(0).cost.max(DISTANCE_FLOOR);
            1.0 / (rho.max(1e-12) * nn)
        });
        if bounded {
            Self::bounded(n, tau0 / (2.0 * n as f64), tau0)
        } else {
            Self::uniform(n, tau0)
        }
    }

    pub fn from_matrix(n: usize, tau: Vec<f64>) -> Self {
        assert_eq!(tau.len(), n * n);
        Self {
            n,
            tau,
            tau_min: 0.0,
            tau_max: f64::INFINITY,
            bounded: false,
            t: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.tau[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.tau[i * self.n + j] = value;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.tau
    }

    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.bounded.then_some((self.tau_min, self.tau_max))
    }

    pub fn within_bounds(&self) -> bool {
        !self.bounded || self.tau.iter().all(|&v| self.tau_min <= v && v <= self.tau_max)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    fn clamp_all(&mut self) {
        if self.bounded {
            let (lo, hi) = (self.tau_min, self.tau_max);
            for v in &mut self.tau {
                *v = v.clamp(lo, hi);
            }
        }
    }

    /// `τ ← (1 − rho)·τ`, then clamp.
    pub fn evaporate(&mut self, rho: f64) {
        debug_assert!((0.0..=1.0).contains(&rho));
        let keep = 1.0 - rho;
        for v in &mut self.tau {
            *v *= keep;
        }
        self.clamp_all();
    }

    fn reinforce(&mut self, tour: &Tour, amount: f64) {
        let n = self.n;
        for (a, b) in tour.edges() {
            self.tau[a * n + b] += amount;
            self.tau[b * n + a] += amount;
        }
    }

    /// Adds `q / cost` to the iteration-best edges and, on every
    /// `global_period`-th iteration (1-based `t`), also to the global-best
    /// edges. Clamps afterwards.
    pub fn deposit(&mut self, iteration_best: &Tour, global_best: &Tour, q: f64, t: usize, global_period: usize) {
        self.reinforce(iteration_best, q / iteration_best.cost.max(DISTANCE_FLOOR));
        if global_period > 0 && t > 0 && t % global_period == 0 {
            self.reinforce(global_best, q / global_best.cost.max(DISTANCE_FLOOR));
        }
        if self.bounded {
            let n = self.n;
            for tour in [iteration_best, global_best] {
                for (a, b) in tour.edges() {
                    for idx in [a * n + b, b * n + a] {
                        self.tau[idx] = self.tau[idx].clamp(self.tau_min, self.tau_max);
                    }
                }
            }
        }
        self.t = t;
    }
}

/// Static heuristic desirability η = 1/d with a distance floor.
#[derive(Clone, Debug)]
pub struct HeuristicField {
    n: usize,
    eta: Vec<f64>,
}

impl HeuristicField {
    pub fn from_instance(instance: &TspInstance) -> Self {
        let n = instance.len();
        let mut eta = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    eta[i * n + j] = 1.0 / instance.dist(i, j).max(DISTANCE_FLOOR);
                }
            }
        }
        Self { n, eta }
    }

    pub fn from_matrix(n: usize, eta: Vec<f64>) -> Self {
        assert_eq!(eta.len(), n * n);
        Self { n, eta }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.eta[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.eta
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tour(order: Vec<usize>, cost: f64) -> Tour {
        Tour { order, cost }
    }

    #[test]
    fn evaporate_zero_is_identity() {
        let mut f = PheromoneField::uniform(4, 0.7);
        let before = f.clone();
        f.evaporate(0.0);
        assert_eq!(f, before);
    }

    #[test]
    fn evaporate_half() {
        let mut f = PheromoneField::uniform(3, 1.0);
        f.evaporate(0.5);
        assert!(f.as_slice().iter().all(|&v| v == 0.5));
    }

    #[test]
    fn full_evaporation_clamps_to_floor() {
        let mut f = PheromoneField::bounded(3, 0.01, 1.0);
        f.evaporate(1.0);
        assert!(f.as_slice().iter().all(|&v| v == 0.01));
    }

    #[test]
    fn deposit_adds_q_over_cost() {
        let mut f = PheromoneField::uniform(4, 0.0);
        let t = tour(vec![0, 1, 2, 3], 10.0);
        f.deposit(&t, &t, 1.0, 1, 5);
        assert_eq!(f.get(0, 1), 0.1);
        assert_eq!(f.get(1, 0), 0.1);
        assert_eq!(f.get(3, 0), 0.1);
        assert_eq!(f.get(0, 2), 0.0);
    }

    #[test]
    fn global_best_reinforced_on_period() {
        let mut f = PheromoneField::uniform(4, 0.0);
        let it = tour(vec![0, 1, 2, 3], 10.0);
        let gb = tour(vec![0, 2, 1, 3], 5.0);
        f.deposit(&it, &gb, 1.0, 4, 5);
        assert_eq!(f.get(0, 2), 0.0);
        f.deposit(&it, &gb, 1.0, 5, 5);
        assert_eq!(f.get(0, 2), 0.2);
    }

    #[test]
    fn deposit_only_touches_tour_edges() {
        let mut f = PheromoneField::uniform(5, 0.3);
        let before = f.clone();
        let t = tour(vec![0, 1, 2, 3, 4], 20.0);
        f.deposit(&t, &t, 1.0, 1, 5);
        f.evaporate(0.0);
        let on_tour: Vec<(usize, usize)> = t.edges().flat_map(|(a, b)| [(a, b), (b, a)]).collect();
        for i in 0..5 {
            for j in 0..5 {
                let changed = f.get(i, j) != before.get(i, j);
                assert_eq!(changed, on_tour.contains(&(i, j)), "({i},{j})");
            }
        }
    }

    #[test]
    fn deposits_never_exceed_max() {
        let mut f = PheromoneField::bounded(4, 0.01, 0.5);
        let t = tour(vec![0, 1, 2, 3], 1.0);
        for it in 1..50 {
            f.deposit(&t, &t, 3.0, it, 5);
            assert!(f.within_bounds());
        }
        assert_eq!(f.get(0, 1), 0.5);
    }

    #[test]
    fn heuristic_floor_for_coincident_cities() {
        let inst = TspInstance::from_coords("dup", vec![[0.0, 0.0], [0.0, 0.0], [5.0, 0.0]]).unwrap();
        let h = HeuristicField::from_instance(&inst);
        assert_eq!(h.get(0, 1), 1e6);
        assert!(h.as_slice().iter().all(|v| v.is_finite() && *v >= 0.0));
    }
}
