use rand::Rng;

use super::field::{HeuristicField, PheromoneField};
use super::ColonyConfig;
use crate::error::{Error, Result};
use crate::problem::{Tour, TspInstance};
use crate::rng::SeededRng;

/// `ln(base^exp)` with `0^0 = 1`.
fn log_pow(base: f64, exp: f64) -> f64 {
    if exp == 0.0 {
        0.0
    } else if base <= 0.0 {
        f64::NEG_INFINITY
    } else {
        exp * base.ln()
    }
}

/// Probability of moving from `i` to each city in `allowed`:
/// `τ_ij^α η_ij^β / Σ_k τ_ik^α η_ik^β`.
///
/// Evaluated in log space so very large exponents neither overflow nor
/// underflow. When every numerator is zero the distribution is uniform.
pub fn transition_probabilities(
    i: usize,
    allowed: &[usize],
    pher: &PheromoneField,
    heur: &HeuristicField,
    alpha: f64,
    beta: f64,
) -> Result<Vec<f64>> {
    if allowed.is_empty() {
        return Err(Error::EmptyCandidates(i));
    }
    let logs: Vec<f64> = allowed
        .iter()
        .map(|&j| log_pow(pher.get(i, j), alpha) + log_pow(heur.get(i, j), beta))
        .collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(vec![1.0 / allowed.len() as f64; allowed.len()]);
    }
    let mut p: Vec<f64> = logs.iter().map(|&l| (l - max).exp()).collect();
    let sum: f64 = p.iter().sum();
    for v in &mut p {
        *v /= sum;
    }
    Ok(p)
}

/// Per-city restricted neighbour sets used during construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateLists(Vec<Vec<usize>>);

impl CandidateLists {
    pub fn new(lists: Vec<Vec<usize>>) -> Self {
        Self(lists)
    }

    /// k-nearest by distance.
    pub fn nearest(instance: &TspInstance, k: usize) -> Self {
        Self(instance.nearest_neighbors(k))
    }

    pub fn get(&self, city: usize) -> &[usize] {
        &self.0[city]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.0.iter()
    }

    pub fn mean_size(&self) -> f64 {
        self.0.iter().map(Vec::len).sum::<usize>() as f64 / self.0.len().max(1) as f64
    }
}

/// Precomputed `τ^α η^β` for one iteration.
pub(crate) struct ChoiceInfo<'a> {
    n: usize,
    weights: Vec<f64>,
    pher: &'a PheromoneField,
    heur: &'a HeuristicField,
    alpha: f64,
    beta: f64,
}

impl<'a> ChoiceInfo<'a> {
    pub(crate) fn new(pher: &'a PheromoneField, heur: &'a HeuristicField, eta_pow: &[f64], alpha: f64, beta: f64) -> Self {
        let tau = pher.as_slice();
        let weights = if alpha == 1.0 {
            tau.iter().zip(eta_pow).map(|(t, e)| t * e).collect()
        } else {
            tau.iter().zip(eta_pow).map(|(t, e)| t.powf(alpha) * e).collect()
        };
        Self {
            n: pher.len(),
            weights,
            pher,
            heur,
            alpha,
            beta,
        }
    }
}

pub(crate) fn eta_powers(heur: &HeuristicField, beta: f64) -> Vec<f64> {
    heur.as_slice().iter().map(|e| e.powf(beta)).collect()
}

/// Builds one tour: a uniformly drawn start city, then repeated roulette
/// sampling over the unvisited cities (restricted to the candidate list of
/// the current city when one is given and still has unvisited members).
pub fn construct_tour(
    instance: &TspInstance,
    pher: &PheromoneField,
    heur: &HeuristicField,
    cfg: &ColonyConfig,
    candidates: Option<&CandidateLists>,
    rng: &mut SeededRng,
) -> Result<Tour> {
    let n = instance.len();
    if pher.len() != n || heur.len() != n {
        return Err(Error::InvalidInstance(format!(
            "fields sized {}x{} / {}x{} for {n} cities",
            pher.len(),
            pher.len(),
            heur.len(),
            heur.len()
        )));
    }
    let eta_pow = eta_powers(heur, cfg.beta);
    let info = ChoiceInfo::new(pher, heur, &eta_pow, cfg.alpha, cfg.beta);
    build(instance, &info, candidates, rng)
}

pub(crate) fn build(
    instance: &TspInstance,
    info: &ChoiceInfo<'_>,
    candidates: Option<&CandidateLists>,
    rng: &mut SeededRng,
) -> Result<Tour> {
    let n = info.n;
    let mut unvisited: Vec<usize> = (0..n).collect();
    let mut position: Vec<usize> = (0..n).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut allowed: Vec<usize> = Vec::with_capacity(n);
    let mut cum: Vec<f64> = Vec::with_capacity(n);

    let visit = |city: usize, unvisited: &mut Vec<usize>, position: &mut Vec<usize>, visited: &mut Vec<bool>| {
        let p = position[city];
        unvisited.swap_remove(p);
        if p < unvisited.len() {
            position[unvisited[p]] = p;
        }
        visited[city] = true;
    };

    let start = rng.gen_range(0..n);
    visit(start, &mut unvisited, &mut position, &mut visited);
    order.push(start);
    let mut cur = start;

    while !unvisited.is_empty() {
        allowed.clear();
        if let Some(lists) = candidates {
            allowed.extend(lists.get(cur).iter().copied().filter(|&j| !visited[j]));
        }
        if allowed.is_empty() {
            allowed.extend_from_slice(&unvisited);
        }

        let row = &info.weights[cur * n..(cur + 1) * n];
        cum.clear();
        let mut total = 0.0;
        for &j in &allowed {
            total += row[j];
            cum.push(total);
        }

        let next = if total > 0.0 && total.is_finite() {
            let u = rng.gen::<f64>() * total;
            let idx = cum.iter().position(|&c| c > u).unwrap_or(allowed.len() - 1);
            allowed[idx]
        } else {
            // Underflow, overflow or a genuinely all-zero row: fall back to
            // the exact log-space probabilities.
            let p = transition_probabilities(cur, &allowed, info.pher, info.heur, info.alpha, info.beta)?;
            let u = rng.gen::<f64>();
            let mut acc = 0.0;
            let mut idx = allowed.len() - 1;
            for (k, pk) in p.iter().enumerate() {
                acc += pk;
                if acc > u {
                    idx = k;
                    break;
                }
            }
            allowed[idx]
        };

        visit(next, &mut unvisited, &mut position, &mut visited);
        order.push(next);
        cur = next;
    }

    Tour::new(instance, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(tau: &[f64], eta: &[f64]) -> (PheromoneField, HeuristicField) {
        // City 0 is the origin; cities 1.. carry the given values.
        let n = tau.len() + 1;
        let mut t = vec![0.0; n * n];
        let mut e = vec![0.0; n * n];
        for k in 1..n {
            t[k] = tau[k - 1];
            e[k] = eta[k - 1];
        }
        (PheromoneField::from_matrix(n, t), HeuristicField::from_matrix(n, e))
    }

    #[test]
    fn two_to_one_pheromone_ratio() {
        let (p, h) = fields(&[2.0, 1.0], &[1.0, 1.0]);
        let probs = transition_probabilities(0, &[1, 2], &p, &h, 1.0, 1.0).unwrap();
        assert!((probs[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((probs[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_exponents_give_uniform() {
        let (p, h) = fields(&[2.0, 7.0, 0.5], &[0.1, 3.0, 9.0]);
        let probs = transition_probabilities(0, &[1, 2, 3], &p, &h, 0.0, 0.0).unwrap();
        for v in probs {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn single_option_is_certain() {
        let (p, h) = fields(&[0.3], &[4.0]);
        assert_eq!(transition_probabilities(0, &[1], &p, &h, 2.5, 7.0).unwrap(), vec![1.0]);
    }

    #[test]
    fn all_zero_numerators_fall_back_to_uniform() {
        let (p, h) = fields(&[0.0, 0.0], &[1.0, 1.0]);
        let probs = transition_probabilities(0, &[1, 2], &p, &h, 1.0, 1.0).unwrap();
        assert_eq!(probs, vec![0.5, 0.5]);
    }

    #[test]
    fn empty_allowed_is_an_error() {
        let (p, h) = fields(&[1.0], &[1.0]);
        assert!(matches!(
            transition_probabilities(0, &[], &p, &h, 1.0, 1.0),
            Err(Error::EmptyCandidates(0))
        ));
    }

    #[test]
    fn triangle_tours_are_valid() {
        let inst = TspInstance::from_coords("tri", vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        let p = PheromoneField::uniform(3, 1.0);
        let h = HeuristicField::from_instance(&inst);
        let cfg = ColonyConfig::default();
        for s in 0..20 {
            let t = construct_tour(&inst, &p, &h, &cfg, None, &mut SeededRng::new(s)).unwrap();
            assert_eq!(t.cost, 12.0);
        }
    }

    #[test]
    fn same_seed_same_tour() {
        let inst = TspInstance::random_euclidean(40, &mut SeededRng::new(3)).unwrap();
        let p = PheromoneField::uniform(40, 1.0);
        let h = HeuristicField::from_instance(&inst);
        let cfg = ColonyConfig::default();
        let a = construct_tour(&inst, &p, &h, &cfg, None, &mut SeededRng::new(9)).unwrap();
        let b = construct_tour(&inst, &p, &h, &cfg, None, &mut SeededRng::new(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn candidate_lists_fall_back_when_exhausted() {
        let inst = TspInstance::random_euclidean(30, &mut SeededRng::new(5)).unwrap();
        let lists = CandidateLists::nearest(&inst, 2);
        let p = PheromoneField::uniform(30, 1.0);
        let h = HeuristicField::from_instance(&inst);
        let cfg = ColonyConfig::default();
        for s in 0..10 {
            let t = construct_tour(&inst, &p, &h, &cfg, Some(&lists), &mut SeededRng::new(s)).unwrap();
            assert_eq!(t.order.len(), 30);
        }
    }
}
