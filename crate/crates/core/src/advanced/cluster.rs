use rand::seq::index::sample;

use crate::colony::CandidateLists;
use crate::error::{Error, Result};
use crate::problem::TspInstance;
use crate::rng::SeededRng;

/// Result of Lloyd clustering plus the per-feature weights used for
/// clustered estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterModel {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Vec<usize>,
    pub weights: Vec<f64>,
    /// Inertia after every assignment step.
    pub inertia_history: Vec<f64>,
    /// True when the loop stopped at an assignment fixpoint.
    pub converged: bool,
}

impl ClusterModel {
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        let dim = self.points[0].len();
        if weights.len() != dim {
            return Err(Error::config(format!("{} weights for {dim} features", weights.len())));
        }
        if weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::config("weights must be nonnegative"));
        }
        self.weights = weights;
        Ok(self)
    }

    pub fn inertia(&self) -> f64 {
        *self.inertia_history.last().unwrap_or(&0.0)
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == cluster)
            .map(|(i, _)| i)
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_centroid(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(p, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Lloyd iteration from `k` distinct seeded points. An emptied cluster is
/// re-seeded at the point farthest from its current centroid.
pub fn build_clusters(points: &[Vec<f64>], k: usize, max_iter: usize, rng: &mut SeededRng) -> Result<ClusterModel> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::config(format!("cluster count {k} must lie in 1..={n}")));
    }
    if max_iter == 0 {
        return Err(Error::config("max_iter must be >= 1"));
    }
    let dim = points[0].len();
    if dim == 0 || points.iter().any(|p| p.len() != dim) {
        return Err(Error::config("points must share one nonzero dimension"));
    }

    let mut centroids: Vec<Vec<f64>> = sample(rng, n, k).iter().map(|i| points[i].clone()).collect();
    let mut assignment = vec![usize::MAX; n];
    let mut history = Vec::new();
    let mut converged = false;

    for _ in 0..max_iter {
        let mut changed = false;
        let mut inertia = 0.0;
        let mut dists = vec![0.0; n];
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest_centroid(p, &centroids);
            if assignment[i] != c {
                assignment[i] = c;
                changed = true;
            }
            dists[i] = d;
            inertia += d;
        }
        history.push(inertia);
        if !changed {
            converged = true;
            break;
        }

        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assignment) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p) {
                *s += v;
            }
        }
        let mut taken = vec![false; n];
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            } else {
                let far = (0..n)
                    .filter(|&i| !taken[i])
                    .max_by(|&a, &b| dists[a].total_cmp(&dists[b]).then(b.cmp(&a)))
                    .expect("k <= n leaves an untaken point");
                taken[far] = true;
                centroids[c] = points[far].clone();
            }
        }
    }

    Ok(ClusterModel {
        k,
        points: points.to_vec(),
        centroids,
        assignment,
        weights: vec![1.0 / dim as f64; dim],
        inertia_history: history,
        converged,
    })
}

/// Weighted feature sum `Σ_k w_k x_jk` for point `j` of cluster `i`.
pub fn cme_estimate(model: &ClusterModel, cluster: usize, point: usize) -> Result<f64> {
    match model.assignment.get(point) {
        Some(&c) if c == cluster => Ok(model.points[point].iter().zip(&model.weights).map(|(x, w)| w * x).sum()),
        Some(&c) => Err(Error::Domain(format!("point {point} belongs to cluster {c}, not {cluster}"))),
        None => Err(Error::Domain(format!("no point {point}"))),
    }
}

/// Same-cluster cities plus, for every other cluster, the single nearest
/// city in it.
pub fn cluster_candidate_lists(instance: &TspInstance, model: &ClusterModel) -> Result<CandidateLists> {
    let n = instance.len();
    if model.assignment.len() != n {
        return Err(Error::Domain(format!(
            "clustering covers {} points, instance has {n} cities",
            model.assignment.len()
        )));
    }
    let lists = (0..n)
        .map(|i| {
            let own = model.assignment[i];
            let mut bridge: Vec<Option<(usize, f64)>> = vec![None; model.k];
            let mut list = Vec::new();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let c = model.assignment[j];
                if c == own {
                    list.push(j);
                } else {
                    let d = instance.dist(i, j);
                    if bridge[c].map_or(true, |(_, bd)| d < bd) {
                        bridge[c] = Some((j, d));
                    }
                }
            }
            list.extend(bridge.into_iter().flatten().map(|(j, _)| j));
            list
        })
        .collect();
    Ok(CandidateLists::new(lists))
}
