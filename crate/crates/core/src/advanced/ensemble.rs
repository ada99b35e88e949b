//! Sums of regression trees and their minimization over a box.
//!
//! Trees descend left when `x[feature] < threshold`. An ensemble is constant
//! on every cell of the lattice formed by all split thresholds, which is what
//! both the exact enumerator and the scheduled search exploit.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::efficiency::{efficiency, EfficiencySchedule};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Upper bound on joint leaf assignments the exact enumerator will visit.
pub const MAX_LEAF_COMBINATIONS: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<Node>,
        right: Box<Node>,
    },
    Leaf {
        leaf: f64,
    },
}

impl Node {
    pub fn leaf(value: f64) -> Self {
        Node::Leaf { leaf: value }
    }

    pub fn split(feature: usize, threshold: f64, left: Node, right: Node) -> Self {
        Node::Split {
            feature,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    fn eval(&self, x: &[f64]) -> Result<f64> {
        let mut node = self;
        loop {
            match node {
                Node::Leaf { leaf } => return Ok(*leaf),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let v = *x.get(*feature).ok_or_else(|| {
                        Error::Domain(format!("feature {feature} out of range for a {}-dim point", x.len()))
                    })?;
                    node = if v < *threshold { left } else { right };
                }
            }
        }
    }

    fn leaf_count(&self) -> u64 {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    fn max_feature(&self) -> Option<usize> {
        match self {
            Node::Leaf { .. } => None,
            Node::Split {
                feature, left, right, ..
            } => [Some(*feature), left.max_feature(), right.max_feature()].into_iter().flatten().max(),
        }
    }

    fn thresholds(&self, out: &mut Vec<(usize, f64)>) {
        if let Node::Split {
            feature,
            threshold,
            left,
            right,
        } = self
        {
            out.push((*feature, *threshold));
            left.thresholds(out);
            right.thresholds(out);
        }
    }

    fn leaf_boxes(&self, dim: usize) -> Vec<(Region, f64)> {
        fn walk(node: &Node, region: Region, out: &mut Vec<(Region, f64)>) {
            match node {
                Node::Leaf { leaf } => out.push((region, *leaf)),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    let mut l = region.clone();
                    l.0[*feature].cap_below(*threshold);
                    walk(left, l, out);
                    let mut r = region;
                    r.0[*feature].raise_to(*threshold);
                    walk(right, r, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, Region(vec![Interval::ALL; dim]), &mut out);
        out
    }
}

/// One axis of a box. `lo` is always inclusive; `hi` is inclusive only
/// when it comes from the search bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Interval {
    lo: f64,
    hi: f64,
    hi_closed: bool,
}

impl Interval {
    const ALL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        hi_closed: true,
    };

    /// `x < t`
    fn cap_below(&mut self, t: f64) {
        if t <= self.hi {
            self.hi = t;
            self.hi_closed = false;
        }
    }

    /// `x >= t`
    fn raise_to(&mut self, t: f64) {
        self.lo = self.lo.max(t);
    }

    fn intersect(&self, other: &Interval) -> Interval {
        let (hi, hi_closed) = if self.hi < other.hi {
            (self.hi, self.hi_closed)
        } else if other.hi < self.hi {
            (other.hi, other.hi_closed)
        } else {
            (self.hi, self.hi_closed && other.hi_closed)
        };
        Interval {
            lo: self.lo.max(other.lo),
            hi,
            hi_closed,
        }
    }

    fn is_empty(&self) -> bool {
        !(self.lo < self.hi || (self.lo == self.hi && self.hi_closed))
    }

    fn interior_point(&self) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            self.lo + 0.5 * (self.hi - self.lo)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Region(Vec<Interval>);

/// A list of trees whose outputs are summed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TreeEnsemble {
    pub trees: Vec<Node>,
}

impl TreeEnsemble {
    pub fn new(trees: Vec<Node>) -> Result<Self> {
        let ens = Self { trees };
        ens.validate()?;
        Ok(ens)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ens: TreeEnsemble = serde_json::from_str(text)?;
        ens.validate()?;
        Ok(ens)
    }

    /// Checks finite leaves and that every root-to-leaf path describes a
    /// non-empty box.
    pub fn validate(&self) -> Result<()> {
        let dim = self.required_dim();
        for (t, tree) in self.trees.iter().enumerate() {
            for (region, value) in tree.leaf_boxes(dim) {
                if !value.is_finite() {
                    return Err(Error::Domain(format!("tree {t} has a non-finite leaf")));
                }
                if region.0.iter().any(|iv| !(iv.lo < iv.hi)) {
                    return Err(Error::Domain(format!("tree {t} has an unreachable leaf")));
                }
            }
            let mut th = Vec::new();
            tree.thresholds(&mut th);
            if th.iter().any(|(_, v)| !v.is_finite()) {
                return Err(Error::Domain(format!("tree {t} has a non-finite threshold")));
            }
        }
        Ok(())
    }

    /// Smallest point dimension every split can index.
    pub fn required_dim(&self) -> usize {
        self.trees.iter().filter_map(Node::max_feature).max().map_or(0, |f| f + 1)
    }

    pub fn leaf_combinations(&self) -> u64 {
        self.trees.iter().map(Node::leaf_count).fold(1u64, |a, b| a.saturating_mul(b))
    }
}

/// `Σ_t G_t(x)`.
pub fn ensemble_eval(ens: &TreeEnsemble, x: &[f64]) -> Result<f64> {
    ens.trees.iter().map(|t| t.eval(x)).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TeooResult {
    pub point: Vec<f64>,
    pub value: f64,
    /// Ensemble evaluations (search) or non-empty joint boxes (enumeration).
    pub evaluations: u64,
}

fn check_bounds(ens: &TreeEnsemble, bounds: &[(f64, f64)]) -> Result<()> {
    if bounds.is_empty() || bounds.iter().any(|&(lo, hi)| !(lo <= hi)) {
        return Err(Error::Domain("empty search box".into()));
    }
    if bounds.len() < ens.required_dim() {
        return Err(Error::Domain(format!(
            "box has {} dimensions, ensemble splits on feature {}",
            bounds.len(),
            ens.required_dim() - 1
        )));
    }
    Ok(())
}

/// Exact minimum by enumerating joint leaf assignments and intersecting
/// their boxes with `bounds`. `evaluations` reports the number of
/// non-empty joint boxes.
pub fn teoo_brute_force(ens: &TreeEnsemble, bounds: &[(f64, f64)]) -> Result<TeooResult> {
    check_bounds(ens, bounds)?;
    let combos = ens.leaf_combinations();
    if combos > MAX_LEAF_COMBINATIONS {
        return Err(Error::Domain(format!(
            "{combos} leaf combinations exceed the enumeration cap of {MAX_LEAF_COMBINATIONS}; shrink the ensemble"
        )));
    }
    let dim = bounds.len();
    let root = Region(
        bounds
            .iter()
            .map(|&(lo, hi)| Interval {
                lo,
                hi,
                hi_closed: true,
            })
            .collect(),
    );
    let per_tree: Vec<Vec<(Region, f64)>> = ens.trees.iter().map(|t| t.leaf_boxes(dim)).collect();

    struct Search<'a> {
        per_tree: &'a [Vec<(Region, f64)>],
        best: Option<(Region, f64)>,
        boxes: u64,
    }
    impl Search<'_> {
        fn go(&mut self, depth: usize, region: &Region, acc: f64) {
            if depth == self.per_tree.len() {
                self.boxes += 1;
                if self.best.as_ref().map_or(true, |(_, v)| acc < *v) {
                    self.best = Some((region.clone(), acc));
                }
                return;
            }
            for (leaf_box, value) in &self.per_tree[depth] {
                let joint = Region(region.0.iter().zip(&leaf_box.0).map(|(a, b)| a.intersect(b)).collect());
                if joint.0.iter().any(Interval::is_empty) {
                    continue;
                }
                self.go(depth + 1, &joint, acc + value);
            }
        }
    }

    let mut search = Search {
        per_tree: &per_tree,
        best: None,
        boxes: 0,
    };
    search.go(0, &root, 0.0);
    let (region, value) = search.best.expect("the bounds box is non-empty so some joint box is too");
    Ok(TeooResult {
        point: region.0.iter().map(Interval::interior_point).collect(),
        value,
        evaluations: search.boxes,
    })
}

/// Per-axis cells of the threshold lattice, each with a representative.
struct Lattice {
    reps: Vec<Vec<f64>>,
}

impl Lattice {
    fn new(ens: &TreeEnsemble, bounds: &[(f64, f64)]) -> Self {
        let mut splits = Vec::new();
        for t in &ens.trees {
            t.thresholds(&mut splits);
        }
        let reps = bounds
            .iter()
            .enumerate()
            .map(|(d, &(lo, hi))| {
                let mut cuts: Vec<f64> = splits
                    .iter()
                    .filter(|&&(f, t)| f == d && lo < t && t <= hi)
                    .map(|&(_, t)| t)
                    .collect();
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let mut edges = Vec::with_capacity(cuts.len() + 2);
                edges.push(lo);
                edges.extend(cuts);
                edges.push(hi);
                edges
                    .windows(2)
                    .map(|w| if w[0] < w[1] { w[0] + 0.5 * (w[1] - w[0]) } else { w[0] })
                    .collect()
            })
            .collect();
        Self { reps }
    }

    fn size(&self) -> f64 {
        self.reps.iter().map(|r| r.len() as f64).product()
    }

    fn point(&self, cell: &[usize]) -> Vec<f64> {
        cell.iter().zip(&self.reps).map(|(&c, r)| r[c]).collect()
    }
}

/// Scheduled random search. Early draws pick lattice cells uniformly; with
/// probability `E(t)` a draw instead perturbs the incumbent cell with
/// Gaussian steps whose radius shrinks as `1 − E(t)`. Revisited cells are not
/// re-evaluated, so `budget` counts distinct evaluations.
pub fn teoo_minimize(ens: &TreeEnsemble, bounds: &[(f64, f64)], budget: u64, rng: &mut SeededRng) -> Result<TeooResult> {
    check_bounds(ens, bounds)?;
    if budget == 0 {
        return Err(Error::config("budget must be >= 1"));
    }
    let lattice = Lattice::new(ens, bounds);
    let total = lattice.size();
    let schedule = EfficiencySchedule::for_budget(budget as usize);
    let max_draws = budget.saturating_mul(50).saturating_add(1000);
    let unit = Normal::new(0.0, 1.0).expect("valid normal");

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut evaluations = 0u64;
    let mut draws = 0u64;

    while evaluations < budget && draws < max_draws && (seen.len() as f64) < total {
        draws += 1;
        let e = efficiency(&schedule, evaluations as f64);
        let cell: Vec<usize> = match &best {
            Some((inc, _)) if rng.gen::<f64>() < e => inc
                .iter()
                .zip(&lattice.reps)
                .map(|(&c, r)| {
                    let sigma = ((1.0 - e) * r.len() as f64 / 2.0).max(0.5);
                    let step = (unit.sample(rng) * sigma).round() as i64;
                    (c as i64 + step).clamp(0, r.len() as i64 - 1) as usize
                })
                .collect(),
            _ => lattice.reps.iter().map(|r| rng.gen_range(0..r.len())).collect(),
        };
        if !seen.insert(cell.clone()) {
            continue;
        }
        let value = ensemble_eval(ens, &lattice.point(&cell))?;
        evaluations += 1;
        if best.as_ref().map_or(true, |(_, v)| value < *v) {
            best = Some((cell, value));
        }
    }

    let (cell, value) = best.expect("at least one evaluation");
    Ok(TeooResult {
        point: lattice.point(&cell),
        value,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stump() -> TreeEnsemble {
        TreeEnsemble::new(vec![Node::split(0, 0.5, Node::leaf(1.0), Node::leaf(-2.0))]).unwrap()
    }

    #[test]
    fn constant_tree() {
        let ens = TreeEnsemble::new(vec![Node::leaf(7.0)]).unwrap();
        assert_eq!(ensemble_eval(&ens, &[123.0]).unwrap(), 7.0);
        let r = teoo_minimize(&ens, &[(0.0, 1.0)], 10, &mut SeededRng::new(0)).unwrap();
        assert_eq!(r.value, 7.0);
    }

    #[test]
    fn stump_descent() {
        assert_eq!(ensemble_eval(&stump(), &[0.7]).unwrap(), -2.0);
        assert_eq!(ensemble_eval(&stump(), &[0.5]).unwrap(), -2.0);
        assert_eq!(ensemble_eval(&stump(), &[0.49]).unwrap(), 1.0);
    }

    #[test]
    fn doubled_tree_doubles() {
        let single = stump();
        let double = TreeEnsemble::new(vec![single.trees[0].clone(), single.trees[0].clone()]).unwrap();
        for x in [0.1, 0.6] {
            assert_eq!(ensemble_eval(&double, &[x]).unwrap(), 2.0 * ensemble_eval(&single, &[x]).unwrap());
        }
    }

    #[test]
    fn feature_out_of_range() {
        let ens = TreeEnsemble::new(vec![Node::split(2, 0.0, Node::leaf(1.0), Node::leaf(2.0))]).unwrap();
        assert!(ensemble_eval(&ens, &[0.0]).is_err());
    }

    #[test]
    fn brute_force_stump() {
        let r = teoo_brute_force(&stump(), &[(0.0, 1.0)]).unwrap();
        assert_eq!(r.value, -2.0);
        assert!(r.point[0] >= 0.5);
        assert_eq!(r.evaluations, 2);
    }

    #[test]
    fn brute_force_single_leaves() {
        let ens = TreeEnsemble::new(vec![Node::leaf(1.5), Node::leaf(-4.0), Node::leaf(0.25)]).unwrap();
        assert_eq!(teoo_brute_force(&ens, &[(0.0, 1.0)]).unwrap().value, -2.25);
    }

    #[test]
    fn brute_force_two_features() {
        // Joint boxes: (x0<0.3, x1<0.6) = 1+5, (x0<0.3, x1>=0.6) = 1-1,
        // (x0>=0.3, x1<0.6) = 2+5, (x0>=0.3, x1>=0.6) = 2-1.
        let ens = TreeEnsemble::new(vec![
            Node::split(0, 0.3, Node::leaf(1.0), Node::leaf(2.0)),
            Node::split(1, 0.6, Node::leaf(5.0), Node::leaf(-1.0)),
        ])
        .unwrap();
        let r = teoo_brute_force(&ens, &[(0.0, 1.0), (0.0, 1.0)]).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.point[0] < 0.3 && r.point[1] >= 0.6);
        assert_eq!(r.evaluations, 4);
    }

    #[test]
    fn stump_search_finds_minimum() {
        let r = teoo_minimize(&stump(), &[(0.0, 1.0)], 500, &mut SeededRng::new(1)).unwrap();
        assert_eq!(r.value, -2.0);
        assert_eq!(ensemble_eval(&stump(), &r.point).unwrap(), r.value);
    }

    #[test]
    fn threshold_on_upper_bound() {
        let ens = TreeEnsemble::new(vec![Node::split(0, 1.0, Node::leaf(3.0), Node::leaf(-3.0))]).unwrap();
        let exact = teoo_brute_force(&ens, &[(0.0, 1.0)]).unwrap();
        assert_eq!(exact.value, -3.0);
        assert_eq!(exact.point, vec![1.0]);
        let found = teoo_minimize(&ens, &[(0.0, 1.0)], 10, &mut SeededRng::new(0)).unwrap();
        assert_eq!(found.value, -3.0);
    }

    #[test]
    fn enumeration_cap() {
        let mut wide = Node::leaf(0.0);
        for i in (0..10).rev() {
            wide = Node::split(0, i as f64, Node::leaf(-(i as f64)), wide);
        }
        let ens = TreeEnsemble::new(vec![wide; 6]).unwrap();
        let e = teoo_brute_force(&ens, &[(0.0, 10.0)]).unwrap_err();
        assert!(e.to_string().contains("shrink"), "{e}");
    }

    #[test]
    fn unreachable_leaf_rejected() {
        let bad = Node::split(0, 1.0, Node::split(0, 2.0, Node::leaf(0.0), Node::leaf(1.0)), Node::leaf(2.0));
        assert!(TreeEnsemble::new(vec![bad]).is_err());
        assert!(TreeEnsemble::new(vec![Node::leaf(f64::NAN)]).is_err());
    }

    #[test]
    fn empty_box_rejected() {
        assert!(teoo_brute_force(&stump(), &[(1.0, 0.0)]).is_err());
        assert!(teoo_minimize(&stump(), &[(1.0, 0.0)], 10, &mut SeededRng::new(0)).is_err());
        assert!(teoo_minimize(&stump(), &[(0.0, 1.0)], 0, &mut SeededRng::new(0)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"[{"feature":0,"threshold":0.5,"left":{"leaf":1.0},"right":{"leaf":-2.0}}]"#;
        let ens = TreeEnsemble::from_json(text).unwrap();
        assert_eq!(ens, stump());
        assert_eq!(serde_json::to_string(&ens).unwrap(), text);
    }
}
