//! Shared fixtures for the benchmarks.

use dcode_core::advanced::{Node, TreeEnsemble};
use dcode_core::{SeededRng, TspInstance};

pub fn random_instance(n: usize) -> TspInstance {
    TspInstance::random_euclidean(n, &mut SeededRng::new(n as u64)).expect("n >= 2")
}

/// `trees` balanced trees of depth `depth` over `dim` unit-box features.
pub fn balanced_ensemble(trees: usize, depth: usize, dim: usize) -> TreeEnsemble {
    fn grow(depth: usize, dim: usize, lo: &mut Vec<f64>, hi: &mut Vec<f64>, salt: usize) -> Node {
        if depth == 0 {
            return Node::leaf(((salt * 7919) % 23) as f64 - 11.0);
        }
        let f = (salt + depth) % dim;
        let mid = 0.5 * (lo[f] + hi[f]);
        let (l, h) = (lo[f], hi[f]);
        hi[f] = mid;
        let left = grow(depth - 1, dim, lo, hi, salt * 2 + 1);
        hi[f] = h;
        lo[f] = mid;
        let right = grow(depth - 1, dim, lo, hi, salt * 2 + 2);
        lo[f] = l;
        Node::split(f, mid, left, right)
    }
    let nodes = (0..trees)
        .map(|t| grow(depth, dim, &mut vec![0.0; dim], &mut vec![1.0; dim], t + 1))
        .collect();
    TreeEnsemble::new(nodes).expect("balanced trees have non-empty leaves")
}
