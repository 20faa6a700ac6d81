//! Symmetric k-nearest random geometric graph.

use crate::gnat::GnatIndex;
use crate::scalar::Real;
use crate::statespace::{SpaceDef, State};

/// `⌈k_rgg · e · (1 + 1/d) · ln n⌉`, clamped to `[1, n − 1]`.
pub fn rgg_k(k_rgg: f64, n: usize, dof: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    let d = dof as f64;
    let k = (k_rgg * std::f64::consts::E * (1.0 + 1.0 / d) * (n as f64).ln()).ceil();
    (k.max(1.0) as usize).min(n - 1)
}

/// Adjacency lists indexed by sample id: `x` and `y` are linked when either
/// is among the `k` nearest of the other. Lists are sorted by id.
pub fn build_rgg<T: Real>(index: &GnatIndex<State<T>, SpaceDef<T>>, k: usize, id_bound: usize) -> Vec<Vec<(usize, T)>> {
    let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); id_bound];
    if k == 0 {
        return adj;
    }
    for (id, x) in index.iter() {
        let near = index.k_nearest_with_distances(x, k + 1).expect("index is not empty");
        for (other, d) in near.into_iter().filter(|(o, _)| *o != id).take(k) {
            adj[id].push((other, d));
            adj[other].push((id, d));
        }
    }
    for list in adj.iter_mut() {
        list.sort_by(|a, b| a.0.cmp(&b.0));
        list.dedup_by(|a, b| a.0 == b.0);
    }
    adj
}
