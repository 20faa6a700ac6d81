//! Lazy reverse tree: shortest paths to the goal samples over the
//! unvalidated graph.

use std::collections::BinaryHeap;

use super::rgg::{build_rgg, rgg_k};
use crate::gnat::GnatIndex;
use crate::graph::Keyed;
use crate::scalar::Real;
use crate::statespace::{SpaceDef, State};

/// Cost-to-go labels indexed by sample id.
#[derive(Clone, Debug)]
pub struct ReverseTree<T> {
    /// `+∞` for unreached samples.
    pub h: Vec<T>,
    /// Next sample towards the goal.
    pub successor: Vec<Option<usize>>,
}

impl<T: Real> ReverseTree<T> {
    pub fn h(&self, id: usize) -> T {
        self.h.get(id).copied().unwrap_or_else(T::infinity)
    }

    pub fn successor(&self, id: usize) -> Option<usize> {
        self.successor.get(id).copied().flatten()
    }
}

/// Multi-source Dijkstra from `goals` over `adj`. Ties go to the smaller id.
pub fn reverse_dijkstra<T: Real>(adj: &[Vec<(usize, T)>], goals: &[usize]) -> ReverseTree<T> {
    let n = adj.len();
    let mut h = vec![T::infinity(); n];
    let mut successor = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    for &g in goals {
        h[g] = T::zero();
        heap.push(Keyed { key: T::zero(), id: g, version: 0 });
    }
    while let Some(Keyed { key, id: u, .. }) = heap.pop() {
        if done[u] || key > h[u] {
            continue;
        }
        done[u] = true;
        for &(v, w) in &adj[u] {
            let nv = h[u] + w;
            if !done[v] && (nv < h[v] || (nv == h[v] && successor[v].is_some_and(|s| u < s))) {
                h[v] = nv;
                successor[v] = Some(u);
                heap.push(Keyed { key: nv, id: v, version: 0 });
            }
        }
    }
    ReverseTree { h, successor }
}

/// Builds the graph over `samples` (ids must be distinct) with the k-nearest
/// rule and labels every sample with its graph distance to the goal set.
/// No edge is collision checked.
pub fn build_reverse_tree<T: Real>(
    space: &SpaceDef<T>,
    samples: &[(usize, State<T>)],
    goals: &[usize],
    k_rgg: f64,
) -> ReverseTree<T> {
    let mut index = GnatIndex::new(space.clone());
    let mut bound = 0;
    for (id, x) in samples {
        index.insert(*id, *x).expect("sample ids are distinct");
        bound = bound.max(id + 1);
    }
    let k = rgg_k(k_rgg, samples.len(), space.kind().dof());
    let adj = build_rgg(&index, k, bound);
    reverse_dijkstra(&adj, goals)
}
