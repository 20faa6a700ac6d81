//! Incrementally maintained k-nearest lists. After every update the lists
//! equal what a fresh [`build_rgg`](super::rgg::build_rgg) query would give.

use crate::gnat::GnatIndex;
use crate::scalar::Real;
use crate::statespace::{SpaceDef, State};

#[derive(Clone, Debug, Default)]
pub(crate) struct KnnLists<T> {
    k: usize,
    lists: Vec<Vec<(usize, T)>>,
}

fn before<T: Real>(a: (T, usize), b: (T, usize)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn query<T: Real>(index: &GnatIndex<State<T>, SpaceDef<T>>, id: usize, x: &State<T>, k: usize) -> Vec<(usize, T)> {
    let near = index.k_nearest_with_distances(x, k + 1).expect("index is not empty");
    near.into_iter().filter(|&(o, _)| o != id).take(k).collect()
}

impl<T: Real> KnnLists<T> {
    pub fn new() -> Self {
        KnnLists { k: 0, lists: Vec::new() }
    }

    /// Brings the lists up to date after `added` were inserted into and
    /// `removed` deleted from `index`.
    pub fn update(&mut self, index: &GnatIndex<State<T>, SpaceDef<T>>, k: usize, added: &[usize], removed: &[usize]) {
        let bound = index.iter().map(|(id, _)| id + 1).max().unwrap_or(0).max(self.lists.len());
        self.lists.resize_with(bound, Vec::new);
        for &r in removed {
            if let Some(l) = self.lists.get_mut(r) {
                l.clear();
            }
        }
        if k == 0 {
            self.k = 0;
            self.lists.iter_mut().for_each(Vec::clear);
            return;
        }
        if k != self.k {
            self.k = k;
            for (id, x) in index.iter() {
                self.lists[id] = query(index, id, x, k);
            }
            return;
        }
        let mut gone = vec![false; bound];
        for &r in removed {
            gone[r] = true;
        }
        let mut fresh = vec![false; bound];
        for &a in added {
            fresh[a] = true;
        }
        for (id, x) in index.iter() {
            if fresh[id] {
                continue;
            }
            let l = &self.lists[id];
            if l.len() < k || l.iter().any(|&(o, _)| gone[o]) {
                self.lists[id] = query(index, id, x, k);
                fresh[id] = true;
            }
        }
        for &a in added {
            let x = index.get(a).expect("added id is indexed");
            self.lists[a] = query(index, a, x, k);
        }
        let Some(reach) = index
            .iter()
            .filter(|(id, _)| !fresh[*id])
            .filter_map(|(id, _)| self.lists[id].last().map(|e| e.1))
            .reduce(|a, b| a.max(b))
        else {
            return;
        };
        for &a in added {
            let x = index.get(a).expect("added id is indexed");
            for (y, d) in index.range_with_distances(x, reach).expect("index is not empty") {
                if fresh[y] {
                    continue;
                }
                let l = &mut self.lists[y];
                let last = *l.last().expect("full list");
                if before((d, a), (last.1, last.0)) {
                    let pos = l.partition_point(|&(o, w)| before((w, o), (d, a)));
                    l.insert(pos, (a, d));
                    l.pop();
                }
            }
        }
    }

    /// Symmetric adjacency, each list sorted by id.
    pub fn adjacency(&self, id_bound: usize) -> Vec<Vec<(usize, T)>> {
        let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); id_bound.max(self.lists.len())];
        for (id, l) in self.lists.iter().enumerate() {
            for &(o, d) in l {
                adj[id].push((o, d));
                adj[o].push((id, d));
            }
        }
        for list in adj.iter_mut() {
            list.sort_by(|a, b| a.0.cmp(&b.0));
            list.dedup_by(|a, b| a.0 == b.0);
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::super::rgg::{build_rgg, rgg_k};
    use super::*;
    use crate::statespace::sample_uniform;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_fresh_build() {
        let sp = SpaceDef::se2([0.0, 10.0], [0.0, 10.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut index = GnatIndex::new(sp.clone());
        let mut lists = KnnLists::new();
        let mut next = 0;
        for round in 0..40 {
            let mut removed = Vec::new();
            let live: Vec<usize> = index.iter().map(|(id, _)| id).collect();
            for id in live {
                if rng.random::<f64>() < 0.1 {
                    index.remove(id).unwrap();
                    removed.push(id);
                }
            }
            let mut added = Vec::new();
            for _ in 0..rng.random_range(1..40) {
                // a few exact duplicates exercise distance ties
                let x = if round % 7 == 3 && next > 0 { *index.iter().next().unwrap().1 } else { sample_uniform(&sp, &mut rng) };
                index.insert(next, x).unwrap();
                added.push(next);
                next += 1;
            }
            let k = rgg_k(1.0, index.len(), 3);
            lists.update(&index, k, &added, &removed);
            assert_eq!(lists.adjacency(next), build_rgg(&index, k, next), "round {round}");
        }
    }
}
