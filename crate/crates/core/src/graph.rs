//! Search tree over a graph of evaluated, collision-free edges, with
//! key-ordered cost propagation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::scalar::Real;

/// Min-heap entry ordered by `(key, id)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Keyed<T> {
    pub key: T,
    pub id: usize,
    pub version: u64,
}

impl<T: Real> PartialEq for Keyed<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: Real> Eq for Keyed<T> {}
impl<T: Real> PartialOrd for Keyed<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Keyed<T> {
    // reversed so that BinaryHeap pops the smallest key first
    fn cmp(&self, o: &Self) -> Ordering {
        o.key
            .partial_cmp(&self.key)
            .unwrap_or(Ordering::Equal)
            .then(o.id.cmp(&self.id))
            .then(o.version.cmp(&self.version))
    }
}

/// A rooted tree embedded in an undirected weighted graph. Vertices are
/// dense ids; `g` is `+∞` for vertices outside the tree.
#[derive(Clone, Debug, Default)]
pub struct SearchTree<T> {
    g: Vec<T>,
    parent: Vec<Option<usize>>,
    parent_cost: Vec<T>,
    children: Vec<Vec<usize>>,
    edges: Vec<Vec<(usize, T)>>,
    version: Vec<u64>,
    root: Option<usize>,
}

impl<T: Real> SearchTree<T> {
    pub fn new() -> Self {
        SearchTree {
            g: Vec::new(),
            parent: Vec::new(),
            parent_cost: Vec::new(),
            children: Vec::new(),
            edges: Vec::new(),
            version: Vec::new(),
            root: None,
        }
    }

    pub fn ensure(&mut self, id: usize) {
        if id >= self.g.len() {
            let n = id + 1;
            self.g.resize(n, T::infinity());
            self.parent.resize(n, None);
            self.parent_cost.resize(n, T::infinity());
            self.children.resize_with(n, Vec::new);
            self.edges.resize_with(n, Vec::new);
            self.version.resize(n, 0);
        }
    }

    pub fn set_root(&mut self, id: usize) {
        self.ensure(id);
        self.root = Some(id);
        self.detach(id);
        self.g[id] = T::zero();
        self.parent_cost[id] = T::zero();
        self.version[id] += 1;
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn g(&self, id: usize) -> T {
        self.g.get(id).copied().unwrap_or_else(T::infinity)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.g(id).is_finite()
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent.get(id).copied().flatten()
    }

    pub fn children(&self, id: usize) -> &[usize] {
        self.children.get(id).map_or(&[], |c| c.as_slice())
    }

    pub fn version(&self, id: usize) -> u64 {
        self.version.get(id).copied().unwrap_or(0)
    }

    /// Ids currently in the tree, ascending.
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.g.len()).filter(|&i| self.g[i].is_finite())
    }

    pub fn neighbors(&self, id: usize) -> &[(usize, T)] {
        self.edges.get(id).map_or(&[], |e| e.as_slice())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).iter().any(|&(w, _)| w == v)
    }

    /// Records an evaluated edge. Duplicates are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize, w: T) {
        self.ensure(u.max(v));
        if u == v || self.has_edge(u, v) {
            return;
        }
        self.edges[u].push((v, w));
        self.edges[v].push((u, w));
    }

    /// Every evaluated edge once, as `(min, max, weight)`, sorted.
    pub fn edge_list(&self) -> Vec<(usize, usize, T)> {
        let mut out = Vec::new();
        for (u, nb) in self.edges.iter().enumerate() {
            for &(v, w) in nb {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    fn detach(&mut self, id: usize) {
        if let Some(p) = self.parent[id].take() {
            self.children[p].retain(|&c| c != id);
        }
    }

    /// Makes `parent` the parent of `child` through an edge of cost `w`.
    pub fn attach(&mut self, child: usize, parent: usize, w: T) {
        self.ensure(child.max(parent));
        self.detach(child);
        self.parent[child] = Some(parent);
        self.parent_cost[child] = w;
        self.children[parent].push(child);
        self.g[child] = self.g[parent] + w;
        self.version[child] += 1;
    }

    /// Re-derives `g` over the subtree of `id` from the parent edge costs.
    pub fn update_subtree(&mut self, id: usize) -> Vec<usize> {
        let mut touched = Vec::new();
        let mut stack: Vec<usize> = self.children(id).to_vec();
        while let Some(c) = stack.pop() {
            let p = self.parent[c].expect("child has a parent");
            self.g[c] = self.g[p] + self.parent_cost[c];
            self.version[c] += 1;
            touched.push(c);
            stack.extend_from_slice(&self.children[c]);
        }
        touched
    }

    /// Removes a vertex with its edges. Its children are left without a
    /// parent; call [`SearchTree::rebuild`] afterwards.
    pub fn remove_vertex(&mut self, id: usize) {
        if id >= self.g.len() {
            return;
        }
        self.detach(id);
        for c in std::mem::take(&mut self.children[id]) {
            self.parent[c] = None;
        }
        for (v, _) in std::mem::take(&mut self.edges[id]) {
            self.edges[v].retain(|&(w, _)| w != id);
        }
        self.g[id] = T::infinity();
        self.version[id] += 1;
        if self.root == Some(id) {
            self.root = None;
        }
    }

    /// Recomputes the whole tree as shortest paths from the root over the
    /// evaluated edges. Ties go to the smaller parent id.
    pub fn rebuild(&mut self) {
        let n = self.g.len();
        let old_g = std::mem::replace(&mut self.g, vec![T::infinity(); n]);
        let old_parent = std::mem::replace(&mut self.parent, vec![None; n]);
        for c in self.children.iter_mut() {
            c.clear();
        }
        let Some(root) = self.root else {
            for i in 0..n {
                if old_g[i].is_finite() {
                    self.version[i] += 1;
                }
            }
            return;
        };
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        self.g[root] = T::zero();
        heap.push(Keyed { key: T::zero(), id: root, version: 0 });
        while let Some(Keyed { key, id: u, .. }) = heap.pop() {
            if done[u] || key > self.g[u] {
                continue;
            }
            done[u] = true;
            if let Some(p) = self.parent[u] {
                self.children[p].push(u);
            }
            for i in 0..self.edges[u].len() {
                let (v, w) = self.edges[u][i];
                let nv = self.g[u] + w;
                if !done[v] && (nv < self.g[v] || (nv == self.g[v] && self.parent[v].is_some_and(|p| u < p))) {
                    self.g[v] = nv;
                    self.parent[v] = Some(u);
                    self.parent_cost[v] = w;
                    heap.push(Keyed { key: nv, id: v, version: 0 });
                }
            }
        }
        for i in 0..n {
            if old_g[i] != self.g[i] || old_parent[i] != self.parent[i] {
                self.version[i] += 1;
            }
        }
    }

    /// Label-correcting propagation of cost decreases from `seeds` over the
    /// evaluated edges, popped in order of `key(id, g)`. `on_improve` sees
    /// every vertex whose cost dropped.
    pub fn propagate<K, F>(&mut self, seeds: &[usize], key: K, mut on_improve: F)
    where
        K: Fn(usize, T) -> T,
        F: FnMut(usize),
    {
        let mut heap = BinaryHeap::new();
        for &s in seeds {
            if self.contains(s) {
                heap.push(Keyed { key: key(s, self.g[s]), id: s, version: self.version[s] });
            }
        }
        while let Some(Keyed { id: u, version, .. }) = heap.pop() {
            if version != self.version[u] {
                continue;
            }
            for i in 0..self.edges[u].len() {
                let (v, w) = self.edges[u][i];
                let nv = self.g[u] + w;
                if nv < self.g[v] {
                    self.attach(v, u, w);
                    on_improve(v);
                    heap.push(Keyed { key: key(v, nv), id: v, version: self.version[v] });
                }
            }
        }
    }

    /// Vertex ids from the root to `id`.
    pub fn path_to(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
            assert!(path.len() <= self.g.len(), "parent pointers contain a cycle");
        }
        path.reverse();
        path
    }

    /// All descendants of `id` (excluding it).
    pub fn subtree(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = self.children(id).to_vec();
        while let Some(c) = stack.pop() {
            out.push(c);
            stack.extend_from_slice(self.children(c));
        }
        out
    }
}
