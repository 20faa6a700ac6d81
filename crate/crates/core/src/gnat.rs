//! Geometric Near-neighbor Access Tree.
//!
//! Internal nodes hold `k` pivots and, for every pivot `i` and child `j`, the
//! interval of distances from pivot `i` to the elements of subtree `j` (pivot
//! `j` included). Queries discard a subtree as soon as one of those intervals
//! proves it cannot contain a qualifying element. Deletion is lazy; the tree
//! is rebuilt once more than half of the stored elements are dead.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_traits::{Float, One, Zero};

use crate::scalar::Real;
use crate::statespace::{SpaceDef, State};

/// A distance function satisfying the metric axioms.
pub trait Metric<P> {
    type Scalar: Real;
    fn distance(&self, a: &P, b: &P) -> Self::Scalar;
}

impl<T: Real> Metric<State<T>> for SpaceDef<T> {
    type Scalar = T;
    #[inline]
    fn distance(&self, a: &State<T>, b: &State<T>) -> T {
        self.dist(a, b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GnatError {
    #[error("id {0} is already stored")]
    DuplicateId(usize),
    #[error("id {0} is not stored")]
    UnknownId(usize),
    #[error("the index is empty")]
    EmptyIndex,
}

#[derive(Clone, Copy, Debug)]
pub struct GnatConfig {
    pub leaf_capacity: usize,
    pub pivots: usize,
    /// Rebuild once the dead fraction of stored elements exceeds this.
    pub rebuild_fraction: f64,
}

impl Default for GnatConfig {
    fn default() -> Self {
        GnatConfig { leaf_capacity: 50, pivots: 8, rebuild_fraction: 0.5 }
    }
}

#[derive(Clone, Debug)]
struct Elem<P> {
    id: usize,
    point: P,
    alive: bool,
}

#[derive(Clone, Debug)]
enum Node<T> {
    Leaf(Vec<u32>),
    Internal {
        pivots: Vec<u32>,
        children: Vec<u32>,
        /// `ranges[i * k + j]` = (min, max) of d(pivot i, subtree j).
        ranges: Vec<(T, T)>,
    },
}

#[derive(Clone, Copy, Debug)]
struct Cand<T> {
    d: T,
    id: usize,
}

impl<T: Real> PartialEq for Cand<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: Real> Eq for Cand<T> {}
impl<T: Real> PartialOrd for Cand<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for Cand<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        self.d.partial_cmp(&o.d).unwrap_or(Ordering::Equal).then(self.id.cmp(&o.id))
    }
}

pub struct GnatIndex<P, M: Metric<P>> {
    metric: M,
    config: GnatConfig,
    elems: Vec<Elem<P>>,
    slots: HashMap<usize, u32>,
    nodes: Vec<Node<M::Scalar>>,
    dead: usize,
    evals: AtomicU64,
}

impl<P: Clone, M: Metric<P>> GnatIndex<P, M> {
    pub fn new(metric: M) -> Self {
        Self::with_config(metric, GnatConfig::default())
    }

    pub fn with_config(metric: M, config: GnatConfig) -> Self {
        assert!(config.leaf_capacity >= 1 && config.pivots >= 2, "invalid GNAT configuration");
        GnatIndex {
            metric,
            config,
            elems: Vec::new(),
            slots: HashMap::new(),
            nodes: vec![Node::Leaf(Vec::new())],
            dead: 0,
            evals: AtomicU64::new(0),
        }
    }

    pub fn metric(&self) -> &M {
        &self.metric
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.slots.contains_key(&id)
    }

    pub fn get(&self, id: usize) -> Option<&P> {
        self.slots.get(&id).map(|&s| &self.elems[s as usize].point)
    }

    /// Live `(id, point)` pairs in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &P)> {
        self.elems.iter().filter(|e| e.alive).map(|e| (e.id, &e.point))
    }

    /// Number of metric evaluations performed so far.
    pub fn distance_evaluations(&self) -> u64 {
        self.evals.load(AtomicOrdering::Relaxed)
    }

    pub fn reset_distance_evaluations(&self) {
        self.evals.store(0, AtomicOrdering::Relaxed);
    }

    #[inline]
    fn dist(&self, a: &P, b: &P) -> M::Scalar {
        self.evals.fetch_add(1, AtomicOrdering::Relaxed);
        self.metric.distance(a, b)
    }

    #[inline]
    fn point(&self, slot: u32) -> &P {
        &self.elems[slot as usize].point
    }

    pub fn insert(&mut self, id: usize, point: P) -> Result<(), GnatError> {
        if self.slots.contains_key(&id) {
            return Err(GnatError::DuplicateId(id));
        }
        let slot = u32::try_from(self.elems.len()).expect("GNAT holds at most u32::MAX elements");
        self.elems.push(Elem { id, point, alive: true });
        self.slots.insert(id, slot);
        self.place(0, slot);
        Ok(())
    }

    fn place(&mut self, mut node: u32, slot: u32) {
        loop {
            match &self.nodes[node as usize] {
                Node::Leaf(_) => break,
                Node::Internal { pivots, .. } => {
                    let k = pivots.len();
                    let ds: Vec<M::Scalar> = pivots.iter().map(|&p| self.dist(self.point(p), self.point(slot))).collect();
                    let j = argmin(&ds);
                    if let Node::Internal { children, ranges, .. } = &mut self.nodes[node as usize] {
                        for (i, d) in ds.iter().enumerate() {
                            let r = &mut ranges[i * k + j];
                            r.0 = r.0.min(*d);
                            r.1 = r.1.max(*d);
                        }
                        node = children[j];
                    }
                }
            }
        }
        let full = match &mut self.nodes[node as usize] {
            Node::Leaf(bucket) => {
                bucket.push(slot);
                bucket.len() > self.config.leaf_capacity
            }
            Node::Internal { .. } => unreachable!(),
        };
        if full {
            self.split(node);
        }
    }

    fn split(&mut self, node: u32) {
        let bucket = match std::mem::replace(&mut self.nodes[node as usize], Node::Leaf(Vec::new())) {
            Node::Leaf(b) => b,
            Node::Internal { .. } => unreachable!(),
        };
        let k = self.config.pivots.min(bucket.len());
        // greedy max-min pivot selection, seeded with the first element
        let mut pivot_idx = vec![0usize];
        let mut min_d: Vec<M::Scalar> = bucket.iter().map(|&s| self.dist(self.point(bucket[0]), self.point(s))).collect();
        min_d[0] = M::Scalar::neg_infinity();
        while pivot_idx.len() < k {
            let next = argmax(&min_d);
            pivot_idx.push(next);
            min_d[next] = M::Scalar::neg_infinity();
            for (i, &s) in bucket.iter().enumerate() {
                if min_d[i] > M::Scalar::neg_infinity() {
                    let d = self.dist(self.point(bucket[next]), self.point(s));
                    min_d[i] = min_d[i].min(d);
                }
            }
        }
        let pivots: Vec<u32> = pivot_idx.iter().map(|&i| bucket[i]).collect();
        let inf = M::Scalar::infinity();
        let mut ranges = vec![(inf, -inf); k * k];
        for (j, &pj) in pivots.iter().enumerate() {
            for (i, &pi) in pivots.iter().enumerate() {
                let d = if i == j { M::Scalar::zero() } else { self.dist(self.point(pi), self.point(pj)) };
                ranges[i * k + j] = (d, d);
            }
        }
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); k];
        for (idx, &s) in bucket.iter().enumerate() {
            if pivot_idx.contains(&idx) {
                continue;
            }
            let ds: Vec<M::Scalar> = pivots.iter().map(|&p| self.dist(self.point(p), self.point(s))).collect();
            let j = argmin(&ds);
            for (i, d) in ds.iter().enumerate() {
                let r = &mut ranges[i * k + j];
                r.0 = r.0.min(*d);
                r.1 = r.1.max(*d);
            }
            buckets[j].push(s);
        }
        let mut children = Vec::with_capacity(k);
        let mut oversized = Vec::new();
        for b in buckets {
            let id = self.nodes.len() as u32;
            if b.len() > self.config.leaf_capacity {
                oversized.push(id);
            }
            self.nodes.push(Node::Leaf(b));
            children.push(id);
        }
        self.nodes[node as usize] = Node::Internal { pivots, children, ranges };
        for id in oversized {
            self.split(id);
        }
    }

    pub fn remove(&mut self, id: usize) -> Result<(), GnatError> {
        let slot = self.slots.remove(&id).ok_or(GnatError::UnknownId(id))?;
        self.elems[slot as usize].alive = false;
        self.dead += 1;
        if (self.dead as f64) > self.config.rebuild_fraction * self.elems.len() as f64 {
            self.rebuild();
        }
        Ok(())
    }

    /// Rebuilds the tree from the live elements, in insertion order.
    pub fn rebuild(&mut self) {
        let elems: Vec<Elem<P>> = std::mem::take(&mut self.elems).into_iter().filter(|e| e.alive).collect();
        self.slots.clear();
        self.nodes = vec![Node::Leaf(Vec::new())];
        self.dead = 0;
        for e in elems {
            let slot = self.elems.len() as u32;
            self.slots.insert(e.id, slot);
            self.elems.push(e);
            self.place(0, slot);
        }
    }

    pub fn clear(&mut self) {
        self.elems.clear();
        self.slots.clear();
        self.nodes = vec![Node::Leaf(Vec::new())];
        self.dead = 0;
    }

    fn slack(d: M::Scalar, r: M::Scalar) -> M::Scalar {
        let tol = M::Scalar::epsilon().sqrt();
        tol * (M::Scalar::one() + d.abs() + if r.is_finite() { r } else { M::Scalar::zero() })
    }

    pub fn nearest(&self, q: &P) -> Result<usize, GnatError> {
        self.k_nearest(q, 1).map(|v| v[0])
    }

    /// The `k` closest ids ordered by distance, then id.
    pub fn k_nearest(&self, q: &P, k: usize) -> Result<Vec<usize>, GnatError> {
        Ok(self.k_nearest_with_distances(q, k)?.into_iter().map(|(id, _)| id).collect())
    }

    pub fn k_nearest_with_distances(&self, q: &P, k: usize) -> Result<Vec<(usize, M::Scalar)>, GnatError> {
        if self.is_empty() {
            return Err(GnatError::EmptyIndex);
        }
        if k == 0 {
            return Ok(Vec::new());
        }
        let mut heap: BinaryHeap<Cand<M::Scalar>> = BinaryHeap::with_capacity(k + 1);
        let mut search = KnnSearch { k, heap: &mut heap };
        self.search(0, q, &mut search);
        Ok(sorted(heap.into_vec()))
    }

    /// All ids within distance `r` (inclusive), ordered by distance, then id.
    pub fn range(&self, q: &P, r: M::Scalar) -> Result<Vec<usize>, GnatError> {
        Ok(self.range_with_distances(q, r)?.into_iter().map(|(id, _)| id).collect())
    }

    pub fn range_with_distances(&self, q: &P, r: M::Scalar) -> Result<Vec<(usize, M::Scalar)>, GnatError> {
        if self.is_empty() {
            return Err(GnatError::EmptyIndex);
        }
        let mut out = Vec::new();
        let mut search = RangeSearch { r, out: &mut out };
        self.search(0, q, &mut search);
        Ok(sorted(out))
    }

    fn search<S: Collector<M::Scalar>>(&self, node: u32, q: &P, s: &mut S) {
        match &self.nodes[node as usize] {
            Node::Leaf(bucket) => {
                for &slot in bucket {
                    let e = &self.elems[slot as usize];
                    if e.alive {
                        let d = self.dist(q, &e.point);
                        s.offer(d, e.id);
                    }
                }
            }
            Node::Internal { pivots, children, ranges } => {
                let k = pivots.len();
                let mut active = vec![true; k];
                let mut pd = vec![M::Scalar::infinity(); k];
                for i in 0..k {
                    if !active[i] {
                        continue;
                    }
                    let e = &self.elems[pivots[i] as usize];
                    let d = self.dist(q, &e.point);
                    pd[i] = d;
                    if e.alive {
                        s.offer(d, e.id);
                    }
                    let r = s.radius();
                    let slack = Self::slack(d, r);
                    for j in 0..k {
                        if active[j] {
                            let (lo, hi) = ranges[i * k + j];
                            if d - r > hi + slack || d + r + slack < lo {
                                active[j] = false;
                            }
                        }
                    }
                }
                let mut order: Vec<usize> = (0..k).filter(|&j| active[j]).collect();
                order.sort_by(|&a, &b| pd[a].partial_cmp(&pd[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
                for j in order {
                    // the radius may have shrunk since the elimination pass
                    let r = s.radius();
                    let pruned = (0..k).any(|i| {
                        let (lo, hi) = ranges[i * k + j];
                        let slack = Self::slack(pd[i], r);
                        pd[i].is_finite() && (pd[i] - r > hi + slack || pd[i] + r + slack < lo)
                    });
                    if !pruned {
                        self.search(children[j], q, s);
                    }
                }
            }
        }
    }

    /// Verifies that every range table bounds the distances of its subtree.
    pub fn check_invariants(&self) -> Result<(), String> {
        self.check_node(0)
    }

    fn subtree_slots(&self, node: u32, out: &mut Vec<u32>) {
        match &self.nodes[node as usize] {
            Node::Leaf(b) => out.extend_from_slice(b),
            Node::Internal { pivots, children, .. } => {
                out.extend_from_slice(pivots);
                for &c in children {
                    self.subtree_slots(c, out);
                }
            }
        }
    }

    fn check_node(&self, node: u32) -> Result<(), String> {
        if let Node::Internal { pivots, children, ranges } = &self.nodes[node as usize] {
            let k = pivots.len();
            for j in 0..k {
                let mut members = vec![pivots[j]];
                self.subtree_slots(children[j], &mut members);
                for &m in &members {
                    for i in 0..k {
                        let d = self.metric.distance(self.point(pivots[i]), self.point(m));
                        let (lo, hi) = ranges[i * k + j];
                        if d < lo || d > hi {
                            return Err(format!("node {node}: d(pivot {i}, elem) = {d} outside [{lo}, {hi}] for child {j}"));
                        }
                    }
                }
                self.check_node(children[j])?;
            }
        }
        Ok(())
    }
}

trait Collector<T> {
    fn offer(&mut self, d: T, id: usize);
    fn radius(&self) -> T;
}

struct KnnSearch<'a, T> {
    k: usize,
    heap: &'a mut BinaryHeap<Cand<T>>,
}

impl<T: Real> Collector<T> for KnnSearch<'_, T> {
    fn offer(&mut self, d: T, id: usize) {
        let c = Cand { d, id };
        if self.heap.len() < self.k {
            self.heap.push(c);
        } else if c < *self.heap.peek().expect("heap is full") {
            self.heap.pop();
            self.heap.push(c);
        }
    }

    fn radius(&self) -> T {
        if self.heap.len() < self.k {
            T::infinity()
        } else {
            self.heap.peek().map_or(T::infinity(), |c| c.d)
        }
    }
}

struct RangeSearch<'a, T> {
    r: T,
    out: &'a mut Vec<Cand<T>>,
}

impl<T: Real> Collector<T> for RangeSearch<'_, T> {
    fn offer(&mut self, d: T, id: usize) {
        if d <= self.r {
            self.out.push(Cand { d, id });
        }
    }

    fn radius(&self) -> T {
        self.r
    }
}

fn sorted<T: Real>(mut v: Vec<Cand<T>>) -> Vec<(usize, T)> {
    v.sort();
    v.into_iter().map(|c| (c.id, c.d)).collect()
}

fn argmin<T: Real>(v: &[T]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] < v[best] {
            best = i;
        }
    }
    best
}

fn argmax<T: Real>(v: &[T]) -> usize {
    let mut best = 0;
    for i in 1..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}
