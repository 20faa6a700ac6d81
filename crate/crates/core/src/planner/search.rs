use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use rustc_hash::FxHashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::relevant::{estimate_step, perturb, weight_vertices, Noise, VertexStats};
use super::reverse::reverse_dijkstra;
use super::knn::KnnLists;
use super::rgg::rgg_k;
use super::{PlannerConfig, PlannerError};
use crate::gnat::GnatIndex;
use crate::graph::{Keyed, SearchTree};
use crate::run::{Counters, Limits, PlanResult, PlanStatus, Progress, Recorder};
use crate::scalar::Real;
use crate::statespace::{sample_informed_bounded, Cost, SpaceDef, State};
use crate::world::{MotionStats, Scenario, WorldError};

const SLOT_ATTEMPTS: usize = 100;
const INFORMED_DRAWS: usize = 1000;

/// Public view of one sample.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T: Real> {
    pub id: usize,
    pub state: State<T>,
    /// Cost-to-come through the forward tree; `+∞` outside it.
    pub g: Cost<T>,
    /// Cost-to-go from the latest reverse tree; `+∞` when unreached.
    pub h_rev: Cost<T>,
    pub parent_fwd: Option<usize>,
    pub children_fwd: Vec<usize>,
    pub n_selected: u32,
    pub n_out: u32,
    pub in_forward: bool,
    pub in_reverse: bool,
    pub is_goal: bool,
}

#[derive(Clone, Debug)]
struct Rec<T> {
    state: State<T>,
    h_rev: T,
    successor: Option<usize>,
    n_selected: u32,
    in_reverse: bool,
    is_goal: bool,
}

#[derive(Clone, Copy, Debug)]
struct EdgeEntry<T> {
    key: T,
    v: usize,
    x: usize,
    version: u64,
}

impl<T: Real> PartialEq for EdgeEntry<T> {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl<T: Real> Eq for EdgeEntry<T> {}
impl<T: Real> PartialOrd for EdgeEntry<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl<T: Real> Ord for EdgeEntry<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        o.key
            .partial_cmp(&self.key)
            .unwrap_or(Ordering::Equal)
            .then(o.v.cmp(&self.v))
            .then(o.x.cmp(&self.x))
            .then(o.version.cmp(&self.version))
    }
}

/// Planner state. Drive it with [`RelRegionPlanner::step`] or run it to
/// completion with [`RelRegionPlanner::run`].
pub struct RelRegionPlanner<'a, T: Real> {
    sc: &'a Scenario<T>,
    cfg: PlannerConfig,
    gamma_max: T,
    lambda: [T; 3],
    noise: Noise<T>,
    rng: ChaCha8Rng,
    recs: Vec<Option<Rec<T>>>,
    index: GnatIndex<State<T>, SpaceDef<T>>,
    tree: SearchTree<T>,
    knn: KnnLists<T>,
    added: Vec<usize>,
    removed: Vec<usize>,
    adj: Vec<Vec<(usize, T)>>,
    cache: FxHashMap<(usize, usize), bool>,
    protected: Vec<usize>,
    c_cur: T,
    best_goal: Option<usize>,
    counters: Counters,
    pruned: Vec<usize>,
    recorder: Recorder<'a>,
    finished: Option<PlanStatus>,
}

pub fn plan<T: Real>(sc: &Scenario<T>, cfg: &PlannerConfig) -> Result<PlanResult<T>, PlannerError> {
    Ok(RelRegionPlanner::new(sc, cfg.clone())?.run())
}

/// Like [`plan`], reporting every incumbent change to `progress`.
pub fn plan_with_progress<'a, T: Real>(
    sc: &'a Scenario<T>,
    cfg: &PlannerConfig,
    progress: impl FnMut(&Progress) + 'a,
) -> Result<PlanResult<T>, PlannerError> {
    let mut p = RelRegionPlanner::new(sc, cfg.clone())?;
    p.set_progress(progress);
    Ok(p.run())
}

impl<'a, T: Real> RelRegionPlanner<'a, T> {
    pub fn new(sc: &'a Scenario<T>, cfg: PlannerConfig) -> Result<Self, PlannerError> {
        cfg.validate()?;
        if !sc.is_state_valid(&sc.start) {
            return Err(WorldError::InvalidScenario("start state is in collision or out of bounds".into()).into());
        }
        let gamma_max = T::lit(cfg.gamma_max.unwrap_or(0.1 * sc.space.diagonal().to_f64_lossy()));
        let limits = Limits {
            time_budget: cfg.time_budget,
            target_cost: cfg.target_cost,
            max_iterations: cfg.max_iterations,
            clock: cfg.clock,
        };
        let mut p = RelRegionPlanner {
            sc,
            gamma_max,
            lambda: cfg.lambda.map(T::lit),
            noise: Noise { sigma_dir: T::lit(cfg.sigma_dir), mag_clamp: cfg.mag_clamp.map(T::lit) },
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
            recs: Vec::new(),
            index: GnatIndex::new(sc.space.clone()),
            tree: SearchTree::new(),
            knn: KnnLists::new(),
            added: Vec::new(),
            removed: Vec::new(),
            adj: Vec::new(),
            cache: FxHashMap::default(),
            protected: Vec::new(),
            c_cur: T::infinity(),
            best_goal: None,
            counters: Counters::default(),
            pruned: Vec::new(),
            recorder: Recorder::new(limits, None),
            finished: None,
        };
        let start = p.add_sample(sc.start);
        p.tree.set_root(start);
        p.protected.push(start);
        p.counters.state_checks += 1;
        if sc.is_state_valid(&sc.goal_center) {
            let goal = p.add_sample(sc.goal_center);
            p.protected.push(goal);
        }
        p.refresh_incumbent();
        Ok(p)
    }

    pub fn set_progress(&mut self, progress: impl FnMut(&Progress) + 'a) {
        self.recorder.progress = Some(Box::new(progress));
    }

    pub fn scenario(&self) -> &Scenario<T> {
        self.sc
    }

    pub fn start_id(&self) -> usize {
        0
    }

    pub fn incumbent(&self) -> Cost<T> {
        Cost::new(self.c_cur)
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn finished(&self) -> Option<PlanStatus> {
        self.finished
    }

    /// Ids of every sample removed by pruning so far.
    pub fn pruned_ids(&self) -> &[usize] {
        &self.pruned
    }

    pub fn sample_ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.recs.iter().enumerate().filter(|(_, r)| r.is_some()).map(|(i, _)| i)
    }

    pub fn sample(&self, id: usize) -> Option<Sample<T>> {
        let r = self.recs.get(id)?.as_ref()?;
        let children = self.tree.children(id).to_vec();
        Some(Sample {
            id,
            state: r.state,
            g: Cost::new(self.tree.g(id)),
            h_rev: Cost::new(r.h_rev),
            parent_fwd: self.tree.parent(id),
            n_out: children.len() as u32,
            children_fwd: children,
            n_selected: r.n_selected,
            in_forward: self.tree.contains(id),
            in_reverse: r.in_reverse,
            is_goal: r.is_goal,
        })
    }

    /// `(id, g)` for every forward-tree vertex.
    pub fn forward_costs(&self) -> Vec<(usize, T)> {
        self.tree.vertices().map(|v| (v, self.tree.g(v))).collect()
    }

    /// Evaluated collision-free edges committed to the search graph.
    pub fn evaluated_edges(&self) -> Vec<(usize, usize, T)> {
        self.tree.edge_list()
    }

    /// Sample ids along the incumbent path.
    pub fn best_path_ids(&self) -> Vec<usize> {
        self.best_goal.map(|g| self.tree.path_to(g)).unwrap_or_default()
    }

    fn rec(&self, id: usize) -> &Rec<T> {
        self.recs[id].as_ref().expect("live sample")
    }

    fn rec_mut(&mut self, id: usize) -> &mut Rec<T> {
        self.recs[id].as_mut().expect("live sample")
    }

    fn add_sample(&mut self, state: State<T>) -> usize {
        let id = self.recs.len();
        let is_goal = self.sc.in_goal(&state);
        self.recs.push(Some(Rec { state, h_rev: T::infinity(), successor: None, n_selected: 0, in_reverse: false, is_goal }));
        self.index.insert(id, state).expect("fresh id");
        self.tree.ensure(id);
        self.added.push(id);
        id
    }

    /// Admissible lower bound on any solution through `x` when it is reached
    /// with cost-to-come `g`.
    fn lower_bound(&self, g: T, x: &State<T>) -> T {
        g + self.sc.cost_to_goal_lower_bound(x)
    }

    fn exceeds_incumbent(&self, bound: T) -> bool {
        let c = self.c_cur;
        c.is_finite() && bound > c + T::lit(1e-9) * (T::one() + c)
    }

    fn admissible(&self, x: &State<T>) -> bool {
        !self.exceeds_incumbent(self.lower_bound(self.sc.space.dist(&self.sc.start, x), x))
    }

    fn valid(&mut self, x: &State<T>) -> bool {
        self.counters.state_checks += 1;
        self.sc.is_state_valid(x)
    }

    fn refresh_incumbent(&mut self) {
        let mut best: Option<(T, usize)> = None;
        for v in self.tree.vertices() {
            if self.rec(v).is_goal {
                let g = self.tree.g(v);
                if best.is_none_or(|(b, _)| g < b) {
                    best = Some((g, v));
                }
            }
        }
        self.set_incumbent(best);
    }

    fn set_incumbent(&mut self, best: Option<(T, usize)>) {
        if let Some((g, v)) = best {
            if g < self.c_cur {
                self.c_cur = g;
                self.best_goal = Some(v);
                self.recorder.record(g.to_f64_lossy(), &self.counters);
            } else if self.best_goal.is_none_or(|b| !self.tree.contains(b) || self.tree.g(b) > self.c_cur) {
                self.best_goal = Some(v);
            }
        }
    }

    fn should_stop(&mut self) -> bool {
        if self.finished.is_some() {
            return true;
        }
        let c = self.c_cur.to_f64_lossy();
        if self.recorder.target_reached(c) {
            self.finished = Some(PlanStatus::TargetReached);
        } else if self.recorder.out_of_time(&self.counters) || self.recorder.out_of_iterations(&self.counters) {
            self.finished = Some(self.recorder.status(c));
        }
        self.finished.is_some()
    }

    /// Runs one iteration: prune, sample, reverse tree, forward tree.
    /// Returns `false` once a stop condition holds.
    pub fn step(&mut self) -> bool {
        if self.should_stop() {
            return false;
        }
        if self.counters.iterations > 0 {
            self.prune();
        }
        self.counters.iterations += 1;
        let batch = self.sample_batch();
        if batch.is_empty() && self.tree.vertices().count() == 1 && self.c_cur.is_infinite() && self.recs.len() <= 2 {
            self.finished = Some(PlanStatus::Infeasible);
            return false;
        }
        self.insert_batch(batch);
        self.build_reverse();
        self.build_forward();
        !self.should_stop()
    }

    pub fn run(mut self) -> PlanResult<T> {
        while self.step() {}
        self.finish()
    }

    pub fn finish(mut self) -> PlanResult<T> {
        let status = match self.finished {
            Some(s) => s,
            None => self.recorder.status(self.c_cur.to_f64_lossy()),
        };
        self.recorder.record(self.c_cur.to_f64_lossy(), &self.counters);
        let path_ids = self.best_path_ids();
        let path = path_ids.iter().map(|&i| self.rec(i).state).collect();
        PlanResult {
            status,
            best_cost: Cost::new(self.c_cur),
            path,
            path_ids,
            trace: std::mem::take(&mut self.recorder.trace),
            counters: self.counters,
        }
    }

    // ---- pruning ----

    fn prune(&mut self) {
        let keep: HashSet<usize> = self.protected.iter().copied().chain(self.best_path_ids()).collect();
        let mut drop = Vec::new();
        for (id, r) in self.recs.iter().enumerate() {
            let Some(r) = r else { continue };
            if keep.contains(&id) {
                continue;
            }
            let in_forward = self.tree.contains(id);
            let g = if in_forward { self.tree.g(id) } else { self.sc.space.dist(&self.sc.start, &r.state) };
            if !in_forward || !r.in_reverse || self.exceeds_incumbent(self.lower_bound(g, &r.state)) {
                drop.push(id);
            }
        }
        if drop.is_empty() {
            return;
        }
        for &id in &drop {
            self.tree.remove_vertex(id);
            self.index.remove(id).expect("pruned sample is indexed");
            self.recs[id] = None;
        }
        self.counters.pruned += drop.len() as u64;
        self.pruned.extend_from_slice(&drop);
        self.removed.extend_from_slice(&drop);
        self.tree.rebuild();
        let recs = &self.recs;
        self.cache.retain(|&(a, b), _| recs[a].is_some() && recs[b].is_some());
        let before = self.c_cur;
        self.refresh_incumbent();
        debug_assert!(self.c_cur <= before);
    }

    // ---- sampling ----

    fn sample_batch(&mut self) -> Vec<State<T>> {
        let m = self.cfg.batch_size;
        let mut out = Vec::with_capacity(m);
        for _ in 0..SLOT_ATTEMPTS {
            let x = self.sc.sample_goal(&mut self.rng);
            self.counters.samples_drawn += 1;
            if self.admissible(&x) && self.valid(&x) {
                out.push(x);
                break;
            }
        }
        let quota = (((1.0 - self.cfg.p_inf) * m as f64).floor() as usize).min(m - out.len());
        self.sample_relevant(quota, &mut out);
        let fill = m - out.len();
        self.sample_informed(fill, &mut out);
        out
    }

    fn relevant_queue(&self) -> Vec<(T, usize)> {
        let stats: Vec<VertexStats<T>> = self
            .tree
            .vertices()
            .map(|v| {
                let r = self.rec(v);
                VertexStats {
                    id: v,
                    n_selected: r.n_selected,
                    n_out: self.tree.children(v).len() as u32,
                    g: self.tree.g(v),
                    h_rev: r.h_rev,
                }
            })
            .collect();
        weight_vertices(&stats, self.lambda, self.c_cur)
    }

    fn sample_relevant(&mut self, quota: usize, out: &mut Vec<State<T>>) {
        if quota == 0 {
            return;
        }
        let q = self.relevant_queue();
        if q.is_empty() {
            return;
        }
        let expand = (quota / q.len()).max(1);
        let mut emitted = 0;
        'queue: for (_, v) in q {
            let r = self.rec(v);
            let succ = r.successor.and_then(|s| self.recs[s].as_ref()).map(|s| s.state);
            let step = estimate_step(&r.state, self.tree.g(v), r.h_rev, succ.as_ref(), self.c_cur, self.gamma_max);
            let Ok((gamma, e)) = step else { continue };
            if gamma <= T::lit(1e-9) * (T::one() + self.c_cur) {
                continue;
            }
            let vs = r.state;
            for _ in 0..expand {
                if emitted >= quota {
                    break 'queue;
                }
                self.rec_mut(v).n_selected += 1;
                for _ in 0..SLOT_ATTEMPTS {
                    let x = perturb(&self.sc.space, &vs, gamma, e, self.noise, &mut self.rng);
                    self.counters.samples_drawn += 1;
                    if self.sc.space.contains(&x) && self.admissible(&x) && self.valid(&x) {
                        out.push(x);
                        emitted += 1;
                        break;
                    }
                }
            }
        }
    }

    fn sample_informed(&mut self, count: usize, out: &mut Vec<State<T>>) {
        let bound = Cost::new(self.c_cur + self.sc.goal_radius);
        for _ in 0..count {
            let mut invalid = 0;
            for _ in 0..INFORMED_DRAWS {
                let Ok(x) = sample_informed_bounded(&self.sc.space, &self.sc.start, &self.sc.goal_center, bound, &mut self.rng)
                else {
                    return;
                };
                self.counters.samples_drawn += 1;
                if !self.sc.space.contains(&x) || !self.admissible(&x) {
                    continue;
                }
                if self.valid(&x) {
                    out.push(x);
                    break;
                }
                invalid += 1;
                if invalid >= SLOT_ATTEMPTS {
                    break;
                }
            }
        }
    }

    fn insert_batch(&mut self, batch: Vec<State<T>>) {
        for x in batch {
            self.add_sample(x);
        }
    }

    // ---- reverse tree ----

    fn build_reverse(&mut self) {
        let k = rgg_k(self.cfg.k_rgg, self.index.len(), self.sc.space.kind().dof());
        let (added, removed) = (std::mem::take(&mut self.added), std::mem::take(&mut self.removed));
        self.knn.update(&self.index, k, &added, &removed);
        let mut adj = self.knn.adjacency(self.recs.len());
        for (u, nb) in adj.iter_mut().enumerate() {
            nb.retain(|&(v, _)| self.cache.get(&(u.min(v), u.max(v))) != Some(&false));
        }
        for (u, v, w) in self.tree.edge_list() {
            for (a, b) in [(u, v), (v, u)] {
                if !adj[a].iter().any(|&(x, _)| x == b) {
                    adj[a].push((b, w));
                }
            }
        }
        self.adj = adj;
        let goals: Vec<usize> = self.sample_ids().filter(|&i| self.rec(i).is_goal).collect();
        let rt = reverse_dijkstra(&self.adj, &goals);
        for (id, r) in self.recs.iter_mut().enumerate() {
            if let Some(r) = r {
                r.h_rev = rt.h[id];
                r.successor = rt.successor[id];
                r.in_reverse = rt.h[id].is_finite();
            }
        }
    }

    // ---- forward tree ----

    fn vertex_key(&self, v: usize) -> T {
        self.tree.g(v) + self.rec(v).h_rev
    }

    fn build_forward(&mut self) {
        let n = self.recs.len();
        let mut qv: BinaryHeap<Keyed<T>> = BinaryHeap::new();
        let mut qe: BinaryHeap<EdgeEntry<T>> = BinaryHeap::new();
        let mut expanded: Vec<Option<u64>> = vec![None; n];
        for v in self.tree.vertices().collect::<Vec<_>>() {
            self.push_vertex(&mut qv, v);
        }
        loop {
            // ExpandNextVertex while the best vertex is no worse than the best edge
            loop {
                while let Some(top) = qv.peek() {
                    if top.version != self.tree.version(top.id) || expanded[top.id] == Some(top.version) {
                        qv.pop();
                    } else {
                        break;
                    }
                }
                while let Some(top) = qe.peek() {
                    if top.version != self.tree.version(top.v) {
                        qe.pop();
                    } else {
                        break;
                    }
                }
                let Some(best_v) = qv.peek().copied() else { break };
                let best_e = qe.peek().map_or(T::infinity(), |e| e.key);
                if best_v.key > best_e {
                    break;
                }
                qv.pop();
                expanded[best_v.id] = Some(best_v.version);
                self.expand_vertex(best_v.id, &mut qe);
            }
            let Some(edge) = qe.pop() else { break };
            if edge.version != self.tree.version(edge.v) {
                continue;
            }
            let (v, x) = (edge.v, edge.x);
            let gv = self.tree.g(v);
            let c_hat = self.sc.space.dist(&self.rec(v).state, &self.rec(x).state);
            let hx = self.rec(x).h_rev;
            if !(gv + c_hat + hx < self.c_cur) {
                break;
            }
            if !(gv + c_hat < self.tree.g(x)) {
                continue;
            }
            let c_edge = if self.edge_valid(v, x) { c_hat } else { T::infinity() };
            if gv + c_edge + hx < self.c_cur && gv + c_edge < self.tree.g(x) {
                self.extend(v, x, c_edge, &mut qv);
            }
            if self.should_stop() {
                break;
            }
        }
    }

    fn push_vertex(&self, qv: &mut BinaryHeap<Keyed<T>>, v: usize) {
        let key = self.vertex_key(v);
        if key.is_finite() && key < self.c_cur {
            qv.push(Keyed { key, id: v, version: self.tree.version(v) });
        }
    }

    fn expand_vertex(&mut self, v: usize, qe: &mut BinaryHeap<EdgeEntry<T>>) {
        let gv = self.tree.g(v);
        let version = self.tree.version(v);
        for &(x, d) in &self.adj[v] {
            if self.cache.get(&(v.min(x), v.max(x))) == Some(&false) {
                continue;
            }
            let key = gv + d + self.rec(x).h_rev;
            if key < self.c_cur && gv + d < self.tree.g(x) {
                qe.push(EdgeEntry { key, v, x, version });
            }
        }
    }

    fn edge_valid(&mut self, v: usize, x: usize) -> bool {
        let k = (v.min(x), v.max(x));
        if let Some(&ok) = self.cache.get(&k) {
            self.counters.collision_cache_hits += 1;
            return ok;
        }
        let mut stats = MotionStats::default();
        let ok = self.sc.check_motion(&self.rec(v).state, &self.rec(x).state, &mut stats);
        self.counters.edge_evals += 1;
        self.counters.state_checks += stats.states;
        self.cache.insert(k, ok);
        ok
    }

    fn extend(&mut self, v: usize, x: usize, c: T, qv: &mut BinaryHeap<Keyed<T>>) {
        self.tree.add_edge(v, x, c);
        self.tree.attach(x, v, c);
        let mut improved = vec![x];
        let recs = &self.recs;
        let h = |id: usize| recs[id].as_ref().map_or(T::infinity(), |r| r.h_rev);
        self.tree.propagate(&[x], |id, g| g + h(id), |id| improved.push(id));
        let mut best: Option<(T, usize)> = None;
        for &u in &improved {
            self.push_vertex(qv, u);
            if self.rec(u).is_goal {
                let g = self.tree.g(u);
                if best.is_none_or(|(b, _)| g < b) {
                    best = Some((g, u));
                }
            }
        }
        self.set_incumbent(best);
    }
}
