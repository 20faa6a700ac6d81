//! Reference planners: RRT*, Informed RRT* and RRT#.
//!
//! All three share one extension step (sample, nearest, steer, choose parent
//! among the k nearest). RRT* and Informed RRT* then rewire locally; RRT#
//! keeps every evaluated edge and propagates cost decreases over the whole
//! graph so each vertex holds its shortest-path cost after every iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gnat::GnatIndex;
use crate::graph::SearchTree;
use crate::planner::{rgg_k, PlannerError};
use crate::run::{ClockMode, Counters, Limits, PlanResult, PlanStatus, Progress, Recorder};
use crate::scalar::Real;
use crate::statespace::{sample_informed_bounded, sample_uniform, Cost, SpaceDef, State};
use crate::world::{MotionStats, Scenario, WorldError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineKind {
    RrtStar,
    InformedRrtStar,
    RrtSharp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineConfig {
    /// Steering range; `None` means 0.15 × the space diagonal.
    pub eta: Option<f64>,
    pub goal_bias: f64,
    /// Scale of the k-nearest rewiring rule.
    pub rewire_scale: f64,
    pub seed: u64,
    pub time_budget: f64,
    pub target_cost: Option<f64>,
    /// Stop after this many extension attempts.
    pub max_iterations: Option<u64>,
    /// Stop once this many motion checks have been made.
    pub max_edge_evals: Option<u64>,
    pub clock: ClockMode,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            eta: None,
            goal_bias: 0.05,
            rewire_scale: 1.0,
            seed: 0,
            time_budget: 10.0,
            target_cost: None,
            max_iterations: None,
            max_edge_evals: None,
            clock: ClockMode::Wall,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<(), PlannerError> {
        let bad = |m: &str| Err(PlannerError::InvalidConfig(m.into()));
        if let Some(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return bad("eta must be positive");
            }
        }
        if !(0.0..=1.0).contains(&self.goal_bias) {
            return bad("goal_bias must lie in [0, 1]");
        }
        if !(self.rewire_scale >= 1.0 && self.rewire_scale.is_finite()) {
            return bad("rewire_scale must be at least 1");
        }
        if !(self.time_budget >= 0.0) {
            return bad("time_budget must be nonnegative");
        }
        if let ClockMode::Virtual { tick_s } = self.clock {
            if !(tick_s > 0.0 && tick_s.is_finite()) {
                return bad("virtual clock tick must be positive");
            }
        }
        Ok(())
    }
}

/// Where the most recent raw sample came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleSource {
    Goal,
    Uniform,
    Informed,
}

pub struct BaselinePlanner<'a, T: Real> {
    kind: BaselineKind,
    sc: &'a Scenario<T>,
    cfg: BaselineConfig,
    eta: T,
    rng: ChaCha8Rng,
    states: Vec<State<T>>,
    index: GnatIndex<State<T>, SpaceDef<T>>,
    tree: SearchTree<T>,
    goals: Vec<usize>,
    c_cur: T,
    best_goal: Option<usize>,
    counters: Counters,
    recorder: Recorder<'a>,
    last_sample: Option<(State<T>, SampleSource)>,
    finished: Option<PlanStatus>,
}

pub fn rrt_star_plan<T: Real>(sc: &Scenario<T>, cfg: &BaselineConfig) -> Result<PlanResult<T>, PlannerError> {
    Ok(BaselinePlanner::new(BaselineKind::RrtStar, sc, cfg.clone())?.run())
}

pub fn informed_rrt_star_plan<T: Real>(sc: &Scenario<T>, cfg: &BaselineConfig) -> Result<PlanResult<T>, PlannerError> {
    Ok(BaselinePlanner::new(BaselineKind::InformedRrtStar, sc, cfg.clone())?.run())
}

pub fn rrt_sharp_plan<T: Real>(sc: &Scenario<T>, cfg: &BaselineConfig) -> Result<PlanResult<T>, PlannerError> {
    Ok(BaselinePlanner::new(BaselineKind::RrtSharp, sc, cfg.clone())?.run())
}

impl<'a, T: Real> BaselinePlanner<'a, T> {
    pub fn new(kind: BaselineKind, sc: &'a Scenario<T>, cfg: BaselineConfig) -> Result<Self, PlannerError> {
        cfg.validate()?;
        if !sc.is_state_valid(&sc.start) {
            return Err(WorldError::InvalidScenario("start state is in collision or out of bounds".into()).into());
        }
        let eta = T::lit(cfg.eta.unwrap_or(0.15 * sc.space.diagonal().to_f64_lossy()));
        let limits = Limits {
            time_budget: cfg.time_budget,
            target_cost: cfg.target_cost,
            max_iterations: cfg.max_iterations,
            clock: cfg.clock,
        };
        let mut p = BaselinePlanner {
            kind,
            sc,
            eta,
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            cfg,
            states: Vec::new(),
            index: GnatIndex::new(sc.space.clone()),
            tree: SearchTree::new(),
            goals: Vec::new(),
            c_cur: T::infinity(),
            best_goal: None,
            counters: Counters::default(),
            recorder: Recorder::new(limits, None),
            last_sample: None,
            finished: None,
        };
        p.counters.state_checks += 1;
        let start = p.add_vertex(sc.start);
        p.tree.set_root(start);
        p.update_incumbent();
        Ok(p)
    }

    pub fn kind(&self) -> BaselineKind {
        self.kind
    }

    pub fn set_progress(&mut self, progress: impl FnMut(&Progress) + 'a) {
        self.recorder.progress = Some(Box::new(progress));
    }

    pub fn incumbent(&self) -> Cost<T> {
        Cost::new(self.c_cur)
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub fn last_sample(&self) -> Option<(State<T>, SampleSource)> {
        self.last_sample
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, id: usize) -> State<T> {
        self.states[id]
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.tree.parent(id)
    }

    /// `(id, g)` for every tree vertex.
    pub fn forward_costs(&self) -> Vec<(usize, T)> {
        self.tree.vertices().map(|v| (v, self.tree.g(v))).collect()
    }

    /// Collision-free edges recorded in the search graph.
    pub fn evaluated_edges(&self) -> Vec<(usize, usize, T)> {
        self.tree.edge_list()
    }

    pub fn best_path_ids(&self) -> Vec<usize> {
        self.best_goal.map(|g| self.tree.path_to(g)).unwrap_or_default()
    }

    fn add_vertex(&mut self, x: State<T>) -> usize {
        let id = self.states.len();
        self.states.push(x);
        self.index.insert(id, x).expect("fresh id");
        self.tree.ensure(id);
        if self.sc.in_goal(&x) {
            self.goals.push(id);
        }
        id
    }

    fn motion_valid(&mut self, a: &State<T>, b: &State<T>) -> bool {
        let mut stats = MotionStats::default();
        let ok = self.sc.check_motion(a, b, &mut stats);
        self.counters.edge_evals += 1;
        self.counters.state_checks += stats.states;
        ok
    }

    fn update_incumbent(&mut self) {
        let mut best: Option<(T, usize)> = None;
        for &v in &self.goals {
            let g = self.tree.g(v);
            if g.is_finite() && best.is_none_or(|(b, _)| g < b) {
                best = Some((g, v));
            }
        }
        if let Some((g, v)) = best {
            if g < self.c_cur {
                self.c_cur = g;
                self.recorder.record(g.to_f64_lossy(), &self.counters);
            }
            self.best_goal = Some(v);
        }
    }

    fn should_stop(&mut self) -> bool {
        if self.finished.is_some() {
            return true;
        }
        let c = self.c_cur.to_f64_lossy();
        if self.recorder.target_reached(c) {
            self.finished = Some(PlanStatus::TargetReached);
        } else if self.recorder.out_of_time(&self.counters)
            || self.recorder.out_of_iterations(&self.counters)
            || self.cfg.max_edge_evals.is_some_and(|m| self.counters.edge_evals >= m)
        {
            self.finished = Some(self.recorder.status(c));
        }
        self.finished.is_some()
    }

    fn draw(&mut self) -> (State<T>, SampleSource) {
        self.counters.samples_drawn += 1;
        if self.rng.random::<f64>() < self.cfg.goal_bias {
            return (self.sc.sample_goal(&mut self.rng), SampleSource::Goal);
        }
        if self.kind == BaselineKind::InformedRrtStar && self.c_cur.is_finite() {
            let bound = Cost::new(self.c_cur + self.sc.goal_radius);
            if let Ok(x) = sample_informed_bounded(&self.sc.space, &self.sc.start, &self.sc.goal_center, bound, &mut self.rng) {
                return (x, SampleSource::Informed);
            }
        }
        (sample_uniform(&self.sc.space, &mut self.rng), SampleSource::Uniform)
    }

    /// One extension attempt. Returns `false` once a stop condition holds.
    pub fn step(&mut self) -> bool {
        if self.should_stop() {
            return false;
        }
        self.counters.iterations += 1;
        let (sample, source) = self.draw();
        self.last_sample = Some((sample, source));
        self.extend(sample);
        !self.should_stop()
    }

    fn extend(&mut self, sample: State<T>) {
        let space = &self.sc.space;
        let near_id = self.index.nearest(&sample).expect("tree holds the start");
        let x_near = self.states[near_id];
        let d = space.dist(&x_near, &sample);
        let x_new = if d > self.eta { space.interpolate(&x_near, &sample, self.eta / d) } else { sample };
        self.counters.state_checks += 1;
        if !space.contains(&x_new) || !self.sc.is_state_valid(&x_new) {
            return;
        }
        let k = rgg_k(self.cfg.rewire_scale, self.states.len() + 1, space.kind().dof()).max(1);
        let mut near = self.index.k_nearest_with_distances(&x_new, k).expect("tree holds the start");
        if !near.iter().any(|&(i, _)| i == near_id) {
            near.push((near_id, space.dist(&x_near, &x_new)));
        }
        if near.iter().any(|&(_, d)| d == T::zero()) {
            return;
        }
        match self.kind {
            BaselineKind::RrtSharp => self.extend_sharp(x_new, &near),
            _ => self.extend_star(x_new, &near),
        }
        self.update_incumbent();
    }

    fn extend_star(&mut self, x_new: State<T>, near: &[(usize, T)]) {
        let mut order: Vec<(T, usize, T)> = near.iter().map(|&(u, d)| (self.tree.g(u) + d, u, d)).collect();
        order.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(&b.1)));
        let mut parent = None;
        for &(_, u, d) in &order {
            let xu = self.states[u];
            if self.motion_valid(&xu, &x_new) {
                parent = Some((u, d));
                break;
            }
        }
        let Some((p, dp)) = parent else { return };
        let new = self.add_vertex(x_new);
        self.tree.attach(new, p, dp);
        let g_new = self.tree.g(new);
        for &(u, d) in near {
            if u == p || !(g_new + d < self.tree.g(u)) {
                continue;
            }
            let xu = self.states[u];
            if self.motion_valid(&x_new, &xu) {
                self.tree.attach(u, new, d);
                self.tree.update_subtree(u);
            }
        }
    }

    fn extend_sharp(&mut self, x_new: State<T>, near: &[(usize, T)]) {
        let mut valid = Vec::new();
        for &(u, d) in near {
            let xu = self.states[u];
            if self.motion_valid(&xu, &x_new) {
                valid.push((u, d));
            }
        }
        if valid.is_empty() {
            return;
        }
        let new = self.add_vertex(x_new);
        for &(u, d) in &valid {
            self.tree.add_edge(u, new, d);
        }
        let best = valid
            .iter()
            .filter(|&&(u, _)| self.tree.contains(u))
            .min_by(|a, b| (self.tree.g(a.0) + a.1).partial_cmp(&(self.tree.g(b.0) + b.1)).unwrap().then(a.0.cmp(&b.0)))
            .copied();
        if let Some((p, d)) = best {
            self.tree.attach(new, p, d);
            self.tree.propagate(&[new], |_, g| g, |_| {});
        }
    }

    pub fn run(mut self) -> PlanResult<T> {
        while self.step() {}
        self.finish()
    }

    pub fn finish(mut self) -> PlanResult<T> {
        let status = self.finished.unwrap_or_else(|| self.recorder.status(self.c_cur.to_f64_lossy()));
        self.recorder.record(self.c_cur.to_f64_lossy(), &self.counters);
        let path_ids = self.best_path_ids();
        let path = path_ids.iter().map(|&i| self.states[i]).collect();
        PlanResult {
            status,
            best_cost: Cost::new(self.c_cur),
            path,
            path_ids,
            trace: std::mem::take(&mut self.recorder.trace),
            counters: self.counters,
        }
    }
}
