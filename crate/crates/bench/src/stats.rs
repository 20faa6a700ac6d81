//! Cost-over-time and time-to-target statistics.

use serde::{Deserialize, Serialize};

use crate::report::{BenchReport, RunRecord};

pub const GRID_POINTS: usize = 200;
pub const GRID_START: f64 = 0.01;

/// Sample quantile with linear interpolation between order statistics
/// (type 7). `sorted` must be ascending and nonempty.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// `GRID_POINTS` log-spaced times in `(GRID_START, budget]`, ending at `budget`.
pub fn time_grid(budget: f64) -> Vec<f64> {
    let ratio = budget / GRID_START;
    (1..=GRID_POINTS)
        .map(|i| if i == GRID_POINTS { budget } else { GRID_START * ratio.powf(i as f64 / GRID_POINTS as f64) })
        .collect()
}

/// Incumbent cost at time `t`: the last trace event at or before `t`.
pub fn cost_at(record: &RunRecord, t: f64) -> f64 {
    record.trace.iter().take_while(|e| e.elapsed_s <= t).last().map_or(f64::INFINITY, |e| e.cost)
}

fn end_time(record: &RunRecord) -> f64 {
    record.trace.last().map_or(0.0, |e| e.elapsed_s)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub t: f64,
    pub median: f64,
    pub q25: f64,
    pub q75: f64,
    /// Runs with a solution by `t`.
    pub solved: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetStats {
    pub reached: usize,
    pub dnf: usize,
    pub median: Option<f64>,
    pub q25: Option<f64>,
    pub q75: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellAggregate {
    pub scenario: String,
    pub planner: String,
    pub runs: usize,
    /// Fraction of runs with a solution at each grid time.
    pub success: Vec<f64>,
    /// First grid time at which half the runs have a solution.
    pub t50: Option<f64>,
    /// First grid time at which 95% of the runs have terminated.
    pub t95: Option<f64>,
    /// Median and quartiles over solved runs, restricted to `[t50, t95]`.
    pub curve: Vec<CurvePoint>,
    pub time_to_target: TargetStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct Aggregates {
    pub grid: Vec<f64>,
    pub cells: Vec<CellAggregate>,
}

impl Aggregates {
    pub fn cell(&self, scenario: &str, planner: &str) -> Option<&CellAggregate> {
        self.cells.iter().find(|c| c.scenario == scenario && c.planner == planner)
    }
}

pub fn target_stats(times: &[Option<f64>]) -> TargetStats {
    let mut hit: Vec<f64> = times.iter().flatten().copied().collect();
    hit.sort_by(f64::total_cmp);
    let q = |p| (!hit.is_empty()).then(|| quantile(&hit, p));
    TargetStats { reached: hit.len(), dnf: times.len() - hit.len(), median: q(0.5), q25: q(0.25), q75: q(0.75) }
}

pub fn aggregate_cell(scenario: &str, planner: &str, records: &[&RunRecord], grid: &[f64]) -> CellAggregate {
    let n = records.len();
    let mut success = Vec::with_capacity(grid.len());
    let mut t50 = None;
    let mut t95 = None;
    let mut points = Vec::new();
    for &t in grid {
        let mut costs: Vec<f64> = records.iter().map(|r| cost_at(r, t)).filter(|c| c.is_finite()).collect();
        let frac = if n == 0 { 0.0 } else { costs.len() as f64 / n as f64 };
        success.push(frac);
        if t50.is_none() && n > 0 && 2 * costs.len() >= n {
            t50 = Some(t);
        }
        let ended = records.iter().filter(|r| end_time(r) <= t).count();
        if t95.is_none() && n > 0 && 100 * ended >= 95 * n {
            t95 = Some(t);
        }
        if costs.is_empty() {
            continue;
        }
        costs.sort_by(f64::total_cmp);
        points.push(CurvePoint {
            t,
            median: quantile(&costs, 0.5),
            q25: quantile(&costs, 0.25),
            q75: quantile(&costs, 0.75),
            solved: costs.len(),
        });
    }
    let curve = match t50 {
        Some(lo) => points.into_iter().filter(|p| p.t >= lo && t95.is_none_or(|hi| p.t <= hi)).collect(),
        None => Vec::new(),
    };
    let times: Vec<Option<f64>> = records.iter().map(|r| r.time_to_target).collect();
    CellAggregate {
        scenario: scenario.to_string(),
        planner: planner.to_string(),
        runs: n,
        success,
        t50,
        t95,
        curve,
        time_to_target: target_stats(&times),
    }
}

/// Recomputes every per-cell aggregate from the records alone.
pub fn aggregate(report: &BenchReport) -> Aggregates {
    let grid = time_grid(report.time_budget);
    let mut cells = Vec::new();
    for sc in &report.scenarios {
        for planner in &report.planners {
            let records: Vec<&RunRecord> = report.cell(&sc.name, planner).collect();
            cells.push(aggregate_cell(&sc.name, planner, &records, &grid));
        }
    }
    Aggregates { grid, cells }
}
