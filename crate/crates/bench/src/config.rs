use std::path::{Path, PathBuf};

use relregion_core::run::ClockMode;
use serde::{Deserialize, Serialize};

use crate::registry;
use crate::BenchError;

pub const DEFAULT_CALIBRATION_BUDGET: f64 = 60.0;
pub const DEFAULT_CALIBRATION_SEED: u64 = 0;

/// Planner name plus its config document (`null` for defaults).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerEntry {
    pub name: String,
    #[serde(default)]
    pub config: serde_json::Value,
}

impl PlannerEntry {
    pub fn new(name: impl Into<String>) -> Self {
        PlannerEntry { name: name.into(), config: serde_json::Value::Null }
    }
}

/// Where the reference optimum comes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum COptSource {
    Fixed(f64),
    /// A single long RRT* run.
    Calibrate { budget: f64, seed: u64 },
}

impl Default for COptSource {
    fn default() -> Self {
        COptSource::Calibrate { budget: DEFAULT_CALIBRATION_BUDGET, seed: DEFAULT_CALIBRATION_SEED }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetRule {
    /// Runs use the whole budget; time-to-target is the first solution time.
    #[default]
    None,
    Cost(f64),
    Ratio {
        ratio: f64,
        #[serde(default)]
        c_opt: COptSource,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// 20 runs, 20 s budget.
    Ci,
    /// 100 runs, 300 s budget.
    Paper,
}

impl Profile {
    pub fn runs(self) -> usize {
        match self {
            Profile::Ci => 20,
            Profile::Paper => 100,
        }
    }

    pub fn time_budget(self) -> f64 {
        match self {
            Profile::Ci => 20.0,
            Profile::Paper => 300.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    /// Scenario files; relative paths resolve against the config file.
    pub scenarios: Vec<PathBuf>,
    pub planners: Vec<PlannerEntry>,
    pub runs: usize,
    /// Seconds per run.
    pub time_budget: f64,
    pub target: TargetRule,
    pub base_seed: u64,
    /// Overrides the clock of every planner config.
    pub clock: ClockMode,
    /// Worker threads; `RELREGION_THREADS` caps this further.
    pub threads: Option<usize>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            scenarios: Vec::new(),
            planners: Vec::new(),
            runs: Profile::Ci.runs(),
            time_budget: Profile::Ci.time_budget(),
            target: TargetRule::None,
            base_seed: 0,
            clock: ClockMode::Wall,
            threads: None,
        }
    }
}

impl BenchConfig {
    pub fn from_json(text: &str) -> Result<Self, BenchError> {
        serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        let mut cfg = Self::from_json(&text)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        for p in &mut self.scenarios {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }

    pub fn apply_profile(&mut self, profile: Profile) {
        self.runs = profile.runs();
        self.time_budget = profile.time_budget();
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.runs < 1 {
            return bad("runs must be at least 1".into());
        }
        if !(self.time_budget > 0.0 && self.time_budget.is_finite()) {
            return bad("time_budget must be positive".into());
        }
        if self.scenarios.is_empty() || self.planners.is_empty() {
            return bad("at least one scenario and one planner are required".into());
        }
        match self.target {
            TargetRule::Cost(c) if !(c > 0.0) => return bad("target cost must be positive".into()),
            TargetRule::Ratio { ratio, .. } if !(ratio > 0.0 && ratio <= 1.0) => {
                return bad("target ratio must lie in (0, 1]".into())
            }
            TargetRule::Ratio { c_opt: COptSource::Fixed(c), .. } if !(c > 0.0 && c.is_finite()) => {
                return bad("fixed c_opt must be positive".into())
            }
            TargetRule::Ratio { c_opt: COptSource::Calibrate { budget, .. }, .. } if !(budget > 0.0) => {
                return bad("calibration budget must be positive".into())
            }
            _ => {}
        }
        for (i, p) in self.planners.iter().enumerate() {
            if self.planners[..i].iter().any(|q| q.name == p.name) {
                return bad(format!("planner `{}` listed twice", p.name));
            }
            registry::check(&p.name, &p.config)?;
        }
        Ok(())
    }
}
