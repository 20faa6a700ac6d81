use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relregion_bench::config::{DEFAULT_CALIBRATION_BUDGET, DEFAULT_CALIBRATION_SEED};
use relregion_bench::{
    calibrate_c_opt, emit, load_scenario_file, run_benchmark, run_planner, BenchConfig, BenchError, Profile, RunLimits,
    ALL_FORMATS,
};
use relregion_core::run::PlanStatus;
use relregion_core::world::state_to_json;
use serde_json::json;

#[derive(Parser)]
#[command(name = "relregion", version, about = "Plan, benchmark and calibrate sampling-based motion planners")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Ci,
    Paper,
}

#[derive(Subcommand)]
enum Command {
    /// Run one planner once and report the result as JSON.
    Plan {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        planner: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10.0)]
        budget: f64,
        #[arg(long, conflicts_with = "target_ratio")]
        target: Option<f64>,
        /// Target as a fraction of a calibrated optimum.
        #[arg(long)]
        target_ratio: Option<f64>,
        /// Optimum used with --target-ratio instead of calibrating.
        #[arg(long, requires = "target_ratio")]
        c_opt: Option<f64>,
        /// Planner config JSON file.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a benchmark config and write CSV, JSON and SVG reports.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
        /// Overrides runs and budget.
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
    },
    /// Estimate the optimum with one long RRT* run.
    Calibrate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CALIBRATION_BUDGET)]
        budget: f64,
        #[arg(long, default_value_t = DEFAULT_CALIBRATION_SEED)]
        seed: u64,
    },
}

fn cost_json(c: f64) -> serde_json::Value {
    if c.is_finite() {
        json!(c)
    } else {
        serde_json::Value::Null
    }
}

fn run(cli: Cli) -> Result<ExitCode, BenchError> {
    match cli.command {
        Command::Plan { scenario, planner, seed, budget, target, target_ratio, c_opt, config, out } => {
            let sc = load_scenario_file(&scenario)?;
            let config = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| BenchError::io(&path, e))?;
                    serde_json::from_str(&text).map_err(|e| BenchError::Config(format!("{}: {e}", path.display())))?
                }
                None => serde_json::Value::Null,
            };
            let target = match target_ratio {
                Some(r) if !(r > 0.0 && r <= 1.0) => return Err(BenchError::Config("--target-ratio must lie in (0, 1]".into())),
                Some(r) => {
                    let c = match c_opt {
                        Some(c) => c,
                        None => calibrate_c_opt(&sc, DEFAULT_CALIBRATION_BUDGET, DEFAULT_CALIBRATION_SEED)?,
                    };
                    Some(r * c)
                }
                None => target,
            };
            let limits = RunLimits { target_cost: target, ..RunLimits::new(seed, budget) };
            let r = run_planner(&planner, &config, &sc, &limits)?;
            let doc = json!({
                "planner": planner,
                "scenario": sc.name,
                "seed": seed,
                "status": r.status,
                "best_cost": cost_json(r.best_cost.value()),
                "target": target,
                "path": r.path.iter().map(|x| state_to_json(x, sc.space.kind())).collect::<Vec<_>>(),
                "trace": r.trace,
                "counters": r.counters,
            });
            let text = serde_json::to_string_pretty(&doc).expect("result serializes");
            match out {
                Some(path) => std::fs::write(&path, text).map_err(|e| BenchError::io(&path, e))?,
                None => println!("{text}"),
            }
            let ok = r.solved() && (target.is_none() || r.status == PlanStatus::TargetReached);
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Bench { config, out_dir, profile } => {
            let mut cfg = BenchConfig::load(&config)?;
            match profile {
                Some(ProfileArg::Ci) => cfg.apply_profile(Profile::Ci),
                Some(ProfileArg::Paper) => cfg.apply_profile(Profile::Paper),
                None => {}
            }
            let report = run_benchmark(&cfg)?;
            for path in emit(&report, &out_dir, &ALL_FORMATS)? {
                eprintln!("wrote {}", path.display());
            }
            for cell in &report.aggregates.cells {
                let s = &cell.time_to_target;
                let median = s.median.map_or("-".to_string(), |m| format!("{m:.3}"));
                println!("{} {} reached {}/{} median {median} s", cell.scenario, cell.planner, s.reached, cell.runs);
            }
            Ok(if report.all_dnf() { ExitCode::from(2) } else { ExitCode::SUCCESS })
        }
        Command::Calibrate { scenario, budget, seed } => {
            let sc = load_scenario_file(&scenario)?;
            match calibrate_c_opt(&sc, budget, seed) {
                Ok(c) => {
                    println!("{c}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(e @ BenchError::CalibrationFailed(_)) => {
                    eprintln!("{e}");
                    Ok(ExitCode::from(2))
                }
                Err(e) => Err(e),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
