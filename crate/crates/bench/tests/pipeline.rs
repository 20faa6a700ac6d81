use std::path::PathBuf;

use relregion_bench::emit::{parse_csv, parse_json, to_csv, to_json, to_svg};
use relregion_bench::report::time_to_target;
use relregion_bench::run::resolve_target;
use relregion_bench::{aggregate, emit, run_benchmark, BenchConfig, COptSource, PlannerEntry, TargetRule, ALL_FORMATS, CSV_HEADER};
use relregion_core::run::ClockMode;
use relregion_core::world::builtin_scenario;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(format!("{name}.json"))
}

fn small(target: TargetRule) -> BenchConfig {
    BenchConfig {
        scenarios: vec![scenario("bugtrap_se2")],
        planners: vec![PlannerEntry::new("rrtstar"), PlannerEntry::new("relregion")],
        runs: 3,
        time_budget: 0.4,
        target,
        base_seed: 10,
        clock: ClockMode::Virtual { tick_s: 2e-5 },
        threads: Some(2),
    }
}

#[test]
fn one_record_per_cell_with_paired_seeds() {
    let report = run_benchmark(&small(TargetRule::None)).unwrap();
    assert_eq!(report.records.len(), 6);
    let cells: Vec<(&str, u64)> = report.records.iter().map(|r| (r.planner.as_str(), r.seed)).collect();
    assert_eq!(
        cells,
        vec![("rrtstar", 10), ("rrtstar", 11), ("rrtstar", 12), ("relregion", 10), ("relregion", 11), ("relregion", 12)]
    );
    assert!(report.records.iter().all(|r| r.error.is_none() && r.scenario == "bugtrap_se2"));
}

#[test]
fn reruns_give_identical_csv() {
    let cfg = small(TargetRule::Cost(20.0));
    let a = to_csv(&run_benchmark(&cfg).unwrap()).unwrap();
    let b = to_csv(&run_benchmark(&BenchConfig { threads: Some(1), ..cfg }).unwrap()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.lines().next().unwrap(), CSV_HEADER);
}

#[test]
fn time_to_target_is_the_first_event_at_or_below_target() {
    let report = run_benchmark(&small(TargetRule::Ratio { ratio: 0.92, c_opt: COptSource::Fixed(20.0) })).unwrap();
    let target = 0.92 * 20.0;
    assert_eq!(report.scenarios[0].target, Some(target));
    for r in &report.records {
        let first = r.trace.iter().find(|e| e.cost <= target).map(|e| e.elapsed_s);
        assert_eq!(r.time_to_target, first);
        assert_eq!(time_to_target(&r.trace, Some(target)), first);
        if let Some(t) = first {
            assert!(r.trace.iter().filter(|e| e.elapsed_s < t).all(|e| e.cost > target));
        }
    }
}

#[test]
fn aggregates_recompute_from_records_and_from_csv() {
    let report = run_benchmark(&small(TargetRule::Cost(14.0))).unwrap();
    assert_eq!(aggregate(&report), report.aggregates);

    let rows = parse_csv(&to_csv(&report).unwrap()).unwrap();
    let mut rebuilt = report.clone();
    for r in &mut rebuilt.records {
        let events: Vec<_> = rows.iter().filter(|x| x.planner == r.planner && x.scenario == r.scenario && x.seed == r.seed).collect();
        assert_eq!(events.len(), r.trace.len());
        for (e, x) in r.trace.iter_mut().zip(events) {
            assert_eq!((e.elapsed_s, e.cost, e.edge_evals), (x.elapsed_s, x.cost, x.edge_evals));
            e.iteration = 0;
        }
        r.time_to_target = time_to_target(&r.trace, Some(14.0));
    }
    assert_eq!(aggregate(&rebuilt), report.aggregates);
}

#[test]
fn curves_never_undercut_contributing_traces() {
    let report = run_benchmark(&small(TargetRule::None)).unwrap();
    for cell in &report.aggregates.cells {
        let finals: Vec<f64> = report.cell(&cell.scenario, &cell.planner).map(|r| r.final_cost()).collect();
        let best_final = finals.iter().copied().fold(f64::INFINITY, f64::min);
        for p in &cell.curve {
            assert!(p.q25 <= p.median && p.median <= p.q75);
            assert!(p.q25 >= best_final);
        }
    }
}

#[test]
fn json_round_trips() {
    let report = run_benchmark(&small(TargetRule::None)).unwrap();
    assert_eq!(parse_json(&to_json(&report)).unwrap(), report);
}

#[test]
fn svg_is_well_formed() {
    let report = run_benchmark(&small(TargetRule::Cost(14.0))).unwrap();
    let svg = to_svg(&report, "bugtrap_se2");
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    assert!(doc.root_element().attribute("viewBox").is_some());
    assert!(doc.descendants().any(|n| n.tag_name().name() == "polyline"));
}

#[test]
fn emit_writes_every_format() {
    let report = run_benchmark(&small(TargetRule::None)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let written = emit(&report, &dir.path().join("nested"), &ALL_FORMATS).unwrap();
    assert_eq!(written.len(), 3);
    assert!(written.iter().all(|p| p.exists()));
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let err = emit(&report, &blocker, &ALL_FORMATS).unwrap_err();
    assert!(err.to_string().contains("file"));
}

#[test]
fn failing_runs_are_recorded_not_fatal() {
    let cfg = BenchConfig {
        scenarios: vec![scenario("wall_infeasible")],
        planners: vec![PlannerEntry::new("relregion")],
        runs: 2,
        time_budget: 0.1,
        ..small(TargetRule::None)
    };
    let report = run_benchmark(&cfg).unwrap();
    assert!(report.all_dnf());
    let cell = &report.aggregates.cells[0];
    assert!(cell.curve.is_empty());
    assert_eq!(cell.time_to_target.dnf, 2);
}

#[test]
fn missing_scenario_is_an_error() {
    let cfg = BenchConfig { scenarios: vec!["/nonexistent.json".into()], ..small(TargetRule::None) };
    assert!(run_benchmark(&cfg).is_err());
}

#[test]
fn fixed_optimum_scales_the_target() {
    let sc = builtin_scenario("empty_se2").unwrap();
    let rule = TargetRule::Ratio { ratio: 0.5, c_opt: COptSource::Fixed(8.0) };
    assert_eq!(resolve_target(&sc, &rule).unwrap(), (Some(8.0), Some(4.0)));
    assert_eq!(resolve_target(&sc, &TargetRule::None).unwrap(), (None, None));
}
