use relregion_bench::config::{DEFAULT_CALIBRATION_BUDGET, DEFAULT_CALIBRATION_SEED};
use relregion_bench::{calibrate_c_opt, BenchError};
use relregion_core::world::builtin_scenario;

#[test]
fn calibration() {
    let sc = builtin_scenario("empty_se2").unwrap();
    let c = calibrate_c_opt(&sc, DEFAULT_CALIBRATION_BUDGET, DEFAULT_CALIBRATION_SEED).unwrap();
    assert!(c >= 7.9 && c <= 7.9 * 1.05, "{c}");

    let wall = builtin_scenario("wall_infeasible").unwrap();
    assert!(matches!(calibrate_c_opt(&wall, 0.2, 0), Err(BenchError::CalibrationFailed(_))));
}
