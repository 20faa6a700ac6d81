use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relregion_core::statespace::{sample_informed, sample_uniform, Cost, Quaternion, SpaceDef, State};
use relregion_core::world::{builtin_scenario, Scenario};

fn se2() -> SpaceDef<f64> {
    SpaceDef::new(relregion_core::statespace::SpaceKind::Se2, &[[-5.0, 5.0], [-5.0, 5.0]], 1.0, 0.7).unwrap()
}

fn se3() -> SpaceDef<f64> {
    SpaceDef::new(relregion_core::statespace::SpaceKind::Se3, &[[0.0, 4.0], [0.0, 3.0], [0.0, 2.0]], 1.3, 0.5).unwrap()
}

fn se2_state() -> impl Strategy<Value = State<f64>> {
    (-5.0..5.0f64, -5.0..5.0f64, -4.0..4.0f64).prop_map(|(x, y, t)| State::se2(x, y, t))
}

fn se3_state() -> impl Strategy<Value = State<f64>> {
    (0.0..4.0f64, 0.0..3.0f64, 0.0..2.0f64, prop::array::uniform4(-1.0..1.0f64))
        .prop_filter_map("degenerate quaternion", |(x, y, z, q)| {
            Quaternion::from_wxyz(q).filter(|q| q.norm() > 0.5).map(|q| State::se3([x, y, z], q))
        })
}

const EPS: f64 = 1e-9;

fn check_axioms(sp: &SpaceDef<f64>, a: &State<f64>, b: &State<f64>, c: &State<f64>) {
    let ab = sp.dist(a, b);
    assert!((ab - sp.dist(b, a)).abs() <= EPS);
    assert!(sp.dist(a, a) <= EPS);
    assert!(sp.dist(a, c) <= ab + sp.dist(b, c) + EPS);
}

#[test]
fn triangle_inequality_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for sp in [se2(), se3()] {
        for _ in 0..50_000 {
            let a = sample_uniform(&sp, &mut rng);
            let b = sample_uniform(&sp, &mut rng);
            let c = sample_uniform(&sp, &mut rng);
            check_axioms(&sp, &a, &b, &c);
        }
    }
}

proptest! {
    #[test]
    fn se2_metric_axioms(a in se2_state(), b in se2_state(), c in se2_state()) {
        check_axioms(&se2(), &a, &b, &c);
    }

    #[test]
    fn se3_metric_axioms(a in se3_state(), b in se3_state(), c in se3_state()) {
        check_axioms(&se3(), &a, &b, &c);
    }

    #[test]
    fn se2_interpolation_is_additive(a in se2_state(), b in se2_state(), u in 0.0..1.0f64) {
        let sp = se2();
        let x = sp.interpolate(&a, &b, u);
        prop_assert!((sp.dist(&a, &x) + sp.dist(&x, &b) - sp.dist(&a, &b)).abs() <= EPS);
    }

    #[test]
    fn se3_interpolation_is_additive(a in se3_state(), b in se3_state(), u in 0.0..1.0f64) {
        let sp = se3();
        let x = sp.interpolate(&a, &b, u);
        prop_assert!((sp.dist(&a, &x) + sp.dist(&x, &b) - sp.dist(&a, &b)).abs() <= EPS);
    }

    #[test]
    fn informed_samples_respect_the_bound(a in se3_state(), b in se3_state(), slack in 0.0..5.0f64, seed in any::<u64>()) {
        let sp = se3();
        let c = sp.w_t() * sp.translation_distance(&a, &b) + slack;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let x = sample_informed(&sp, &a, &b, Cost::new(c), &mut rng).unwrap();
            let focal = sp.w_t() * (sp.translation_distance(&a, &x) + sp.translation_distance(&x, &b));
            prop_assert!(focal <= c + EPS);
        }
    }

    #[test]
    fn same_seed_same_stream(seed in any::<u64>()) {
        let sp = se3();
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            prop_assert_eq!(sample_uniform(&sp, &mut r1), sample_uniform(&sp, &mut r2));
        }
    }
}

fn maze() -> Scenario<f64> {
    builtin_scenario("maze_se2").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn motion_check_is_symmetric(x0 in 0.0..10.0f64, y0 in 0.0..10.0f64, x1 in 0.0..10.0f64, y1 in 0.0..10.0f64, t0 in -3.0..3.0f64, t1 in -3.0..3.0f64) {
        let sc = maze();
        let a = State::se2(x0, y0, t0);
        let b = State::se2(x1, y1, t1);
        prop_assert_eq!(sc.is_motion_valid(&a, &b), sc.is_motion_valid(&b, &a));
    }

    #[test]
    fn degenerate_motion_is_a_state_check(x in 0.0..10.0f64, y in 0.0..10.0f64, t in -3.0..3.0f64) {
        let sc = maze();
        let a = State::se2(x, y, t);
        prop_assert_eq!(sc.is_motion_valid(&a, &a), sc.is_state_valid(&a));
    }

    #[test]
    fn finer_resolution_never_validates_more(x0 in 0.0..10.0f64, y0 in 0.0..10.0f64, x1 in 0.0..10.0f64, y1 in 0.0..10.0f64) {
        let coarse = maze();
        let mut fine = coarse.clone();
        fine.resolution = coarse.resolution / 2.0;
        let a = State::se2(x0, y0, 0.0);
        let b = State::se2(x1, y1, 1.0);
        if !coarse.is_motion_valid(&a, &b) {
            prop_assert!(!fine.is_motion_valid(&a, &b));
        }
    }
}
