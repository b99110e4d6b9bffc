mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sgc_core::adapt::Model;
use sgc_core::models::{TrussCase, TrussModel, TrussSpec};

#[test]
fn stiffness_matches_force_method() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in [TrussCase::TwoDiagonals, TrussCase::ThreeMembers] {
        let spec = TrussSpec::new(case);
        for _ in 0..100 {
            let x: Vec<f64> = (0..case.random_members().len())
                .map(|_| rng.random())
                .collect();
            let areas = spec.areas_at(&x).unwrap();
            let stiff = spec.solve_members(&areas, [true; 6]).unwrap().forces;
            let oracle = common::force_method(&areas, spec.e, spec.p);
            for m in 0..6 {
                let scale = oracle[m].abs().max(1e-9 * spec.p);
                assert!(
                    (stiff[m] - oracle[m]).abs() <= 1e-9 * scale,
                    "member {} stiffness {} force {}",
                    m + 1,
                    stiff[m],
                    oracle[m]
                );
            }
        }
    }
}

#[test]
fn joints_are_in_equilibrium() {
    let spec = TrussSpec::new(TrussCase::TwoDiagonals);
    for x in [[0.0, 0.0], [0.3, 0.9], [1.0, 0.2], [1.0, 1.0]] {
        let sol = spec.solve(&spec.areas_at(&x).unwrap()).unwrap();
        let residual = common::equilibrium_residual(&sol.forces, spec.p);
        assert!(residual <= 1e-9 * spec.p * 2.0, "residual {residual}");
    }
}

#[test]
fn failed_truss_is_determinate() {
    let spec = TrussSpec::new(TrussCase::TwoDiagonals);
    let joints = common::determinate_forces(&common::loads(spec.p));
    let mut present = [true; 6];
    present[4] = false;
    for x in [[0.0, 0.0], [0.5, 0.1], [1.0, 0.7]] {
        let sol = spec
            .solve_members(&spec.areas_at(&x).unwrap(), present)
            .unwrap();
        for (got, want) in sol.forces.iter().zip(&joints) {
            assert!((got - want).abs() <= 1e-9 * spec.p);
        }
    }
    // member 4 carries the whole vertical load
    assert!((joints[3] + 3f64.sqrt() * spec.p).abs() < 1e-9 * spec.p);
}

#[test]
fn member4_jumps_where_member5_buckles() {
    let model = TrussModel {
        spec: TrussSpec::new(TrussCase::TwoDiagonals),
    };
    let f = |t: f64| model.evaluate(&[0.5, t]).unwrap();
    let failed = |t: f64| {
        model
            .spec
            .solve(&model.spec.areas_at(&[0.5, t]).unwrap())
            .unwrap()
            .member5_failed
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    assert!(failed(lo) && !failed(hi));
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if failed(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let jump = (f(hi) - f(lo)).abs();
    assert!(jump > 0.5 * model.spec.p, "jump {jump}");
    // continuous on either side of the threshold
    for t in [0.1, 0.9] {
        assert!((f(t + 1e-9) - f(t)).abs() < 1e-3);
    }
}
