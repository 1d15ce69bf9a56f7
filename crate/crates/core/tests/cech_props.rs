mod common;

use proptest::prelude::*;
use rand::Rng;
use sensor_evasion::cech::{build_timeline, cech_at, cech_from_points, TimelineError};
use sensor_evasion::coverage::{nerve_betti, union_betti_grid};
use sensor_evasion::geom::min_enclosing_ball;
use sensor_evasion::{Point, SensorId};

/// Is some point of a grid of step `s` inside every open ball?
fn grid_meets_all(points: &[Point], r: f64, s: f64) -> bool {
    let lo = Point::new(
        points.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - r,
        points.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - r,
    );
    let hi = Point::new(
        points.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max) + r,
        points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max) + r,
    );
    let (nx, ny) = (((hi.x - lo.x) / s).ceil() as usize, ((hi.y - lo.y) / s).ceil() as usize);
    (0..=ny).any(|j| {
        (0..=nx).any(|i| {
            let q = Point::new(lo.x + i as f64 * s, lo.y + j as f64 * s);
            points.iter().all(|p| p.dist(q) < r)
        })
    })
}

fn near_points(n: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0..2.6f64, 0.0..2.6f64), n).prop_map(|v| {
        v.into_iter().map(|(x, y)| Point::new(x, y)).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplices_match_intersection_oracle(pts in near_points(3), r in 0.6..1.4f64) {
        // keep away from thresholds so the sampled grid is trustworthy
        prop_assume!(common::genericity(&pts, r) > 0.05);
        let s = r / 64.0;
        let k = cech_from_points(&pts, r);
        for i in 0..3 {
            for j in i + 1..3 {
                let present = k.contains_edge([SensorId(i as u32), SensorId(j as u32)]);
                prop_assert_eq!(present, grid_meets_all(&[pts[i], pts[j]], r, s), "edge {} {}", i, j);
            }
        }
        if k.edges().len() == 3 {
            let present = !k.triangles().is_empty();
            prop_assert_eq!(present, grid_meets_all(&pts, r, s));
            prop_assert_eq!(present, min_enclosing_ball(&pts).radius < r);
        }
    }

    #[test]
    fn nerves_are_closed(seed in any::<u64>(), t in 0.0..=1.0f64) {
        let scene = common::moving_scene(&mut common::rng(seed), 6.0, 5.0, 6, 4);
        prop_assert!(cech_at(&scene, t).is_downward_closed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn halving_dt_keeps_the_sequence(seed in any::<u64>()) {
        let scene = common::moving_scene(&mut common::rng(seed), 6.0, 5.0, 3, 3);
        let tol = 1e-6;
        let fine = build_timeline(&scene, 1.0 / 128.0, tol);
        let coarse = build_timeline(&scene, 1.0 / 64.0, tol);
        let (fine, coarse) = match (fine, coarse) {
            (Ok(f), Ok(c)) => (f, c),
            (Err(TimelineError::NonGeneric { .. }), _) | (_, Err(TimelineError::NonGeneric { .. })) => {
                return Ok(());
            }
            (Err(e), _) | (_, Err(e)) => return Err(TestCaseError::fail(e.to_string())),
        };
        // events closer than two coarse steps may hide between samples
        prop_assume!(fine.shortest_interval() > 2.0 / 64.0);
        prop_assert_eq!(fine.complexes(), coarse.complexes());
        for (a, b) in fine.breakpoints().iter().zip(coarse.breakpoints()) {
            prop_assert!((a - b).abs() <= 2.0 * tol, "{} vs {}", a, b);
        }
    }
}

#[test]
fn nerve_lemma_on_random_static_scenes() {
    let mut rng = common::rng(5);
    let mut with_holes = 0;
    let h = 1.0 / 32.0;
    for round in 0..60 {
        let n = rng.gen_range(3..14);
        // threshold margin above three cell margins keeps both rasters faithful
        let scene = common::generic_fenced_scene(&mut rng, n, 0.1);
        let pts = scene.positions_at(0.0);
        let grid = union_betti_grid(&pts, 1.0, h)
            .unwrap()
            .unwrap_or_else(|| panic!("round {round}: rasters disagree"));
        assert_eq!(nerve_betti(&pts, 1.0), grid, "round {round}");
        if grid.1 > 1 {
            with_holes += 1;
        }
    }
    assert!(with_holes >= 10, "only {with_holes} scenes with interior holes");
}
