mod common;

use proptest::prelude::*;
use rand::Rng;
use sensor_evasion::evasion::{evasion_exists, overlap_links, uncovered_slice, validate_witness, Verdict};
use sensor_evasion::geom::Keyframe;
use sensor_evasion::{Scene, SensorId, Trajectory};

const H: f64 = 1.0 / 8.0;
const DT: f64 = 1.0 / 64.0;

/// Lattice scene plus a few sensors wandering across it.
fn busy_scene(rng: &mut rand_chacha::ChaCha8Rng) -> Scene {
    let drop = rng.gen_range(0.0..0.4);
    let mut scene = common::lattice_scene(rng, 0.15, drop);
    for _ in 0..rng.gen_range(0..3) {
        let traj = Trajectory::new(vec![
            Keyframe::new(0.0, rng.gen_range(0.5..5.5), rng.gen_range(0.5..4.5)),
            Keyframe::new(rng.gen_range(0.2..0.8), rng.gen_range(0.5..5.5), rng.gen_range(0.5..4.5)),
            Keyframe::new(1.0, rng.gen_range(0.5..5.5), rng.gen_range(0.5..4.5)),
        ])
        .unwrap();
        scene = scene.with_extra_mobile(traj).unwrap();
    }
    scene
}

#[test]
fn deleting_sensors_never_blocks_evasion() {
    let mut rng = common::rng(99);
    let mut counts = [0usize; 3];
    for round in 0..30 {
        let scene = busy_scene(&mut rng);
        let base = evasion_exists(&scene, H, DT).unwrap().verdict;
        counts[base as usize] += 1;
        for _ in 0..3 {
            let id = SensorId(rng.gen_range(0..scene.sensor_count() as u32));
            let fewer = evasion_exists(&scene.without_sensor(id), H, DT).unwrap().verdict;
            if base == Verdict::Exists {
                assert_eq!(fewer, Verdict::Exists, "round {round}, deleted {id}");
            }
            if fewer == Verdict::None {
                assert_eq!(base, Verdict::None, "round {round}, deleted {id}");
            }
        }
    }
    assert!(counts[Verdict::Exists as usize] >= 3 && counts[Verdict::None as usize] >= 3, "{counts:?}");
}

#[test]
fn witnesses_validate_and_span_the_interval() {
    let mut rng = common::rng(7);
    let mut seen = 0;
    for _ in 0..40 {
        let scene = busy_scene(&mut rng);
        let result = evasion_exists(&scene, H, DT).unwrap();
        if let Some(w) = result.witness {
            assert_eq!(result.verdict, Verdict::Exists);
            assert_eq!(w.len(), 64 + 1);
            assert_eq!(w.first().unwrap().0, 0.0);
            assert_eq!(w.last().unwrap().0, 1.0);
            assert!(validate_witness(&scene, &w, H));
            for &(t, p) in &w {
                assert!(!scene.is_covered_point(t, p));
            }
            seen += 1;
        }
    }
    assert!(seen >= 5);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn linking_is_symmetric(seed in any::<u64>(), t in 0.0..0.95f64, dt in 0.001..0.05f64) {
        let scene = busy_scene(&mut common::rng(seed));
        let a = uncovered_slice(&scene, t, H).unwrap();
        let b = uncovered_slice(&scene, t + dt, H).unwrap();
        let forward = overlap_links(&a.components, &b.components);
        let mut backward: Vec<(u32, u32, usize)> = overlap_links(&b.components, &a.components)
            .into_iter()
            .map(|(y, x, c)| (x, y, c))
            .collect();
        backward.sort_by_key(|&(_, _, c)| c);
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn static_scenes_evade_iff_a_hole_exists(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let drop = rng.gen_range(0.0..0.4);
        let scene = common::lattice_scene(&mut rng, 0.15, drop);
        let slice = uncovered_slice(&scene, 0.0, H).unwrap();
        let relaxed = slice.relaxed.count();
        let verdict = evasion_exists(&scene, H, 0.25).unwrap().verdict;
        let expected = if slice.component_count() > 0 {
            Verdict::Exists
        } else if relaxed > 0 {
            Verdict::Indeterminate
        } else {
            Verdict::None
        };
        prop_assert_eq!(verdict, expected);
    }
}
