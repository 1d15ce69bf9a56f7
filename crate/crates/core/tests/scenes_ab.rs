mod common;

use sensor_evasion::cech::{build_timeline, cech_at, monotone_growth, sample_times};
use sensor_evasion::complex::{betti, boundary, loop_edges, Edge, Homology};
use sensor_evasion::coverage::is_covered_homology;
use sensor_evasion::distinguish::{enclosed_components, pair_profile};
use sensor_evasion::evasion::{evasion_exists, validate_witness, Verdict};
use sensor_evasion::grid::default_step;
use sensor_evasion::scenes::{build_example_a, build_example_b};
use sensor_evasion::{Point, Scene, SimplicialComplex};

fn both() -> [Scene; 2] {
    [build_example_a(), build_example_b()]
}

#[test]
fn shared_fence_and_ids() {
    let [a, b] = both();
    assert_eq!(a.sensor_count(), b.sensor_count());
    assert_eq!(a.fence(), b.fence());
    assert_eq!(a.radius(), b.radius());
    assert_eq!(a.metadata(), b.metadata());
}

#[test]
fn configurations_stay_generic() {
    for scene in both() {
        for t in sample_times(1.0 / 256.0) {
            let g = common::genericity(&scene.positions_at(t), scene.radius());
            assert!(g >= 1e-3, "{} at t={t}: {g}", scene.label());
        }
    }
}

#[test]
fn timelines_separate_the_stages() {
    for scene in both() {
        let tl = build_timeline(&scene, 1.0 / 256.0, 1e-6).unwrap();
        assert!(tl.len() >= 7);
        let stages = &scene.metadata().stages;
        assert_eq!(stages.len(), 7);
        let index: Vec<usize> = stages
            .iter()
            .map(|&t| tl.breakpoints()[1..].partition_point(|&b| b < t))
            .collect();
        assert!(index.windows(2).all(|w| w[0] < w[1]), "{index:?}");
        for &t in stages {
            assert_eq!(tl.complex_at(t), &cech_at(&scene, t));
        }
    }
}

#[test]
fn fence_holds_throughout() {
    for scene in both() {
        for t in sample_times(1.0 / 256.0) {
            assert!(is_covered_homology(&scene, t).fence_ok, "{} at {t}", scene.label());
        }
    }
}

#[test]
fn evasion_verdicts_and_their_stability() {
    let [a, b] = both();
    let h = default_step(a.radius());
    for (h, dt) in [(h, 1.0 / 256.0), (h / 2.0, 1.0 / 256.0), (h, 1.0 / 512.0)] {
        let ra = evasion_exists(&a, h, dt).unwrap();
        assert_eq!(ra.verdict, Verdict::Exists, "h={h} dt={dt}");
        assert!(validate_witness(&a, ra.witness.as_ref().unwrap(), h));
        let rb = evasion_exists(&b, h, dt).unwrap();
        assert_eq!(rb.verdict, Verdict::None, "h={h} dt={dt}");
        assert!(rb.witness.is_none());
    }
}

#[test]
fn start_has_a_hole_and_the_top_ends_covered() {
    for scene in both() {
        let start = is_covered_homology(&scene, 0.0);
        assert!(start.fence_ok && !start.covered);
        let (lo, hi) = scene.domain().bounds();
        let mid = (lo.y + hi.y) / 2.0;
        let n = 200;
        for j in 0..=n / 2 {
            for i in 0..=n {
                let p = Point::new(
                    lo.x + (hi.x - lo.x) * i as f64 / n as f64,
                    mid + (hi.y - mid) * j as f64 / (n / 2) as f64,
                );
                assert!(scene.is_covered_point(1.0, p), "{} uncovered at {p:?}", scene.label());
            }
        }
    }
}

/// rank of H1(K) -> H1(L) as dim(Z1(K) + B1(L)) - dim(B1(L)), with both
/// spans taken in the edge coordinates of `L`.
fn inclusion_rank_by_span(k: &SimplicialComplex, l: &SimplicialComplex) -> usize {
    let edges: Vec<Edge> = l.edges().iter().copied().collect();
    let d2 = boundary(l, 2).unwrap();
    let b1: Vec<Vec<bool>> = (0..d2.cols())
        .map(|j| (0..d2.rows()).map(|i| d2.get(i, j)).collect())
        .collect();
    let hk = Homology::new(k);
    let mut joint = b1.clone();
    joint.extend(hk.basis().cycles.iter().map(|c| common::chain(&edges, c)));
    common::span_rank(joint) - common::span_rank(b1)
}

#[test]
fn fiber_pair_profiles() {
    let [a, b] = both();
    let [t, t2] = a.metadata().pair.unwrap();
    let (pa, pb) = (pair_profile(&a, t, t2).unwrap(), pair_profile(&b, t, t2).unwrap());
    for (scene, p) in [(&a, &pa), (&b, &pb)] {
        assert!(monotone_growth(scene, t, t2, 16));
        assert!(p.monotone);
        let (k, l) = (cech_at(scene, t), cech_at(scene, t2));
        assert_eq!(p.beta1_t, betti(&k, 1));
        assert_eq!(p.beta1_t2, betti(&l, 1));
        assert_eq!(p.rank_incl, inclusion_rank_by_span(&k, &l));
        let cycle = loop_edges(&scene.metadata().loop_ids);
        assert_eq!(p.class_holes_t, enclosed_components(scene, t, &cycle));
        assert_eq!(p.class_holes_t2, enclosed_components(scene, t2, &cycle));
    }
    assert_eq!(pa.class_image, pb.class_image);
    assert_eq!(pa.class_holes_t, pb.class_holes_t);
    assert_ne!(pa.hole_image, pb.hole_image);
    assert_ne!(pa.class_holes_t2, pb.class_holes_t2);
}
