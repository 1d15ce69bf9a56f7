//! Comparison of two networks: per-time nerve identity, fiber-pair H1
//! profiles and evasion verdicts, summarised as fixed conclusions.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cech::{cech_at, monotone_growth_with, sample_times};
use crate::complex::{betti, identity_map, induced_h1, isomorphic_under, loop_edges, ComplexError, Edge, Homology};
use crate::evasion::{evasion_exists, uncovered_slice, EvasionError, UncoveredSlice, Verdict};
use crate::geom::{Point, Scene};
use crate::grid::default_step;
use crate::z2::{Z2Matrix, Z2Vec};

pub const NERVES_IDENTICAL: &str = "nerves combinatorially identical";
pub const NERVES_DIFFERENT: &str = "nerves combinatorially different";
pub const UNCOVERED_INEQUIVALENT: &str = "uncovered regions not time-varying homotopy equivalent";
pub const VERDICTS_AGREE: &str = "evasion verdicts agree";
pub const VERDICT_INDETERMINATE: &str = "evasion verdict indeterminate";
pub const OBSTRUCTION: &str = "homeomorphism obstruction witnessed at H1 level";
pub const NO_OBSTRUCTION: &str = "no homeomorphism obstruction witnessed";

#[derive(Debug, Error)]
pub enum DistinguishError {
    #[error("scenes have different sensor id sets ({0} vs {1} sensors)")]
    IdMismatch(usize, usize),
    #[error("nerve at t={t} is not a subcomplex of the nerve at t2={t2}")]
    NotNested { t: f64, t2: f64 },
    #[error("need t < t2, got t={t}, t2={t2}")]
    BadPair { t: f64, t2: f64 },
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Evasion(#[from] EvasionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimelineRow {
    pub t: f64,
    pub isomorphic: bool,
}

/// Nerve identity under identity-on-ids at every sample time `k/n`.
pub fn compare_timelines(a: &Scene, b: &Scene, dt: f64) -> Result<Vec<TimelineRow>, DistinguishError> {
    if a.sensor_count() != b.sensor_count() {
        return Err(DistinguishError::IdMismatch(a.sensor_count(), b.sensor_count()));
    }
    sample_times(dt)
        .par_iter()
        .map(|&t| {
            let ka = cech_at(a, t);
            let iso = isomorphic_under(&ka, &cech_at(b, t), &identity_map(&ka))?;
            Ok(TimelineRow { t, isomorphic: iso })
        })
        .collect()
}

/// H1 data of the inclusion of the nerve at `t` into the nerve at `t2`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairProfile {
    pub t: f64,
    pub t2: f64,
    pub beta1_t: usize,
    pub beta1_t2: usize,
    pub rank_incl: usize,
    pub monotone: bool,
    /// Coordinates at `t2` of the distinguished loop's class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_image: Option<Vec<u8>>,
    /// The same image paired with each uncovered component at `t2`, in
    /// component label order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hole_image: Option<Vec<u8>>,
    /// Uncovered components the distinguished loop winds around at `t`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_holes_t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_holes_t2: Option<usize>,
}

/// Samples used for the growth check of a pair.
pub const MONOTONE_SAMPLES: usize = 16;

pub fn pair_profile(scene: &Scene, t: f64, t2: f64) -> Result<PairProfile, DistinguishError> {
    pair_profile_with(scene, t, t2, default_step(scene.radius()), MONOTONE_SAMPLES)
}

/// [`pair_profile`] with an explicit grid step for the growth check.
pub fn pair_profile_with(
    scene: &Scene,
    t: f64,
    t2: f64,
    h: f64,
    samples: usize,
) -> Result<PairProfile, DistinguishError> {
    if !(t < t2) {
        return Err(DistinguishError::BadPair { t, t2 });
    }
    let k = cech_at(scene, t);
    let l = cech_at(scene, t2);
    if !k.is_subcomplex_of(&l) {
        return Err(DistinguishError::NotNested { t, t2 });
    }
    let incl = induced_h1(&k, &l)?;
    let cycle = loop_edges(&scene.metadata().loop_ids);
    let mut profile = PairProfile {
        t,
        t2,
        beta1_t: betti(&k, 1),
        beta1_t2: betti(&l, 1),
        rank_incl: incl.rank(),
        monotone: monotone_growth_with(scene, t, t2, samples, h),
        class_image: None,
        hole_image: None,
        class_holes_t: None,
        class_holes_t2: None,
    };
    if cycle.is_empty() || !cycle.iter().all(|&e| k.contains_edge(e)) {
        return Ok(profile);
    }
    let (hk, hl) = (Homology::new(&k), Homology::new(&l));
    let class = hk.coordinates(&cycle)?;
    let image = incl.apply(&class);
    profile.class_image = Some(bits(&image));
    let weight = |v: Z2Vec| v.count_ones();
    profile.class_holes_t = linking_matrix(scene, t, &hk).map(|w| weight(w.apply(&class)));
    if let Some(w) = linking_matrix(scene, t2, &hl) {
        let holes = w.apply(&image);
        profile.class_holes_t2 = Some(holes.count_ones());
        profile.hole_image = Some(bits(&holes));
    }
    Ok(profile)
}

fn bits(v: &Z2Vec) -> Vec<u8> {
    (0..v.len()).map(|i| v.get(i) as u8).collect()
}

/// Winding parity of each H1 basis cycle of the nerve at `t` (columns)
/// around each uncovered component (rows). Through this pairing the
/// uncovered components index a second basis of H1.
pub fn linking_matrix(scene: &Scene, t: f64, homology: &Homology) -> Option<Z2Matrix> {
    let slice = resolved_slice(scene, t)?;
    let positions = scene.positions_at(t);
    let reps: Vec<Point> = slice
        .components
        .representatives()
        .iter()
        .map(|&c| slice.raster.center(c))
        .collect();
    let columns = homology
        .basis()
        .cycles
        .iter()
        .map(|cycle| {
            let segments: Vec<(Point, Point)> = cycle
                .iter()
                .map(|[a, b]| (positions[a.index()], positions[b.index()]))
                .collect();
            Z2Vec::from_ones(
                reps.len(),
                reps.iter()
                    .enumerate()
                    .filter(|(_, &p)| odd_winding(p, &segments))
                    .map(|(i, _)| i),
            )
        })
        .collect();
    Some(Z2Matrix::from_columns(reps.len(), columns))
}

/// Finest step tried when resolving uncovered components.
const FINEST_STEP: f64 = 1.0 / 64.0;

/// Uncovered slice at the coarsest step from `r/8` down to `r/64` whose
/// surely uncovered components match its possibly uncovered components one
/// to one. `None` if no step resolves the fiber.
pub fn resolved_slice(scene: &Scene, t: f64) -> Option<UncoveredSlice> {
    let r = scene.radius();
    let mut h = default_step(r);
    while h >= FINEST_STEP * r * (1.0 - 1e-9) {
        let slice = uncovered_slice(scene, t, h).expect("step within limits");
        if slice.components.nests_one_to_one(&slice.relaxed) {
            return Some(slice);
        }
        h /= 2.0;
    }
    None
}

/// Number of uncovered components around which the straight-line
/// realization of `cycle` at time `t` winds an odd number of times.
pub fn enclosed_components(scene: &Scene, t: f64, cycle: &[Edge]) -> Option<usize> {
    let slice = resolved_slice(scene, t)?;
    let positions = scene.positions_at(t);
    let segments: Vec<(Point, Point)> = cycle
        .iter()
        .map(|[a, b]| (positions[a.index()], positions[b.index()]))
        .collect();
    Some(
        slice
            .components
            .representatives()
            .iter()
            .filter(|&&c| odd_winding(slice.raster.center(c), &segments))
            .count(),
    )
}

/// Parity of crossings of the rightward ray from `p` with the segments.
pub fn odd_winding(p: Point, segments: &[(Point, Point)]) -> bool {
    segments
        .iter()
        .filter(|(a, b)| {
            (a.y > p.y) != (b.y > p.y) && {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                x > p.x
            }
        })
        .count()
        % 2
        == 1
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareParams {
    pub dt: f64,
    /// Grid step; `None` means `r/8` of the first scene.
    pub h: Option<f64>,
    /// Fiber pair; `None` means the first scene's metadata pair.
    pub pair: Option<[f64; 2]>,
    pub monotone_samples: usize,
}

impl Default for CompareParams {
    fn default() -> Self {
        CompareParams {
            dt: 1.0 / 256.0,
            h: None,
            pair: None,
            monotone_samples: MONOTONE_SAMPLES,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairEntry {
    pub scene: String,
    #[serde(flatten)]
    pub profile: PairProfile,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EvasionPair {
    pub a: Verdict,
    pub b: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompareReport {
    pub timeline: Vec<TimelineRow>,
    pub pairs: Vec<PairEntry>,
    pub evasion: EvasionPair,
    pub conclusions: Vec<String>,
}

impl CompareReport {
    pub fn nerves_identical(&self) -> bool {
        self.timeline.iter().all(|r| r.isomorphic)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn full_report(a: &Scene, b: &Scene, params: &CompareParams) -> Result<CompareReport, DistinguishError> {
    let timeline = compare_timelines(a, b, params.dt)?;
    let h = params.h.unwrap_or_else(|| default_step(a.radius()));
    let ea = evasion_exists(a, h, params.dt)?.verdict;
    let eb = evasion_exists(b, h, params.dt)?.verdict;
    let identical = timeline.iter().all(|r| r.isomorphic);

    let mut pairs = Vec::new();
    if let Some([t, t2]) = params.pair.or(a.metadata().pair) {
        for (name, scene) in [("a", a), ("b", b)] {
            match pair_profile_with(scene, t, t2, h, params.monotone_samples) {
                Ok(profile) => pairs.push(PairEntry {
                    scene: name.to_string(),
                    profile,
                }),
                Err(DistinguishError::NotNested { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }

    let mut conclusions = vec![if identical { NERVES_IDENTICAL } else { NERVES_DIFFERENT }];
    conclusions.push(match (ea.is_decisive() && eb.is_decisive(), ea == eb) {
        (false, _) => VERDICT_INDETERMINATE,
        (true, false) => UNCOVERED_INEQUIVALENT,
        (true, true) => VERDICTS_AGREE,
    });
    if identical {
        conclusions.push(if obstruction(&pairs) { OBSTRUCTION } else { NO_OBSTRUCTION });
    }
    Ok(CompareReport {
        timeline,
        pairs,
        evasion: EvasionPair { a: ea, b: eb },
        conclusions: conclusions.into_iter().map(String::from).collect(),
    })
}

/// The distinguished class encloses the same holes in both first fibers
/// but different numbers of holes once included into the second fibers.
fn obstruction(pairs: &[PairEntry]) -> bool {
    let [pa, pb] = pairs else {
        return false;
    };
    let (pa, pb) = (&pa.profile, &pb.profile);
    let holes = |p: &PairProfile| Some((p.class_holes_t?, p.class_holes_t2?));
    match (holes(pa), holes(pb)) {
        (Some((a1, a2)), Some((b1, b2))) => pa.monotone && pb.monotone && a1 == b1 && a2 != b2,
        _ => false,
    }
}
