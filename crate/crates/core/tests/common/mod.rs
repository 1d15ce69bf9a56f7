//! Scene and complex generators plus brute-force oracles shared by the
//! integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sensor_evasion::complex::{edge, triangle, Edge, Triangle};
use sensor_evasion::geom::{min_enclosing_ball, Keyframe};
use sensor_evasion::{Domain, Point, Scene, SensorId, SimplicialComplex, Trajectory};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random complex on at most `n` vertices with at most `max` simplices.
pub fn random_complex(rng: &mut ChaCha8Rng, n: u32, max: usize) -> SimplicialComplex {
    let nv = rng.gen_range(1..=n);
    let verts: Vec<SensorId> = (0..nv).map(SensorId).collect();
    let mut edges: Vec<Edge> = Vec::new();
    for i in 0..nv {
        for j in i + 1..nv {
            if rng.gen_bool(0.6) {
                edges.push(edge(SensorId(i), SensorId(j)));
            }
        }
    }
    let mut tris: Vec<Triangle> = Vec::new();
    for i in 0..nv {
        for j in i + 1..nv {
            for k in j + 1..nv {
                let (a, b, c) = (SensorId(i), SensorId(j), SensorId(k));
                let faces = [edge(a, b), edge(a, c), edge(b, c)];
                if faces.iter().all(|f| edges.contains(f)) && rng.gen_bool(0.4) {
                    tris.push(triangle(a, b, c));
                }
            }
        }
    }
    // trim to the simplex budget, dropping cofaces before faces
    while verts.len() + edges.len() + tris.len() > max {
        if !tris.is_empty() {
            let i = rng.gen_range(0..tris.len());
            tris.remove(i);
        } else if !edges.is_empty() {
            let i = rng.gen_range(0..edges.len());
            edges.remove(i);
        } else {
            break;
        }
    }
    SimplicialComplex::from_parts(verts, edges, tris).expect("closed by construction")
}

/// Random subcomplex: drops some triangles, then some edges no triangle needs.
pub fn random_subcomplex(rng: &mut ChaCha8Rng, k: &SimplicialComplex) -> SimplicialComplex {
    let tris: Vec<Triangle> = k.triangles().iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    let edges: Vec<Edge> = k
        .edges()
        .iter()
        .copied()
        .filter(|&[a, b]| {
            tris.iter().any(|t| t.contains(&a) && t.contains(&b)) || rng.gen_bool(0.7)
        })
        .collect();
    SimplicialComplex::from_parts(k.vertices().iter().copied(), edges, tris).expect("closed")
}

/// Dimension of a Z/2 span by elimination on bit rows.
pub fn span_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len());
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Edge-incidence vector of a chain given as a set of edges.
pub fn chain(edges: &[Edge], chain: &[Edge]) -> Vec<bool> {
    edges.iter().map(|e| chain.iter().filter(|c| *c == e).count() % 2 == 1).collect()
}

pub fn triangle_faces(t: Triangle) -> [Edge; 3] {
    [edge(t[0], t[1]), edge(t[0], t[2]), edge(t[1], t[2])]
}

/// Betti numbers `(β0, β1)` by enumerating every edge chain and every
/// triangle chain.
pub fn brute_betti(k: &SimplicialComplex) -> (usize, usize) {
    let verts: Vec<SensorId> = k.vertices().iter().copied().collect();
    let edges: Vec<Edge> = k.edges().iter().copied().collect();
    let tris: Vec<Triangle> = k.triangles().iter().copied().collect();
    assert!(edges.len() <= 16 && tris.len() <= 16);
    let vpos = |v: SensorId| verts.iter().position(|&w| w == v).unwrap();
    let mut cycles = 0usize;
    for mask in 0u32..(1 << edges.len()) {
        let mut deg = vec![0u8; verts.len()];
        for (i, e) in edges.iter().enumerate() {
            if mask >> i & 1 == 1 {
                deg[vpos(e[0])] ^= 1;
                deg[vpos(e[1])] ^= 1;
            }
        }
        if deg.iter().all(|&d| d == 0) {
            cycles += 1;
        }
    }
    let mut boundaries = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << tris.len()) {
        let mut b = vec![false; edges.len()];
        for (i, &t) in tris.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for f in triangle_faces(t) {
                    let j = edges.iter().position(|&e| e == f).unwrap();
                    b[j] ^= true;
                }
            }
        }
        boundaries.insert(b);
    }
    let z1 = cycles.trailing_zeros() as usize;
    let b1 = boundaries.len().trailing_zeros() as usize;
    let rank_d1 = edges.len() - z1;
    (verts.len() - rank_d1, z1 - b1)
}

pub fn rect(w: f64, h: f64) -> Domain {
    Domain::rectangle(Point::new(0.0, 0.0), Point::new(w, h)).unwrap()
}

/// Sensors every `step` along the boundary of the `w × h` rectangle.
pub fn fence(w: f64, h: f64, step: f64) -> Vec<Point> {
    let d = rect(w, h);
    let n = (d.perimeter() / step).ceil() as usize;
    d.boundary_samples(n)
}

/// Static scene with a fence and `n` random interior sensors, radius 1.
pub fn fenced_scene(rng: &mut ChaCha8Rng, w: f64, h: f64, n: usize) -> Scene {
    let mut pts = fence(w, h, 0.9);
    for _ in 0..n {
        pts.push(Point::new(rng.gen_range(0.3..w - 0.3), rng.gen_range(0.3..h - 0.3)));
    }
    Scene::new(rect(w, h), 1.0, pts, vec![], "random").unwrap()
}

/// Static scene on the 6 × 5 rectangle with a 20-sensor fence; interior
/// sensors are placed one at a time, each redrawn until every edge and
/// triangle quantity stays at least `delta` (at most 0.11) from its threshold.
pub fn generic_fenced_scene(rng: &mut ChaCha8Rng, n: usize, delta: f64) -> Scene {
    let (w, h) = (6.0, 5.0);
    let mut pts = rect(w, h).boundary_samples(20);
    assert!(genericity(&pts, 1.0) >= delta, "fence itself is not generic");
    for _ in 0..n {
        for _attempt in 0..200 {
            let p = Point::new(rng.gen_range(0.3..w - 0.3), rng.gen_range(0.3..h - 0.3));
            if genericity_with(&pts, p, 1.0) >= delta {
                pts.push(p);
                break;
            }
        }
    }
    Scene::new(rect(w, h), 1.0, pts, vec![], "generic").unwrap()
}

/// Fenced 6 × 5 scene with a jittered interior lattice that covers the
/// domain; each lattice sensor is dropped with probability `drop`.
pub fn lattice_scene(rng: &mut ChaCha8Rng, jitter: f64, drop: f64) -> Scene {
    let mut pts = rect(6.0, 5.0).boundary_samples(20);
    for j in 0..4 {
        for i in 0..5 {
            if rng.gen_bool(drop) {
                continue;
            }
            pts.push(Point::new(
                0.75 + 1.125 * i as f64 + rng.gen_range(-jitter..=jitter),
                0.7 + 1.2 * j as f64 + rng.gen_range(-jitter..=jitter),
            ));
        }
    }
    Scene::new(rect(6.0, 5.0), 1.0, pts, vec![], "lattice").unwrap()
}

/// Genericity of the quantities that involve the new point `p`.
pub fn genericity_with(points: &[Point], p: Point, r: f64) -> f64 {
    let mut best = f64::INFINITY;
    for (i, &a) in points.iter().enumerate() {
        let da = a.dist(p);
        best = best.min((da - 2.0 * r).abs());
        if da >= 2.0 * r {
            continue;
        }
        for &b in &points[i + 1..] {
            if b.dist(p) < 2.0 * r && a.dist(b) < 2.0 * r {
                best = best.min((min_enclosing_ball(&[a, b, p]).radius - r).abs());
            }
        }
    }
    best
}

/// Minimum distance of every edge and triangle quantity from its threshold.
pub fn genericity(points: &[Point], r: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let dij = points[i].dist(points[j]);
            best = best.min((dij - 2.0 * r).abs());
            if dij >= 2.0 * r {
                continue;
            }
            for k in j + 1..points.len() {
                if points[i].dist(points[k]) < 2.0 * r && points[j].dist(points[k]) < 2.0 * r {
                    let b = min_enclosing_ball(&[points[i], points[j], points[k]]);
                    best = best.min((b.radius - r).abs());
                }
            }
        }
    }
    best
}

/// Scene on a `w × h` rectangle with a fence and a few sensors moving along
/// random piecewise-linear paths.
pub fn moving_scene(rng: &mut ChaCha8Rng, w: f64, h: f64, movers: usize, statics: usize) -> Scene {
    let mut fixed = fence(w, h, 0.9);
    for _ in 0..statics {
        fixed.push(Point::new(rng.gen_range(0.5..w - 0.5), rng.gen_range(0.5..h - 0.5)));
    }
    let mut mobile = Vec::new();
    for _ in 0..movers {
        let knots = rng.gen_range(2..=4);
        let mut times: Vec<f64> = (0..knots - 2).map(|_| rng.gen_range(0.1..0.9)).collect();
        times.push(0.0);
        times.push(1.0);
        times.sort_by(f64::total_cmp);
        times.dedup();
        let frames = times
            .iter()
            .map(|&t| Keyframe::new(t, rng.gen_range(0.5..w - 0.5), rng.gen_range(0.5..h - 0.5)))
            .collect();
        mobile.push(Trajectory::new(frames).unwrap());
    }
    Scene::new(rect(w, h), 1.0, fixed, mobile, "moving").unwrap()
}
