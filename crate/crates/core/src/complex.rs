//! Abstract simplicial complexes of dimension at most two, labelled by
//! sensor identity, with Z/2 homology and inclusion-induced maps on H1.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::SensorId;
use crate::unionfind::UnionFind;
use crate::z2::{Reducer, Z2Matrix, Z2Vec};

pub type Edge = [SensorId; 2];
pub type Triangle = [SensorId; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("simplex {0} is missing a face")]
    MissingFace(String),
    #[error("degenerate simplex {0}")]
    Degenerate(String),
    #[error("boundary operator defined for dimensions 1 and 2, got {0}")]
    InvalidDimension(usize),
    #[error("first complex is not a subcomplex of the second")]
    NotSubcomplex,
    #[error("vertex bijection is undefined on vertex {0}")]
    PartialBijection(SensorId),
    #[error("vertex map is not injective")]
    NotInjective,
    #[error("edge {0:?} is not in the complex")]
    UnknownEdge(Edge),
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub fn edge(a: SensorId, b: SensorId) -> Edge {
    if a <= b {
        [a, b]
    } else {
        [b, a]
    }
}

pub fn triangle(a: SensorId, b: SensorId, c: SensorId) -> Triangle {
    let mut t = [a, b, c];
    t.sort();
    t
}

/// Edge list of the closed loop through `vertices` in order.
pub fn loop_edges(vertices: &[SensorId]) -> Vec<Edge> {
    (0..vertices.len())
        .map(|i| edge(vertices[i], vertices[(i + 1) % vertices.len()]))
        .collect()
}

/// Downward-closed complex with vertices, edges and triangles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertices: BTreeSet<SensorId>,
    edges: BTreeSet<Edge>,
    triangles: BTreeSet<Triangle>,
}

impl SimplicialComplex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a complex from explicit simplex lists, rejecting missing faces.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = SensorId>,
        edges: impl IntoIterator<Item = Edge>,
        triangles: impl IntoIterator<Item = Triangle>,
    ) -> Result<Self, ComplexError> {
        let mut k = SimplicialComplex::new();
        k.vertices.extend(vertices);
        for [a, b] in edges {
            if a == b {
                return Err(ComplexError::Degenerate(format!("{a} {b}")));
            }
            let e = edge(a, b);
            if !k.vertices.contains(&a) || !k.vertices.contains(&b) {
                return Err(ComplexError::MissingFace(format!("{} {}", e[0], e[1])));
            }
            k.edges.insert(e);
        }
        for [a, b, c] in triangles {
            let t = triangle(a, b, c);
            if t[0] == t[1] || t[1] == t[2] {
                return Err(ComplexError::Degenerate(format!("{a} {b} {c}")));
            }
            let [a, b, c] = t;
            if ![edge(a, b), edge(a, c), edge(b, c)]
                .iter()
                .all(|e| k.edges.contains(e))
            {
                return Err(ComplexError::MissingFace(format!("{a} {b} {c}")));
            }
            k.triangles.insert(t);
        }
        Ok(k)
    }

    /// Assembles a complex from lists already known to be closed under
    /// faces.
    pub(crate) fn from_closed(vertices: Vec<SensorId>, edges: Vec<Edge>, triangles: Vec<Triangle>) -> Self {
        SimplicialComplex {
            vertices: vertices.into_iter().collect(),
            edges: edges.into_iter().collect(),
            triangles: triangles.into_iter().collect(),
        }
    }

    pub fn insert_vertex(&mut self, v: SensorId) {
        self.vertices.insert(v);
    }

    /// Inserts an edge together with its vertices.
    pub fn insert_edge(&mut self, a: SensorId, b: SensorId) {
        assert_ne!(a, b, "degenerate edge");
        self.vertices.insert(a);
        self.vertices.insert(b);
        self.edges.insert(edge(a, b));
    }

    /// Inserts a triangle together with all of its faces.
    pub fn insert_triangle(&mut self, a: SensorId, b: SensorId, c: SensorId) {
        self.insert_edge(a, b);
        self.insert_edge(a, c);
        self.insert_edge(b, c);
        self.triangles.insert(triangle(a, b, c));
    }

    pub fn vertices(&self) -> &BTreeSet<SensorId> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn triangles(&self) -> &BTreeSet<Triangle> {
        &self.triangles
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&edge(e[0], e[1]))
    }

    pub fn simplex_count(&self) -> usize {
        self.vertices.len() + self.edges.len() + self.triangles.len()
    }

    pub fn is_downward_closed(&self) -> bool {
        self.edges
            .iter()
            .all(|[a, b]| self.vertices.contains(a) && self.vertices.contains(b))
            && self.triangles.iter().all(|&[a, b, c]| {
                self.edges.contains(&[a, b])
                    && self.edges.contains(&[a, c])
                    && self.edges.contains(&[b, c])
            })
    }

    pub fn is_subcomplex_of(&self, other: &SimplicialComplex) -> bool {
        self.vertices.is_subset(&other.vertices)
            && self.edges.is_subset(&other.edges)
            && self.triangles.is_subset(&other.triangles)
    }

    /// One simplex per line, sorted ids, dimension-then-lexicographic order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "{v}");
        }
        for [a, b] in &self.edges {
            let _ = writeln!(out, "{a} {b}");
        }
        for [a, b, c] in &self.triangles {
            let _ = writeln!(out, "{a} {b} {c}");
        }
        out
    }

    /// Image of the complex under a vertex map; the map must be injective
    /// and defined on every vertex.
    pub fn relabel(&self, map: &BTreeMap<SensorId, SensorId>) -> Result<Self, ComplexError> {
        let image = |v: &SensorId| map.get(v).copied().ok_or(ComplexError::PartialBijection(*v));
        let mut out = SimplicialComplex::new();
        for v in &self.vertices {
            out.vertices.insert(image(v)?);
        }
        if out.vertices.len() != self.vertices.len() {
            return Err(ComplexError::NotInjective);
        }
        for [a, b] in &self.edges {
            out.edges.insert(edge(image(a)?, image(b)?));
        }
        for [a, b, c] in &self.triangles {
            out.triangles.insert(triangle(image(a)?, image(b)?, image(c)?));
        }
        Ok(out)
    }
}

impl FromStr for SimplicialComplex {
    type Err = ComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut triangles = Vec::new();
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let ids = line
                .split_whitespace()
                .map(|w| w.parse::<u32>().map(SensorId))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ComplexError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            match ids[..] {
                [a] => vertices.push(a),
                [a, b] => edges.push([a, b]),
                [a, b, c] => triangles.push([a, b, c]),
                _ => {
                    return Err(ComplexError::Parse {
                        line: i + 1,
                        message: format!("expected 1 to 3 ids, found {}", ids.len()),
                    })
                }
            }
        }
        SimplicialComplex::from_parts(vertices, edges, triangles)
    }
}

/// Matrix of the boundary operator from dimension `dim` to `dim - 1`.
///
/// Columns follow the lexicographic order of `dim`-simplices, rows that of
/// `(dim-1)`-simplices.
pub fn boundary(k: &SimplicialComplex, dim: usize) -> Result<Z2Matrix, ComplexError> {
    match dim {
        1 => {
            let index: BTreeMap<SensorId, usize> =
                k.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
            let cols = k
                .edges
                .iter()
                .map(|[a, b]| Z2Vec::from_ones(index.len(), [index[a], index[b]]))
                .collect();
            Ok(Z2Matrix::from_columns(index.len(), cols))
        }
        2 => {
            let index = edge_index(k);
            let cols = k
                .triangles
                .iter()
                .map(|&t| triangle_boundary(&index, t))
                .collect();
            Ok(Z2Matrix::from_columns(index.len(), cols))
        }
        d => Err(ComplexError::InvalidDimension(d)),
    }
}

fn edge_index(k: &SimplicialComplex) -> BTreeMap<Edge, usize> {
    k.edges.iter().enumerate().map(|(i, e)| (*e, i)).collect()
}

fn triangle_boundary(index: &BTreeMap<Edge, usize>, [a, b, c]: Triangle) -> Z2Vec {
    Z2Vec::from_ones(index.len(), [index[&[a, b]], index[&[a, c]], index[&[b, c]]])
}

/// Betti number over Z/2 in dimension `dim` (zero above dimension two).
pub fn betti(k: &SimplicialComplex, dim: usize) -> usize {
    let rank = |d| boundary(k, d).map(|m| m.rank()).unwrap_or(0);
    match dim {
        0 => k.vertices.len() - rank(1),
        1 => k.edges.len() - rank(1) - rank(2),
        2 => k.triangles.len() - rank(2),
        _ => 0,
    }
}

/// Cycle representatives of a basis of H1, each a sorted edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct H1Basis {
    pub cycles: Vec<Vec<Edge>>,
}

impl H1Basis {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }
}

/// H1 of a fixed complex: a deterministic basis and coordinate extraction.
///
/// The basis is drawn from the fundamental cycles of the lexicographic
/// spanning forest, keeping those independent of the triangle boundaries and
/// of earlier choices.
#[derive(Clone, Debug)]
pub struct Homology {
    vertices: BTreeSet<SensorId>,
    edges: Vec<Edge>,
    index: BTreeMap<Edge, usize>,
    reducer: Reducer,
    basis: H1Basis,
}

impl Homology {
    pub fn new(k: &SimplicialComplex) -> Self {
        let index = edge_index(k);
        let edges: Vec<Edge> = k.edges.iter().copied().collect();
        let boundaries: Vec<Z2Vec> = k
            .triangles
            .iter()
            .map(|&t| triangle_boundary(&index, t))
            .collect();
        let chain = |c: &[Edge]| Z2Vec::from_ones(edges.len(), c.iter().map(|e| index[e]));

        let mut probe = Reducer::new(edges.len(), 0);
        for b in &boundaries {
            probe.insert(b.clone(), Z2Vec::zeros(0));
        }
        let cycles: Vec<Vec<Edge>> = fundamental_cycles(k)
            .into_iter()
            .filter(|c| probe.insert(chain(c), Z2Vec::zeros(0)))
            .collect();

        let n = cycles.len();
        let mut reducer = Reducer::new(edges.len(), n);
        for b in boundaries {
            reducer.insert(b, Z2Vec::zeros(n));
        }
        for (i, c) in cycles.iter().enumerate() {
            reducer.insert(chain(c), Z2Vec::unit(n, i));
        }
        Homology {
            vertices: k.vertices.clone(),
            edges,
            index,
            reducer,
            basis: H1Basis { cycles },
        }
    }

    pub fn basis(&self) -> &H1Basis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Chain vector of an edge list in this complex's edge order.
    pub fn chain(&self, edges: &[Edge]) -> Result<Z2Vec, ComplexError> {
        let mut v = Z2Vec::zeros(self.edges.len());
        for &[a, b] in edges {
            let e = edge(a, b);
            let i = *self.index.get(&e).ok_or(ComplexError::UnknownEdge(e))?;
            v.flip(i);
        }
        Ok(v)
    }

    pub fn is_cycle(&self, chain: &Z2Vec) -> bool {
        let mut odd: BTreeSet<SensorId> = BTreeSet::new();
        for i in chain.ones() {
            for v in self.edges[i] {
                if !odd.insert(v) {
                    odd.remove(&v);
                }
            }
        }
        odd.is_empty()
    }

    /// Coordinates of a cycle's class in the basis.
    pub fn coordinates(&self, edges: &[Edge]) -> Result<Z2Vec, ComplexError> {
        let chain = self.chain(edges)?;
        if !self.is_cycle(&chain) {
            return Err(ComplexError::NotACycle);
        }
        let (rest, tag) = self.reducer.reduce(chain, Z2Vec::zeros(self.rank()));
        debug_assert!(rest.is_zero(), "cycle outside boundaries + basis span");
        Ok(tag)
    }

    pub fn is_boundary(&self, edges: &[Edge]) -> Result<bool, ComplexError> {
        Ok(self.coordinates(edges)?.is_zero())
    }

    /// A cycle representing the class with the given coordinates.
    pub fn representative(&self, coords: &Z2Vec) -> Vec<Edge> {
        let mut v = Z2Vec::zeros(self.edges.len());
        for i in coords.ones() {
            for e in &self.basis.cycles[i] {
                v.flip(self.index[e]);
            }
        }
        v.ones().map(|i| self.edges[i]).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
}

/// Fundamental cycles of the spanning forest grown over edges in
/// lexicographic order, one per non-tree edge, in that edge order.
fn fundamental_cycles(k: &SimplicialComplex) -> Vec<Vec<Edge>> {
    let index: BTreeMap<SensorId, usize> =
        k.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut uf = UnionFind::new(index.len());
    let mut adjacency: BTreeMap<SensorId, Vec<SensorId>> = BTreeMap::new();
    let mut non_tree = Vec::new();
    for &[a, b] in &k.edges {
        if uf.union(index[&a], index[&b]) {
            adjacency.entry(a).or_default().push(b);
            adjacency.entry(b).or_default().push(a);
        } else {
            non_tree.push([a, b]);
        }
    }
    // root every tree at its smallest vertex
    let mut parent: BTreeMap<SensorId, SensorId> = BTreeMap::new();
    let mut depth: BTreeMap<SensorId, usize> = BTreeMap::new();
    for &root in &k.vertices {
        if depth.contains_key(&root) {
            continue;
        }
        depth.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in adjacency.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
                if !depth.contains_key(&w) {
                    depth.insert(w, depth[&u] + 1);
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
    }
    non_tree
        .into_iter()
        .map(|[a, b]| {
            let mut cycle = vec![[a, b]];
            let (mut u, mut v) = (a, b);
            while u != v {
                if depth[&u] >= depth[&v] {
                    let p = parent[&u];
                    cycle.push(edge(u, p));
                    u = p;
                } else {
                    let p = parent[&v];
                    cycle.push(edge(v, p));
                    v = p;
                }
            }
            cycle.sort();
            cycle
        })
        .collect()
}

pub fn h1_basis(k: &SimplicialComplex) -> H1Basis {
    Homology::new(k).basis
}

/// Matrix of H1(K) → H1(L) induced by the inclusion K ⊆ L, in the bases
/// returned by [`h1_basis`].
pub fn induced_h1(k: &SimplicialComplex, l: &SimplicialComplex) -> Result<Z2Matrix, ComplexError> {
    if !k.is_subcomplex_of(l) {
        return Err(ComplexError::NotSubcomplex);
    }
    let hk = Homology::new(k);
    let hl = Homology::new(l);
    let cols = hk
        .basis
        .cycles
        .iter()
        .map(|c| hl.coordinates(c))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Z2Matrix::from_columns(hl.rank(), cols))
}

/// Whether `bijection` carries K exactly onto L.
pub fn isomorphic_under(
    k: &SimplicialComplex,
    l: &SimplicialComplex,
    bijection: &BTreeMap<SensorId, SensorId>,
) -> Result<bool, ComplexError> {
    let image = k.relabel(bijection)?;
    Ok(image == *l)
}

/// Identity map on the vertices of `k`.
pub fn identity_map(k: &SimplicialComplex) -> BTreeMap<SensorId, SensorId> {
    k.vertices.iter().map(|v| (*v, *v)).collect()
}
