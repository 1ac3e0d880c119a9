//! Finite simple undirected graphs, their shortest-path metric, and the
//! combinators used to build new graphs from old ones.
//!
//! Vertices are dense indices `0..n`. Every combinator fixes its vertex
//! numbering so that generator enumeration downstream is reproducible:
//!
//! * disjoint union and join: vertices of the left operand first, then the
//!   right operand shifted by its size;
//! * cartesian product: row-major, `(g, h) -> g * |V(H)| + h`;
//! * wedge: the left operand unchanged, then the right operand with its base
//!   vertex removed (and identified with the left base vertex).

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("loop at vertex {0}")]
    Loop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {{{0}, {1}}} has an endpoint outside 0..{2}")]
    VertexOutOfRange(Vertex, Vertex, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    BadVertex { vertex: Vertex, n: usize },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for `{family}`: {reason}")]
    InvalidParameter { family: String, reason: String },
    #[error("vertex map has length {got}, expected {expected}")]
    MapLength { got: usize, expected: usize },
    #[error("edge {{{0}, {1}}} is sent to the non-edge {{{2}, {3}}}")]
    NotAGraphMap(Vertex, Vertex, Vertex, Vertex),
    #[error("vertex set is not convex in the ambient graph")]
    NotConvex,
    #[error("edge {{{0}, {1}}} lies in neither part of the decomposition")]
    CoverViolation(Vertex, Vertex),
    #[error("the two parts do not cover vertex {0}")]
    VertexNotCovered(Vertex),
}

/// A finite simple undirected graph on the vertices `0..n`.
///
/// Equality and hashing ignore display labels.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl std::hash::Hash for Graph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.edges.hash(state);
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges)
            .finish()
    }
}

fn normalise(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    /// The graph with no vertices.
    pub fn empty() -> Self {
        Self::discrete(0)
    }

    pub fn discrete(n: usize) -> Self {
        Graph {
            n,
            edges: BTreeSet::new(),
            adj: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Builds a graph from an explicit edge list, rejecting loops, repeated
    /// edges and endpoints outside `0..n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Self::discrete(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if !g.insert_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
        }
        Ok(g)
    }

    /// Like [`Graph::from_edges`] but silently merges repeated edges.
    /// Used by combinators whose output is a union of edge sets.
    fn from_edge_union<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Self::discrete(n);
        for (u, v) in edges {
            debug_assert!(u != v && u < n && v < n);
            g.insert_edge(u, v);
        }
        g
    }

    fn insert_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        if !self.edges.insert(normalise(u, v)) {
            return false;
        }
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        true
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in increasing order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.contains(&normalise(u, v))
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        queue.push_back(y);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_tree(&self) -> bool {
        self.n > 0 && self.is_connected() && self.edge_count() + 1 == self.n
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in 0..self.n {
            let mut dist = vec![usize::MAX; self.n];
            let mut parent = vec![usize::MAX; self.n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        let len = dist[x] + dist[y] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Stable content hash of `(n, sorted edge list)`, hex encoded.
    /// Sensitive to the labelling of vertices.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.n as u64).to_le_bytes());
        for &(u, v) in &self.edges {
            hasher.update((u as u64).to_le_bytes());
            hasher.update((v as u64).to_le_bytes());
        }
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_edge_union(self.n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}

/// A shortest-path distance: a natural number or infinity.
///
/// The derived ordering puts every finite distance below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Distance {
    Finite(u32),
    Infinite,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl Add for Distance {
    type Output = Distance;

    fn add(self, rhs: Distance) -> Distance {
        match (self, rhs) {
            (Distance::Finite(a), Distance::Finite(b)) => Distance::Finite(a.saturating_add(b)),
            _ => Distance::Infinite,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

/// All-pairs shortest-path distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistMatrix {
    n: usize,
    data: Vec<Distance>,
}

impl DistMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, x: Vertex, y: Vertex) -> Distance {
        self.data[x * self.n + y]
    }

    pub fn row(&self, x: Vertex) -> &[Distance] {
        &self.data[x * self.n..(x + 1) * self.n]
    }

    /// Largest finite distance (the maximum over components of their
    /// diameters). `None` for the empty graph.
    pub fn diameter(&self) -> Option<u32> {
        self.data.iter().filter_map(|d| d.finite()).max()
    }
}

/// Breadth-first search from every vertex.
pub fn distance_matrix(g: &Graph) -> DistMatrix {
    let n = g.n();
    let mut data = vec![Distance::Infinite; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        let row = &mut data[s * n..(s + 1) * n];
        row[s] = Distance::Finite(0);
        queue.clear();
        queue.push_back((s, 0u32));
        while let Some((x, d)) = queue.pop_front() {
            for &y in g.neighbours(x) {
                if row[y] == Distance::Infinite {
                    row[y] = Distance::Finite(d + 1);
                    queue.push_back((y, d + 1));
                }
            }
        }
    }
    DistMatrix { n, data }
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edge_union(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Cycle `0 - 1 - ... - (n-1) - 0`. Requires `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    Graph::from_edge_union(n, (0..n).map(|i| (i, (i + 1) % n)))
}

/// Path `0 - 1 - ... - (n-1)` on `n` vertices.
pub fn path(n: usize) -> Graph {
    Graph::from_edge_union(n, (1..n).map(|i| (i - 1, i)))
}

/// Star with centre `0` and leaves `1..=leaves`.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edge_union(leaves + 1, (1..=leaves).map(|i| (0, i)))
}

pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let off = g.n();
    Graph::from_edge_union(
        g.n() + h.n(),
        g.edges().chain(h.edges().map(|(u, v)| (u + off, v + off))),
    )
}

/// Cartesian product with row-major vertex numbering.
pub fn box_product(g: &Graph, h: &Graph) -> Graph {
    let (ng, nh) = (g.n(), h.n());
    let idx = |x: Vertex, y: Vertex| x * nh + y;
    let mut edges = Vec::with_capacity(ng * h.edge_count() + nh * g.edge_count());
    for x in 0..ng {
        for (y1, y2) in h.edges() {
            edges.push((idx(x, y1), idx(x, y2)));
        }
    }
    for (x1, x2) in g.edges() {
        for y in 0..nh {
            edges.push((idx(x1, y), idx(x2, y)));
        }
    }
    Graph::from_edge_union(ng * nh, edges)
}

/// Disjoint union plus every edge between the two parts.
pub fn join(g: &Graph, h: &Graph) -> Graph {
    let off = g.n();
    let across = (0..g.n()).flat_map(|x| (0..h.n()).map(move |y| (x, y + off)));
    Graph::from_edge_union(
        g.n() + h.n(),
        g.edges()
            .chain(h.edges().map(|(u, v)| (u + off, v + off)))
            .chain(across),
    )
}

/// Where the vertices of the right operand of a wedge end up.
pub fn wedge_right_index(g_n: usize, g0: Vertex, h0: Vertex, y: Vertex) -> Vertex {
    match y.cmp(&h0) {
        std::cmp::Ordering::Equal => g0,
        std::cmp::Ordering::Less => g_n + y,
        std::cmp::Ordering::Greater => g_n + y - 1,
    }
}

/// Identifies `g0` in `g` with `h0` in `h`.
pub fn wedge(g: &Graph, g0: Vertex, h: &Graph, h0: Vertex) -> Result<Graph, GraphError> {
    if g0 >= g.n() {
        return Err(GraphError::BadVertex { vertex: g0, n: g.n() });
    }
    if h0 >= h.n() {
        return Err(GraphError::BadVertex { vertex: h0, n: h.n() });
    }
    let map = |y| wedge_right_index(g.n(), g0, h0, y);
    Ok(Graph::from_edge_union(
        g.n() + h.n() - 1,
        g.edges().chain(h.edges().map(|(u, v)| (map(u), map(v)))),
    ))
}

/// An induced subgraph together with the translation back to the ambient
/// graph: local vertex `i` is ambient vertex `vertices[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: Graph,
    pub vertices: Vec<Vertex>,
}

impl Subgraph {
    /// Local index of an ambient vertex, if it belongs to the subgraph.
    pub fn local(&self, v: Vertex) -> Option<Vertex> {
        self.vertices.binary_search(&v).ok()
    }
}

/// The subgraph induced on `s`. Duplicates in `s` are ignored and the
/// vertices are renumbered in increasing order.
pub fn induced_subgraph(x: &Graph, s: &[Vertex]) -> Result<Subgraph, GraphError> {
    let mut vertices: Vec<Vertex> = s.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    if let Some(&v) = vertices.iter().find(|&&v| v >= x.n()) {
        return Err(GraphError::BadVertex { vertex: v, n: x.n() });
    }
    let mut local = vec![usize::MAX; x.n()];
    for (i, &v) in vertices.iter().enumerate() {
        local[v] = i;
    }
    let edges = x
        .edges()
        .filter(|&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
        .map(|(u, v)| (local[u], local[v]));
    Ok(Subgraph {
        graph: Graph::from_edge_union(vertices.len(), edges),
        vertices,
    })
}

/// True iff distances inside the induced subgraph on `s` agree with the
/// ambient distances (infinity compares equal to infinity).
pub fn is_convex(x: &Graph, s: &[Vertex]) -> Result<bool, GraphError> {
    let sub = induced_subgraph(x, s)?;
    let dx = distance_matrix(x);
    Ok(is_convex_with(&dx, &sub))
}

fn is_convex_with(dx: &DistMatrix, sub: &Subgraph) -> bool {
    let ds = distance_matrix(&sub.graph);
    let vs = &sub.vertices;
    (0..vs.len()).all(|i| (0..vs.len()).all(|j| ds.get(i, j) == dx.get(vs[i], vs[j])))
}

/// Nearest-point map onto a convex vertex subset: `map[x]` is `Some(u)` for
/// every vertex `x` joined by an edge path to the subset, `None` otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub map: Vec<Option<Vertex>>,
}

/// Decides whether `x` projects to the convex subset `s`. Returns `Ok(None)`
/// when some vertex of `X_S` has no point of `s` through which all
/// geodesics to `s` pass.
pub fn projection(x: &Graph, s: &[Vertex]) -> Result<Option<Projection>, GraphError> {
    let sub = induced_subgraph(x, s)?;
    let dx = distance_matrix(x);
    if !is_convex_with(&dx, &sub) {
        return Err(GraphError::NotConvex);
    }
    Ok(projection_with(&dx, &sub.vertices))
}

fn projection_with(dx: &DistMatrix, s: &[Vertex]) -> Option<Projection> {
    let n = dx.n();
    let mut map = vec![None; n];
    for (v, slot) in map.iter_mut().enumerate() {
        let nearest = s.iter().filter_map(|&u| dx.get(v, u).finite()).min();
        let Some(best) = nearest else {
            continue;
        };
        let mut candidates = s
            .iter()
            .copied()
            .filter(|&u| dx.get(v, u) == Distance::Finite(best));
        let p = candidates.next().expect("minimum is attained");
        if candidates.next().is_some() {
            return None;
        }
        let through_p = s
            .iter()
            .all(|&u| dx.get(v, u) == dx.get(v, p) + dx.get(p, u));
        if !through_p {
            return None;
        }
        *slot = Some(p);
    }
    Some(Projection { map })
}

/// A cover of `X` by two induced subgraphs, with the derived pieces.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub ambient: Graph,
    pub gset: Vec<Vertex>,
    pub hset: Vec<Vertex>,
    pub g: Subgraph,
    pub h: Subgraph,
    pub intersection: Subgraph,
    /// Projection of `H` onto `G ∩ H`, in the local numbering of `H`.
    pub projection: Option<Projection>,
}

/// Why a cover fails to be a projecting decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecompositionFailure {
    NotConvex,
    NotProjecting,
}

impl fmt::Display for DecompositionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionFailure::NotConvex => f.write_str("G ∩ H is not convex in X"),
            DecompositionFailure::NotProjecting => f.write_str("H does not project to G ∩ H"),
        }
    }
}

/// Checks the three conditions on `(X; G, H)`. Cover violations are errors;
/// convexity and projection failures are reported in the `Err` of the inner
/// result together with the decomposition built so far.
pub fn is_projecting_decomposition(
    x: &Graph,
    gset: &[Vertex],
    hset: &[Vertex],
) -> Result<(Decomposition, Option<DecompositionFailure>), GraphError> {
    let g = induced_subgraph(x, gset)?;
    let h = induced_subgraph(x, hset)?;
    for v in 0..x.n() {
        if g.local(v).is_none() && h.local(v).is_none() {
            return Err(GraphError::VertexNotCovered(v));
        }
    }
    for (u, v) in x.edges() {
        let in_g = g.local(u).is_some() && g.local(v).is_some();
        let in_h = h.local(u).is_some() && h.local(v).is_some();
        if !in_g && !in_h {
            return Err(GraphError::CoverViolation(u, v));
        }
    }
    let common: Vec<Vertex> = g
        .vertices
        .iter()
        .copied()
        .filter(|&v| h.local(v).is_some())
        .collect();
    let intersection = induced_subgraph(x, &common)?;
    let dx = distance_matrix(x);
    let mut dec = Decomposition {
        ambient: x.clone(),
        gset: g.vertices.clone(),
        hset: h.vertices.clone(),
        g,
        h,
        intersection,
        projection: None,
    };
    if !is_convex_with(&dx, &dec.intersection) {
        return Ok((dec, Some(DecompositionFailure::NotConvex)));
    }
    let dh = distance_matrix(&dec.h.graph);
    let common_in_h: Vec<Vertex> = common
        .iter()
        .map(|&v| dec.h.local(v).expect("common vertex lies in H"))
        .collect();
    match projection_with(&dh, &common_in_h) {
        Some(p) => {
            dec.projection = Some(p);
            Ok((dec, None))
        }
        None => Ok((dec, Some(DecompositionFailure::NotProjecting))),
    }
}

/// A vertex map that sends every edge to an edge or collapses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphMap {
    pub source: Graph,
    pub target: Graph,
    pub vmap: Vec<Vertex>,
}

pub fn validate_graph_map(g: &Graph, h: &Graph, vmap: &[Vertex]) -> Result<GraphMap, GraphError> {
    if vmap.len() != g.n() {
        return Err(GraphError::MapLength {
            got: vmap.len(),
            expected: g.n(),
        });
    }
    if let Some(&v) = vmap.iter().find(|&&v| v >= h.n()) {
        return Err(GraphError::BadVertex { vertex: v, n: h.n() });
    }
    for (x, y) in g.edges() {
        let (fx, fy) = (vmap[x], vmap[y]);
        if fx != fy && !h.has_edge(fx, fy) {
            return Err(GraphError::NotAGraphMap(x, y, fx, fy));
        }
    }
    Ok(GraphMap {
        source: g.clone(),
        target: h.clone(),
        vmap: vmap.to_vec(),
    })
}

impl GraphMap {
    pub fn identity(g: &Graph) -> GraphMap {
        GraphMap {
            source: g.clone(),
            target: g.clone(),
            vmap: (0..g.n()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GraphMap) -> GraphMap {
        assert_eq!(self.target, other.source, "maps are not composable");
        GraphMap {
            source: self.source.clone(),
            target: other.target.clone(),
            vmap: self.vmap.iter().map(|&v| other.vmap[v]).collect(),
        }
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.vmap[v]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(d: u32) -> Distance {
        Distance::Finite(d)
    }

    #[test]
    fn cycle_five_has_diameter_two() {
        let c5 = cycle(5);
        assert_eq!((c5.n(), c5.edge_count()), (5, 5));
        assert_eq!(distance_matrix(&c5).diameter(), Some(2));
    }

    #[test]
    fn discrete_distances_are_infinite() {
        let d = distance_matrix(&Graph::discrete(2));
        assert_eq!(d.get(0, 1), Distance::Infinite);
        assert_eq!(d.get(1, 1), fin(0));
    }

    #[test]
    fn complete_distances_are_one() {
        let d = distance_matrix(&complete(4));
        for x in 0..4 {
            for y in 0..4 {
                assert_eq!(d.get(x, y), if x == y { fin(0) } else { fin(1) });
            }
        }
    }

    #[test]
    fn infinity_absorbs() {
        assert_eq!(fin(3) + Distance::Infinite, Distance::Infinite);
        assert!(fin(u32::MAX) < Distance::Infinite);
        assert_eq!(fin(u32::MAX) + fin(1), fin(u32::MAX));
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert_eq!(Graph::from_edges(2, [(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(
            Graph::from_edges(2, [(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange(..))
        ));
    }

    #[test]
    fn disjoint_unions() {
        let k1 = complete(1);
        assert_eq!(disjoint_union(&k1, &k1), Graph::discrete(2));
        let two = disjoint_union(&cycle(3), &cycle(3));
        assert_eq!((two.n(), two.edge_count(), two.components().len()), (6, 6, 2));
        let c5 = cycle(5);
        assert_eq!(disjoint_union(&c5, &Graph::empty()), c5);
    }

    #[test]
    fn products() {
        let k2 = complete(2);
        let c4 = box_product(&k2, &k2);
        // row-major: (0,0)=0 (0,1)=1 (1,0)=2 (1,1)=3, a 4-cycle 0-1-3-2
        assert_eq!(c4, Graph::from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
        let cube = box_product(&k2, &c4);
        assert_eq!((cube.n(), cube.edge_count()), (8, 12));
        assert!(cube.is_regular(3));
        let p = cycle(5);
        assert_eq!(box_product(&p, &complete(1)), p);
    }

    #[test]
    fn joins() {
        let e2 = Graph::discrete(2);
        let c4 = join(&e2, &e2);
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.is_regular(2) && c4.is_connected());
        let oct = join(&e2, &c4);
        assert_eq!((oct.n(), oct.edge_count()), (6, 12));
        assert!(oct.is_regular(4));
        assert_eq!(join(&complete(1), &complete(1)), complete(2));
    }

    #[test]
    fn wedges() {
        let k2 = complete(2);
        assert_eq!(wedge(&k2, 1, &k2, 0).unwrap(), path(3));
        let bowtie = wedge(&cycle(3), 0, &cycle(3), 0).unwrap();
        assert_eq!((bowtie.n(), bowtie.edge_count()), (5, 6));
        let c5 = cycle(5);
        assert_eq!(wedge(&c5, 2, &complete(1), 0).unwrap(), c5);
        assert!(wedge(&k2, 2, &k2, 0).is_err());
    }

    #[test]
    fn induced() {
        let c5 = cycle(5);
        assert_eq!(induced_subgraph(&c5, &[0, 1]).unwrap().graph, complete(2));
        assert_eq!(induced_subgraph(&c5, &[0, 1, 2]).unwrap().graph, path(3));
        let all: Vec<_> = (0..5).collect();
        assert_eq!(induced_subgraph(&c5, &all).unwrap().graph, c5);
    }

    #[test]
    fn convexity() {
        let c5 = cycle(5);
        assert!(is_convex(&c5, &[0, 1]).unwrap());
        assert!(!is_convex(&c5, &[0, 2]).unwrap());
        assert!(is_convex(&cycle(6), &[0, 1, 2]).unwrap());
        // a path of three around C_5 is not convex: ends are at distance 2
        // both ways, but that is fine; four around is not.
        assert!(is_convex(&c5, &[0, 1, 2]).unwrap());
        assert!(!is_convex(&c5, &[0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn projections() {
        assert!(projection(&cycle(6), &[0, 1]).unwrap().is_some());
        assert!(projection(&cycle(5), &[0, 1]).unwrap().is_none());
        let c5 = cycle(5);
        let all: Vec<_> = (0..5).collect();
        let p = projection(&c5, &all).unwrap().unwrap();
        assert_eq!(p.map, (0..5).map(Some).collect::<Vec<_>>());
        assert_eq!(projection(&c5, &[0, 2]), Err(GraphError::NotConvex));
        // two adjacent edges of C_5: every point has a nearest point but the
        // projection condition fails
        assert!(projection(&c5, &[0, 1, 2]).unwrap().is_none());
    }

    #[test]
    fn projection_only_on_reachable_component() {
        let g = disjoint_union(&path(3), &complete(2));
        let p = projection(&g, &[1]).unwrap().unwrap();
        assert_eq!(p.map, vec![Some(1), Some(1), Some(1), None, None]);
    }

    fn glued_pentagons() -> Graph {
        let mut edges: Vec<_> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
        edges.push((0, 4));
        Graph::from_edges(8, edges).unwrap()
    }

    #[test]
    fn projecting_decompositions() {
        let x = wedge(&cycle(5), 0, &cycle(5), 0).unwrap();
        let g: Vec<_> = (0..5).collect();
        let h: Vec<_> = std::iter::once(0).chain(5..9).collect();
        let (dec, failure) = is_projecting_decomposition(&x, &g, &h).unwrap();
        assert_eq!(failure, None);
        assert_eq!(dec.intersection.vertices, vec![0]);

        let x = glued_pentagons();
        let (_, failure) =
            is_projecting_decomposition(&x, &[0, 1, 2, 3, 4], &[4, 5, 6, 7, 0]).unwrap();
        assert_eq!(failure, Some(DecompositionFailure::NotProjecting));

        let c5 = cycle(5);
        let all: Vec<_> = (0..5).collect();
        let (dec, failure) = is_projecting_decomposition(&c5, &all, &all).unwrap();
        assert_eq!(failure, None);
        assert_eq!(dec.projection.unwrap().map, (0..5).map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn decomposition_cover_errors() {
        let c4 = cycle(4);
        assert_eq!(
            is_projecting_decomposition(&c4, &[0, 1], &[1, 2]).unwrap_err(),
            GraphError::VertexNotCovered(3)
        );
        assert_eq!(
            is_projecting_decomposition(&c4, &[0, 1, 2], &[2, 3]).unwrap_err(),
            GraphError::CoverViolation(0, 3)
        );
        let (_, failure) = is_projecting_decomposition(&c4, &[0, 1, 2], &[2, 3, 0]).unwrap();
        assert_eq!(failure, Some(DecompositionFailure::NotConvex));
    }

    #[test]
    fn graph_maps() {
        let c5 = cycle(5);
        assert!(validate_graph_map(&c5, &c5, &[0, 1, 2, 3, 4]).is_ok());
        assert!(validate_graph_map(&complete(2), &complete(1), &[0, 0]).is_ok());
        let p3 = path(3);
        assert_eq!(
            validate_graph_map(&p3, &p3, &[0, 2, 1]).unwrap_err(),
            GraphError::NotAGraphMap(0, 1, 0, 2)
        );
        assert!(matches!(
            validate_graph_map(&p3, &p3, &[0, 1]),
            Err(GraphError::MapLength { .. })
        ));
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(cycle(7).girth(), Some(7));
        assert_eq!(complete(4).girth(), Some(3));
        assert_eq!(path(4).girth(), None);
    }

    #[test]
    fn content_hash_is_labelling_sensitive() {
        let p = path(3);
        assert_eq!(p.content_hash(), path(3).content_hash());
        assert_ne!(p.content_hash(), p.relabel(&[1, 0, 2]).content_hash());
    }
}
