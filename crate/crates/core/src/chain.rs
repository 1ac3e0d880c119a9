//! The magnitude chain complex of a graph.
//!
//! `MC_{k,l}(G)` is free on the tuples `(x_0, ..., x_k)` of vertices with
//! `x_i != x_{i+1}` and total length `sum d(x_{i-1}, x_i) = l`. The
//! differential is `∂ = ∂_1 - ∂_2 + ... + (-1)^{k-2} ∂_{k-1}`, where `∂_i`
//! deletes the interior vertex `x_i` when that does not shorten the tuple
//! and is zero otherwise. Endpoints are never deleted, so the complex splits
//! as a direct sum over endpoint pairs `(x_0, x_k)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{distance_matrix, DistMatrix, Distance, Graph, GraphMap, Vertex};
use crate::linalg::SparseIntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("tuple must have at least one vertex")]
    EmptyTrail,
    #[error("consecutive entries {0} and {1} coincide")]
    RepeatedVertex(usize, usize),
    #[error("vertices {0} and {1} lie in different components")]
    InfiniteLength(Vertex, Vertex),
    #[error("vertex {0} out of range")]
    BadVertex(Vertex),
}

/// A graph together with its metric and per-vertex lists of reachable
/// vertices. Everything in this module works against a `Metric`.
#[derive(Debug, Clone)]
pub struct Metric {
    graph: Graph,
    dist: DistMatrix,
    /// For each vertex `x`, all `y != x` in the same component with
    /// `d(x, y)`, sorted by `y`.
    reach: Vec<Vec<(u32, u32)>>,
    hash: String,
}

impl Metric {
    pub fn new(graph: &Graph) -> Self {
        let dist = distance_matrix(graph);
        let reach = (0..graph.n())
            .map(|x| {
                dist.row(x)
                    .iter()
                    .enumerate()
                    .filter(|&(y, _)| y != x)
                    .filter_map(|(y, d)| d.finite().map(|d| (y as u32, d)))
                    .collect()
            })
            .collect();
        Metric {
            hash: graph.content_hash(),
            graph: graph.clone(),
            dist,
            reach,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn dist(&self) -> &DistMatrix {
        &self.dist
    }

    pub fn content_hash(&self) -> &str {
        &self.hash
    }

    /// Finite distance, panicking on infinity. Only used on tuples already
    /// known to have finite length.
    #[inline]
    fn d(&self, x: u32, y: u32) -> u32 {
        match self.dist.get(x as usize, y as usize) {
            Distance::Finite(d) => d,
            Distance::Infinite => u32::MAX,
        }
    }

    /// Length of a tuple, or `None` if two consecutive entries are in
    /// different components.
    pub fn length(&self, vertices: &[Vertex]) -> Option<u64> {
        vertices.windows(2).try_fold(0u64, |acc, w| {
            self.dist.get(w[0], w[1]).finite().map(|d| acc + d as u64)
        })
    }
}

/// A generator `(x_0, ..., x_k)` of the magnitude chain complex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Trail {
    vertices: Vec<Vertex>,
    length: u64,
}

impl Trail {
    pub fn new(metric: &Metric, vertices: Vec<Vertex>) -> Result<Trail, ChainError> {
        if vertices.is_empty() {
            return Err(ChainError::EmptyTrail);
        }
        let n = metric.graph.n();
        if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
            return Err(ChainError::BadVertex(v));
        }
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(ChainError::RepeatedVertex(w[0], w[1]));
            }
            if !metric.dist.get(w[0], w[1]).is_finite() {
                return Err(ChainError::InfiniteLength(w[0], w[1]));
            }
        }
        let length = metric.length(&vertices).expect("checked finite");
        Ok(Trail { vertices, length })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn degree(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn length(&self) -> u64 {
        self.length
    }
}

impl fmt::Display for Trail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The generators of `MC_{k,l}(G)` in lexicographic order, stored flat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorBasis {
    k: usize,
    l: u32,
    flat: Vec<u32>,
}

impl GeneratorBasis {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn len(&self) -> usize {
        self.flat.len() / (self.k + 1)
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    pub fn get(&self, i: usize) -> &[u32] {
        let s = self.k + 1;
        &self.flat[i * s..(i + 1) * s]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.flat.chunks_exact(self.k + 1)
    }

    /// Position of a tuple in the basis.
    pub fn index_of(&self, tuple: &[u32]) -> Option<usize> {
        if tuple.len() != self.k + 1 {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(tuple) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn trails(&self, metric: &Metric) -> Vec<Trail> {
        self.iter()
            .map(|t| Trail {
                vertices: t.iter().map(|&v| v as usize).collect(),
                length: self.l as u64,
            })
            .inspect(|t| debug_assert_eq!(metric.length(&t.vertices), Some(self.l as u64)))
            .collect()
    }

    /// Indices of generators grouped by endpoint pair `(x_0, x_k)`. Within
    /// each group the indices are increasing, hence lexicographic.
    pub fn endpoint_groups(&self) -> BTreeMap<(u32, u32), Vec<usize>> {
        let mut groups: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();
        for (i, t) in self.iter().enumerate() {
            groups.entry((t[0], t[self.k])).or_default().push(i);
        }
        groups
    }
}

fn extend(metric: &Metric, prefix: &mut Vec<u32>, steps: usize, budget: u32, out: &mut Vec<u32>) {
    if steps == 0 {
        if budget == 0 {
            out.extend_from_slice(prefix);
        }
        return;
    }
    let last = *prefix.last().expect("nonempty prefix");
    for &(y, d) in &metric.reach[last as usize] {
        // each of the remaining steps costs at least one
        if d > budget || budget - d < (steps - 1) as u32 {
            continue;
        }
        if steps == 1 && d != budget {
            continue;
        }
        prefix.push(y);
        extend(metric, prefix, steps - 1, budget - d, out);
        prefix.pop();
    }
}

/// Generators of `MC_{k,l}` starting at `start`, in lexicographic order.
fn enumerate_from(metric: &Metric, start: u32, k: usize, l: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k + 1);
    prefix.push(start);
    extend(metric, &mut prefix, k, l, &mut out);
    out
}

/// All generators of `MC_{k,l}(G)`, lexicographically sorted.
pub fn enumerate_generators(metric: &Metric, k: usize, l: u32) -> GeneratorBasis {
    let n = metric.graph.n() as u32;
    let flat = if k as u64 > l as u64 {
        Vec::new()
    } else {
        let parts: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|s| enumerate_from(metric, s, k, l))
            .collect();
        parts.concat()
    };
    GeneratorBasis { k, l, flat }
}

/// `counts[l][k] = |MC_{k,l}(G)|` for `l <= lmax`, `k <= l`, computed by
/// dynamic programming over the last vertex without listing any tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCounts {
    pub counts: Vec<Vec<u128>>,
}

impl ChainCounts {
    pub fn lmax(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    pub fn get(&self, k: usize, l: usize) -> u128 {
        self.counts
            .get(l)
            .and_then(|row| row.get(k))
            .copied()
            .unwrap_or(0)
    }

    /// Total number of generators in row `l`.
    pub fn row_total(&self, l: usize) -> u128 {
        self.counts.get(l).map_or(0, |r| r.iter().sum())
    }
}

pub fn chain_rank_table(metric: &Metric, lmax: usize) -> ChainCounts {
    let n = metric.graph.n();
    // ends[k][l][v]: tuples of degree k and length l ending at v
    let mut ends: Vec<Vec<Vec<u128>>> = vec![vec![vec![0; n]; lmax + 1]; lmax + 1];
    for v in 0..n {
        ends[0][0][v] = 1;
    }
    for k in 1..=lmax {
        for l in k..=lmax {
            for v in 0..n {
                let mut total = 0u128;
                for &(u, d) in &metric.reach[v] {
                    let d = d as usize;
                    if d <= l {
                        total += ends[k - 1][l - d][u as usize];
                    }
                }
                ends[k][l][v] = total;
            }
        }
    }
    let counts = (0..=lmax)
        .map(|l| (0..=l).map(|k| ends[k][l].iter().sum()).collect())
        .collect();
    ChainCounts { counts }
}

/// Faces of a generator: `(position in the (k-1)-tuple basis order, sign)`
/// for every interior vertex whose deletion keeps the length.
fn faces(metric: &Metric, t: &[u32], mut emit: impl FnMut(&[u32], i64)) {
    let k = t.len() - 1;
    let mut face = Vec::with_capacity(k);
    for i in 1..k {
        let (a, b, c) = (t[i - 1], t[i], t[i + 1]);
        if a == c || metric.d(a, b) + metric.d(b, c) != metric.d(a, c) {
            continue;
        }
        face.clear();
        face.extend_from_slice(&t[..i]);
        face.extend_from_slice(&t[i + 1..]);
        let sign = if i % 2 == 1 { 1 } else { -1 };
        emit(&face, sign);
    }
}

/// Matrix of `∂: MC_{k,l} -> MC_{k-1,l}` in the lexicographic bases.
pub fn boundary_matrix(metric: &Metric, k: usize, l: u32) -> SparseIntMatrix {
    assert!(k >= 1, "boundary needs k >= 1");
    let source = enumerate_generators(metric, k, l);
    let target = enumerate_generators(metric, k - 1, l);
    boundary_between(metric, &source, &target)
}

/// Boundary matrix for explicitly supplied bases.
pub fn boundary_between(
    metric: &Metric,
    source: &GeneratorBasis,
    target: &GeneratorBasis,
) -> SparseIntMatrix {
    assert_eq!(source.k, target.k + 1);
    let columns = source
        .iter()
        .map(|t| {
            let mut col: BTreeMap<usize, i64> = BTreeMap::new();
            faces(metric, t, |face, sign| {
                let row = target
                    .index_of(face)
                    .expect("a length-preserving face is a generator");
                *col.entry(row).or_default() += sign;
            });
            col.into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(r, v)| (r, BigInt::from(v)))
                .collect()
        })
        .collect();
    SparseIntMatrix::from_columns(target.len(), columns)
}

/// The boundary map restricted to each endpoint pair. The returned blocks
/// are in increasing `(x_0, x_k)` order; together they are the full
/// boundary matrix up to a permutation of rows and columns.
pub fn boundary_blocks(
    metric: &Metric,
    source: &GeneratorBasis,
    target: &GeneratorBasis,
) -> Vec<((u32, u32), SparseIntMatrix)> {
    assert_eq!(source.k, target.k + 1);
    let src_groups = source.endpoint_groups();
    let tgt_groups = target.endpoint_groups();
    let empty = Vec::new();
    src_groups
        .into_par_iter()
        .map(|(ends, cols)| {
            let rows = tgt_groups.get(&ends).unwrap_or(&empty);
            let columns = cols
                .iter()
                .map(|&c| {
                    let mut col: Vec<(usize, BigInt)> = Vec::new();
                    faces(metric, source.get(c), |face, sign| {
                        let global = target
                            .index_of(face)
                            .expect("a length-preserving face is a generator");
                        let local = rows
                            .binary_search(&global)
                            .expect("faces keep their endpoints");
                        match col.iter_mut().find(|(r, _)| *r == local) {
                            Some((_, v)) => *v += sign,
                            None => col.push((local, BigInt::from(sign))),
                        }
                    });
                    col
                })
                .collect();
            (ends, SparseIntMatrix::from_columns(rows.len(), columns))
        })
        .collect()
}

/// Matrix of `f_#: MC_{k,l}(G) -> MC_{k,l}(H)`.
pub fn induced_chain_map(f: &GraphMap, k: usize, l: u32) -> SparseIntMatrix {
    let source = Metric::new(&f.source);
    let target = Metric::new(&f.target);
    induced_chain_map_with(f, &source, &target, k, l)
}

pub fn induced_chain_map_with(
    f: &GraphMap,
    source: &Metric,
    target: &Metric,
    k: usize,
    l: u32,
) -> SparseIntMatrix {
    let from = enumerate_generators(source, k, l);
    let to = enumerate_generators(target, k, l);
    let columns = from
        .iter()
        .map(|t| {
            let image: Vec<u32> = t.iter().map(|&v| f.apply(v as usize) as u32).collect();
            let keeps_length = image.windows(2).all(|w| w[0] != w[1])
                && image
                    .windows(2)
                    .map(|w| target.d(w[0], w[1]) as u64)
                    .sum::<u64>()
                    == l as u64;
            if keeps_length {
                let row = to.index_of(&image).expect("image is a generator");
                vec![(row, BigInt::one())]
            } else {
                Vec::new()
            }
        })
        .collect();
    SparseIntMatrix::from_columns(to.len(), columns)
}

/// A finite integer combination of tuples.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    terms: BTreeMap<Vec<Vertex>, BigInt>,
}

impl Chain {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_trail(t: &Trail) -> Self {
        let mut c = Chain::zero();
        c.add_term(t.vertices.clone(), BigInt::one());
        c
    }

    pub fn add_term(&mut self, tuple: Vec<Vertex>, coef: BigInt) {
        if coef.is_zero() {
            return;
        }
        let slot = self.terms.entry(tuple.clone()).or_default();
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&tuple);
        }
    }

    pub fn add(&mut self, other: &Chain, scale: &BigInt) {
        for (t, c) in &other.terms {
            self.add_term(t.clone(), c * scale);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tuple: &[Vertex]) -> BigInt {
        self.terms.get(tuple).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Vertex], &BigInt)> + '_ {
        self.terms.iter().map(|(t, c)| (t.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Applies the differential to every term of a chain.
pub fn boundary_of_chain(metric: &Metric, chain: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (t, c) in chain.terms() {
        let tuple: Vec<u32> = t.iter().map(|&v| v as u32).collect();
        faces(metric, &tuple, |face, sign| {
            out.add_term(face.iter().map(|&v| v as usize).collect(), c * sign);
        });
    }
    out
}

/// Exterior product of generators of `G` and `H`, landing in the cartesian
/// product built by [`crate::graph::box_product`] (row-major numbering).
///
/// The sum runs over monotone lattice paths from `(0, 0)` to `(k1, k2)`; a
/// path's sign is `(-1)^n` with `n` the number of unit squares of the grid
/// lying below it.
pub fn exterior_product(a: &Trail, b: &Trail, h_n: usize) -> Chain {
    let (k1, k2) = (a.degree(), b.degree());
    let mut out = Chain::zero();
    let mut path = Vec::with_capacity(k1 + k2 + 1);
    fn walk(
        i: usize,
        j: usize,
        below: usize,
        a: &[Vertex],
        b: &[Vertex],
        h_n: usize,
        path: &mut Vec<Vertex>,
        out: &mut Chain,
    ) {
        path.push(a[i] * h_n + b[j]);
        let (k1, k2) = (a.len() - 1, b.len() - 1);
        if i == k1 && j == k2 {
            let sign = if below.is_multiple_of(2) { 1 } else { -1 };
            out.add_term(path.clone(), BigInt::from(sign));
        } else {
            if i < k1 {
                // a horizontal step at height j leaves j squares below it
                walk(i + 1, j, below + j, a, b, h_n, path, out);
            }
            if j < k2 {
                walk(i, j + 1, below, a, b, h_n, path, out);
            }
        }
        path.pop();
    }
    walk(0, 0, 0, &a.vertices, &b.vertices, h_n, &mut path, &mut out);
    debug_assert!(out.terms().all(|(t, _)| t.len() == k1 + k2 + 1));
    out
}

/// Bilinear extension of [`exterior_product`] to chains.
pub fn exterior_product_chains(a: &Chain, b: &Chain, h_n: usize) -> Chain {
    let mut out = Chain::zero();
    for (ta, ca) in a.terms() {
        for (tb, cb) in b.terms() {
            let ta = Trail {
                vertices: ta.to_vec(),
                length: 0,
            };
            let tb = Trail {
                vertices: tb.to_vec(),
                length: 0,
            };
            out.add(&exterior_product(&ta, &tb, h_n), &(ca * cb));
        }
    }
    out
}

/// Concurrent cache of generator bases keyed by graph content hash and
/// bidegree.
#[derive(Debug, Default)]
pub struct BasisCache {
    map: RwLock<HashMap<(String, usize, u32), Arc<GeneratorBasis>>>,
}

impl BasisCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get_or_build(&self, metric: &Metric, k: usize, l: u32) -> Arc<GeneratorBasis> {
        let key = (metric.hash.clone(), k, l);
        if let Some(b) = self.map.read().expect("cache lock").get(&key) {
            return Arc::clone(b);
        }
        let built = Arc::new(enumerate_generators(metric, k, l));
        let mut w = self.map.write().expect("cache lock");
        Arc::clone(w.entry(key).or_insert(built))
    }

    /// Drops every cached basis of length `l`.
    pub fn evict_length(&self, l: u32) {
        self.map.write().expect("cache lock").retain(|(_, _, ll), _| *ll != l);
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{self, validate_graph_map};
    use crate::linalg::{multiply, rank_exact};

    fn c5() -> Metric {
        Metric::new(&graph::cycle(5))
    }

    fn tuple(v: &[u32]) -> Vec<u32> {
        v.to_vec()
    }

    #[test]
    fn generator_counts_of_c5() {
        let m = c5();
        assert_eq!(enumerate_generators(&m, 2, 2).len(), 20);
        assert_eq!(enumerate_generators(&m, 4, 4).len(), 80);
        assert_eq!(enumerate_generators(&m, 0, 0).len(), 5);
        assert!(enumerate_generators(&m, 3, 2).is_empty());
    }

    #[test]
    fn bases_are_sorted_and_valid() {
        let m = c5();
        for l in 0..6u32 {
            for k in 0..=l as usize {
                let b = enumerate_generators(&m, k, l);
                let rows: Vec<&[u32]> = b.iter().collect();
                assert!(rows.windows(2).all(|w| w[0] < w[1]));
                for t in &rows {
                    let v: Vec<usize> = t.iter().map(|&x| x as usize).collect();
                    assert_eq!(m.length(&v), Some(l as u64));
                    assert!(v.windows(2).all(|w| w[0] != w[1]));
                }
            }
        }
    }

    #[test]
    fn counting_matches_enumeration() {
        let m = Metric::new(&crate::families::petersen());
        let counts = chain_rank_table(&m, 4);
        for l in 0..=4u32 {
            for k in 0..=l as usize {
                assert_eq!(
                    counts.get(k, l as usize),
                    enumerate_generators(&m, k, l).len() as u128
                );
            }
        }
    }

    #[test]
    fn c5_chain_counts_row_three() {
        let counts = chain_rank_table(&c5(), 4);
        assert_eq!(counts.get(2, 3), 40);
        assert_eq!(counts.get(3, 3), 40);
    }

    #[test]
    fn discrete_graphs_only_have_points() {
        let counts = chain_rank_table(&Metric::new(&Graph::discrete(3)), 5);
        for l in 0..=5 {
            for k in 0..=l {
                let expected = if (k, l) == (0, 0) { 3 } else { 0 };
                assert_eq!(counts.get(k, l), expected);
            }
        }
    }

    #[test]
    fn complete_graph_differentials_vanish() {
        let m = Metric::new(&graph::complete(3));
        assert!(boundary_matrix(&m, 2, 2).is_zero());
        assert!(boundary_matrix(&m, 1, 1).is_zero());
    }

    #[test]
    fn c5_example_boundaries() {
        // label a_1..a_5 as 0..4 going around the cycle
        let m = c5();
        let src = enumerate_generators(&m, 3, 3);
        let tgt = enumerate_generators(&m, 2, 3);
        let d = boundary_between(&m, &src, &tgt);
        let col = |t: &[u32]| src.index_of(t).unwrap();
        let row = |t: &[u32]| tgt.index_of(t).unwrap();

        let c = col(&tuple(&[0, 1, 2, 1]));
        assert_eq!(d.column(c), &[(row(&[0, 2, 1]), BigInt::from(1))]);

        assert!(d.column(col(&[0, 1, 0, 1])).is_empty());

        // ∂(a1,a2,a3,a4) = ∂_1 - ∂_2 = (a1,a3,a4) - (a1,a2,a4)
        let c = col(&[0, 1, 2, 3]);
        let mut expected = vec![
            (row(&[0, 2, 3]), BigInt::from(1)),
            (row(&[0, 1, 3]), BigInt::from(-1)),
        ];
        expected.sort_by_key(|e| e.0);
        assert_eq!(d.column(c), expected.as_slice());

        // only ∂_2 survives here, so the sign is negative under ∂_1 - ∂_2
        assert_eq!(
            d.column(col(&[0, 1, 0, 4])),
            &[(row(&[0, 1, 4]), BigInt::from(-1))]
        );
    }

    #[test]
    fn boundary_rank_c5_three_three() {
        assert_eq!(rank_exact(&boundary_matrix(&c5(), 3, 3)), 30);
    }

    #[test]
    fn boundary_squares_to_zero_on_c5() {
        let m = c5();
        for l in 2..=6 {
            for k in 2..=l as usize {
                let d1 = boundary_matrix(&m, k - 1, l);
                let d2 = boundary_matrix(&m, k, l);
                assert!(multiply(&d1, &d2).unwrap().is_zero(), "k={k} l={l}");
            }
        }
    }

    #[test]
    fn blocks_reassemble_the_boundary() {
        let m = c5();
        let src = enumerate_generators(&m, 4, 5);
        let tgt = enumerate_generators(&m, 3, 5);
        let blocks = boundary_blocks(&m, &src, &tgt);
        let total: usize = blocks.iter().map(|(_, b)| rank_exact(b)).sum();
        assert_eq!(total, rank_exact(&boundary_between(&m, &src, &tgt)));
        let nnz: usize = blocks.iter().map(|(_, b)| b.nnz()).sum();
        assert_eq!(nnz, boundary_between(&m, &src, &tgt).nnz());
    }

    #[test]
    fn induced_maps() {
        let c5g = graph::cycle(5);
        let id = GraphMap::identity(&c5g);
        let m = induced_chain_map(&id, 2, 3);
        assert_eq!(m, SparseIntMatrix::identity(m.rows()));

        let k2 = graph::complete(2);
        let collapse = validate_graph_map(&k2, &graph::complete(1), &[0, 0]).unwrap();
        let z = induced_chain_map(&collapse, 1, 1);
        assert_eq!((z.rows(), z.cols()), (0, 2));
        assert!(z.is_zero());

        let rot = validate_graph_map(&c5g, &c5g, &[1, 2, 3, 4, 0]).unwrap();
        let r = induced_chain_map(&rot, 2, 3);
        assert_eq!((r.rows(), r.cols()), (40, 40));
        for c in 0..40 {
            assert_eq!(r.column(c).len(), 1);
        }
        assert_eq!(r.transpose().entries().count(), 40);
    }

    #[test]
    fn exterior_product_examples() {
        let g = Metric::new(&graph::complete(2));
        let h = Metric::new(&graph::complete(2));
        let x0 = Trail::new(&g, vec![0]).unwrap();
        let x01 = Trail::new(&g, vec![0, 1]).unwrap();
        let y01 = Trail::new(&h, vec![0, 1]).unwrap();
        let y0 = Trail::new(&h, vec![0]).unwrap();
        // (x,y) -> 2x + y
        let p = exterior_product(&x0, &y01, 2);
        assert_eq!(p.len(), 1);
        assert_eq!(p.coefficient(&[0, 1]), BigInt::from(1));

        let p = exterior_product(&x01, &y01, 2);
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(&[0, 2, 3]), BigInt::from(1));
        assert_eq!(p.coefficient(&[0, 1, 3]), BigInt::from(-1));

        let p = exterior_product(&x0, &y0, 2);
        assert_eq!(p.coefficient(&[0]), BigInt::from(1));
    }

    #[test]
    fn trail_validation() {
        let m = Metric::new(&Graph::discrete(2));
        assert_eq!(Trail::new(&m, vec![]), Err(ChainError::EmptyTrail));
        assert_eq!(Trail::new(&m, vec![0, 0]), Err(ChainError::RepeatedVertex(0, 0)));
        assert_eq!(Trail::new(&m, vec![0, 1]), Err(ChainError::InfiniteLength(0, 1)));
        assert_eq!(Trail::new(&m, vec![2]), Err(ChainError::BadVertex(2)));
    }

    #[test]
    fn cache_reuses_bases() {
        let m = c5();
        let cache = BasisCache::new();
        let a = cache.get_or_build(&m, 2, 3);
        let b = cache.get_or_build(&m, 2, 3);
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.len(), 1);
        cache.evict_length(3);
        assert!(cache.is_empty());
    }
}
