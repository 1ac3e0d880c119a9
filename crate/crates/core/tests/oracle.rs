//! Brute-force oracle: tuples enumerated from `V^{k+1}`, boundaries taken
//! straight from the definition, ranks by dense fraction-free elimination.
//! Nothing here goes through the library's chain or linear algebra code.

use maghom_core::chain::{boundary_matrix, chain_rank_table, Metric};
use maghom_core::graph::{complete, cycle, path, star, Graph};
use maghom_core::homology::{
    compute_homology, magnitude_by_counting, HomologyOptions, RankMethod,
};
use maghom_core::linalg::rank_exact;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{HashMap, VecDeque};

fn distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<Option<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![None; n];
            d[s] = Some(0);
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in &adj[u] {
                    if d[w].is_none() {
                        d[w] = Some(d[u].unwrap() + 1);
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

struct Oracle {
    n: usize,
    d: Vec<Vec<Option<usize>>>,
}

impl Oracle {
    fn new(g: &Graph) -> Self {
        let edges: Vec<_> = g.edges().collect();
        Oracle {
            n: g.n(),
            d: distances(g.n(), &edges),
        }
    }

    fn length(&self, t: &[usize]) -> Option<usize> {
        t.windows(2).map(|w| self.d[w[0]][w[1]]).sum()
    }

    /// Every tuple in `V^{k+1}` with distinct neighbours and length `l`.
    fn generators(&self, k: usize, l: usize) -> Vec<Vec<usize>> {
        let total = self.n.pow(k as u32 + 1);
        (0..total)
            .map(|mut code| {
                let mut t = vec![0; k + 1];
                for slot in t.iter_mut().rev() {
                    *slot = code % self.n;
                    code /= self.n;
                }
                t
            })
            .filter(|t| t.windows(2).all(|w| w[0] != w[1]) && self.length(t) == Some(l))
            .collect()
    }

    /// Dense matrix of `∂ = Σ_{i=1}^{k-1} (-1)^{i+1} ∂_i`.
    fn boundary(&self, k: usize, l: usize) -> Vec<Vec<i64>> {
        let src = self.generators(k, l);
        let tgt = self.generators(k - 1, l);
        let index: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut m = vec![vec![0i64; src.len()]; tgt.len()];
        for (c, t) in src.iter().enumerate() {
            for i in 1..k {
                let mut face = t.clone();
                face.remove(i);
                if self.length(&face) == Some(l) {
                    let sign = if i % 2 == 1 { 1 } else { -1 };
                    m[index[&face]][c] += sign;
                }
            }
        }
        m
    }

    fn rank(&self, k: usize, l: usize) -> usize {
        if k == 0 || k > l {
            0
        } else {
            dense_rank(self.boundary(k, l))
        }
    }

    fn homology_rank(&self, k: usize, l: usize) -> usize {
        self.generators(k, l).len() - self.rank(k, l) - self.rank(k + 1, l)
    }
}

fn dense_rank(m: Vec<Vec<i64>>) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[rank][c] * &a[r][j] - &a[r][c] * &a[rank][j]) / &prev;
                a[r][j] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn two_pentagons() -> Graph {
    let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    edges.push((0, 4));
    Graph::from_edges(8, edges).unwrap()
}

#[test]
fn dense_rank_sanity() {
    assert_eq!(dense_rank(vec![vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(dense_rank(vec![vec![0, 1], vec![1, 0], vec![1, 1]]), 2);
    assert_eq!(dense_rank(vec![vec![2, 3, 5], vec![7, 11, 13], vec![17, 19, 23]]), 3);
}

#[test]
fn rank_of_c5_boundary_at_3_3() {
    let g = cycle(5);
    let oracle = Oracle::new(&g);
    assert_eq!(oracle.generators(3, 3).len(), 40);
    assert_eq!(oracle.rank(3, 3), 30);
    assert_eq!(rank_exact(&boundary_matrix(&Metric::new(&g), 3, 3)), 30);
}

#[test]
fn chain_counts_match_enumeration() {
    for g in [cycle(5), complete(4), path(4), two_pentagons(), Graph::discrete(3)] {
        let oracle = Oracle::new(&g);
        let counts = chain_rank_table(&Metric::new(&g), 5);
        for l in 0..=5 {
            for k in 0..=l {
                assert_eq!(
                    counts.get(k, l),
                    oracle.generators(k, l).len() as u128,
                    "{g:?} ({k},{l})"
                );
            }
        }
    }
}

#[test]
fn boundary_squares_to_zero_in_oracle() {
    let oracle = Oracle::new(&two_pentagons());
    for l in 2..=4 {
        for k in 2..=l {
            let outer = oracle.boundary(k - 1, l);
            let inner = oracle.boundary(k, l);
            for row in &outer {
                for c in 0..inner.first().map_or(0, Vec::len) {
                    let s: i64 = row.iter().zip(&inner).map(|(a, r)| a * r[c]).sum();
                    assert_eq!(s, 0);
                }
            }
        }
    }
}

#[test]
fn homology_ranks_match_oracle() {
    let cases: Vec<(Graph, usize)> = vec![
        (cycle(5), 5),
        (cycle(4), 4),
        (cycle(6), 4),
        (complete(4), 3),
        (path(4), 4),
        (star(3), 4),
        (two_pentagons(), 4),
        (Graph::discrete(2), 2),
    ];
    for (g, lmax) in cases {
        let oracle = Oracle::new(&g);
        for method in [RankMethod::Exact, RankMethod::Modular, RankMethod::Auto] {
            let opts = HomologyOptions {
                method,
                ..Default::default()
            };
            let h = compute_homology(&g, lmax, &opts).unwrap();
            for l in 0..=lmax {
                for k in 0..=l {
                    assert_eq!(
                        h.rank(k, l),
                        Some(oracle.homology_rank(k, l) as u64),
                        "{g:?} ({k},{l}) {method}"
                    );
                }
            }
        }
    }
}

#[test]
fn two_pentagons_defect_cell() {
    assert_eq!(Oracle::new(&two_pentagons()).homology_rank(2, 4), 2);
}

#[test]
fn counting_series_matches_enumeration() {
    for g in [cycle(5), cycle(7), complete(3), two_pentagons()] {
        let oracle = Oracle::new(&g);
        let series = magnitude_by_counting(&g, 5);
        for l in 0..=5 {
            let expected: i128 = (0..=l)
                .map(|k| {
                    let c = oracle.generators(k, l).len() as i128;
                    if k % 2 == 0 { c } else { -c }
                })
                .sum();
            assert_eq!(series.coeff(l), expected, "{g:?} q^{l}");
        }
    }
}
