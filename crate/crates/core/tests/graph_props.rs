use maghom_core::chain::{chain_rank_table, Metric};
use maghom_core::graph::{
    box_product, disjoint_union, distance_matrix, join, Distance, Graph,
};
use maghom_core::homology::{compute_homology, HomologyOptions, RankMethod};
use maghom_core::linalg::{rank_exact, rank_modular, smith_normal_form, SparseIntMatrix};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            let edges: Vec<_> = pairs.zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..6usize, 1..6usize).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-4i64..=4, c), r)
    })
}

fn add(a: Distance, b: Distance) -> Distance {
    match (a.finite(), b.finite()) {
        (Some(x), Some(y)) => Distance::Finite(x + y),
        _ => Distance::Infinite,
    }
}

fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    d.sort_unstable();
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn box_product_distances_add(g in graph(4), h in graph(4)) {
        let p = box_product(&g, &h);
        let (dg, dh, dp) = (distance_matrix(&g), distance_matrix(&h), distance_matrix(&p));
        let nh = h.n();
        for x1 in 0..g.n() {
            for x2 in 0..g.n() {
                for y1 in 0..nh {
                    for y2 in 0..nh {
                        prop_assert_eq!(
                            dp.get(x1 * nh + y1, x2 * nh + y2),
                            add(dg.get(x1, x2), dh.get(y1, y2))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn join_has_diameter_at_most_two(g in graph(4), h in graph(4)) {
        let j = join(&g, &h);
        prop_assert!(j.is_connected());
        prop_assert!(distance_matrix(&j).diameter().unwrap() <= 2);
    }

    #[test]
    fn products_commute_up_to_chain_counts(g in graph(3), h in graph(3)) {
        let a = chain_rank_table(&Metric::new(&box_product(&g, &h)), 4);
        let b = chain_rank_table(&Metric::new(&box_product(&h, &g)), 4);
        prop_assert_eq!(a, b);
        prop_assert_eq!(sorted_degrees(&join(&g, &h)), sorted_degrees(&join(&h, &g)));
        prop_assert_eq!(
            sorted_degrees(&disjoint_union(&g, &h)),
            sorted_degrees(&disjoint_union(&h, &g))
        );
    }

    #[test]
    fn modular_rank_never_exceeds_exact(m in matrix(), p in prop::sample::select(vec![2u64, 3, 5, 7, 1_000_000_007])) {
        let m = SparseIntMatrix::from_dense(&m);
        prop_assert!(rank_modular(&m, p) <= rank_exact(&m));
        prop_assert_eq!(rank_modular(&m, 1_000_000_007), rank_exact(&m));
    }

    #[test]
    fn smith_form_rank_and_transpose(m in matrix()) {
        let m = SparseIntMatrix::from_dense(&m);
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.rank, rank_exact(&m));
        prop_assert_eq!(smith_normal_form(&m.transpose()).unwrap(), s.clone());
        let rev_rows: Vec<usize> = (0..m.rows()).rev().collect();
        let rev_cols: Vec<usize> = (0..m.cols()).rev().collect();
        prop_assert_eq!(smith_normal_form(&m.permute(&rev_rows, &rev_cols)).unwrap(), s);
    }

    #[test]
    fn homology_is_relabelling_invariant(g in graph(5), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let opts = HomologyOptions { method: RankMethod::Exact, torsion: true, ..Default::default() };
        let a = compute_homology(&g, 4, &opts).unwrap();
        let b = compute_homology(&g.relabel(&perm), 4, &opts).unwrap();
        for (x, y) in a.cells().zip(b.cells()) {
            prop_assert_eq!(x.group(), y.group());
        }
    }
}
