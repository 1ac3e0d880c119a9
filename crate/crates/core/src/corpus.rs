//! A built-in list of small graphs used by sweeps and tests, plus
//! generators for trees.

use std::collections::BTreeSet;

use crate::dsl::parse_graph;
use crate::graph::{Graph, Vertex};

#[derive(Debug, Clone)]
pub struct CorpusGraph {
    pub name: String,
    /// Expression that rebuilds the graph.
    pub expr: String,
    pub graph: Graph,
}

const BUILTIN: &[(&str, &str)] = &[
    ("K1", "K(1)"),
    ("K2", "K(2)"),
    ("K3", "K(3)"),
    ("K4", "K(4)"),
    ("K5", "K(5)"),
    ("E2", "E(2)"),
    ("E3", "E(3)"),
    ("C3", "C(3)"),
    ("C4", "C(4)"),
    ("C5", "C(5)"),
    ("C6", "C(6)"),
    ("C7", "C(7)"),
    ("C8", "C(8)"),
    ("P3", "P(3)"),
    ("P4", "P(4)"),
    ("P5", "P(5)"),
    ("star4", "[0-1, 0-2, 0-3, 0-4]"),
    ("K2,3", "E(2) * E(3)"),
    ("octahedron", "E(2) * E(2) * E(2)"),
    ("cone C5", "C(5) * K(1)"),
    ("cube", "K(2) box K(2) box K(2)"),
    ("prism C5", "K(2) box C(5)"),
    ("C5 v C5", "wedge(C(5), 0, C(5), 0)"),
    ("two pentagons", "[0-1, 1-2, 2-3, 3-4, 4-5, 5-6, 6-7, 7-0, 0-4]"),
    ("C5 + K3", "C(5) + K(3)"),
    ("petersen", "petersen"),
    ("moebius-kantor", "moebius_kantor"),
    ("heawood", "heawood"),
    ("pappus", "pappus"),
    ("icosahedron", "icosahedral"),
    ("dodecahedron", "dodecahedral"),
    ("tutte-coxeter", "tutte_coxeter"),
];

/// The built-in corpus, smallest graphs first.
pub fn builtin() -> Vec<CorpusGraph> {
    let mut out: Vec<CorpusGraph> = BUILTIN
        .iter()
        .map(|&(name, expr)| CorpusGraph {
            name: name.to_string(),
            expr: expr.to_string(),
            graph: parse_graph(expr).expect("built-in expressions parse"),
        })
        .collect();
    out.sort_by_key(|c| c.graph.n());
    out
}

/// The 8-cycle with the chord `0-4`, i.e. two 5-cycles sharing an edge,
/// with its cover by the two 5-cycles. `H` does not project to the shared
/// edge.
pub fn two_pentagons() -> (Graph, Vec<Vertex>, Vec<Vertex>) {
    let mut edges: Vec<(Vertex, Vertex)> = (0..8).map(|i| (i, (i + 1) % 8)).collect();
    edges.push((0, 4));
    let g = Graph::from_edges(8, edges).expect("valid construction");
    (g, vec![0, 1, 2, 3, 4], vec![4, 5, 6, 7, 0])
}

fn rooted_code(g: &Graph, v: Vertex, parent: Option<Vertex>) -> String {
    let mut children: Vec<String> = g
        .neighbours(v)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(g, w, Some(v)))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

/// Isomorphism-invariant encoding of a tree, rooted at its centre.
pub fn tree_code(t: &Graph) -> String {
    if t.n() == 0 {
        return String::new();
    }
    let mut degree: Vec<usize> = (0..t.n()).map(|v| t.degree(v)).collect();
    let mut layer: Vec<Vertex> = (0..t.n()).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = t.n();
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in t.neighbours(v) {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| rooted_code(t, c, None))
        .min()
        .expect("a tree has a centre")
}

/// One representative of every isomorphism class of trees on `n` vertices.
pub fn trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![Graph::discrete(1)];
    for m in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &level {
            for v in 0..t.n() {
                let edges = t.edges().chain(std::iter::once((v, m - 1)));
                let grown = Graph::from_edges(m, edges).expect("adding a leaf");
                if seen.insert(tree_code(&grown)) {
                    next.push(grown);
                }
            }
        }
        level = next;
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        // unlabelled trees on 1..=8 vertices
        let counts: Vec<usize> = (1..=8).map(|n| trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23]);
        assert!(trees(6).iter().all(Graph::is_tree));
    }

    #[test]
    fn builtin_corpus_builds() {
        let c = builtin();
        assert!(c.len() > 20);
        let pent = c.iter().find(|g| g.name == "two pentagons").unwrap();
        assert_eq!(pent.graph, two_pentagons().0);
    }
}
