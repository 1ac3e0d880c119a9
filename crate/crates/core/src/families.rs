//! Named graph families.
//!
//! Vertex numbering per family:
//!
//! * `K(n)`, `E(n)`: `0..n`.
//! * `C(n)`, `P(n)`: consecutive along the cycle or path.
//! * Petersen: outer 5-cycle `0..5`, spokes `i - i+5`, inner pentagram
//!   `5+i - 5+(i+2)%5`.
//! * Icosahedral: apex `0`, upper ring `1..=5`, lower ring `6..=10`, apex `11`.
//! * Heawood, Pappus, Möbius–Kantor, Tutte–Coxeter, dodecahedral: LCF
//!   numbering, i.e. consecutive along the Hamiltonian cycle.

use crate::graph::{self, Graph, GraphError};

/// Families accepted by [`build_named`], canonical spelling first.
pub const FAMILIES: &[(&str, &[&str])] = &[
    ("complete", &["k"]),
    ("discrete", &["e", "empty"]),
    ("cycle", &["c"]),
    ("path", &["p"]),
    ("petersen", &[]),
    ("heawood", &[]),
    ("pappus", &[]),
    ("moebius_kantor", &["mobius_kantor", "moebiuskantor"]),
    ("tutte_coxeter", &["tutte_8_cage"]),
    ("icosahedral", &["icosahedron"]),
    ("dodecahedral", &["dodecahedron"]),
];

/// Resolves a case-insensitive family name or alias to its canonical name.
pub fn canonical_family(name: &str) -> Option<&'static str> {
    let lower = name.to_ascii_lowercase().replace('-', "_");
    FAMILIES
        .iter()
        .find(|(canon, aliases)| *canon == lower || aliases.contains(&lower.as_str()))
        .map(|(canon, _)| *canon)
}

/// Number of integer parameters a family takes.
pub fn family_arity(canonical: &str) -> usize {
    match canonical {
        "complete" | "discrete" | "cycle" | "path" => 1,
        _ => 0,
    }
}

pub fn build_named(family: &str, params: &[i64]) -> Result<Graph, GraphError> {
    let canon =
        canonical_family(family).ok_or_else(|| GraphError::UnknownFamily(family.to_string()))?;
    let invalid = |reason: &str| GraphError::InvalidParameter {
        family: canon.to_string(),
        reason: reason.to_string(),
    };
    let arity = family_arity(canon);
    if params.len() != arity {
        return Err(invalid(&format!(
            "expected {arity} parameter(s), got {}",
            params.len()
        )));
    }
    let size = || -> Result<usize, GraphError> {
        let n = params[0];
        let min = if canon == "cycle" { 3 } else { 1 };
        if n < min {
            return Err(invalid(&format!("need n >= {min}, got {n}")));
        }
        usize::try_from(n).map_err(|_| invalid("n too large"))
    };
    Ok(match canon {
        "complete" => graph::complete(size()?),
        "discrete" => Graph::discrete(size()?),
        "cycle" => graph::cycle(size()?),
        "path" => graph::path(size()?),
        "petersen" => petersen(),
        "heawood" => lcf_graph(&[5, -5], 7)?,
        "pappus" => lcf_graph(&[5, 7, -7, 7, -7, -5], 3)?,
        "moebius_kantor" => lcf_graph(&[5, -5], 8)?,
        "tutte_coxeter" => lcf_graph(&[-13, -9, 7, -7, 9, 13], 5)?,
        "icosahedral" => icosahedral(),
        "dodecahedral" => lcf_graph(&[10, 7, 4, -4, -7, 10, -4, 7, -7, 4], 2)?,
        _ => unreachable!("canonical names are exhaustive"),
    })
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("valid construction")
}

pub fn icosahedral() -> Graph {
    let mut edges = Vec::with_capacity(30);
    for i in 0..5 {
        let up = 1 + i;
        let up_next = 1 + (i + 1) % 5;
        let low = 6 + i;
        let low_next = 6 + (i + 1) % 5;
        edges.push((0, up));
        edges.push((up, up_next));
        edges.push((up, low));
        edges.push((up, low_next));
        edges.push((low, low_next));
        edges.push((low, 11));
    }
    Graph::from_edges(12, edges).expect("valid construction")
}

/// Cubic Hamiltonian graph in LCF notation `[offsets]^repeats`: the cycle
/// `0 - 1 - ... - (N-1)` with `N = offsets.len() * repeats`, plus a chord
/// from `v` to `v + offsets[v mod m]` (mod `N`).
///
/// Rejects offsets that produce loops, chords that coincide with cycle
/// edges, and chord patterns that are not an involution (some vertex would
/// get a second chord).
pub fn lcf_graph(offsets: &[i64], repeats: usize) -> Result<Graph, GraphError> {
    let invalid = |reason: String| GraphError::InvalidParameter {
        family: "lcf".to_string(),
        reason,
    };
    let m = offsets.len();
    if m == 0 || repeats == 0 {
        return Err(invalid("empty LCF code".to_string()));
    }
    let n = m * repeats;
    if n < 3 {
        return Err(invalid(format!("{n} vertices cannot carry a Hamiltonian cycle")));
    }
    let n_i = n as i64;
    let partner = |v: usize| -> usize { (v as i64 + offsets[v % m]).rem_euclid(n_i) as usize };
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    for v in 0..n {
        let w = partner(v);
        if w == v {
            return Err(invalid(format!("offset at vertex {v} makes a loop")));
        }
        if w == (v + 1) % n || v == (w + 1) % n {
            return Err(invalid(format!(
                "chord {{{v}, {w}}} duplicates a cycle edge"
            )));
        }
        if partner(w) != v {
            return Err(invalid(format!(
                "chord from {v} lands on {w}, whose own chord goes to {}",
                partner(w)
            )));
        }
        if v < w {
            edges.push((v, w));
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::distance_matrix;

    fn props(g: &Graph) -> (usize, usize, Option<usize>) {
        (g.n(), g.edge_count(), g.girth())
    }

    #[test]
    fn small_families() {
        let c5 = build_named("cycle", &[5]).unwrap();
        assert_eq!((c5.n(), c5.edge_count()), (5, 5));
        assert_eq!(distance_matrix(&c5).diameter(), Some(2));
        let e3 = build_named("E", &[3]).unwrap();
        assert_eq!((e3.n(), e3.edge_count()), (3, 0));
        assert_eq!(build_named("K", &[1]).unwrap(), Graph::discrete(1));
    }

    #[test]
    fn bad_names_and_parameters() {
        assert!(matches!(build_named("cube", &[]), Err(GraphError::UnknownFamily(_))));
        assert!(matches!(
            build_named("C", &[2]),
            Err(GraphError::InvalidParameter { .. })
        ));
        assert!(matches!(
            build_named("K", &[0]),
            Err(GraphError::InvalidParameter { .. })
        ));
        assert!(matches!(
            build_named("petersen", &[3]),
            Err(GraphError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn aliases_are_case_insensitive() {
        assert_eq!(canonical_family("Petersen"), Some("petersen"));
        assert_eq!(canonical_family("Moebius-Kantor"), Some("moebius_kantor"));
        assert_eq!(canonical_family("EMPTY"), Some("discrete"));
    }

    #[test]
    fn cubic_named_graphs() {
        let cases = [
            ("petersen", 10, 5),
            ("heawood", 14, 6),
            ("pappus", 18, 6),
            ("moebius_kantor", 16, 6),
            ("tutte_coxeter", 30, 8),
            ("dodecahedral", 20, 5),
        ];
        for (name, n, girth) in cases {
            let g = build_named(name, &[]).unwrap();
            assert!(g.is_regular(3), "{name}");
            assert!(g.is_connected(), "{name}");
            assert_eq!(props(&g), (n, 3 * n / 2, Some(girth)), "{name}");
        }
    }

    #[test]
    fn diameters_of_named_graphs() {
        let diam = |name| distance_matrix(&build_named(name, &[]).unwrap()).diameter();
        assert_eq!(diam("petersen"), Some(2));
        assert_eq!(diam("heawood"), Some(3));
        assert_eq!(diam("pappus"), Some(4));
        assert_eq!(diam("moebius_kantor"), Some(4));
        assert_eq!(diam("tutte_coxeter"), Some(4));
        assert_eq!(diam("dodecahedral"), Some(5));
        assert_eq!(diam("icosahedral"), Some(3));
    }

    #[test]
    fn icosahedron_shape() {
        let g = icosahedral();
        assert_eq!((g.n(), g.edge_count()), (12, 30));
        assert!(g.is_regular(5));
        let d = distance_matrix(&g);
        for x in 0..12 {
            let mut counts = [0usize; 4];
            for y in 0..12 {
                counts[d.get(x, y).finite().unwrap() as usize] += 1;
            }
            assert_eq!(counts, [1, 5, 5, 1]);
        }
    }

    #[test]
    fn lcf_validation() {
        let g = lcf_graph(&[5, -5], 4).unwrap();
        assert_eq!((g.n(), g.edge_count()), (8, 12));
        assert!(g.is_regular(3));
        assert!(lcf_graph(&[2], 3).is_err());
        assert!(lcf_graph(&[0], 4).is_err());
        assert!(lcf_graph(&[3], 5).is_err());
        assert!(lcf_graph(&[], 5).is_err());
    }
}
