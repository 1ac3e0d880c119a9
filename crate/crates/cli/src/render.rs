//! Table, series and report rendering.

use maghom_core::chain::ChainCounts;
use maghom_core::graph::Graph;
use maghom_core::homology::{BigradedGroup, Cell, Provenance};
use maghom_core::series::PowerSeries;
use maghom_core::verify::CheckReport;
use serde::Serialize;

pub const HOMOLOGY_SCHEMA: &str = "maghom.homology/1";
pub const CHAINS_SCHEMA: &str = "maghom.chains/1";
pub const MAGNITUDE_SCHEMA: &str = "maghom.magnitude/1";
pub const CHECK_SCHEMA: &str = "maghom.check/1";
pub const SWEEP_SCHEMA: &str = "maghom.sweep/1";

/// Text of one homology cell: blank for zero, `?` when not computed,
/// `r ⊕ Z/d ...` when torsion is present.
pub fn cell_text(c: &Cell) -> String {
    match (c.rank, c.group()) {
        (None, _) => "?".to_string(),
        (Some(_), Some(g)) if g.is_zero() => String::new(),
        (Some(_), Some(g)) => g.to_string(),
        (Some(0), None) => String::new(),
        (Some(r), None) => r.to_string(),
    }
}

/// Aligned text grid with rows `l` and columns `k`.
fn grid(lmax: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let mut rows: Vec<Vec<String>> = Vec::with_capacity(lmax + 2);
    let mut header = vec!["l\\k".to_string()];
    header.extend((0..=lmax).map(|k| k.to_string()));
    rows.push(header);
    for l in 0..=lmax {
        let mut row = vec![l.to_string()];
        row.extend((0..=lmax).map(|k| if k <= l { cell(k, l) } else { String::new() }));
        rows.push(row);
    }
    let cols = lmax + 2;
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{s:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn csv_grid(lmax: usize, cell: impl Fn(usize, usize) -> String) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let mut header = vec!["l\\k".to_string()];
    header.extend((0..=lmax).map(|k| k.to_string()));
    w.write_record(&header).expect("in-memory write");
    for l in 0..=lmax {
        let mut row = vec![l.to_string()];
        row.extend((0..=lmax).map(|k| if k <= l { cell(k, l) } else { String::new() }));
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

pub fn homology_pretty(h: &BigradedGroup) -> String {
    grid(h.lmax(), |k, l| cell_text(h.cell(k, l).expect("cell in range")))
}

pub fn homology_csv(h: &BigradedGroup) -> String {
    csv_grid(h.lmax(), |k, l| cell_text(h.cell(k, l).expect("cell in range")))
}

pub fn chains_pretty(c: &ChainCounts) -> String {
    grid(c.lmax(), |k, l| count_text(c.get(k, l)))
}

pub fn chains_csv(c: &ChainCounts) -> String {
    csv_grid(c.lmax(), |k, l| count_text(c.get(k, l)))
}

fn count_text(n: u128) -> String {
    if n == 0 {
        String::new()
    } else {
        n.to_string()
    }
}

#[derive(Debug, Serialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
struct CellJson {
    k: usize,
    l: usize,
    rank: Option<u64>,
    torsion: Option<Vec<u64>>,
    method: Option<&'static str>,
}

/// The three magnitude series; any may be missing.
#[derive(Debug, Default, Serialize)]
pub struct SeriesJson {
    pub counting: Option<Vec<i128>>,
    pub inverse: Option<Vec<i128>>,
    pub euler: Option<Vec<i128>>,
}

impl SeriesJson {
    pub fn from_series(
        counting: Option<&PowerSeries>,
        inverse: Option<&PowerSeries>,
        euler: Option<&PowerSeries>,
    ) -> Self {
        let v = |s: Option<&PowerSeries>| s.map(|s| s.coeffs().to_vec());
        SeriesJson {
            counting: v(counting),
            inverse: v(inverse),
            euler: v(euler),
        }
    }
}

#[derive(Debug, Serialize)]
struct HomologyJson<'a> {
    schema: &'static str,
    graph: GraphJson,
    lmax: usize,
    cells: Vec<CellJson>,
    series: &'a SeriesJson,
}

pub fn homology_json(g: &Graph, h: &BigradedGroup, series: &SeriesJson) -> String {
    let cells = h
        .cells()
        .map(|c| CellJson {
            k: c.k,
            l: c.l,
            rank: c.rank,
            torsion: c.torsion.factors().map(<[u64]>::to_vec),
            method: c.method.map(Provenance::as_str),
        })
        .collect();
    to_json(&HomologyJson {
        schema: HOMOLOGY_SCHEMA,
        graph: g.into(),
        lmax: h.lmax(),
        cells,
        series,
    })
}

#[derive(Debug, Serialize)]
struct CountJson {
    k: usize,
    l: usize,
    count: u128,
}

#[derive(Debug, Serialize)]
struct ChainsJson {
    schema: &'static str,
    graph: GraphJson,
    lmax: usize,
    cells: Vec<CountJson>,
}

pub fn chains_json(g: &Graph, c: &ChainCounts) -> String {
    let cells = (0..=c.lmax())
        .flat_map(|l| (0..=l).map(move |k| (k, l)))
        .map(|(k, l)| CountJson {
            k,
            l,
            count: c.get(k, l),
        })
        .collect();
    to_json(&ChainsJson {
        schema: CHAINS_SCHEMA,
        graph: g.into(),
        lmax: c.lmax(),
        cells,
    })
}

/// Named series for the magnitude command.
pub struct NamedSeries<'a> {
    pub name: &'static str,
    pub series: &'a PowerSeries,
}

pub fn magnitude_pretty(series: &[NamedSeries], agree: Option<bool>) -> String {
    let mut out = String::new();
    let width = series.iter().map(|s| s.name.len()).max().unwrap_or(0) + 1;
    for s in series {
        out.push_str(&format!("{:<width$} {}\n", format!("{}:", s.name), s.series));
    }
    if let Some(first) = series.first() {
        let coeffs: Vec<String> = first.series.coeffs().iter().map(i128::to_string).collect();
        out.push_str(&format!("coefficients: {}\n", coeffs.join(", ")));
    }
    match agree {
        Some(true) => out.push_str("methods agree\n"),
        Some(false) => out.push_str("METHODS DISAGREE\n"),
        None => {}
    }
    out
}

pub fn magnitude_csv(series: &[NamedSeries]) -> String {
    let lmax = series.iter().map(|s| s.series.lmax()).max().unwrap_or(0);
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    let mut header = vec!["method".to_string()];
    header.extend((0..=lmax).map(|l| l.to_string()));
    w.write_record(&header).expect("in-memory write");
    for s in series {
        let mut row = vec![s.name.to_string()];
        row.extend(s.series.coeffs().iter().map(i128::to_string));
        row.resize(lmax + 2, String::new());
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

#[derive(Debug, Serialize)]
struct MagnitudeJson<'a> {
    schema: &'static str,
    graph: GraphJson,
    lmax: usize,
    series: &'a SeriesJson,
    agree: Option<bool>,
}

pub fn magnitude_json(g: &Graph, lmax: usize, series: &SeriesJson, agree: Option<bool>) -> String {
    to_json(&MagnitudeJson {
        schema: MAGNITUDE_SCHEMA,
        graph: g.into(),
        lmax,
        series,
        agree,
    })
}

#[derive(Debug, Serialize)]
struct CheckJson<'a> {
    schema: &'static str,
    #[serde(flatten)]
    report: &'a CheckReport,
}

pub fn check_json(r: &CheckReport) -> String {
    to_json(&CheckJson {
        schema: CHECK_SCHEMA,
        report: r,
    })
}

pub fn check_csv(r: &CheckReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(["check", "k", "l", "expected", "actual", "ok"])
        .expect("in-memory write");
    for c in &r.cells {
        w.write_record([
            r.name.clone(),
            c.k.to_string(),
            c.l.to_string(),
            c.expected.to_string(),
            c.actual.to_string(),
            c.ok.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use maghom_core::abelian::AbelianGroup;

    #[test]
    fn cells() {
        let h = BigradedGroup::from_groups(1, |k, l| match (k, l) {
            (0, 0) => AbelianGroup::free(3),
            (0, 1) => AbelianGroup::new(2, [2]),
            _ => AbelianGroup::zero(),
        });
        let csv = homology_csv(&h);
        assert_eq!(csv, "l\\k,0,1\r\n0,3,\r\n1,2 ⊕ Z/2,\r\n");
        let pretty = homology_pretty(&h);
        assert_eq!(pretty, "l\\k        0  1\n  0        3\n  1  2 ⊕ Z/2\n");
    }

    #[test]
    fn csv_quotes_when_needed() {
        let s = PowerSeries::new(vec![1, -2]);
        let csv = magnitude_csv(&[NamedSeries {
            name: "counting",
            series: &s,
        }]);
        assert_eq!(csv, "method,0,1\r\ncounting,1,-2\r\n");
    }
}
