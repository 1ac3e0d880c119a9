use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, Context as _, Result};
use maghom_core::chain::{chain_rank_table, Metric};
use maghom_core::corpus;
use maghom_core::dsl::parse_edge_list;
use maghom_core::graph::Graph;
use maghom_core::homology::{
    compute_homology, counting_series, magnitude_by_counting, magnitude_by_euler,
    magnitude_by_inverse_series, BigradedGroup, HomologyOptions,
};
use maghom_core::series::first_difference;
use maghom_core::verify::{self, CheckReport, Verdict, VerifyError};
use serde::Serialize;

use crate::args::{CheckName, Cli, Command, EngineArgs, Format, SeriesMethod, SweepReport};
use crate::cache::Cache;
use crate::input::{resolve_graph, GraphInput};
use crate::render::{self, NamedSeries, SeriesJson};
use crate::{Exit, ResourceGuard, UsageError};

struct Ctx<'a> {
    format: Format,
    max_trails: u128,
    cache: Option<Cache>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    /// Homology from the cache when a valid record exists, otherwise
    /// computed and stored.
    fn homology(&mut self, g: &Graph, lmax: usize, opts: &HomologyOptions) -> Result<BigradedGroup> {
        if let Some(cache) = &self.cache {
            match cache.lookup(g, lmax, opts) {
                Ok(Some(t)) => return Ok(t),
                Ok(None) => {}
                Err(e) => writeln!(self.err, "warning: cache read failed: {e}")?,
            }
        }
        let t = compute_homology(g, lmax, opts)?;
        if let Some(cache) = &self.cache {
            if let Err(e) = cache.store(g, opts, &t) {
                writeln!(self.err, "warning: cache write failed: {e}")?;
            }
        }
        Ok(t)
    }

    fn options(&self, engine: &EngineArgs) -> HomologyOptions {
        HomologyOptions {
            torsion: engine.torsion,
            method: engine.method.into(),
            max_trails: self.max_trails,
            ..HomologyOptions::default()
        }
    }

    fn guard(&self, t: &BigradedGroup) -> ResourceGuard {
        ResourceGuard {
            computed_through: t.complete_through(),
            max_trails: self.max_trails,
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<Exit> {
    let cache = if cli.no_cache { None } else { Cache::from_env() };
    let mut ctx = Ctx {
        format: cli.format,
        max_trails: cli.max_trails,
        cache,
        out,
        err,
    };
    match cli.command {
        Command::Homology { graph, engine } => homology(&mut ctx, &graph, &engine),
        Command::Chains { graph, lmax } => chains(&mut ctx, &graph, lmax),
        Command::Magnitude {
            graph,
            lmax,
            method,
        } => magnitude(&mut ctx, &graph, lmax, method),
        Command::Verify {
            check,
            graphs,
            gset,
            hset,
            vmap,
            lmax,
            method,
        } => {
            let opts = HomologyOptions {
                torsion: true,
                method: method.into(),
                max_trails: ctx.max_trails,
                ..HomologyOptions::default()
            };
            let report = match run_check(check, &graphs, gset, hset, vmap, lmax, &opts) {
                Err(e) => match e.downcast::<VerifyError>() {
                    Ok(VerifyError::ResourceGuard { graph, through }) => {
                        return Err(ResourceGuard {
                            computed_through: through,
                            max_trails: ctx.max_trails,
                        })
                        .with_context(|| format!("while computing the homology of {graph}"));
                    }
                    Ok(other) => return Err(other.into()),
                    Err(e) => return Err(e),
                },
                Ok(r) => r,
            };
            let text = match ctx.format {
                Format::Pretty => report.to_string(),
                Format::Csv => render::check_csv(&report),
                Format::Json => render::check_json(&report),
            };
            ctx.out.write_all(text.as_bytes())?;
            Ok(match report.verdict {
                Verdict::Pass | Verdict::PassRanksOnly => Exit::Ok,
                Verdict::Fail => Exit::Fail,
                Verdict::Inapplicable { .. } => Exit::Inapplicable,
            })
        }
        Command::Sweep {
            max_vertices,
            lmax,
            report,
            corpus,
            method,
        } => {
            let opts = HomologyOptions {
                torsion: true,
                method: method.into(),
                max_trails: ctx.max_trails,
                ..HomologyOptions::default()
            };
            sweep(&mut ctx, max_vertices, lmax, report, corpus.as_deref(), &opts)
        }
    }
}

fn homology(ctx: &mut Ctx, arg: &str, engine: &EngineArgs) -> Result<Exit> {
    let input = resolve_graph(arg)?;
    let g = &input.graph;
    let opts = ctx.options(engine);
    let table = ctx.homology(g, engine.lmax, &opts)?;
    let counting = magnitude_by_counting(g, engine.lmax);
    let inverse = magnitude_by_inverse_series(g, engine.lmax).ok();
    let euler = magnitude_by_euler(&table).ok();
    if let Some(e) = &euler {
        if let Some(l) = first_difference(e, &counting) {
            bail!(
                "internal error: Euler characteristic {} differs from the counting formula {} at q^{l}",
                e.coeff(l),
                counting.coeff(l)
            );
        }
    }
    let text = match ctx.format {
        Format::Pretty => render::homology_pretty(&table),
        Format::Csv => render::homology_csv(&table),
        Format::Json => {
            let series = SeriesJson::from_series(Some(&counting), inverse.as_ref(), euler.as_ref());
            render::homology_json(g, &table, &series)
        }
    };
    ctx.out.write_all(text.as_bytes())?;
    if !table.is_complete() {
        return Err(ctx.guard(&table).into());
    }
    Ok(Exit::Ok)
}

fn chains(ctx: &mut Ctx, arg: &str, lmax: usize) -> Result<Exit> {
    let input = resolve_graph(arg)?;
    let counts = chain_rank_table(&Metric::new(&input.graph), lmax);
    let text = match ctx.format {
        Format::Pretty => render::chains_pretty(&counts),
        Format::Csv => render::chains_csv(&counts),
        Format::Json => render::chains_json(&input.graph, &counts),
    };
    ctx.out.write_all(text.as_bytes())?;
    Ok(Exit::Ok)
}

fn magnitude(ctx: &mut Ctx, arg: &str, lmax: usize, method: SeriesMethod) -> Result<Exit> {
    let input = resolve_graph(arg)?;
    let g = &input.graph;
    let want = |m: SeriesMethod| method == m || method == SeriesMethod::All;
    let counting = want(SeriesMethod::Counting)
        .then(|| counting_series(&chain_rank_table(&Metric::new(g), lmax)));
    let inverse = if want(SeriesMethod::Inverse) {
        Some(magnitude_by_inverse_series(g, lmax)?)
    } else {
        None
    };
    let mut guard = None;
    let euler = if want(SeriesMethod::Euler) {
        let opts = HomologyOptions {
            max_trails: ctx.max_trails,
            ..HomologyOptions::default()
        };
        let table = ctx.homology(g, lmax, &opts)?;
        if table.is_complete() {
            Some(magnitude_by_euler(&table)?)
        } else {
            guard = Some(ctx.guard(&table));
            None
        }
    } else {
        None
    };
    let named: Vec<NamedSeries> = [
        ("counting", counting.as_ref()),
        ("inverse", inverse.as_ref()),
        ("euler", euler.as_ref()),
    ]
    .into_iter()
    .filter_map(|(name, s)| s.map(|series| NamedSeries { name, series }))
    .collect();
    let agree = (named.len() > 1).then(|| {
        named
            .windows(2)
            .all(|w| w[0].series.coeffs() == w[1].series.coeffs())
    });
    let text = match ctx.format {
        Format::Pretty => render::magnitude_pretty(&named, agree),
        Format::Csv => render::magnitude_csv(&named),
        Format::Json => {
            let series = SeriesJson::from_series(counting.as_ref(), inverse.as_ref(), euler.as_ref());
            render::magnitude_json(g, lmax, &series, agree)
        }
    };
    ctx.out.write_all(text.as_bytes())?;
    if let Some(g) = guard {
        return Err(g.into());
    }
    if agree == Some(false) {
        bail!("internal error: magnitude methods disagree");
    }
    Ok(Exit::Ok)
}

fn one_graph(graphs: &[String], check: &str) -> Result<GraphInput> {
    match graphs {
        [g] => Ok(resolve_graph(g)?),
        _ => Err(UsageError(format!("`{check}` takes one graph, got {}", graphs.len())).into()),
    }
}

fn two_graphs(graphs: &[String], check: &str) -> Result<(GraphInput, GraphInput)> {
    match graphs {
        [g, h] => Ok((resolve_graph(g)?, resolve_graph(h)?)),
        _ => Err(UsageError(format!("`{check}` takes two graphs, got {}", graphs.len())).into()),
    }
}

fn run_check(
    check: CheckName,
    graphs: &[String],
    gset: Option<Vec<usize>>,
    hset: Option<Vec<usize>>,
    vmap: Option<Vec<usize>>,
    lmax: usize,
    opts: &HomologyOptions,
) -> Result<CheckReport> {
    let report = match check {
        CheckName::Diagonal => {
            let g = one_graph(graphs, "diagonal")?;
            verify::check_diagonal(&g.graph, lmax, opts)?.with_graphs(vec![g.name])
        }
        CheckName::Disjoint => {
            let (g, h) = two_graphs(graphs, "disjoint")?;
            verify::check_disjoint_additivity(&g.graph, &h.graph, lmax, opts)?
                .with_graphs(vec![g.name, h.name])
        }
        CheckName::Kunneth => {
            let (g, h) = two_graphs(graphs, "kunneth")?;
            verify::check_kunneth(&g.graph, &h.graph, lmax, opts)?.with_graphs(vec![g.name, h.name])
        }
        CheckName::MayerVietoris => {
            let x = one_graph(graphs, "mayer-vietoris")?;
            let (Some(gs), Some(hs)) = (gset.or(x.gset), hset.or(x.hset)) else {
                return Err(UsageError(
                    "mayer-vietoris needs --gset and --hset (or `# gset:` / `# hset:` lines in the edge-list file)"
                        .into(),
                )
                .into());
            };
            verify::check_mayer_vietoris(&x.graph, &gs, &hs, lmax, opts)
                .map_err(|e| match e {
                    VerifyError::Graph(g) => anyhow!(UsageError(g.to_string())),
                    other => other.into(),
                })?
                .with_graphs(vec![x.name])
        }
        CheckName::Tree => {
            let g = one_graph(graphs, "tree")?;
            verify::check_tree_formula(&g.graph, lmax, opts)?.with_graphs(vec![g.name])
        }
        CheckName::JoinDiagonal => {
            let (g, h) = two_graphs(graphs, "join-diagonal")?;
            verify::check_join_diagonal(&g.graph, &h.graph, lmax, opts)?
                .with_graphs(vec![g.name, h.name])
        }
        CheckName::Cyclic => {
            let n: usize = match graphs {
                [n] => n
                    .parse()
                    .map_err(|_| UsageError(format!("`cyclic` takes a cycle length, got `{n}`")))?,
                _ => return Err(UsageError("`cyclic` takes one cycle length".into()).into()),
            };
            verify::check_cyclic_patterns(n, lmax, opts)?
        }
        CheckName::SupportBounds => {
            let g = one_graph(graphs, "support-bounds")?;
            verify::check_support_bounds(&g.graph, lmax, opts)?.with_graphs(vec![g.name])
        }
        CheckName::Automorphism => {
            let g = one_graph(graphs, "automorphism")?;
            let map = vmap.ok_or_else(|| UsageError("automorphism needs --map".into()))?;
            verify::check_automorphism_action(&g.graph, &map)
                .map_err(|e| match e {
                    VerifyError::Graph(ge) => anyhow!(UsageError(ge.to_string())),
                    other => other.into(),
                })?
                .with_graphs(vec![g.name])
        }
    };
    Ok(report)
}

#[derive(Debug, Serialize)]
struct TorsionFind {
    k: usize,
    l: usize,
    factors: Vec<u64>,
}

#[derive(Debug, Serialize)]
struct SweepEntry {
    name: String,
    n: usize,
    m: usize,
    /// `ok` or `skipped: <reason>`.
    status: String,
    diagonal: Option<bool>,
    torsion: Vec<TorsionFind>,
}

#[derive(Debug, Serialize)]
struct SweepJson<'a> {
    schema: &'static str,
    report: &'static str,
    lmax: usize,
    graphs: &'a [SweepEntry],
    summary: String,
}

fn load_corpus(dir: Option<&Path>, max_vertices: usize) -> Result<Vec<(String, Graph)>> {
    let mut graphs = match dir {
        None => corpus::builtin()
            .into_iter()
            .map(|c| (c.name, c.graph))
            .collect(),
        Some(dir) => {
            let mut entries: Vec<_> = fs::read_dir(dir)
                .with_context(|| format!("reading corpus directory {}", dir.display()))
                .map_err(|e| UsageError(format!("{e:#}")))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            let mut out = Vec::new();
            for p in entries {
                let text = fs::read_to_string(&p)?;
                let g = parse_edge_list(&text)
                    .map_err(|e| UsageError(format!("{}:{e}", p.display())))?;
                let name = p
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                out.push((name, g));
            }
            out
        }
    };
    graphs.retain(|(_, g)| g.n() <= max_vertices);
    Ok(graphs)
}

fn sweep(
    ctx: &mut Ctx,
    max_vertices: usize,
    lmax: usize,
    report: SweepReport,
    dir: Option<&Path>,
    opts: &HomologyOptions,
) -> Result<Exit> {
    let graphs = load_corpus(dir, max_vertices)?;
    let mut entries = Vec::with_capacity(graphs.len());
    for (name, g) in graphs {
        let mut entry = SweepEntry {
            name,
            n: g.n(),
            m: g.edge_count(),
            status: "ok".into(),
            diagonal: None,
            torsion: Vec::new(),
        };
        let table = ctx.homology(&g, lmax, opts)?;
        if !table.is_complete() {
            entry.status = format!(
                "skipped: resource guard after l = {:?}",
                table.complete_through()
            );
        } else {
            entry.torsion = table
                .torsion_cells()
                .into_iter()
                .map(|c| TorsionFind {
                    k: c.k,
                    l: c.l,
                    factors: c.torsion.factors().unwrap_or_default().to_vec(),
                })
                .collect();
            if !table.torsion_known() {
                entry.status = "ok (torsion partly not computed)".into();
            }
            if report == SweepReport::Diagonal {
                let off = table.cells().filter(|c| c.k != c.l).all(|c| c.is_zero());
                entry.diagonal = Some(off);
            }
        }
        entries.push(entry);
    }
    let skipped = entries.iter().filter(|e| e.status.starts_with("skipped")).count();
    let summary = match report {
        SweepReport::Torsion => {
            let finds = entries.iter().filter(|e| !e.torsion.is_empty()).count();
            if finds == 0 {
                "no torsion found".to_string()
            } else {
                format!("torsion found in {finds} graph(s)")
            }
        }
        SweepReport::Diagonal => {
            let non: Vec<&str> = entries
                .iter()
                .filter(|e| e.diagonal == Some(false))
                .map(|e| e.name.as_str())
                .collect();
            if non.is_empty() {
                "all diagonal".to_string()
            } else {
                format!("not diagonal: {}", non.join(", "))
            }
        }
    };
    let summary = if skipped > 0 {
        format!("{summary} ({skipped} skipped)")
    } else {
        summary
    };
    let text = match ctx.format {
        Format::Json => render::to_json(&SweepJson {
            schema: render::SWEEP_SCHEMA,
            report: match report {
                SweepReport::Torsion => "torsion",
                SweepReport::Diagonal => "diagonal",
            },
            lmax,
            graphs: &entries,
            summary: summary.clone(),
        }),
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::CRLF)
                .from_writer(Vec::new());
            w.write_record(["graph", "n", "m", "status", "diagonal", "torsion"])?;
            for e in &entries {
                w.write_record([
                    e.name.clone(),
                    e.n.to_string(),
                    e.m.to_string(),
                    e.status.clone(),
                    e.diagonal.map(|d| d.to_string()).unwrap_or_default(),
                    torsion_text(&e.torsion),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Pretty => {
            let width = entries.iter().map(|e| e.name.len()).max().unwrap_or(5).max(5);
            let mut s = String::new();
            for e in &entries {
                let result = match (report, e.diagonal) {
                    _ if e.status.starts_with("skipped") => e.status.clone(),
                    (SweepReport::Diagonal, Some(true)) => "diagonal".into(),
                    (SweepReport::Diagonal, _) => "not diagonal".into(),
                    (SweepReport::Torsion, _) if e.torsion.is_empty() => "no torsion".into(),
                    (SweepReport::Torsion, _) => torsion_text(&e.torsion),
                };
                s.push_str(&format!("{:<width$}  n={:<3} {}\n", e.name, e.n, result));
            }
            s.push_str(&summary);
            s.push('\n');
            s
        }
    };
    ctx.out.write_all(text.as_bytes())?;
    if skipped > 0 {
        return Err(ResourceGuard {
            computed_through: None,
            max_trails: ctx.max_trails,
        }
        .into());
    }
    Ok(Exit::Ok)
}

fn torsion_text(finds: &[TorsionFind]) -> String {
    finds
        .iter()
        .map(|t| {
            let f: Vec<String> = t.factors.iter().map(|d| format!("Z/{d}")).collect();
            format!("({},{}): {}", t.k, t.l, f.join(" ⊕ "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}
