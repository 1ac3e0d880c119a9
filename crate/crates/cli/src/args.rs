use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use maghom_core::homology::RankMethod;

/// Magnitude homology of graphs.
///
/// Graphs are given as an expression (`"C(5) + K(3)"`, `"E(2) * E(2)"`,
/// `"K(2) box K(2)"`, `"wedge(C(5),0,C(5),0)"`), an LCF code
/// (`"[5,-5]^7"`), a family name (`petersen`) or the path of an edge-list
/// file. Note that `*` is the join.
#[derive(Debug, Parser)]
#[command(name = "maghom", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Pretty, global = true)]
    pub format: Format,

    /// Stop enumerating generators once this many have been produced in total.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    pub max_trails: u128,

    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Exact,
    Modular,
}

impl From<MethodArg> for RankMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => RankMethod::Auto,
            MethodArg::Exact => RankMethod::Exact,
            MethodArg::Modular => RankMethod::Modular,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesMethod {
    Counting,
    Inverse,
    Euler,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepReport {
    Torsion,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckName {
    Diagonal,
    Disjoint,
    Kunneth,
    MayerVietoris,
    Tree,
    JoinDiagonal,
    Cyclic,
    SupportBounds,
    Automorphism,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    /// Largest length l to compute.
    #[arg(long, default_value_t = 6)]
    pub lmax: usize,

    /// Also compute torsion via Smith normal form.
    #[arg(long)]
    pub torsion: bool,

    /// How boundary ranks are computed.
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ranks (and torsion) of MH_{k,l}, rows l and columns k.
    Homology {
        graph: String,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Number of generators of MC_{k,l}.
    Chains {
        graph: String,
        #[arg(long, default_value_t = 6)]
        lmax: usize,
    },
    /// Magnitude as a power series in q.
    Magnitude {
        graph: String,
        #[arg(long, default_value_t = 6)]
        lmax: usize,
        #[arg(long, value_enum, default_value_t = SeriesMethod::All)]
        method: SeriesMethod,
    },
    /// Run a structural check; exit 0 pass, 1 fail, 2 inapplicable.
    Verify {
        #[arg(value_enum)]
        check: CheckName,
        /// Graphs the check needs (for `cyclic`, the cycle length).
        graphs: Vec<String>,
        /// Vertices of G for mayer-vietoris, comma separated.
        #[arg(long, value_delimiter = ',')]
        gset: Option<Vec<usize>>,
        /// Vertices of H for mayer-vietoris, comma separated.
        #[arg(long, value_delimiter = ',')]
        hset: Option<Vec<usize>>,
        /// Vertex permutation for automorphism, comma separated.
        #[arg(long = "map", value_delimiter = ',')]
        vmap: Option<Vec<usize>>,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        /// Compute ranks by this method (default exact).
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
    },
    /// Summarise a corpus of graphs.
    Sweep {
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
        #[arg(long, default_value_t = 4)]
        lmax: usize,
        #[arg(long, value_enum, default_value_t = SweepReport::Torsion)]
        report: SweepReport,
        /// Directory of edge-list files instead of the built-in list.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
}
