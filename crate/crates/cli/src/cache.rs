//! On-disk cache of computed homology tables.
//!
//! One JSON file per graph, named by the graph's content hash, holding a
//! list of records. Readers take a shared lock and writers an exclusive
//! lock on a sibling `.lock` file; writes go through a rename.

use std::fs::{self, File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use maghom_core::graph::Graph;
use maghom_core::homology::{BigradedGroup, HomologyOptions, RankMethod};
use serde::{Deserialize, Serialize};

pub const CACHE_ENV: &str = "MAGHOM_CACHE_DIR";
const RECORD_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub graph_hash: String,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub lmax: usize,
    pub torsion: bool,
    pub method: RankMethod,
    pub table: BigradedGroup,
    pub created_unix: u64,
    pub tool_version: String,
}

fn strength(m: RankMethod) -> u8 {
    match m {
        RankMethod::Modular => 0,
        RankMethod::Auto => 1,
        RankMethod::Exact => 2,
    }
}

impl ResultRecord {
    fn matches_graph(&self, g: &Graph) -> bool {
        self.n == g.n() && self.edges.iter().copied().eq(g.edges())
    }

    /// Whether this record can answer a request for `lmax` rows with `opts`.
    pub fn serves(&self, g: &Graph, lmax: usize, opts: &HomologyOptions) -> bool {
        self.schema == RECORD_SCHEMA
            && self.matches_graph(g)
            && self.lmax >= lmax
            && self.table.complete_through().is_some_and(|l| l >= lmax)
            && (self.torsion || !opts.torsion)
            && strength(self.method) >= strength(opts.method)
    }

    fn covers(&self, other: &ResultRecord) -> bool {
        self.lmax >= other.lmax
            && (self.torsion || !other.torsion)
            && strength(self.method) >= strength(other.method)
    }
}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$MAGHOM_CACHE_DIR`, else `$XDG_CACHE_HOME/maghom`, else
    /// `$HOME/.cache/maghom`.
    pub fn from_env() -> Option<Self> {
        let var = |k: &str| std::env::var_os(k).filter(|v| !v.is_empty()).map(PathBuf::from);
        var(CACHE_ENV)
            .or_else(|| var("XDG_CACHE_HOME").map(|p| p.join("maghom")))
            .or_else(|| var("HOME").map(|p| p.join(".cache").join("maghom")))
            .map(Cache::at)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn paths(&self, g: &Graph) -> (PathBuf, PathBuf) {
        let hash = g.content_hash();
        (
            self.dir.join(format!("{hash}.json")),
            self.dir.join(format!("{hash}.lock")),
        )
    }

    fn read_records(path: &Path) -> io::Result<Vec<ResultRecord>> {
        match fs::read_to_string(path) {
            // unreadable or stale files are treated as empty
            Ok(text) => Ok(serde_json::from_str(&text).unwrap_or_default()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    }

    fn lock_file(&self, lock: &Path) -> io::Result<File> {
        fs::create_dir_all(&self.dir)?;
        OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(lock)
    }

    /// A table for `g` valid for `lmax` and `opts`, truncated to `lmax`.
    pub fn lookup(
        &self,
        g: &Graph,
        lmax: usize,
        opts: &HomologyOptions,
    ) -> io::Result<Option<BigradedGroup>> {
        let (data, lock) = self.paths(g);
        if !data.exists() {
            return Ok(None);
        }
        let lock = self.lock_file(&lock)?;
        lock.lock_shared()?;
        let records = Self::read_records(&data);
        lock.unlock()?;
        let hit = records?.into_iter().find(|r| r.serves(g, lmax, opts));
        Ok(hit.map(|r| {
            let t = r.table.truncate(lmax);
            if opts.torsion {
                t
            } else {
                t.without_torsion()
            }
        }))
    }

    /// Stores the fully computed rows of `table`. Records made redundant by
    /// the new one are dropped.
    pub fn store(&self, g: &Graph, opts: &HomologyOptions, table: &BigradedGroup) -> io::Result<()> {
        let Some(through) = table.complete_through() else {
            return Ok(());
        };
        let record = ResultRecord {
            schema: RECORD_SCHEMA,
            graph_hash: g.content_hash(),
            n: g.n(),
            edges: g.edges().collect(),
            lmax: through,
            torsion: opts.torsion && table.truncate(through).torsion_known(),
            method: opts.method,
            table: table.truncate(through),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        };
        let (data, lock) = self.paths(g);
        let lock = self.lock_file(&lock)?;
        lock.lock()?;
        let result = (|| {
            let mut records = Self::read_records(&data)?;
            if records.iter().any(|r| r.matches_graph(g) && r.covers(&record)) {
                return Ok(());
            }
            records.retain(|r| !record.covers(r));
            records.push(record);
            let tmp = data.with_extension("json.tmp");
            fs::write(&tmp, serde_json::to_vec(&records).map_err(io::Error::other)?)?;
            fs::rename(&tmp, &data)
        })();
        lock.unlock()?;
        result
    }
}
