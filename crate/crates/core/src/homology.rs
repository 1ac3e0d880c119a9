//! Magnitude homology tables and the magnitude power series.
//!
//! `rank MH_{k,l} = |MC_{k,l}| - rank ∂_{k,l} - rank ∂_{k+1,l}`, and the
//! torsion of `MH_{k,l}` is read off the invariant factors of `∂_{k+1,l}`.
//! Boundary ranks are computed on the endpoint blocks of the complex.

use std::fmt;

use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::AbelianGroup;
use crate::chain::{boundary_blocks, chain_rank_table, BasisCache, ChainCounts, Metric};
use crate::graph::Graph;
use crate::linalg::{
    random_prime_pair, rank_exact, rank_modular, smith_normal_form_guarded, SnfGuard,
    SparseIntMatrix,
};
use crate::series::PowerSeries;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("homology table is incomplete: cell ({k}, {l}) was not computed")]
    Incomplete { k: usize, l: usize },
    #[error("negative rank {value} at ({k}, {l}); this is a bug")]
    NegativeRank { k: usize, l: usize, value: i128 },
    #[error("invariant factor {0} does not fit in 64 bits")]
    Overflow(String),
    #[error("coefficient overflow while expanding the magnitude series")]
    SeriesOverflow,
}

/// How boundary ranks are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    /// Two random primes; exact elimination if they disagree.
    #[default]
    Auto,
    /// Fraction-free elimination over the integers.
    Exact,
    /// One random prime, no cross-check.
    Modular,
}

impl fmt::Display for RankMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RankMethod::Auto => "auto",
            RankMethod::Exact => "exact",
            RankMethod::Modular => "modular",
        })
    }
}

impl std::str::FromStr for RankMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(RankMethod::Auto),
            "exact" => Ok(RankMethod::Exact),
            "modular" => Ok(RankMethod::Modular),
            other => Err(format!("unknown rank method `{other}`")),
        }
    }
}

/// Which rank computation produced a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Both boundary ranks came from exact elimination (or Smith form).
    Exact,
    /// Two primes agreed on every block.
    Modular2,
    /// A single prime.
    Modular,
}

impl Provenance {
    fn weakest(self, other: Provenance) -> Provenance {
        use Provenance::*;
        match (self, other) {
            (Modular, _) | (_, Modular) => Modular,
            (Modular2, _) | (_, Modular2) => Modular2,
            _ => Exact,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Modular2 => "modular2",
            Provenance::Modular => "modular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomologyOptions {
    pub torsion: bool,
    pub method: RankMethod,
    /// Upper bound on the number of generators enumerated over all rows.
    pub max_trails: u128,
    /// Seed for choosing primes.
    pub seed: u64,
    pub snf_guard: SnfGuard,
}

impl HomologyOptions {
    pub const DEFAULT_MAX_TRAILS: u128 = 10_000_000;
}

impl Default for HomologyOptions {
    fn default() -> Self {
        HomologyOptions {
            torsion: false,
            method: RankMethod::Auto,
            max_trails: Self::DEFAULT_MAX_TRAILS,
            seed: 0x6d61_6768_6f6d,
            snf_guard: SnfGuard::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "factors", rename_all = "snake_case")]
pub enum Torsion {
    Computed(Vec<u64>),
    NotComputed,
}

impl Torsion {
    pub fn factors(&self) -> Option<&[u64]> {
        match self {
            Torsion::Computed(f) => Some(f),
            Torsion::NotComputed => None,
        }
    }
}

/// One `(k, l)` entry of a homology table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub k: usize,
    pub l: usize,
    /// `None` when the row exceeded the resource guard.
    pub rank: Option<u64>,
    pub torsion: Torsion,
    pub method: Option<Provenance>,
}

impl Cell {
    /// A cell with known rank and torsion, marked exact.
    pub fn known(k: usize, l: usize, group: AbelianGroup) -> Cell {
        Cell {
            k,
            l,
            rank: Some(group.rank),
            torsion: Torsion::Computed(group.torsion),
            method: Some(Provenance::Exact),
        }
    }

    /// A cell whose rank is known and whose torsion is not.
    pub fn rank_only(k: usize, l: usize, rank: u64) -> Cell {
        Cell {
            k,
            l,
            rank: Some(rank),
            torsion: Torsion::NotComputed,
            method: Some(Provenance::Exact),
        }
    }

    pub fn not_computed(k: usize, l: usize) -> Cell {
        Cell {
            k,
            l,
            rank: None,
            torsion: Torsion::NotComputed,
            method: None,
        }
    }

    /// The cell as an abelian group, when both rank and torsion are known.
    pub fn group(&self) -> Option<AbelianGroup> {
        let rank = self.rank?;
        let torsion = self.torsion.factors()?;
        Some(AbelianGroup {
            rank,
            torsion: torsion.to_vec(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.rank == Some(0) && self.torsion.factors().is_none_or(|t| t.is_empty())
    }
}

/// The ranks (and possibly torsion) of `MH_{k,l}(G)` for `k <= l <= lmax`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BigradedGroup {
    lmax: usize,
    /// `rows[l][k]`.
    rows: Vec<Vec<Cell>>,
}

impl BigradedGroup {
    /// Builds a table cell by cell for `k <= l <= lmax`.
    pub fn from_fn(lmax: usize, cell: impl Fn(usize, usize) -> Cell) -> Self {
        let rows = (0..=lmax)
            .map(|l| (0..=l).map(|k| cell(k, l)).collect())
            .collect();
        BigradedGroup { lmax, rows }
    }

    /// Builds a table from explicit groups, marking every cell exact.
    pub fn from_groups(lmax: usize, groups: impl Fn(usize, usize) -> AbelianGroup) -> Self {
        Self::from_fn(lmax, |k, l| Cell::known(k, l, groups(k, l)))
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    pub fn cell(&self, k: usize, l: usize) -> Option<&Cell> {
        self.rows.get(l).and_then(|r| r.get(k))
    }

    /// Rank of `MH_{k,l}`; zero outside `k <= l`, `None` if not computed.
    pub fn rank(&self, k: usize, l: usize) -> Option<u64> {
        if k > l {
            return Some(0);
        }
        self.cell(k, l).and_then(|c| c.rank)
    }

    pub fn cells(&self) -> impl Iterator<Item = &Cell> + '_ {
        self.rows.iter().flatten()
    }

    /// True when every rank is known.
    pub fn is_complete(&self) -> bool {
        self.cells().all(|c| c.rank.is_some())
    }

    /// True when torsion was computed for every cell.
    pub fn torsion_known(&self) -> bool {
        self.cells().all(|c| c.torsion.factors().is_some())
    }

    /// Cells with nonempty torsion.
    pub fn torsion_cells(&self) -> Vec<&Cell> {
        self.cells()
            .filter(|c| c.torsion.factors().is_some_and(|t| !t.is_empty()))
            .collect()
    }

    /// The table restricted to rows `l <= lmax`.
    pub fn truncate(&self, lmax: usize) -> BigradedGroup {
        let lmax = lmax.min(self.lmax);
        BigradedGroup {
            lmax,
            rows: self.rows[..=lmax].to_vec(),
        }
    }

    /// The same ranks with torsion forgotten.
    pub fn without_torsion(&self) -> BigradedGroup {
        let mut out = self.clone();
        for c in out.rows.iter_mut().flatten() {
            c.torsion = Torsion::NotComputed;
        }
        out
    }

    /// Largest `l` such that every row up to `l` is fully computed.
    pub fn complete_through(&self) -> Option<usize> {
        self.rows
            .iter()
            .position(|r| r.iter().any(|c| c.rank.is_none()))
            .map_or(Some(self.lmax), |p| p.checked_sub(1))
    }
}

/// Rank of a boundary block by the requested method.
fn block_rank(m: &SparseIntMatrix, method: RankMethod, primes: (u64, u64)) -> (usize, Provenance) {
    if m.nnz() == 0 {
        return (0, Provenance::Exact);
    }
    match method {
        RankMethod::Exact => (rank_exact(m), Provenance::Exact),
        RankMethod::Modular => (rank_modular(m, primes.0), Provenance::Modular),
        RankMethod::Auto => {
            let a = rank_modular(m, primes.0);
            let b = rank_modular(m, primes.1);
            if a == b {
                (a, Provenance::Modular2)
            } else {
                (rank_exact(m), Provenance::Exact)
            }
        }
    }
}

/// What is known about one boundary map `∂_{k,l}`.
struct BoundaryInfo {
    rank: usize,
    provenance: Provenance,
    /// Invariant factors > 1, `None` if not computed.
    torsion: Option<Vec<u64>>,
}

fn analyse_boundary(
    blocks: &[((u32, u32), SparseIntMatrix)],
    opts: &HomologyOptions,
    primes: (u64, u64),
) -> Result<BoundaryInfo, HomologyError> {
    type BlockResult = Result<(usize, Provenance, Option<Vec<u64>>), HomologyError>;
    let per_block: Vec<BlockResult> = blocks
        .par_iter()
        .map(|(_, m)| {
            if opts.torsion && m.nnz() > 0 {
                if let Ok(snf) = smith_normal_form_guarded(m, opts.snf_guard) {
                    let torsion = snf
                        .torsion()
                        .iter()
                        .map(|d| d.to_u64().ok_or_else(|| HomologyError::Overflow(d.to_string())))
                        .collect::<Result<Vec<_>, _>>()?;
                    return Ok((snf.rank, Provenance::Exact, Some(torsion)));
                }
                let (rank, prov) = block_rank(m, opts.method, primes);
                return Ok((rank, prov, None));
            }
            let (rank, prov) = block_rank(m, opts.method, primes);
            let torsion = opts.torsion.then(Vec::new);
            Ok((rank, prov, torsion))
        })
        .collect();
    let mut info = BoundaryInfo {
        rank: 0,
        provenance: Provenance::Exact,
        torsion: opts.torsion.then(Vec::new),
    };
    for r in per_block {
        let (rank, prov, torsion) = r?;
        info.rank += rank;
        info.provenance = info.provenance.weakest(prov);
        info.torsion = match (info.torsion, torsion) {
            (Some(mut acc), Some(t)) => {
                acc.extend(t);
                Some(acc)
            }
            _ => None,
        };
    }
    if let Some(t) = info.torsion.take() {
        info.torsion = Some(AbelianGroup::new(0, t).torsion);
    }
    Ok(info)
}

fn compute_row(
    metric: &Metric,
    counts: &ChainCounts,
    l: usize,
    opts: &HomologyOptions,
    cache: &BasisCache,
) -> Result<Vec<Cell>, HomologyError> {
    let lu = l as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ (l as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let primes = random_prime_pair(&mut rng);
    let bases: Vec<_> = (0..=l).map(|k| cache.get_or_build(metric, k, lu)).collect();
    for (k, b) in bases.iter().enumerate() {
        debug_assert_eq!(b.len() as u128, counts.get(k, l));
    }
    // boundaries[k] describes ∂_{k,l} for k = 1..=l; index 0 is unused
    let boundaries: Vec<BoundaryInfo> = (0..=l)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return Ok(BoundaryInfo {
                    rank: 0,
                    provenance: Provenance::Exact,
                    torsion: Some(Vec::new()),
                });
            }
            let blocks = boundary_blocks(metric, &bases[k], &bases[k - 1]);
            analyse_boundary(&blocks, opts, primes)
        })
        .collect::<Result<_, _>>()?;
    cache.evict_length(lu);

    let mut row = Vec::with_capacity(l + 1);
    for k in 0..=l {
        let incoming = boundaries.get(k + 1);
        let out_rank = if k == 0 { 0 } else { boundaries[k].rank };
        let in_rank = incoming.map_or(0, |b| b.rank);
        let value = bases[k].len() as i128 - out_rank as i128 - in_rank as i128;
        if value < 0 {
            return Err(HomologyError::NegativeRank { k, l, value });
        }
        let mut provenance = if k == 0 {
            Provenance::Exact
        } else {
            boundaries[k].provenance
        };
        if let Some(b) = incoming {
            provenance = provenance.weakest(b.provenance);
        }
        let torsion = if !opts.torsion {
            Torsion::NotComputed
        } else {
            match incoming {
                // MC_{l+1,l} = 0, so the top cell is free
                None => Torsion::Computed(Vec::new()),
                Some(b) => b
                    .torsion
                    .clone()
                    .map_or(Torsion::NotComputed, Torsion::Computed),
            }
        };
        row.push(Cell {
            k,
            l,
            rank: Some(value as u64),
            torsion,
            method: Some(provenance),
        });
    }
    Ok(row)
}

/// Computes `MH_{k,l}(G)` for all `k <= l <= lmax`.
///
/// Rows are computed while the running total of generators stays within
/// `opts.max_trails`; later rows are returned with every cell marked not
/// computed.
pub fn compute_homology(
    g: &Graph,
    lmax: usize,
    opts: &HomologyOptions,
) -> Result<BigradedGroup, HomologyError> {
    let metric = Metric::new(g);
    compute_homology_with(&metric, lmax, opts)
}

pub fn compute_homology_with(
    metric: &Metric,
    lmax: usize,
    opts: &HomologyOptions,
) -> Result<BigradedGroup, HomologyError> {
    let counts = chain_rank_table(metric, lmax);
    let mut budget_rows = 0;
    let mut total: u128 = 0;
    for l in 0..=lmax {
        total = total.saturating_add(counts.row_total(l));
        if total > opts.max_trails {
            break;
        }
        budget_rows = l + 1;
    }
    let cache = BasisCache::new();
    let computed: Vec<Vec<Cell>> = (0..budget_rows)
        .into_par_iter()
        .map(|l| compute_row(metric, &counts, l, opts, &cache))
        .collect::<Result<_, _>>()?;
    let mut rows = computed;
    for l in budget_rows..=lmax {
        rows.push((0..=l).map(|k| Cell::not_computed(k, l)).collect());
    }
    Ok(BigradedGroup { lmax, rows })
}

/// Graded Euler characteristic of the chain counts.
pub fn magnitude_by_counting(g: &Graph, lmax: usize) -> PowerSeries {
    counting_series(&chain_rank_table(&Metric::new(g), lmax))
}

pub fn counting_series(counts: &ChainCounts) -> PowerSeries {
    let coeffs = counts
        .counts
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(k, &c)| if k % 2 == 0 { c as i128 } else { -(c as i128) })
                .sum()
        })
        .collect();
    PowerSeries::new(coeffs)
}

/// Sum of the entries of `Z^{-1}`, where `Z = Σ_d q^d A_d` is the
/// similarity matrix. `Z^{-1} = Σ_m (-1)^m (Z - I)^m` converges as a
/// power series because `Z - I` has no constant term; the sum is applied to
/// the all-ones vector one degree at a time. Components are handled
/// separately and summed.
pub fn magnitude_by_inverse_series(g: &Graph, lmax: usize) -> Result<PowerSeries, HomologyError> {
    let dist = crate::graph::distance_matrix(g);
    let mut total = vec![0i128; lmax + 1];
    for comp in g.components() {
        let n = comp.len();
        // w[t] is the degree-t coefficient vector of Z^{-1} 1
        let mut w: Vec<Vec<i128>> = vec![vec![1; n]];
        for t in 1..=lmax {
            let mut next = vec![0i128; n];
            for (i, slot) in next.iter_mut().enumerate() {
                let mut acc: i128 = 0;
                for j in 0..n {
                    let d = dist
                        .get(comp[i], comp[j])
                        .finite()
                        .expect("same component") as usize;
                    if d == 0 || d > t {
                        continue;
                    }
                    acc = acc
                        .checked_sub(w[t - d][j])
                        .ok_or(HomologyError::SeriesOverflow)?;
                }
                *slot = acc;
            }
            w.push(next);
        }
        for (t, v) in w.iter().enumerate() {
            let s = v
                .iter()
                .try_fold(0i128, |a, &x| a.checked_add(x))
                .ok_or(HomologyError::SeriesOverflow)?;
            total[t] = total[t].checked_add(s).ok_or(HomologyError::SeriesOverflow)?;
        }
    }
    Ok(PowerSeries::new(total))
}

/// `Σ_k (-1)^k rank MH_{k,l}` for each `l`.
pub fn magnitude_by_euler(h: &BigradedGroup) -> Result<PowerSeries, HomologyError> {
    let mut coeffs = Vec::with_capacity(h.lmax + 1);
    for (l, row) in h.rows.iter().enumerate() {
        let mut c: i128 = 0;
        for cell in row {
            let r = cell.rank.ok_or(HomologyError::Incomplete { k: cell.k, l })? as i128;
            c += if cell.k % 2 == 0 { r } else { -r };
        }
        coeffs.push(c);
    }
    Ok(PowerSeries::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path};

    fn ranks(h: &BigradedGroup) -> Vec<Vec<u64>> {
        (0..=h.lmax())
            .map(|l| (0..=l).map(|k| h.rank(k, l).unwrap()).collect())
            .collect()
    }

    #[test]
    fn complete_graph_k3_is_diagonal() {
        let h = compute_homology(&complete(3), 4, &HomologyOptions::default()).unwrap();
        for l in 0..=4 {
            for k in 0..=l {
                let expected = if k == l { 3 * 2u64.pow(l as u32) } else { 0 };
                assert_eq!(h.rank(k, l), Some(expected));
            }
        }
    }

    #[test]
    fn discrete_graph_homology() {
        let h = compute_homology(&Graph::discrete(4), 3, &HomologyOptions::default()).unwrap();
        assert_eq!(ranks(&h), vec![vec![4], vec![0, 0], vec![0, 0, 0], vec![0, 0, 0, 0]]);
    }

    #[test]
    fn c5_small_rows() {
        let opts = HomologyOptions {
            torsion: true,
            ..Default::default()
        };
        let h = compute_homology(&cycle(5), 4, &opts).unwrap();
        assert_eq!(
            ranks(&h),
            vec![
                vec![5],
                vec![0, 10],
                vec![0, 0, 10],
                vec![0, 0, 10, 10],
                vec![0, 0, 0, 30, 10]
            ]
        );
        assert!(h.torsion_known());
        assert!(h.torsion_cells().is_empty());
    }

    #[test]
    fn methods_agree() {
        let g = cycle(6);
        let mk = |method| HomologyOptions {
            method,
            ..Default::default()
        };
        let a = compute_homology(&g, 5, &mk(RankMethod::Auto)).unwrap();
        let e = compute_homology(&g, 5, &mk(RankMethod::Exact)).unwrap();
        let m = compute_homology(&g, 5, &mk(RankMethod::Modular)).unwrap();
        assert_eq!(ranks(&a), ranks(&e));
        assert_eq!(ranks(&a), ranks(&m));
        assert!(e.cells().all(|c| c.method == Some(Provenance::Exact)));
    }

    #[test]
    fn resource_guard_marks_rows() {
        let opts = HomologyOptions {
            max_trails: 60,
            ..Default::default()
        };
        let h = compute_homology(&cycle(5), 4, &opts).unwrap();
        // rows 0..=2 hold 5 + 10 + 30 = 45 generators; row 3 adds 80
        assert_eq!(h.complete_through(), Some(2));
        assert_eq!(h.rank(3, 3), None);
        assert!(!h.is_complete());
        assert!(matches!(
            magnitude_by_euler(&h),
            Err(HomologyError::Incomplete { l: 3, .. })
        ));
    }

    #[test]
    fn c5_magnitude_three_ways() {
        // row 8 of the C_5 table: 180 - 110 + 10
        let expected = [5, -10, 10, 0, -20, 40, -40, 0, 80];
        let g = cycle(5);
        assert_eq!(magnitude_by_counting(&g, 8).coeffs(), &expected);
        assert_eq!(magnitude_by_inverse_series(&g, 8).unwrap().coeffs(), &expected);
        let h = compute_homology(&g, 8, &HomologyOptions::default()).unwrap();
        assert_eq!(magnitude_by_euler(&h).unwrap().coeffs(), &expected);
    }

    #[test]
    fn small_series() {
        assert_eq!(magnitude_by_counting(&complete(1), 4).coeffs(), &[1, 0, 0, 0, 0]);
        assert_eq!(magnitude_by_counting(&complete(3), 3).coeffs(), &[3, -6, 12, -24]);
        assert_eq!(
            magnitude_by_inverse_series(&Graph::discrete(4), 3).unwrap().coeffs(),
            &[4, 4 - 4, 0, 0]
        );
        let k2 = compute_homology(&complete(2), 4, &HomologyOptions::default()).unwrap();
        assert_eq!(magnitude_by_euler(&k2).unwrap().coeffs(), &[2, -2, 2, -2, 2]);
    }

    #[test]
    fn trees_have_diagonal_homology() {
        let h = compute_homology(&path(4), 4, &HomologyOptions::default()).unwrap();
        for l in 1..=4 {
            for k in 0..=l {
                assert_eq!(h.rank(k, l), Some(if k == l { 6 } else { 0 }));
            }
        }
    }

    #[test]
    fn tables_serialise() {
        let h = compute_homology(&cycle(4), 2, &HomologyOptions::default()).unwrap();
        let cell = h.cell(1, 1).unwrap();
        assert_eq!(cell.rank, Some(8));
        assert_eq!(cell.group(), None);
        let from = BigradedGroup::from_groups(1, |k, l| AbelianGroup::new((k + l) as u64, [2]));
        assert_eq!(from.cell(1, 1).unwrap().group(), Some(AbelianGroup::new(2, [2])));
    }
}
