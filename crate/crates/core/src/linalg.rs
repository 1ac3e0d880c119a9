//! Exact sparse integer matrices: products, rank over a prime field, rank
//! over the rationals, and Smith normal form.
//!
//! Exact rank and Smith normal form share a first phase that eliminates
//! unit (`±1`) pivots on the sparse structure. A unit pivot splits off a
//! `[±1]` block by unimodular operations, so it removes exactly one from
//! the rank and contributes an invariant factor of 1. Boundary matrices of
//! magnitude chain complexes have all entries in `{-1, 0, 1}` and almost
//! all of their rank is found this way; whatever is left is handed to a
//! dense arbitrary-precision routine (Bareiss for rank, classical
//! reduction for Smith form).

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}x{1} times {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("matrix is too large for Smith normal form ({rows}x{cols}, limit {limit})")]
    TooLarge { rows: usize, cols: usize, limit: usize },
}

/// Column-major sparse matrix of arbitrary-precision integers. Zeros are
/// never stored and each column is sorted by row.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, BigInt)>>,
}

impl fmt::Debug for SparseIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SparseIntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows.min(24) {
            let row: Vec<String> = (0..self.cols.min(24)).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseIntMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, BigInt::one())]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; repeated positions
    /// are summed and zero results dropped.
    pub fn from_triplets<I, V>(rows: usize, cols: usize, triplets: I) -> Result<Self, LinalgError>
    where
        I: IntoIterator<Item = (usize, usize, V)>,
        V: Into<BigInt>,
    {
        let mut acc: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); cols];
        for (row, col, v) in triplets {
            if row >= rows || col >= cols {
                return Err(LinalgError::OutOfRange { row, col, rows, cols });
            }
            *acc[col].entry(row).or_default() += v.into();
        }
        let data = acc
            .into_iter()
            .map(|c| c.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Ok(SparseIntMatrix { rows, cols, data })
    }

    /// Builds a matrix column by column. Each column lists `(row, value)`
    /// pairs with distinct rows in any order.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, BigInt)>>) -> Self {
        let cols = columns.len();
        let data = columns
            .into_iter()
            .map(|mut c| {
                c.retain(|(_, v)| !v.is_zero());
                c.sort_by_key(|&(r, _)| r);
                debug_assert!(c.windows(2).all(|w| w[0].0 < w[1].0), "duplicate row in column");
                debug_assert!(c.iter().all(|&(r, _)| r < rows));
                c
            })
            .collect();
        SparseIntMatrix { rows, cols, data }
    }

    pub fn from_dense(dense: &[Vec<i64>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let triplets = dense
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v)));
        Self::from_triplets(rows, cols, triplets).expect("in range by construction")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, BigInt)] {
        &self.data[c]
    }

    pub fn get(&self, row: usize, col: usize) -> BigInt {
        match self.data[col].binary_search_by_key(&row, |&(r, _)| r) {
            Ok(i) => self.data[col][i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> SparseIntMatrix {
        let mut cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            cols[r].push((c, v.clone()));
        }
        SparseIntMatrix {
            rows: self.cols,
            cols: self.rows,
            data: cols,
        }
    }

    /// Reorders rows and columns: entry `(r, c)` moves to
    /// `(row_perm[r], col_perm[c])`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> SparseIntMatrix {
        let triplets = self
            .entries()
            .map(|(r, c, v)| (row_perm[r], col_perm[c], v.clone()));
        Self::from_triplets(self.rows, self.cols, triplets).expect("permutation stays in range")
    }

    /// Stacks matrices along the diagonal.
    pub fn block_diagonal(blocks: &[SparseIntMatrix]) -> SparseIntMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(blocks.iter().map(|b| b.cols).sum());
        let mut off = 0;
        for b in blocks {
            for col in &b.data {
                data.push(col.iter().map(|(r, v)| (r + off, v.clone())).collect());
            }
            off += b.rows;
        }
        SparseIntMatrix {
            rows,
            cols: data.len(),
            data,
        }
    }
}

/// Exact product `a * b`.
pub fn multiply(a: &SparseIntMatrix, b: &SparseIntMatrix) -> Result<SparseIntMatrix, LinalgError> {
    if a.cols != b.rows {
        return Err(LinalgError::DimensionMismatch(a.rows, a.cols, b.rows, b.cols));
    }
    let data = b
        .data
        .iter()
        .map(|bcol| {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (k, bv) in bcol {
                for (r, av) in &a.data[*k] {
                    *acc.entry(*r).or_default() += av * bv;
                }
            }
            acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
        })
        .collect();
    Ok(SparseIntMatrix {
        rows: a.rows,
        cols: b.cols,
        data,
    })
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Draws a uniformly random prime in `(2^30, 2^31)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.random_range((1u64 << 30) + 1..(1u64 << 31)) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// Two distinct random primes in `(2^30, 2^31)`.
pub fn random_prime_pair<R: Rng + ?Sized>(rng: &mut R) -> (u64, u64) {
    let p = random_prime(rng);
    loop {
        let q = random_prime(rng);
        if q != p {
            return (p, q);
        }
    }
}

fn reduce_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Rank over `Z/p` by sparse left-to-right elimination.
///
/// Columns are processed in order of increasing fill. Each new column is
/// reduced against the stored pivot columns in insertion order; a stored
/// column is zero on the pivot rows of all earlier columns, so the
/// reduction only ever moves forward. When a column survives, its pivot row
/// is the surviving entry whose row is sparsest in the input (a static
/// Markowitz count).
///
/// `p` must be prime and below `2^32`.
pub fn rank_modular(m: &SparseIntMatrix, p: u64) -> usize {
    assert!((2..(1 << 32)).contains(&p), "modulus out of range");
    let mut row_count = vec![0usize; m.rows];
    let mut cols: Vec<Vec<(usize, u64)>> = m
        .data
        .iter()
        .map(|c| {
            c.iter()
                .filter_map(|(r, v)| {
                    let x = reduce_mod(v, p);
                    (x != 0).then_some((*r, x))
                })
                .collect::<Vec<_>>()
        })
        .filter(|c| !c.is_empty())
        .collect();
    for c in &cols {
        for &(r, _) in c {
            row_count[r] += 1;
        }
    }
    cols.sort_by_key(Vec::len);

    let mut pivot_of_row: Vec<u32> = vec![u32::MAX; m.rows];
    let mut pivots: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut acc = vec![0u64; m.rows];
    let mut touched: Vec<usize> = Vec::new();
    let mut is_touched = vec![false; m.rows];
    let mut queue: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
    let mut queued = vec![false; m.rows];

    for col in cols {
        for (r, v) in col {
            acc[r] = v;
            if !is_touched[r] {
                is_touched[r] = true;
                touched.push(r);
            }
            if pivot_of_row[r] != u32::MAX && !queued[r] {
                queued[r] = true;
                queue.push(Reverse(pivot_of_row[r]));
            }
        }
        while let Some(Reverse(idx)) = queue.pop() {
            let pcol = &pivots[idx as usize];
            let prow = pcol[0].0;
            queued[prow] = false;
            let coef = acc[prow];
            if coef == 0 {
                continue;
            }
            // pivot entry is normalised to 1 and stored first
            for &(r, v) in pcol {
                acc[r] = (acc[r] + p - mul_mod(coef, v, p)) % p;
                if !is_touched[r] {
                    is_touched[r] = true;
                    touched.push(r);
                }
                if acc[r] != 0 && pivot_of_row[r] != u32::MAX && !queued[r] {
                    queued[r] = true;
                    queue.push(Reverse(pivot_of_row[r]));
                }
            }
        }
        let mut survivors: Vec<(usize, u64)> = Vec::new();
        for &r in &touched {
            if acc[r] != 0 {
                survivors.push((r, acc[r]));
            }
            acc[r] = 0;
            is_touched[r] = false;
        }
        touched.clear();
        if let Some(&(prow, pval)) = survivors.iter().min_by_key(|&&(r, _)| (row_count[r], r)) {
            let inv = pow_mod(pval, p - 2, p);
            let mut stored = Vec::with_capacity(survivors.len());
            stored.push((prow, 1));
            stored.extend(
                survivors
                    .into_iter()
                    .filter(|&(r, _)| r != prow)
                    .map(|(r, v)| (r, mul_mod(v, inv, p))),
            );
            pivot_of_row[prow] = pivots.len() as u32;
            pivots.push(stored);
        }
    }
    pivots.len()
}

/// State left after eliminating unit pivots.
struct UnitElimination {
    units: usize,
    residual: Vec<Vec<BigInt>>,
}

/// Eliminates `±1` pivots on a sparse copy of `m` using machine integers.
/// Stops early (keeping all work done so far) on overflow, and returns the
/// untouched rows and columns as a dense residual.
fn eliminate_units(m: &SparseIntMatrix) -> UnitElimination {
    // Inputs with huge entries go straight to the dense phase.
    let small = m.entries().all(|(_, _, v)| v.to_i64().is_some());
    if !small {
        return UnitElimination {
            units: 0,
            residual: m.to_dense(),
        };
    }
    let mut rows: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); m.rows];
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (r, c, v) in m.entries() {
        rows[r].insert(c, v.to_i64().expect("checked above"));
        cols[c].insert(r);
    }
    let mut row_alive = vec![true; m.rows];
    let mut col_alive = vec![true; m.cols];
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..m.cols).map(|c| Reverse((cols[c].len(), c))).collect();
    let mut units = 0;

    'pivot: while let Some(Reverse((len, c))) = heap.pop() {
        if !col_alive[c] || len != cols[c].len() {
            continue;
        }
        if len == 0 {
            col_alive[c] = false;
            continue;
        }
        let Some(r) = cols[c]
            .iter()
            .copied()
            .filter(|&r| rows[r][&c].abs() == 1)
            .min_by_key(|&r| rows[r].len())
        else {
            // no unit pivot here; leave this column to the dense phase
            continue;
        };
        let sign = rows[r][&c];
        let pivot_row: Vec<(usize, i64)> = rows[r].iter().map(|(&j, &v)| (j, v)).collect();
        let others: Vec<usize> = cols[c].iter().copied().filter(|&i| i != r).collect();
        // check for overflow before mutating anything
        for &i in &others {
            let factor = rows[i][&c] * sign;
            for &(j, v) in &pivot_row {
                let cur = rows[i].get(&j).copied().unwrap_or(0);
                let ok = factor
                    .checked_mul(v)
                    .and_then(|fv| cur.checked_sub(fv))
                    .is_some();
                if !ok {
                    break 'pivot;
                }
            }
        }
        for &i in &others {
            let factor = rows[i][&c] * sign;
            for &(j, v) in &pivot_row {
                let cur = rows[i].get(&j).copied().unwrap_or(0);
                let new = cur - factor * v;
                if new == 0 {
                    rows[i].remove(&j);
                    cols[j].remove(&i);
                } else {
                    rows[i].insert(j, new);
                    cols[j].insert(i);
                }
            }
            debug_assert!(!rows[i].contains_key(&c));
        }
        for &(j, _) in &pivot_row {
            cols[j].remove(&r);
            if j != c && col_alive[j] {
                heap.push(Reverse((cols[j].len(), j)));
            }
        }
        rows[r].clear();
        row_alive[r] = false;
        col_alive[c] = false;
        units += 1;
    }

    let live_rows: Vec<usize> = (0..m.rows)
        .filter(|&r| row_alive[r] && !rows[r].is_empty())
        .collect();
    let live_cols: Vec<usize> = (0..m.cols)
        .filter(|&c| col_alive[c] && !cols[c].is_empty())
        .collect();
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let residual = live_rows
        .iter()
        .map(|&r| {
            let mut dense = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in &rows[r] {
                if let Some(&pos) = col_pos.get(c) {
                    dense[pos] = BigInt::from(*v);
                }
            }
            dense
        })
        .collect();
    UnitElimination { units, residual }
}

/// Rank of a dense matrix over the rationals by fraction-free elimination.
pub fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (top, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        let pivot = &pivot_row[col];
        for row in rest.iter_mut() {
            let lead = row[col].clone();
            for j in col + 1..cols {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

/// Rank over the rationals.
pub fn rank_exact(m: &SparseIntMatrix) -> usize {
    let UnitElimination { units, residual } = eliminate_units(m);
    units + bareiss_rank(residual)
}

/// Rank and invariant factors `d_1 | d_2 | ... | d_rank`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    /// Invariant factors greater than one: the torsion of the cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Size limits for Smith normal form. Matrices whose smaller dimension
/// exceeds `limit` are refused; `limit` defaults to 5000 and may be raised
/// to at most [`SnfGuard::HARD_LIMIT`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SnfGuard {
    pub limit: usize,
}

impl SnfGuard {
    pub const DEFAULT_LIMIT: usize = 5000;
    pub const HARD_LIMIT: usize = 20000;

    pub fn allow_large() -> Self {
        SnfGuard {
            limit: Self::HARD_LIMIT,
        }
    }
}

impl Default for SnfGuard {
    fn default() -> Self {
        SnfGuard {
            limit: Self::DEFAULT_LIMIT,
        }
    }
}

pub fn smith_normal_form(m: &SparseIntMatrix) -> Result<SnfResult, LinalgError> {
    smith_normal_form_guarded(m, SnfGuard::default())
}

pub fn smith_normal_form_guarded(
    m: &SparseIntMatrix,
    guard: SnfGuard,
) -> Result<SnfResult, LinalgError> {
    let limit = guard.limit.min(SnfGuard::HARD_LIMIT);
    let too_large = |rows, cols| LinalgError::TooLarge { rows, cols, limit };
    if m.rows.min(m.cols) > limit {
        return Err(too_large(m.rows, m.cols));
    }
    let UnitElimination { units, residual } = eliminate_units(m);
    let (rr, rc) = (residual.len(), residual.first().map_or(0, Vec::len));
    if rr.min(rc) > limit {
        return Err(too_large(rr, rc));
    }
    let mut factors = vec![BigInt::one(); units];
    factors.extend(dense_smith_diagonal(residual));
    let factors = normalise_chain(factors);
    Ok(SnfResult {
        rank: factors.len(),
        invariant_factors: factors,
    })
}

/// Turns any list of nonzero diagonal entries into the invariant factors
/// of the corresponding diagonal matrix.
pub fn normalise_chain(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diag.into_iter().map(|x| x.abs()).collect();
    d.sort();
    // Replacing (a, b) by (gcd, lcm) preserves the group; repeating until
    // each entry divides the next yields the invariant factors.
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            if !(&d[j] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[j]);
                let l = d[i].lcm(&d[j]);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

/// Classical Smith reduction on a dense matrix; returns the nonzero
/// diagonal entries.
fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let delta = &q * &a[t][j];
                    a[i][j] -= delta;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let delta = &q * &row[t];
                    row[j] -= delta;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t to the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    a.swap(t, best.0);
                } else if best.1 != t {
                    for row in a.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero())
            });
            match offender {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}
