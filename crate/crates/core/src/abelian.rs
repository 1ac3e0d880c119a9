//! Finitely generated abelian groups `Z^r ⊕ Z/d_1 ⊕ ... ⊕ Z/d_s` in
//! invariant-factor form, with direct sum, tensor product and Tor.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// `Z^rank ⊕ Z/torsion[0] ⊕ ...` with `1 < torsion[0] | torsion[1] | ...`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: u64,
    pub torsion: Vec<u64>,
}

fn factorise(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Invariant factors (> 1) of `⊕ Z/c` over the given cyclic orders.
/// Orders 0 and 1 are ignored.
pub fn canonical_torsion(orders: impl IntoIterator<Item = u64>) -> Vec<u64> {
    let mut by_prime: std::collections::BTreeMap<u64, Vec<u32>> = Default::default();
    for c in orders {
        if c <= 1 {
            continue;
        }
        for (p, e) in factorise(c) {
            by_prime.entry(p).or_default().push(e);
        }
    }
    let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; len];
    for (p, mut exps) in by_prime {
        exps.sort_unstable_by(|a, b| b.cmp(a));
        for (i, e) in exps.into_iter().enumerate() {
            factors[i] *= p.pow(e);
        }
    }
    factors.reverse();
    factors
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: u64) -> Self {
        AbelianGroup {
            rank,
            torsion: Vec::new(),
        }
    }

    /// Builds the group from a rank and any list of cyclic orders.
    pub fn new(rank: u64, orders: impl IntoIterator<Item = u64>) -> Self {
        AbelianGroup {
            rank,
            torsion: canonical_torsion(orders),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        AbelianGroup::new(
            self.rank + other.rank,
            self.torsion.iter().chain(&other.torsion).copied(),
        )
    }

    pub fn tensor(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = Vec::new();
        for &a in &self.torsion {
            orders.extend(std::iter::repeat_n(a, other.rank as usize));
            orders.extend(other.torsion.iter().map(|&b| a.gcd(&b)));
        }
        for &b in &other.torsion {
            orders.extend(std::iter::repeat_n(b, self.rank as usize));
        }
        AbelianGroup::new(self.rank * other.rank, orders)
    }

    pub fn tor(&self, other: &AbelianGroup) -> AbelianGroup {
        let orders = self
            .torsion
            .iter()
            .flat_map(|&a| other.torsion.iter().map(move |&b| a.gcd(&b)));
        AbelianGroup::new(0, orders)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank > 0 || self.torsion.is_empty() {
            parts.push(self.rank.to_string());
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" ⊕ "))
    }
}
