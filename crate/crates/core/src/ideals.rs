//! Order ideals and antichains of the Pascal poset on `0..n`, where `j` lies
//! below `i` exactly when the binary support of `j` is inside that of `i`.
//!
//! Ideals are counted two ways: by backtracking over elements in increasing
//! order and by scanning all `2^n` Boolean vectors for solutions of
//! `x P_n = x`.

use rayon::prelude::*;
use serde::Serialize;

use crate::bmatrix::Bits;
use crate::error::{check_range, Error, Result};
use crate::pascal::{pascal_row, IndexVector, SubsetMask};

pub const MAX_COUNT_IDEALS: usize = 32;
pub const MAX_FIXED_POINT_SCAN: usize = 20;
pub const MAX_LIST_IDEALS: usize = 24;
pub const MAX_DEDEKIND: u32 = 5;

/// Elements strictly below `i`.
#[inline]
fn predecessors(i: usize) -> u64 {
    pascal_row(i as u64) & !(1 << i)
}

/// Elements `i < n` strictly above `j`.
fn successors(j: usize, n: usize) -> u64 {
    (j + 1..n)
        .filter(|&i| i & j == j)
        .fold(0, |m, i| m | 1 << i)
}

fn is_down_closed(bits: u64) -> bool {
    Bits::new(bits).all(|i| predecessors(i) & !bits == 0)
}

fn is_pairwise_incomparable(bits: u64) -> bool {
    Bits::new(bits).all(|i| predecessors(i) & bits == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealMask {
    n: usize,
    bits: SubsetMask,
}

impl IdealMask {
    pub fn new(n: usize, bits: SubsetMask) -> Result<Self> {
        check_range("ground size", n as u64, 0, 64)?;
        if !bits.fits(n) || !is_down_closed(bits.bits()) {
            return Err(Error::InvalidMask {
                kind: "order ideal",
                detail: format!("{bits} over 0..{n}"),
            });
        }
        Ok(IdealMask { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> SubsetMask {
        self.bits
    }

    /// Coordinates `x_0 .. x_{n-1}` as a `0`/`1` string.
    pub fn fixed_point_string(&self) -> String {
        (0..self.n)
            .map(|i| if self.bits.contains(i) { '1' } else { '0' })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AntichainMask {
    n: usize,
    bits: SubsetMask,
}

impl AntichainMask {
    pub fn new(n: usize, bits: SubsetMask) -> Result<Self> {
        check_range("ground size", n as u64, 0, 64)?;
        if !bits.fits(n) || !is_pairwise_incomparable(bits.bits()) {
            return Err(Error::InvalidMask {
                kind: "antichain",
                detail: format!("{bits} over 0..{n}"),
            });
        }
        Ok(AntichainMask { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> SubsetMask {
        self.bits
    }
}

/// `↓i`: every `j` whose support is inside the support of `i`.
pub fn principal_ideal(i: usize, n: usize) -> Result<IdealMask> {
    if i >= n || n > 64 {
        return Err(Error::IndexOutOfRange {
            index: i as u64,
            universe: n as u64,
        });
    }
    Ok(IdealMask {
        n,
        bits: SubsetMask(pascal_row(i as u64)),
    })
}

/// `↓A`, the union of the principal ideals of the members of `A`.
pub fn antichain_to_ideal(a: &AntichainMask) -> IdealMask {
    let bits = a.bits.elements().fold(0, |m, i| m | pascal_row(i as u64));
    IdealMask {
        n: a.n,
        bits: SubsetMask(bits),
    }
}

/// Maximal elements of an ideal.
pub fn ideal_to_antichain(j: &IdealMask) -> AntichainMask {
    let bits = j.bits.bits();
    let max = Bits::new(bits)
        .filter(|&i| successors(i, j.n) & bits == 0)
        .fold(0, |m, i| m | 1 << i);
    AntichainMask {
        n: j.n,
        bits: SubsetMask(max),
    }
}

/// Whether `x P_n = x` over the Boolean semiring, coordinate by coordinate:
/// `(x P_n)_j` is the OR of `x_i` over all `i` above or equal to `j`.
pub fn is_fixed_point(x: SubsetMask, n: usize) -> bool {
    if !x.fits(n) {
        return false;
    }
    (0..n).all(|j| {
        let col = successors(j, n) | 1 << j;
        x.contains(j) == (x.bits() & col != 0)
    })
}

/// Exhaustive scan of all `2^n` vectors.
pub fn count_fixed_points(n: usize) -> Result<u64> {
    check_range(
        "fixed-point scan size",
        n as u64,
        0,
        MAX_FIXED_POINT_SCAN as u64,
    )?;
    let cols: Vec<u64> = (0..n).map(|j| successors(j, n) | 1 << j).collect();
    Ok((0..1u64 << n)
        .into_par_iter()
        .filter(|&x| {
            cols.iter()
                .enumerate()
                .all(|(j, &c)| (x >> j & 1 == 1) == (x & c != 0))
        })
        .count() as u64)
}

fn count_from(i: usize, n: usize, included: u64) -> u64 {
    if i == n {
        return 1;
    }
    let mut total = count_from(i + 1, n, included);
    if predecessors(i) & !included == 0 {
        total += count_from(i + 1, n, included | 1 << i);
    }
    total
}

fn collect_from(i: usize, n: usize, included: u64, out: &mut Vec<u64>) {
    if i == n {
        out.push(included);
        return;
    }
    collect_from(i + 1, n, included, out);
    if predecessors(i) & !included == 0 {
        collect_from(i + 1, n, included | 1 << i, out);
    }
}

/// Number of elements whose in/out decisions are fixed before the remaining
/// search is handed to worker threads.
const SPLIT: usize = 12;

/// `D_P(n)`, the number of order ideals (equivalently antichains).
pub fn count_ideals(n: usize) -> Result<u64> {
    check_range("ideal count size", n as u64, 0, MAX_COUNT_IDEALS as u64)?;
    let split = n.min(SPLIT);
    let mut heads = Vec::new();
    collect_from(0, split, 0, &mut heads);
    Ok(heads.par_iter().map(|&h| count_from(split, n, h)).sum())
}

/// Every order ideal, in increasing numeric order of its mask.
pub fn all_ideals(n: usize) -> Result<Vec<IdealMask>> {
    check_range("ideal listing size", n as u64, 0, MAX_LIST_IDEALS as u64)?;
    let mut out = Vec::new();
    collect_from(0, n, 0, &mut out);
    out.sort_unstable();
    Ok(out
        .into_iter()
        .map(|b| IdealMask {
            n,
            bits: SubsetMask(b),
        })
        .collect())
}

/// One antichain with its ideal; the ideal doubles as the fixed point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdealRow {
    pub antichain: AntichainMask,
    pub ideal: IdealMask,
}

/// All antichain/ideal pairs, ordered by antichain size and then
/// lexicographically by the antichain's sorted elements.
pub fn list_ideals(n: usize) -> Result<Vec<IdealRow>> {
    let mut rows: Vec<IdealRow> = all_ideals(n)?
        .into_iter()
        .map(|ideal| IdealRow {
            antichain: ideal_to_antichain(&ideal),
            ideal,
        })
        .collect();
    rows.sort_by_cached_key(|r| {
        let elems: Vec<usize> = r.antichain.bits.elements().collect();
        (elems.len(), elems)
    });
    Ok(rows)
}

/// `M(k)` computed as `D_P(2^k)`.
pub fn dedekind(k: u32) -> Result<u64> {
    check_range("Dedekind index", k as u64, 0, MAX_DEDEKIND as u64)?;
    count_ideals(1 << k)
}

/// Whether `P_n[alpha]` is the identity, i.e. the entries of `alpha` are
/// pairwise incomparable.
pub fn identity_antichain_check(alpha: &IndexVector, n: usize) -> Result<bool> {
    if let Some(&bad) = alpha.entries().iter().find(|&&a| a >= n as u64) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            universe: n as u64,
        });
    }
    let e = alpha.entries();
    Ok(e.iter()
        .enumerate()
        .all(|(k, &a)| e[..k].iter().all(|&b| b & !a != 0 && a & !b != 0)))
}
