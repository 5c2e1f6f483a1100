//! Binary Pascal matrices and index vectors.
//!
//! Entry `(i, j)` of the binary Pascal matrix is `C(i, j) mod 2`, which by
//! Lucas' theorem is 1 exactly when the binary support of `j` is contained in
//! the binary support of `i`.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::bmatrix::{Bits, BoolMatrix, MAX_DIM};
use crate::error::{check_range, Error, Result};

/// A subset of ground positions `0..64`, one bit per position.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn from_elements<I: IntoIterator<Item = usize>>(elems: I) -> Self {
        SubsetMask(elems.into_iter().fold(0, |m, e| m | 1 << e))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn elements(self) -> Bits {
        Bits::new(self.0)
    }

    /// True when every set position is below `n`.
    pub fn fits(self, n: usize) -> bool {
        self.0 & !crate::bmatrix::low_mask(n) == 0
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.elements().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Set of 1-bit positions in the binary expansion of `t`.
#[inline]
pub fn support(t: u64) -> SubsetMask {
    SubsetMask(t)
}

/// `C(i, j) mod 2`, computed as the bit test `j AND NOT i == 0`.
#[inline]
pub fn lucas_entry(i: u64, j: u64) -> bool {
    j & !i == 0
}

/// The `n x n` binary Pascal matrix.
pub fn pascal_matrix(n: usize) -> Result<BoolMatrix> {
    check_range("pascal dimension", n as u64, 0, MAX_DIM as u64)?;
    BoolMatrix::from_rows((0..n as u64).map(pascal_row).collect())
}

/// Row `i` of any Pascal matrix with more than `i` rows: all submasks of `i`.
#[inline]
pub(crate) fn pascal_row(i: u64) -> u64 {
    let mut row = 0u64;
    let mut sub = i;
    loop {
        row |= 1 << sub;
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & i;
    }
    row
}

/// Pascal poset matrix rebuilt from set inclusion of the supports
/// `S(0), ..., S(n-1)`, without any bit arithmetic on the labels.
pub fn support_poset_matrix(n: usize) -> Result<BoolMatrix> {
    check_range("support poset size", n as u64, 1, MAX_DIM as u64)?;
    let supports: Vec<BTreeSet<u32>> = (0..n as u64)
        .map(|t| {
            let mut s = BTreeSet::new();
            let (mut rest, mut pos) = (t, 0u32);
            while rest > 0 {
                if rest % 2 == 1 {
                    s.insert(pos);
                }
                rest /= 2;
                pos += 1;
            }
            s
        })
        .collect();
    let rows = supports
        .iter()
        .map(|si| {
            supports
                .iter()
                .enumerate()
                .filter(|(_, sj)| sj.is_subset(si))
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    BoolMatrix::from_rows(rows)
}

/// A strictly increasing selection `(a_0, ..., a_{k-1})` from `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "IndexJson")]
pub struct IndexVector {
    universe: u64,
    entries: Vec<u64>,
}

#[derive(Deserialize)]
struct IndexJson {
    universe: u64,
    entries: Vec<u64>,
}

impl TryFrom<IndexJson> for IndexVector {
    type Error = Error;
    fn try_from(j: IndexJson) -> Result<Self> {
        IndexVector::new(j.universe, j.entries)
    }
}

impl IndexVector {
    pub fn new(universe: u64, entries: Vec<u64>) -> Result<Self> {
        for (pos, &e) in entries.iter().enumerate() {
            if e >= universe {
                return Err(Error::IndexOutOfRange { index: e, universe });
            }
            if pos > 0 && entries[pos - 1] >= e {
                return Err(Error::NotIncreasing { position: pos });
            }
        }
        Ok(IndexVector { universe, entries })
    }

    /// Sorts `entries`; repeated values are an error.
    pub fn from_unsorted(universe: u64, mut entries: Vec<u64>) -> Result<Self> {
        entries.sort_unstable();
        if let Some(w) = entries.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateIndex { value: w[0] });
        }
        IndexVector::new(universe, entries)
    }

    /// Members of `Q_{k, 2^n}` given as a bit set over `0..2^n` (`n <= 6`).
    pub(crate) fn from_member_mask(universe: u64, mask: u64) -> Self {
        IndexVector {
            universe,
            entries: Bits::new(mask).map(|b| b as u64).collect(),
        }
    }

    /// Parses comma-separated decimals such as `2,5,9,13`.
    pub fn parse(universe: u64, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return IndexVector::new(universe, Vec::new());
        }
        let entries = text
            .split(',')
            .map(|s| {
                s.trim().parse::<u64>().map_err(|e| Error::Parse {
                    line: 1,
                    message: format!("bad index {s:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        IndexVector::new(universe, entries)
    }

    #[inline]
    pub fn universe(&self) -> u64 {
        self.universe
    }

    #[inline]
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Bit set of the entries; requires `universe <= 64`.
    pub(crate) fn member_mask(&self) -> u64 {
        debug_assert!(self.universe <= 64);
        self.entries.iter().fold(0, |m, &e| m | 1 << e)
    }
}

impl fmt::Display for IndexVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// All of `Q_{k, universe}` in lexicographic order.
pub fn index_vectors(k: usize, universe: u64) -> impl Iterator<Item = IndexVector> {
    (0..universe)
        .combinations(k)
        .map(move |entries| IndexVector { universe, entries })
}

/// `k x k` principal submatrix with `result[r][c] = m[a_r][a_c]`.
pub fn induced_submatrix(m: &BoolMatrix, alpha: &IndexVector) -> Result<BoolMatrix> {
    if alpha.universe != m.n() as u64 {
        return Err(Error::DimensionMismatch {
            left: m.n(),
            right: alpha.universe as usize,
        });
    }
    let idx: Vec<usize> = alpha.entries.iter().map(|&e| e as usize).collect();
    let rows = idx
        .iter()
        .map(|&r| {
            let row = m.row(r);
            idx.iter()
                .enumerate()
                .fold(0u64, |acc, (c, &src)| acc | ((row >> src & 1) << c))
        })
        .collect();
    BoolMatrix::from_rows(rows)
}
