//! Incidence matrices of index vectors and the operations that preserve
//! their row-domination relations.
//!
//! Row `i` of the incidence matrix `M_a` is the binary expansion of `a_i`, so
//! row `i` is dominated by row `j` exactly when `supp(a_i) ⊆ supp(a_j)`. Two
//! moves keep the domination relations intact: permuting rows or columns, and
//! flipping a single *changeable* entry. Every index vector reachable from
//! `a` by such moves is Pascal-equivalent to `a`; the converse is not claimed.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::bmatrix::{low_mask, Bits, BoolMatrix, Permutation};
use crate::error::{Error, Result};
use crate::pascal::IndexVector;
use crate::posetcore::{check_q, validate, PosetMatrix};

/// Default cap on visited states for [`domination_orbit`].
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Boolean matrix whose row `i`, read as an integer, is `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IncidenceMatrix {
    inner: BoolMatrix,
}

impl IncidenceMatrix {
    pub fn from_matrix(inner: BoolMatrix) -> Self {
        IncidenceMatrix { inner }
    }

    pub fn as_matrix(&self) -> &BoolMatrix {
        &self.inner
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn rows(&self) -> &[u64] {
        self.inner.rows()
    }
}

impl From<PosetMatrix> for IncidenceMatrix {
    fn from(a: PosetMatrix) -> Self {
        IncidenceMatrix {
            inner: a.into_matrix(),
        }
    }
}

/// Ordered pairs `(i, j)`, `i != j`, with row `i` dominated by row `j`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct DominationProfile {
    pub pairs: BTreeSet<(usize, usize)>,
}

impl DominationProfile {
    /// Profile after relabelling row `i` as `perm(i)`.
    pub fn relabel(&self, perm: &Permutation) -> Self {
        DominationProfile {
            pairs: self
                .pairs
                .iter()
                .map(|&(i, j)| (perm.apply(i), perm.apply(j)))
                .collect(),
        }
    }
}

pub fn incidence_matrix(alpha: &IndexVector, n: usize) -> Result<IncidenceMatrix> {
    check_q(alpha, n)?;
    Ok(IncidenceMatrix {
        inner: BoolMatrix::from_rows(alpha.entries().to_vec())?,
    })
}

/// Row values as a sorted index vector over `0..2^n`.
pub fn index_of(m: &IncidenceMatrix) -> Result<IndexVector> {
    let n = m.n();
    crate::error::check_range("n", n as u64, 0, crate::posetcore::MAX_EMBED as u64)?;
    IndexVector::from_unsorted(1 << n, m.rows().to_vec())
}

#[inline]
fn dominated(lo: u64, hi: u64) -> bool {
    lo & !hi == 0
}

pub fn domination_relations(m: &IncidenceMatrix) -> DominationProfile {
    let rows = m.rows();
    let mut pairs = BTreeSet::new();
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &rj) in rows.iter().enumerate() {
            if i != j && dominated(ri, rj) {
                pairs.insert((i, j));
            }
        }
    }
    DominationProfile { pairs }
}

/// Flipping bit `j` of row `i` only touches pairs involving row `i`, so only
/// those are compared.
#[inline]
fn is_changeable(rows: &[u64], i: usize, j: usize) -> bool {
    let old = rows[i];
    let new = old ^ (1 << j);
    rows.iter().enumerate().all(|(k, &rk)| {
        k == i
            || (dominated(old, rk) == dominated(new, rk)
                && dominated(rk, old) == dominated(rk, new))
    })
}

/// Positions whose single flip leaves the full domination profile unchanged.
pub fn changeable_entries(m: &IncidenceMatrix) -> BTreeSet<(usize, usize)> {
    let n = m.n();
    let rows = m.rows();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| is_changeable(rows, i, j))
        .collect()
}

/// Changeable positions of a poset matrix whose flip also leaves a poset
/// matrix. Only these count as moves that stay inside the poset setting.
pub fn poset_changeable_entries(a: &PosetMatrix) -> BTreeSet<(usize, usize)> {
    let m = a.as_matrix();
    changeable_entries(&IncidenceMatrix::from_matrix(m.clone()))
        .into_iter()
        .filter(|&(i, j)| validate(&m.toggled(i, j)).is_ok())
        .collect()
}

pub fn flip_entry(m: &IncidenceMatrix, i: usize, j: usize) -> Result<IncidenceMatrix> {
    let n = m.n();
    if i >= n || j >= n || !is_changeable(m.rows(), i, j) {
        return Err(Error::NotChangeable { i, j });
    }
    Ok(IncidenceMatrix {
        inner: m.inner.toggled(i, j),
    })
}

/// Moves row `i` to `row_perm(i)` and column `j` to `col_perm(j)`.
pub fn permute(
    m: &IncidenceMatrix,
    row_perm: &Permutation,
    col_perm: &Permutation,
) -> Result<IncidenceMatrix> {
    let n = m.n();
    for p in [row_perm, col_perm] {
        if p.n() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: p.n(),
            });
        }
    }
    let mut rows = vec![0u64; n];
    for (i, &r) in m.rows().iter().enumerate() {
        rows[row_perm.apply(i)] = col_perm.apply_mask(r);
    }
    Ok(IncidenceMatrix {
        inner: BoolMatrix::from_rows(rows)?,
    })
}

/// Result of a breadth-first domination-orbit search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitResult {
    pub alpha: Vec<u64>,
    pub n: usize,
    /// Sorted index vectors, lexicographically ordered.
    pub members: Vec<Vec<u64>>,
    /// False when the budget stopped the search early.
    pub exhausted: bool,
    pub states_visited: usize,
}

impl OrbitResult {
    pub fn contains(&self, v: &[u64]) -> bool {
        self.members
            .binary_search_by(|m| m.as_slice().cmp(v))
            .is_ok()
    }
}

// A state is the set of row values: the profile is invariant under row order,
// and Q_{n,2^n} with n <= 6 fits one u64 as a membership mask.
fn successors(state: u64, n: usize) -> Vec<u64> {
    let rows: Vec<u64> = Bits::new(state).map(|b| b as u64).collect();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let swap = |r: u64| {
                let (x, y) = (r >> a & 1, r >> b & 1);
                if x == y {
                    r
                } else {
                    r ^ (1 << a | 1 << b)
                }
            };
            out.push(rows.iter().fold(0u64, |s, &r| s | 1 << swap(r)));
        }
    }
    for i in 0..rows.len() {
        for j in 0..n {
            if is_changeable(&rows, i, j) {
                let flipped = rows[i] ^ (1 << j);
                out.push(state & !(1 << rows[i]) | 1 << flipped);
            }
        }
    }
    out
}

/// Breadth-first closure of `M_alpha` under column transpositions and single
/// changeable flips. Row permutations are implicit because states are sets
/// of row values.
///
/// Each frontier level is expanded in parallel; successors are then merged
/// into the visited set in frontier order, so the outcome does not depend on
/// the thread count. When `budget` states have been visited the search stops
/// and the result is flagged as not exhausted.
pub fn domination_orbit(alpha: &IndexVector, n: usize, budget: usize) -> Result<OrbitResult> {
    check_q(alpha, n)?;
    let start = alpha.member_mask();
    let mut visited: HashSet<u64> = HashSet::from([start]);
    let mut order = vec![start];
    let mut frontier = vec![start];
    let mut exhausted = true;
    'search: while !frontier.is_empty() {
        let expanded: Vec<Vec<u64>> = frontier
            .par_iter()
            .map(|&s| {
                successors(s, n)
                    .into_iter()
                    .filter(|t| !visited.contains(t))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        for t in expanded.into_iter().flatten() {
            if visited.contains(&t) {
                continue;
            }
            if visited.len() >= budget {
                exhausted = false;
                break 'search;
            }
            visited.insert(t);
            order.push(t);
            next.push(t);
        }
        frontier = next;
    }
    let universe = 1u64 << n;
    let mut members: Vec<Vec<u64>> = order
        .iter()
        .map(|&s| {
            IndexVector::from_member_mask(universe, s)
                .entries()
                .to_vec()
        })
        .collect();
    members.sort();
    Ok(OrbitResult {
        alpha: alpha.entries().to_vec(),
        n,
        members,
        exhausted,
        states_visited: visited.len(),
    })
}

/// Poset matrix with `a[i][j] = 1` iff row `j` is dominated by row `i`.
///
/// Rows must be strictly increasing as integers.
pub fn reduce_to_poset_matrix(m: &IncidenceMatrix) -> Result<PosetMatrix> {
    let rows = m.rows();
    if let Some(row) = (1..rows.len()).find(|&k| rows[k - 1] >= rows[k]) {
        return Err(Error::RowsNotIncreasing { row });
    }
    let out = rows
        .iter()
        .enumerate()
        .map(|(i, &ri)| {
            rows[..=i]
                .iter()
                .enumerate()
                .filter(|(_, &rj)| dominated(rj, ri))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect::<Vec<_>>();
    debug_assert!(out
        .iter()
        .enumerate()
        .all(|(i, &r)| r & !low_mask(i + 1) == 0));
    Ok(PosetMatrix::from_valid(BoolMatrix::from_rows(out)?))
}
