//! Generation of all poset matrices of a given order, canonical forms under
//! permutation similarity, isomorphism-class counting and the exhaustive
//! Pascal-equivalence classification of index vectors.
//!
//! The canonical form of a poset matrix is the lexicographically least
//! row-major bit string among all relabelings that are again poset matrices.
//! Those relabelings are exactly the linear extensions of the poset, so the
//! search walks linear extensions and prunes any prefix whose rows already
//! compare greater than the best found so far.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bmatrix::{Bits, BoolMatrix, Permutation};
use crate::domination::OrbitResult;
use crate::error::{check_range, Result};
use crate::pascal::{index_vectors, IndexVector};
use crate::posetcore::{check_q, dual_index, PosetMatrix};

pub const MAX_ENUMERATE: usize = 8;
pub const MAX_CANONICAL: usize = 8;
pub const MAX_CLASS_COUNT: usize = 7;
pub const MAX_CLASSIFY: usize = 4;

/// Row `i` below-diagonal mask `m` is admissible when it is downward closed
/// with respect to the rows already placed.
#[inline]
fn admissible(rows: &[u64], m: u64) -> bool {
    Bits::new(m).all(|j| rows[j] & !m == 0)
}

/// Streams every `n x n` poset matrix once, in lexicographic order of the
/// row-mask sequence.
#[derive(Debug, Clone)]
pub struct PosetMatrices {
    n: usize,
    fixed: usize,
    rows: Vec<u64>,
    cursor: Vec<u64>,
    yielded: bool,
    done: bool,
}

impl PosetMatrices {
    /// Streams the completions of a fixed prefix of rows. The prefix must
    /// itself be the leading rows of some poset matrix.
    pub fn with_prefix(n: usize, prefix: &[u64]) -> Result<Self> {
        check_range("enumeration order", n as u64, 0, MAX_ENUMERATE as u64)?;
        check_range("prefix length", prefix.len() as u64, 0, n as u64)?;
        for (i, &r) in prefix.iter().enumerate() {
            let below = r & !(1 << i);
            let ok = r >> i == 1 && admissible(&prefix[..i], below);
            if !ok {
                return Err(crate::error::Error::InvalidMask {
                    kind: "poset matrix prefix",
                    detail: format!("row {i} = {r:#b}"),
                });
            }
        }
        Ok(PosetMatrices {
            n,
            fixed: prefix.len(),
            rows: prefix.to_vec(),
            cursor: vec![0; n + 1],
            yielded: false,
            done: false,
        })
    }
}

impl Iterator for PosetMatrices {
    type Item = PosetMatrix;

    fn next(&mut self) -> Option<PosetMatrix> {
        if self.done {
            return None;
        }
        if self.yielded {
            self.yielded = false;
            if self.rows.len() > self.fixed {
                self.rows.pop();
            } else {
                self.done = true;
                return None;
            }
        }
        loop {
            let d = self.rows.len();
            if d == self.n {
                self.yielded = true;
                let m = BoolMatrix::from_rows(self.rows.clone()).expect("dimension checked");
                return Some(PosetMatrix::from_valid(m));
            }
            let limit = 1u64 << d;
            let mut m = self.cursor[d];
            while m < limit && !admissible(&self.rows, m) {
                m += 1;
            }
            if m < limit {
                self.cursor[d] = m + 1;
                self.rows.push(m | 1 << d);
                self.cursor[d + 1] = 0;
                continue;
            }
            if d == self.fixed {
                self.done = true;
                return None;
            }
            self.rows.pop();
        }
    }
}

pub fn enumerate_poset_matrices(n: usize) -> Result<PosetMatrices> {
    PosetMatrices::with_prefix(n, &[])
}

/// All valid leading-row prefixes of length `depth`, in enumeration order.
/// Streaming each with [`PosetMatrices::with_prefix`] and concatenating
/// reproduces the full enumeration.
pub fn prefixes(n: usize, depth: usize) -> Result<Vec<Vec<u64>>> {
    let depth = depth.min(n);
    Ok(PosetMatrices::with_prefix(depth, &[])?
        .map(|p| p.as_matrix().rows().to_vec())
        .collect())
}

/// Prefix depth used to split enumeration work between threads.
fn split_depth(n: usize) -> usize {
    n.min(4)
}

/// Number of `n x n` poset matrices.
pub fn count_poset_matrices(n: usize) -> Result<u64> {
    let pre = prefixes(n, split_depth(n))?;
    pre.par_iter()
        .map(|p| PosetMatrices::with_prefix(n, p).map(|it| it.count() as u64))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// A canonical form with the relabeling that produces it:
/// `permute_similar(input, witness) == form`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    pub form: PosetMatrix,
    pub witness: Permutation,
}

struct Search<'a> {
    below: &'a [u64],
    n: usize,
    order: Vec<usize>,
    keys: Vec<u64>,
    best_keys: Vec<u64>,
    best_order: Vec<usize>,
    found: bool,
}

impl Search<'_> {
    // Bit (k-1-j) of the key is the new entry (k, j), so comparing keys as
    // integers compares row k's bit strings left to right.
    fn key(&self, e: usize) -> u64 {
        self.order
            .iter()
            .fold(0u64, |key, &o| key << 1 | (self.below[e] >> o & 1))
    }

    fn run(&mut self, placed: u64) {
        let k = self.order.len();
        if k == self.n {
            if !self.found || self.keys < self.best_keys {
                self.best_keys.clone_from(&self.keys);
                self.best_order.clone_from(&self.order);
                self.found = true;
            }
            return;
        }
        let cands: Vec<(usize, u64)> = (0..self.n)
            .filter(|&e| placed >> e & 1 == 0 && self.below[e] & !placed == 0)
            .map(|e| (e, self.key(e)))
            .collect();
        // every prefix extends to a full linear extension, so a larger key
        // at this depth can never win
        let min = cands
            .iter()
            .map(|c| c.1)
            .min()
            .expect("a minimal element exists");
        for &(e, key) in cands.iter().filter(|c| c.1 == min) {
            self.keys.push(key);
            if !self.found || self.keys[..] <= self.best_keys[..=k] {
                self.order.push(e);
                self.run(placed | 1 << e);
                self.order.pop();
            }
            self.keys.pop();
        }
    }
}

/// Canonical form and witness permutation by branch-and-bound over linear
/// extensions.
pub fn canonical_labeling(a: &PosetMatrix) -> Result<Canonical> {
    let n = a.n();
    check_range("canonical form order", n as u64, 0, MAX_CANONICAL as u64)?;
    let below: Vec<u64> = (0..n).map(|i| a.below(i)).collect();
    let mut s = Search {
        below: &below,
        n,
        order: Vec::with_capacity(n),
        keys: Vec::with_capacity(n),
        best_keys: Vec::new(),
        best_order: Vec::new(),
        found: false,
    };
    s.run(0);
    let mut map = vec![0usize; n];
    for (new, &old) in s.best_order.iter().enumerate() {
        map[old] = new;
    }
    let witness = Permutation::new(map)?;
    let rows = s
        .best_order
        .iter()
        .map(|&old| witness.apply_mask(a.row(old)))
        .collect();
    Ok(Canonical {
        form: PosetMatrix::from_valid(BoolMatrix::from_rows(rows)?),
        witness,
    })
}

pub fn canonical_form(a: &PosetMatrix) -> Result<PosetMatrix> {
    canonical_labeling(a).map(|c| c.form)
}

/// Canonical form -> number of labelled poset matrices in its class.
pub fn class_census(n: usize) -> Result<BTreeMap<PosetMatrix, u64>> {
    check_range("class count order", n as u64, 0, MAX_CLASS_COUNT as u64)?;
    let pre = prefixes(n, split_depth(n))?;
    let parts: Vec<HashMap<PosetMatrix, u64>> = pre
        .par_iter()
        .map(|p| {
            let mut local = HashMap::new();
            for a in PosetMatrices::with_prefix(n, p)? {
                *local.entry(canonical_form(&a)?).or_insert(0) += 1;
            }
            Ok(local)
        })
        .collect::<Result<_>>()?;
    let mut merged = BTreeMap::new();
    for part in parts {
        for (k, v) in part {
            *merged.entry(k).or_insert(0) += v;
        }
    }
    Ok(merged)
}

/// Number of isomorphism classes of posets on `n` elements.
pub fn count_isomorphism_classes(n: usize) -> Result<u64> {
    class_census(n).map(|c| c.len() as u64)
}

/// One Pascal-equivalence class of `Q_{n,2^n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub n: usize,
    pub canonical: PosetMatrix,
    /// Labelled poset matrices in the permutation-similarity class.
    pub class_size_labelled: u64,
    /// Index vectors of `Q_{n,2^n}` in the class.
    pub index_vector_count: u64,
    pub sample_index_vectors: Vec<IndexVector>,
}

/// `P_{2^n}[alpha]` computed straight from the supports.
pub(crate) fn realize_rows(entries: &[u64]) -> PosetMatrix {
    let rows = entries
        .iter()
        .map(|&ai| {
            entries
                .iter()
                .enumerate()
                .filter(|(_, &aj)| aj & !ai == 0)
                .fold(0u64, |m, (j, _)| m | 1 << j)
        })
        .collect();
    PosetMatrix::from_valid(BoolMatrix::from_rows(rows).expect("at most 64 entries"))
}

fn canonical_of_index(alpha: &IndexVector) -> Result<PosetMatrix> {
    canonical_form(&realize_rows(alpha.entries()))
}

/// Partitions `Q_{n,2^n}` by the canonical form of the realized poset.
/// Classes come out in canonical-form order; samples are the
/// lexicographically first `sample_limit` members.
pub fn classify_index_vectors(n: usize, sample_limit: usize) -> Result<Vec<ClassReport>> {
    check_range("classification order", n as u64, 0, MAX_CLASSIFY as u64)?;
    let census = class_census(n)?;
    let all: Vec<IndexVector> = index_vectors(n, 1 << n).collect();
    let forms: Vec<PosetMatrix> = all
        .par_iter()
        .map(canonical_of_index)
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<PosetMatrix, (u64, Vec<IndexVector>)> = BTreeMap::new();
    for (alpha, form) in all.into_iter().zip(forms) {
        let entry = classes.entry(form).or_default();
        entry.0 += 1;
        if entry.1.len() < sample_limit {
            entry.1.push(alpha);
        }
    }
    Ok(classes
        .into_iter()
        .map(|(canonical, (count, samples))| ClassReport {
            n,
            class_size_labelled: census.get(&canonical).copied().unwrap_or(0),
            canonical,
            index_vector_count: count,
            sample_index_vectors: samples,
        })
        .collect())
}

/// Exhaustive Pascal-equivalence class `[alpha]` of `Q_{n,2^n}`.
pub fn exhaustive_class(alpha: &IndexVector, n: usize) -> Result<OrbitResult> {
    check_q(alpha, n)?;
    check_range("exhaustive class order", n as u64, 0, 5)?;
    let target = canonical_of_index(alpha)?;
    let all: Vec<IndexVector> = index_vectors(n, 1 << n).collect();
    let hits: Vec<bool> = all
        .par_iter()
        .map(|b| canonical_of_index(b).map(|f| f == target))
        .collect::<Result<_>>()?;
    let members: Vec<Vec<u64>> = all
        .iter()
        .zip(&hits)
        .filter(|(_, &h)| h)
        .map(|(b, _)| b.entries().to_vec())
        .collect();
    Ok(OrbitResult {
        alpha: alpha.entries().to_vec(),
        n,
        states_visited: all.len(),
        members,
        exhausted: true,
    })
}

/// Number of random ordered pairs checked by [`dual_class_check`] at `n = 4`.
pub const DUAL_CHECK_SAMPLES: usize = 10_000;
pub const DUAL_CHECK_SEED: u64 = 0x5eed_d0a1;

/// Checks that `alpha ~ beta` iff their dual index vectors are equivalent:
/// every ordered pair for `n <= 3`, [`DUAL_CHECK_SAMPLES`] seeded random pairs
/// at `n = 4`.
pub fn dual_class_check(n: usize) -> Result<bool> {
    check_range("dual check order", n as u64, 0, MAX_CLASSIFY as u64)?;
    let all: Vec<IndexVector> = index_vectors(n, 1 << n).collect();
    let forms: Vec<(PosetMatrix, PosetMatrix)> = all
        .par_iter()
        .map(|a| {
            Ok((
                canonical_of_index(a)?,
                canonical_of_index(&dual_index(a, n)?)?,
            ))
        })
        .collect::<Result<_>>()?;
    let agree = |i: usize, j: usize| (forms[i].0 == forms[j].0) == (forms[i].1 == forms[j].1);
    let len = all.len();
    if n <= 3 {
        return Ok((0..len).all(|i| (0..len).all(|j| agree(i, j))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DUAL_CHECK_SEED);
    Ok((0..DUAL_CHECK_SAMPLES).all(|_| agree(rng.gen_range(0..len), rng.gen_range(0..len))))
}
