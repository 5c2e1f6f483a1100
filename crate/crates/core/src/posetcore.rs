//! Poset matrices of naturally labelled posets: validation, the Pascal
//! embedding and its inverse, duality, and the even/odd index moves.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bmatrix::{flip_transpose, is_idempotent, low_mask, Bits, BoolMatrix};
use crate::error::{check_range, Error, Result};
use crate::pascal::{induced_submatrix, pascal_matrix, IndexVector};

/// Largest `n` for which `Q_{n,2^n}` fits the 64-bit universe.
pub const MAX_EMBED: usize = 6;

/// Why a Boolean matrix is not a poset matrix. Each variant carries the
/// first witness in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationError {
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("not unit lower triangular at ({i},{j})")]
    NotUnitLowerTriangular { i: usize, j: usize },
    #[error("not transitive: ({i},{j}) and ({j},{k}) are set but ({i},{k}) is not")]
    NotTransitive { i: usize, j: usize, k: usize },
}

/// A unit lower triangular, transitive Boolean matrix: `a[i][j] = 1` iff
/// `j ⪯ i` in a naturally labelled poset on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PosetMatrix(BoolMatrix);

impl PosetMatrix {
    /// Wraps rows already known to form a poset matrix.
    pub(crate) fn from_valid(m: BoolMatrix) -> Self {
        debug_assert!(validate_scan(&m).is_ok(), "{m:?}");
        PosetMatrix(m)
    }

    pub fn identity(n: usize) -> Result<Self> {
        BoolMatrix::identity(n).map(PosetMatrix)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn as_matrix(&self) -> &BoolMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> BoolMatrix {
        self.0
    }

    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.0.row(i)
    }

    /// Strict predecessors of `i` (elements below it).
    #[inline]
    pub fn below(&self, i: usize) -> u64 {
        self.0.row(i) & !(1 << i)
    }
}

impl fmt::Debug for PosetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for PosetMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl AsRef<BoolMatrix> for PosetMatrix {
    fn as_ref(&self) -> &BoolMatrix {
        &self.0
    }
}

impl TryFrom<BoolMatrix> for PosetMatrix {
    type Error = ValidationError;
    fn try_from(m: BoolMatrix) -> std::result::Result<Self, ValidationError> {
        validate(&m)
    }
}

fn validate_scan(a: &BoolMatrix) -> std::result::Result<(), ValidationError> {
    for (i, &r) in a.rows().iter().enumerate() {
        if r >> i & 1 == 0 {
            return Err(ValidationError::NotUnitLowerTriangular { i, j: i });
        }
        let above = r & !low_mask(i + 1);
        if above != 0 {
            return Err(ValidationError::NotUnitLowerTriangular {
                i,
                j: above.trailing_zeros() as usize,
            });
        }
    }
    for (i, &r) in a.rows().iter().enumerate() {
        for j in Bits::new(r & !(1 << i)) {
            let missing = a.row(j) & !r;
            if missing != 0 {
                return Err(ValidationError::NotTransitive {
                    i,
                    j,
                    k: missing.trailing_zeros() as usize,
                });
            }
        }
    }
    Ok(())
}

/// Checks that `a` is unit lower triangular and transitive.
///
/// Test and debug builds also confirm the verdict against Boolean
/// idempotence.
pub fn validate(a: &BoolMatrix) -> std::result::Result<PosetMatrix, ValidationError> {
    let verdict = validate_scan(a);
    if cfg!(any(test, debug_assertions)) && a.is_unit_lower_triangular() {
        assert_eq!(
            verdict.is_ok(),
            is_idempotent(a),
            "idempotence disagrees on {a:?}"
        );
    }
    verdict.map(|()| PosetMatrix(a.clone()))
}

/// Index vector `a_i = sum_j a[i][j] 2^j`, so that `P_{2^n}[a]` reproduces
/// the matrix. Each `a_i` lies in `[2^i, 2^(i+1))`.
pub fn embed(a: &PosetMatrix) -> Result<IndexVector> {
    let n = a.n();
    check_range("embedding dimension", n as u64, 0, MAX_EMBED as u64)?;
    IndexVector::new(1 << n, a.as_matrix().rows().to_vec())
}

/// Poset matrix of the subposet of the Pascal poset on `0..2^n_log`
/// induced by `alpha`.
pub fn realize(alpha: &IndexVector, n_log: usize) -> Result<PosetMatrix> {
    check_range("ambient exponent", n_log as u64, 0, MAX_EMBED as u64)?;
    let universe = 1u64 << n_log;
    if alpha.universe() != universe {
        return Err(Error::DimensionMismatch {
            left: universe as usize,
            right: alpha.universe() as usize,
        });
    }
    let p = pascal_matrix(universe as usize)?;
    let sub = induced_submatrix(&p, alpha)?;
    Ok(validate(&sub)?)
}

/// Matrix of the dual poset (flip transpose).
pub fn dual(a: &PosetMatrix) -> PosetMatrix {
    PosetMatrix::from_valid(flip_transpose(a.as_matrix()))
}

pub(crate) fn check_q(alpha: &IndexVector, n: usize) -> Result<()> {
    check_range("n", n as u64, 0, MAX_EMBED as u64)?;
    if alpha.universe() != 1 << n {
        return Err(Error::DimensionMismatch {
            left: 1 << n,
            right: alpha.universe() as usize,
        });
    }
    if alpha.len() != n {
        return Err(Error::WrongLength {
            expected: n,
            actual: alpha.len(),
        });
    }
    Ok(())
}

/// Complement-and-reverse: `b_i = (2^n - 1) - a_{n-1-i}`.
pub fn dual_index(alpha: &IndexVector, n: usize) -> Result<IndexVector> {
    check_q(alpha, n)?;
    let top = (1u64 << n) - 1;
    IndexVector::new(
        1 << n,
        alpha.entries().iter().rev().map(|&a| top - a).collect(),
    )
}

/// True iff `a_i + a_{n-1-i} = 2^n - 1` for all `i`.
pub fn is_self_dual_index(alpha: &IndexVector, n: usize) -> Result<bool> {
    check_q(alpha, n)?;
    let top = (1u64 << n) - 1;
    let e = alpha.entries();
    Ok((0..n).all(|i| e[i] + e[n - 1 - i] == top))
}

/// Members of the Pascal-equivalence class of `alpha` reachable in one step:
/// `{a/2, a+1}` when every entry is even, `{(a-1)/2, a-1}` when every entry is
/// odd, nothing otherwise.
pub fn even_odd_moves(alpha: &IndexVector, n: usize) -> Result<BTreeSet<IndexVector>> {
    check_q(alpha, n)?;
    let e = alpha.entries();
    let universe = alpha.universe();
    let map =
        |f: &dyn Fn(u64) -> u64| IndexVector::new(universe, e.iter().map(|&a| f(a)).collect());
    let mut out = BTreeSet::new();
    if e.iter().all(|a| a % 2 == 0) {
        out.insert(map(&|a| a / 2)?);
        out.insert(map(&|a| a + 1)?);
    } else if e.iter().all(|a| a % 2 == 1) {
        out.insert(map(&|a| (a - 1) / 2)?);
        out.insert(map(&|a| a - 1)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]]) -> BoolMatrix {
        BoolMatrix::from_bits(rows).unwrap()
    }

    fn pm(rows: &[&[u8]]) -> PosetMatrix {
        validate(&m(rows)).unwrap()
    }

    fn iv(universe: u64, e: &[u64]) -> IndexVector {
        IndexVector::new(universe, e.to_vec()).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate(&m(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]])).is_ok());
        assert_eq!(
            validate(&m(&[&[1, 0, 0], &[1, 1, 0], &[0, 1, 1]])),
            Err(ValidationError::NotTransitive { i: 2, j: 1, k: 0 })
        );
        assert_eq!(
            validate(&m(&[&[1, 1], &[0, 1]])),
            Err(ValidationError::NotUnitLowerTriangular { i: 0, j: 1 })
        );
        assert_eq!(
            validate(&m(&[&[1, 0], &[1, 0]])),
            Err(ValidationError::NotUnitLowerTriangular { i: 1, j: 1 })
        );
        assert_eq!(
            validate(&m(&[&[0, 1], &[1, 1]])),
            Err(ValidationError::NotUnitLowerTriangular { i: 0, j: 0 })
        );
        assert!(validate(&BoolMatrix::zeros(0).unwrap()).is_ok());
    }

    #[test]
    fn validation_error_json() {
        let e = ValidationError::NotTransitive { i: 2, j: 1, k: 0 };
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"kind":"not_transitive","i":2,"j":1,"k":0}"#
        );
    }

    #[test]
    fn embed_examples() {
        let a3 = pm(&[&[1, 0, 0], &[1, 1, 0], &[1, 0, 1]]);
        assert_eq!(embed(&a3).unwrap(), iv(8, &[1, 3, 5]));
        assert_eq!(
            embed(&PosetMatrix::identity(3).unwrap()).unwrap(),
            iv(8, &[1, 2, 4])
        );
        let a5 = pm(&[&[1, 0, 0], &[1, 1, 0], &[1, 1, 1]]);
        assert_eq!(embed(&a5).unwrap(), iv(8, &[1, 3, 7]));
        assert!(embed(&PosetMatrix::identity(7).unwrap()).is_err());
    }

    #[test]
    fn realize_examples() {
        assert_eq!(
            realize(&iv(8, &[1, 2, 7]), 3).unwrap(),
            pm(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]])
        );
        assert_eq!(
            realize(&iv(16, &[2, 5, 9, 13]), 4).unwrap(),
            pm(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 1, 1, 1]])
        );
        assert_eq!(realize(&iv(2, &[0]), 1).unwrap(), pm(&[&[1]]));
        assert!(realize(&iv(8, &[1]), 4).is_err());
        assert!(realize(&iv(8, &[1]), 7).is_err());
    }

    #[test]
    fn dual_examples() {
        let a = pm(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 1, 1]]);
        let star = pm(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[0, 0, 1, 0], &[1, 1, 1, 1]]);
        assert_eq!(dual(&a), star);
        let i4 = PosetMatrix::identity(4).unwrap();
        assert_eq!(dual(&i4), i4);
        let alpha = iv(16, &[0, 1, 3, 12]);
        assert_eq!(
            realize(&alpha, 4).unwrap(),
            pm(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 1, 1, 0], &[1, 0, 0, 1]])
        );
        assert_eq!(
            dual(&realize(&alpha, 4).unwrap()),
            realize(&iv(16, &[3, 12, 14, 15]), 4).unwrap()
        );
    }

    #[test]
    fn dual_index_examples() {
        assert_eq!(
            dual_index(&iv(16, &[0, 1, 3, 12]), 4).unwrap(),
            iv(16, &[3, 12, 14, 15])
        );
        assert_eq!(
            dual_index(&iv(16, &[0, 5, 10, 15]), 4).unwrap(),
            iv(16, &[0, 5, 10, 15])
        );
        let alpha = iv(8, &[1, 2, 4]);
        let beta = dual_index(&alpha, 3).unwrap();
        assert_eq!(beta, iv(8, &[3, 5, 6]));
        // entrywise flip of the realized matrix
        let a = realize(&alpha, 3).unwrap();
        let b = realize(&beta, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.as_matrix().get(i, j), a.as_matrix().get(2 - j, 2 - i));
            }
        }
        assert!(dual_index(&iv(8, &[1, 2]), 3).is_err());
    }

    #[test]
    fn self_dual_examples() {
        assert!(is_self_dual_index(&iv(16, &[0, 5, 10, 15]), 4).unwrap());
        assert!(!is_self_dual_index(&iv(16, &[0, 1, 3, 12]), 4).unwrap());
        assert_eq!(
            realize(&iv(16, &[0, 5, 10, 15]), 4).unwrap(),
            pm(&[&[1, 0, 0, 0], &[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 1, 1, 1]])
        );
    }

    #[test]
    fn even_odd_examples() {
        let got = even_odd_moves(&iv(8, &[2, 4, 6]), 3).unwrap();
        assert_eq!(got, BTreeSet::from([iv(8, &[1, 2, 3]), iv(8, &[3, 5, 7])]));
        let got = even_odd_moves(&iv(8, &[1, 3, 5]), 3).unwrap();
        assert_eq!(got, BTreeSet::from([iv(8, &[0, 1, 2]), iv(8, &[0, 2, 4])]));
        assert!(even_odd_moves(&iv(8, &[1, 2, 4]), 3).unwrap().is_empty());
    }
}
