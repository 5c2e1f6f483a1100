//! Square Boolean matrices over the `{0,1}` semiring (OR as sum, AND as
//! product), stored one `u64` bit mask per row.
//!
//! Row `i` has bit `j` set iff entry `(i, j)` is 1, so dimensions are capped
//! at 64. All operations return new values.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 64;

/// Mask with the low `n` bits set.
#[inline]
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over the positions of set bits, lowest first.
#[derive(Debug, Clone, Copy)]
pub struct Bits(u64);

impl Bits {
    pub fn new(mask: u64) -> Self {
        Bits(mask)
    }
}

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Bits {}

/// An `n x n` Boolean matrix.
///
/// The derived ordering compares the dimension and then the row masks as
/// integers; it is only meant for ordered containers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct BoolMatrix {
    n: usize,
    rows: Vec<u64>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(BoolMatrix {
            n,
            rows: vec![0; n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(BoolMatrix {
            n,
            rows: (0..n).map(|i| 1u64 << i).collect(),
        })
    }

    /// Builds a matrix from row masks; the dimension is the number of rows.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_dim(n)?;
        let allowed = low_mask(n);
        for (i, &r) in rows.iter().enumerate() {
            if r & !allowed != 0 {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("row mask {r:#x} has bits beyond column {}", n.max(1) - 1),
                });
            }
        }
        Ok(BoolMatrix { n, rows })
    }

    /// Builds a matrix from nested 0/1 values.
    pub fn from_bits<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut masks = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(crate::posetcore::ValidationError::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: n,
                }
                .into());
            }
            let mut m = 0u64;
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m |= 1 << j,
                    other => {
                        return Err(Error::Parse {
                            line: i + 1,
                            message: format!("entry {other} is not 0 or 1"),
                        })
                    }
                }
            }
            masks.push(m);
        }
        Self::from_rows(masks)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn row(&self, i: usize) -> u64 {
        self.rows[i]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Copy of `self` with entry `(i, j)` toggled.
    pub fn toggled(&self, i: usize, j: usize) -> Self {
        let mut rows = self.rows.clone();
        rows[i] ^= 1 << j;
        BoolMatrix { n: self.n, rows }
    }

    /// Column `j` as a mask over rows.
    pub fn column(&self, j: usize) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | ((r >> j & 1) << i))
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    /// Unit lower triangular: ones on the diagonal, zeros above it.
    pub fn is_unit_lower_triangular(&self) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, &r)| r & !low_mask(i + 1) == 0 && r >> i & 1 == 1)
    }

    /// Entries in row-major order as a string of `0`/`1`.
    pub fn bit_string(&self) -> String {
        let mut s = String::with_capacity(self.n * self.n);
        for &r in &self.rows {
            for j in 0..self.n {
                s.push(if r >> j & 1 == 1 { '1' } else { '0' });
            }
        }
        s
    }

    /// Text form: one line per row, no separators, trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.n * (self.n + 1));
        for line in self.row_strings() {
            s.push_str(&line);
            s.push('\n');
        }
        s
    }

    fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| {
                (0..self.n)
                    .map(|j| if r >> j & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Parses the text form. Leading and trailing blank lines are ignored;
    /// single spaces between entries are accepted.
    pub fn parse_text(text: &str) -> Result<Self> {
        let lines: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end()))
            .collect();
        let start = lines.iter().position(|(_, l)| !l.is_empty());
        let Some(start) = start else {
            return Self::zeros(0);
        };
        let end = lines
            .iter()
            .rposition(|(_, l)| !l.is_empty())
            .unwrap_or(start);
        let body = &lines[start..=end];
        let n = body.len();
        check_dim(n)?;
        let mut rows = Vec::with_capacity(n);
        for (i, &(line_no, line)) in body.iter().enumerate() {
            let entries = parse_row(line_no, line)?;
            if entries.len() != n {
                return Err(crate::posetcore::ValidationError::NotSquare {
                    row: i,
                    len: entries.len(),
                    expected: n,
                }
                .into());
            }
            let m = entries
                .iter()
                .enumerate()
                .fold(0u64, |m, (j, &b)| if b { m | 1 << j } else { m });
            rows.push(m);
        }
        Ok(BoolMatrix { n, rows })
    }
}

fn parse_row(line_no: usize, line: &str) -> Result<Vec<bool>> {
    let bytes = line.as_bytes();
    let spaced = bytes.contains(&b' ');
    let mut out = Vec::with_capacity(bytes.len());
    for (k, &c) in bytes.iter().enumerate() {
        if spaced && k % 2 == 1 {
            if c != b' ' {
                return Err(Error::Parse {
                    line: line_no,
                    message: "entries must be separated by single spaces or not at all".into(),
                });
            }
            continue;
        }
        match c {
            b'0' => out.push(false),
            b'1' => out.push(true),
            _ => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unexpected character {:?}", c as char),
                })
            }
        }
    }
    Ok(out)
}

fn check_dim(n: usize) -> Result<()> {
    crate::error::check_range("dimension", n as u64, 0, MAX_DIM as u64)
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.row_strings()).finish()
    }
}

impl fmt::Display for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    rows: Vec<String>,
}

impl From<BoolMatrix> for MatrixJson {
    fn from(m: BoolMatrix) -> Self {
        MatrixJson {
            n: m.n,
            rows: m.row_strings(),
        }
    }
}

impl TryFrom<MatrixJson> for BoolMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.rows.len() != j.n {
            return Err(Error::Parse {
                line: 0,
                message: format!("\"n\" is {} but {} rows given", j.n, j.rows.len()),
            });
        }
        let text = j.rows.join("\n");
        let m = BoolMatrix::parse_text(&text)?;
        if m.n != j.n {
            return Err(Error::Parse {
                line: 0,
                message: "blank rows are not allowed".into(),
            });
        }
        Ok(m)
    }
}

/// A bijection on `0..n`; `map[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        if n > MAX_DIM {
            return Err(Error::InvalidPermutation(format!(
                "size {n} exceeds {MAX_DIM}"
            )));
        }
        let mut seen = 0u64;
        for &x in &map {
            if x >= n {
                return Err(Error::InvalidPermutation(format!(
                    "image {x} out of range 0..{n}"
                )));
            }
            if seen >> x & 1 == 1 {
                return Err(Error::InvalidPermutation(format!("image {x} repeated")));
            }
            seen |= 1 << x;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Permutation { map }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.map.len()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { map: inv }
    }

    /// Image of a bit mask under the permutation.
    pub fn apply_mask(&self, mask: u64) -> u64 {
        Bits(mask).fold(0, |acc, j| acc | 1 << self.map[j])
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Permutation::new(v)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.map
    }
}

/// Boolean product: `C[i][j] = OR_k (a[i][k] AND b[k][j])`.
pub fn bool_mul(a: &BoolMatrix, b: &BoolMatrix) -> Result<BoolMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let rows = a
        .rows
        .iter()
        .map(|&r| Bits(r).fold(0u64, |acc, k| acc | b.rows[k]))
        .collect();
    Ok(BoolMatrix { n: a.n, rows })
}

pub fn is_idempotent(a: &BoolMatrix) -> bool {
    bool_mul(a, a).map(|sq| sq == *a).unwrap_or(false)
}

/// Conjugation `QᵀAQ`: `result[q(i)][q(j)] = a[i][j]`.
pub fn permute_similar(a: &BoolMatrix, q: &Permutation) -> Result<BoolMatrix> {
    if a.n != q.n() {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: q.n(),
        });
    }
    let mut rows = vec![0u64; a.n];
    for (i, &r) in a.rows.iter().enumerate() {
        rows[q.apply(i)] = q.apply_mask(r);
    }
    Ok(BoolMatrix { n: a.n, rows })
}

/// Reflection across the anti-diagonal: `result[i][j] = a[n-1-j][n-1-i]`.
pub fn flip_transpose(a: &BoolMatrix) -> BoolMatrix {
    let n = a.n;
    let mut rows = vec![0u64; n];
    for (src_i, &r) in a.rows.iter().enumerate() {
        let j = n - 1 - src_i;
        for src_j in Bits(r) {
            rows[n - 1 - src_j] |= 1 << j;
        }
    }
    BoolMatrix { n, rows }
}
