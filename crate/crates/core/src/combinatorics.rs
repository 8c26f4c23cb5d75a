//! Partitions, standard and semistandard Young tableaux.
//!
//! Everything here is exact integer arithmetic. Partitions are listed in
//! reverse-lexicographic order (`{n}` first, `{1,...,1}` last) and standard
//! tableaux in lexicographic order of their row-reading word, which makes the
//! row-filling tableau the first one of every shape.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition `λ = (λ₁ ≥ λ₂ ≥ ... ≥ λ_k ≥ 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition { parts, reason: "no parts".into() });
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition { parts, reason: "zero part".into() });
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition { parts, reason: "parts must be nonincreasing".into() });
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Column lengths (the conjugate partition).
    pub fn conjugate(&self) -> Vec<usize> {
        (0..self.parts[0]).map(|c| self.parts.iter().filter(|&&p| p > c).count()).collect()
    }

    /// Cells `(row, col)` in row-major reading order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts.iter().enumerate().flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    fn hook(&self, conj: &[usize], r: usize, c: usize) -> u128 {
        ((self.parts[r] - c - 1) + (conj[c] - r - 1) + 1) as u128
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Vec<usize> {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// All partitions of `n` with at most `max_rows` parts, reverse-lexicographic.
pub fn partitions(n: usize, max_rows: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, rows_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if rows_left == 0 {
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            cur.push(part);
            rec(remaining - part, part, rows_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 || max_rows == 0 {
        return out;
    }
    rec(n, n, max_rows, &mut Vec::new(), &mut out);
    out
}

/// `p_k(n)`: partitions of `n` with exactly `k` rows, via
/// `p_k(n) = p_k(n-k) + p_{k-1}(n-1)`.
pub fn count_partitions_k_rows(n: usize, k: usize) -> u64 {
    // table[k][n]
    let mut table = vec![vec![0u64; n + 1]; k + 1];
    table[0][0] = 1;
    for kk in 1..=k {
        for nn in kk..=n {
            table[kk][nn] = table[kk][nn - kk] + table[kk - 1][nn - 1];
        }
    }
    table[k][n]
}

/// Number of irreducible sectors of the `n`-qudit Liouville space for local
/// dimension `d`: partitions of `n` into at most `d²` rows.
pub fn count_irreps(n: usize, d: usize) -> u64 {
    (1..=n.min(d * d)).map(|k| count_partitions_k_rows(n, k)).sum()
}

/// A standard Young tableau: the numbers `1..=n` placed in the diagram,
/// increasing along rows and down columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StandardTableau {
    pub shape: Partition,
    pub rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(shape: Partition, rows: Vec<Vec<usize>>) -> Result<Self> {
        let n = shape.n();
        let bad = |reason: &str| Error::InvalidArgument(format!("tableau {rows:?}: {reason}"));
        if rows.len() != shape.rows() || rows.iter().zip(shape.parts()).any(|(r, &p)| r.len() != p) {
            return Err(bad("row lengths do not match the shape"));
        }
        let mut seen = vec![false; n + 1];
        for &v in rows.iter().flatten() {
            if v == 0 || v > n || seen[v] {
                return Err(bad("entries must be 1..n, each exactly once"));
            }
            seen[v] = true;
        }
        for r in 0..rows.len() {
            for c in 0..rows[r].len() {
                if c + 1 < rows[r].len() && rows[r][c] >= rows[r][c + 1] {
                    return Err(bad("rows must strictly increase"));
                }
                if r + 1 < rows.len() && c < rows[r + 1].len() && rows[r][c] >= rows[r + 1][c] {
                    return Err(bad("columns must strictly increase"));
                }
            }
        }
        Ok(Self { shape, rows })
    }

    /// `(row, col)` of entry `v`.
    pub fn position(&self, v: usize) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(r, row)| row.iter().position(|&x| x == v).map(|c| (r, c)))
    }

    /// Content `col - row` of the cell holding `v`.
    pub fn content(&self, v: usize) -> Option<isize> {
        self.position(v).map(|(r, c)| c as isize - r as isize)
    }

    /// Entries read row by row.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Swap the entries `i` and `i + 1`; `None` when the result is not standard.
    pub fn swap_adjacent(&self, i: usize) -> Option<StandardTableau> {
        let (r1, c1) = self.position(i)?;
        let (r2, c2) = self.position(i + 1)?;
        if r1 == r2 || c1 == c2 {
            return None;
        }
        let mut rows = self.rows.clone();
        rows[r1][c1] = i + 1;
        rows[r2][c2] = i;
        Some(StandardTableau { shape: self.shape.clone(), rows })
    }
}

/// All standard tableaux of `shape`, sorted lexicographically by reading word.
pub fn standard_tableaux(shape: &Partition) -> Vec<StandardTableau> {
    fn rec(shape: &Partition, next: usize, fill: &mut Vec<Vec<usize>>, out: &mut Vec<StandardTableau>) {
        let n = shape.n();
        if next > n {
            out.push(StandardTableau { shape: shape.clone(), rows: fill.clone() });
            return;
        }
        for r in 0..shape.rows() {
            let c = fill[r].len();
            let room = c < shape.parts()[r];
            let above_ok = r == 0 || fill[r - 1].len() > c;
            if room && above_ok {
                fill[r].push(next);
                rec(shape, next + 1, fill, out);
                fill[r].pop();
            }
        }
    }
    let mut out = Vec::new();
    let mut fill = vec![Vec::new(); shape.rows()];
    rec(shape, 1, &mut fill, &mut out);
    out.sort_by_key(|t| t.reading_word());
    out
}

/// Hook-length formula `n! / ∏ hooks`.
pub fn syt_dimension(shape: &Partition) -> u64 {
    let conj = shape.conjugate();
    let mut num: u128 = (1..=shape.n() as u128).product();
    let den: u128 = shape.cells().map(|(r, c)| shape.hook(&conj, r, c)).product();
    num /= den;
    num as u64
}

/// Number of semistandard tableaux with entries in `1..=degree`, by the
/// hook-content formula.
pub fn weyl_dimension(shape: &Partition, degree: usize) -> u64 {
    if shape.rows() > degree {
        return 0;
    }
    let conj = shape.conjugate();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (r, c) in shape.cells() {
        num *= (degree + c - r) as u128;
        den *= shape.hook(&conj, r, c);
    }
    (num / den) as u64
}

/// Letter content of a string over `0..degree`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightVector {
    pub counts: Vec<usize>,
}

impl WeightVector {
    pub fn new(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    /// Content of a letter string.
    pub fn of_letters(letters: &[usize], degree: usize) -> Self {
        let mut counts = vec![0; degree];
        for &l in letters {
            counts[l] += 1;
        }
        Self { counts }
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// The nondecreasing letter string with this content.
    pub fn sorted_letters(&self) -> Vec<usize> {
        self.counts.iter().enumerate().flat_map(|(l, &c)| std::iter::repeat_n(l, c)).collect()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Visit every semistandard filling of `shape` with letters `0..degree`.
fn for_each_ssyt(shape: &Partition, degree: usize, mut visit: impl FnMut(&[Vec<usize>])) {
    fn rec(
        degree: usize,
        cells: &[(usize, usize)],
        idx: usize,
        fill: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]),
    ) {
        if idx == cells.len() {
            visit(fill);
            return;
        }
        let (r, c) = cells[idx];
        let lo_row = if c > 0 { fill[r][c - 1] } else { 0 };
        let lo_col = if r > 0 { fill[r - 1][c] + 1 } else { 0 };
        for v in lo_row.max(lo_col)..degree {
            fill[r].push(v);
            rec(degree, cells, idx + 1, fill, visit);
            fill[r].pop();
        }
    }
    let cells: Vec<_> = shape.cells().collect();
    let mut fill = vec![Vec::new(); shape.rows()];
    rec(degree, &cells, 0, &mut fill, &mut visit);
}

/// Kostka multiplicities: each letter content reached by a semistandard
/// tableau of `shape` over `degree` letters, with the number of such
/// tableaux. Contents with multiplicity zero are omitted; the list is sorted
/// lexicographically by sorted letter string.
pub fn weight_vectors(shape: &Partition, degree: usize) -> Vec<(WeightVector, u64)> {
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for_each_ssyt(shape, degree, |fill| {
        let mut letters: Vec<usize> = fill.iter().flatten().copied().collect();
        letters.sort_unstable();
        *counts.entry(letters).or_default() += 1;
    });
    counts
        .into_iter()
        .map(|(letters, m)| (WeightVector::of_letters(&letters, degree), m))
        .collect()
}

/// Kostka number `K_{shape, weight}`.
pub fn kostka_number(shape: &Partition, weight: &WeightVector) -> u64 {
    if weight.total() != shape.n() {
        return 0;
    }
    let target = weight.sorted_letters();
    let mut count = 0;
    for_each_ssyt(shape, weight.counts.len(), |fill| {
        let mut letters: Vec<usize> = fill.iter().flatten().copied().collect();
        letters.sort_unstable();
        if letters == target {
            count += 1;
        }
    });
    count
}
