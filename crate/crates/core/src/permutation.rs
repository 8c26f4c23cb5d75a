//! Permutations of `n` tensor factors in one-line notation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, ..., n-1}` stored as its images, `π(i) = images[i]`.
///
/// Composition follows `(π ∘ σ)(i) = π(σ(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From 0-based images.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(images));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// From the usual 1-based one-line notation, e.g. `[2, 1, 3]`.
    pub fn from_one_line(one_based: &[usize]) -> Result<Self> {
        if one_based.contains(&0) {
            return Err(Error::InvalidPermutation(one_based.to_vec()));
        }
        Self::new(one_based.iter().map(|&i| i - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// The adjacent transposition `s_i = (i, i+1)` with 1-based `i` in `1..n`.
    pub fn adjacent(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(Error::IndexOutOfRange(format!("adjacent transposition s_{i} in S_{n}")));
        }
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(i - 1, i);
        Ok(Self { images })
    }

    /// All `n!` permutations in lexicographic order of their images.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { images: cur.clone() });
            // next permutation
            let Some(k) = (0..n.saturating_sub(1)).rev().find(|&k| cur[k] < cur[k + 1]) else {
                break;
            };
            let l = (k + 1..n).rev().find(|&l| cur[k] < cur[l]).unwrap();
            cur.swap(k, l);
            cur[k + 1..].reverse();
        }
        out
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation { images: other.images.iter().map(|&j| self.images[j]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    /// Lexicographic rank among all permutations of the same degree.
    pub fn rank(&self) -> usize {
        let n = self.len();
        let mut rank = 0;
        let mut fact: usize = (1..n).product::<usize>().max(1);
        for i in 0..n {
            let smaller = self.images[i + 1..].iter().filter(|&&x| x < self.images[i]).count();
            rank += smaller * fact;
            fact = fact.checked_div(n - 1 - i).unwrap_or(fact);
        }
        rank
    }

    /// Move the entry at position `k` to position `π(k)`:
    /// `out[π(k)] = digits[k]`, i.e. `out[i] = digits[π⁻¹(i)]`.
    pub fn permute_positions<T: Copy>(&self, digits: &[T]) -> Vec<T> {
        let mut out = digits.to_vec();
        for (k, &d) in digits.iter().enumerate() {
            out[self.images[k]] = d;
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Permutation::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}
