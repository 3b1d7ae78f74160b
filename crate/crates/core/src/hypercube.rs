//! Vertices of the hypercube and the paired state of two coupled walks.
//!
//! Coordinates are 1-based at the public surface; index 0 denotes the
//! identity flip (`e_0 = 0`), so every jump of a coupled pair can be written
//! as a pair of indices `(i, j)` with `i, j` in `0..=n`.

use std::fmt;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypercubeError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("coordinate index {index} out of range 0..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("dimension must be positive")]
    ZeroDimension,
    #[error("invalid vertex literal {0:?}: expected a string of 0/1 characters")]
    BadLiteral(String),
}

/// A point of `Z_2^n`, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vertex {
    n: usize,
    words: Vec<u64>,
}

impl Vertex {
    /// The all-zeros vertex.
    pub fn zeros(n: usize) -> Result<Self, HypercubeError> {
        if n == 0 {
            return Err(HypercubeError::ZeroDimension);
        }
        Ok(Self {
            n,
            words: vec![0; n.div_ceil(WORD_BITS)],
        })
    }

    /// The all-ones vertex.
    pub fn ones(n: usize) -> Result<Self, HypercubeError> {
        let mut v = Self::zeros(n)?;
        v.words.iter_mut().for_each(|w| *w = u64::MAX);
        v.clear_padding();
        Ok(v)
    }

    /// Builds a vertex from bits listed in coordinate order `x(1), x(2), ...`.
    pub fn from_bits(bits: &[bool]) -> Result<Self, HypercubeError> {
        let mut v = Self::zeros(bits.len())?;
        for (pos, &b) in bits.iter().enumerate() {
            if b {
                v.words[pos / WORD_BITS] |= 1 << (pos % WORD_BITS);
            }
        }
        Ok(v)
    }

    /// The vertex whose first `k` coordinates are 1 and the rest 0.
    pub fn with_prefix_ones(n: usize, k: usize) -> Result<Self, HypercubeError> {
        if k > n {
            return Err(HypercubeError::IndexOutOfRange { index: k, n });
        }
        let bits: Vec<bool> = (0..n).map(|pos| pos < k).collect();
        Self::from_bits(&bits)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Coordinate `i` (1-based).
    pub fn get(&self, i: usize) -> Result<bool, HypercubeError> {
        if i == 0 || i > self.n {
            return Err(HypercubeError::IndexOutOfRange { index: i, n: self.n });
        }
        Ok(self.bit(i - 1))
    }

    pub fn bits(&self) -> Vec<bool> {
        (0..self.n).map(|pos| self.bit(pos)).collect()
    }

    /// Returns `self + e_i (mod 2)`; `i = 0` is the identity.
    pub fn flip(&self, i: usize) -> Result<Self, HypercubeError> {
        let mut out = self.clone();
        out.flip_in_place(i)?;
        Ok(out)
    }

    pub fn flip_in_place(&mut self, i: usize) -> Result<(), HypercubeError> {
        if i > self.n {
            return Err(HypercubeError::IndexOutOfRange { index: i, n: self.n });
        }
        if i > 0 {
            self.toggle(i - 1);
        }
        Ok(())
    }

    #[inline]
    fn bit(&self, pos: usize) -> bool {
        (self.words[pos / WORD_BITS] >> (pos % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub(crate) fn toggle(&mut self, pos: usize) {
        self.words[pos / WORD_BITS] ^= 1 << (pos % WORD_BITS);
    }

    fn clear_padding(&mut self) {
        let rem = self.n % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pos in 0..self.n {
            f.write_str(if self.bit(pos) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Vertex {
    type Err = HypercubeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(HypercubeError::BadLiteral(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_bits(&bits)
    }
}

/// Hamming distance `sum_i |x(i) - y(i)|`.
pub fn hamming(x: &Vertex, y: &Vertex) -> Result<usize, HypercubeError> {
    check_dims(x, y)?;
    Ok(x.words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as usize)
        .sum())
}

/// `flip(x, i)` as a free function.
pub fn flip(x: &Vertex, i: usize) -> Result<Vertex, HypercubeError> {
    x.flip(i)
}

fn check_dims(x: &Vertex, y: &Vertex) -> Result<(), HypercubeError> {
    if x.n != y.n {
        return Err(HypercubeError::DimensionMismatch {
            left: x.n,
            right: y.n,
        });
    }
    Ok(())
}

/// Two walkers plus the cached set `U` of coordinates where they disagree.
///
/// `unmatched` is kept sorted, with membership answered by the xor mask
/// `x ^ y`. The matched set is the complement and is never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingState {
    x: Vertex,
    y: Vertex,
    unmatched: Vec<usize>,
    diff: Vec<u64>,
}

impl CouplingState {
    pub fn new(x: Vertex, y: Vertex) -> Result<Self, HypercubeError> {
        check_dims(&x, &y)?;
        let diff: Vec<u64> = x.words.iter().zip(&y.words).map(|(a, b)| a ^ b).collect();
        let mut unmatched = Vec::new();
        for (w, &word) in diff.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let bit = rest.trailing_zeros() as usize;
                unmatched.push(w * WORD_BITS + bit + 1);
                rest &= rest - 1;
            }
        }
        Ok(Self {
            x,
            y,
            unmatched,
            diff,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.n
    }

    pub fn x(&self) -> &Vertex {
        &self.x
    }

    pub fn y(&self) -> &Vertex {
        &self.y
    }

    /// Sorted 1-based indices of unmatched coordinates.
    pub fn unmatched(&self) -> &[usize] {
        &self.unmatched
    }

    /// `N = |U|`, the Hamming distance between the walkers.
    pub fn n_unmatched(&self) -> usize {
        self.unmatched.len()
    }

    pub fn n_matched(&self) -> usize {
        self.dim() - self.unmatched.len()
    }

    pub fn is_coupled(&self) -> bool {
        self.unmatched.is_empty()
    }

    /// Membership of the 1-based coordinate `i` in `U`.
    #[inline]
    pub fn is_unmatched(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.dim());
        let pos = i - 1;
        (self.diff[pos / WORD_BITS] >> (pos % WORD_BITS)) & 1 == 1
    }

    /// The `r`-th (0-based) matched coordinate in increasing order.
    ///
    /// Below `unmatched[p]` there are `unmatched[p] - 1 - p` matched
    /// coordinates, which is nondecreasing in `p`, so a binary search over
    /// the sorted unmatched list locates the answer in `O(log N)`.
    pub fn nth_matched(&self, r: usize) -> Option<usize> {
        if r >= self.n_matched() {
            return None;
        }
        let (mut lo, mut hi) = (0, self.unmatched.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.unmatched[mid] - 1 - mid <= r {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        Some(r + 1 + lo)
    }

    /// Applies the joint jump `x <- x + e_i`, `y <- y + e_j`.
    pub fn apply(&mut self, i: usize, j: usize) -> Result<(), HypercubeError> {
        let n = self.dim();
        for idx in [i, j] {
            if idx > n {
                return Err(HypercubeError::IndexOutOfRange { index: idx, n });
            }
        }
        if i > 0 {
            self.x.toggle(i - 1);
            self.toggle_diff(i);
        }
        if j > 0 {
            self.y.toggle(j - 1);
            self.toggle_diff(j);
        }
        Ok(())
    }

    /// Replaces `y`, recomputing the unmatched set.
    pub fn reset_y(&mut self, y: Vertex) -> Result<(), HypercubeError> {
        *self = Self::new(self.x.clone(), y)?;
        Ok(())
    }

    fn toggle_diff(&mut self, i: usize) {
        let pos = i - 1;
        self.diff[pos / WORD_BITS] ^= 1 << (pos % WORD_BITS);
        match self.unmatched.binary_search(&i) {
            Ok(p) => {
                self.unmatched.remove(p);
            }
            Err(p) => self.unmatched.insert(p, i),
        }
    }
}
