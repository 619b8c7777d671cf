//! Geometry of the Hamming cube `B^n`: words, distance, balls and the
//! canonical "distance, then lexicographic" ordering around a center.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{param, Error, Result};

/// Largest word length any configuration may use. `N_MAX` settings are
/// clamped to this.
pub const WORD_BITS_MAX: usize = 16;

/// Default `N_MAX`.
pub const DEFAULT_N_MAX: usize = 14;

const BINOM_ROWS: usize = 33;

const fn binomial_table() -> [[u64; BINOM_ROWS]; BINOM_ROWS] {
    let mut t = [[0u64; BINOM_ROWS]; BINOM_ROWS];
    let mut n = 0;
    while n < BINOM_ROWS {
        t[n][0] = 1;
        let mut k = 1;
        while k <= n {
            t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            k += 1;
        }
        n += 1;
    }
    t
}

static BINOMIALS: [[u64; BINOM_ROWS]; BINOM_ROWS] = binomial_table();

/// `C(n, k)`, zero when `k > n`.
#[inline]
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        0
    } else {
        BINOMIALS[n][k]
    }
}

/// A fixed-length bit string. Bit 0 of the textual form is the most
/// significant bit of `value()`, so lexicographic order on same-length
/// words coincides with numeric order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u32,
}

impl Word {
    pub fn new(bits: u32, len: usize) -> Result<Word> {
        if len > WORD_BITS_MAX {
            return param(format!("word length {len} exceeds {WORD_BITS_MAX}"));
        }
        if len < 32 && bits >> len != 0 {
            return param(format!("value {bits} does not fit in {len} bits"));
        }
        Ok(Word::from_raw(bits, len))
    }

    #[inline]
    pub(crate) fn from_raw(bits: u32, len: usize) -> Word {
        debug_assert!(len <= WORD_BITS_MAX && bits >> len == 0);
        Word { len: len as u8, bits }
    }

    /// The empty word ε.
    pub fn empty() -> Word {
        Word::default()
    }

    pub fn zeros(len: usize) -> Result<Word> {
        Word::new(0, len)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The word read as a binary number, first character most significant.
    #[inline]
    pub fn value(&self) -> u32 {
        self.bits
    }

    /// Character `i` of the textual form.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len(), "bit index {i} out of range");
        self.bits >> (self.len() - 1 - i) & 1 == 1
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn xor(&self, other: &Word) -> Result<Word> {
        if self.len != other.len {
            return param(format!("length mismatch: {} vs {}", self.len, other.len));
        }
        Ok(Word::from_raw(self.bits ^ other.bits, self.len()))
    }

    /// All of `B^n` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = Word> {
        assert!(len <= WORD_BITS_MAX);
        (0..1u32 << len).map(move |b| Word::from_raw(b, len))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        if s.len() > WORD_BITS_MAX {
            return Err(Error::Format(format!("word of length {} exceeds {WORD_BITS_MAX}", s.len())));
        }
        let mut bits = 0u32;
        for c in s.chars() {
            bits = match c {
                '0' => bits << 1,
                '1' => bits << 1 | 1,
                _ => return Err(Error::Format(format!("invalid character {c:?} in word {s:?}"))),
            };
        }
        Ok(Word::from_raw(bits, s.len()))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_pair(a: &Word, b: &Word) -> Result<()> {
    if a.len != b.len {
        return param(format!("length mismatch: {} vs {}", a.len, b.len));
    }
    if a.is_empty() {
        return param("distance is undefined on empty words");
    }
    Ok(())
}

/// Number of coordinates where `a` and `b` differ.
pub fn distance(a: &Word, b: &Word) -> Result<usize> {
    check_pair(a, b)?;
    Ok(raw_distance(a, b))
}

#[inline]
pub(crate) fn raw_distance(a: &Word, b: &Word) -> usize {
    (a.bits ^ b.bits).count_ones() as usize
}

/// `Vol(n, e) = sum_{i <= e} C(n, i)`.
pub fn ball_volume(n: usize, e: usize) -> Result<u64> {
    if n > WORD_BITS_MAX {
        return param(format!("n = {n} exceeds {WORD_BITS_MAX}"));
    }
    if e > n {
        return param(format!("radius {e} exceeds length {n}"));
    }
    Ok(volume(n, e))
}

#[inline]
pub(crate) fn volume(n: usize, e: usize) -> u64 {
    (0..=e.min(n)).map(|i| binomial(n, i)).sum()
}

/// Position of `x` in the ordering of `B^n` around `y`: ascending distance
/// from `y`, ties by ascending lexicographic order.
pub fn rank_of(y: &Word, x: &Word) -> Result<u64> {
    check_pair(y, x)?;
    Ok(raw_rank(y, x))
}

pub(crate) fn raw_rank(y: &Word, x: &Word) -> u64 {
    let n = y.len();
    let d = raw_distance(x, y);
    let mut rank = volume(n, d.saturating_sub(1));
    if d == 0 {
        return 0;
    }
    // Count shell words w < x: walk the shared prefix, branching to w_p = 0
    // wherever x_p = 1.
    let mut used = 0usize;
    for p in (0..n).rev() {
        let xb = x.bits >> p & 1;
        let yb = (y.bits >> p & 1) as usize;
        if xb == 1 {
            let need = d as isize - used as isize - yb as isize;
            if need >= 0 {
                rank += binomial(p, need as usize);
            }
            used += 1 - yb;
        } else {
            used += yb;
        }
        if used > d {
            break;
        }
    }
    rank
}

/// Inverse of [`rank_of`].
pub fn word_at_rank(y: &Word, r: u64) -> Result<Word> {
    if y.is_empty() {
        return param("ranking needs a nonempty center");
    }
    if r >= 1u64 << y.len() {
        return param(format!("rank {r} out of range for n = {}", y.len()));
    }
    Ok(raw_unrank(y, r))
}

pub(crate) fn raw_unrank(y: &Word, r: u64) -> Word {
    let n = y.len();
    let mut d = 0;
    let mut rest = r;
    while rest >= binomial(n, d) {
        rest -= binomial(n, d);
        d += 1;
    }
    let mut bits = 0u32;
    let mut used = 0usize;
    for p in (0..n).rev() {
        let yb = (y.bits >> p & 1) as usize;
        // completions with w_p = 0
        let need = d as isize - used as isize - yb as isize;
        let zeros = if need >= 0 { binomial(p, need as usize) } else { 0 };
        if rest < zeros {
            used += yb;
        } else {
            rest -= zeros;
            bits |= 1 << p;
            used += 1 - yb;
        }
    }
    Word::from_raw(bits, n)
}

/// A radius-`e` ball around a nonempty center.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BallSpec {
    center: Word,
    radius: usize,
}

impl BallSpec {
    pub fn new(center: Word, radius: usize) -> Result<BallSpec> {
        if center.is_empty() {
            return param("ball center must be nonempty");
        }
        if radius > center.len() {
            return param(format!("radius {radius} exceeds length {}", center.len()));
        }
        Ok(BallSpec { center, radius })
    }

    pub fn center(&self) -> Word {
        self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn volume(&self) -> u64 {
        volume(self.center.len(), self.radius)
    }
}

/// Words of the ball in rank order around the center.
pub fn ball_iter(spec: BallSpec) -> BallIter {
    BallIter { spec, shell_distance: 0, shell: Vec::new(), pos: 0 }
}

/// Iterator returned by [`ball_iter`]; materializes one distance shell at a
/// time.
#[derive(Debug, Clone)]
pub struct BallIter {
    spec: BallSpec,
    shell_distance: usize,
    shell: Vec<u32>,
    pos: usize,
}

impl Iterator for BallIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let n = self.spec.center.len();
        while self.pos == self.shell.len() {
            if self.shell_distance > self.spec.radius {
                return None;
            }
            let c = self.spec.center.bits;
            self.shell = weight_masks(n, self.shell_distance).map(|m| c ^ m).collect();
            self.shell.sort_unstable();
            self.shell_distance += 1;
            self.pos = 0;
        }
        let w = self.shell[self.pos];
        self.pos += 1;
        Some(Word::from_raw(w, n))
    }
}

/// All `n`-bit masks of weight exactly `k`, in increasing order.
pub(crate) fn weight_masks(n: usize, k: usize) -> impl Iterator<Item = u32> {
    let limit = 1u64 << n;
    let first = if k > n { limit } else { (1u64 << k) - 1 };
    let mut next = Some(first).filter(|&m| m < limit);
    std::iter::from_fn(move || {
        let m = next?;
        next = if m == 0 {
            None
        } else {
            // Gosper's hack
            let c = m & m.wrapping_neg();
            let r = m + c;
            let s = (((r ^ m) >> 2) / c) | r;
            Some(s).filter(|&s| s < limit)
        };
        Some(m as u32)
    })
}

/// XOR offsets of a radius-`e` ball, grouped by weight. `Ball(x, e)` is
/// `{x ^ m : m in ball_masks(n, e)}` for every center `x`.
pub(crate) fn ball_masks(n: usize, e: usize) -> Vec<u32> {
    (0..=e.min(n)).flat_map(|k| weight_masks(n, k)).collect()
}
