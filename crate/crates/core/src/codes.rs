//! Codes as sorted word sets: list-decoding profiles, the greedy
//! lexicographic construction, exact maximum-size search and the text file
//! format.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{param, Error, Result};
use crate::hamming::{ball_masks, raw_distance, volume, Word, WORD_BITS_MAX};
use crate::par;

/// A set of same-length words, kept in strictly ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Code {
    n: usize,
    members: Vec<Word>,
}

impl Code {
    /// Builds a code from words that must already be strictly ascending.
    pub fn new(n: usize, members: Vec<Word>) -> Result<Code> {
        check_length(n)?;
        if let Some(w) = members.iter().find(|w| w.len() != n) {
            return param(format!("word {w} does not have length {n}"));
        }
        if members.windows(2).any(|p| p[0] >= p[1]) {
            return param("code members must be strictly ascending");
        }
        Ok(Code { n, members })
    }

    /// Sorts and deduplicates arbitrary words of length `n`.
    pub fn from_words(n: usize, words: impl IntoIterator<Item = Word>) -> Result<Code> {
        let mut members: Vec<Word> = words.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Code::new(n, members)
    }

    pub fn empty(n: usize) -> Result<Code> {
        Code::new(n, Vec::new())
    }

    /// The whole cube `B^n`.
    pub fn full(n: usize) -> Result<Code> {
        check_length(n)?;
        Ok(Code { n, members: Word::all(n).collect() })
    }

    pub(crate) fn from_sorted_values(n: usize, values: impl IntoIterator<Item = u32>) -> Code {
        let members: Vec<Word> = values.into_iter().map(|v| Word::from_raw(v, n)).collect();
        debug_assert!(members.windows(2).all(|p| p[0] < p[1]));
        Code { n, members }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Word] {
        &self.members
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.position(w).is_some()
    }

    /// Index of `w` in the sorted member list.
    pub fn position(&self, w: &Word) -> Option<usize> {
        self.members.binary_search(w).ok()
    }

    pub fn is_subset(&self, other: &Code) -> bool {
        self.n == other.n && self.members.iter().all(|w| other.contains(w))
    }

    /// Renders the code in the line-oriented file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for w in &self.members {
            let _ = writeln!(out, "{w}");
        }
        out
    }

    /// Parses the line-oriented file format. Comment lines start with `#`;
    /// unsorted or duplicate words are rejected.
    pub fn parse_file(text: &str) -> Result<Code> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
            .filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty());
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::Format("missing `n=` header".into()))?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::Format(format!("line {lineno}: expected `n=<decimal>`, got {header:?}")))?;
        check_length(n).map_err(|e| Error::Format(e.to_string()))?;
        let mut members: Vec<Word> = Vec::new();
        for (lineno, line) in lines {
            let w: Word = line.parse().map_err(|e| Error::Format(format!("line {lineno}: {e}")))?;
            if w.len() != n {
                return Err(Error::Format(format!("line {lineno}: word {w} is not {n} bits")));
            }
            if let Some(prev) = members.last() {
                if *prev >= w {
                    return Err(Error::Format(format!(
                        "line {lineno}: {w} is not strictly after {prev}"
                    )));
                }
            }
            members.push(w);
        }
        Ok(Code { n, members })
    }
}

fn check_length(n: usize) -> Result<()> {
    if n == 0 || n > WORD_BITS_MAX {
        return param(format!("code length must be in 1..={WORD_BITS_MAX}, got {n}"));
    }
    Ok(())
}

/// Parameters `(n, e, L = 2^lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub e: usize,
    pub lambda: u32,
}

impl CodeParams {
    pub fn new(n: usize, e: usize, lambda: u32) -> Result<CodeParams> {
        check_length(n)?;
        if e > n {
            return param(format!("radius {e} exceeds length {n}"));
        }
        Ok(CodeParams { n, e, lambda })
    }

    /// `L = 2^lambda`, saturating.
    pub fn list_size(&self) -> u64 {
        list_limit(self.lambda)
    }

    /// Smallest lambda at which every code is `(e, 2^lambda)`-list-decodable.
    pub fn saturating_lambda(&self) -> u32 {
        ceil_log2(volume(self.n, self.e))
    }
}

pub(crate) fn list_limit(lambda: u32) -> u64 {
    1u64.checked_shl(lambda).filter(|_| lambda < 64).unwrap_or(u64::MAX)
}

/// `ceil(log2 s)`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(s: u64) -> u32 {
    if s <= 1 {
        0
    } else {
        64 - (s - 1).leading_zeros()
    }
}

fn center_counts(code: &Code, e: usize) -> Vec<u32> {
    let n = code.n;
    let masks = ball_masks(n, e);
    let mut counts = vec![0u32; 1 << n];
    for x in &code.members {
        for m in &masks {
            counts[(x.value() ^ m) as usize] += 1;
        }
    }
    counts
}

/// `max_y |C ∩ Ball(y, e)|`, the least `L` for which `code` is
/// `(e, L)`-list-decodable.
pub fn list_profile(code: &Code, e: usize) -> Result<u64> {
    if e > code.n {
        return param(format!("radius {e} exceeds length {}", code.n));
    }
    Ok(center_counts(code, e).into_iter().max().unwrap_or(0) as u64)
}

pub fn is_list_decodable(code: &Code, e: usize, lambda: u32) -> Result<bool> {
    Ok(list_profile(code, e)? <= list_limit(lambda))
}

/// A code together with the per-center ball counts for a fixed radius, so
/// near-lists `C ∩ Ball(y, e)` can be sized and indexed without rescanning.
#[derive(Clone, Debug)]
pub struct IndexedCode {
    code: Code,
    radius: usize,
    member: Vec<bool>,
    counts: Vec<u32>,
}

impl IndexedCode {
    pub fn new(code: Code, radius: usize) -> Result<IndexedCode> {
        if radius > code.n {
            return param(format!("radius {radius} exceeds length {}", code.n));
        }
        let counts = center_counts(&code, radius);
        let mut member = vec![false; 1 << code.n];
        for w in &code.members {
            member[w.value() as usize] = true;
        }
        Ok(IndexedCode { code, radius, member, counts })
    }

    pub fn code(&self) -> &Code {
        &self.code
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.len() == self.code.n && self.member[w.value() as usize]
    }

    /// `|C ∩ Ball(y, radius)|`.
    pub fn near_count(&self, y: &Word) -> u64 {
        self.counts[y.value() as usize] as u64
    }

    /// Position of `x` in the lex-ordered near-list of `y`, if present.
    pub fn near_index(&self, y: &Word, x: &Word) -> Option<u64> {
        if !self.contains(x) || raw_distance(x, y) > self.radius {
            return None;
        }
        let n = self.code.n;
        let below = if self.code.len() as u64 <= volume(n, self.radius) {
            let end = self.code.position(x).expect("member");
            self.code.members[..end]
                .iter()
                .filter(|c| raw_distance(c, y) <= self.radius)
                .count()
        } else {
            ball_masks(n, self.radius)
                .into_iter()
                .map(|m| y.value() ^ m)
                .filter(|&w| w < x.value() && self.member[w as usize])
                .count()
        };
        Some(below as u64)
    }

    /// `C ∩ Ball(y, radius)` in lexicographic order.
    pub fn near_list(&self, y: &Word) -> Vec<Word> {
        let n = self.code.n;
        if self.code.len() as u64 <= volume(n, self.radius) {
            self.code
                .members
                .iter()
                .copied()
                .filter(|c| raw_distance(c, y) <= self.radius)
                .collect()
        } else {
            let mut v: Vec<u32> = ball_masks(n, self.radius)
                .into_iter()
                .map(|m| y.value() ^ m)
                .filter(|&w| self.member[w as usize])
                .collect();
            v.sort_unstable();
            v.into_iter().map(|w| Word::from_raw(w, n)).collect()
        }
    }

    pub fn into_code(self) -> Code {
        self.code
    }
}

/// Scans `B^n` in lexicographic order and keeps every word that leaves the
/// set `(e, 2^lambda)`-list-decodable.
pub fn greedy_lex_code(params: CodeParams) -> Code {
    greedy_indexed(params).into_code()
}

pub(crate) fn greedy_indexed(params: CodeParams) -> IndexedCode {
    let CodeParams { n, e, .. } = params;
    let limit = params.list_size();
    let masks = ball_masks(n, e);
    if limit >= masks.len() as u64 {
        return IndexedCode::new(Code::full(n).expect("valid n"), e).expect("valid radius");
    }
    let limit = limit as u32;
    let mut counts = vec![0u32; 1 << n];
    let mut member = vec![false; 1 << n];
    let mut members = Vec::new();
    for x in 0..1u32 << n {
        if masks.iter().all(|m| counts[(x ^ m) as usize] < limit) {
            for m in &masks {
                counts[(x ^ m) as usize] += 1;
            }
            member[x as usize] = true;
            members.push(Word::from_raw(x, n));
        }
    }
    IndexedCode { code: Code { n, members }, radius: e, member, counts }
}

/// Seeded randomized variant of the greedy construction: scans `B^n` in a
/// shuffled order. The result is list-decodable and maximal by inclusion.
pub fn random_list_decodable_code<R: Rng + ?Sized>(params: CodeParams, rng: &mut R) -> Code {
    let CodeParams { n, e, .. } = params;
    let limit = params.list_size();
    let masks = ball_masks(n, e);
    let mut order: Vec<u32> = (0..1u32 << n).collect();
    order.shuffle(rng);
    let mut counts = vec![0u64; 1 << n];
    let mut kept = Vec::new();
    for x in order {
        if masks.iter().all(|m| counts[(x ^ m) as usize] < limit) {
            for m in &masks {
                counts[(x ^ m) as usize] += 1;
            }
            kept.push(Word::from_raw(x, n));
        }
    }
    Code::from_words(n, kept).expect("valid words")
}

/// Each word of `B^n` independently with probability `density`.
pub fn random_code<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Result<Code> {
    check_length(n)?;
    let members = Word::all(n).filter(|_| rng.gen_bool(density.clamp(0.0, 1.0)));
    Code::from_words(n, members)
}

/// `floor(2^lambda * 2^n / Vol(n, e))`, the double-counting upper bound on
/// the size of an `(e, 2^lambda)`-list-decodable code.
pub fn counting_bound(params: CodeParams) -> u64 {
    let vol = volume(params.n, params.e) as u128;
    let total = if params.lambda >= 64 {
        u128::MAX
    } else {
        (1u128 << params.lambda).saturating_mul(1u128 << params.n)
    };
    (total / vol).min(u64::MAX as u128) as u64
}

/// `{x ^ z : x in code}`.
pub fn translate(code: &Code, z: &Word) -> Result<Code> {
    if z.len() != code.n {
        return param(format!("shift {z} does not have length {}", code.n));
    }
    let mut v: Vec<u32> = code.members.iter().map(|x| x.value() ^ z.value()).collect();
    v.sort_unstable();
    Ok(Code::from_sorted_values(code.n, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMethod {
    /// Every subset of `B^n`; limited to `n <= 4`.
    Exhaustive,
    BranchAndBound,
}

pub const EXHAUSTIVE_N_MAX: usize = 4;

/// Maximum size `A(n, e, 2^lambda)` of an `(e, 2^lambda)`-list-decodable
/// code with a witness achieving it. The exhaustive witness is the
/// lexicographically least maximum code; branch and bound returns the first
/// maximum found in include-first lexicographic order.
pub fn max_code_size(params: CodeParams, method: SearchMethod) -> Result<(usize, Code)> {
    let code = match method {
        SearchMethod::Exhaustive => exhaustive_max(params)?,
        SearchMethod::BranchAndBound => branch_and_bound_max(params),
    };
    Ok((code.len(), code))
}

fn exhaustive_max(params: CodeParams) -> Result<Code> {
    let n = params.n;
    if n > EXHAUSTIVE_N_MAX {
        return Err(Error::Resource(format!(
            "exhaustive search is limited to n <= {EXHAUSTIVE_N_MAX}, got n = {n}"
        )));
    }
    let words = 1usize << n;
    let masks = ball_masks(n, params.e);
    // subset of words lying in Ball(y, e), bit w set for word w
    let ball_sets: Vec<u32> = (0..words as u32)
        .map(|y| masks.iter().fold(0u32, |acc, m| acc | 1 << (y ^ m)))
        .collect();
    let limit = params.list_size();
    let better = |a: (u32, u32), b: (u32, u32)| -> (u32, u32) {
        // larger size wins; equal sizes go to the lex-least member list,
        // i.e. the set owning the smallest word of the symmetric difference
        if a.0 != b.0 {
            return if a.0 > b.0 { a } else { b };
        }
        let diff = a.1 ^ b.1;
        if diff == 0 || a.1 & diff & diff.wrapping_neg() != 0 {
            a
        } else {
            b
        }
    };
    let (_, best) = par::chunked_fold(
        1u64 << words,
        1 << 12,
        (0u32, 0u32),
        |acc, subset| {
            let subset = subset as u32;
            let fits = ball_sets
                .iter()
                .all(|b| (subset & b).count_ones() as u64 <= limit);
            if fits {
                better(acc, (subset.count_ones(), subset))
            } else {
                acc
            }
        },
        better,
    );
    Ok(Code::from_sorted_values(n, (0..words as u32).filter(|w| best >> w & 1 == 1)))
}

struct BranchAndBound {
    words: u32,
    masks: Vec<u32>,
    limit: u32,
    counts: Vec<u32>,
    chosen: Vec<u32>,
    best: Vec<u32>,
    // scratch for the suffix slack bound
    marked: Vec<u32>,
    stamp: u32,
}

impl BranchAndBound {
    fn feasible(&self, x: u32) -> bool {
        self.masks.iter().all(|m| self.counts[(x ^ m) as usize] < self.limit)
    }

    fn adjust(&mut self, x: u32, add: bool) {
        for m in &self.masks {
            let c = &mut self.counts[(x ^ m) as usize];
            if add {
                *c += 1;
            } else {
                *c -= 1;
            }
        }
    }

    /// Upper bound on how many of the words `from..` can still be added: no
    /// more than are individually feasible, and no more than the spare
    /// capacity of the centers they touch divided by the ball volume.
    fn suffix_bound(&mut self, from: u32) -> usize {
        self.stamp += 1;
        let mut feasible = 0usize;
        let mut slack = 0u64;
        for x in from..self.words {
            if !self.feasible(x) {
                continue;
            }
            feasible += 1;
            for m in &self.masks {
                let y = (x ^ m) as usize;
                if self.marked[y] != self.stamp {
                    self.marked[y] = self.stamp;
                    slack += (self.limit - self.counts[y]) as u64;
                }
            }
        }
        feasible.min((slack / self.masks.len() as u64) as usize)
    }

    fn search(&mut self, i: u32) {
        if i == self.words {
            if self.chosen.len() > self.best.len() {
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.chosen.len() + self.suffix_bound(i) <= self.best.len() {
            return;
        }
        if self.feasible(i) {
            self.adjust(i, true);
            self.chosen.push(i);
            self.search(i + 1);
            self.chosen.pop();
            self.adjust(i, false);
        }
        self.search(i + 1);
    }
}

fn branch_and_bound_max(params: CodeParams) -> Code {
    let n = params.n;
    let masks = ball_masks(n, params.e);
    if params.list_size() >= masks.len() as u64 {
        return Code::full(n).expect("valid n");
    }
    let words = 1u32 << n;
    let mut bb = BranchAndBound {
        words,
        limit: params.list_size() as u32,
        masks,
        counts: vec![0; words as usize],
        chosen: Vec::new(),
        best: Vec::new(),
        marked: vec![0; words as usize],
        stamp: 0,
    };
    bb.search(0);
    Code::from_sorted_values(n, bb.best)
}
