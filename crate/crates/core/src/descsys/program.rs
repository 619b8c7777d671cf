//! Programs as bit strings, and the self-delimiting integer and set
//! encodings the grammar is built from.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::codes::Code;
use crate::error::{param, Error, Result};
use crate::hamming::Word;

/// A candidate description. Programs order by length first and then
/// lexicographically, which is the order complexity enumeration uses.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Program {
    bits: Vec<bool>,
}

impl Program {
    pub fn new() -> Program {
        Program::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Program {
        Program { bits }
    }

    /// The `len`-bit program spelling `value` MSB-first.
    pub fn from_value(value: u64, len: usize) -> Program {
        assert!(len <= 64);
        Program { bits: (0..len).rev().map(|i| value >> i & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub(crate) fn push_str(&mut self, tag: &str) {
        self.bits.extend(tag.bytes().map(|b| b == b'1'));
    }

    pub(crate) fn push_gnat(&mut self, m: u64) {
        self.bits.extend(gnat_encode(m));
    }

    /// Appends `value` in exactly `width` bits.
    pub(crate) fn push_fixed(&mut self, value: u64, width: u32) {
        debug_assert!(width == 64 || value >> width == 0);
        self.bits.extend((0..width).rev().map(|i| value >> i & 1 == 1));
    }

    pub(crate) fn push_word(&mut self, w: &Word) {
        self.push_fixed(w.value() as u64, w.len() as u32);
    }

    pub(crate) fn extend(&mut self, bits: &[bool]) {
        self.bits.extend_from_slice(bits);
    }
}

impl Ord for Program {
    fn cmp(&self, other: &Program) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Program {
    fn partial_cmp(&self, other: &Program) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Program(\"{self}\")")
    }
}

impl FromStr for Program {
    type Err = Error;

    fn from_str(s: &str) -> Result<Program> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Format(format!("invalid character {c:?} in program"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(Program::from_bits)
    }
}

impl Serialize for Program {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Program {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Program, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Self-delimiting code for `m >= 0`: with `v = m + 1` of bit length `b`,
/// `b - 1` zeros followed by `v` MSB-first.
pub fn gnat_encode(m: u64) -> Vec<bool> {
    let v = m as u128 + 1;
    let b = 128 - v.leading_zeros();
    let mut out = vec![false; (b - 1) as usize];
    out.extend((0..b).rev().map(|i| v >> i & 1 == 1));
    out
}

/// `|gnat_encode(m)| = 2 * floor(log2(m + 1)) + 1`.
pub fn gnat_len(m: u64) -> usize {
    let v = m as u128 + 1;
    2 * (127 - v.leading_zeros() as usize) + 1
}

/// Decodes one integer from the front of `bits`, returning it with the
/// number of bits consumed. `None` if the stream ends first.
pub fn gnat_decode(bits: &[bool]) -> Option<(u64, usize)> {
    let mut r = BitReader::new(bits);
    let m = r.gnat()?;
    Some((m, r.position()))
}

/// `gnat(|C|)` followed by the members as `n`-bit blocks in ascending order.
pub fn set_encode(code: &Code) -> Result<Vec<bool>> {
    if code.is_empty() {
        return param("cannot encode an empty code");
    }
    let mut p = Program::new();
    p.push_gnat(code.len() as u64);
    for w in code.members() {
        p.push_word(w);
    }
    Ok(p.bits)
}

pub fn set_encode_len(code: &Code) -> usize {
    gnat_len(code.len() as u64) + code.len() * code.n()
}

/// Inverse of [`set_encode`] for words of length `n`. Returns the code and
/// bits consumed; `None` on truncation, an empty set, or non-ascending
/// blocks.
pub fn set_decode(bits: &[bool], n: usize) -> Option<(Code, usize)> {
    let mut r = BitReader::new(bits);
    let code = r.set(n)?;
    Some((code, r.position()))
}

pub(crate) struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub(crate) fn new(bits: &'a [bool]) -> BitReader<'a> {
        BitReader { bits, pos: 0 }
    }

    pub(crate) fn position(&self) -> usize {
        self.pos
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    pub(crate) fn bit(&mut self) -> Option<bool> {
        let b = *self.bits.get(self.pos)?;
        self.pos += 1;
        Some(b)
    }

    pub(crate) fn fixed(&mut self, width: u32) -> Option<u64> {
        if width > 64 || self.bits.len() - self.pos < width as usize {
            return None;
        }
        let mut v = 0u64;
        for _ in 0..width {
            v = v << 1 | self.bit()? as u64;
        }
        Some(v)
    }

    pub(crate) fn gnat(&mut self) -> Option<u64> {
        let mut zeros = 0u32;
        while !self.bit()? {
            zeros += 1;
            if zeros > 63 {
                return None;
            }
        }
        let tail = self.fixed(zeros)?;
        let v = if zeros == 0 { 1 } else { 1u64 << zeros | tail };
        Some(v - 1)
    }

    pub(crate) fn word(&mut self, n: usize) -> Option<Word> {
        let v = self.fixed(n as u32)?;
        Word::new(v as u32, n).ok()
    }

    pub(crate) fn set(&mut self, n: usize) -> Option<Code> {
        let k = self.gnat()?;
        if k == 0 || k > 1u64 << n {
            return None;
        }
        let mut members: Vec<Word> = Vec::with_capacity(k as usize);
        for _ in 0..k {
            let w = self.word(n)?;
            if members.last().is_some_and(|prev| *prev >= w) {
                return None;
            }
            members.push(w);
        }
        Code::new(n, members).ok()
    }
}
