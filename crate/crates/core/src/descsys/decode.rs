use super::program::{BitReader, Program};
use super::{DescriptionSystem, Level};
use crate::codes::ceil_log2;
use crate::error::{param, Result};
use crate::hamming::{raw_distance, raw_unrank, Word};

impl DescriptionSystem {
    /// Runs program `p` on condition `y`. `Ok(None)` means the program is
    /// invalid: it does not parse, leaves bits unread, or indexes outside
    /// the list it names.
    pub fn decode(&self, level: Level, p: &Program, y: &Word) -> Result<Option<Word>> {
        if y.len() > self.n_max() {
            return param(format!("condition length {} exceeds N_MAX {}", y.len(), self.n_max()));
        }
        Ok(self.decode_bits(level, p.bits(), y))
    }

    pub(crate) fn decode_bits(&self, level: Level, bits: &[bool], y: &Word) -> Option<Word> {
        let mut r = BitReader::new(bits);
        let out = if r.bit()? {
            self.decode_rank(&mut r, y)
        } else if r.bit()? {
            self.decode_lit(&mut r, y)
        } else if r.bit()? {
            self.decode_set(&mut r, y)
        } else if r.bit()? {
            self.decode_search(&mut r, y)
        } else {
            self.decode_enum(level, &mut r, y)
        }?;
        r.at_end().then_some(out)
    }

    fn decode_rank(&self, r: &mut BitReader<'_>, y: &Word) -> Option<Word> {
        if y.is_empty() {
            return None;
        }
        let rank = r.gnat()?;
        (rank < 1u64 << y.len()).then(|| raw_unrank(y, rank))
    }

    fn decode_lit(&self, r: &mut BitReader<'_>, y: &Word) -> Option<Word> {
        let n = if y.is_empty() {
            let n = r.gnat()?;
            if n > self.n_max() as u64 {
                return None;
            }
            n as usize
        } else {
            y.len()
        };
        r.word(n)
    }

    fn decode_set(&self, r: &mut BitReader<'_>, y: &Word) -> Option<Word> {
        let n = y.len();
        if n == 0 {
            return None;
        }
        let radius = r.gnat()?;
        if radius > n as u64 {
            return None;
        }
        let code = r.set(n)?;
        let near: Vec<&Word> = code
            .members()
            .iter()
            .filter(|c| raw_distance(c, y) as u64 <= radius)
            .collect();
        let i = r.fixed(ceil_log2(near.len() as u64))?;
        near.get(i as usize).map(|w| **w)
    }

    /// Reads `gnat(n')` for the condition-free forms.
    fn read_length(&self, r: &mut BitReader<'_>) -> Option<usize> {
        let n = r.gnat()?;
        (1..=self.n_max() as u64).contains(&n).then_some(n as usize)
    }

    fn decode_search(&self, r: &mut BitReader<'_>, y: &Word) -> Option<Word> {
        if y.is_empty() {
            let n = self.read_length(r)?;
            let e = r.gnat()?;
            if e > n as u64 {
                return None;
            }
            let lambda = r.gnat()?;
            let code = self.greedy(n, e as usize, lambda);
            let members = code.code().members();
            let i = r.fixed(ceil_log2(members.len() as u64))?;
            members.get(i as usize).copied()
        } else {
            let n = y.len();
            let e = r.gnat()?;
            if e > n as u64 {
                return None;
            }
            let lambda = r.gnat()?;
            let code = self.greedy(n, e as usize, lambda);
            let s = code.near_count(y);
            if s == 0 {
                return None;
            }
            let i = r.fixed(ceil_log2(s))?;
            if i >= s {
                return None;
            }
            code.near_list(y).get(i as usize).copied()
        }
    }

    fn decode_enum(&self, level: Level, r: &mut BitReader<'_>, y: &Word) -> Option<Word> {
        if level == Level::Zero || !y.is_empty() {
            return None;
        }
        let n = self.read_length(r)?;
        let e = r.gnat()?;
        if e > n as u64 {
            return None;
        }
        let lambda = r.gnat()?;
        let set = self.codewords(Level::Zero, n, e as usize, lambda);
        if set.is_empty() {
            return None;
        }
        let i = r.fixed(ceil_log2(set.len() as u64))?;
        set.members().get(i as usize).copied()
    }
}
