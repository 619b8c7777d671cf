use super::program::Program;
use super::{ComplexityResult, DescriptionSystem, Level};
use crate::error::Result;
use crate::hamming::Word;
use crate::par;

impl DescriptionSystem {
    /// Reference route for [`complexity`](Self::complexity): decodes every
    /// program of length `0..=l_max` in length-then-lex order and reports the
    /// first that yields `x`. Costs `2^(l_max + 1)` decodes.
    pub fn complexity_by_enumeration(
        &self,
        level: Level,
        x: &Word,
        y: &Word,
        l_max: usize,
    ) -> Result<ComplexityResult> {
        self.check_query(x, y, l_max)?;
        for len in 0..=l_max {
            let hit = par::find_first(1u64 << len, |v| {
                let p = Program::from_value(v, len);
                self.decode_bits(level, p.bits(), y) == Some(*x)
            });
            if let Some(v) = hit {
                let witness = Program::from_value(v, len);
                return Ok(ComplexityResult { level, x: *x, y: *y, value: Some(len), witness: Some(witness) });
            }
        }
        Ok(ComplexityResult { level, x: *x, y: *y, value: None, witness: None })
    }

    /// Every word produced from `y` by some program of length `<= l_max`,
    /// with its multiplicity ignored. Used to check program-counting bounds.
    pub fn outputs_within(&self, level: Level, y: &Word, l_max: usize) -> Result<Vec<Word>> {
        self.check_query(&Word::empty(), y, l_max)?;
        let mut out: Vec<Word> = (0..=l_max)
            .flat_map(|len| {
                par::map_indices(1 << len, move |v| {
                    self.decode_bits(level, Program::from_value(v as u64, len).bits(), y)
                })
            })
            .flatten()
            .collect();
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}
