//! Shortest programs by inverting each mode instead of enumerating every
//! bit string. Only RANK, LIT and SEARCH (plus ENUM at level 1 without a
//! condition) can be shortest: a SET program spends at least `n + 7` bits
//! while LIT always needs `n + 2`.

use super::program::{gnat_len, Program};
use super::{saturated_codeword_lambda, DescriptionSystem, Level};
use crate::codes::{ceil_log2, Code, CodeParams};
use crate::hamming::{raw_distance, raw_rank, Word};

pub(crate) fn rank_program(rank: u64) -> Program {
    let mut p = Program::new();
    p.push_str("1");
    p.push_gnat(rank);
    p
}

pub(crate) fn lit_program(x: &Word, conditional: bool) -> Program {
    let mut p = Program::new();
    p.push_str("01");
    if !conditional {
        p.push_gnat(x.len() as u64);
    }
    p.push_word(x);
    p
}

pub(crate) fn set_program(e: usize, code: &Code, index: u64, list_size: u64) -> Program {
    let mut p = Program::new();
    p.push_str("001");
    p.push_gnat(e as u64);
    p.extend(&super::set_encode(code).expect("nonempty code"));
    p.push_fixed(index, ceil_log2(list_size));
    p
}

/// SEARCH; `n` is `Some` for the condition-free form.
pub(crate) fn search_program(n: Option<usize>, e: usize, lambda: u32, index: u64, list_size: u64) -> Program {
    let mut p = Program::new();
    p.push_str("0001");
    if let Some(n) = n {
        p.push_gnat(n as u64);
    }
    p.push_gnat(e as u64);
    p.push_gnat(lambda as u64);
    p.push_fixed(index, ceil_log2(list_size));
    p
}

pub(crate) fn enum_program(n: usize, e: usize, lambda: u32, index: u64, list_size: u64) -> Program {
    let mut p = Program::new();
    p.push_str("0000");
    p.push_gnat(n as u64);
    p.push_gnat(e as u64);
    p.push_gnat(lambda as u64);
    p.push_fixed(index, ceil_log2(list_size));
    p
}

/// Running minimum in (length, lex) order. With a `stop_at` bound the
/// search may return as soon as some candidate fits within it.
struct Best {
    program: Program,
    stop_at: Option<usize>,
}

impl Best {
    fn offer(&mut self, p: Program) {
        if p < self.program {
            self.program = p;
        }
    }

    /// Largest length still worth building.
    fn budget(&self) -> usize {
        match self.stop_at {
            Some(s) => s.min(self.program.len()),
            None => self.program.len(),
        }
    }

    fn done(&self) -> bool {
        self.stop_at.is_some_and(|s| self.program.len() <= s)
    }
}

impl DescriptionSystem {
    pub(crate) fn shortest_conditional(&self, x: &Word, y: &Word) -> Program {
        self.conditional_search(x, y, None)
    }

    pub(crate) fn shortest_unconditional(&self, level: Level, x: &Word) -> Program {
        self.unconditional_search(level, x, None)
    }

    pub(crate) fn describable_within(&self, level: Level, x: &Word, y: &Word, bound: usize) -> bool {
        let p = if y.is_empty() {
            self.unconditional_search(level, x, Some(bound))
        } else if x.len() == y.len() {
            self.conditional_search(x, y, Some(bound))
        } else {
            return false;
        };
        p.len() <= bound
    }

    fn conditional_search(&self, x: &Word, y: &Word, stop_at: Option<usize>) -> Program {
        let n = y.len();
        let mut best = Best { program: lit_program(x, true), stop_at };
        best.offer(rank_program(raw_rank(y, x)));
        if best.done() {
            return best.program;
        }
        let d = raw_distance(x, y);
        for e in d..=n {
            let head = 4 + gnat_len(e as u64);
            if head + 1 > best.budget() {
                break;
            }
            let sat = CodeParams { n, e, lambda: 0 }.saturating_lambda();
            for lambda in 0..=sat {
                let base = head + gnat_len(lambda as u64);
                if base > best.budget() {
                    break;
                }
                let code = self.greedy(n, e, lambda as u64);
                if let Some(i) = code.near_index(y, x) {
                    let s = code.near_count(y);
                    if base + ceil_log2(s) as usize <= best.budget() {
                        best.offer(search_program(None, e, lambda, i, s));
                        if best.done() {
                            return best.program;
                        }
                    }
                }
            }
        }
        best.program
    }

    fn unconditional_search(&self, level: Level, x: &Word, stop_at: Option<usize>) -> Program {
        let n = x.len();
        let mut best = Best { program: lit_program(x, false), stop_at };
        if n == 0 || best.done() {
            return best.program;
        }
        let prefix = 4 + gnat_len(n as u64);
        for e in 0..=n {
            let head = prefix + gnat_len(e as u64);
            if head + 1 > best.budget() {
                break;
            }
            let sat = CodeParams { n, e, lambda: 0 }.saturating_lambda();
            for lambda in 0..=sat {
                let base = head + gnat_len(lambda as u64);
                if base > best.budget() {
                    break;
                }
                let code = self.greedy(n, e, lambda as u64);
                let code = code.code();
                if let Some(i) = code.position(x) {
                    let s = code.len() as u64;
                    if base + ceil_log2(s) as usize <= best.budget() {
                        best.offer(search_program(Some(n), e, lambda, i as u64, s));
                        if best.done() {
                            return best.program;
                        }
                    }
                }
            }
        }
        if level == Level::One {
            for e in 0..=n {
                let head = prefix + gnat_len(e as u64);
                if head + 1 > best.budget() {
                    break;
                }
                for lambda in 0..=saturated_codeword_lambda(n) {
                    let base = head + gnat_len(lambda as u64);
                    if base > best.budget() {
                        break;
                    }
                    let set = self.codewords(Level::Zero, n, e, lambda as u64);
                    if let Some(i) = set.position(x) {
                        let s = set.len() as u64;
                        if base + ceil_log2(s) as usize <= best.budget() {
                            best.offer(enum_program(n, e, lambda, i as u64, s));
                            if best.done() {
                                return best.program;
                            }
                        }
                    }
                }
            }
        }
        best.program
    }
}
