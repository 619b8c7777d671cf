//! A fixed, total description system and exact conditional complexity.
//!
//! Programs start with a prefix tag selecting one of five modes:
//!
//! | tag    | mode   | body                                                    |
//! |--------|--------|---------------------------------------------------------|
//! | `1`    | RANK   | `gnat(r)`: the `r`-th word around the condition         |
//! | `01`   | LIT    | raw bits (`gnat(n')` first when the condition is empty) |
//! | `001`  | SET    | `gnat(e') set_encode(C) index` into `C ∩ Ball(y, e')`   |
//! | `0001` | SEARCH | `gnat(e') gnat(λ) index` into the greedy code's near-list, or `gnat(n') gnat(e') gnat(λ) index` into the whole greedy code when the condition is empty |
//! | `0000` | ENUM   | `gnat(n') gnat(e') gnat(λ) index` into the level-0 codeword set; level 1 and empty condition only |
//!
//! Indices are fixed-width: `ceil(log2 s)` bits for a list of size `s`
//! computed by the decoder, and must be `< s`. A program is valid only if
//! it is consumed exactly. Every mode is a bounded loop, so decoding always
//! terminates and complexities are exactly computable.

mod decode;
mod enumerate;
pub mod program;
pub(crate) mod solver;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use program::{gnat_decode, gnat_encode, gnat_len, set_decode, set_encode, set_encode_len, Program};

use crate::codes::{greedy_indexed, Code, CodeParams, IndexedCode};
use crate::error::{param, Error, Result};
use crate::hamming::{ball_iter, BallSpec, Word, DEFAULT_N_MAX, WORD_BITS_MAX};
use crate::par;

/// Identifies this grammar revision in reports and cache keys.
pub const VERSION_TAG: &str = "rds-v1";

/// Default ceiling on the program length a complexity query may ask about.
pub const DEFAULT_ENUM_CAP: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    /// RANK, LIT, SET and SEARCH.
    Zero,
    /// Level 0 plus ENUM over level-0 codeword sets.
    One,
}

impl Level {
    pub const ALL: [Level; 2] = [Level::Zero, Level::One];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl TryFrom<u8> for Level {
    type Error = Error;

    fn try_from(v: u8) -> Result<Level> {
        match v {
            0 => Ok(Level::Zero),
            1 => Ok(Level::One),
            _ => param(format!("level must be 0 or 1, got {v}")),
        }
    }
}

impl Serialize for Level {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.index() as u8)
    }
}

impl<'de> Deserialize<'de> for Level {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Level, D::Error> {
        Level::try_from(u8::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemConfig {
    /// Longest word the system describes.
    pub n_max: usize,
    /// Longest program a complexity query may enumerate up to.
    pub enum_cap: usize,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig { n_max: DEFAULT_N_MAX, enum_cap: DEFAULT_ENUM_CAP }
    }
}

impl SystemConfig {
    pub fn with_n_max(n_max: usize) -> Result<SystemConfig> {
        if n_max == 0 || n_max > WORD_BITS_MAX {
            return param(format!("N_MAX must be in 1..={WORD_BITS_MAX}, got {n_max}"));
        }
        Ok(SystemConfig { n_max, ..SystemConfig::default() })
    }
}

/// Exact `K_level(x | y)` with the lex-least shortest program, or `None`
/// when no program of length `<= l_max` produces `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexityResult {
    pub level: Level,
    pub x: Word,
    pub y: Word,
    pub value: Option<usize>,
    pub witness: Option<Program>,
}

/// Worst case of `K_level(x | y)` over `y ∈ Ball(x, e)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallWorst {
    pub k: usize,
    pub y: Word,
}

/// [`BallWorst`] for every `x ∈ B^n` at a fixed level and radius, indexed by
/// `x.value()`. Ties go to the first maximizer in ball order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallProfile {
    pub level: Level,
    pub n: usize,
    pub e: usize,
    pub worst: Vec<BallWorst>,
}

impl BallProfile {
    pub fn get(&self, x: &Word) -> BallWorst {
        self.worst[x.value() as usize]
    }

    /// `{x : max-ball K <= lambda}`.
    pub fn codewords(&self, lambda: u32) -> Code {
        let lambda = lambda as usize;
        Code::from_sorted_values(
            self.n,
            (0..self.worst.len() as u32).filter(|&x| self.worst[x as usize].k <= lambda),
        )
    }
}

/// Per-length caches. Greedy codes are built under a blocking once-cell
/// since their construction is sequential; everything whose construction
/// may fan out onto the thread pool is computed outside any lock and
/// inserted if absent, so a worker that steals a task needing the same
/// entry recomputes it rather than deadlocking.
struct LengthTables {
    greedy: Vec<Vec<OnceLock<Arc<IndexedCode>>>>,
    profiles: [Vec<OnceLock<Arc<BallProfile>>>; 2],
    codeword_sets: [Vec<Vec<OnceLock<Arc<Code>>>>; 2],
    unconditional: [OnceLock<Arc<Vec<Program>>>; 2],
}

impl LengthTables {
    fn new(n: usize) -> LengthTables {
        let greedy = (0..=n)
            .map(|e| {
                let sat = CodeParams { n, e, lambda: 0 }.saturating_lambda();
                (0..=sat).map(|_| OnceLock::new()).collect()
            })
            .collect();
        let profiles = || (0..=n).map(|_| OnceLock::new()).collect();
        let sets = || {
            (0..=n)
                .map(|_| (0..=saturated_codeword_lambda(n)).map(|_| OnceLock::new()).collect())
                .collect()
        };
        LengthTables {
            greedy,
            profiles: [profiles(), profiles()],
            codeword_sets: [sets(), sets()],
            unconditional: [OnceLock::new(), OnceLock::new()],
        }
    }
}

/// Every codeword set with `lambda >= n + 2` is the whole cube, since LIT
/// describes any word in `n + 2` bits given a same-length condition.
pub(crate) fn saturated_codeword_lambda(n: usize) -> u32 {
    n as u32 + 2
}

fn insert_if_absent<T>(cell: &OnceLock<Arc<T>>, build: impl FnOnce() -> T) -> Arc<T> {
    if let Some(v) = cell.get() {
        return v.clone();
    }
    let v = Arc::new(build());
    match cell.set(v.clone()) {
        Ok(()) => v,
        Err(_) => cell.get().expect("set by another worker").clone(),
    }
}

/// The description system with its memo tables. Cheap to share across
/// threads by reference; all caches fill idempotently.
pub struct DescriptionSystem {
    config: SystemConfig,
    tables: Vec<LengthTables>,
}

impl std::fmt::Debug for DescriptionSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DescriptionSystem").field("config", &self.config).finish_non_exhaustive()
    }
}

impl Default for DescriptionSystem {
    fn default() -> Self {
        DescriptionSystem::new(SystemConfig::default()).expect("default config is valid")
    }
}

impl DescriptionSystem {
    pub fn new(config: SystemConfig) -> Result<DescriptionSystem> {
        if config.n_max == 0 || config.n_max > WORD_BITS_MAX {
            return param(format!("N_MAX must be in 1..={WORD_BITS_MAX}, got {}", config.n_max));
        }
        let tables = (0..=config.n_max).map(LengthTables::new).collect();
        Ok(DescriptionSystem { config, tables })
    }

    pub fn config(&self) -> SystemConfig {
        self.config
    }

    pub fn n_max(&self) -> usize {
        self.config.n_max
    }

    pub fn version_tag(&self) -> &'static str {
        VERSION_TAG
    }

    pub(crate) fn check_length(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.config.n_max {
            return Err(Error::Resource(format!(
                "word length {n} outside 1..={} (N_MAX)",
                self.config.n_max
            )));
        }
        Ok(())
    }

    pub(crate) fn check_params(&self, n: usize, e: usize) -> Result<()> {
        self.check_length(n)?;
        if e > n {
            return param(format!("radius {e} exceeds length {n}"));
        }
        Ok(())
    }

    /// The greedy-lex code for `(n, e, 2^lambda)`, memoized.
    pub fn greedy_code(&self, params: CodeParams) -> Result<Arc<IndexedCode>> {
        self.check_params(params.n, params.e)?;
        Ok(self.greedy(params.n, params.e, params.lambda as u64))
    }

    pub(crate) fn greedy(&self, n: usize, e: usize, lambda: u64) -> Arc<IndexedCode> {
        let row = &self.tables[n].greedy[e];
        let lambda = lambda.min(row.len() as u64 - 1) as u32;
        row[lambda as usize]
            .get_or_init(|| Arc::new(greedy_indexed(CodeParams { n, e, lambda })))
            .clone()
    }

    /// Worst-case ball complexities for every word of `B^n`.
    pub fn ball_profile(&self, level: Level, n: usize, e: usize) -> Result<Arc<BallProfile>> {
        self.check_params(n, e)?;
        Ok(self.profile(level, n, e))
    }

    pub(crate) fn profile(&self, level: Level, n: usize, e: usize) -> Arc<BallProfile> {
        insert_if_absent(&self.tables[n].profiles[level.index()][e], || {
            let worst = par::map_indices(1 << n, |x| {
                let x = Word::from_raw(x as u32, n);
                self.ball_worst(level, &x, e)
            });
            BallProfile { level, n, e, worst }
        })
    }

    pub(crate) fn ball_worst(&self, level: Level, x: &Word, e: usize) -> BallWorst {
        let spec = BallSpec::new(*x, e).expect("checked radius");
        let mut worst = BallWorst { k: 0, y: *x };
        for y in ball_iter(spec) {
            let k = self.shortest(level, x, &y).expect("same length").len();
            if k > worst.k {
                worst = BallWorst { k, y };
            }
        }
        worst
    }

    /// The codeword set `W_level(n, e, lambda)` in lexicographic order.
    pub fn codeword_set(&self, level: Level, n: usize, e: usize, lambda: u32) -> Result<Arc<Code>> {
        self.check_params(n, e)?;
        Ok(self.codewords(level, n, e, lambda as u64))
    }

    pub(crate) fn codewords(&self, level: Level, n: usize, e: usize, lambda: u64) -> Arc<Code> {
        let row = &self.tables[n].codeword_sets[level.index()][e];
        let lambda = lambda.min(row.len() as u64 - 1) as u32;
        insert_if_absent(&row[lambda as usize], || self.profile(level, n, e).codewords(lambda))
    }

    /// Shortest programs producing each word of `B^n` from the empty
    /// condition, indexed by value.
    pub fn unconditional_table(&self, level: Level, n: usize) -> Result<Arc<Vec<Program>>> {
        self.check_length(n)?;
        Ok(insert_if_absent(&self.tables[n].unconditional[level.index()], || {
            if level == Level::One {
                self.prepare_enum(n);
            }
            par::map_indices(1 << n, |x| self.shortest_unconditional(level, &Word::from_raw(x as u32, n)))
        }))
    }

    /// Computes the level-0 profiles ENUM decoding at length `n` relies on.
    /// Call before fanning out level-1 work so workers find them cached.
    pub(crate) fn prepare_enum(&self, n: usize) {
        for e in 0..=n {
            self.profile(Level::Zero, n, e);
        }
    }

    /// Seeds the greedy-code cache with a previously computed code. Fails
    /// if a different code is already recorded for the same parameters.
    pub fn seed_greedy_code(&self, params: CodeParams, code: Code) -> Result<()> {
        self.check_params(params.n, params.e)?;
        if code.n() != params.n {
            return param(format!("seeded code has length {}, expected {}", code.n(), params.n));
        }
        let row = &self.tables[params.n].greedy[params.e];
        let cell = &row[(params.lambda as usize).min(row.len() - 1)];
        let indexed = Arc::new(IndexedCode::new(code, params.e)?);
        if let Err(candidate) = cell.set(indexed) {
            if cell.get().expect("occupied").code() != candidate.code() {
                return Err(Error::Integrity(format!("greedy code for {params:?} differs from cached value")));
            }
        }
        Ok(())
    }

    /// Seeds the ball-profile cache; see [`seed_greedy_code`](Self::seed_greedy_code).
    pub fn seed_ball_profile(&self, profile: BallProfile) -> Result<()> {
        self.check_params(profile.n, profile.e)?;
        if profile.worst.len() != 1 << profile.n {
            return param(format!("profile has {} entries, expected {}", profile.worst.len(), 1 << profile.n));
        }
        let cell = &self.tables[profile.n].profiles[profile.level.index()][profile.e];
        if let Err(candidate) = cell.set(Arc::new(profile)) {
            if **cell.get().expect("occupied") != *candidate {
                return Err(Error::Integrity(format!(
                    "ball profile (level {:?}, n={}, e={}) differs from cached value",
                    candidate.level, candidate.n, candidate.e
                )));
            }
        }
        Ok(())
    }

    /// Seeds the unconditional-complexity cache; see
    /// [`seed_greedy_code`](Self::seed_greedy_code).
    pub fn seed_unconditional_table(&self, level: Level, n: usize, table: Vec<Program>) -> Result<()> {
        self.check_length(n)?;
        if table.len() != 1 << n {
            return param(format!("table has {} entries, expected {}", table.len(), 1 << n));
        }
        let cell = &self.tables[n].unconditional[level.index()];
        if let Err(candidate) = cell.set(Arc::new(table)) {
            if **cell.get().expect("occupied") != *candidate {
                return Err(Error::Integrity(format!(
                    "unconditional table (level {level:?}, n={n}) differs from cached value"
                )));
            }
        }
        Ok(())
    }

    /// Every greedy code computed or seeded so far, in parameter order.
    pub fn cached_greedy_codes(&self) -> Vec<(CodeParams, Code)> {
        let mut out = Vec::new();
        for (n, t) in self.tables.iter().enumerate().skip(1) {
            for (e, row) in t.greedy.iter().enumerate() {
                for (lambda, cell) in row.iter().enumerate() {
                    if let Some(c) = cell.get() {
                        out.push((CodeParams { n, e, lambda: lambda as u32 }, c.code().clone()));
                    }
                }
            }
        }
        out
    }

    /// Every ball profile computed or seeded so far, ordered by `(n, level, e)`.
    pub fn cached_ball_profiles(&self) -> Vec<Arc<BallProfile>> {
        let mut out = Vec::new();
        for t in self.tables.iter().skip(1) {
            for level in &t.profiles {
                out.extend(level.iter().filter_map(|c| c.get().cloned()));
            }
        }
        out
    }

    /// Every unconditional table computed or seeded so far, ordered by `(n, level)`.
    pub fn cached_unconditional_tables(&self) -> Vec<(Level, usize, Arc<Vec<Program>>)> {
        let mut out = Vec::new();
        for (n, t) in self.tables.iter().enumerate().skip(1) {
            for level in Level::ALL {
                if let Some(table) = t.unconditional[level.index()].get() {
                    out.push((level, n, table.clone()));
                }
            }
        }
        out
    }

    fn check_query(&self, x: &Word, y: &Word, l_max: usize) -> Result<()> {
        if l_max > self.config.enum_cap {
            return Err(Error::Resource(format!(
                "l_max {l_max} exceeds enumeration cap {}",
                self.config.enum_cap
            )));
        }
        for w in [x, y] {
            if w.len() > self.config.n_max {
                return param(format!("word length {} exceeds N_MAX {}", w.len(), self.config.n_max));
            }
        }
        Ok(())
    }

    /// `K_level(x | y)` restricted to programs of length `<= l_max`. Words
    /// of a different length than a nonempty condition are never produced.
    pub fn complexity(&self, level: Level, x: &Word, y: &Word, l_max: usize) -> Result<ComplexityResult> {
        self.check_query(x, y, l_max)?;
        let witness = self.shortest(level, x, y).filter(|p| p.len() <= l_max);
        Ok(ComplexityResult { level, x: *x, y: *y, value: witness.as_ref().map(Program::len), witness })
    }

    /// Whether `K_level(x | y) <= lambda`; stops at the first witness.
    pub fn complexity_le(&self, level: Level, x: &Word, y: &Word, lambda: usize) -> Result<bool> {
        self.check_query(x, y, lambda)?;
        Ok(self.describable_within(level, x, y, lambda))
    }

    /// The lex-least shortest program for `x` given `y`, if any exists.
    pub fn shortest(&self, level: Level, x: &Word, y: &Word) -> Option<Program> {
        if y.is_empty() {
            if let Some(table) = self.tables.get(x.len()).and_then(|t| t.unconditional[level.index()].get()) {
                return Some(table[x.value() as usize].clone());
            }
            Some(self.shortest_unconditional(level, x))
        } else if x.len() == y.len() {
            Some(self.shortest_conditional(x, y))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn p(s: &str) -> Program {
        s.parse().unwrap()
    }

    #[test]
    fn complexity_examples() {
        let sys = DescriptionSystem::default();
        for x in ["0", "1", "01", "110", "101101"] {
            let r = sys.complexity(Level::Zero, &w(x), &w(x), 10).unwrap();
            assert_eq!(r.value, Some(2));
            assert_eq!(r.witness, Some(p("11")));
        }
        let r = sys.complexity(Level::Zero, &w("11"), &w("00"), 10).unwrap();
        assert_eq!((r.value, r.witness), (Some(4), Some(p("0111"))));
        let r = sys.complexity(Level::Zero, &Word::empty(), &Word::empty(), 10).unwrap();
        assert_eq!((r.value, r.witness), (Some(3), Some(p("011"))));
    }

    #[test]
    fn complexity_respects_l_max() {
        let sys = DescriptionSystem::default();
        let r = sys.complexity(Level::Zero, &w("11"), &w("00"), 3).unwrap();
        assert_eq!((r.value, r.witness), (None, None));
        assert!(matches!(
            sys.complexity(Level::Zero, &w("11"), &w("00"), 25),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn mismatched_lengths_are_absent() {
        let sys = DescriptionSystem::default();
        for l in [0, 5, 24] {
            let r = sys.complexity(Level::One, &w("1"), &w("00"), l).unwrap();
            assert_eq!(r.value, None);
        }
    }

    #[test]
    fn complexity_le_examples() {
        let sys = DescriptionSystem::default();
        let x = w("0110");
        assert!(sys.complexity_le(Level::Zero, &x, &x, 2).unwrap());
        assert!(!sys.complexity_le(Level::Zero, &x, &x, 1).unwrap());
        for y in Word::all(4) {
            for lambda in 0..8 {
                let k0 = sys.complexity_le(Level::Zero, &x, &y, lambda).unwrap();
                let k1 = sys.complexity_le(Level::One, &x, &y, lambda).unwrap();
                assert!(!k0 || k1);
                let exact = sys.complexity(Level::Zero, &x, &y, lambda).unwrap().value.is_some();
                assert_eq!(k0, exact);
            }
        }
    }

    #[test]
    fn seeding_detects_conflicts() {
        let sys = DescriptionSystem::default();
        let params = CodeParams::new(3, 1, 0).unwrap();
        let greedy = sys.greedy_code(params).unwrap().code().clone();
        sys.seed_greedy_code(params, greedy).unwrap();
        let wrong = Code::parse_file("n=3\n000\n").unwrap();
        assert!(matches!(sys.seed_greedy_code(params, wrong), Err(Error::Integrity(_))));

        let fresh = DescriptionSystem::default();
        let profile = (*sys.ball_profile(Level::Zero, 3, 1).unwrap()).clone();
        fresh.seed_ball_profile(profile.clone()).unwrap();
        assert_eq!(*fresh.ball_profile(Level::Zero, 3, 1).unwrap(), profile);
        let mut bad = profile;
        bad.worst[0].k += 1;
        assert!(matches!(fresh.seed_ball_profile(bad), Err(Error::Integrity(_))));
    }

    #[test]
    fn level_parsing() {
        assert_eq!(Level::try_from(1).unwrap(), Level::One);
        assert!(Level::try_from(2).is_err());
    }
}
