//! Individual codewords: words whose conditional complexity stays within
//! `lambda` bits from every condition in their radius-`e` ball, and the
//! checks tying codeword sets to list-decodable codes with explicit
//! constants.

use serde::Serialize;

use crate::codes::{ceil_log2, is_list_decodable, list_profile, Code, IndexedCode};
use crate::descsys::program::{gnat_len, set_encode_len, Program};
use crate::descsys::solver::{enum_program, search_program, set_program};
use crate::descsys::{DescriptionSystem, Level, VERSION_TAG};
use crate::error::{param, Error, Result};
use crate::hamming::{ball_iter, BallSpec, Word};
use crate::par;

/// Outcome of testing one word, with the hardest condition in its ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CodewordCertificate {
    pub x: Word,
    pub e: usize,
    pub lambda: u32,
    pub level: Level,
    pub verdict: bool,
    pub worst_y: Word,
    pub worst_k: usize,
}

/// Whether `K_level(x | y) <= lambda` for every `y` within distance `e` of
/// `x`. The certificate names the first `y` in ball order attaining the
/// maximum complexity.
pub fn is_codeword(sys: &DescriptionSystem, level: Level, x: &Word, e: usize, lambda: u32) -> Result<CodewordCertificate> {
    sys.check_params(x.len(), e)?;
    let mut worst_y = *x;
    let mut worst_k = 0;
    for y in ball_iter(BallSpec::new(*x, e)?) {
        let k = sys.shortest(level, x, &y).expect("same length").len();
        if k > worst_k {
            worst_k = k;
            worst_y = y;
        }
    }
    Ok(CodewordCertificate { x: *x, e, lambda, level, verdict: worst_k <= lambda as usize, worst_y, worst_k })
}

/// `W_level(n, e, lambda)`: every `(e, 2^lambda)`-codeword of length `n`.
pub fn codeword_set(sys: &DescriptionSystem, level: Level, n: usize, e: usize, lambda: u32) -> Result<Code> {
    Ok((*sys.codeword_set(level, n, e, lambda)?).clone())
}

/// The level-0 codeword of largest unconditional complexity `K_0(x | ε)`,
/// lex-least among ties.
pub fn max_complexity_codeword(sys: &DescriptionSystem, n: usize, e: usize, lambda: u32) -> Result<(Word, usize)> {
    let set = sys.codeword_set(Level::Zero, n, e, lambda)?;
    let ks = unconditional_lengths(sys, Level::Zero, set.members());
    first_max(set.members(), &ks).ok_or(Error::EmptySet { n, e, lambda })
}

fn unconditional_lengths(sys: &DescriptionSystem, level: Level, xs: &[Word]) -> Vec<usize> {
    par::map_slice(xs, |x| sys.shortest(level, x, &Word::empty()).expect("always describable").len())
}

fn first_max(xs: &[Word], ks: &[usize]) -> Option<(Word, usize)> {
    let mut best: Option<(Word, usize)> = None;
    for (x, &k) in xs.iter().zip(ks) {
        if best.is_none_or(|(_, b)| k > b) {
            best = Some((*x, k));
        }
    }
    best
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Proposition {
    /// Codeword sets are list-decodable with list size `2^(lambda+1) - 1`.
    P1,
    /// Members of a list-decodable code are codewords, paying for the code's
    /// description.
    P2,
    /// The greedy code's members are codewords with a constant overhead, and
    /// one of them is complex.
    P3,
    /// Complex codewords imply large codeword sets.
    P4,
}

impl std::str::FromStr for Proposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Proposition> {
        match s.to_ascii_lowercase().as_str() {
            "p1" | "prop1" => Ok(Proposition::P1),
            "p2" | "prop2" => Ok(Proposition::P2),
            "p3" | "prop3" => Ok(Proposition::P3),
            "p4" | "prop4" => Ok(Proposition::P4),
            _ => param(format!("unknown proposition {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ReportParams {
    pub n: usize,
    pub e: usize,
    pub lambda: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordPair {
    pub x: Word,
    pub y: Word,
}

/// Result of one bound check. `observed <= explicit_bound` decides `pass`,
/// except for P3 which also requires `observed_unconditional >=
/// lower_bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub proposition: Proposition,
    pub params: ReportParams,
    pub level: Level,
    pub explicit_bound: u64,
    pub bound_formula: String,
    pub observed: u64,
    pub pass: bool,
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observed_unconditional: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_program: Option<Program>,
    /// The witness decodes to `worst_pair.x` and fits within the bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_valid: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_pair: Option<WordPair>,
    pub n_max: usize,
    pub version_tag: &'static str,
}

impl CheckReport {
    fn new(sys: &DescriptionSystem, proposition: Proposition, params: ReportParams, level: Level) -> CheckReport {
        CheckReport {
            proposition,
            params,
            level,
            explicit_bound: 0,
            bound_formula: String::new(),
            observed: 0,
            pass: false,
            vacuous: false,
            code_size: None,
            lower_bound: None,
            observed_unconditional: None,
            witness_program: None,
            witness_valid: None,
            worst_pair: None,
            n_max: sys.n_max(),
            version_tag: VERSION_TAG,
        }
    }

    fn attach_witness(&mut self, sys: &DescriptionSystem, program: Program, pair: WordPair) {
        let decoded = sys.decode(self.level, &program, &pair.y).ok().flatten();
        self.witness_valid = Some(decoded == Some(pair.x) && program.len() as u64 <= self.explicit_bound);
        self.witness_program = Some(program);
        self.worst_pair = Some(pair);
    }
}

/// Codeword sets are list-decodable: every radius-`e` ball holds at most
/// `2^(lambda+1) - 1` codewords, one per program of length `<= lambda`.
pub fn check_prop1(sys: &DescriptionSystem, level: Level, n: usize, e: usize, lambda: u32) -> Result<CheckReport> {
    let set = sys.codeword_set(level, n, e, lambda)?;
    let mut report = CheckReport::new(sys, Proposition::P1, ReportParams { n, e, lambda }, level);
    report.explicit_bound = 1u64.checked_shl(lambda.saturating_add(1)).filter(|_| lambda < 63).map_or(u64::MAX, |v| v - 1);
    report.bound_formula = "2^(lambda+1) - 1".into();
    report.code_size = Some(set.len());
    report.vacuous = set.is_empty();
    report.observed = list_profile(&set, e)?;
    if !set.is_empty() {
        let indexed = IndexedCode::new((*set).clone(), e)?;
        let center = Word::all(n)
            .max_by_key(|y| (indexed.near_count(y), std::cmp::Reverse(*y)))
            .expect("nonempty cube");
        let x = indexed.near_list(&center)[0];
        report.worst_pair = Some(WordPair { x, y: center });
    }
    report.pass = report.observed <= report.explicit_bound;
    Ok(report)
}

/// Every member `x` of an `(e, 2^lambda)`-list-decodable code `C` has
/// `K_0(x | y) <= 3 + |gnat(e)| + |set_encode(C)| + lambda` for all `y`
/// within distance `e`, witnessed by a SET program.
pub fn check_prop2(sys: &DescriptionSystem, code: &Code, e: usize, lambda: u32) -> Result<CheckReport> {
    let n = code.n();
    sys.check_params(n, e)?;
    if code.is_empty() {
        return param("the code must be nonempty");
    }
    if !is_list_decodable(code, e, lambda)? {
        return param(format!("code is not ({e}, 2^{lambda})-list-decodable"));
    }
    let mut report = CheckReport::new(sys, Proposition::P2, ReportParams { n, e, lambda }, Level::Zero);
    report.explicit_bound = (3 + gnat_len(e as u64) + set_encode_len(code)) as u64 + lambda as u64;
    report.bound_formula = "3 + |gnat(e)| + |set_encode(C)| + lambda".into();
    report.code_size = Some(code.len());

    let worst = par::map_slice(code.members(), |x| sys.ball_worst(Level::Zero, x, e));
    let ks: Vec<usize> = worst.iter().map(|w| w.k).collect();
    let (x, k) = first_max(code.members(), &ks).expect("nonempty code");
    let y = worst[code.position(&x).expect("member")].y;
    report.observed = k as u64;
    report.pass = report.observed <= report.explicit_bound;

    let indexed = IndexedCode::new(code.clone(), e)?;
    let index = indexed.near_index(&y, &x).expect("x lies within e of y");
    let program = set_program(e, code, index, indexed.near_count(&y));
    report.attach_witness(sys, program, WordPair { x, y });
    Ok(report)
}

/// For the greedy code `C*` at `(n, e, lambda)`: (a) every member is an
/// `(e, 2^(lambda + c))`-codeword with `c = 4 + |gnat(e)| + |gnat(lambda)|`,
/// witnessed by a SEARCH program, and (b) some member has `K_0(x | ε) >=
/// floor(log2 |C*|)`.
pub fn check_prop3(sys: &DescriptionSystem, n: usize, e: usize, lambda: u32) -> Result<CheckReport> {
    sys.check_params(n, e)?;
    let greedy = sys.greedy(n, e, lambda as u64);
    let code = greedy.code();
    let mut report = CheckReport::new(sys, Proposition::P3, ReportParams { n, e, lambda }, Level::Zero);
    let overhead = 4 + gnat_len(e as u64) + gnat_len(lambda as u64);
    report.explicit_bound = lambda as u64 + overhead as u64;
    report.bound_formula = "lambda + 4 + |gnat(e)| + |gnat(lambda)|".into();
    report.code_size = Some(code.len());

    let profile = sys.profile(Level::Zero, n, e);
    let ks: Vec<usize> = code.members().iter().map(|x| profile.get(x).k).collect();
    let (x, k) = first_max(code.members(), &ks).expect("greedy codes are nonempty");
    let y = profile.get(&x).y;
    report.observed = k as u64;

    let lower = (usize::BITS - 1 - code.len().leading_zeros()) as u64;
    let unconditional = unconditional_lengths(sys, Level::Zero, code.members());
    let strongest = unconditional.iter().copied().max().expect("nonempty") as u64;
    report.lower_bound = Some(lower);
    report.observed_unconditional = Some(strongest);
    report.pass = report.observed <= report.explicit_bound && strongest >= lower;

    let index = greedy.near_index(&y, &x).expect("x lies within e of y");
    let program = search_program(None, e, lambda, index, greedy.near_count(&y));
    report.attach_witness(sys, program, WordPair { x, y });
    Ok(report)
}

/// Level-0 codewords are enumerable from `(n, e, lambda)`, so each has
/// `K_1(x | ε) <= 4 + |gnat(n)| + |gnat(e)| + |gnat(lambda)| + ceil(log2 N)`
/// with `N = |W_0(n, e, lambda)|`, witnessed by an ENUM program. Membership
/// uses level 0 and complexity level 1, which keeps both computable.
pub fn check_prop4(sys: &DescriptionSystem, n: usize, e: usize, lambda: u32) -> Result<CheckReport> {
    let set = sys.codeword_set(Level::Zero, n, e, lambda)?;
    let mut report = CheckReport::new(sys, Proposition::P4, ReportParams { n, e, lambda }, Level::One);
    let count = set.len() as u64;
    let head = 4 + gnat_len(n as u64) + gnat_len(e as u64) + gnat_len(lambda as u64);
    report.explicit_bound = head as u64 + ceil_log2(count) as u64;
    report.bound_formula = "4 + |gnat(n)| + |gnat(e)| + |gnat(lambda)| + ceil(log2 N), N = |W0(n,e,lambda)|".into();
    report.code_size = Some(set.len());
    if set.is_empty() {
        report.vacuous = true;
        report.pass = true;
        return Ok(report);
    }
    sys.prepare_enum(n);
    let ks = unconditional_lengths(sys, Level::One, set.members());
    let (x, k) = first_max(set.members(), &ks).expect("nonempty set");
    report.observed = k as u64;
    report.pass = report.observed <= report.explicit_bound;

    let index = set.position(&x).expect("member") as u64;
    let program = enum_program(n, e, lambda, index, count);
    report.attach_witness(sys, program, WordPair { x, y: Word::empty() });
    Ok(report)
}
