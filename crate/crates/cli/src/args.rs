use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use codeword_lab::hamming::DEFAULT_N_MAX;
use codeword_lab::{Level, Word};

#[derive(Parser, Debug)]
#[command(name = "codeword-lab", version, about = "List-decodable codes and their codewords under a fixed description system")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for the result cache (JSON lines).
    #[arg(long, global = true, env = "CODEWORD_LAB_CACHE")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,
    /// Longest word length the description system handles.
    #[arg(long, global = true, default_value_t = DEFAULT_N_MAX)]
    pub nmax: usize,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Greedy,
    Exhaustive,
    #[value(name = "branch_and_bound", alias = "branch-and-bound")]
    BranchAndBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Prop1,
    Prop2,
    Prop3,
    Prop4,
    All,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact conditional complexity K_level(x | y).
    Kc {
        #[arg(long, default_value = "0", value_parser = parse_level)]
        level: Level,
        #[arg(short = 'x', value_parser = parse_word)]
        x: Word,
        /// Condition; omit (or pass "") for the empty word.
        #[arg(short = 'y', value_parser = parse_word)]
        y: Option<Word>,
        /// Longest program length considered.
        #[arg(long)]
        lmax: Option<usize>,
    },
    /// Codeword-set sizes against maximum code sizes over a grid.
    Table {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Method::BranchAndBound)]
        method: Method,
    },
    /// Run the bound checks over a grid.
    Check {
        #[arg(value_enum)]
        which: Which,
        #[command(flatten)]
        grid: GridArgs,
        /// Restrict prop1 to one level (both by default).
        #[arg(long, value_parser = parse_level)]
        level: Option<Level>,
        /// Extra seeded random list-decodable codes per grid point for prop2.
        #[arg(long, default_value_t = 0)]
        random_codes: usize,
    },
    /// Build a list-decodable code and write it in the code file format.
    Search {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = Method::Greedy)]
        method: Method,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Write the codeword set W_level(n, e, lambda) in the code file format.
    Codewords {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value = "0", value_parser = parse_level)]
        level: Level,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct GridArgs {
    /// Word lengths, `a..b` inclusive or a single value.
    #[arg(short = 'n', default_value = "2..4")]
    pub n: Span,
    /// Radii; points with e > n are skipped.
    #[arg(short = 'e', default_value = "0..1")]
    pub e: Span,
    /// log2 of the list size; defaults to 0..n+2 for each n.
    #[arg(long)]
    pub lambda: Option<Span>,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct PointArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(short = 'e')]
    pub e: usize,
    #[arg(long)]
    pub lambda: u32,
}

/// Inclusive integer range written `a..b`, or `a` for a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Span, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad span {s:?}: expected a..b"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = num(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty span {s:?}"));
        }
        Ok(Span { lo, hi })
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

fn parse_level(s: &str) -> Result<Level, String> {
    let v: u8 = s.parse().map_err(|_| format!("level must be 0 or 1, got {s:?}"))?;
    Level::try_from(v).map_err(|e| e.to_string())
}

fn parse_word(s: &str) -> Result<Word, String> {
    if s == "ε" {
        return Ok(Word::empty());
    }
    s.parse().map_err(|e: codeword_lab::Error| e.to_string())
}
