//! Command-line front end for `codeword-lab`: complexity queries, code
//! search, codeword sets, tables and bound checks over parameter grids.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage, parameter or cache
//! error, 3 the exhaustive search was asked for `n > 4`.

pub mod args;
pub mod cache;

use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use codeword_lab::codes::{counting_bound, greedy_lex_code, max_code_size, random_list_decodable_code, EXHAUSTIVE_N_MAX};
use codeword_lab::codewords::{check_prop1, check_prop2, check_prop3, check_prop4, CheckReport};
use codeword_lab::descsys::DEFAULT_ENUM_CAP;
use codeword_lab::{Code, CodeParams, DescriptionSystem, Level, SearchMethod, SystemConfig, Word};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use args::Cli;
use args::{Command, Format, GridArgs, Method, PointArgs, Which};
use cache::Cache;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<codeword_lab::Error> for CliError {
    fn from(e: codeword_lab::Error) -> Self {
        CliError { code: 2, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError { code: 2, message: e.to_string() }
    }
}

fn config_error(message: impl Into<String>) -> CliError {
    CliError { code: 2, message: message.into() }
}

type Result<T> = std::result::Result<T, CliError>;

/// Runs one command, writing results to `out` and diagnostics to stderr.
/// Returns the exit status for a completed run.
pub fn run(cli: &Cli, out: &mut (dyn Write + Send)) -> Result<u8> {
    let sys = DescriptionSystem::new(SystemConfig::with_n_max(cli.nmax)?)?;
    let mut cache = match &cli.cache_dir {
        Some(dir) => {
            let cache = Cache::open(dir)?;
            cache.seed(&sys)?;
            Some(cache)
        }
        None => None,
    };
    let status = with_workers(cli.workers, || execute(cli, &sys, out))??;
    out.flush()?;
    if let Some(cache) = &mut cache {
        cache.store(&sys)?;
    }
    Ok(status)
}

#[cfg(feature = "parallel")]
fn with_workers<R: Send>(workers: Option<u16>, f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w as usize);
    }
    let pool = builder.build().map_err(|e| config_error(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(not(feature = "parallel"))]
fn with_workers<R>(_workers: Option<u16>, f: impl FnOnce() -> R) -> Result<R> {
    Ok(f())
}

#[cfg(feature = "parallel")]
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}

fn execute(cli: &Cli, sys: &DescriptionSystem, out: &mut (dyn Write + Send)) -> Result<u8> {
    match &cli.command {
        Command::Kc { level, x, y, lmax } => cmd_kc(cli.format, sys, *level, x, &y.unwrap_or_else(Word::empty), *lmax, out),
        Command::Table { grid, method } => cmd_table(cli.format, sys, grid, *method, out),
        Command::Check { which, grid, level, random_codes } => {
            cmd_check(cli.format, sys, *which, grid, *level, *random_codes, cli.seed, out)
        }
        Command::Search { point, method, output } => {
            let params = CodeParams::new(point.n, point.e, point.lambda)?;
            let code = search(params, *method)?;
            write_code(cli.format, &code, output.as_deref(), out)
        }
        Command::Codewords { point, level, output } => {
            let PointArgs { n, e, lambda } = *point;
            let code = sys.codeword_set(*level, n, e, lambda)?;
            write_code(cli.format, &code, output.as_deref(), out)
        }
    }
}

fn show(w: &Word) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.to_string()
    }
}

fn cmd_kc(
    format: Format,
    sys: &DescriptionSystem,
    level: Level,
    x: &Word,
    y: &Word,
    lmax: Option<usize>,
    out: &mut (dyn Write + Send),
) -> Result<u8> {
    let r = sys.complexity(level, x, y, lmax.unwrap_or(DEFAULT_ENUM_CAP))?;
    let witness = r.witness.as_ref().map(|p| p.to_string());
    match format {
        Format::Text => {
            let head = format!("K{}({}|{})", level.index(), show(x), show(y));
            match (r.value, witness) {
                (Some(v), Some(p)) => writeln!(out, "{head} = {v}\nwitness {p}")?,
                _ => writeln!(out, "{head} = ABSENT")?,
            }
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"))?,
        Format::Csv => {
            writeln!(out, "level,x,y,value,witness")?;
            let value = r.value.map_or("ABSENT".to_string(), |v| v.to_string());
            writeln!(out, "{},{x},{y},{value},{}", level.index(), witness.unwrap_or_default())?;
        }
    }
    Ok(0)
}

/// Grid points `(n, e, lambda)` in lexicographic order.
fn grid_points(sys: &DescriptionSystem, grid: &GridArgs) -> Result<Vec<(usize, usize, u32)>> {
    if grid.n.lo == 0 || grid.n.hi > sys.n_max() {
        return Err(config_error(format!("n span {} outside 1..={}", grid.n, sys.n_max())));
    }
    let mut points = Vec::new();
    for n in grid.n.iter() {
        let lambdas = grid.lambda.map_or(0..=n + 2, |s| s.iter());
        for e in grid.e.iter().filter(|&e| e <= n) {
            for lambda in lambdas.clone() {
                let lambda = u32::try_from(lambda).map_err(|_| config_error("lambda out of range"))?;
                points.push((n, e, lambda));
            }
        }
    }
    if points.is_empty() {
        return Err(config_error("the grid is empty"));
    }
    Ok(points)
}

fn search(params: CodeParams, method: Method) -> Result<Code> {
    let method = match method {
        Method::Greedy => return Ok(greedy_lex_code(params)),
        Method::Exhaustive => SearchMethod::Exhaustive,
        Method::BranchAndBound => SearchMethod::BranchAndBound,
    };
    if method == SearchMethod::Exhaustive && params.n > EXHAUSTIVE_N_MAX {
        return Err(CliError {
            code: 3,
            message: format!("exhaustive search is limited to n <= {EXHAUSTIVE_N_MAX}, got n = {}", params.n),
        });
    }
    Ok(max_code_size(params, method)?.1)
}

fn write_code(format: Format, code: &Code, path: Option<&Path>, out: &mut (dyn Write + Send)) -> Result<u8> {
    if let Some(path) = path {
        std::fs::write(path, code.to_file_string())?;
        return Ok(0);
    }
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Listing<'a> {
                n: usize,
                size: usize,
                members: &'a [Word],
            }
            let listing = Listing { n: code.n(), size: code.len(), members: code.members() };
            writeln!(out, "{}", serde_json::to_string(&listing).expect("serializable"))?;
        }
        Format::Text | Format::Csv => out.write_all(code.to_file_string().as_bytes())?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct TableRow {
    n: usize,
    e: usize,
    lambda: u32,
    #[serde(rename = "N")]
    codewords: usize,
    #[serde(rename = "A")]
    max_size: usize,
    greedy: usize,
    counting_bound: u64,
}

const TABLE_COLUMNS: [&str; 7] = ["n", "e", "lambda", "N", "A", "greedy", "counting_bound"];

fn cmd_table(format: Format, sys: &DescriptionSystem, grid: &GridArgs, method: Method, out: &mut (dyn Write + Send)) -> Result<u8> {
    let points = grid_points(sys, grid)?;
    if method == Method::Exhaustive {
        if let Some(&(n, _, _)) = points.iter().find(|p| p.0 > EXHAUSTIVE_N_MAX) {
            return Err(CliError {
                code: 3,
                message: format!("exhaustive search is limited to n <= {EXHAUSTIVE_N_MAX}, got n = {n}"),
            });
        }
    }
    let rows = par_map(&points, |&(n, e, lambda)| -> Result<TableRow> {
        let params = CodeParams::new(n, e, lambda)?;
        let greedy = sys.greedy_code(params)?.code().len();
        let max_size = match method {
            Method::Greedy => greedy,
            m => search(params, m)?.len(),
        };
        Ok(TableRow {
            n,
            e,
            lambda,
            codewords: sys.codeword_set(Level::Zero, n, e, lambda)?.len(),
            max_size,
            greedy,
            counting_bound: counting_bound(params),
        })
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    match format {
        Format::Csv => writeln!(out, "{}", TABLE_COLUMNS.join(","))?,
        Format::Text => writeln!(out, "{}", TABLE_COLUMNS.map(|c| format!("{c:>8}")).join(" "))?,
        Format::Json => {}
    }
    for r in rows {
        let cells = [r.n as u64, r.e as u64, r.lambda as u64, r.codewords as u64, r.max_size as u64, r.greedy as u64, r.counting_bound];
        match format {
            Format::Csv => writeln!(out, "{}", cells.map(|c| c.to_string()).join(","))?,
            Format::Text => writeln!(out, "{}", cells.map(|c| format!("{c:>8}")).join(" "))?,
            Format::Json => writeln!(out, "{}", serde_json::to_string(&r).expect("serializable"))?,
        }
    }
    Ok(0)
}

const REPORT_COLUMNS: &str =
    "proposition,n,e,lambda,level,observed,explicit_bound,pass,vacuous,code_size,lower_bound,observed_unconditional,witness_program,witness_valid";

fn failed(r: &CheckReport) -> bool {
    !r.pass || r.witness_valid == Some(false)
}

fn write_report(format: Format, r: &CheckReport, out: &mut (dyn Write + Send)) -> io::Result<()> {
    let opt = |v: Option<String>| v.unwrap_or_default();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string(r).expect("serializable")),
        Format::Csv => writeln!(
            out,
            "{:?},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.proposition,
            r.params.n,
            r.params.e,
            r.params.lambda,
            r.level.index(),
            r.observed,
            r.explicit_bound,
            r.pass,
            r.vacuous,
            opt(r.code_size.map(|v| v.to_string())),
            opt(r.lower_bound.map(|v| v.to_string())),
            opt(r.observed_unconditional.map(|v| v.to_string())),
            opt(r.witness_program.as_ref().map(|p| p.to_string())),
            opt(r.witness_valid.map(|v| v.to_string())),
        ),
        Format::Text => {
            let mut line = format!(
                "{:?} n={} e={} lambda={} level={} observed={} bound={}",
                r.proposition,
                r.params.n,
                r.params.e,
                r.params.lambda,
                r.level.index(),
                r.observed,
                r.explicit_bound
            );
            if let (Some(lower), Some(seen)) = (r.lower_bound, r.observed_unconditional) {
                line += &format!(" unconditional={seen} lower={lower}");
            }
            if let Some(size) = r.code_size {
                line += &format!(" size={size}");
            }
            if let Some(p) = &r.witness_program {
                line += &format!(" witness={p}");
            }
            line += if failed(r) { " FAIL" } else { " pass" };
            if r.vacuous {
                line += " (vacuous)";
            }
            writeln!(out, "{line}")
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_check(
    format: Format,
    sys: &DescriptionSystem,
    which: Which,
    grid: &GridArgs,
    level: Option<Level>,
    random_codes: usize,
    seed: u64,
    out: &mut (dyn Write + Send),
) -> Result<u8> {
    let points = grid_points(sys, grid)?;
    let run = |p: Which| matches!(which, Which::All) || which == p;
    if format == Format::Csv {
        writeln!(out, "{REPORT_COLUMNS}")?;
    }
    let (mut total, mut failures, mut vacuous) = (0usize, 0usize, 0usize);
    let mut emit = |reports: Vec<codeword_lab::Result<CheckReport>>, out: &mut (dyn Write + Send)| -> Result<()> {
        for r in reports {
            let r = r?;
            total += 1;
            failures += failed(&r) as usize;
            vacuous += r.vacuous as usize;
            write_report(format, &r, out)?;
        }
        Ok(())
    };

    if run(Which::Prop1) {
        let levels: Vec<Level> = level.map_or(Level::ALL.to_vec(), |l| vec![l]);
        let tasks: Vec<_> = points.iter().flat_map(|&p| levels.iter().map(move |&l| (p, l))).collect();
        emit(par_map(&tasks, |&((n, e, lambda), l)| check_prop1(sys, l, n, e, lambda)), out)?;
    }
    if run(Which::Prop2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tasks = Vec::new();
        for &(n, e, lambda) in &points {
            let params = CodeParams::new(n, e, lambda)?;
            tasks.push((sys.greedy_code(params)?.code().clone(), e, lambda));
            for _ in 0..random_codes {
                tasks.push((random_list_decodable_code(params, &mut rng), e, lambda));
            }
        }
        emit(par_map(&tasks, |(code, e, lambda)| check_prop2(sys, code, *e, *lambda)), out)?;
    }
    if run(Which::Prop3) {
        warm_unconditional(sys, Level::Zero, &points)?;
        emit(par_map(&points, |&(n, e, lambda)| check_prop3(sys, n, e, lambda)), out)?;
    }
    if run(Which::Prop4) {
        warm_unconditional(sys, Level::One, &points)?;
        emit(par_map(&points, |&(n, e, lambda)| check_prop4(sys, n, e, lambda)), out)?;
    }
    eprintln!("{total} checks, {failures} failed, {vacuous} vacuous");
    Ok(if failures == 0 { 0 } else { 1 })
}

/// Fills the unconditional tables for every length in the grid so they can
/// be cached.
fn warm_unconditional(sys: &DescriptionSystem, level: Level, points: &[(usize, usize, u32)]) -> Result<()> {
    let mut lengths: Vec<usize> = points.iter().map(|p| p.0).collect();
    lengths.dedup();
    for n in lengths {
        sys.unconditional_table(level, n)?;
    }
    Ok(())
}
