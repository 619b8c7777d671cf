//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use codeword_lab::codes::{
    counting_bound, greedy_lex_code, list_profile, max_code_size, random_code, random_list_decodable_code,
};
use codeword_lab::codewords::{check_prop1, check_prop2, check_prop3, check_prop4, CheckReport};
use codeword_lab::hamming::ball_volume;
use codeword_lab::{Code, CodeParams, DescriptionSystem, Level, SearchMethod, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report_ok(r: &CheckReport) -> Result<(), String> {
    ensure(r.pass && r.witness_valid != Some(false), || format!("{r:?}"))
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

fn prop1(sys: &DescriptionSystem) -> Outcome {
    let mut points = 0;
    for n in 2..=8 {
        for e in 0..=2.min(n) {
            for lambda in 0..=(n as u32 + 2) {
                for level in Level::ALL {
                    report_ok(&check_prop1(sys, level, n, e, lambda).map_err(|e| e.to_string())?)?;
                    points += 1;
                }
            }
        }
    }
    Ok(format!("{points} grid points"))
}

fn prop2_one(sys: &DescriptionSystem, code: &Code, e: usize, lambda: u32) -> Result<(), String> {
    let r = check_prop2(sys, code, e, lambda).map_err(|e| e.to_string())?;
    report_ok(&r)?;
    let program = r.witness_program.as_ref().ok_or("missing witness")?;
    ensure(r.witness_valid == Some(true) && program.to_string().starts_with("001"), || format!("bad SET witness {r:?}"))
}

fn prop2(sys: &DescriptionSystem) -> Outcome {
    let mut codes = 0;
    prop2_one(sys, &Code::from_words(3, [w("000"), w("111")]).unwrap(), 1, 0)?;
    codes += 1;
    for n in 1..=6 {
        for e in 0..=2.min(n) {
            for lambda in 0..=3 {
                let params = CodeParams::new(n, e, lambda).unwrap();
                prop2_one(sys, &greedy_lex_code(params), e, lambda)?;
                codes += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for _ in 0..20 {
        let n = rng.gen_range(2..=6);
        let e = rng.gen_range(0..=2.min(n));
        let lambda = rng.gen_range(0..=3);
        let code = random_list_decodable_code(CodeParams::new(n, e, lambda).unwrap(), &mut rng);
        prop2_one(sys, &code, e, lambda)?;
        codes += 1;
    }
    Ok(format!("{codes} codes"))
}

fn prop3(sys: &DescriptionSystem) -> Outcome {
    let mut points = 0;
    for n in 1..=8 {
        for e in 0..=2.min(n) {
            for lambda in 0..=3 {
                let r = check_prop3(sys, n, e, lambda).map_err(|e| e.to_string())?;
                report_ok(&r)?;
                ensure(r.observed_unconditional >= r.lower_bound, || format!("{r:?}"))?;
                points += 1;
            }
        }
    }
    Ok(format!("{points} grid points"))
}

fn prop4(sys: &DescriptionSystem) -> Outcome {
    let (mut checked, mut vacuous) = (0, 0);
    for n in 1..=6 {
        for e in 0..=2.min(n) {
            for lambda in 0..=(n as u32 + 2) {
                let r = check_prop4(sys, n, e, lambda).map_err(|e| e.to_string())?;
                report_ok(&r)?;
                if r.vacuous {
                    vacuous += 1;
                    continue;
                }
                let program = r.witness_program.as_ref().ok_or("missing witness")?;
                ensure(r.witness_valid == Some(true) && program.to_string().starts_with("0000"), || {
                    format!("bad ENUM witness {r:?}")
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} points checked, {vacuous} vacuous"))
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let a = |n, e, lambda, method| max_code_size(CodeParams::new(n, e, lambda).unwrap(), method).unwrap().0;
    for n in 1..=4usize {
        for e in 0..=n {
            for lambda in 0..=3u32 {
                let ex = a(n, e, lambda, SearchMethod::Exhaustive);
                let bb = a(n, e, lambda, SearchMethod::BranchAndBound);
                ensure(ex == bb, || format!("A({n},{e},2^{lambda}): exhaustive {ex}, branch and bound {bb}"))?;
                let saturated = 1u64 << lambda >= ball_volume(n, e).unwrap();
                if e == 0 || saturated {
                    ensure(ex == 1 << n, || format!("A({n},{e},2^{lambda}) = {ex}, expected {}", 1 << n))?;
                }
            }
        }
    }
    ensure(a(3, 1, 0, SearchMethod::Exhaustive) == 2, || "A(3,1,1) != 2".into())?;
    ensure(a(2, 1, 0, SearchMethod::Exhaustive) == 1, || "A(2,1,1) != 1".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{:.2}s", elapsed.as_secs_f64()))
}

fn counting_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6usize);
        let e = rng.gen_range(0..=n);
        let density = rng.gen_range(0.0..1.0);
        let code = random_code(n, density, &mut rng).unwrap();
        let mut incidences = 0u64;
        let mut deepest = 0u64;
        for y in 0u32..1 << n {
            let here = code.members().iter().filter(|x| (x.value() ^ y).count_ones() as usize <= e).count() as u64;
            incidences += here;
            deepest = deepest.max(here);
        }
        let vol: u64 = (0..=e).map(|i| binomial(n as u64, i as u64)).sum();
        ensure(incidences == code.len() as u64 * vol, || format!("double counting fails for {code:?} e={e}"))?;
        ensure(list_profile(&code, e).unwrap() == deepest, || format!("profile of {code:?} e={e}"))?;
    }
    for n in 1..=4 {
        for e in 0..=n {
            for lambda in 0..=3 {
                let params = CodeParams::new(n, e, lambda).unwrap();
                let a = max_code_size(params, SearchMethod::Exhaustive).unwrap().0 as u64;
                ensure(a <= counting_bound(params), || format!("A exceeds counting bound at {params:?}"))?;
            }
        }
    }
    Ok("100 codes, exact grid n <= 4".into())
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn complexity_truths(sys: &DescriptionSystem) -> Outcome {
    let mut results = 0usize;
    let mut check = |level: Level, x: &Word, y: &Word, l_max: usize| -> Result<Option<usize>, String> {
        let r = sys.complexity(level, x, y, l_max).map_err(|e| e.to_string())?;
        if let Some(p) = &r.witness {
            let back = sys.decode(level, p, y).map_err(|e| e.to_string())?;
            ensure(back == Some(*x) && Some(p.len()) == r.value, || format!("witness fails: {r:?}"))?;
        }
        results += 1;
        Ok(r.value)
    };
    for n in 1..=6 {
        for x in Word::all(n) {
            ensure(check(Level::Zero, &x, &x, 24)? == Some(2), || format!("K0({x}|{x}) != 2"))?;
            for y in Word::all(n) {
                let k = check(Level::Zero, &x, &y, 24)?;
                ensure(k.is_some_and(|k| k <= n + 2), || format!("K0({x}|{y}) = {k:?} > n+2"))?;
            }
        }
    }
    for n in 1..=4 {
        for x in Word::all(n) {
            for y in Word::all(n).chain([Word::empty()]) {
                let k0 = check(Level::Zero, &x, &y, 24)?;
                let k1 = check(Level::One, &x, &y, 24)?;
                ensure(k1 <= k0 && k1.is_some(), || format!("K1({x}|{y}) = {k1:?} > K0 = {k0:?}"))?;
            }
        }
    }
    Ok(format!("{results} complexities, all witnesses re-decode"))
}

fn monotonicity(sys: &DescriptionSystem) -> Outcome {
    for level in Level::ALL {
        for n in 1..=6 {
            for e in 0..=n {
                for lambda in 0..=(n as u32 + 3) {
                    let here = sys.codeword_set(level, n, e, lambda).map_err(|e| e.to_string())?;
                    let more_lambda = sys.codeword_set(level, n, e, lambda + 1).unwrap();
                    ensure(here.is_subset(&more_lambda), || format!("not monotone in lambda at {level:?} {n} {e} {lambda}"))?;
                    if e < n {
                        let more_e = sys.codeword_set(level, n, e + 1, lambda).unwrap();
                        ensure(more_e.is_subset(&here), || format!("not antitone in e at {level:?} {n} {e} {lambda}"))?;
                    }
                    if lambda >= n as u32 + 2 {
                        ensure(here.len() == 1 << n, || format!("W({n},{e},{lambda}) is not the whole cube"))?;
                    }
                }
            }
        }
    }
    ensure(sys.codeword_set(Level::Zero, 2, 1, 3).unwrap().is_empty(), || "W0(2,1,3) is not empty".into())?;
    Ok("levels 0 and 1, n <= 6".into())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache = dir.path().join("cache");
    let cache = cache.to_str().unwrap();
    let run = |extra: &[&str]| -> Result<Vec<u8>, String> {
        let mut args = vec!["check", "all", "-n", "2..5", "-e", "0..2", "--random-codes", "2", "--format", "json"];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_codeword-lab"))
            .args(&args)
            .env_remove("CODEWORD_LAB_CACHE")
            .output()
            .map_err(|e| e.to_string())?;
        ensure(o.status.success(), || format!("{args:?} exited with {:?}", o.status.code()))?;
        Ok(o.stdout)
    };
    let one = run(&["--workers", "1"])?;
    let eight = run(&["--workers", "8"])?;
    ensure(one == eight, || "workers 1 and 8 disagree".into())?;
    let cold = run(&["--workers", "8", "--cache-dir", cache])?;
    let warm = run(&["--workers", "1", "--cache-dir", cache])?;
    ensure(cold == one && warm == one, || "cache changed the output".into())?;
    std::fs::remove_dir_all(cache).map_err(|e| e.to_string())?;
    let again = run(&["--cache-dir", cache])?;
    ensure(again == one, || "output changed after deleting the cache".into())?;
    Ok(format!("{} report lines identical across 5 runs", one.iter().filter(|&&b| b == b'\n').count()))
}

fn main() {
    let sys = DescriptionSystem::default();
    let criteria: Vec<Criterion> = vec![
        ("1 codeword sets are list-decodable (P1)", Box::new(|| prop1(&sys))),
        ("2 code members are codewords (P2)", Box::new(|| prop2(&sys))),
        ("3 greedy-code sandwich (P3)", Box::new(|| prop3(&sys))),
        ("4 codewords are enumerable (P4)", Box::new(|| prop4(&sys))),
        ("5 exhaustive equals branch and bound", Box::new(oracle_equivalence)),
        ("6 counting identities", Box::new(counting_identities)),
        ("7 complexity ground truths", Box::new(|| complexity_truths(&sys))),
        ("8 monotonicity and saturation", Box::new(|| monotonicity(&sys))),
        ("9 end-to-end determinism", Box::new(determinism)),
    ];
    let mut failures = 0;
    for (name, criterion) in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(criterion))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail} [{secs:.2}s]"),
            Err(why) => {
                failures += 1;
                println!("FAIL criterion {name}: {why} [{secs:.2}s]");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
