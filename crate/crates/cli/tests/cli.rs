use std::path::Path;
use std::process::{Command, Output};

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codeword-lab"))
        .args(args)
        .env_remove("CODEWORD_LAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn kc_examples() {
    let o = lab(&["kc", "--level", "0", "-x", "11", "-y", "00"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "K0(11|00) = 4\nwitness 0111\n");

    let o = lab(&["kc", "--level", "0", "-x", "101", "-y", "101", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 2);
    assert_eq!(v["witness"], "11");

    let o = lab(&["kc", "--level", "0", "-x", "1", "-y", "00"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ABSENT"));
}

#[test]
fn parameter_errors_exit_2() {
    assert_eq!(lab(&["kc", "--bogus"]).status.code(), Some(2));
    assert_eq!(lab(&["kc", "--level", "2", "-x", "1"]).status.code(), Some(2));
    assert_eq!(lab(&["kc", "-x", "102"]).status.code(), Some(2));
    assert_eq!(lab(&["table", "-n", "4..2"]).status.code(), Some(2));
    assert_eq!(lab(&["table", "-n", "20"]).status.code(), Some(2));
    assert_eq!(lab(&["search", "-n", "3", "-e", "4", "--lambda", "0"]).status.code(), Some(2));
    assert_eq!(lab(&["check", "prop5"]).status.code(), Some(2));
    assert_eq!(lab(&["--workers", "0", "check", "prop1"]).status.code(), Some(2));
}

#[test]
fn search_writes_code_files() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("code.txt");
    let o = lab(&["search", "-n", "3", "-e", "1", "--lambda", "0", "--method", "greedy", "-o", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&file).unwrap(), "n=3\n000\n111\n");

    let o = lab(&["search", "--method", "exhaustive", "-n", "5", "-e", "1", "--lambda", "0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = lab(&["search", "--method", "exhaustive", "-n", "4", "-e", "1", "--lambda", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 5);
}

#[test]
fn codewords_saturate() {
    let o = lab(&["codewords", "-n", "2", "-e", "0", "--lambda", "2"]);
    assert_eq!(stdout(&o), "n=2\n00\n01\n10\n11\n");
    let o = lab(&["codewords", "-n", "2", "-e", "1", "--lambda", "3"]);
    assert_eq!(stdout(&o), "n=2\n");
}

#[test]
fn table_rows() {
    let o = lab(&["table", "-n", "1..4", "-e", "0..2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,e,lambda,N,A,greedy,counting_bound"));
    let rows: Vec<Vec<u64>> = lines.map(|l| l.split(',').map(|c| c.parse().unwrap()).collect()).collect();
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted);
    for r in &rows {
        let (n, e, lambda, big_n, a) = (r[0], r[1], r[2], r[3], r[4]);
        if e == 0 {
            assert_eq!(a, 1 << n, "{r:?}");
        }
        if lambda == n + 2 {
            assert_eq!(big_n, 1 << n, "{r:?}");
        }
        if (n, e, lambda) == (3, 1, 0) {
            assert_eq!(a, 2);
        }
        assert!(r[5] <= a && a <= r[6], "{r:?}");
    }
    let o = lab(&["table", "-n", "5", "--method", "exhaustive"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn check_all_passes_and_flags_vacuous_points() {
    let o = lab(&["check", "all", "-n", "2..4", "-e", "0..1", "--lambda", "0..6"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let o = lab(&["check", "prop4", "-n", "2", "-e", "1", "--lambda", "0..4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 5);
    // W0(2, 1, 3) is empty
    let r3 = &reports[3];
    assert_eq!((r3["params"]["lambda"].as_u64(), r3["vacuous"].as_bool(), r3["pass"].as_bool()), (Some(3), Some(true), Some(true)));
    let r4 = &reports[4];
    assert_eq!((r4["vacuous"].as_bool(), r4["witness_valid"].as_bool()), (Some(false), Some(true)));
    assert!(reports.iter().all(|r| r["version_tag"] == "rds-v1"));
}

#[test]
fn prop2_random_codes_follow_the_seed() {
    let run = |seed: &str| stdout(&lab(&["check", "prop2", "-n", "4", "-e", "1", "--lambda", "1", "--random-codes", "5", "--seed", seed]));
    assert_eq!(run("3"), run("3"));
    assert_eq!(run("3").lines().count(), 6);
}

fn cache_file(dir: &Path) -> std::path::PathBuf {
    dir.join("codeword-lab-cache.jsonl")
}

#[test]
fn cache_is_written_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().join("cache");
    let args = ["check", "all", "-n", "2..3", "-e", "0..1", "--cache-dir", d.to_str().unwrap()];
    let first = lab(&args);
    let text = std::fs::read_to_string(cache_file(&d)).unwrap();
    assert!(text.lines().count() > 0);
    assert!(text.contains("\"kind\":\"greedy_code\""));
    assert!(text.contains("\"kind\":\"complexity_table\""));
    let second = lab(&args);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(cache_file(&d)).unwrap(), text);

    // the environment variable supplies the default directory
    let o = Command::new(env!("CARGO_BIN_EXE_codeword-lab"))
        .args(["codewords", "-n", "4", "-e", "1", "--lambda", "4"])
        .env("CODEWORD_LAB_CACHE", &d)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_ne!(std::fs::read_to_string(cache_file(&d)).unwrap(), text);

    // corrupt values are rejected, not silently used
    std::fs::write(cache_file(&d), text.replace("\"k\":", "\"q\":")).unwrap();
    assert_eq!(lab(&args).status.code(), Some(2));
}
