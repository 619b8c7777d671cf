//! On-disk result cache: one JSON object per line, rewritten through a
//! temporary file and an atomic rename.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use codeword_lab::descsys::{BallProfile, BallWorst};
use codeword_lab::{Code, CodeParams, DescriptionSystem, Error, Level, Program, Word};
use serde::{Deserialize, Serialize};
use serde_json::Value;

const FILE_NAME: &str = "codeword-lab-cache.jsonl";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    GreedyCode,
    CodewordSet,
    ComplexityTable,
}

/// `complexity_table` entries with `e` hold ball profiles; without `e` they
/// hold unconditional shortest programs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Key {
    pub version_tag: String,
    pub n_max: usize,
    pub kind: Kind,
    pub params: KeyParams,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KeyParams {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<Level>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Entry {
    pub key: Key,
    pub value: Value,
    /// Unix seconds at first insertion.
    pub created: u64,
}

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<Key, Entry>,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache, Error> {
        let path = dir.join(FILE_NAME);
        let mut cache = Cache { path, entries: BTreeMap::new() };
        let text = match fs::read_to_string(&cache.path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(Error::Format(format!("{}: {e}", cache.path.display()))),
        };
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let entry: Entry = serde_json::from_str(line)
                .map_err(|e| Error::Format(format!("{} line {}: {e}", cache.path.display(), i + 1)))?;
            cache.insert(entry)?;
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn insert(&mut self, entry: Entry) -> Result<(), Error> {
        if let Some(old) = self.entries.get(&entry.key) {
            if old.value != entry.value {
                return Err(Error::Integrity(format!("cache key {:?} has two different values", entry.key)));
            }
            return Ok(());
        }
        self.entries.insert(entry.key.clone(), entry);
        Ok(())
    }

    /// Feeds every entry matching the system's version and `N_MAX` into its
    /// memo tables.
    pub fn seed(&self, sys: &DescriptionSystem) -> Result<(), Error> {
        for entry in self.entries.values() {
            let key = &entry.key;
            if key.version_tag != sys.version_tag() || key.n_max != sys.n_max() {
                continue;
            }
            let bad = || Error::Format(format!("malformed cache value for {key:?}"));
            let p = key.params;
            match (key.kind, p.e, p.lambda, p.level) {
                (Kind::GreedyCode, Some(e), Some(lambda), None) => {
                    let words: Vec<Word> = serde_json::from_value(entry.value.clone()).map_err(|_| bad())?;
                    sys.seed_greedy_code(CodeParams::new(p.n, e, lambda)?, Code::from_words(p.n, words)?)?;
                }
                (Kind::ComplexityTable, Some(e), None, Some(level)) => {
                    let worst: Vec<BallWorst> = serde_json::from_value(entry.value.clone()).map_err(|_| bad())?;
                    sys.seed_ball_profile(BallProfile { level, n: p.n, e, worst })?;
                }
                (Kind::ComplexityTable, None, None, Some(level)) => {
                    let table: Vec<Program> = serde_json::from_value(entry.value.clone()).map_err(|_| bad())?;
                    sys.seed_unconditional_table(level, p.n, table)?;
                }
                _ => return Err(bad()),
            }
        }
        Ok(())
    }

    /// Records everything the system computed, then rewrites the file.
    pub fn store(&mut self, sys: &DescriptionSystem) -> Result<(), Error> {
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let key = |kind, params| Key { version_tag: sys.version_tag().to_string(), n_max: sys.n_max(), kind, params };
        let mut fresh = Vec::new();
        for (params, code) in sys.cached_greedy_codes() {
            let params = KeyParams { n: params.n, e: Some(params.e), lambda: Some(params.lambda), level: None };
            fresh.push((key(Kind::GreedyCode, params), to_value(code.members())));
        }
        for profile in sys.cached_ball_profiles() {
            let params = KeyParams { n: profile.n, e: Some(profile.e), lambda: None, level: Some(profile.level) };
            fresh.push((key(Kind::ComplexityTable, params), to_value(&profile.worst)));
        }
        for (level, n, table) in sys.cached_unconditional_tables() {
            let params = KeyParams { n, e: None, lambda: None, level: Some(level) };
            fresh.push((key(Kind::ComplexityTable, params), to_value(&*table)));
        }
        let before = self.entries.len();
        for (key, value) in fresh {
            self.insert(Entry { key, value, created })?;
        }
        if self.entries.len() != before || !self.path.exists() {
            self.write()?;
        }
        Ok(())
    }

    fn write(&self) -> Result<(), Error> {
        let io = |e: std::io::Error| Error::Format(format!("{}: {e}", self.path.display()));
        let dir = self.path.parent().expect("cache file lives in a directory");
        fs::create_dir_all(dir).map_err(io)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
        for entry in self.entries.values() {
            let line = serde_json::to_string(entry).expect("cache entries serialize");
            writeln!(tmp, "{line}").map_err(io)?;
        }
        tmp.as_file().sync_all().map_err(io)?;
        tmp.persist(&self.path).map_err(|e| io(e.error))?;
        Ok(())
    }
}

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("cache values serialize")
}
