//! Group description files and the shipped corpus.
//!
//! A file holds one JSON object:
//! `{"name": …, "degree": n, "generators": [[…], …], "subgroups": {"label": [[…], …]}}`
//! with 0-based image arrays; `subgroups` is optional.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Result, SubkitError};
use crate::group::{prime_divisors, Budget, Group, Subgroup};
use crate::perm::Permutation;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub path: PathBuf,
    pub group: Arc<Group>,
    /// Prime divisors of the group order.
    pub primes: Vec<usize>,
    pub subgroups: BTreeMap<String, Subgroup>,
}

impl CorpusEntry {
    pub fn whole(&self) -> Subgroup {
        self.group.as_subgroup()
    }

    pub fn subgroup(&self, label: &str) -> Option<&Subgroup> {
        self.subgroups.get(label)
    }
}

/// Directory of the corpus shipped with the crate.
pub fn shipped_corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// Every `.json` file of the shipped corpus, sorted by path.
pub fn shipped_corpus_paths() -> Vec<PathBuf> {
    json_files(&shipped_corpus_dir()).unwrap_or_default()
}

fn json_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    Ok(out)
}

/// Loads files (directories contribute their `.json` files) in path order.
pub fn load_corpus<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<CorpusEntry>> {
    load_corpus_with(paths, &Budget::from_env())
}

pub fn load_corpus_with<P: AsRef<Path>>(paths: &[P], budget: &Budget) -> Result<Vec<CorpusEntry>> {
    let mut files = Vec::new();
    for p in paths {
        let p = p.as_ref();
        if p.is_dir() {
            files.extend(json_files(p)?);
        } else {
            files.push(p.to_path_buf());
        }
    }
    files.sort();
    files.dedup();
    files
        .iter()
        .map(|f| {
            let text = std::fs::read_to_string(f)
                .map_err(|e| SubkitError::Io(format!("{}: {e}", f.display())))?;
            parse_entry(&text, f, budget)
        })
        .collect()
}

fn parse_err(file: &Path, field: &str, reason: impl Into<String>) -> SubkitError {
    SubkitError::Parse {
        file: file.display().to_string(),
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn parse_perm(v: &Value, degree: usize, file: &Path, field: &str) -> Result<Permutation> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(file, field, "expected an array of integers"))?;
    if arr.len() != degree {
        return Err(parse_err(
            file,
            field,
            format!("expected {degree} images, found {}", arr.len()),
        ));
    }
    let images = arr
        .iter()
        .map(|x| {
            x.as_u64()
                .filter(|&n| n <= u32::MAX as u64)
                .map(|n| n as u32)
                .ok_or_else(|| parse_err(file, field, "images must be non-negative integers"))
        })
        .collect::<Result<Vec<u32>>>()?;
    Permutation::new(images).map_err(|e| parse_err(file, field, e.to_string()))
}

fn parse_perm_list(v: &Value, degree: usize, file: &Path, field: &str) -> Result<Vec<Permutation>> {
    let arr = v
        .as_array()
        .ok_or_else(|| parse_err(file, field, "expected an array of image arrays"))?;
    arr.iter()
        .enumerate()
        .map(|(i, g)| parse_perm(g, degree, file, &format!("{field}[{i}]")))
        .collect()
}

/// Parses one group description; `file` is only used in error messages.
pub fn parse_entry(text: &str, file: &Path, budget: &Budget) -> Result<CorpusEntry> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| parse_err(file, "<document>", e.to_string()))?;
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err(file, "<document>", "expected a JSON object"))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err(file, "name", "expected a string"))?
        .to_string();
    let degree = obj
        .get("degree")
        .and_then(Value::as_u64)
        .filter(|&d| d > 0)
        .ok_or_else(|| parse_err(file, "degree", "expected a positive integer"))?
        as usize;
    let gens = parse_perm_list(
        obj.get("generators")
            .ok_or_else(|| parse_err(file, "generators", "missing"))?,
        degree,
        file,
        "generators",
    )?;
    let group = Arc::new(Group::generate(degree, gens, budget)?.with_name(name.clone()));
    let mut subgroups = BTreeMap::new();
    if let Some(subs) = obj.get("subgroups") {
        let subs = subs
            .as_object()
            .ok_or_else(|| parse_err(file, "subgroups", "expected an object"))?;
        for (label, gens) in subs {
            let field = format!("subgroups.{label}");
            let perms = parse_perm_list(gens, degree, file, &field)?;
            let sub = Subgroup::from_perms(&group, &perms)
                .map_err(|e| parse_err(file, &field, e.to_string()))?;
            subgroups.insert(label.clone(), sub);
        }
    }
    Ok(CorpusEntry {
        name,
        path: file.to_path_buf(),
        primes: prime_divisors(group.order()),
        group,
        subgroups,
    })
}
