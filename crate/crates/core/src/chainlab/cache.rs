//! Persistent deficiency decisions, one `n;m;l1,l2,...;verdict` line each.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::{Mutex, RwLock};

use super::{ChainError, SquareForest};
use crate::pathforest::{decide, PathForest};

type Key = (usize, Vec<usize>);

/// Concurrent map of decisions, optionally backed by an append-only file.
#[derive(Default)]
pub struct DeficiencyCache {
    map: RwLock<HashMap<Key, bool>>,
    file: Option<Mutex<File>>,
}

impl DeficiencyCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads existing records from `path` (created if missing) and appends new ones there.
    pub fn open(path: &Path) -> Result<Self, ChainError> {
        let io = |e: std::io::Error| ChainError::Cache(format!("{}: {e}", path.display()));
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path).map_err(io)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let (key, deficient) = parse_record(&line).ok_or_else(|| {
                    ChainError::Cache(format!("{}:{}: bad record", path.display(), idx + 1))
                })?;
                map.insert(key, deficient);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(io)?;
        Ok(DeficiencyCache {
            map: RwLock::new(map),
            file: Some(Mutex::new(file)),
        })
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether the square-order forest fails to be m-burnable.
    pub fn is_deficient(&self, sf: &SquareForest) -> Result<bool, ChainError> {
        let key = (sf.m, sf.forest.lengths().to_vec());
        if let Some(&hit) = self.map.read().expect("cache lock").get(&key) {
            return Ok(hit);
        }
        let deficient = decide(&sf.forest, sf.m)?.is_none();
        let fresh = self
            .map
            .write()
            .expect("cache lock")
            .insert(key, deficient)
            .is_none();
        if fresh {
            if let Some(file) = &self.file {
                let mut file = file.lock().expect("cache file lock");
                writeln!(file, "{}", format_record(sf, deficient))
                    .map_err(|e| ChainError::Cache(e.to_string()))?;
            }
        }
        Ok(deficient)
    }
}

fn format_record(sf: &SquareForest, deficient: bool) -> String {
    let lengths: Vec<String> = sf.forest.lengths().iter().map(|l| l.to_string()).collect();
    format!(
        "{};{};{};{}",
        sf.forest.path_count(),
        sf.m,
        lengths.join(","),
        if deficient { "deficient" } else { "burnable" }
    )
}

fn parse_record(line: &str) -> Option<(Key, bool)> {
    let mut fields = line.trim().split(';');
    let n: usize = fields.next()?.parse().ok()?;
    let m: usize = fields.next()?.parse().ok()?;
    let lengths = crate::graph::parse_list(fields.next()?)?;
    let deficient = match fields.next()? {
        "deficient" => true,
        "burnable" => false,
        _ => return None,
    };
    if fields.next().is_some() || lengths.len() != n {
        return None;
    }
    let forest = PathForest::new(lengths).ok()?;
    if forest.order() != m * m {
        return None;
    }
    Some(((m, forest.lengths().to_vec()), deficient))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_round_trip_through_a_file() {
        let dir = std::env::temp_dir().join(format!("graphburn-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cache.txt");
        let _ = std::fs::remove_file(&path);
        let sf = SquareForest::new("17,15,4".parse().unwrap()).unwrap();
        let ok = SquareForest::new("16".parse().unwrap()).unwrap();
        {
            let cache = DeficiencyCache::open(&path).unwrap();
            assert!(cache.is_deficient(&sf).unwrap());
            assert!(!cache.is_deficient(&ok).unwrap());
            assert!(cache.is_deficient(&sf).unwrap());
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "3;6;17,15,4;deficient\n1;4;16;burnable\n");
        let cache = DeficiencyCache::open(&path).unwrap();
        assert_eq!(cache.len(), 2);
        std::fs::write(&path, "3;6;17,15;deficient\n").unwrap();
        assert!(DeficiencyCache::open(&path).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
