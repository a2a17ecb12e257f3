//! Append-only JSON-lines store of relation records.
//!
//! Each line is one [`RelationRecord`]. Opening a store reads every line and
//! builds an index from `(g, d, degree)` to line offsets. A record is
//! skipped on append if a record with the same schema, provenance and
//! polynomial is already present.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::relgen::RelationRecord;

/// Environment variable naming the default store file.
pub const STORE_ENV: &str = "TAUTRING_STORE";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("store i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("store line {line}: {message}")]
    Corrupt { line: usize, message: String },
}

pub struct RelationStore {
    path: PathBuf,
    records: Vec<RelationRecord>,
    index: BTreeMap<(u32, u32, u32), Vec<usize>>,
    keys: BTreeSet<String>,
}

fn dedup_key(r: &RelationRecord) -> String {
    // provenance and polynomial together; the line itself is canonical
    r.to_json_line()
}

impl RelationStore {
    /// Opens (or prepares to create) the store at `path`.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut store = RelationStore {
            path,
            records: Vec::new(),
            index: BTreeMap::new(),
            keys: BTreeSet::new(),
        };
        if store.path.exists() {
            let reader = BufReader::new(File::open(&store.path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let record = RelationRecord::from_json_line(&line).map_err(|e| StoreError::Corrupt {
                    line: i + 1,
                    message: e.to_string(),
                })?;
                store.remember(record);
            }
        }
        Ok(store)
    }

    /// Store path from the environment variable, if set.
    pub fn path_from_env() -> Option<PathBuf> {
        std::env::var_os(STORE_ENV).map(PathBuf::from)
    }

    fn remember(&mut self, record: RelationRecord) -> bool {
        if !self.keys.insert(dedup_key(&record)) {
            return false;
        }
        self.index
            .entry((record.g, record.d, record.degree))
            .or_default()
            .push(self.records.len());
        self.records.push(record);
        true
    }

    /// Appends records not already stored; returns how many were written.
    pub fn append(&mut self, records: &[RelationRecord]) -> Result<usize, StoreError> {
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut written = 0;
        for r in records {
            if self.remember(r.clone()) {
                writeln!(file, "{}", r.to_json_line())?;
                written += 1;
            }
        }
        file.flush()?;
        Ok(written)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[RelationRecord] {
        &self.records
    }

    pub fn query(&self, g: u32, d: u32, degree: u32) -> Vec<&RelationRecord> {
        self.index
            .get(&(g, d, degree))
            .map(|ids| ids.iter().map(|&i| &self.records[i]).collect())
            .unwrap_or_default()
    }

    /// All records for `(g, d)` in insertion order.
    pub fn for_ring(&self, g: u32, d: u32) -> Vec<&RelationRecord> {
        self.records.iter().filter(|r| r.g == g && r.d == d).collect()
    }
}
