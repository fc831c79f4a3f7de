//! Append-only JSON-lines store of extremal records.
//!
//! Each line is `{"crc32": "<8 hex digits>", "record": {...}}` where the
//! checksum covers the compact JSON serialization of the record.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExtremalRecord, Kind, Size};
use crate::error::{Error, Result};
use crate::graph::CanonicalLabel;

/// Environment variable naming the default store file.
pub const STORE_ENV: &str = "EDGEGLUE_STORE";

#[derive(Serialize, Deserialize)]
struct Line {
    crc32: String,
    record: ExtremalRecord,
}

fn checksum(record: &ExtremalRecord) -> String {
    let body = serde_json::to_string(record).expect("records serialize");
    format!("{:08x}", crc32fast::hash(body.as_bytes()))
}

/// Filter for [`RecordStore::load`]; `None` fields match anything.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecordQuery {
    pub kind: Option<Kind>,
    pub size: Option<Size>,
    pub forbidden: Option<Vec<CanonicalLabel>>,
}

impl RecordQuery {
    fn matches(&self, r: &ExtremalRecord) -> bool {
        self.kind.is_none_or(|k| k == r.kind)
            && self.size.is_none_or(|s| s == r.size)
            && self.forbidden.as_ref().is_none_or(|f| *f == r.forbidden)
    }
}

#[derive(Clone, Debug)]
pub struct RecordStore {
    path: PathBuf,
}

impl RecordStore {
    pub fn open(path: impl AsRef<Path>) -> Self {
        RecordStore {
            path: path.as_ref().to_path_buf(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Every record in file order, keeping only the first record per key.
    pub fn load_all(&self) -> Result<Vec<ExtremalRecord>> {
        let file = match File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let mut out: Vec<ExtremalRecord> = Vec::new();
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let corrupt = |reason: String| Error::CorruptStore { line: i + 1, reason };
            let parsed: Line = serde_json::from_str(&line).map_err(|e| corrupt(e.to_string()))?;
            let expected = checksum(&parsed.record);
            if parsed.crc32 != expected {
                return Err(corrupt(format!("checksum {} does not match {expected}", parsed.crc32)));
            }
            if !out.iter().any(|r| r.key() == parsed.record.key()) {
                out.push(parsed.record);
            }
        }
        Ok(out)
    }

    pub fn load(&self, query: &RecordQuery) -> Result<Vec<ExtremalRecord>> {
        Ok(self.load_all()?.into_iter().filter(|r| query.matches(r)).collect())
    }

    /// Appends a validated record. Returns `false` without writing when a
    /// record with the same key is already stored.
    pub fn store(&self, record: &ExtremalRecord) -> Result<bool> {
        record.validate()?;
        if self.load_all()?.iter().any(|r| r.key() == record.key()) {
            return Ok(false);
        }
        let line = Line {
            crc32: checksum(record),
            record: record.clone(),
        };
        let mut text = serde_json::to_string(&line).expect("records serialize");
        text.push('\n');
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        file.write_all(text.as_bytes())?;
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{exact_turan, Method};
    use crate::graph::{encode_graph6, Graph};

    #[test]
    fn round_trip_and_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let store = RecordStore::open(dir.path().join("records.jsonl"));
        assert!(store.load_all().unwrap().is_empty());
        let first = exact_turan(4, &[Graph::cycle(4)], Method::BranchAndBound).unwrap();
        assert!(store.store(&first).unwrap());
        let mut later = first.clone();
        later.runtime_ms += 1000;
        later.method = Method::Oracle;
        assert!(!store.store(&later).unwrap());
        let query = RecordQuery {
            kind: Some(Kind::Turan),
            size: Some(Size { m: None, n: 4 }),
            forbidden: None,
        };
        assert_eq!(store.load(&query).unwrap(), vec![first]);
        let other = RecordQuery {
            size: Some(Size { m: None, n: 5 }),
            ..query
        };
        assert!(store.load(&other).unwrap().is_empty());
    }

    #[test]
    fn rejects_invalid_and_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.jsonl");
        let store = RecordStore::open(&path);
        let mut bad = exact_turan(4, &[Graph::cycle(4)], Method::BranchAndBound).unwrap();
        bad.witness = encode_graph6(&Graph::complete(4));
        bad.value = 6;
        assert!(matches!(store.store(&bad), Err(Error::InvariantViolation(_))));
        let good = exact_turan(5, &[Graph::cycle(4)], Method::BranchAndBound).unwrap();
        store.store(&good).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, text.replace("\"value\":6", "\"value\":7")).unwrap();
        assert!(matches!(store.load_all(), Err(Error::CorruptStore { line: 1, .. })));
    }
}
