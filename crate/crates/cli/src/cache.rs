//! Content-addressed on-disk cache of operator blocks.
//!
//! Each entry is a file named by the SHA-256 of its key, holding a header line
//! `severi-cache v1 <key>` followed by the JSON payload. Writes go through a
//! temporary file and an atomic rename, so readers never see partial entries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use log::warn;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use severi_core::operators::{BlockCache, EnergyBlockMatrix, GradedOperator, CONVENTION_VERSION, MF, MH, MS, NS};

use crate::error::{CliError, CliResult};

pub const CACHE_FORMAT: &str = "severi-cache v1";

pub struct DiskCache {
    root: PathBuf,
}

pub fn block_key(op: &str, s: u32) -> String {
    format!("block/{op}@v{CONVENTION_VERSION}/{s}")
}

fn parse_block_key(key: &str) -> Option<(String, u32)> {
    let rest = key.strip_prefix("block/")?;
    let (op, s) = rest.rsplit_once('/')?;
    let op = op.strip_suffix(&format!("@v{CONVENTION_VERSION}"))?;
    Some((op.to_string(), s.parse().ok()?))
}

pub fn operator_by_name(name: &str) -> Option<Box<dyn GradedOperator>> {
    Some(match name {
        "MS" => Box::new(MS),
        "NS" => Box::new(NS),
        "MH" => Box::new(MH),
        "MF" => Box::new(MF::default()),
        "MF+" => Box::new(MF::positive_genus_one_term()),
        _ => return None,
    })
}

fn block_payload(block: &EnergyBlockMatrix) -> String {
    serde_json::to_string(&block.to_record()).expect("block records serialize")
}

impl DiskCache {
    pub fn open(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)
            .map_err(|e| CliError::Usage(format!("cache directory {} is not usable: {e}", root.display())))?;
        Ok(DiskCache { root: root.to_path_buf() })
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        let digest = Sha256::digest(key.as_bytes());
        let name: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.root.join(format!("{name}.entry"))
    }

    /// Payload stored under `key`, or `None` on a miss. Entries with a wrong
    /// header are ignored with a warning.
    pub fn get(&self, key: &str) -> Option<String> {
        let path = self.path_for(key);
        let text = fs::read_to_string(&path).ok()?;
        let header = format!("{CACHE_FORMAT} {key}");
        match text.split_once('\n') {
            Some((h, payload)) if h == header => Some(payload.to_string()),
            _ => {
                warn!("ignoring cache entry {} with unexpected header", path.display());
                None
            }
        }
    }

    pub fn put(&self, key: &str, payload: &str) -> CliResult<()> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root)?;
        write!(tmp, "{CACHE_FORMAT} {key}\n{payload}")?;
        tmp.flush()?;
        tmp.persist(self.path_for(key)).map_err(|e| CliError::Io(e.error))?;
        Ok(())
    }

    /// Loads the block from disk, or computes and stores it. Corrupt entries are
    /// reported and replaced.
    pub fn block(&self, op: &dyn GradedOperator, s: u32) -> CliResult<EnergyBlockMatrix> {
        let key = block_key(&op.name(), s);
        if let Some(payload) = self.get(&key) {
            let parsed = serde_json::from_str(&payload)
                .map_err(|e| e.to_string())
                .and_then(|rec| EnergyBlockMatrix::from_record(&rec).map_err(|e| e.to_string()));
            match parsed {
                Ok(b) if b.operator() == op.name() && b.energy() == s => return Ok(b),
                Ok(_) => warn!("cache entry {key} describes a different block; recomputing"),
                Err(e) => warn!("cache entry {key} is corrupt ({e}); recomputing"),
            }
        }
        let block = EnergyBlockMatrix::compute(op, s)?;
        self.put(&key, &block_payload(&block))?;
        Ok(block)
    }

    /// Seeds the in-memory block cache with blocks `0..=s_max` of `op`.
    pub fn warm(&self, op: &dyn GradedOperator, s_max: u32) -> CliResult<()> {
        for s in 0..=s_max {
            BlockCache::global().insert(self.block(op, s)?);
        }
        Ok(())
    }

    pub fn keys(&self) -> CliResult<Vec<(PathBuf, Option<String>)>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.root)? {
            let path = entry?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("entry") {
                continue;
            }
            let key = fs::read_to_string(&path).ok().and_then(|t| {
                let first = t.lines().next()?.to_string();
                first.strip_prefix(&format!("{CACHE_FORMAT} ")).map(str::to_string)
            });
            out.push((path, key));
        }
        out.sort();
        Ok(out)
    }

    /// Recomputes entries and compares them byte for byte with the stored payload.
    pub fn audit(&self, only: Option<(&str, u32)>) -> CliResult<Vec<AuditRow>> {
        let mut rows = Vec::new();
        if let Some((op, s)) = only {
            let key = block_key(op, s);
            let path = self.path_for(&key);
            return Ok(vec![self.audit_entry(&path, Some(key))]);
        }
        for (path, key) in self.keys()? {
            rows.push(self.audit_entry(&path, key));
        }
        Ok(rows)
    }

    fn audit_entry(&self, path: &Path, key: Option<String>) -> AuditRow {
        let file = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        let Some(key) = key else {
            return AuditRow { key: String::new(), file, status: AuditStatus::Corrupt };
        };
        let status = match (self.get(&key), parse_block_key(&key)) {
            (None, _) => AuditStatus::Missing,
            (_, None) => AuditStatus::Corrupt,
            (Some(stored), Some((op, s))) => match operator_by_name(&op) {
                None => AuditStatus::Corrupt,
                Some(op) => match EnergyBlockMatrix::compute(op.as_ref(), s) {
                    Ok(b) if block_payload(&b) == stored => AuditStatus::Match,
                    Ok(_) => AuditStatus::Mismatch,
                    Err(_) => AuditStatus::Corrupt,
                },
            },
        };
        AuditRow { key, file, status }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditStatus {
    Match,
    Mismatch,
    Missing,
    Corrupt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRow {
    pub key: String,
    pub file: String,
    pub status: AuditStatus,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn put_get_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = DiskCache::open(dir.path()).unwrap();
        c.put("k", "payload\nwith lines").unwrap();
        assert_eq!(c.get("k").as_deref(), Some("payload\nwith lines"));
        assert_eq!(c.get("other"), None);
    }

    #[test]
    fn version_mismatch_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let c = DiskCache::open(dir.path()).unwrap();
        let path = c.path_for("k");
        fs::write(&path, "severi-cache v0 k\nold").unwrap();
        assert_eq!(c.get("k"), None);
    }

    #[test]
    fn block_keys() {
        assert_eq!(block_key("MS", 3), "block/MS@v1/3");
        assert_eq!(parse_block_key("block/MF+@v1/4"), Some(("MF+".into(), 4)));
        assert_eq!(parse_block_key("block/MS@v9/4"), None);
    }

    #[test]
    fn corrupt_block_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let c = DiskCache::open(dir.path()).unwrap();
        let key = block_key("MS", 2);
        c.put(&key, "{ not json").unwrap();
        let b = c.block(&MS, 2).unwrap();
        assert_eq!(b.energy(), 2);
        assert_eq!(c.audit(Some(("MS", 2))).unwrap()[0].status, AuditStatus::Match);
    }
}
