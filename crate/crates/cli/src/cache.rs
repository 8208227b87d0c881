//! Result cache keyed by a hash of the canonical scenario.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use crate::report::{ReportRow, Status};
use crate::scenario::{Command, Scenario};

#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    entries: BTreeMap<String, ReportRow>,
    dirty: bool,
}

/// Hash of the command and canonical scenario. Seeds, worker counts and
/// timeouts are excluded: they do not change exact results, and inexact
/// rows are never cached.
pub fn key(scenario: &Scenario, command: Command) -> String {
    let mut h = Sha256::new();
    h.update(command.name().as_bytes());
    h.update(b"\n");
    h.update(scenario.to_canonical_json().as_bytes());
    hex::encode(h.finalize())
}

impl Cache {
    pub fn open(path: &Path) -> Result<Self> {
        let entries = if path.exists() {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing cache {}", path.display()))?
        } else {
            BTreeMap::new()
        };
        Ok(Self {
            path: path.to_path_buf(),
            entries,
            dirty: false,
        })
    }

    pub fn get(&self, scenario: &Scenario, command: Command) -> Option<&ReportRow> {
        self.entries.get(&key(scenario, command))
    }

    pub fn insert(&mut self, scenario: &Scenario, command: Command, row: &ReportRow) {
        let cacheable = matches!(
            row.status,
            Status::Match | Status::Mismatch | Status::Exploratory
        ) && !row.computed.starts_with("error:");
        if cacheable {
            self.entries.insert(key(scenario, command), row.clone());
            self.dirty = true;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Writes to a temporary file in the same directory, then renames it
    /// over the cache file.
    pub fn save(&mut self) -> Result<()> {
        if !self.dirty {
            return Ok(());
        }
        let dir = match self.path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
        serde_json::to_writer_pretty(&mut tmp, &self.entries)?;
        tmp.write_all(b"\n")?;
        tmp.persist(&self.path)
            .with_context(|| format!("writing {}", self.path.display()))?;
        self.dirty = false;
        Ok(())
    }
}
