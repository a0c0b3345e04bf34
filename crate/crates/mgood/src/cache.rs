//! Append-only result log: one JSON object per line.
//!
//! Loading keeps the last record for each key and drops records written by
//! another toolkit version. A final line without its newline is what an
//! interrupted write leaves behind; it is cut off with a warning. Any other
//! malformed line is an error.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::harness::{Question, Record};
use crate::VERSION;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "MGOOD_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Key {
    pub m: u64,
    pub n: u64,
    pub question: Question,
    pub version: String,
}

#[derive(Serialize, Deserialize)]
struct Line {
    key: Key,
    record: Record,
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("cache line {line} is malformed: {source}")]
    Corrupt { line: usize, source: serde_json::Error },
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<Key, Record>,
    file: File,
    /// Records skipped because another version wrote them.
    pub stale: usize,
}

impl Cache {
    /// Opens or creates the log at `path` and loads it.
    pub fn open(path: impl AsRef<Path>) -> Result<Cache, CacheError> {
        let path = path.as_ref().to_path_buf();
        let mut file = OpenOptions::new().read(true).append(true).create(true).open(&path)?;
        let mut entries = HashMap::new();
        let mut stale = 0;
        let mut good_len = 0u64;
        let mut reader = BufReader::new(&file);
        let mut buf = String::new();
        let mut line_no = 0;
        loop {
            buf.clear();
            let read = reader.read_line(&mut buf)?;
            if read == 0 {
                break;
            }
            line_no += 1;
            let complete = buf.ends_with('\n');
            if buf.trim().is_empty() {
                good_len += read as u64;
                continue;
            }
            match serde_json::from_str::<Line>(buf.trim_end()) {
                Ok(l) if complete => {
                    good_len += read as u64;
                    if l.key.version == VERSION {
                        entries.insert(l.key, l.record);
                    } else {
                        stale += 1;
                    }
                }
                // a final line without its newline is torn even if it parses
                Ok(_) => break,
                Err(_) if !complete => break,
                Err(source) => return Err(CacheError::Corrupt { line: line_no, source }),
            }
        }
        drop(reader);
        let len = file.seek(SeekFrom::End(0))?;
        if len > good_len {
            log::warn!("{}: dropping a torn final record ({} bytes)", path.display(), len - good_len);
            file.set_len(good_len)?;
        }
        Ok(Cache { path, entries, file, stale })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, key: &Key) -> Option<&Record> {
        self.entries.get(key)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Appends one record and flushes it.
    pub fn insert(&mut self, key: Key, record: Record) -> io::Result<()> {
        let mut text = serde_json::to_string(&Line { key: key.clone(), record: record.clone() })?;
        text.push('\n');
        self.file.write_all(text.as_bytes())?;
        self.file.flush()?;
        self.entries.insert(key, record);
        Ok(())
    }
}
