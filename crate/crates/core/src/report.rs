//! Artifact output. Every file starts with the same metadata (config hash,
//! seed, version, timestamp) and is written to a temporary sibling, then
//! renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Metadata {
    pub command: String,
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
}

pub fn config_hash(cfg: &RunConfig) -> String {
    hex::encode(Sha256::digest(cfg.canonical().as_bytes()))
}

/// UTC wall time, or `SOURCE_DATE_EPOCH` when set.
fn timestamp() -> String {
    let t = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .map(|s| UNIX_EPOCH + Duration::from_secs(s))
        .unwrap_or_else(SystemTime::now);
    humantime::format_rfc3339_seconds(t).to_string()
}

impl Metadata {
    pub fn new(command: &str, cfg: &RunConfig) -> Self {
        Self {
            command: command.to_string(),
            config_hash: config_hash(cfg),
            seed: cfg.seed,
            version: VERSION.to_string(),
            timestamp: timestamp(),
        }
    }

    fn comment_lines(&self) -> String {
        format!(
            "# command: {}\n# config_hash: {}\n# seed: {}\n# version: {}\n# timestamp: {}\n",
            self.command, self.config_hash, self.seed, self.version, self.timestamp
        )
    }
}

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    meta: &'a Metadata,
    report: &'a T,
}

/// Aligned-column text table.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Self {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let cols = self.headers.len();
        let mut width: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (i, c) in r.iter().enumerate().take(cols) {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{c:>w$}", w = width[i]))
                .collect();
            parts.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(&self.headers);
        for r in &self.rows {
            out += &line(r);
        }
        out
    }
}

/// Writes artifacts into one directory and remembers what it wrote.
pub struct ArtifactWriter {
    pub dir: PathBuf,
    pub meta: Metadata,
    pub written: Vec<PathBuf>,
}

impl ArtifactWriter {
    pub fn new(dir: impl Into<PathBuf>, meta: Metadata) -> Self {
        Self {
            dir: dir.into(),
            meta,
            written: Vec::new(),
        }
    }

    fn emit(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, bytes)?;
        self.written.push(path);
        Ok(())
    }

    /// `{"meta": …, "report": …}`, pretty-printed.
    pub fn json<T: Serialize>(&mut self, name: &str, report: &T) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(&Envelope {
            meta: &self.meta,
            report,
        })?;
        bytes.push(b'\n');
        self.emit(name, &bytes)
    }

    /// Metadata as `#` comment lines, then a header row and records.
    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let mut bytes = self.meta.comment_lines().into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut bytes);
            for r in rows {
                w.serialize(r).map_err(std::io::Error::other)?;
            }
            w.flush()?;
        }
        self.emit(name, &bytes)
    }

    /// One JSON object per line; the first line is `{"meta": …}`.
    pub fn jsonl<T: Serialize>(
        &mut self,
        name: &str,
        rows: impl IntoIterator<Item = T>,
    ) -> Result<()> {
        let mut bytes = serde_json::to_vec(&serde_json::json!({ "meta": &self.meta }))?;
        bytes.push(b'\n');
        for r in rows {
            serde_json::to_writer(&mut bytes, &r)?;
            bytes.push(b'\n');
        }
        self.emit(name, &bytes)
    }

    pub fn text(&mut self, name: &str, table: &Table) -> Result<()> {
        let body = self.meta.comment_lines() + &table.render();
        self.emit(name, body.as_bytes())
    }
}
