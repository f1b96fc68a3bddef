//! Output files with provenance headers, removed again if the command fails.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub const TOOL: &str = concat!("vat ", env!("CARGO_PKG_VERSION"));

/// Command name plus the configuration echoed into every output.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub command: &'static str,
    #[serde(serialize_with = "as_map")]
    pub config: Vec<(String, String)>,
}

fn as_map<S: serde::Serializer>(pairs: &[(String, String)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(pairs.iter().map(|(k, v)| (k, v)))
}

impl Provenance {
    pub fn new(command: &'static str) -> Self {
        Provenance {
            tool: TOOL,
            command,
            config: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.config.push((key.to_owned(), value.to_string()));
    }

    pub fn set_path(&mut self, key: &str, path: Option<&Path>) {
        if let Some(p) = path {
            self.set(key, p.display());
        }
    }

    /// `#key=value` pairs for text outputs.
    pub fn comments(&self) -> Vec<(&str, String)> {
        let mut out = vec![("tool", TOOL.to_owned()), ("command", self.command.to_owned())];
        out.extend(self.config.iter().map(|(k, v)| (k.as_str(), v.clone())));
        out
    }

    pub fn header(&self) -> String {
        self.comments()
            .into_iter()
            .map(|(k, v)| format!("#{k}={v}\n"))
            .collect()
    }
}

#[derive(Serialize)]
struct Envelope<'a, T> {
    provenance: &'a Provenance,
    #[serde(flatten)]
    body: &'a T,
}

/// Tracks files written into the output directory.
pub struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        Ok(Outputs {
            dir: dir.to_owned(),
            written: Vec::new(),
            committed: false,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).with_context(|| format!("cannot create {}", parent.display()))?;
        }
        fs::write(&path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, provenance: &Provenance, body: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(&Envelope { provenance, body })?;
        text.push('\n');
        self.write(name, &text)
    }

    pub fn record(&mut self, paths: impl IntoIterator<Item = PathBuf>) {
        self.written.extend(paths);
    }

    pub fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.written)
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if !self.committed {
            for p in &self.written {
                let _ = fs::remove_file(p);
            }
        }
    }
}
