use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

#[derive(Serialize)]
struct Entry {
    file: String,
    bytes: u64,
}

/// Lists `files` relative to `dir`, sorted; written after everything else.
pub fn write_manifest(dir: &Path, files: &[PathBuf]) -> Result<()> {
    let mut entries = files
        .iter()
        .map(|f| {
            let bytes = std::fs::metadata(f).with_context(|| format!("stat {}", f.display()))?.len();
            let rel = f.strip_prefix(dir).unwrap_or(f);
            Ok(Entry { file: rel.to_string_lossy().replace('\\', "/"), bytes })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.file.cmp(&b.file));
    write_json(&dir.join("manifest.json"), &entries)
}
