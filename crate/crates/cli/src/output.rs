//! CSV emission and the run manifest.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const MANIFEST_NAME: &str = "manifest.json";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// `(A,H)` becomes `A_H`, for use in column names.
pub fn state_column(label: &str) -> String {
    label.trim_matches(|c| c == '(' || c == ')').replace(',', "_")
}

/// In-memory CSV table with LF line endings.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(header.iter().map(|h| h.as_ref()))
            .expect("writing to memory");
        Self { writer }
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        self.writer
            .write_record(fields.iter().map(|f| f.as_ref()))
            .expect("writing to memory");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("flushing to memory")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl OutputFile {
    pub fn new(name: &str, bytes: Vec<u8>) -> Self {
        Self {
            name: name.to_string(),
            bytes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    pub bytes: usize,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    pub generator: String,
    pub files: Vec<FileDigest>,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialises");
        s.push('\n');
        s
    }

    /// Recomputes every digest from the files under `dir`.
    pub fn verify(&self, dir: &Path) -> std::io::Result<bool> {
        for f in &self.files {
            let bytes = std::fs::read(dir.join(&f.name))?;
            if sha256_hex(&bytes) != f.sha256 || bytes.len() != f.bytes {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Writes `files` and the manifest describing them into `dir`.
pub fn write_outputs(dir: &Path, files: &[OutputFile], mut manifest: RunManifest) -> std::io::Result<RunManifest> {
    std::fs::create_dir_all(dir)?;
    manifest.files.clear();
    for f in files {
        std::fs::write(dir.join(&f.name), &f.bytes)?;
        manifest.files.push(FileDigest {
            name: f.name.clone(),
            sha256: sha256_hex(&f.bytes),
            bytes: f.bytes.len(),
        });
    }
    std::fs::write(dir.join(MANIFEST_NAME), manifest.to_json())?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 0.0, 1e300, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn table_uses_lf_and_quotes_labels() {
        let mut t = Table::new(&["state", "pi"]);
        t.row(&["(A,H)", "1"]);
        assert_eq!(String::from_utf8(t.into_bytes()).unwrap(), "state,pi\n\"(A,H)\",1\n");
        assert_eq!(state_column("(NA,H)"), "NA_H");
    }

    #[test]
    fn digest_is_standard() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
