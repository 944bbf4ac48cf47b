//! CSV artifacts with a `#`-prefixed metadata block.
//!
//! The metadata holds only deterministic values (seed, RNG identifier,
//! config hash, crate version), so identical inputs give identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::HarnessError;
use crate::rng::RNG_ALGORITHM;

#[derive(Clone, Debug, PartialEq)]
pub struct Metadata {
    entries: Vec<(String, String)>,
}

impl Metadata {
    pub fn new(seed: Option<u64>, config_hash: Option<&str>) -> Self {
        let mut entries = vec![(
            "artifact_version".to_string(),
            format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
        )];
        if let Some(seed) = seed {
            entries.push(("seed".into(), seed.to_string()));
        }
        entries.push(("rng".into(), RNG_ALGORITHM.into()));
        if let Some(hash) = config_hash {
            entries.push(("config_sha256".into(), hash.into()));
        }
        Metadata { entries }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }
}

/// Shortest round-trip representation, identical on every platform.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub fn write_csv<W: Write>(
    mut out: W,
    meta: &Metadata,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), HarnessError> {
    for (k, v) in meta.entries() {
        writeln!(out, "# {k}: {v}")?;
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row)?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_csv_file(
    path: &Path,
    meta: &Metadata,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    write_csv(BufWriter::new(File::create(path)?), meta, header, rows)
}

/// The CSV body of a file written by [`write_csv`]: everything after the
/// metadata block.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn metadata_then_header() {
        let mut buf = Vec::new();
        let meta = Metadata::new(Some(7), Some("abc")).with("note", "x");
        write_csv(
            &mut buf,
            &meta,
            &["a", "b"],
            &[vec!["1".into(), fmt_f64(0.1)]],
        )
        .unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# artifact_version: "));
        assert!(text.contains("# seed: 7\n"));
        assert!(text.contains("# config_sha256: abc\n"));
        assert_eq!(csv_body(&text), "a,b\n1,0.1");
    }
}
