//! Manifest-stamped CSV and JSON report documents.
//!
//! Every output document embeds a manifest describing exactly how it was
//! produced, so a run can be reproduced byte-for-byte from the document
//! alone. CSV files carry the manifest as a leading comment line
//! `# manifest: {...}` followed by a mandatory header row; JSON documents
//! are single objects with a top-level `"manifest"` field.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Everything needed to reproduce a run: the subcommand and the full set of
/// effective inputs (explicit flags and defaults alike).
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_points: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perfect_lens: Option<bool>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> RunManifest {
        RunManifest {
            subcommand: subcommand.to_string(),
            config: None,
            out: None,
            seed: None,
            samples: None,
            sweep_min: None,
            sweep_max: None,
            sweep_points: None,
            perfect_lens: None,
        }
    }
}

/// Quote a CSV field per RFC 4180 when it contains a comma, quote or newline.
fn csv_field(raw: &str) -> String {
    if raw.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

/// Fixed-width scientific notation so reruns are byte-identical.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.12e}")
}

/// Build a CSV document: `# manifest: {json}` line, header row, data rows.
pub fn csv_document(
    manifest: &RunManifest,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<String> {
    let mut out = String::new();
    out.push_str("# manifest: ");
    out.push_str(&serde_json::to_string(manifest)?);
    out.push('\n');
    out.push_str(
        &header
            .iter()
            .map(|h| csv_field(h))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::Usage(format!(
                "csv row has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        out.push_str(
            &row.iter()
                .map(|f| csv_field(f))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    Ok(out)
}

/// Extract the manifest back out of a CSV document's first line.
pub fn csv_manifest(document: &str) -> Result<RunManifest> {
    let first = document
        .lines()
        .next()
        .ok_or_else(|| Error::Usage("empty csv document".into()))?;
    let json = first
        .strip_prefix("# manifest: ")
        .ok_or_else(|| Error::Usage("csv document missing manifest line".into()))?;
    Ok(serde_json::from_str(json)?)
}

/// Build a JSON report: a single object with the payload's fields plus a
/// top-level `"manifest"` field. The payload must serialize to an object.
pub fn json_document<T: Serialize>(manifest: &RunManifest, payload: &T) -> Result<String> {
    let value = serde_json::to_value(payload)?;
    let Value::Object(mut map) = value else {
        return Err(Error::Usage("json payload must be an object".into()));
    };
    let mut doc = Map::new();
    doc.insert("manifest".into(), serde_json::to_value(manifest)?);
    doc.append(&mut map);
    let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
    text.push('\n');
    Ok(text)
}

/// Write to `path`, or to stdout when no path is given.
pub fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, contents)?;
            Ok(())
        }
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Derive sibling output paths `<base>.json` and `<base>.csv` from an
/// `--out` base path (any existing extension is treated as part of the base).
pub fn sibling_paths(base: &Path) -> (PathBuf, PathBuf) {
    let base_str = base.to_string_lossy();
    (
        PathBuf::from(format!("{base_str}.json")),
        PathBuf::from(format!("{base_str}.csv")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> RunManifest {
        let mut m = RunManifest::new("random-verify");
        m.seed = Some(42);
        m.samples = Some(100);
        m
    }

    #[test]
    fn csv_roundtrips_manifest() {
        let m = manifest();
        let doc = csv_document(
            &m,
            &["a", "b"],
            &[vec!["1".into(), "has,comma".into()]],
        )
        .unwrap();
        let mut lines = doc.lines();
        assert!(lines.next().unwrap().starts_with("# manifest: {"));
        assert_eq!(lines.next().unwrap(), "a,b");
        assert_eq!(lines.next().unwrap(), "1,\"has,comma\"");
        assert_eq!(csv_manifest(&doc).unwrap(), m);
    }

    #[test]
    fn csv_rejects_ragged_rows() {
        assert!(csv_document(&manifest(), &["a", "b"], &[vec!["1".into()]]).is_err());
    }

    #[test]
    fn json_document_embeds_manifest() {
        #[derive(Serialize)]
        struct Payload {
            value: f64,
        }
        let doc = json_document(&manifest(), &Payload { value: 0.5 }).unwrap();
        let parsed: Value = serde_json::from_str(&doc).unwrap();
        assert_eq!(parsed["manifest"]["subcommand"], "random-verify");
        assert_eq!(parsed["manifest"]["seed"], 42);
        assert_eq!(parsed["value"], 0.5);
    }

    #[test]
    fn float_formatting_is_stable() {
        assert_eq!(fmt_float(0.5), "5.000000000000e-1");
        assert_eq!(fmt_float(-1.0), "-1.000000000000e0");
    }
}
