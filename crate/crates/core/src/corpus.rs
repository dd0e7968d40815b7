//! Knot and link records with reference invariants, loaded from CSV or JSON.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::LinkDiagram;
use crate::poly::LaurentPoly2;
use crate::seifert;

pub const DEFAULT_CSV: &str = include_str!("../data/corpus.csv");
pub const DEFAULT_JSON: &str = include_str!("../data/corpus.json");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}")]
    Io { path: String, source: std::io::Error },
    #[error("schema error in {record}: {reason}")]
    SchemaError { record: String, reason: String },
    #[error("inconsistent record {record}: {reason}")]
    CorpusInconsistency { record: String, reason: String },
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotRecord {
    pub name: String,
    pub pd: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alternating: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_diagram: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi4: Option<i64>,
    /// Signature with the positive trefoil at +2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homfly_ref: Option<LaurentPoly2>,
    #[serde(default = "one")]
    pub split_components: usize,
    #[serde(default)]
    pub source: String,
}

/// A validated record together with its parsed diagram.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub record: KnotRecord,
    pub diagram: LinkDiagram,
}

impl CorpusEntry {
    pub fn name(&self) -> &str {
        &self.record.name
    }
}

/// Loads a corpus file, or the bundled corpus when `path` is `default`.
pub fn load_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let path = path.as_ref();
    if path == Path::new("default") {
        return default_corpus();
    }
    let text = std::fs::read_to_string(path)
        .map_err(|source| CorpusError::Io { path: path.display().to_string(), source })?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || text.trim_start().starts_with('[');
    let records = if is_json { parse_json(&text)? } else { parse_csv(&text)? };
    validate_all(records)
}

pub fn default_corpus() -> Result<Vec<CorpusEntry>, CorpusError> {
    validate_all(parse_csv(DEFAULT_CSV)?)
}

pub fn parse_csv(text: &str) -> Result<Vec<KnotRecord>, CorpusError> {
    let schema = |record: String, e: csv::Error| CorpusError::SchemaError { record, reason: e.to_string() };
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| schema("<header>".into(), e))?.clone();
    let name_col = headers.iter().position(|h| h == "name");
    reader
        .records()
        .enumerate()
        .map(|(i, row)| {
            let row = row.map_err(|e| schema(format!("row {}", i + 1), e))?;
            let record = name_col.and_then(|c| row.get(c)).map_or(format!("row {}", i + 1), str::to_string);
            row.deserialize(Some(&headers)).map_err(|e| schema(record, e))
        })
        .collect()
}

pub fn parse_json(text: &str) -> Result<Vec<KnotRecord>, CorpusError> {
    // Parse loosely first so a bad record can be named.
    let values: Vec<serde_json::Value> = serde_json::from_str(text)
        .map_err(|e| CorpusError::SchemaError { record: "<file>".into(), reason: e.to_string() })?;
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            let record = v.get("name").and_then(|n| n.as_str()).map_or(format!("row {}", i + 1), str::to_string);
            serde_json::from_value(v).map_err(|e| CorpusError::SchemaError { record, reason: e.to_string() })
        })
        .collect()
}

pub fn validate_all(records: Vec<KnotRecord>) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut names = BTreeSet::new();
    records
        .into_iter()
        .map(|r| {
            if !names.insert(r.name.clone()) {
                return Err(CorpusError::SchemaError { record: r.name, reason: "duplicate name".into() });
            }
            validate(r)
        })
        .collect()
}

/// Parses the PD code and checks the declared flags against the diagram.
pub fn validate(record: KnotRecord) -> Result<CorpusEntry, CorpusError> {
    let diagram: LinkDiagram = record
        .pd
        .parse()
        .map_err(|e: crate::diagram::DiagramError| CorpusError::SchemaError {
            record: record.name.clone(),
            reason: e.to_string(),
        })?;
    let inconsistent = |reason: String| CorpusError::CorpusInconsistency { record: record.name.clone(), reason };
    if record.split_components == 0 {
        return Err(CorpusError::SchemaError { record: record.name.clone(), reason: "split_components is 0".into() });
    }
    let homogeneous = seifert::analyze_diagram(&diagram).is_homogeneous;
    let flags = [
        ("alternating", record.alternating, diagram.is_alternating()),
        ("positive_diagram", record.positive_diagram, diagram.is_positive()),
        ("homogeneous", record.homogeneous, homogeneous),
    ];
    for (flag, declared, computed) in flags {
        if declared.is_some_and(|d| d != computed) {
            return Err(inconsistent(format!("declared {flag}={} but the diagram gives {computed}", !computed)));
        }
    }
    if let (Some(chi), Some(chi4)) = (record.chi, record.chi4) {
        if chi4 < chi {
            return Err(inconsistent(format!("chi4 = {chi4} is below chi = {chi}")));
        }
    }
    if homogeneous && diagram.connected_count() != record.split_components {
        return Err(inconsistent(format!(
            "homogeneous diagram has {} pieces but split_components = {}",
            diagram.connected_count(),
            record.split_components
        )));
    }
    let diagram = diagram.with_name(record.name.clone());
    Ok(CorpusEntry { record, diagram })
}
