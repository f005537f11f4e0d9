//! The JSON space-file format.
//!
//! ```json
//! {
//!   "kind": "finite-gspace",
//!   "n": 2,
//!   "entries": [{"i": 0, "j": 0, "k": 1, "v": 1.0}, {"i": 0, "j": 1, "k": 1, "v": 2.0}],
//!   "map": [0, 0]
//! }
//! ```
//!
//! Finite tables must be total: every pair `i < j` (metrics) or every triple
//! `i <= j <= k` that is not all equal (G-spaces) appears exactly once.
//! Entries are kept sorted, so serializing a parsed file is canonical.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::contraction::{FiniteMap, LineMap};
use crate::gmetric::{canonical_triples, TernaryTable};
use crate::metric::{BinaryTable, Interval};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SpaceFile {
    #[serde(rename = "finite-metric")]
    FiniteMetric(FiniteMetricFile),
    #[serde(rename = "finite-gspace")]
    FiniteGspace(FiniteGspaceFile),
    #[serde(rename = "oracle-1d")]
    Oracle1d(OracleFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteMetricFile {
    pub n: usize,
    pub entries: Vec<PairEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assertions: BTreeMap<String, bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteGspaceFile {
    pub n: usize,
    pub entries: Vec<TripleEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assertions: BTreeMap<String, bool>,
}

fn default_samples() -> usize {
    101
}

/// A builtin map on an interval with the Euclidean distance. Completeness of
/// the carrier is taken on trust; record it with `"assertions": {"complete": true}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleFile {
    pub interval: [f64; 2],
    /// `scale:<k>`, `affine:<a>,<b>` or `identity`.
    pub map: String,
    /// Grid size used when quantifying over the interval.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub assertions: BTreeMap<String, bool>,
}

/// A rejected space file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceFileError {
    /// One of `syntax`, `schema`, `missing-entry`, `index-out-of-range`,
    /// `negative-value`, `invalid-value`, `duplicate-key`, `invalid-key`,
    /// `invalid-map`.
    pub id: &'static str,
    pub message: String,
    /// JSON path of the offending field, e.g. `entries[3].v`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl SpaceFileError {
    fn at(id: &'static str, field: impl Into<String>, message: impl Into<String>) -> Self {
        SpaceFileError { id, message: message.into(), field: Some(field.into()), line: None, column: None }
    }
}

impl fmt::Display for SpaceFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.message)?;
        if let Some(field) = &self.field {
            write!(f, " (at {field})")?;
        }
        if let (Some(l), Some(c)) = (self.line, self.column) {
            write!(f, " (line {l}, column {c})")?;
        }
        Ok(())
    }
}

impl std::error::Error for SpaceFileError {}

type Parsed<T> = std::result::Result<T, SpaceFileError>;

/// Parses and validates a space file.
pub fn parse_space_file(text: &str) -> Parsed<SpaceFile> {
    let mut file: SpaceFile = serde_json::from_str(text).map_err(|e| {
        let id = match e.classify() {
            serde_json::error::Category::Data => "schema",
            _ => "syntax",
        };
        SpaceFileError { id, message: e.to_string(), field: None, line: Some(e.line()), column: Some(e.column()) }
    })?;
    file.validate()?;
    Ok(file)
}

fn check_value(v: f64, field: String) -> Parsed<()> {
    if !v.is_finite() {
        return Err(SpaceFileError::at("invalid-value", field, format!("value {v} is not finite")));
    }
    if v < 0.0 {
        return Err(SpaceFileError::at("negative-value", field, format!("value {v} is negative")));
    }
    Ok(())
}

fn check_index(idx: usize, n: usize, field: String) -> Parsed<()> {
    if idx >= n {
        return Err(SpaceFileError::at("index-out-of-range", field, format!("index {idx} is outside 0..{n}")));
    }
    Ok(())
}

fn check_n(n: usize) -> Parsed<()> {
    if n == 0 {
        return Err(SpaceFileError::at("invalid-value", "n", "carrier must have at least one point"));
    }
    Ok(())
}

fn check_map(map: &Option<Vec<usize>>, n: usize) -> Parsed<()> {
    let Some(image) = map else { return Ok(()) };
    if image.len() != n {
        return Err(SpaceFileError::at("invalid-map", "map", format!("map has {} labels, expected {n}", image.len())));
    }
    for (i, &v) in image.iter().enumerate() {
        check_index(v, n, format!("map[{i}]"))?;
    }
    Ok(())
}

impl SpaceFile {
    fn validate(&mut self) -> Parsed<()> {
        match self {
            SpaceFile::FiniteMetric(f) => {
                check_n(f.n)?;
                let n = f.n;
                let mut seen = vec![false; n * n];
                for (idx, e) in f.entries.iter().enumerate() {
                    check_index(e.i, n, format!("entries[{idx}].i"))?;
                    check_index(e.j, n, format!("entries[{idx}].j"))?;
                    if e.i >= e.j {
                        return Err(SpaceFileError::at(
                            "invalid-key",
                            format!("entries[{idx}]"),
                            format!("pair ({}, {}) must have i < j", e.i, e.j),
                        ));
                    }
                    check_value(e.v, format!("entries[{idx}].v"))?;
                    let slot = &mut seen[e.i * n + e.j];
                    if *slot {
                        return Err(SpaceFileError::at(
                            "duplicate-key",
                            format!("entries[{idx}]"),
                            format!("pair ({}, {}) appears twice", e.i, e.j),
                        ));
                    }
                    *slot = true;
                }
                for i in 0..n {
                    for j in i + 1..n {
                        if !seen[i * n + j] {
                            return Err(SpaceFileError::at(
                                "missing-entry",
                                "entries",
                                format!("pair ({i}, {j}) is missing"),
                            ));
                        }
                    }
                }
                check_map(&f.map, n)?;
                f.entries.sort_by_key(|e| (e.i, e.j));
            }
            SpaceFile::FiniteGspace(f) => {
                check_n(f.n)?;
                let n = f.n;
                let mut seen = vec![false; n * n * n];
                for (idx, e) in f.entries.iter().enumerate() {
                    check_index(e.i, n, format!("entries[{idx}].i"))?;
                    check_index(e.j, n, format!("entries[{idx}].j"))?;
                    check_index(e.k, n, format!("entries[{idx}].k"))?;
                    if !(e.i <= e.j && e.j <= e.k) || e.i == e.k {
                        return Err(SpaceFileError::at(
                            "invalid-key",
                            format!("entries[{idx}]"),
                            format!("triple ({}, {}, {}) must have i <= j <= k, not all equal", e.i, e.j, e.k),
                        ));
                    }
                    check_value(e.v, format!("entries[{idx}].v"))?;
                    let slot = &mut seen[(e.i * n + e.j) * n + e.k];
                    if *slot {
                        return Err(SpaceFileError::at(
                            "duplicate-key",
                            format!("entries[{idx}]"),
                            format!("triple ({}, {}, {}) appears twice", e.i, e.j, e.k),
                        ));
                    }
                    *slot = true;
                }
                if let Some((i, j, k)) = canonical_triples(n).find(|&(i, j, k)| !seen[(i * n + j) * n + k]) {
                    return Err(SpaceFileError::at(
                        "missing-entry",
                        "entries",
                        format!("triple ({i}, {j}, {k}) is missing"),
                    ));
                }
                check_map(&f.map, n)?;
                f.entries.sort_by_key(|e| (e.i, e.j, e.k));
            }
            SpaceFile::Oracle1d(f) => {
                let [lo, hi] = f.interval;
                Interval::new(lo, hi).map_err(|e| SpaceFileError::at("invalid-value", "interval", e.to_string()))?;
                f.map.parse::<LineMap>().map_err(|e| SpaceFileError::at("invalid-map", "map", e.to_string()))?;
                if f.samples < 2 {
                    return Err(SpaceFileError::at("invalid-value", "samples", "need at least 2 samples"));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpaceFile::FiniteMetric(_) => "finite-metric",
            SpaceFile::FiniteGspace(_) => "finite-gspace",
            SpaceFile::Oracle1d(_) => "oracle-1d",
        }
    }

    /// Pretty JSON with entries in canonical order and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("space files always serialize");
        s.push('\n');
        s
    }

    /// The finite map, if the file has one.
    pub fn finite_map(&self) -> Option<FiniteMap> {
        let image = match self {
            SpaceFile::FiniteMetric(f) => f.map.clone(),
            SpaceFile::FiniteGspace(f) => f.map.clone(),
            SpaceFile::Oracle1d(_) => None,
        }?;
        Some(FiniteMap::new(image).expect("validated on parse"))
    }
}

impl FiniteMetricFile {
    pub fn table(&self) -> BinaryTable {
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for e in &self.entries {
            values[e.i * n + e.j] = e.v;
            values[e.j * n + e.i] = e.v;
        }
        BinaryTable::new(n, values).expect("validated on parse")
    }
}

impl FiniteGspaceFile {
    pub fn table(&self) -> TernaryTable {
        let lookup: BTreeMap<(usize, usize, usize), f64> =
            self.entries.iter().map(|e| ((e.i, e.j, e.k), e.v)).collect();
        TernaryTable::from_canonical(self.n, |i, j, k| lookup[&(i, j, k)]).expect("validated on parse")
    }

    /// The file form of a table, without a map.
    pub fn from_table(t: &TernaryTable) -> Self {
        let entries = canonical_triples(t.n()).map(|(i, j, k)| TripleEntry { i, j, k, v: t.get(i, j, k) }).collect();
        FiniteGspaceFile { n: t.n(), entries, map: None, assertions: BTreeMap::new() }
    }
}

impl OracleFile {
    pub fn interval(&self) -> Interval {
        Interval::new(self.interval[0], self.interval[1]).expect("validated on parse")
    }

    pub fn line_map(&self) -> LineMap {
        self.map.parse().expect("validated on parse")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ASYMMETRIC: &str = r#"{"kind": "finite-gspace", "n": 2,
        "entries": [{"i": 0, "j": 1, "k": 1, "v": 2}, {"i": 0, "j": 0, "k": 1, "v": 1}]}"#;

    #[test]
    fn asymmetric_pair_parses() {
        let f = parse_space_file(ASYMMETRIC).unwrap();
        let SpaceFile::FiniteGspace(g) = &f else { panic!("wrong kind") };
        let t = g.table();
        assert_eq!(t.get(1, 0, 0), 1.0);
        assert_eq!(t.get(1, 1, 0), 2.0);
        assert_eq!(g.entries[0], TripleEntry { i: 0, j: 0, k: 1, v: 1.0 });
    }

    #[test]
    fn round_trip_is_identical() {
        let f = parse_space_file(ASYMMETRIC).unwrap();
        let text = f.to_json();
        let again = parse_space_file(&text).unwrap();
        assert_eq!(f, again);
        assert_eq!(text, again.to_json());
    }

    fn id_of(text: &str) -> &'static str {
        parse_space_file(text).unwrap_err().id
    }

    #[test]
    fn structural_errors() {
        let missing = r#"{"kind": "finite-gspace", "n": 3, "entries": [
            {"i":0,"j":0,"k":1,"v":1}, {"i":0,"j":1,"k":1,"v":1}, {"i":0,"j":0,"k":2,"v":1},
            {"i":0,"j":2,"k":2,"v":1}, {"i":1,"j":1,"k":2,"v":1}, {"i":1,"j":2,"k":2,"v":1}]}"#;
        let err = parse_space_file(missing).unwrap_err();
        assert_eq!(err.id, "missing-entry");
        assert!(err.message.contains("(0, 1, 2)"));
        assert_eq!(id_of(r#"{"kind":"finite-metric","n":2,"entries":[{"i":0,"j":1,"v":-1}]}"#), "negative-value");
        assert_eq!(
            id_of(r#"{"kind":"finite-metric","n":2,"entries":[{"i":0,"j":1,"v":1},{"i":0,"j":1,"v":2}]}"#),
            "duplicate-key"
        );
        assert_eq!(id_of(r#"{"kind":"finite-metric","n":2,"entries":[{"i":0,"j":2,"v":1}]}"#), "index-out-of-range");
        assert_eq!(id_of(r#"{"kind":"finite-metric","n":2,"entries":[{"i":1,"j":0,"v":1}]}"#), "invalid-key");
        assert_eq!(id_of(r#"{"kind":"finite-gspace","n":2,"entries":[{"i":1,"j":1,"k":1,"v":0}]}"#), "invalid-key");
        assert_eq!(
            id_of(r#"{"kind":"finite-metric","n":2,"entries":[{"i":0,"j":1,"v":1}],"map":[0,2]}"#),
            "index-out-of-range"
        );
        assert_eq!(id_of(r#"{"kind":"finite-metric","n":2,"entries":[{"i":0,"j":1,"v":1}],"map":[0]}"#), "invalid-map");
        assert_eq!(id_of(r#"{"kind":"oracle-1d","interval":[0,1],"map":"cube"}"#), "invalid-map");
    }

    #[test]
    fn syntax_and_schema_errors_carry_positions() {
        let err = parse_space_file("{\n  \"kind\": \"finite-metric\",\n  \"n\": 2,,\n}").unwrap_err();
        assert_eq!(err.id, "syntax");
        assert_eq!(err.line, Some(3));
        let err = parse_space_file(r#"{"kind":"finite-metric","n":2,"entries":[],"extra":1}"#).unwrap_err();
        assert_eq!(err.id, "schema");
        assert_eq!(id_of(r#"{"kind":"tensor","n":2}"#), "schema");
    }

    #[test]
    fn oracle_defaults() {
        let f =
            parse_space_file(r#"{"kind":"oracle-1d","interval":[0,1],"map":"scale:3","assertions":{"complete":true}}"#)
                .unwrap();
        let SpaceFile::Oracle1d(o) = &f else { panic!("wrong kind") };
        assert_eq!(o.samples, 101);
        assert_eq!(o.line_map(), LineMap::Scale { k: 3.0 });
        assert_eq!(parse_space_file(&f.to_json()).unwrap(), f);
    }
}
