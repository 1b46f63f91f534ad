use super::{normalize_coefficients, CoefficientTable, NewformDescriptor};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientFormat {
    /// `n,a_n` rows of exact integers plus a `.meta.json` sidecar.
    Csv,
}

/// Sidecar metadata; Maass fixtures add `spectral_r` and `parity`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub level: u64,
    pub weight: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub atkin_lehner: BTreeMap<String, i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<i8>,
}

/// `dir/name.csv` -> `dir/name.meta.json`.
pub fn meta_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

pub fn read_meta(path: &Path) -> Result<Meta> {
    let mp = meta_path(path);
    let text = fs::read_to_string(&mp).map_err(|e| Error::Io(format!("{}: {e}", mp.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), msg: format!("{}: {e}", mp.display()) })
}

fn descriptor_from_meta(meta: &Meta) -> Result<NewformDescriptor> {
    let mut al = BTreeMap::new();
    for (k, &v) in &meta.atkin_lehner {
        let p: u64 = k.parse().map_err(|_| Error::Parse { line: 0, msg: format!("bad Atkin-Lehner key {k:?}") })?;
        al.insert(p, v);
    }
    let d = NewformDescriptor { weight: meta.weight, level: meta.level, atkin_lehner: al };
    d.validate()?;
    Ok(d)
}

/// Parses `n,<value>` rows with n = 1, 2, 3, ... consecutively.
pub(crate) fn parse_rows<T>(
    text: &str,
    headers: &[&str],
    parse: impl Fn(&str) -> Option<T>,
) -> Result<Vec<T>> {
    let mut lines = text.split('\n').enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty file".into() })?;
    if !headers.contains(&header.trim_end_matches('\r').trim()) {
        return Err(Error::Parse { line: 1, msg: format!("expected header {:?}, got {header:?}", headers[0]) });
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (n, v) = line
            .split_once(',')
            .ok_or(Error::Parse { line: line_no, msg: "expected two comma-separated fields".into() })?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: line_no, msg: format!("bad index {n:?}") })?;
        let expected = out.len() as u64 + 1;
        if n != expected {
            return Err(Error::Parse { line: line_no, msg: format!("expected n = {expected}, got {n}") });
        }
        let v = parse(v.trim()).ok_or(Error::Parse { line: line_no, msg: format!("bad value {v:?}") })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::Parse { line: 2, msg: "no data rows".into() });
    }
    Ok(out)
}

/// Reads a coefficient CSV and its sidecar, normalizes, and validates all
/// table invariants.
pub fn ingest_coefficients(path: &Path, format: CoefficientFormat) -> Result<(NewformDescriptor, CoefficientTable)> {
    let CoefficientFormat::Csv = format;
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let raw: Vec<BigInt> = parse_rows(&text, &["n,a_n"], |s| s.parse().ok())?;
    let descriptor = descriptor_from_meta(&read_meta(path)?)?;
    if raw[0] != BigInt::from(1) {
        return Err(Error::Validation { invariant: "λ(1) = 1".into(), witness: 1 });
    }
    let table = normalize_coefficients(&raw, descriptor.clone())?;
    table.validate()?;
    Ok((descriptor, table))
}

/// Writes the raw integers as CSV plus the sidecar. Requires raw data.
pub fn export_coefficients(table: &CoefficientTable, path: &Path) -> Result<()> {
    let raw = table
        .raw()
        .ok_or_else(|| Error::Domain("table has no exact integer data to export".into()))?;
    let mut s = String::from("n,a_n\n");
    for (i, a) in raw.iter().enumerate() {
        s.push_str(&format!("{},{}\n", i + 1, a));
    }
    fs::write(path, s)?;
    let d = &table.descriptor;
    let meta = Meta {
        level: d.level,
        weight: d.weight,
        atkin_lehner: d.atkin_lehner.iter().map(|(p, s)| (p.to_string(), *s)).collect(),
        ..Meta::default()
    };
    let mut js = serde_json::to_string_pretty(&meta).map_err(|e| Error::Io(e.to_string()))?;
    js.push('\n');
    fs::write(meta_path(path), js)?;
    Ok(())
}
