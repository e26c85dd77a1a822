//! Sweepout reports and their deterministic JSON / CSV encodings.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SliceRow {
    pub t: f64,
    pub area: f64,
    pub components: BTreeMap<String, f64>,
}

impl SliceRow {
    pub fn new(t: f64, area: f64) -> Self {
        Self { t, area, components: BTreeMap::new() }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.components.insert(name.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Default)]
pub struct ReportMeta {
    pub command: String,
    pub config_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Summary {
    pub sup_area: f64,
    pub argmax_t: f64,
    pub budget: Option<f64>,
    pub margin: Option<f64>,
    pub pass: bool,
    pub extra: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SweepoutReport {
    pub meta: ReportMeta,
    pub rows: Vec<SliceRow>,
    pub summary: Summary,
}

impl SweepoutReport {
    /// Sorts rows by `t` and fills the summary. With a budget, `pass` means
    /// every slice is strictly below it.
    pub fn new(command: &str, mut rows: Vec<SliceRow>, budget: Option<f64>) -> Self {
        rows.sort_by(|a, b| a.t.total_cmp(&b.t));
        let (mut sup_area, mut argmax_t) = (f64::NEG_INFINITY, f64::NAN);
        for row in &rows {
            if row.area > sup_area {
                sup_area = row.area;
                argmax_t = row.t;
            }
        }
        let margin = budget.map(|b| b - sup_area);
        Self {
            meta: ReportMeta { command: command.to_string(), ..Default::default() },
            rows,
            summary: Summary {
                sup_area,
                argmax_t,
                budget,
                margin,
                pass: margin.is_none_or(|m| m > 0.0),
                extra: BTreeMap::new(),
            },
        }
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.meta.notes.push(s.into());
    }

    pub fn extra(&mut self, key: &str, value: f64) {
        self.summary.extra.insert(key.to_string(), value);
    }

    pub fn to_csv(&self) -> String {
        let mut keys: Vec<&String> = self.rows.iter().flat_map(|r| r.components.keys()).collect();
        keys.sort();
        keys.dedup();
        let mut out = String::from("t,area");
        for k in &keys {
            out.push(',');
            out.push_str(k);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("{},{}", fmt_float(row.t), fmt_float(row.area)));
            for k in &keys {
                out.push(',');
                if let Some(v) = row.components.get(*k) {
                    out.push_str(&fmt_float(*v));
                }
            }
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

/// Pretty JSON with every float printed by [`fmt_float`].
struct FixedFloat<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt_float(v).as_bytes())
    }
    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// Hex SHA-256 of the canonical compact JSON of `config`.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    hex::encode(Sha256::digest(&canonical))
}

/// Write via a sibling temporary file and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_tracks_sup_and_margin() {
        let rows = vec![SliceRow::new(1.0, 2.0), SliceRow::new(0.0, 3.0), SliceRow::new(0.5, 1.0)];
        let rep = SweepoutReport::new("x", rows, Some(4.0));
        assert_eq!(rep.rows[0].t, 0.0);
        assert_eq!(rep.summary.sup_area, 3.0);
        assert_eq!(rep.summary.argmax_t, 0.0);
        assert_eq!(rep.summary.margin, Some(1.0));
        assert!(rep.summary.pass);
        let rep = SweepoutReport::new("x", vec![SliceRow::new(0.0, 5.0)], Some(4.0));
        assert!(!rep.summary.pass);
    }

    #[test]
    fn floats_round_trip_and_nan_is_null() {
        let v = vec![0.1, 1.0 / 3.0, f64::NAN, -2.5e-300];
        let s = to_json(&v);
        assert!(s.contains("null"));
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[0], Some(0.1));
        assert_eq!(back[1], Some(1.0 / 3.0));
        assert_eq!(back[3], Some(-2.5e-300));
    }

    #[test]
    fn csv_has_union_of_components() {
        let rows = vec![SliceRow::new(0.0, 1.0).with("a", 1.0), SliceRow::new(1.0, 2.0).with("b", 2.0)];
        let csv = SweepoutReport::new("x", rows, None).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "t,area,a,b");
        assert!(lines[1].ends_with(','));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
