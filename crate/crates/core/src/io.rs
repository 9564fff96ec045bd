//! JSON instance files and JSON/CSV report export.
//!
//! Block instance:
//! `{"n": 2, "blocks": {"a": [[re, im], ...], "b": ..., "c": ..., "d": ...}}`
//!
//! PSD instance:
//! `{"n": 2, "a": [real, ...], "b": [real, ...], "c": [[re, im], ...]}`

use std::io::Write;

use num_complex::Complex64;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::block::{DiagBlockMatrix, PsdDiagBlock};
use crate::error::{Error, Result};
use crate::inequality::InequalityReport;

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceFile {
    Block(DiagBlockMatrix),
    Psd(PsdDiagBlock),
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| perr(format!("{ctx}: missing field `{key}`")))
}

fn number(v: &Value, ctx: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| perr(format!("{ctx}: expected a number, found {v}")))
}

fn array<'a>(v: &'a Value, ctx: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| perr(format!("{ctx}: expected an array")))
}

fn complex_list(v: &Value, n: usize, ctx: &str) -> Result<Vec<Complex64>> {
    let items = array(v, ctx)?;
    if items.len() != n {
        return Err(perr(format!("{ctx}: expected {n} entries, found {}", items.len())));
    }
    items
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let c = format!("{ctx}[{i}]");
            let pair = array(z, &c)?;
            if pair.len() != 2 {
                return Err(perr(format!("{c}: expected [re, im], found {} numbers", pair.len())));
            }
            Ok(Complex64::new(number(&pair[0], &c)?, number(&pair[1], &c)?))
        })
        .collect()
}

fn real_list(v: &Value, n: usize, ctx: &str) -> Result<Vec<f64>> {
    let items = array(v, ctx)?;
    if items.len() != n {
        return Err(perr(format!("{ctx}: expected {n} entries, found {}", items.len())));
    }
    items.iter().enumerate().map(|(i, x)| number(x, &format!("{ctx}[{i}]"))).collect()
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str], ctx: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(perr(format!("{ctx}: unknown field `{k}`"))),
        None => Ok(()),
    }
}

/// Parses either instance schema; the presence of `blocks` selects the block form.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| perr("instance: expected a JSON object"))?;
    let n_val = field(obj, "n", "instance")?;
    let n = n_val
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| perr(format!("n: expected a positive integer, found {n_val}")))? as usize;
    if let Some(blocks) = obj.get("blocks") {
        check_keys(obj, &["n", "blocks"], "instance")?;
        let b = blocks.as_object().ok_or_else(|| perr("blocks: expected an object"))?;
        check_keys(b, &["a", "b", "c", "d"], "blocks")?;
        let get = |k: &str| complex_list(field(b, k, "blocks")?, n, &format!("blocks.{k}"));
        let bm = DiagBlockMatrix::new(get("a")?, get("b")?, get("c")?, get("d")?)?;
        Ok(InstanceFile::Block(bm))
    } else {
        check_keys(obj, &["n", "a", "b", "c"], "instance")?;
        let a = real_list(field(obj, "a", "instance")?, n, "a")?;
        let b = real_list(field(obj, "b", "instance")?, n, "b")?;
        let c = complex_list(field(obj, "c", "instance")?, n, "c")?;
        Ok(InstanceFile::Psd(PsdDiagBlock::new(a, b, c)?))
    }
}

pub fn read_instance(path: &std::path::Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path).map_err(|e| perr(format!("{}: {e}", path.display())))?;
    parse_instance(&text)
}

struct Pairs<'a>(&'a [Complex64]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|z| [z.re, z.im]))
    }
}

impl Serialize for DiagBlockMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Blocks<'a> {
            a: Pairs<'a>,
            b: Pairs<'a>,
            c: Pairs<'a>,
            d: Pairs<'a>,
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("n", &self.n())?;
        m.serialize_entry("blocks", &Blocks { a: Pairs(self.a()), b: Pairs(self.b()), c: Pairs(self.c()), d: Pairs(self.d()) })?;
        m.end()
    }
}

impl Serialize for PsdDiagBlock {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("n", &self.n())?;
        m.serialize_entry("a", self.a())?;
        m.serialize_entry("b", self.b())?;
        m.serialize_entry("c", &Pairs(self.c()))?;
        m.end()
    }
}

impl Serialize for InstanceFile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            InstanceFile::Block(b) => b.serialize(s),
            InstanceFile::Psd(p) => p.serialize(s),
        }
    }
}

pub fn instance_to_json(inst: &InstanceFile) -> String {
    serde_json::to_string_pretty(inst).expect("instances serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(perr(format!("unknown format `{s}` (expected json or csv)"))),
        }
    }
}

pub fn write_reports_json<W: Write>(reports: &[InequalityReport], mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, reports).map_err(|e| perr(format!("JSON write failed: {e}")))?;
    writeln!(out).map_err(|e| perr(format!("write failed: {e}")))
}

pub fn read_reports_json(text: &str) -> Result<Vec<InequalityReport>> {
    serde_json::from_str(text).map_err(|e| perr(format!("invalid report JSON: {e}")))
}

/// CSV with columns `name, p, chain_1 .. chain_k, margin, holds`; `k` is the
/// longest chain and shorter chains leave trailing cells empty.
pub fn write_reports_csv<W: Write>(reports: &[InequalityReport], out: W) -> Result<()> {
    let k = reports.iter().map(|r| r.chain.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| perr(format!("CSV write failed: {e}"));
    let mut header = vec!["name".to_string(), "p".to_string()];
    header.extend((1..=k).map(|i| format!("chain_{i}")));
    header.extend(["margin".to_string(), "holds".to_string()]);
    w.write_record(&header).map_err(err)?;
    for r in reports {
        let mut row = vec![r.name.clone(), r.p.to_string()];
        row.extend((0..k).map(|i| r.chain.get(i).map(|v| format!("{v:.17e}")).unwrap_or_default()));
        row.push(format!("{:.17e}", r.margin));
        row.push(r.holds.to_string());
        w.write_record(&row).map_err(err)?;
    }
    w.flush().map_err(|e| perr(format!("CSV write failed: {e}")))
}

pub fn write_reports<W: Write>(reports: &[InequalityReport], format: ReportFormat, out: W) -> Result<()> {
    match format {
        ReportFormat::Json => write_reports_json(reports, out),
        ReportFormat::Csv => write_reports_csv(reports, out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::Direction;

    #[test]
    fn parse_block() {
        let t = r#"{"n":2,"blocks":{"a":[[0,0],[0,0]],"b":[[5,0],[6,0]],"c":[[5,0],[1,0]],"d":[[6,0],[5,0]]}}"#;
        let InstanceFile::Block(b) = parse_instance(t).unwrap() else { panic!() };
        assert_eq!(b.n(), 2);
        assert_eq!(b.c()[1], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn parse_psd_with_phase() {
        let t = r#"{"n":1,"a":[2],"b":[3],"c":[[0,1.5]]}"#;
        let InstanceFile::Psd(p) = parse_instance(t).unwrap() else { panic!() };
        assert_eq!(p.c()[0], Complex64::new(0.0, 1.5));
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"n":2,"a":[1,2],"b":[1],"c":[[0,0],[0,0]]}"#, "b: expected 2"),
            (r#"{"n":1,"a":[1],"b":[1],"c":[[0]]}"#, "c[0]"),
            (r#"{"n":1,"blocks":{"a":[[1,0]],"b":[[1,0]],"c":[[1,0]]}}"#, "`d`"),
            (r#"{"n":0,"a":[],"b":[],"c":[]}"#, "n:"),
            (r#"{"n":1,"a":["x"],"b":[1],"c":[[0,0]]}"#, "a[0]"),
            (r#"{"n":1,"a":[1],"b":[1],"c":[[0,0]],"e":1}"#, "`e`"),
            ("not json", "invalid JSON"),
        ];
        for (t, needle) in cases {
            let e = parse_instance(t).unwrap_err().to_string();
            assert!(e.contains(needle), "{e} lacks {needle}");
        }
    }

    #[test]
    fn instance_round_trip() {
        let b = DiagBlockMatrix::new(
            vec![Complex64::new(1.0, -2.0)],
            vec![Complex64::new(0.5, 0.0)],
            vec![Complex64::new(0.0, 3.0)],
            vec![Complex64::new(-1.0, 1.0)],
        )
        .unwrap();
        for inst in [
            InstanceFile::Block(b),
            InstanceFile::Psd(PsdDiagBlock::from_real(&[1.0, 2.0], &[3.0, 4.0], &[0.5, 1.0]).unwrap()),
        ] {
            assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn csv_layout() {
        let r = vec![
            InequalityReport::from_chain("x", 1.5, vec![3.0, 2.0, 1.0], Direction::NonIncreasing),
            InequalityReport::from_chain("y", 3.0, vec![1.0, 2.0], Direction::NonDecreasing),
        ];
        let mut buf = Vec::new();
        write_reports_csv(&r, &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "name,p,chain_1,chain_2,chain_3,margin,holds");
        assert!(lines[2].starts_with("y,3,"));
        assert!(lines[2].contains(",,"));
        assert!(lines[2].ends_with("true"));
    }
}
