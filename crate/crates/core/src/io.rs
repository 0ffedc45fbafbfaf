//! File formats for node values and spectral coefficients.
//!
//! Node values:
//! - CSV with header `i1,i2,value` (real values only);
//! - JSON `{"m": [m1, m2], "values": [{"i1": …, "i2": …, "value": …}]}` where
//!   `value` is a number or a string `"re+imj"`.
//!
//! Either the full index set `I^(m)` or the reduced set `I_S^(m)` may be given;
//! a single pole entry is copied to its whole pole row. Missing indices are an
//! error.
//!
//! Coefficients: `{"m": [m1, m2], "flavor": …, "entries": [{"g1", "g2", "re", "im"}]}`
//! with an optional `"variant": "excludeD"`.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::FrequencyPair;
use crate::error::{Error, Result};
use crate::nodes::{IndexSet, NodeIndex};
use crate::spectral::Variant;
use crate::transform::{Flavor, Interpolant, NodeData};

/// Parses `"1.5"`, `"2j"`, `"1-2.5e-3j"` and similar.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    t.parse::<f64>()
        .map(|re| Complex64::new(re, 0.0))
        .or_else(|_| t.parse::<Complex64>())
        .map_err(|_| Error::Invalid(format!("cannot parse complex value {s:?}")))
}

/// `re+imj` with full round-trip precision.
pub fn format_complex(z: Complex64) -> String {
    if z.im.is_sign_negative() {
        format!("{:?}-{:?}j", z.re, -z.im)
    } else {
        format!("{:?}+{:?}j", z.re, z.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonValue {
    Real(f64),
    Text(ComplexText),
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct ComplexText(Complex64);

impl Serialize for ComplexText {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_complex(self.0))
    }
}

impl<'de> Deserialize<'de> for ComplexText {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_complex(&s)
            .map(ComplexText)
            .map_err(serde::de::Error::custom)
    }
}

impl JsonValue {
    fn value(self) -> Complex64 {
        match self {
            JsonValue::Real(v) => Complex64::new(v, 0.0),
            JsonValue::Text(ComplexText(z)) => z,
        }
    }

    fn from_value(z: Complex64) -> Self {
        if z.im == 0.0 {
            JsonValue::Real(z.re)
        } else {
            JsonValue::Text(ComplexText(z))
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeEntry {
    i1: usize,
    i2: usize,
    value: JsonValue,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeFile {
    m: FrequencyPair,
    values: Vec<NodeEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    i1: usize,
    i2: usize,
    value: f64,
}

/// Assembles full node data from `(index, value)` pairs over `I^(m)` or `I_S^(m)`.
pub fn assemble_nodes(
    m: FrequencyPair,
    entries: impl IntoIterator<Item = (NodeIndex, Complex64)>,
) -> Result<NodeData> {
    let set = IndexSet::new(m)?;
    let mut values: Vec<Option<Complex64>> = vec![None; set.len()];
    for (i, v) in entries {
        let p = set.require_position(i)?;
        if values[p].is_some() {
            return Err(Error::Invalid(format!("duplicate node index {i}")));
        }
        values[p] = Some(v);
    }
    // a reduced-set file carries one value per pole
    for row in [0, m.m1()] {
        let given: Vec<usize> = set
            .members()
            .iter()
            .enumerate()
            .filter(|(p, i)| i.i1 == row && values[*p].is_some())
            .map(|(p, _)| p)
            .collect();
        if given.len() == 1 {
            let v = values[given[0]];
            for (p, i) in set.members().iter().enumerate() {
                if i.i1 == row {
                    values[p] = v;
                }
            }
        }
    }
    let missing: Vec<String> = set
        .members()
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_none())
        .map(|(i, _)| i.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::Invalid(format!(
            "missing node values for {} indices, first {}",
            missing.len(),
            missing[0]
        )));
    }
    NodeData::new(m, values.into_iter().map(Option::unwrap).collect())
}

pub fn read_nodes_csv<R: Read>(reader: R, m: FrequencyPair) -> Result<NodeData> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let rows = rdr
        .deserialize::<CsvRow>()
        .map(|r| r.map(|r| (NodeIndex::new(r.i1, r.i2), Complex64::new(r.value, 0.0))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    assemble_nodes(m, rows)
}

/// Writes real node values; `reduced` restricts the rows to `I_S^(m)`.
pub fn write_nodes_csv<W: Write>(writer: W, f: &NodeData, reduced: bool) -> Result<()> {
    if !f.is_real() {
        return Err(Error::Invalid(
            "CSV node files hold real values; use JSON for complex data".into(),
        ));
    }
    let set = IndexSet::new(f.frequencies())?;
    let mut w = csv::Writer::from_writer(writer);
    for (&i, v) in set.members().iter().zip(f.values()) {
        if reduced && !i.in_reduced_set(&f.frequencies()) {
            continue;
        }
        w.serialize(CsvRow {
            i1: i.i1,
            i2: i.i2,
            value: v.re,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a JSON node file; its `m` must agree with `expected` when given.
pub fn read_nodes_json<R: Read>(reader: R, expected: Option<FrequencyPair>) -> Result<NodeData> {
    let file: NodeFile = serde_json::from_reader(reader)?;
    if let Some(e) = expected {
        if e != file.m {
            return Err(Error::FrequencyMismatch(e.m1(), e.m2(), file.m.m1(), file.m.m2()));
        }
    }
    assemble_nodes(
        file.m,
        file.values
            .into_iter()
            .map(|e| (NodeIndex::new(e.i1, e.i2), e.value.value())),
    )
}

pub fn write_nodes_json<W: Write>(writer: W, f: &NodeData, reduced: bool) -> Result<()> {
    let m = f.frequencies();
    let set = IndexSet::new(m)?;
    let values = set
        .members()
        .iter()
        .zip(f.values())
        .filter(|(i, _)| !reduced || i.in_reduced_set(&m))
        .map(|(&i, &v)| NodeEntry {
            i1: i.i1,
            i2: i.i2,
            value: JsonValue::from_value(v),
        })
        .collect();
    serde_json::to_writer_pretty(writer, &NodeFile { m, values })?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub g1: i64,
    pub g2: i64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub m: FrequencyPair,
    pub flavor: Flavor,
    #[serde(default, skip_serializing_if = "is_default_variant")]
    pub variant: Variant,
    pub entries: Vec<CoefficientEntry>,
}

fn is_default_variant(v: &Variant) -> bool {
    *v == Variant::default()
}

impl CoefficientFile {
    pub fn from_interpolant(p: &Interpolant) -> Self {
        Self {
            m: p.frequencies(),
            flavor: p.flavor(),
            variant: p.variant(),
            entries: p
                .entries()
                .map(|(g1, g2, c)| CoefficientEntry {
                    g1,
                    g2,
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }

    pub fn to_interpolant(&self) -> Result<Interpolant> {
        Interpolant::from_coefficients(
            self.m,
            self.flavor,
            self.variant,
            self.entries
                .iter()
                .map(|e| ((e.g1, e.g2), Complex64::new(e.re, e.im))),
        )
    }
}

pub fn write_coefficients<W: Write>(writer: W, p: &Interpolant) -> Result<()> {
    serde_json::to_writer_pretty(writer, &CoefficientFile::from_interpolant(p))?;
    Ok(())
}

pub fn read_coefficients<R: Read>(reader: R) -> Result<Interpolant> {
    let file: CoefficientFile = serde_json::from_reader(reader)?;
    file.to_interpolant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::Scheme;

    fn m(m1: usize, m2: usize) -> FrequencyPair {
        FrequencyPair::new(m1, m2).unwrap()
    }

    #[test]
    fn complex_text_round_trip() {
        for z in [
            Complex64::new(1.5, -2.5e-3),
            Complex64::new(-0.1, 3.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1e-300, -7.25e12),
        ] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert_eq!(parse_complex("2j").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex(" 4 ").unwrap(), Complex64::new(4.0, 0.0));
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn csv_reduced_and_full() {
        let mm = m(7, 6);
        let set = IndexSet::new(mm).unwrap();
        let f = NodeData::sample(&set, |t: f64, p: f64| t.cos() + 0.1 * t.sin() * p.sin());
        for reduced in [false, true] {
            let mut buf = Vec::new();
            write_nodes_csv(&mut buf, &f, reduced).unwrap();
            let text = String::from_utf8(buf.clone()).unwrap();
            assert_eq!(text.lines().count(), 1 + if reduced { 38 } else { 42 });
            assert!(text.starts_with("i1,i2,value"));
            let g = read_nodes_csv(&buf[..], mm).unwrap();
            assert!(g.max_abs_diff(&f) < 1e-12);
        }
    }

    #[test]
    fn missing_and_foreign_indices_rejected() {
        let mm = m(7, 6);
        let text = "i1,i2,value\n0,0,1.0\n";
        assert!(read_nodes_csv(text.as_bytes(), mm).is_err());
        let text = "i1,i2,value\n1,0,1.0\n";
        assert!(read_nodes_csv(text.as_bytes(), mm).is_err());
    }

    #[test]
    fn json_nodes_complex() {
        let mm = m(4, 4);
        let set = IndexSet::new(mm).unwrap();
        let f = NodeData::from_fn(&set, |i| Complex64::new(i.i1 as f64, i.i2 as f64 * 0.5));
        let mut buf = Vec::new();
        write_nodes_json(&mut buf, &f, false).unwrap();
        let g = read_nodes_json(&buf[..], Some(mm)).unwrap();
        assert_eq!(g, f);
        assert!(read_nodes_json(&buf[..], Some(m(4, 6))).is_err());
    }

    #[test]
    fn coefficient_round_trip() {
        let mm = m(6, 6);
        for variant in [Variant::ExcludeU, Variant::ExcludeD] {
            let s = Scheme::new(mm, variant).unwrap();
            let p = s
                .interpolate_samples(|t: f64, p: f64| (t.sin() * p.cos()).exp(), Flavor::Real)
                .unwrap();
            let mut buf = Vec::new();
            write_coefficients(&mut buf, &p).unwrap();
            let text = String::from_utf8(buf.clone()).unwrap();
            assert_eq!(text.contains("variant"), variant == Variant::ExcludeD);
            let q = read_coefficients(&buf[..]).unwrap();
            assert_eq!(q.variant(), variant);
            assert!((q.evaluate(0.4, 1.3) - p.evaluate(0.4, 1.3)).norm() < 1e-15);
        }
    }
}
