//! Report serialization: JSON reals carry 17 significant digits, non-finite
//! values become `null`, and maps keep vertex order.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

/// A real number serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
            raw.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

/// `{label: value}` in insertion order.
#[derive(Debug, Clone, Default)]
pub struct LabeledValues(pub Vec<(String, Real)>);

impl Serialize for LabeledValues {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn open(path: &str) -> Result<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(io::stdout().lock()))
    } else {
        let file =
            File::create(Path::new(path)).with_context(|| format!("cannot create `{path}`"))?;
        Ok(Box::new(io::BufWriter::new(file)))
    }
}

/// Writes pretty JSON to `path`, or to stdout for `-`.
pub fn write_json<T: Serialize>(path: &str, value: &T) -> Result<()> {
    let mut out = open(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

/// CSV cell for a real: 17 significant digits, `inf`/`nan` otherwise.
pub fn csv_real(x: f64) -> String {
    if x.is_finite() {
        sig17(x)
    } else {
        x.to_string()
    }
}

pub fn write_csv(path: &str, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(open(path)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = serde_json::to_string(&Real(x)).unwrap();
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(serde_json::to_string(&Real(f64::INFINITY)).unwrap(), "null");
        assert_eq!(
            serde_json::to_string(&Real(1.0)).unwrap(),
            "1.0000000000000000e0"
        );
    }

    #[test]
    fn labeled_values_keep_order() {
        let v = LabeledValues(vec![("10".into(), Real(1.0)), ("2".into(), Real(0.5))]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"10":1.0000000000000000e0,"2":5.0000000000000000e-1}"#
        );
    }
}
