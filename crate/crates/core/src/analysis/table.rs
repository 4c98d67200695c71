use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};

/// Provenance of a table. Written as a `#` comment line in CSV and as a
/// `metadata` object in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub dataset: String,
    pub family: String,
    pub r_points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub parameter: String,
    pub parameter_points: usize,
    pub parameter_min: f64,
    pub parameter_max: f64,
    pub measured_side: String,
    pub discord_method: String,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
}

/// A rectangular table of named `f64` columns. Rows are stored in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    metadata: Option<SweepMetadata>,
}

/// Rounds to 12 significant digits.
fn round_sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Shortest text that reads back as `x` rounded to 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    format!("{:?}", round_sig12(x))
}

fn ser_err(e: impl std::fmt::Display) -> Error {
    Error::Serialization(e.to_string())
}

impl SweepTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>, metadata: Option<SweepMetadata>) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::Serialization("table has no columns".into()));
        }
        if let Some(bad) = rows.iter().find(|row| row.len() != columns.len()) {
            return Err(Error::DimensionMismatch {
                expected: columns.len(),
                actual: bad.len(),
            });
        }
        Ok(Self {
            columns,
            rows,
            metadata,
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn metadata(&self) -> Option<&SweepMetadata> {
        self.metadata.as_ref()
    }

    pub fn set_metadata(&mut self, metadata: Option<SweepMetadata>) {
        self.metadata = metadata;
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|row| row[k]).collect())
    }

    pub fn to_csv_string(&self, include_metadata: bool) -> Result<String> {
        let mut out = String::new();
        if let (true, Some(meta)) = (include_metadata, &self.metadata) {
            out.push_str("# ");
            out.push_str(&serde_json::to_string(meta).map_err(ser_err)?);
            out.push('\n');
        }
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&self.columns).map_err(ser_err)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(|&v| format_sig12(v)))
                .map_err(ser_err)?;
        }
        let bytes = writer.into_inner().map_err(ser_err)?;
        out.push_str(&String::from_utf8(bytes).map_err(ser_err)?);
        Ok(out)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut metadata = None;
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            if let Ok(meta) = serde_json::from_str(line.trim_start_matches('#').trim()) {
                metadata = Some(meta);
            }
        }
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns: Vec<String> = reader.headers().map_err(ser_err)?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(ser_err)?;
            let row = record
                .iter()
                .map(|field| {
                    field
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Serialization(format!("bad number `{field}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(columns, rows, metadata)
    }

    pub fn to_json_value(&self, include_metadata: bool) -> Result<Value> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (name, &v) in self.columns.iter().zip(row) {
                    let num = Number::from_f64(round_sig12(v))
                        .ok_or_else(|| Error::Serialization(format!("non-finite value in column `{name}`")))?;
                    obj.insert(name.clone(), Value::Number(num));
                }
                Ok(Value::Object(obj))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut doc = Map::new();
        if let (true, Some(meta)) = (include_metadata, &self.metadata) {
            doc.insert("metadata".into(), serde_json::to_value(meta).map_err(ser_err)?);
        }
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        Ok(Value::Object(doc))
    }

    pub fn to_json_string(&self, include_metadata: bool) -> Result<String> {
        let mut s = serde_json::to_string_pretty(&self.to_json_value(include_metadata)?).map_err(ser_err)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text).map_err(ser_err)?;
        let metadata = match doc.get("metadata") {
            Some(m) => Some(serde_json::from_value(m.clone()).map_err(ser_err)?),
            None => None,
        };
        let rows_json = doc
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Serialization("missing `rows` array".into()))?;
        let columns: Vec<String> = match doc.get("columns").and_then(Value::as_array) {
            Some(cols) => cols
                .iter()
                .map(|c| c.as_str().map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Serialization("`columns` must hold strings".into()))?,
            None => rows_json
                .first()
                .and_then(Value::as_object)
                .map(|o| o.keys().cloned().collect())
                .unwrap_or_default(),
        };
        let rows = rows_json
            .iter()
            .map(|row| {
                columns
                    .iter()
                    .map(|c| {
                        row.get(c)
                            .and_then(Value::as_f64)
                            .ok_or_else(|| Error::Serialization(format!("row is missing numeric `{c}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(columns, rows, metadata)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SweepTable {
        SweepTable::new(
            vec!["r".into(), "p".into(), "negativity".into()],
            vec![vec![0.0, 1.0 / 3.0, 1.0], vec![0.75, 2.0 / 3.0, -0.0]],
            Some(SweepMetadata {
                dataset: "test".into(),
                family: "AI".into(),
                r_points: 2,
                r_min: 0.0,
                r_max: 0.75,
                parameter: "p".into(),
                parameter_points: 2,
                parameter_min: 0.0,
                parameter_max: 1.0,
                measured_side: "second".into(),
                discord_method: "auto".into(),
                version: "0.1.0".into(),
                generated_unix: Some(1),
            }),
        )
        .unwrap()
    }

    #[test]
    fn sig12_formatting() {
        assert_eq!(format_sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_sig12(1.0), "1.0");
        assert_eq!(format_sig12(-0.0), "0.0");
        assert_eq!(format_sig12(1.234567890123456e-20), "1.23456789012e-20");
    }

    #[test]
    fn csv_layout() {
        let t = sample();
        let text = t.to_csv_string(false).unwrap();
        assert_eq!(
            text,
            "r,p,negativity\n0.0,0.333333333333,1.0\n0.75,0.666666666667,0.0\n"
        );
        let with_meta = t.to_csv_string(true).unwrap();
        assert!(with_meta.starts_with("# {\"dataset\":\"test\""));
        let back = SweepTable::from_csv_str(&with_meta).unwrap();
        assert_eq!(back.metadata(), t.metadata());
        assert_eq!(back.columns(), t.columns());
    }

    #[test]
    fn json_round_trip_keeps_order() {
        let t = sample();
        let text = t.to_json_string(true).unwrap();
        let back = SweepTable::from_json_str(&text).unwrap();
        assert_eq!(back.columns(), t.columns());
        assert_eq!(back.metadata(), t.metadata());
        assert!((back.rows()[0][1] - 1.0 / 3.0).abs() < 1e-12);
        let bare = t.to_json_string(false).unwrap();
        assert!(!bare.contains("metadata"));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(SweepTable::new(vec!["a".into()], vec![vec![1.0, 2.0]], None).is_err());
        assert!(SweepTable::from_csv_str("a,b\n1,x\n").is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip_within_12_digits(values in prop::collection::vec(-1e6f64..1e6, 1..20)) {
            let rows: Vec<Vec<f64>> = values.iter().map(|&v| vec![v, v * 1e-9]).collect();
            let t = SweepTable::new(vec!["x".into(), "y".into()], rows, None).unwrap();
            let back = SweepTable::from_csv_str(&t.to_csv_string(true).unwrap()).unwrap();
            for (a, b) in t.rows().iter().zip(back.rows()) {
                for (x, y) in a.iter().zip(b) {
                    prop_assert!((x - y).abs() <= 1e-11 * x.abs().max(1e-300));
                }
            }
            let again = SweepTable::from_csv_str(&back.to_csv_string(true).unwrap()).unwrap();
            prop_assert_eq!(again, back);
        }
    }
}
