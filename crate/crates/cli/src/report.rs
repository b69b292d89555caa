//! Experiment reports: named results with units and provenance, serialized
//! as diff-friendly JSON (lexicographic keys) or RFC-4180 CSV.

use std::collections::BTreeMap;

use anyhow::Result;
use serde::Serialize;

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A scalar or a series, always with unit and provenance.
#[derive(Debug, Clone, Serialize)]
pub struct ResultEntry {
    pub value: ResultValue,
    pub unit: String,
    /// Where the value comes from: a defining formula, a constants source,
    /// or the name of the residual identity it reports on.
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum ResultValue {
    Scalar(f64),
    Series(Vec<f64>),
    Text(String),
    Flag(bool),
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Echo of the resolved parameters; re-running them reproduces the
    /// results.
    pub inputs: BTreeMap<String, String>,
    pub results: BTreeMap<String, ResultEntry>,
    /// Unix seconds at report creation; the only non-deterministic field.
    pub timestamp: u64,
    pub version: String,
}

impl ExperimentReport {
    pub fn new(experiment: &str) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        ExperimentReport {
            experiment: experiment.to_string(),
            inputs: BTreeMap::new(),
            results: BTreeMap::new(),
            timestamp,
            version: ARTIFACT_VERSION.to_string(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }

    pub fn scalar(&mut self, name: &str, value: f64, unit: &str, provenance: &str) -> &mut Self {
        self.results.insert(
            name.to_string(),
            ResultEntry {
                value: ResultValue::Scalar(value),
                unit: unit.to_string(),
                provenance: provenance.to_string(),
            },
        );
        self
    }

    pub fn series(
        &mut self,
        name: &str,
        values: Vec<f64>,
        unit: &str,
        provenance: &str,
    ) -> &mut Self {
        self.results.insert(
            name.to_string(),
            ResultEntry {
                value: ResultValue::Series(values),
                unit: unit.to_string(),
                provenance: provenance.to_string(),
            },
        );
        self
    }

    pub fn text(&mut self, name: &str, value: &str, provenance: &str) -> &mut Self {
        self.results.insert(
            name.to_string(),
            ResultEntry {
                value: ResultValue::Text(value.to_string()),
                unit: "-".to_string(),
                provenance: provenance.to_string(),
            },
        );
        self
    }

    pub fn flag(&mut self, name: &str, value: bool, provenance: &str) -> &mut Self {
        self.results.insert(
            name.to_string(),
            ResultEntry {
                value: ResultValue::Flag(value),
                unit: "-".to_string(),
                provenance: provenance.to_string(),
            },
        );
        self
    }

    /// Pretty JSON with lexicographically ordered keys.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The JSON body with the timestamp normalized away, for byte-level
    /// determinism comparisons.
    pub fn to_json_without_timestamp(&self) -> Result<String> {
        let mut value = serde_json::to_value(self)?;
        if let Some(map) = value.as_object_mut() {
            map.remove("timestamp");
        }
        Ok(serde_json::to_string_pretty(&value)?)
    }

    /// RFC-4180 CSV: header row, one row per scalar, series expanded with an
    /// index column, 12+ significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,result,index,value,unit,provenance\r\n");
        for (name, entry) in &self.results {
            match &entry.value {
                ResultValue::Scalar(v) => {
                    out.push_str(&csv_row(
                        &self.experiment,
                        name,
                        "",
                        &format!("{v:.12e}"),
                        entry,
                    ));
                }
                ResultValue::Series(vs) => {
                    for (i, v) in vs.iter().enumerate() {
                        out.push_str(&csv_row(
                            &self.experiment,
                            name,
                            &i.to_string(),
                            &format!("{v:.12e}"),
                            entry,
                        ));
                    }
                }
                ResultValue::Text(t) => {
                    out.push_str(&csv_row(&self.experiment, name, "", t, entry));
                }
                ResultValue::Flag(b) => {
                    out.push_str(&csv_row(&self.experiment, name, "", &b.to_string(), entry));
                }
            }
        }
        out
    }
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn csv_row(experiment: &str, name: &str, index: &str, value: &str, entry: &ResultEntry) -> String {
    format!(
        "{},{},{},{},{},{}\r\n",
        csv_field(experiment),
        csv_field(name),
        index,
        csv_field(value),
        csv_field(&entry.unit),
        csv_field(&entry.provenance),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_sorted() {
        let mut r = ExperimentReport::new("demo");
        r.scalar("zeta", 1.0, "m", "test");
        r.scalar("alpha", 2.0, "s", "test");
        let json = r.to_json().unwrap();
        assert!(json.find("\"alpha\"").unwrap() < json.find("\"zeta\"").unwrap());
        assert!(json.find("\"experiment\"").unwrap() < json.find("\"inputs\"").unwrap());
    }

    #[test]
    fn timestamp_stripped_for_comparison() {
        let mut r = ExperimentReport::new("demo");
        r.scalar("x", 1.0, "m", "test");
        let a = r.to_json_without_timestamp().unwrap();
        r.timestamp += 100;
        let b = r.to_json_without_timestamp().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_has_header_and_digits() {
        let mut r = ExperimentReport::new("demo");
        r.scalar("x", 1.0 / 3.0, "m", "a,b");
        r.series("ladder", vec![1.0, 2.0], "-", "test");
        let csv = r.to_csv();
        assert!(csv.starts_with("experiment,result,index,value,unit,provenance\r\n"));
        assert!(csv.contains("3.333333333333e-1"));
        assert!(csv.contains("\"a,b\""));
        assert!(csv.contains("ladder,0"));
    }
}
