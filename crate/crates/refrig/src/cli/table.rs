//! Result tables with deterministic CSV and JSON serialization.
//!
//! CSV layout: '#'-prefixed metadata lines, a header row, then data rows.
//! Floats print with 12 significant digits, '.' decimal separator, and '\n'
//! line endings, so identical inputs produce byte-identical files. Column
//! order is sweep axes first (declaration order), then metrics alphabetically.

use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Write;
use std::path::Path;

use super::config::RunConfig;

/// Derived window quantities echoed into every table.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DerivedQuantities {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_s_prime: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_sw: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool_version: String,
    /// Echo of the run configuration; re-parsing it reproduces the spec.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    /// For figure commands: the figure name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    #[serde(default)]
    pub derived: DerivedQuantities,
}

impl Metadata {
    pub fn new(config: Option<RunConfig>, figure: Option<String>, derived: DerivedQuantities) -> Self {
        Metadata {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            figure,
            derived,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Metadata,
}

/// 12 significant digits in scientific notation; `nan` for undefined entries.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    // normalize negative zero so byte-identical output does not depend on
    // how a zero was computed
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

impl ResultTable {
    pub fn new(columns: Vec<String>, rows: Vec<Vec<f64>>, metadata: Metadata) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()), "rows must be rectangular");
        ResultTable { columns, rows, metadata }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# tool_version = {}\n", self.metadata.tool_version));
        if let Some(fig) = &self.metadata.figure {
            out.push_str(&format!("# figure = {fig}\n"));
        }
        if let Some(cfg) = &self.metadata.config {
            // single-line JSON echo keeps the round trip exact
            out.push_str(&format!(
                "# config = {}\n",
                serde_json::to_string(cfg).expect("config serializes")
            ));
        }
        let d = &self.metadata.derived;
        for (name, v) in [
            ("beta_s", d.beta_s),
            ("beta_s_prime", d.beta_s_prime),
            ("beta_sw", d.beta_sw),
        ] {
            if let Some(v) = v {
                out.push_str(&format!("# {name} = {}\n", format_float(v)));
            }
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| format_float(*x)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    /// Atomic write: temp file in the target directory, then rename.
    pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
        let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
        if let Some(dir) = dir {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension(format!(
            "{}.tmp{}",
            path.extension().and_then(|e| e.to_str()).unwrap_or(""),
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(contents.as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        Self::write_atomic(path, &self.to_csv())
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        Self::write_atomic(path, &self.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        ResultTable::new(
            vec!["beta_c".into(), "cop".into()],
            vec![vec![2.0, 0.098901098901], vec![3.0, f64::NAN]],
            Metadata::new(None, Some("demo".into()), DerivedQuantities {
                beta_s: Some(10.201111111111111),
                ..Default::default()
            }),
        )
    }

    #[test]
    fn csv_is_deterministic_and_formatted() {
        let a = sample().to_csv();
        let b = sample().to_csv();
        assert_eq!(a, b);
        assert!(a.contains("beta_c,cop"));
        assert!(a.contains("2.00000000000e0"));
        assert!(a.contains("nan"));
        assert!(a.contains("# beta_s = 1.02011111111e1"));
        assert!(!a.contains('\r'));
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_float(0.098901098901098901), "9.89010989011e-2");
        assert_eq!(format_float(-0.0), "0.00000000000e0");
        assert_eq!(format_float(f64::NAN), "nan");
    }

    #[test]
    fn atomic_write_round_trip() {
        let dir = std::env::temp_dir().join(format!("refrig-table-test-{}", std::process::id()));
        let path = dir.join("out.csv");
        sample().write_csv(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, sample().to_csv());
        assert!(!dir.join(format!("out.csv.tmp{}", std::process::id())).exists());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn json_round_trips() {
        // undefined entries serialize as null, so the round trip is checked
        // on a finite table
        let mut t = sample();
        t.rows = vec![vec![2.0, 0.0989]];
        let parsed: ResultTable = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(parsed.columns, t.columns);
        assert_eq!(parsed.rows, t.rows);
        assert_eq!(parsed.metadata.derived.beta_s, t.metadata.derived.beta_s);
    }
}
