use std::path::Path;

use clap::ValueEnum;
use spinboson::Result;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Writes `text` to `dir/name`, or to stdout without a directory.
pub fn emit(dir: Option<&Path>, name: &str, text: &str) -> Result<()> {
    match dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(name), text)?;
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// Numeric table emitted as CSV or as a JSON array of objects.
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(f64::to_string))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn to_json(&self) -> Result<String> {
        let rows: Vec<serde_json::Map<String, serde_json::Value>> =
            self.rows.iter().map(|r| self.header.iter().cloned().zip(r.iter().map(|&v| serde_json::json!(v))).collect()).collect();
        Ok(serde_json::to_string_pretty(&rows)?)
    }

    pub fn emit(&self, dir: Option<&Path>, stem: &str, format: Format) -> Result<()> {
        match format {
            Format::Csv => emit(dir, &format!("{stem}.csv"), &self.to_csv()?),
            Format::Json => emit(dir, &format!("{stem}.json"), &self.to_json()?),
        }
    }
}
