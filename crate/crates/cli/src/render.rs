//! CSV and JSON rendering of command results.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// 17 significant digits, locale independent.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// A command result: a table for CSV and a document for JSON.
pub struct Output {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub json: serde_json::Value,
    /// Printed to stderr in CSV mode.
    pub summary: Option<String>,
}

impl Output {
    pub fn new<T: Serialize>(header: Vec<&'static str>, rows: Vec<Vec<String>>, doc: &T) -> Result<Self> {
        Ok(Output {
            header,
            rows,
            json: serde_json::to_value(doc)?,
            summary: None,
        })
    }

    pub fn with_summary(mut self, summary: String) -> Self {
        self.summary = Some(summary);
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
                drop(w);
                if let Some(s) = &self.summary {
                    eprintln!("{s}");
                }
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}
