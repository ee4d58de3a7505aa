use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::Format;

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes `rows` as a CSV table or a JSON array with the same fields.
pub fn emit_rows<T: Serialize>(rows: &[T], format: Format, out: Option<&Path>) -> Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(w);
            for row in rows {
                csv.serialize(row)?;
            }
            csv.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Writes one JSON document (`rows` supply the CSV rendering).
pub fn emit_document<D: Serialize, T: Serialize>(doc: &D, rows: &[T], format: Format, out: Option<&Path>) -> Result<()> {
    match format {
        Format::Csv => emit_rows(rows, format, out),
        Format::Json => {
            let mut w = sink(out)?;
            serde_json::to_writer_pretty(&mut w, doc)?;
            writeln!(w)?;
            Ok(())
        }
    }
}

/// `[1,2,3]`, used for list-valued CSV cells.
pub fn list<T: Serialize>(v: &[T]) -> String {
    serde_json::to_string(v).expect("plain values serialize")
}
