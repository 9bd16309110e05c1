//! `time,value` CSV series.
//!
//! Numbers are written with Rust's `{}` formatting of `f64`, which is the
//! shortest decimal string that parses back to the same value.

use std::io::{Read, Write};

use truncvar_core::SamplePath;

use crate::error::{CliError, Result};

pub const HEADER: [&str; 2] = ["time", "value"];

pub fn read_series<R: Read>(input: R, origin: &str) -> Result<SamplePath> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = rdr
        .headers()
        .map_err(|e| CliError::Parse(format!("{origin}: {e}")))?
        .clone();
    if header.iter().collect::<Vec<_>>() != HEADER {
        return Err(CliError::Parse(format!(
            "{origin}: expected header \"time,value\", found {:?}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut times = Vec::new();
    let mut values = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Parse(format!("{origin}: {e}")))?;
        let field = |i: usize| -> Result<f64> {
            rec[i].parse::<f64>().map_err(|_| {
                CliError::Parse(format!(
                    "{origin}: row {}: {:?} is not a number",
                    row + 2,
                    &rec[i]
                ))
            })
        };
        times.push(field(0)?);
        values.push(field(1)?);
    }
    SamplePath::new(times, values).map_err(|e| CliError::Parse(format!("{origin}: {e}")))
}

/// Writes `header` then one row per index, formatting every column.
pub fn write_columns<W: Write>(out: W, header: &[&str], columns: &[&[f64]]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    let n = columns.first().map_or(0, |c| c.len());
    let mut row = Vec::with_capacity(columns.len());
    for i in 0..n {
        row.clear();
        row.extend(columns.iter().map(|c| c[i].to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_series<W: Write>(out: W, p: &SamplePath) -> csv::Result<()> {
    write_columns(out, &HEADER, &[p.times(), p.values()])
}
