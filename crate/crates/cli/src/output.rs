use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::CliError;

/// Locale-independent scientific notation with 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn sink(out: &OutputArgs) -> Result<Box<dyn Write>, CliError> {
    Ok(match &out.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| CliError::Config(format!("cannot create '{}': {e}", p.display())))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("write failed: {e}"))
}

/// A set of rows with a CSV layout and a JSON form.
pub struct Table<'a, T> {
    pub header: Vec<String>,
    pub rows: &'a [T],
    pub cells: fn(&T) -> Vec<String>,
    /// JSON emits a single object instead of an array.
    pub single: bool,
}

pub fn emit<T: Serialize>(out: &OutputArgs, default: Format, table: Table<'_, T>) -> Result<(), CliError> {
    let mut w = sink(out)?;
    match out.format.unwrap_or(default) {
        Format::Json => {
            if table.single && table.rows.len() == 1 {
                serde_json::to_writer_pretty(&mut w, &table.rows[0])
            } else {
                serde_json::to_writer_pretty(&mut w, table.rows)
            }
            .map_err(io_err)?;
            writeln!(w).map_err(io_err)?;
        }
        Format::Csv => {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&table.header).map_err(io_err)?;
            for r in table.rows {
                csv.write_record((table.cells)(r)).map_err(io_err)?;
            }
            csv.flush().map_err(io_err)?;
        }
    }
    w.flush().map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(num(10.0), "1.00000000000e1");
        assert_eq!(num(-0.000123456789012345), "-1.23456789012e-4");
        let x = std::f64::consts::PI;
        assert!((num(x).parse::<f64>().unwrap() - x).abs() < 1e-11);
    }
}
