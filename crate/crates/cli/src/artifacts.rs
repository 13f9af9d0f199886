//! Artifact serialization with fixed floating-point formatting.
//!
//! Every real number in the JSON and CSV artifacts is written with 17
//! significant digits ({:.16e}), so identical runs produce byte-identical
//! files regardless of the shortest-roundtrip printer.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

/// serde_json formatter that pins f64 output to 17 significant digits.
struct F17;

impl serde_json::ser::Formatter for F17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            // JSON has no non-finite literals; null keeps the file valid.
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any value to a JSON file with pinned float formatting.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut serializer = serde_json::Serializer::with_formatter(file, F17);
    value
        .serialize(&mut serializer)
        .map_err(io::Error::other)?;
    let mut file = serializer.into_inner();
    file.write_all(b"\n")?;
    file.flush()
}

/// Write a time-series CSV: header `time,<names...>`, one row per time,
/// every value with 17 significant digits.
pub fn write_timeseries(
    path: &Path,
    names: &[&str],
    times: &[f64],
    columns: &[Vec<f64>],
) -> io::Result<()> {
    debug_assert_eq!(names.len(), columns.len());
    let mut file = BufWriter::new(File::create(path)?);
    write!(file, "time")?;
    for name in names {
        write!(file, ",{name}")?;
    }
    writeln!(file)?;
    for (i, t) in times.iter().enumerate() {
        write!(file, "{t:.16e}")?;
        for col in columns {
            write!(file, ",{:.16e}", col[i])?;
        }
        writeln!(file)?;
    }
    file.flush()
}

/// One summary row; the schema is stable across tasks.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryEntry {
    pub task: String,
    pub check: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SummaryEntry {
    pub fn from_identity(task: &str, check: &pla_core::report::IdentityCheck) -> Self {
        SummaryEntry {
            task: task.to_string(),
            check: check.identity_name.clone(),
            residual: check.max_residual,
            tolerance: check.tolerance,
            pass: check.pass,
        }
    }
}
