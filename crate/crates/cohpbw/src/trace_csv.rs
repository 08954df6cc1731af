//! CSV trace files.
//!
//! Header `phi,i_a,i_b,g2` (noise ensembles append `ci95_g2`), one row per
//! sample, values in scientific notation with 17 significant digits so every
//! `f64` survives a round trip. LF line endings.

use std::io::{Read, Write};

use cohpbw_core::{CorrelationTrace, NoisyTrace, TraceSource};

use crate::error::CliError;

/// Header of a deterministic trace.
pub const TRACE_HEADER: [&str; 4] = ["phi", "i_a", "i_b", "g2"];
/// Extra column written for noise ensembles.
pub const CI_COLUMN: &str = "ci95_g2";

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

/// Writes a deterministic trace.
pub fn write_trace<W: Write>(out: W, trace: &CorrelationTrace) -> Result<(), CliError> {
    let mut w = writer(out);
    w.write_record(TRACE_HEADER)?;
    for k in 0..trace.len() {
        w.write_record([
            fmt(trace.phi[k]),
            fmt(trace.i_a[k]),
            fmt(trace.i_b[k]),
            fmt(trace.g2[k]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the trial means of a noise ensemble plus their 95% half-widths.
pub fn write_noisy_trace<W: Write>(out: W, trace: &NoisyTrace) -> Result<(), CliError> {
    let mut w = writer(out);
    let mut header = TRACE_HEADER.to_vec();
    header.push(CI_COLUMN);
    w.write_record(&header)?;
    for k in 0..trace.phi.len() {
        w.write_record([
            fmt(trace.phi[k]),
            fmt(trace.mean_i_a[k]),
            fmt(trace.mean_i_b[k]),
            fmt(trace.mean_g2[k]),
            fmt(trace.ci95_g2[k]),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads either trace flavour; a `ci95_g2` column is accepted and ignored.
pub fn read_trace<R: Read>(input: R) -> Result<CorrelationTrace, CliError> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = r.headers()?.clone();
    let names: Vec<&str> = headers.iter().map(str::trim).collect();
    let expected_len = match names.as_slice() {
        [a, b, c, d] if [*a, *b, *c, *d] == TRACE_HEADER => 4,
        [a, b, c, d, e] if [*a, *b, *c, *d] == TRACE_HEADER && *e == CI_COLUMN => 5,
        _ => {
            return Err(CliError::Validation(format!(
                "unexpected CSV header '{}', want '{}'",
                names.join(","),
                TRACE_HEADER.join(",")
            )))
        }
    };
    let mut columns: [Vec<f64>; 4] = Default::default();
    for (row, record) in r.records().enumerate() {
        let record = record?;
        if record.len() != expected_len {
            return Err(CliError::Validation(format!(
                "row {} has {} fields, want {expected_len}",
                row + 2,
                record.len()
            )));
        }
        for (col, field) in record.iter().take(4).enumerate() {
            let value: f64 = field.trim().parse().map_err(|_| {
                CliError::Validation(format!("row {}: '{field}' is not a number", row + 2))
            })?;
            columns[col].push(value);
        }
    }
    let [phi, i_a, i_b, g2] = columns;
    Ok(CorrelationTrace::from_columns(
        phi,
        i_a,
        i_b,
        g2,
        TraceSource::Imported,
    )?)
}
