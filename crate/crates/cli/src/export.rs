//! CSV and JSON writers.
//!
//! CSV follows RFC-4180 quoting with a header row, '.' decimal separator,
//! and scientific notation at 17 significant digits, so re-reading a file
//! reproduces every value bit-exactly. Identical inputs produce
//! byte-identical output.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::run::{PointReport, ProfileOutput, SweepRow, CHECK_NAMES};
use crate::{CliError, CliResult};

/// Export encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (use csv or json)")),
        }
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt_float(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn fmt_opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(format!("write failed: {e}"))
}

/// Writes sweep rows in the selected format.
pub fn write_sweep<W: Write + ?Sized>(
    rows: &[SweepRow],
    format: Format,
    out: &mut W,
) -> CliResult<()> {
    match format {
        Format::Json => serde_json::to_writer_pretty(&mut *out, rows).map_err(io_err)?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            let mut header = vec![
                "value",
                "c1",
                "c2",
                "gamma_ratio_analytic",
                "gamma_ratio_exact",
                "n_res_analytic",
                "n_bar_perturbative",
                "n_mirror_exact",
                "stable",
                "spectral_abscissa",
            ];
            header.extend_from_slice(&CHECK_NAMES);
            header.push("status");
            writer.write_record(&header).map_err(io_err)?;
            for row in rows {
                let mut record = vec![
                    fmt_float(row.value),
                    fmt_float(row.c1),
                    fmt_float(row.c2),
                    fmt_opt_float(row.gamma_ratio_analytic),
                    fmt_opt_float(row.gamma_ratio_exact),
                    fmt_opt_float(row.n_res_analytic),
                    fmt_opt_float(row.n_bar_perturbative),
                    fmt_opt_float(row.n_mirror_exact),
                    row.stable.to_string(),
                    fmt_float(row.spectral_abscissa),
                ];
                record.extend(row.checks.in_order().map(fmt_opt_bool));
                record.push(row.status.clone());
                writer.write_record(&record).map_err(io_err)?;
            }
            writer.flush().map_err(io_err)?;
        }
    }
    out.write_all(b"\n").map_err(io_err)?;
    Ok(())
}

/// Writes a point report: a single-row CSV summary (covariance omitted) or
/// the full JSON object.
pub fn write_point<W: Write + ?Sized>(
    report: &PointReport,
    format: Format,
    out: &mut W,
) -> CliResult<()> {
    match format {
        Format::Json => serde_json::to_writer_pretty(&mut *out, report).map_err(io_err)?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            let mut header = vec![
                "c1",
                "c2",
                "gamma1_bar",
                "gamma2_bar",
                "stable",
                "spectral_abscissa",
                "anti_stokes",
                "stokes",
                "cooling_rate",
                "gamma_ratio_exact",
                "n_residual",
                "n_bar_perturbative",
                "t_effective_kelvin",
                "gamma_ratio_analytic",
                "n_res_analytic",
                "n_mirror_exact",
                "physicality_margin",
            ];
            header.extend_from_slice(&CHECK_NAMES);
            header.push("status");
            writer.write_record(&header).map_err(io_err)?;
            let mut record = vec![
                fmt_float(report.c1),
                fmt_float(report.c2),
                fmt_float(report.gamma1_bar),
                fmt_float(report.gamma2_bar),
                report.stable.to_string(),
                fmt_float(report.spectral_abscissa),
                fmt_float(report.anti_stokes),
                fmt_float(report.stokes),
                fmt_float(report.cooling_rate),
                fmt_opt_float(report.gamma_ratio_exact),
                fmt_opt_float(report.n_residual),
                fmt_opt_float(report.n_bar_perturbative),
                fmt_opt_float(report.t_effective_kelvin),
                fmt_opt_float(report.gamma_ratio_analytic),
                fmt_opt_float(report.n_res_analytic),
                fmt_opt_float(report.n_mirror_exact),
                fmt_opt_float(report.physicality_margin),
            ];
            record.extend(report.checks.in_order().map(fmt_opt_bool));
            record.push(report.status.clone());
            writer.write_record(&record).map_err(io_err)?;
            writer.flush().map_err(io_err)?;
        }
    }
    out.write_all(b"\n").map_err(io_err)?;
    Ok(())
}

/// Writes a response profile as (omega, magnitude, bare magnitude) rows.
pub fn write_profile<W: Write + ?Sized>(
    profile: &ProfileOutput,
    format: Format,
    out: &mut W,
) -> CliResult<()> {
    match format {
        Format::Json => serde_json::to_writer_pretty(&mut *out, profile).map_err(io_err)?,
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(&mut *out);
            writer
                .write_record(["omega", "magnitude", "bare_magnitude"])
                .map_err(io_err)?;
            for i in 0..profile.omegas.len() {
                writer
                    .write_record([
                        fmt_float(profile.omegas[i]),
                        fmt_float(profile.magnitudes[i]),
                        fmt_float(profile.bare_magnitudes[i]),
                    ])
                    .map_err(io_err)?;
            }
            writer.flush().map_err(io_err)?;
        }
    }
    out.write_all(b"\n").map_err(io_err)?;
    Ok(())
}

/// Serializes with `writer`, either into a file or onto stdout.
pub fn with_destination<F>(path: Option<&Path>, writer: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match path {
        Some(path) => {
            let file = std::fs::File::create(path)
                .map_err(|e| CliError::Numerical(format!("{}: {e}", path.display())))?;
            let mut buffered = std::io::BufWriter::new(file);
            writer(&mut buffered)?;
            buffered
                .flush()
                .map_err(|e| CliError::Numerical(format!("{}: {e}", path.display())))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            writer(&mut lock)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::run::run_sweep;

    fn small_rows() -> Vec<SweepRow> {
        let mut config = RunConfig::builtin_default();
        config.sweep.samples = 3;
        run_sweep(&config, None).unwrap()
    }

    #[test]
    fn csv_has_header_plus_one_line_per_row() {
        let rows = small_rows();
        let mut buffer = Vec::new();
        write_sweep(&rows, Format::Csv, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<_> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 1 + rows.len());
        assert!(lines[0].starts_with("value,c1,c2,"));
    }

    #[test]
    fn csv_round_trips_at_full_precision() {
        let rows = small_rows();
        let mut buffer = Vec::new();
        write_sweep(&rows, Format::Csv, &mut buffer).unwrap();
        let mut reader = csv::Reader::from_reader(buffer.as_slice());
        for (record, row) in reader.records().zip(&rows) {
            let record = record.unwrap();
            let value: f64 = record[0].parse().unwrap();
            assert_eq!(value, row.value);
            let n_mirror: f64 = record[7].parse().unwrap();
            assert_eq!(n_mirror, row.n_mirror_exact.unwrap());
        }
    }

    #[test]
    fn identical_rows_export_byte_identically() {
        let rows = small_rows();
        let mut first = Vec::new();
        let mut second = Vec::new();
        write_sweep(&rows, Format::Csv, &mut first).unwrap();
        write_sweep(&small_rows(), Format::Csv, &mut second).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn json_sweep_parses_back() {
        let rows = small_rows();
        let mut buffer = Vec::new();
        write_sweep(&rows, Format::Json, &mut buffer).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buffer).unwrap();
        assert_eq!(parsed.as_array().unwrap().len(), rows.len());
    }

    #[test]
    fn format_parsing() {
        assert_eq!(Format::from_str("csv").unwrap(), Format::Csv);
        assert_eq!(Format::from_str("json").unwrap(), Format::Json);
        assert!(Format::from_str("yaml").is_err());
    }
}
