use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Csv,
    Json,
}

/// Rounds to `digits` significant figures, ties away from zero, and drops
/// trailing zeros: `0.03125 -> "0.0313"`, `0.25 -> "0.25"`.
pub fn significant(x: f64, digits: u32) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mut exponent = x.abs().log10().floor() as i32;
    let mut decimals = digits as i32 - 1 - exponent;
    let mut scaled = (x * 10f64.powi(decimals)).round();
    if scaled.abs() >= 10f64.powi(digits as i32) {
        exponent += 1;
        decimals = digits as i32 - 1 - exponent;
        scaled = (x * 10f64.powi(decimals)).round();
    }
    let text = if decimals > 0 {
        format!("{:.*}", decimals as usize, scaled / 10f64.powi(decimals))
    } else {
        format!("{}", scaled / 10f64.powi(decimals))
    };
    if text.contains('.') {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        text
    }
}

pub fn join(values: &[f64], precision: usize) -> String {
    values.iter().map(|v| format!("{v:.precision$}")).collect::<Vec<_>>().join(", ")
}

pub fn join_picks(picks: &[usize]) -> String {
    picks.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Writes a header row and data rows. Numbers are formatted by the caller
/// with Rust's locale-independent `Display`.
pub fn write_csv(out: &mut dyn Write, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
