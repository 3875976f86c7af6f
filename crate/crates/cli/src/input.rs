//! CSV ingestion.
//!
//! Each series is one column of a CSV file. Categorical columns holding
//! integer codes are used as they are; any other labels are mapped to codes
//! in order of first appearance, with one table shared by all series of a run.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use crqa_core::{RecurrencePlot, SeriesKind, TimeSeries};
use serde::Serialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Datatype {
    Categorical,
    Continuous,
}

impl From<Datatype> for SeriesKind {
    fn from(d: Datatype) -> Self {
        match d {
            Datatype::Categorical => SeriesKind::Categorical,
            Datatype::Continuous => SeriesKind::Continuous,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodeEntry {
    pub label: String,
    pub code: i64,
}

/// A column of a CSV file, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Source {
    pub path: PathBuf,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedInput {
    pub series: Vec<TimeSeries>,
    /// Present when labels had to be mapped to codes.
    pub codes: Option<Vec<CodeEntry>>,
}

impl ParsedInput {
    pub fn code_of(&self, label: &str) -> Option<i64> {
        self.codes
            .as_ref()?
            .iter()
            .find(|e| e.label == label)
            .map(|e| e.code)
    }
}

struct Cell {
    line: u64,
    text: String,
}

fn input_error(path: &Path, msg: impl std::fmt::Display) -> CliError {
    CliError::stage("input", format!("{}: {msg}", path.display()))
}

fn reader(path: &Path, header: bool) -> Result<csv::Reader<std::fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| input_error(path, e))
}

fn read_column(source: &Source, header: bool) -> Result<Vec<Cell>> {
    if source.column < 1 {
        return Err(CliError::usage("column numbers start at 1"));
    }
    let mut cells = Vec::new();
    for record in reader(&source.path, header)?.records() {
        let record = record.map_err(|e| input_error(&source.path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let text = record.get(source.column - 1).ok_or_else(|| {
            input_error(&source.path, format!("line {line}: no column {}", source.column))
        })?;
        cells.push(Cell {
            line,
            text: text.to_string(),
        });
    }
    if cells.is_empty() {
        return Err(input_error(&source.path, "no data rows"));
    }
    Ok(cells)
}

fn parse_number(path: &Path, cell: &Cell) -> Result<f64> {
    let v: f64 = cell
        .text
        .parse()
        .map_err(|_| input_error(path, format!("line {}: unparseable cell {:?}", cell.line, cell.text)))?;
    if !v.is_finite() {
        return Err(input_error(path, format!("line {}: non-finite cell {:?}", cell.line, cell.text)));
    }
    Ok(v)
}

fn integral(text: &str) -> Option<f64> {
    text.parse::<f64>().ok().filter(|v| v.is_finite() && v.fract() == 0.0)
}

/// Reads one series per source.
pub fn parse_inputs(sources: &[Source], header: bool, datatype: Datatype) -> Result<ParsedInput> {
    let columns = sources
        .iter()
        .map(|s| read_column(s, header))
        .collect::<Result<Vec<_>>>()?;

    let as_codes = datatype == Datatype::Categorical
        && !columns.iter().flatten().all(|c| integral(&c.text).is_some());
    let mut table: Vec<CodeEntry> = Vec::new();
    let mut series = Vec::with_capacity(columns.len());
    for (source, cells) in sources.iter().zip(&columns) {
        let values = if as_codes {
            cells
                .iter()
                .map(|c| match table.iter().find(|e| e.label == c.text) {
                    Some(e) => e.code as f64,
                    None => {
                        let code = table.len() as i64;
                        table.push(CodeEntry {
                            label: c.text.clone(),
                            code,
                        });
                        code as f64
                    }
                })
                .collect()
        } else {
            cells
                .iter()
                .map(|c| parse_number(&source.path, c))
                .collect::<Result<Vec<f64>>>()?
        };
        let ts = TimeSeries::new(values, datatype.into())
            .map_err(|e| input_error(&source.path, e))?;
        series.push(ts);
    }
    Ok(ParsedInput {
        series,
        codes: as_codes.then_some(table),
    })
}

/// Reads a single column.
pub fn parse_input(path: &Path, column: usize, header: bool, datatype: Datatype) -> Result<ParsedInput> {
    parse_inputs(
        &[Source {
            path: path.to_path_buf(),
            column,
        }],
        header,
        datatype,
    )
}

/// Reads a 0/1 matrix, one plot row per CSV row.
pub fn parse_plot(path: &Path, header: bool) -> Result<RecurrencePlot> {
    let mut rows = Vec::new();
    for record in reader(path, header)?.records() {
        let record = record.map_err(|e| input_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .iter()
            .map(|cell| match cell {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(input_error(path, format!("line {line}: expected 0 or 1, found {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(input_error(path, "no data rows"));
    }
    RecurrencePlot::from_rows(&rows).map_err(|e| input_error(path, e))
}
