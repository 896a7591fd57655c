//! CSV readers and writers for series, wing traces and regression histories.

use std::path::Path;

use openpath_core::poisson::PoissonRow;
use openpath_core::resonance::WingTrace;
use openpath_core::spectra::DeviationSeries;

use crate::error::PipelineError;

/// Header of a frequency deviation file.
pub const FREQUENCY_COLUMN: &str = "delta_f";
/// Header of a power deviation file.
pub const POWER_COLUMN: &str = "delta_p";

const WING_HEADER: [&str; 3] = ["t", "u", "v"];
const HISTORY_HEADER: [&str; 5] = ["c1", "c2", "c3", "c4", "count"];

fn reader(path: &Path) -> Result<csv::Reader<std::fs::File>, PipelineError> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|source| csv_error(path, source))
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>, PipelineError> {
    csv::Writer::from_path(path).map_err(|source| csv_error(path, source))
}

fn csv_error(path: &Path, source: csv::Error) -> PipelineError {
    PipelineError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn check_header<R: std::io::Read>(
    rdr: &mut csv::Reader<R>,
    path: &Path,
    expected: &[&str],
) -> Result<(), PipelineError> {
    let header = rdr.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(PipelineError::format(
            path,
            format!(
                "expected header `{}`, found `{}`",
                expected.join(","),
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    Ok(())
}

/// Reads every data row, checking that the first column counts 1, 2, 3, ...
fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>, PipelineError> {
    let mut rdr = reader(path)?;
    check_header(&mut rdr, path, header)?;
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = i + 2;
        let t: u64 = record[0].parse().map_err(|_| {
            PipelineError::format(path, format!("line {line}: `t` must be a positive integer"))
        })?;
        if t != i as u64 + 1 {
            return Err(PipelineError::format(
                path,
                format!("line {line}: expected t = {}, found {t}", i + 1),
            ));
        }
        let values = record
            .iter()
            .skip(1)
            .map(|s| s.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| PipelineError::format(path, format!("line {line}: {e}")))?;
        rows.push(values);
    }
    Ok(rows)
}

/// Reads a `t,<column>` series.
pub fn read_series(path: &Path, column: &str) -> Result<DeviationSeries, PipelineError> {
    let rows = read_rows(path, &["t", column])?;
    let values = rows.into_iter().map(|r| r[0]).collect();
    DeviationSeries::new(values).map_err(|e| PipelineError::format(path, e.to_string()))
}

pub fn write_series(
    path: &Path,
    column: &str,
    series: &DeviationSeries,
) -> Result<(), PipelineError> {
    let mut w = writer(path)?;
    w.write_record(["t", column])
        .map_err(|e| csv_error(path, e))?;
    for (i, v) in series.values().iter().enumerate() {
        w.write_record([(i + 1).to_string(), v.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a `t,u,v` wing trace.
pub fn read_wing(path: &Path) -> Result<WingTrace, PipelineError> {
    let rows = read_rows(path, &WING_HEADER)?;
    let (u, v) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
    WingTrace::new(u, v).map_err(PipelineError::from)
}

pub fn write_wing(path: &Path, wing: &WingTrace) -> Result<(), PipelineError> {
    let mut w = writer(path)?;
    w.write_record(WING_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for (i, (u, v)) in wing.u().iter().zip(wing.v()).enumerate() {
        w.write_record([(i + 1).to_string(), u.to_string(), v.to_string()])
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a `c1,c2,c3,c4,count` regression history.
pub fn read_history(path: &Path) -> Result<Vec<PoissonRow>, PipelineError> {
    let mut rdr = reader(path)?;
    check_header(&mut rdr, path, &HISTORY_HEADER)?;
    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = i + 2;
        let mut colors = [0.0; 4];
        for (c, field) in colors.iter_mut().zip(record.iter()) {
            *c = field
                .parse()
                .map_err(|e| PipelineError::format(path, format!("line {line}: {e}")))?;
        }
        let count = record[4].parse().map_err(|_| {
            PipelineError::format(
                path,
                format!("line {line}: count must be a nonnegative integer"),
            )
        })?;
        rows.push(PoissonRow { colors, count });
    }
    Ok(rows)
}

pub fn write_history(path: &Path, rows: &[PoissonRow]) -> Result<(), PipelineError> {
    let mut w = writer(path)?;
    w.write_record(HISTORY_HEADER)
        .map_err(|e| csv_error(path, e))?;
    for row in rows {
        let c = row.colors;
        w.write_record([
            c[0].to_string(),
            c[1].to_string(),
            c[2].to_string(),
            c[3].to_string(),
            row.count.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    })
}
