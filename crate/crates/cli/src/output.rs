//! Deterministic serialization: fixed 12-significant-digit floats, no
//! locale, stable row order, byte-identical across thread counts.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use nclight_core::{FieldSample, FockState, StateSpec};
use serde::Serialize;

use crate::sweep::SweepRow;

/// 12 significant digits, scientific, `.` decimal separator.
pub fn fmt_float(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // collapse -0.0
    format!("{v:.11e}")
}

pub fn writer_for(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    match out {
        Some(path) => Ok(Box::new(BufWriter::new(File::create(path)?))),
        None => Ok(Box::new(BufWriter::new(io::stdout()))),
    }
}

/// `n,re,im,prob` dump of a state.
pub fn write_state_csv(w: &mut dyn Write, state: &FockState) -> io::Result<()> {
    writeln!(w, "n,re,im,prob")?;
    for (n, amp) in state.amplitudes().iter().enumerate() {
        writeln!(
            w,
            "{n},{},{},{}",
            fmt_float(amp.re),
            fmt_float(amp.im),
            fmt_float(amp.norm_sqr())
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct StateRow {
    n: usize,
    re: f64,
    im: f64,
    prob: f64,
}

pub fn write_state_json(
    w: &mut dyn Write,
    config: serde_json::Value,
    state: &FockState,
) -> io::Result<()> {
    let rows: Vec<StateRow> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, amp)| StateRow {
            n,
            re: amp.re,
            im: amp.im,
            prob: amp.norm_sqr(),
        })
        .collect();
    write_json_document(w, config, &rows)
}

/// Contour grid: a comment header line, then `x1,x2,value` rows,
/// row-major with X2 fastest.
pub fn write_grid_csv(
    w: &mut dyn Write,
    spec: &StateSpec,
    field: &str,
    eta: f64,
    sample: &FieldSample,
) -> io::Result<()> {
    writeln!(
        w,
        "# family={} m={} r={} field={} eta={}",
        spec.family, spec.m, spec.r, field, eta
    )?;
    writeln!(w, "x1,x2,value")?;
    let grid = &sample.grid;
    for i in 0..grid.n1 {
        for j in 0..grid.n2 {
            writeln!(
                w,
                "{},{},{}",
                fmt_float(grid.x1(i)),
                fmt_float(grid.x2(j)),
                fmt_float(sample.value(i, j))
            )?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
pub struct GridRowsJson {
    pub family: String,
    pub m: usize,
    pub r: f64,
    pub field: String,
    pub eta: f64,
    pub rows: Vec<(f64, f64, f64)>,
}

pub fn grid_rows_json(spec: &StateSpec, field: &str, eta: f64, sample: &FieldSample) -> GridRowsJson {
    let grid = &sample.grid;
    let mut rows = Vec::with_capacity(grid.len());
    for i in 0..grid.n1 {
        for j in 0..grid.n2 {
            rows.push((grid.x1(i), grid.x2(j), sample.value(i, j)));
        }
    }
    GridRowsJson {
        family: spec.family.to_string(),
        m: spec.m,
        r: spec.r,
        field: field.to_string(),
        eta,
        rows,
    }
}

/// Sweep CSV: `family,m,r,measure,value,method,status,meta`. An optional
/// comment records preset grids.
pub fn write_sweep_csv(
    w: &mut dyn Write,
    comment: Option<&str>,
    rows: &[SweepRow],
) -> io::Result<()> {
    if let Some(c) = comment {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "family,m,r,measure,value,method,status,meta")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            row.family,
            row.m,
            fmt_float(row.r),
            row.measure,
            row.value.map(fmt_float).unwrap_or_default(),
            row.method,
            row.status,
            row.meta
        )?;
    }
    Ok(())
}

/// The top-level JSON envelope `{schema_version, config, rows}`.
pub fn write_json_document<T: Serialize>(
    w: &mut dyn Write,
    config: serde_json::Value,
    rows: &T,
) -> io::Result<()> {
    let doc = serde_json::json!({
        "schema_version": 1,
        "config": config,
        "rows": rows,
    });
    serde_json::to_writer_pretty(&mut *w, &doc)?;
    writeln!(w)?;
    Ok(())
}

/// Grid-set figure output path: `<prefix>_m<m>_r<r>.csv`.
pub fn grid_file_path(prefix: &Path, m: usize, r: f64) -> PathBuf {
    let stem = prefix.to_string_lossy();
    PathBuf::from(format!("{stem}_m{m}_r{r:.2}.csv"))
}
