//! CSV export: comma-separated, `\n` line endings, one header row, floats
//! printed in shortest round-trip decimal form (never more than 17
//! significant digits, parseable back bit for bit).

use std::io::Write;

use roadwheel_core::{RoadCurve, TracePath};

use crate::CliError;

/// Shortest decimal representation that parses back to the same bits.
pub fn format_float(v: f64) -> String {
    format!("{v}")
}

fn write_rows<W: Write>(
    w: &mut W,
    header: &str,
    rows: impl Iterator<Item = [f64; 3]>,
) -> Result<usize, CliError> {
    writeln!(w, "{header}")?;
    let mut count = 0;
    for row in rows {
        writeln!(
            w,
            "{},{},{}",
            format_float(row[0]),
            format_float(row[1]),
            format_float(row[2])
        )?;
        count += 1;
    }
    Ok(count)
}

/// Road samples as `theta,x,y`.
pub fn road_csv<W: Write>(w: &mut W, road: &RoadCurve) -> Result<usize, CliError> {
    write_rows(w, "theta,x,y", road.samples().map(|(t, x, y)| [t, x, y]))
}

/// Trace samples as `phi,px,py`. Refuses an empty trace.
pub fn trace_csv<W: Write>(w: &mut W, trace: &TracePath) -> Result<usize, CliError> {
    if trace.points.is_empty() {
        return Err(CliError::Usage("nothing to export: empty trace".into()));
    }
    write_rows(
        w,
        "phi,px,py",
        trace
            .phis
            .iter()
            .zip(&trace.points)
            .map(|(&phi, p)| [phi, p.x, p.y]),
    )
}

/// Generic three-column samples. Refuses an empty set.
pub fn samples_csv<W: Write>(
    w: &mut W,
    header: &str,
    rows: &[[f64; 3]],
) -> Result<usize, CliError> {
    if rows.is_empty() {
        return Err(CliError::Usage("nothing to export: no samples".into()));
    }
    write_rows(w, header, rows.iter().copied())
}

/// Parse a CSV produced by this module back into rows (used by tests and
/// downstream tooling; the header line is returned separately).
pub fn parse_csv(text: &str) -> Result<(String, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Usage("empty csv".into()))?
        .to_string();
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| CliError::Usage(format!("bad csv field {f:?}: {e}")))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}
