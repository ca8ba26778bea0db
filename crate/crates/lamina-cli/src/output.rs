//! CSV writers. All floats are rendered with 17 significant digits so
//! re-parsing recovers them bit-exactly.

use std::io::{BufWriter, Write};
use std::path::Path;

use lamina::assembly::SolutionField;
use lamina::presets::PostColumn;

use crate::CliError;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// `layer,x,t,u[,extra]` with t outermost, then layer, then x. Layers are
/// 1-based.
pub fn write_field_csv(
    path: &Path,
    field: &SolutionField,
    post: &PostColumn,
) -> Result<(), CliError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    match post {
        PostColumn::None => writeln!(w, "layer,x,t,u")?,
        PostColumn::PerLayerFactor { label, .. } => writeln!(w, "layer,x,t,u,{label}")?,
        PostColumn::ExpTime { label } => writeln!(w, "layer,x,t,u,{label}")?,
    }
    for (k, &t) in field.times.iter().enumerate() {
        for (i, xs) in field.xs.iter().enumerate() {
            for (j, &x) in xs.iter().enumerate() {
                let u = field.values[k][i][j];
                match post {
                    PostColumn::None => {
                        writeln!(w, "{},{},{},{}", i + 1, fmt(x), fmt(t), fmt(u))?;
                    }
                    PostColumn::PerLayerFactor { factors, .. } => {
                        writeln!(
                            w,
                            "{},{},{},{},{}",
                            i + 1,
                            fmt(x),
                            fmt(t),
                            fmt(u),
                            fmt(u * factors[i])
                        )?;
                    }
                    PostColumn::ExpTime { .. } => {
                        writeln!(
                            w,
                            "{},{},{},{},{}",
                            i + 1,
                            fmt(x),
                            fmt(t),
                            fmt(u),
                            fmt(u * t.exp())
                        )?;
                    }
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// `t,N,epsilon[,slope]`; the slope column is omitted for single-N runs.
pub fn write_converge_csv(
    path: &Path,
    rows: &[(f64, usize, f64, Option<f64>)],
    with_slope: bool,
) -> Result<(), CliError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    if with_slope {
        writeln!(w, "t,N,epsilon,slope")?;
    } else {
        writeln!(w, "t,N,epsilon")?;
    }
    for &(t, n, eps, slope) in rows {
        if with_slope {
            let s = slope.map(fmt).unwrap_or_default();
            writeln!(w, "{},{},{},{}", fmt(t), n, fmt(eps), s)?;
        } else {
            writeln!(w, "{},{},{}", fmt(t), n, fmt(eps))?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct CompareRow {
    pub t: f64,
    pub max_rel_diff: f64,
    pub richardson_estimate: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Trapezoid mass of the raw field over the whole domain.
    pub mass: f64,
}

pub fn write_compare_csv(path: &Path, rows: &[CompareRow]) -> Result<(), CliError> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "t,max_rel_diff,richardson_estimate,tolerance,verdict,mass")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt(row.t),
            fmt(row.max_rel_diff),
            fmt(row.richardson_estimate),
            fmt(row.tolerance),
            if row.pass { "pass" } else { "fail" },
            fmt(row.mass)
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Composite trapezoid of the raw field over all layers at time index `k`.
pub fn trapezoid_mass(field: &SolutionField, k: usize) -> f64 {
    let mut total = 0.0;
    for (i, xs) in field.xs.iter().enumerate() {
        let vals = &field.values[k][i];
        for j in 1..xs.len() {
            total += 0.5 * (vals[j] + vals[j - 1]) * (xs[j] - xs[j - 1]);
        }
    }
    total
}
