//! CSV tables behind the `density`, `gap`, `contour` and `sweep` commands.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::boundary::{boundary_im_closed, boundary_im_numeric, segments};
use crate::contour::{cauchy_eval, ContourSpec};
use crate::error::Result;
use crate::means::{arithmetic_mean, check_off_cut, geometric_mean, h_n, Sequence};
use crate::quadrature::QuadratureSpec;
use crate::representation::{am_gm_gap, evaluate};

/// Shortest representation that round-trips, in scientific notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Right-aligned columns for terminals.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            padded.join("  ") + "\n"
        };
        let mut out = line(self.header.clone());
        for row in &self.rows {
            out.push_str(&line(row.iter().map(String::as_str).collect()));
        }
        out
    }
}

fn csv_cell(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

/// Closed-form and numeric boundary values at `per_segment` interior
/// points of every segment, in the shifted variable `t = x - a_1`.
pub fn density_table(a: &Sequence, eps: f64, per_segment: usize) -> Result<Table> {
    let mut table = Table::new(&["t", "closed", "numeric_eps", "segment"]);
    let a1 = a.min();
    for seg in segments(a) {
        let (lo, hi) = (seg.lo - a1, seg.hi - a1);
        for j in 0..per_segment {
            let t = lo + (hi - lo) * (j as f64 + 0.5) / per_segment as f64;
            table.rows.push(vec![
                fmt_num(t),
                fmt_num(boundary_im_closed(a, t)?),
                fmt_num(boundary_im_numeric(a, t, eps)?),
                seg.index.to_string(),
            ]);
        }
    }
    Ok(table)
}

/// The raw segment densities: `t, density, weighted_density, segment_index`.
pub fn raw_density_table(a: &Sequence, per_segment: usize) -> Table {
    let mut table = Table::new(&["t", "density", "weighted_density", "segment_index"]);
    for s in crate::boundary::sample_densities(a, per_segment) {
        table.rows.push(vec![
            fmt_num(s.t),
            fmt_num(s.density),
            fmt_num(s.weighted_density),
            s.segment_index.to_string(),
        ]);
    }
    table
}

pub fn gap_table(a: &Sequence, quad: &QuadratureSpec) -> Result<Table> {
    let mut table = Table::new(&["a", "A", "G", "gap_direct", "gap_repr"]);
    let (am, gm) = (arithmetic_mean(a), geometric_mean(a));
    table.rows.push(vec![
        a.to_string(),
        fmt_num(am),
        fmt_num(gm),
        fmt_num(am - gm),
        fmt_num(am_gm_gap(a, quad)?),
    ]);
    Ok(table)
}

/// Contour pieces, their sum and the direct value of `h_n(z)`.
pub fn contour_table(a: &Sequence, z: Complex64, spec: &ContourSpec) -> Result<Table> {
    let b = cauchy_eval(a, z, spec)?;
    let direct = h_n(a, z)?;
    let mut table = Table::new(&["piece", "re", "im"]);
    for (name, v) in [
        ("small_arc", b.small_arc),
        ("outer_arc", b.outer_arc),
        ("upper_line", b.upper_line),
        ("lower_line", b.lower_line),
        ("total", b.total),
        ("direct", direct),
    ] {
        table
            .rows
            .push(vec![name.to_string(), fmt_num(v.re), fmt_num(v.im)]);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub re: (f64, f64),
    pub im: (f64, f64),
    pub steps: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            re: (-0.9, 5.0),
            im: (-3.0, 3.0),
            steps: 20,
        }
    }
}

fn linspace((lo, hi): (f64, f64), steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Representation error over a rectangular grid; points on the cut are
/// skipped.
pub fn sweep_table(a: &Sequence, grid: &SweepGrid, quad: &QuadratureSpec) -> Result<Table> {
    let points: Vec<Complex64> = linspace(grid.im, grid.steps)
        .into_iter()
        .flat_map(|y| {
            linspace(grid.re, grid.steps)
                .into_iter()
                .map(move |x| Complex64::new(x, y))
        })
        .filter(|&z| check_off_cut(z, -a.min()).is_ok())
        .collect();
    let rows = points
        .par_iter()
        .map(|&z| {
            evaluate(a, z, quad).map(|r| {
                vec![
                    fmt_num(z.re),
                    fmt_num(z.im),
                    fmt_num(r.abs_error),
                    fmt_num(r.quad_error_estimate),
                ]
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut table = Table::new(&["re_z", "im_z", "abs_error", "quad_error"]);
    table.rows = rows;
    Ok(table)
}
