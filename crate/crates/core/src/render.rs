//! SVG drawings of planar grids and the rays bouncing inside them.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::billiards::Trajectory;
use crate::error::{Error, Result};
use crate::grid::GridSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    /// Output units per lattice unit.
    pub cell_size: u32,
    /// Stroke colours, cycled over the paths in order.
    pub palette: Vec<String>,
    pub boundary_width: f64,
    pub grid_width: f64,
    pub path_width: f64,
    pub margin: u32,
}

impl Default for RenderOptions {
    fn default() -> Self {
        Self {
            cell_size: 40,
            palette: ["green", "blue", "red"].map(String::from).to_vec(),
            boundary_width: 2.0,
            grid_width: 0.75,
            path_width: 2.0,
            margin: 20,
        }
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders the grid lines and one polyline per trajectory. The y axis points
/// up, so lattice point `(0, 0)` sits in the bottom-left corner.
pub fn render_grid(grid: &GridSpec, paths: &[Trajectory], opts: &RenderOptions) -> Result<String> {
    let (m1, m2) = match *grid.dims() {
        [a, b] => (a, b),
        _ => return Err(Error::NotPlanar(grid.arity())),
    };
    if opts.palette.is_empty() {
        return Err(Error::EmptyPalette);
    }
    if opts.cell_size == 0 {
        return Err(Error::ZeroCellSize);
    }
    for t in paths {
        for p in &t.points {
            grid.check_point(p)?;
        }
    }

    let cell = opts.cell_size as u64;
    let margin = opts.margin as u64;
    let width = m1 * cell + 2 * margin;
    let height = m2 * cell + 2 * margin;
    let sx = |x: u64| margin + x * cell;
    let sy = |y: u64| margin + (m2 - y) * cell;

    let mut svg = String::new();
    // fmt::Write on String cannot fail
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="{}"/>"#,
        margin,
        margin,
        m1 * cell,
        m2 * cell,
        opts.boundary_width
    );
    let _ = writeln!(
        svg,
        r#"  <g class="grid" stroke="black" stroke-width="{}">"#,
        opts.grid_width
    );
    for x in 1..m1 {
        let _ = writeln!(
            svg,
            r#"    <line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#,
            sx(x),
            sy(0),
            sy(m2)
        );
    }
    for y in 1..m2 {
        let _ = writeln!(
            svg,
            r#"    <line x1="{0}" y1="{2}" x2="{1}" y2="{2}"/>"#,
            sx(0),
            sx(m1),
            sy(y)
        );
    }
    let _ = writeln!(svg, "  </g>");
    let _ = writeln!(
        svg,
        r#"  <g class="paths" fill="none" stroke-width="{}" stroke-linejoin="round" stroke-linecap="round">"#,
        opts.path_width
    );
    for (i, t) in paths.iter().enumerate() {
        let colour = escape(&opts.palette[i % opts.palette.len()]);
        let coords: Vec<String> = t
            .points
            .iter()
            .map(|p| format!("{},{}", sx(p.coords()[0]), sy(p.coords()[1])))
            .collect();
        let _ = writeln!(
            svg,
            r#"    <polyline stroke="{colour}" points="{}"/>"#,
            coords.join(" ")
        );
    }
    let _ = writeln!(svg, "  </g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
