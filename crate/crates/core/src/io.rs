//! Text formats: curve CSV (`t,x,y`), companion-function CSV (`t,f`),
//! OBJ-style meshes, curvature grids (`s,t,H,K`) and SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::SampledCurve;
use crate::error::{invalid, GeomError, Result};
use crate::geom::Vec2;
use crate::helicoidal::{CurvatureGrid, SurfaceMesh};
use crate::treadmill::TSCurve;

#[derive(Debug, Serialize, Deserialize)]
struct CurveRow {
    t: f64,
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct FRow {
    t: f64,
    f: f64,
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Raw `(t, point)` rows of a curve CSV.
pub fn read_curve_rows<R: Read>(reader: R) -> Result<(Vec<f64>, Vec<Vec2>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "x", "y"] {
        return Err(GeomError::Csv(format!("expected header t,x,y, found {}", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut params = Vec::new();
    let mut points = Vec::new();
    for row in rdr.deserialize::<CurveRow>() {
        let row = row?;
        params.push(row.t);
        points.push(Vec2::new(row.x, row.y));
    }
    if params.is_empty() {
        return Err(GeomError::Csv("curve file has no samples".into()));
    }
    Ok((params, points))
}

pub fn write_curve_rows<W: Write>(writer: W, params: &[f64], points: &[Vec2]) -> Result<()> {
    if params.len() != points.len() {
        return Err(invalid("parameter and point counts differ"));
    }
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["t", "x", "y"])?;
    for (t, p) in params.iter().zip(points) {
        wtr.write_record([fmt(*t), fmt(p.x), fmt(p.y)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Loads a curve; tangents and accelerations come from finite differences.
pub fn read_curve(path: &Path) -> Result<SampledCurve> {
    let (params, points) = read_curve_rows(fs::File::open(path)?)?;
    SampledCurve::from_points(params, points)
}

pub fn write_curve(path: &Path, c: &SampledCurve) -> Result<()> {
    write_curve_rows(fs::File::create(path)?, c.params(), c.points())
}

pub fn read_ts(path: &Path) -> Result<TSCurve> {
    let (params, points) = read_curve_rows(fs::File::open(path)?)?;
    TSCurve::new(params, points)
}

pub fn write_ts(path: &Path, g: &TSCurve) -> Result<()> {
    write_curve_rows(fs::File::create(path)?, g.params(), g.points())
}

/// Reads a `t,f` file and checks its parameters match `params`.
pub fn read_f_override(path: &Path, params: &[f64]) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let mut ts = Vec::new();
    let mut fs = Vec::new();
    for row in rdr.deserialize::<FRow>() {
        let row = row?;
        ts.push(row.t);
        fs.push(row.f);
    }
    if ts.len() != params.len() {
        return Err(invalid(format!("f override has {} rows, curve has {} samples", ts.len(), params.len())));
    }
    let scale = params.iter().fold(1.0f64, |m, t| m.max(t.abs()));
    if let Some(i) = ts.iter().zip(params).position(|(a, b)| (a - b).abs() > 1e-9 * scale) {
        return Err(invalid(format!("f override parameter mismatch at row {i}")));
    }
    Ok(fs)
}

pub fn write_f(path: &Path, params: &[f64], f: &[f64]) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(["t", "f"])?;
    for (t, v) in params.iter().zip(f) {
        wtr.write_record([fmt(*t), fmt(*v)])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Wavefront-style text: `v` lines row by row, then each quad split into two
/// triangles ordered counterclockwise about `φ_s × φ_t`.
pub fn mesh_to_obj(mesh: &SurfaceMesh) -> String {
    let (ns, nt) = (mesh.ns(), mesh.nt());
    let mut out = String::with_capacity(ns * nt * 64);
    for row in &mesh.points {
        for p in row {
            let _ = writeln!(out, "v {} {} {}", fmt(p.x), fmt(p.y), fmt(p.z));
        }
    }
    if let Some(normals) = &mesh.normals {
        for row in normals {
            for n in row {
                let _ = writeln!(out, "vn {} {} {}", fmt(n.x), fmt(n.y), fmt(n.z));
            }
        }
    }
    let with_normals = mesh.normals.is_some();
    let idx = |i: usize, j: usize| i * nt + j + 1;
    let mut face = |a: usize, b: usize, c: usize| {
        if with_normals {
            let _ = writeln!(out, "f {a}//{a} {b}//{b} {c}//{c}");
        } else {
            let _ = writeln!(out, "f {a} {b} {c}");
        }
    };
    for i in 0..ns.saturating_sub(1) {
        for j in 0..nt.saturating_sub(1) {
            face(idx(i, j), idx(i + 1, j), idx(i + 1, j + 1));
            face(idx(i, j), idx(i + 1, j + 1), idx(i, j + 1));
        }
    }
    out
}

pub fn write_obj(path: &Path, mesh: &SurfaceMesh) -> Result<()> {
    fs::write(path, mesh_to_obj(mesh))?;
    Ok(())
}

/// Interior nodes only.
pub fn write_curvature_csv(path: &Path, grid: &CurvatureGrid) -> Result<()> {
    let mut wtr = csv::Writer::from_path(path)?;
    wtr.write_record(["s", "t", "H", "K"])?;
    for (i, j, h, k) in grid.interior() {
        wtr.write_record([fmt(grid.s_params[i]), fmt(grid.t_params[j]), fmt(h), fmt(k)])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotCurve {
    pub label: String,
    pub points: Vec<Vec2>,
}

impl PlotCurve {
    pub fn new(label: impl Into<String>, points: Vec<Vec2>) -> Self {
        PlotCurve { label: label.into(), points }
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One polyline per curve in an equal-aspect frame with both axes drawn.
pub fn render_svg(curves: &[PlotCurve]) -> Result<String> {
    if curves.is_empty() || curves.iter().all(|c| c.points.is_empty()) {
        return Err(invalid("nothing to plot"));
    }
    let (mut lo, mut hi) = (Vec2::ZERO, Vec2::ZERO);
    for p in curves.iter().flat_map(|c| &c.points) {
        if !(p.x.is_finite() && p.y.is_finite()) {
            return Err(invalid("non-finite point in plot input"));
        }
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let span = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
    let pad = 0.05 * span;
    let (x0, y0) = (lo.x - pad, lo.y - pad);
    let (wd, ht) = (hi.x - lo.x + 2.0 * pad, hi.y - lo.y + 2.0 * pad);
    let px = 800.0;
    let scale = px / wd.max(ht);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{} {} {} {}">"#,
        wd * scale,
        ht * scale,
        x0,
        -(y0 + ht),
        wd,
        ht
    );
    let stroke = 1.5 / scale;
    let _ = writeln!(s, r#"<g transform="scale(1,-1)" fill="none" stroke-width="{stroke}">"#);
    let _ = writeln!(
        s,
        r##"<line class="axis" x1="{}" y1="0" x2="{}" y2="0" stroke="#888"/>"##,
        x0,
        x0 + wd
    );
    let _ = writeln!(
        s,
        r##"<line class="axis" x1="0" y1="{}" x2="0" y2="{}" stroke="#888"/>"##,
        y0,
        y0 + ht
    );
    for (k, c) in curves.iter().enumerate() {
        let pts: Vec<String> = c.points.iter().map(|p| format!("{},{}", p.x, p.y)).collect();
        let _ = writeln!(
            s,
            r#"<polyline stroke="{}" points="{}"><title>{}</title></polyline>"#,
            PALETTE[k % PALETTE.len()],
            pts.join(" "),
            escape(&c.label)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

pub fn emit_svg(curves: &[PlotCurve], path: &Path) -> Result<()> {
    let svg = render_svg(curves)?;
    fs::write(path, svg)?;
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
