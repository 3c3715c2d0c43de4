//! Range test for the TreadmillSled and reconstruction of a curve from its
//! image.
//!
//! `γ = (z, w)` is the TreadmillSled of a regular curve exactly when
//! `w' = −f z` for a continuous companion function `f` and `w f − z' > 0`.
//! Then `α = −A(−F) γ` with `F' = f` satisfies `TS(α) = γ` and
//! `|α'| = w f − z'`. Changing `F` by a constant rotates `α` about the
//! origin, which is the whole ambiguity.

use log::debug;

use crate::curve::SampledCurve;
use crate::diff::{cumulative_integral, GridStencils};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{Mat2, Vec2};
use crate::treadmill::{TSCurve, DEFAULT_EPS_AXIS};

#[derive(Debug, Clone, PartialEq)]
pub struct InverseOptions {
    /// `|z| ≤ eps_axis` counts as lying on the vertical axis.
    pub eps_axis: f64,
    /// Removable-singularity threshold, relative to `max |w'|`.
    pub removable_rel: f64,
    /// Positivity margin for `w f − z'`.
    pub delta_pos: f64,
    /// Relative total-variation threshold below which `γ` is constant.
    pub constant_rel: f64,
    /// Use this companion function instead of deriving it from `γ`.
    pub f_override: Option<Vec<f64>>,
    /// Constant added to the antiderivative `F` (selects a member of the rotation family).
    pub f_offset: f64,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions {
            eps_axis: DEFAULT_EPS_AXIS,
            removable_rel: 1e-6,
            delta_pos: 1e-9,
            constant_rel: 1e-12,
            f_override: None,
            f_offset: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeReport {
    /// `min_i (w_i f_i − z'_i)`.
    pub min: f64,
    pub argmin: usize,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct InverseResult {
    pub alpha: SampledCurve,
    /// Companion function `f = −w'/z`.
    pub f: Vec<f64>,
    /// Antiderivative of `f`, zero at the first sample plus any requested offset.
    pub antiderivative: Vec<f64>,
    /// `w f − z'`, which equals `|α'|`.
    pub speed: Vec<f64>,
}

struct Derivs {
    st: GridStencils,
    d1: Vec<Vec2>,
    d2: Vec<Vec2>,
}

impl Derivs {
    fn of(g: &TSCurve) -> Result<Self> {
        if g.len() < 3 {
            return Err(invalid(format!("need at least 3 samples, got {}", g.len())));
        }
        let st = GridStencils::new(g.params());
        let d1 = st.d1_vec(g.points());
        let d2 = st.d2_vec(g.points());
        Ok(Derivs { st, d1, d2 })
    }
}

pub fn companion_f(g: &TSCurve) -> Result<Vec<f64>> {
    companion_f_with(g, &InverseOptions::default())
}

pub fn companion_f_with(g: &TSCurve, opts: &InverseOptions) -> Result<Vec<f64>> {
    let d = Derivs::of(g)?;
    companion_from(g, &d, opts)
}

fn companion_from(g: &TSCurve, d: &Derivs, opts: &InverseOptions) -> Result<Vec<f64>> {
    let scale = d.d1.iter().map(|v| v.y.abs()).fold(0.0, f64::max);
    let eps_removable = opts.removable_rel * scale;
    let mut f: Vec<Option<f64>> = Vec::with_capacity(g.len());
    for (i, (p, (d1, d2))) in g.points().iter().zip(d.d1.iter().zip(&d.d2)).enumerate() {
        if p.x.abs() > opts.eps_axis {
            f.push(Some(-d1.y / p.x));
        } else if d1.y.abs() > eps_removable {
            return Err(GeomError::NotATreadmillSled { index: i, z: p.x, dw: d1.y });
        } else if d1.x.abs() > opts.eps_axis {
            // w' = −f z with z(t₀) = 0: f(t₀) = −w''/z'
            f.push(Some(-d2.y / d1.x));
        } else {
            f.push(None);
        }
    }
    fill_gaps(g.params(), f).ok_or_else(|| GeomError::ConstantCurve { variation: total_variation(g.points()) })
}

/// Linear interpolation over undefined entries, constant past the ends.
fn fill_gaps(params: &[f64], vals: Vec<Option<f64>>) -> Option<Vec<f64>> {
    let defined: Vec<usize> = (0..vals.len()).filter(|&i| vals[i].is_some()).collect();
    if defined.is_empty() {
        return None;
    }
    let mut out = Vec::with_capacity(vals.len());
    let mut next = 0;
    for i in 0..vals.len() {
        if let Some(v) = vals[i] {
            out.push(v);
            continue;
        }
        while next < defined.len() && defined[next] < i {
            next += 1;
        }
        let v = match (next.checked_sub(1).map(|k| defined[k]), defined.get(next)) {
            (Some(l), Some(&r)) => {
                let u = (params[i] - params[l]) / (params[r] - params[l]);
                vals[l].unwrap() * (1.0 - u) + vals[r].unwrap() * u
            }
            (Some(l), None) => vals[l].unwrap(),
            (None, Some(&r)) => vals[r].unwrap(),
            (None, None) => unreachable!(),
        };
        out.push(v);
    }
    Some(out)
}

fn total_variation(pts: &[Vec2]) -> f64 {
    pts.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
}

pub fn check_range(g: &TSCurve, f: &[f64]) -> Result<RangeReport> {
    check_range_with(g, f, &InverseOptions::default())
}

pub fn check_range_with(g: &TSCurve, f: &[f64], opts: &InverseOptions) -> Result<RangeReport> {
    let d = Derivs::of(g)?;
    range_from(g, &d, f, opts)
}

fn range_from(g: &TSCurve, d: &Derivs, f: &[f64], opts: &InverseOptions) -> Result<RangeReport> {
    if f.len() != g.len() {
        return Err(invalid(format!("f has {} values for {} samples", f.len(), g.len())));
    }
    let (argmin, min) = g
        .points()
        .iter()
        .zip(f)
        .zip(&d.d1)
        .map(|((p, fi), d1)| p.y * fi - d1.x)
        .enumerate()
        .fold((0, f64::INFINITY), |(ai, am), (i, v)| if v < am { (i, v) } else { (ai, am) });
    Ok(RangeReport { min, argmin, passed: min > opts.delta_pos })
}

pub fn invert(g: &TSCurve) -> Result<InverseResult> {
    invert_with(g, &InverseOptions::default())
}

pub fn invert_with(g: &TSCurve, opts: &InverseOptions) -> Result<InverseResult> {
    let d = Derivs::of(g)?;
    let f = match &opts.f_override {
        Some(f) => {
            if f.len() != g.len() {
                return Err(invalid(format!("f override has {} values for {} samples", f.len(), g.len())));
            }
            let scale = d.d1.iter().map(|v| v.y.abs()).fold(0.0, f64::max);
            let tol = opts.removable_rel * (1.0 + scale);
            for (i, ((p, d1), fi)) in g.points().iter().zip(&d.d1).zip(f).enumerate() {
                if (d1.y + fi * p.x).abs() > tol {
                    return Err(GeomError::NotATreadmillSled { index: i, z: p.x, dw: d1.y });
                }
            }
            f.clone()
        }
        None => {
            let variation = total_variation(g.points());
            let size = g.points().iter().map(|p| p.norm()).fold(0.0, f64::max);
            if variation < opts.constant_rel * (1.0 + size) {
                return Err(GeomError::ConstantCurve { variation });
            }
            companion_from(g, &d, opts)?
        }
    };
    let report = range_from(g, &d, &f, opts)?;
    if !report.passed {
        return Err(GeomError::RangeViolation { index: report.argmin, min: report.min });
    }
    debug!("invert: range margin {:e} at sample {}", report.min, report.argmin);

    let big_f: Vec<f64> = cumulative_integral(g.params(), &f).iter().map(|v| v + opts.f_offset).collect();
    let df = d.st.d1(&f);
    let n = g.len();
    let mut points = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut accels = Vec::with_capacity(n);
    let mut speed = Vec::with_capacity(n);
    for i in 0..n {
        let gam = g.points()[i];
        let (g1, g2) = (d.d1[i], d.d2[i]);
        let rot = Mat2::rotation(-big_f[i]);
        let v = gam.perp() * f[i] + g1;
        let dv = gam.perp() * df[i] + g1.perp() * f[i] + g2;
        points.push(-(rot * gam));
        tangents.push(-(rot * v));
        accels.push(-(rot * (v.perp() * f[i] + dv)));
        speed.push(gam.y * f[i] - g1.x);
    }
    let alpha = SampledCurve::new(g.params().to_vec(), points, tangents, Some(accels))?;
    Ok(InverseResult { alpha, f, antiderivative: big_f, speed })
}
