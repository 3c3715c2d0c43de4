//! Profile curves of minimal, CMC-one and flat helicoidal surfaces, built
//! from the shape of their TreadmillSled.
//!
//! * minimal: the image lies on `ξ₂/√(1 + w²ξ₁²) = M`, a branch of the
//!   hyperbola `ξ₂²/M² − w²ξ₁² = 1` (or the x-axis when `M = 0`);
//! * CMC one: the image lies on the closed curve
//!   `ξ₁² + ξ₂² − ξ₂/√(1 + w²ξ₁²) = M`, `M > −1/4`;
//! * flat: the image lies on a vertical semiline `z = c ≠ 0` off the x-axis.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::curve::{arclength_reparametrize, SampledCurve};
use crate::error::{invalid, GeomError, Result};
use crate::geom::Vec2;
use crate::helicoidal::HelicoidalParams;
use crate::inverse::{check_range, companion_f, invert};
use crate::ode::rk4_on_grid;
use crate::treadmill::TSCurve;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimalSpec {
    pub params: HelicoidalParams,
    /// Hyperbola parameter; only `|M|` is used, `branch` picks the sign of `ξ₂`.
    pub m: f64,
    pub branch: Branch,
    /// Arc-length extent of the profile, centered on the hyperbola vertex.
    pub s_span: f64,
    pub n: usize,
}

impl MinimalSpec {
    pub fn new(w: f64, m: f64) -> Result<Self> {
        let spec = MinimalSpec { params: HelicoidalParams::new(w)?, m, branch: Branch::Upper, s_span: 8.0, n: 4001 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 3 {
            return Err(invalid(format!("n must be at least 3, got {}", self.n)));
        }
        if !(self.s_span > 0.0 && self.s_span.is_finite()) {
            return Err(invalid(format!("s_span must be positive, got {}", self.s_span)));
        }
        if !self.m.is_finite() {
            return Err(invalid("M must be finite"));
        }
        Ok(())
    }

    fn signed_m(&self) -> f64 {
        match self.branch {
            Branch::Upper => self.m.abs(),
            Branch::Lower => -self.m.abs(),
        }
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|i| self.s_span * (i as f64 / (n - 1) as f64 - 0.5)).collect()
    }
}

/// `ξ₂ / √(1 + w² ξ₁²)`, constant along minimal profiles.
pub fn conserved_quantity(xi: Vec2, w: f64) -> f64 {
    xi.y / (1.0 + w * w * xi.x * xi.x).sqrt()
}

/// Arc-length ODE for `(ξ₁, ξ₂, θ)` with `θ' = w²ξ₂ / (1 + w²(ξ₁² + ξ₂²))`.
fn minimal_rhs(w: f64) -> impl Fn(f64, &[f64; 3]) -> [f64; 3] {
    move |_s, y| {
        let (x1, x2) = (y[0], y[1]);
        let dtheta = w * w * x2 / (1.0 + w * w * (x1 * x1 + x2 * x2));
        [dtheta * x2 - 1.0, -dtheta * x1, dtheta]
    }
}

/// States `(ξ₁, ξ₂, θ)` on the uniform arc-length grid of `spec`, starting
/// from the vertex `(0, ±|M|, 0)` at `s = 0`.
pub fn minimal_trajectory(spec: &MinimalSpec) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    spec.validate()?;
    let w = spec.params.w();
    let grid = spec.grid();
    let y0 = [0.0, spec.signed_m(), 0.0];
    let rhs = minimal_rhs(w);

    let mut forward = vec![0.0];
    forward.extend(grid.iter().copied().filter(|s| *s > 0.0));
    let mut backward = vec![0.0];
    backward.extend(grid.iter().rev().copied().filter(|s| *s < 0.0));
    let fwd = rk4_on_grid(&rhs, &forward, y0);
    let bwd = rk4_on_grid(&rhs, &backward, y0);

    let mut states: Vec<[f64; 3]> = bwd[1..].iter().rev().copied().collect();
    if grid.contains(&0.0) {
        states.push(y0);
    }
    states.extend_from_slice(&fwd[1..]);
    debug_assert_eq!(states.len(), grid.len());
    Ok((grid, states))
}

/// Profile curve of a minimal helicoidal surface, parametrized by arc length
/// on `[−s_span/2, s_span/2]`. `M = 0` gives the line `(s, 0)` (helicoid).
pub fn minimal_profile(spec: &MinimalSpec) -> Result<SampledCurve> {
    spec.validate()?;
    let grid = spec.grid();
    if spec.m == 0.0 {
        let n = grid.len();
        let points = grid.iter().map(|s| Vec2::new(*s, 0.0)).collect();
        return SampledCurve::new(grid, points, vec![Vec2::new(1.0, 0.0); n], Some(vec![Vec2::ZERO; n]));
    }
    let w = spec.params.w();
    let (grid, states) = minimal_trajectory(spec)?;
    let rhs = minimal_rhs(w);
    let mut points = Vec::with_capacity(states.len());
    let mut tangents = Vec::with_capacity(states.len());
    let mut accels = Vec::with_capacity(states.len());
    for (s, y) in grid.iter().zip(&states) {
        let (x1, x2, th) = (y[0], y[1], y[2]);
        let (sn, cs) = th.sin_cos();
        points.push(Vec2::new(-x1 * cs + x2 * sn, -x1 * sn - x2 * cs));
        tangents.push(Vec2::new(cs, sn));
        let dtheta = rhs(*s, y)[2];
        accels.push(Vec2::new(-sn, cs) * dtheta);
    }
    SampledCurve::new(grid, points, tangents, Some(accels))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// `ξ₁` decreasing: the orientation in the range of TS.
    Decreasing,
    Increasing,
}

/// The hyperbola branch `ξ₂ = ±|M|√(1 + w²ξ₁²)` sampled with `ξ₁ = ∓u` linear,
/// `u ∈ [−U, U]`, `U = s_span / (2(1 + M²w²))`. Along the decreasing
/// orientation `w f − ξ₁' = 1 + M² w²`, so the inverse has constant speed
/// and total length `s_span`.
pub fn hyperbola_ts(spec: &MinimalSpec, orientation: Orientation) -> Result<TSCurve> {
    spec.validate()?;
    if spec.m == 0.0 {
        return Err(invalid("the hyperbola needs M != 0"));
    }
    let w = spec.params.w();
    let m = spec.signed_m();
    let half = spec.s_span / (2.0 * (1.0 + m * m * w * w));
    let n = spec.n;
    let sign = match orientation {
        Orientation::Decreasing => -1.0,
        Orientation::Increasing => 1.0,
    };
    let params: Vec<f64> = (0..n).map(|i| half * (2.0 * i as f64 / (n - 1) as f64 - 1.0)).collect();
    let pts = params
        .iter()
        .map(|u| {
            let x = sign * u;
            Vec2::new(x, m * (1.0 + w * w * x * x).sqrt())
        })
        .collect();
    TSCurve::new(params, pts)
}

/// Minimal profile obtained by inverting the hyperbola branch, reparametrized
/// by arc length and centered so the vertex sits at `s = 0`.
pub fn minimal_profile_via_inverse(spec: &MinimalSpec) -> Result<SampledCurve> {
    if spec.m == 0.0 {
        return Err(invalid("the inverse construction needs M != 0"));
    }
    minimal_profile_via_inverse_oriented(spec, Orientation::Decreasing)
}

pub fn minimal_profile_via_inverse_oriented(spec: &MinimalSpec, orientation: Orientation) -> Result<SampledCurve> {
    let gamma = hyperbola_ts(spec, orientation)?;
    let inv = invert(&gamma)?;
    let unit = arclength_reparametrize(&inv.alpha)?;
    let half = unit.params().last().unwrap() / 2.0;
    SampledCurve::new(
        unit.params().iter().map(|s| s - half).collect(),
        unit.points().to_vec(),
        unit.tangents().to_vec(),
        None,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmcSpec {
    pub params: HelicoidalParams,
    pub m: f64,
    pub n: usize,
}

impl CmcSpec {
    pub fn new(w: f64, m: f64, n: usize) -> Result<Self> {
        let spec = CmcSpec { params: HelicoidalParams::new(w)?, m, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m > -0.25 && self.m.is_finite()) {
            return Err(invalid(format!("M must exceed -1/4, got {}", self.m)));
        }
        if self.n < 8 {
            return Err(invalid(format!("n must be at least 8, got {}", self.n)));
        }
        Ok(())
    }
}

/// `ξ₁² + ξ₂² − ξ₂/√(1 + w²ξ₁²) − M` and its gradient.
fn heart(p: Vec2, w: f64, m: f64) -> (f64, Vec2) {
    let q = 1.0 + w * w * p.x * p.x;
    let root = q.sqrt();
    let value = p.x * p.x + p.y * p.y - p.y / root - m;
    let grad = Vec2::new(2.0 * p.x + p.y * w * w * p.x / (q * root), 2.0 * p.y - 1.0 / root);
    (value, grad)
}

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX_ITER: usize = 50;

fn project(mut p: Vec2, w: f64, m: f64) -> Result<Vec2> {
    for _ in 0..NEWTON_MAX_ITER {
        let (v, g) = heart(p, w, m);
        if v.abs() < NEWTON_TOL {
            return Ok(p);
        }
        let gg = g.norm_sq();
        if !(gg > 1e-24) {
            return Err(GeomError::EmptyLevelSet(format!("vanishing gradient near ({}, {})", p.x, p.y)));
        }
        p = p - g * (v / gg);
    }
    let (v, _) = heart(p, w, m);
    if v.abs() < 1e-10 {
        Ok(p)
    } else {
        Err(GeomError::EmptyLevelSet(format!("Newton correction did not converge (residual {v:e})")))
    }
}

/// Unit tangent of the level curve, clockwise around its interior.
fn heart_direction(p: Vec2, w: f64, m: f64) -> Vec2 {
    let (_, g) = heart(p, w, m);
    Vec2::new(g.y, -g.x).normalized()
}

/// One predictor–corrector step: midpoint tangent predictor, Newton corrector.
fn advance(p: Vec2, step: f64, w: f64, m: f64) -> Result<Vec2> {
    let mid = p + heart_direction(p, w, m) * (0.5 * step);
    project(p + heart_direction(mid, w, m) * step, w, m)
}

/// The closed level curve traced once, starting and ending at the seed.
#[derive(Debug, Clone)]
pub struct LevelCurve {
    /// Oriented so that it lies in the range of TS.
    pub ts: TSCurve,
    /// Distance from the seed after one full turn, before the trace is closed.
    pub closure_gap: f64,
}

pub fn cmc_level_curve(spec: &CmcSpec) -> Result<LevelCurve> {
    spec.validate()?;
    let (w, m) = (spec.params.w(), spec.m);
    let seed = Vec2::new(0.0, (1.0 + (1.0 + 4.0 * m).sqrt()) / 2.0);
    let seed = project(seed, w, m)?;
    let scale = 1.0 + seed.y;

    // first pass: march with a small step until the trace comes back
    let step0 = 2e-3 * scale;
    let max_steps = 50_000_000usize.min((1e4 / step0) as usize);
    let mut p = seed;
    let mut length = 0.0;
    let mut left_seed = false;
    let mut closed = false;
    for _ in 0..max_steps {
        let to_seed = seed - p;
        if left_seed && to_seed.norm() < 2.0 * step0 && to_seed.dot(heart_direction(p, w, m)) >= 0.0 {
            length += to_seed.norm();
            closed = true;
            break;
        }
        let q = advance(p, step0, w, m)?;
        length += (q - p).norm();
        p = q;
        if (p - seed).norm() > 4.0 * step0 {
            left_seed = true;
        }
    }
    if !closed {
        return Err(GeomError::EmptyLevelSet("trace did not close".into()));
    }
    debug!("cmc level curve: estimated length {length}");

    // second pass: n − 1 equal steps, adjusting the step until the trace closes
    let steps = spec.n - 1;
    let dir0 = heart_direction(seed, w, m);
    let mut step = length / steps as f64;
    let mut pts = Vec::new();
    let mut gap = f64::INFINITY;
    for _ in 0..12 {
        pts.clear();
        pts.push(seed);
        let mut q = seed;
        for _ in 0..steps {
            q = advance(q, step, w, m)?;
            pts.push(q);
        }
        let end = *pts.last().unwrap();
        gap = (end - seed).norm();
        if gap < 1e-12 * scale {
            break;
        }
        step -= (end - seed).dot(dir0) / steps as f64;
    }
    *pts.last_mut().unwrap() = seed;

    let mut params = Vec::with_capacity(pts.len());
    let mut acc = 0.0;
    params.push(acc);
    for win in pts.windows(2) {
        acc += (win[1] - win[0]).norm();
        params.push(acc);
    }
    let forward = TSCurve::new(params.clone(), pts.clone())?;
    let f = companion_f(&forward)?;
    if check_range(&forward, &f)?.passed {
        return Ok(LevelCurve { ts: forward, closure_gap: gap });
    }
    let total = acc;
    let rev_params = params.iter().rev().map(|t| total - t).collect();
    let rev_pts = pts.iter().rev().copied().collect();
    let backward = TSCurve::new(rev_params, rev_pts)?;
    let f = companion_f(&backward)?;
    let report = check_range(&backward, &f)?;
    if !report.passed {
        return Err(GeomError::RangeViolation { index: report.argmin, min: report.min });
    }
    Ok(LevelCurve { ts: backward, closure_gap: gap })
}

/// Profile curve of a CMC-one helicoidal surface: one fundamental piece,
/// the inverse TreadmillSled of the traced level curve.
pub fn cmc_profile(spec: &CmcSpec) -> Result<SampledCurve> {
    let level = cmc_level_curve(spec)?;
    Ok(invert(&level.ts)?.alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatSpec {
    /// Abscissa of the vertical semiline.
    pub c: f64,
    pub y_start: f64,
    pub y_end: f64,
    pub n: usize,
}

impl FlatSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.c != 0.0 && self.c.is_finite()) {
            return Err(invalid("c must be nonzero: a semiline on the vertical axis collapses to a point"));
        }
        if !(self.y_start.is_finite() && self.y_end.is_finite()) || self.y_start == self.y_end {
            return Err(invalid("y_start and y_end must be distinct finite values"));
        }
        if self.n < 3 {
            return Err(invalid(format!("n must be at least 3, got {}", self.n)));
        }
        Ok(())
    }
}

/// `γ(t) = (c, y_start + (y_end − y_start) t)`, `t ∈ [0, 1]`.
pub fn flat_ts(spec: &FlatSpec) -> Result<TSCurve> {
    spec.validate()?;
    let n = spec.n;
    let params: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let pts = params
        .iter()
        .map(|t| Vec2::new(spec.c, spec.y_start + (spec.y_end - spec.y_start) * t))
        .collect();
    TSCurve::new(params, pts)
}

/// Profile of a flat helicoidal surface. The range condition here is
/// `−y y'/c > 0`; semilines that meet `y = 0` or run the wrong way fail it.
pub fn flat_profile(spec: &FlatSpec) -> Result<SampledCurve> {
    Ok(invert(&flat_ts(spec)?)?.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::fit_rotation;
    use crate::helicoidal::{cmc_residual, mean_curvature_analytic};
    use crate::treadmill::ts;

    #[test]
    fn helicoid_case() {
        let spec = MinimalSpec { m: 0.0, n: 101, ..MinimalSpec::new(1.0, 0.0).unwrap() };
        let prof = minimal_profile(&spec).unwrap();
        let g = ts(&prof);
        for (s, p) in prof.params().iter().zip(g.points()) {
            assert!((p.x + s).abs() < 1e-12 && p.y.abs() < 1e-12);
        }
    }

    #[test]
    fn ode_trajectory_is_symmetric_and_monotone() {
        let spec = MinimalSpec { n: 401, ..MinimalSpec::new(1.0, 1.0).unwrap() };
        let (grid, states) = minimal_trajectory(&spec).unwrap();
        assert_eq!(grid[200], 0.0);
        assert_eq!(states[200], [0.0, 1.0, 0.0]);
        for i in 0..200 {
            assert!((states[i][0] + states[400 - i][0]).abs() < 1e-12);
            assert!((states[i][1] - states[400 - i][1]).abs() < 1e-12);
        }
        assert!(states.windows(2).all(|w| w[1][0] < w[0][0]));
    }

    #[test]
    fn even_sample_count() {
        let spec = MinimalSpec { n: 400, ..MinimalSpec::new(1.0, 1.0).unwrap() };
        let prof = minimal_profile(&spec).unwrap();
        assert_eq!(prof.len(), 400);
        let g = ts(&prof);
        for p in g.points() {
            assert!((conserved_quantity(*p, 1.0) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn lower_branch() {
        let spec = MinimalSpec { branch: Branch::Lower, n: 801, ..MinimalSpec::new(2.0, 0.5).unwrap() };
        let prof = minimal_profile(&spec).unwrap();
        let g = ts(&prof);
        assert!(g.points().iter().all(|p| p.y < 0.0));
        assert!(mean_curvature_analytic(&prof, spec.params).iter().all(|h| h.abs() < 1e-9));
    }

    #[test]
    fn via_inverse_wrong_orientation() {
        let spec = MinimalSpec { n: 401, ..MinimalSpec::new(1.0, 1.0).unwrap() };
        assert!(matches!(
            minimal_profile_via_inverse_oriented(&spec, Orientation::Increasing),
            Err(GeomError::RangeViolation { .. })
        ));
    }

    #[test]
    fn via_inverse_agrees_up_to_rotation() {
        let spec = MinimalSpec { n: 2001, ..MinimalSpec::new(1.0, 1.0).unwrap() };
        let a = minimal_profile(&spec).unwrap();
        let b = minimal_profile_via_inverse(&spec).unwrap();
        let (_, res) = fit_rotation(b.points(), a.points());
        assert!(res < 1e-5, "residual {res}");
    }

    #[test]
    fn cmc_seed_roots() {
        // M = 0: the level curve meets the vertical axis at 0 and 1
        let spec = CmcSpec::new(1.0, 0.0, 2000).unwrap();
        let lc = cmc_level_curve(&spec).unwrap();
        let on_axis: Vec<f64> = lc.ts.points().iter().filter(|p| p.x.abs() < 1e-3).map(|p| p.y).collect();
        assert!(on_axis.iter().any(|y| (y - 1.0).abs() < 1e-5));
        assert!(on_axis.iter().any(|y| y.abs() < 1e-5));
        assert!(lc.closure_gap < 1e-6);
        let r = cmc_residual(&lc.ts, spec.params, 0.0);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn cmc_spec_gate() {
        assert!(CmcSpec::new(1.0, -0.25, 100).is_err());
        assert!(CmcSpec::new(1.0, -0.3, 100).is_err());
        assert!(CmcSpec::new(0.0, 1.0, 100).is_err());
        assert!(CmcSpec::new(1.0, -0.2, 100).is_ok());
    }

    #[test]
    fn flat_spec_gate() {
        let ok = FlatSpec { c: 1.0, y_start: -2.0, y_end: -1.0, n: 50 };
        assert!(flat_profile(&ok).is_ok());
        assert!(matches!(flat_profile(&FlatSpec { c: 0.0, ..ok }), Err(GeomError::InvalidInput(_))));
        assert!(matches!(
            flat_profile(&FlatSpec { y_start: -1.0, y_end: 1.0, ..ok }),
            Err(GeomError::RangeViolation { .. })
        ));
        // same semiline, wrong direction
        assert!(matches!(
            flat_profile(&FlatSpec { y_start: -1.0, y_end: -2.0, ..ok }),
            Err(GeomError::RangeViolation { .. })
        ));
        // upper half plane needs y decreasing when c > 0
        assert!(flat_profile(&FlatSpec { y_start: 2.0, y_end: 1.0, ..ok }).is_ok());
    }
}
