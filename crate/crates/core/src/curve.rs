//! Sampled regular planar curves and their differential invariants.

use crate::diff::{cumulative_trapezoid, GridStencils};
use crate::error::{invalid, GeomError, Result};
use crate::geom::{Mat2, Vec2};

/// Default regularity threshold on tangent norms.
pub const DEFAULT_EPS_REG: f64 = 1e-12;

/// Relative finite-difference step for first derivatives of analytic sources.
const FD_STEP_FIRST: f64 = 1e-5;
/// Relative finite-difference step for second derivatives of analytic sources.
const FD_STEP_SECOND: f64 = 1e-4;

/// Largest admissible jump in tangent direction between consecutive samples.
const UNWRAP_LIMIT: f64 = std::f64::consts::PI - 0.1;

/// An analytic curve on a closed parameter interval.
///
/// Derivatives are optional; `sample` falls back to central differences.
pub trait CurveSource {
    fn domain(&self) -> (f64, f64);
    fn position(&self, t: f64) -> Vec2;
    fn derivative(&self, _t: f64) -> Option<Vec2> {
        None
    }
    fn second_derivative(&self, _t: f64) -> Option<Vec2> {
        None
    }
}

/// A regular planar curve given by ordered samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledCurve {
    params: Vec<f64>,
    points: Vec<Vec2>,
    tangents: Vec<Vec2>,
    accels: Option<Vec<Vec2>>,
}

impl SampledCurve {
    pub fn new(params: Vec<f64>, points: Vec<Vec2>, tangents: Vec<Vec2>, accels: Option<Vec<Vec2>>) -> Result<Self> {
        Self::with_tolerance(params, points, tangents, accels, DEFAULT_EPS_REG)
    }

    pub fn with_tolerance(
        params: Vec<f64>,
        points: Vec<Vec2>,
        tangents: Vec<Vec2>,
        accels: Option<Vec<Vec2>>,
        eps_reg: f64,
    ) -> Result<Self> {
        let n = params.len();
        if n < 2 {
            return Err(invalid(format!("a sampled curve needs at least 2 samples, got {n}")));
        }
        if points.len() != n || tangents.len() != n || accels.as_ref().is_some_and(|a| a.len() != n) {
            return Err(invalid("params, points and tangents must have the same length"));
        }
        check_increasing(&params)?;
        if let Some(i) = points.iter().position(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(invalid(format!("non-finite point at sample {i}")));
        }
        for (index, t) in tangents.iter().enumerate() {
            let norm = t.norm();
            if !(norm > eps_reg) {
                return Err(GeomError::RegularityViolation { index, norm });
            }
        }
        Ok(SampledCurve { params, points, tangents, accels })
    }

    /// Builds a curve from positions alone; derivatives come from finite
    /// differences on the parameter grid.
    pub fn from_points(params: Vec<f64>, points: Vec<Vec2>) -> Result<Self> {
        if params.len() != points.len() {
            return Err(invalid("params and points must have the same length"));
        }
        if params.len() < 2 {
            return Err(invalid("a sampled curve needs at least 2 samples"));
        }
        check_increasing(&params)?;
        let st = GridStencils::new(&params);
        let tangents = st.d1_vec(&points);
        let accels = (params.len() >= 3).then(|| st.d2_vec(&points));
        Self::new(params, points, tangents, accels)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Vec2] {
        &self.points
    }

    pub fn tangents(&self) -> &[Vec2] {
        &self.tangents
    }

    pub fn accels(&self) -> Option<&[Vec2]> {
        self.accels.as_deref()
    }

    pub fn speeds(&self) -> Vec<f64> {
        self.tangents.iter().map(|t| t.norm()).collect()
    }

    pub fn unit_tangents(&self) -> Vec<Vec2> {
        self.tangents.iter().map(|t| t.normalized()).collect()
    }

    /// Second derivatives: stored ones if present, else differences of the tangents.
    pub fn second_derivatives(&self) -> Vec<Vec2> {
        match &self.accels {
            Some(a) => a.clone(),
            None => GridStencils::new(&self.params).d1_vec(&self.tangents),
        }
    }

    /// Total length by the trapezoid rule on `|α'|`.
    pub fn length(&self) -> f64 {
        *cumulative_trapezoid(&self.params, &self.speeds()).last().unwrap()
    }

    pub fn rotate(&self, tau: f64) -> SampledCurve {
        rotate(self, tau)
    }

    pub fn reverse(&self) -> SampledCurve {
        reverse(self)
    }
}

fn check_increasing(params: &[f64]) -> Result<()> {
    if let Some(i) = params.iter().position(|t| !t.is_finite()) {
        return Err(invalid(format!("non-finite parameter at sample {i}")));
    }
    if let Some(i) = params.windows(2).position(|w| w[1] <= w[0]) {
        return Err(invalid(format!("parameters must be strictly increasing (sample {})", i + 1)));
    }
    Ok(())
}

/// Continuous tangent-angle function of a curve.
#[derive(Debug, Clone, PartialEq)]
pub struct TurningAngle {
    pub angles: Vec<f64>,
}

impl TurningAngle {
    pub fn unit(&self, i: usize) -> Vec2 {
        Vec2::from_angle(self.angles[i])
    }

    /// Total turning `ρ(b) − ρ(a)`.
    pub fn total(&self) -> f64 {
        self.angles.last().unwrap() - self.angles[0]
    }
}

/// Uniform sampling of an analytic source with `n` samples.
pub fn sample<S: CurveSource + ?Sized>(source: &S, n: usize) -> Result<SampledCurve> {
    sample_with_tolerance(source, n, DEFAULT_EPS_REG)
}

pub fn sample_with_tolerance<S: CurveSource + ?Sized>(source: &S, n: usize, eps_reg: f64) -> Result<SampledCurve> {
    if n < 2 {
        return Err(invalid(format!("sample count must be at least 2, got {n}")));
    }
    let (a, b) = source.domain();
    if !(b > a) {
        return Err(invalid(format!("empty parameter interval [{a}, {b}]")));
    }
    let params: Vec<f64> = (0..n)
        .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
        .collect();
    let points: Vec<Vec2> = params.iter().map(|&t| source.position(t)).collect();
    let tangents = params
        .iter()
        .map(|&t| source.derivative(t).unwrap_or_else(|| fd_first(source, t, a, b)))
        .collect();
    let accels = params
        .iter()
        .map(|&t| source.second_derivative(t).unwrap_or_else(|| fd_second(source, t, a, b)))
        .collect();
    SampledCurve::with_tolerance(params, points, tangents, Some(accels), eps_reg)
}

fn fd_first<S: CurveSource + ?Sized>(source: &S, t: f64, a: f64, b: f64) -> Vec2 {
    let h = (b - a) * FD_STEP_FIRST;
    let p = |u: f64| source.position(u);
    if t - h < a {
        (p(t) * -3.0 + p(t + h) * 4.0 - p(t + 2.0 * h)) / (2.0 * h)
    } else if t + h > b {
        (p(t) * 3.0 - p(t - h) * 4.0 + p(t - 2.0 * h)) / (2.0 * h)
    } else {
        (p(t + h) - p(t - h)) / (2.0 * h)
    }
}

fn fd_second<S: CurveSource + ?Sized>(source: &S, t: f64, a: f64, b: f64) -> Vec2 {
    let h = (b - a) * FD_STEP_SECOND;
    let p = |u: f64| source.position(u);
    if t - h < a {
        (p(t) * 2.0 - p(t + h) * 5.0 + p(t + 2.0 * h) * 4.0 - p(t + 3.0 * h)) / (h * h)
    } else if t + h > b {
        (p(t) * 2.0 - p(t - h) * 5.0 + p(t - 2.0 * h) * 4.0 - p(t - 3.0 * h)) / (h * h)
    } else {
        (p(t + h) - p(t) * 2.0 + p(t - h)) / (h * h)
    }
}

/// Resamples `c` on a uniform arc-length grid starting at 0 with the same
/// sample count. Cumulative length is the trapezoid rule on `|α'|`; each
/// target length is located by inverting the per-interval quadratic
/// `s(u)` (speed linear in `u`), and positions come from the cubic Hermite
/// interpolant of the samples. Returned tangents are unit vectors.
pub fn arclength_reparametrize(c: &SampledCurve) -> Result<SampledCurve> {
    let n = c.len();
    let speeds = c.speeds();
    let cum = cumulative_trapezoid(&c.params, &speeds);
    let total = cum[n - 1];
    let mut params = Vec::with_capacity(n);
    let mut points = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut seg = 0;
    for k in 0..n {
        let sigma = if k == n - 1 { total } else { total * k as f64 / (n - 1) as f64 };
        while seg + 2 < n && cum[seg + 1] <= sigma {
            seg += 1;
        }
        let h = c.params[seg + 1] - c.params[seg];
        let ds = (sigma - cum[seg]).max(0.0);
        let (v0, v1) = (speeds[seg], speeds[seg + 1]);
        let dv = v1 - v0;
        let disc = (h * v0).powi(2) + 2.0 * h * dv * ds;
        let u = (2.0 * ds / (h * v0 + disc.max(0.0).sqrt())).clamp(0.0, 1.0);
        let (p, d) = hermite(
            c.points[seg],
            c.tangents[seg] * h,
            c.points[seg + 1],
            c.tangents[seg + 1] * h,
            u,
        );
        params.push(sigma);
        points.push(p);
        tangents.push(d.normalized());
    }
    SampledCurve::new(params, points, tangents, None)
}

/// Cubic Hermite interpolant on the unit interval and its `u`-derivative.
fn hermite(p0: Vec2, m0: Vec2, p1: Vec2, m1: Vec2, u: f64) -> (Vec2, Vec2) {
    let u2 = u * u;
    let u3 = u2 * u;
    let pos = p0 * (2.0 * u3 - 3.0 * u2 + 1.0) + m0 * (u3 - 2.0 * u2 + u) + p1 * (-2.0 * u3 + 3.0 * u2) + m1 * (u3 - u2);
    let vel = p0 * (6.0 * u2 - 6.0 * u) + m0 * (3.0 * u2 - 4.0 * u + 1.0) + p1 * (-6.0 * u2 + 6.0 * u) + m1 * (3.0 * u2 - 2.0 * u);
    (pos, vel)
}

/// Unwrapped tangent angle. `ρ(a)` is the principal `atan2` value of the
/// first tangent; successive increments are reduced into `(−π, π]`.
pub fn turning_angle(c: &SampledCurve) -> Result<TurningAngle> {
    let mut angles = Vec::with_capacity(c.len());
    let mut prev_raw = c.tangents[0].angle();
    let mut acc = prev_raw;
    angles.push(acc);
    for (i, t) in c.tangents.iter().enumerate().skip(1) {
        let raw = t.angle();
        let delta = wrap_angle(raw - prev_raw);
        if delta.abs() >= UNWRAP_LIMIT {
            return Err(GeomError::UnwrapFailure { index: i, jump: delta });
        }
        acc += delta;
        angles.push(acc);
        prev_raw = raw;
    }
    Ok(TurningAngle { angles })
}

/// Reduces an angle into `(−π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut r = a.rem_euclid(TAU);
    if r > PI {
        r -= TAU;
    }
    r
}

/// Signed curvature `(x'y'' − y'x'')/|α'|³`; positive when turning left.
pub fn curvature(c: &SampledCurve) -> Vec<f64> {
    let acc = c.second_derivatives();
    c.tangents
        .iter()
        .zip(&acc)
        .map(|(d1, d2)| d1.cross(*d2) / d1.norm().powi(3))
        .collect()
}

/// Applies `A(τ)` (clockwise by `τ`) to points, tangents and second derivatives.
pub fn rotate(c: &SampledCurve, tau: f64) -> SampledCurve {
    let rot = Mat2::rotation(tau);
    SampledCurve {
        params: c.params.clone(),
        points: c.points.iter().map(|p| rot * *p).collect(),
        tangents: c.tangents.iter().map(|p| rot * *p).collect(),
        accels: c.accels.as_ref().map(|a| a.iter().map(|p| rot * *p).collect()),
    }
}

/// `β(t) = α(−t)` on the mirrored parameter interval.
pub fn reverse(c: &SampledCurve) -> SampledCurve {
    SampledCurve {
        params: c.params.iter().rev().map(|t| -t).collect(),
        points: c.points.iter().rev().copied().collect(),
        tangents: c.tangents.iter().rev().map(|t| -*t).collect(),
        accels: c.accels.as_ref().map(|a| a.iter().rev().copied().collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sources::{self, FnCurve};
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn unit_circle_five_samples() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 5).unwrap();
        let expect = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0), (1.0, 0.0)];
        for (p, e) in c.points().iter().zip(expect) {
            assert!((p.x - e.0).abs() < 1e-15 && (p.y - e.1).abs() < 1e-15);
        }
    }

    #[test]
    fn two_sample_line() {
        let c = sample(&sources::line(Vec2::ZERO, Vec2::new(1.0, 0.0), 1.0, 2.0), 2).unwrap();
        assert_eq!(c.params(), &[1.0, 2.0]);
        assert_eq!(c.tangents(), &[Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)]);
    }

    #[test]
    fn cubic_graph_analytic_tangents() {
        let c = sample(&sources::cubic_graph(-1.5, 1.5), 101).unwrap();
        for (t, d) in c.params().iter().zip(c.tangents()) {
            assert!((d.x - 1.0).abs() < 1e-12);
            assert!((d.y - (3.0 * t * t - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn finite_difference_fallback_matches_analytic() {
        // Only positions are supplied; central differences with h = 3e-5
        // have truncation error h² |f'''| / 6 = 9e-10 on the cubic.
        let src = FnCurve::new(-1.5, 1.5, |t| Vec2::new(t, t * t * t - t));
        let c = sample(&src, 101).unwrap();
        for (t, d) in c.params().iter().zip(c.tangents()) {
            assert!((d.x - 1.0).abs() < 1e-8);
            assert!((d.y - (3.0 * t * t - 1.0)).abs() < 1e-8);
        }
        let acc = c.accels().unwrap();
        for (t, a) in c.params().iter().zip(acc) {
            assert!((a.y - 6.0 * t).abs() < 1e-5, "{t} {}", a.y);
        }
    }

    #[test]
    fn irregular_curve_is_rejected() {
        let src = FnCurve::new(-1.0, 1.0, |t| Vec2::new(t * t, t * t * t))
            .with_derivative(|t| Vec2::new(2.0 * t, 3.0 * t * t));
        assert!(matches!(sample(&src, 11), Err(GeomError::RegularityViolation { index: 5, .. })));
        assert!(sample(&src, 1).is_err());
    }

    #[test]
    fn constructor_validates_shape() {
        let p = vec![Vec2::ZERO, Vec2::new(1.0, 0.0)];
        let t = vec![Vec2::new(1.0, 0.0); 2];
        assert!(SampledCurve::new(vec![0.0, 0.0], p.clone(), t.clone(), None).is_err());
        assert!(SampledCurve::new(vec![0.0], p[..1].to_vec(), t[..1].to_vec(), None).is_err());
        assert!(SampledCurve::new(vec![0.0, 1.0], p.clone(), t[..1].to_vec(), None).is_err());
        assert!(SampledCurve::with_tolerance(vec![0.0, 1.0], p, vec![Vec2::new(1e-3, 0.0); 2], None, 1e-2).is_err());
    }

    #[test]
    fn circle_radius_two_arclength() {
        let c = sample(&sources::circle(2.0, 0.0, PI), 1001).unwrap();
        let r = arclength_reparametrize(&c).unwrap();
        assert!((r.params()[0]).abs() < 1e-15);
        assert!((r.params().last().unwrap() - TAU).abs() < 1e-12);
        for t in r.tangents() {
            assert!((t.norm() - 1.0).abs() < 1e-6);
        }
        // chord speed is also unit up to the chord/arc defect
        for w in r.points().windows(2) {
            let h = TAU / 1000.0;
            assert!(((w[1] - w[0]).norm() / h - 1.0).abs() < 1e-6);
        }
        for p in r.points() {
            assert!((p.norm() - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn unit_speed_line_is_unchanged() {
        let c = sample(&sources::line(Vec2::new(0.5, -1.0), Vec2::new(0.6, 0.8), 0.0, 3.0), 301).unwrap();
        let r = arclength_reparametrize(&c).unwrap();
        for (a, b) in c.points().iter().zip(r.points()) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn parabola_length_closed_form() {
        let src = FnCurve::new(0.0, 1.0, |t| Vec2::new(t, t * t)).with_derivative(|t| Vec2::new(1.0, 2.0 * t));
        let c = sample(&src, 2001).unwrap();
        let r = arclength_reparametrize(&c).unwrap();
        let exact = 5.0_f64.sqrt() / 2.0 + 2.0_f64.asinh() / 4.0;
        assert!((r.params().last().unwrap() - exact).abs() < 1e-6);
        assert!((c.length() - exact).abs() / exact < 1e-6);
    }

    #[test]
    fn arclength_is_idempotent() {
        let c = sample(&sources::cubic_graph(-1.5, 1.5), 800).unwrap();
        let once = arclength_reparametrize(&c).unwrap();
        let twice = arclength_reparametrize(&once).unwrap();
        for (a, b) in once.points().iter().zip(twice.points()) {
            assert!((*a - *b).norm() < 1e-9);
        }
    }

    #[test]
    fn unit_circle_turning_angle() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 200).unwrap();
        let rho = turning_angle(&c).unwrap();
        for (t, r) in c.params().iter().zip(&rho.angles) {
            assert!((r - (t + FRAC_PI_2)).abs() < 1e-12);
        }
        for i in 0..c.len() {
            assert!((rho.unit(i) - c.tangents()[i].normalized()).norm() < 1e-9);
        }
    }

    #[test]
    fn line_turning_angle_is_constant() {
        let a = 2.5;
        let c = sample(&sources::line(Vec2::ZERO, Vec2::from_angle(a), 0.0, 1.0), 10).unwrap();
        let rho = turning_angle(&c).unwrap();
        assert!(rho.angles.iter().all(|r| (r - a).abs() < 1e-15));
    }

    #[test]
    fn double_circle_winds_twice() {
        let c = sample(&sources::circle(1.0, 0.0, 2.0 * TAU), 400).unwrap();
        let rho = turning_angle(&c).unwrap();
        assert!((rho.total() - 2.0 * TAU).abs() < 1e-9);
        let steps = rho.angles.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
        assert!(steps < PI);
    }

    #[test]
    fn coarse_sampling_fails_to_unwrap() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 3).unwrap();
        assert!(matches!(turning_angle(&c), Err(GeomError::UnwrapFailure { index: 1, .. })));
    }

    #[test]
    fn circle_curvatures() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 100).unwrap();
        assert!(curvature(&c).iter().all(|k| (k - 1.0).abs() < 1e-12));
        let l = sample(&sources::line(Vec2::ZERO, Vec2::new(1.0, 2.0), 0.0, 1.0), 10).unwrap();
        assert!(curvature(&l).iter().all(|k| k.abs() < 1e-15));
    }

    #[test]
    fn clockwise_circle_curvature_matches_turning_rate() {
        let r = 0.7;
        let c = sample(&sources::circle_clockwise(r, 0.0, TAU), 2000).unwrap();
        let kappa = curvature(&c);
        // oracle: dρ/dt / |α'| by central differences of the unwrapped angle
        let rho = turning_angle(&c).unwrap().angles;
        let t = c.params();
        for i in 1..c.len() - 1 {
            let drho = (rho[i + 1] - rho[i - 1]) / (t[i + 1] - t[i - 1]);
            let fd = drho / c.tangents()[i].norm();
            assert!((fd - kappa[i]).abs() < 1e-9);
            assert!((kappa[i] + 1.0 / r).abs() < 1e-12);
        }
    }

    #[test]
    fn curvature_from_points_only() {
        let src = sources::circle(2.0, 0.0, PI);
        let exact = sample(&src, 400).unwrap();
        let c = SampledCurve::from_points(exact.params().to_vec(), exact.points().to_vec()).unwrap();
        assert!(curvature(&c).iter().all(|k| (k - 0.5).abs() < 1e-7));
    }

    #[test]
    fn rotation_examples() {
        let c = sample(&sources::cubic_graph(-1.0, 1.0), 50).unwrap();
        assert_eq!(rotate(&c, 0.0), c);
        let p = SampledCurve::new(vec![0.0, 1.0], vec![Vec2::new(1.0, 0.0); 2], vec![Vec2::new(1.0, 0.0); 2], None).unwrap();
        let q = rotate(&p, FRAC_PI_2);
        assert!((q.points()[0] - Vec2::new(0.0, -1.0)).norm() < 1e-15);
        let twice = rotate(&rotate(&c, 0.4), 0.4);
        let once = rotate(&c, 0.8);
        for (a, b) in twice.points().iter().zip(once.points()) {
            assert!((*a - *b).norm() < 1e-12);
        }
    }

    #[test]
    fn reverse_is_an_involution() {
        let c = sample(&sources::cubic_graph(-1.0, 1.3), 50).unwrap();
        assert_eq!(reverse(&reverse(&c)), c);
        let r = reverse(&c);
        assert_eq!(r.params()[0], -1.3);
        assert_eq!(r.points()[0], *c.points().last().unwrap());
    }

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(PI), PI);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }
}
