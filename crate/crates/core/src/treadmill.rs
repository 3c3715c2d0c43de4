//! The TreadmillSled operator and its φ-generalization.
//!
//! For a regular curve `α`, `TS(α)(s)` is the image of the origin under the
//! oriented isometry `T_s` with `T_s(α(s)) = 0` and `dT_s(α'/|α'|) = (1, 0)`.
//! In closed form
//!
//! ```text
//! TS(α) = (−x'x − y'y, x y' − y x') / |α'|  =  −A(ρ) α
//! ```
//!
//! and the φ-version, which pins the tangent to `(cos φ, sin φ)` instead,
//! is `A(ρ − φ + π) α = e^{iφ} TS(α)` under `(x, y) ↔ x + iy`.

use crate::curve::{curvature, turning_angle, SampledCurve};
use crate::diff::{cumulative_integral, GridStencils};
use crate::error::{invalid, Result};
use crate::geom::{Isometry2, Mat2, Vec2};

pub use crate::curve::reverse;

/// Default tolerance for "z = 0" (the point lies on the vertical axis).
pub const DEFAULT_EPS_AXIS: f64 = 1e-9;

/// A TreadmillSled image `γ = (z, w)`, or a candidate for one.
#[derive(Debug, Clone, PartialEq)]
pub struct TSCurve {
    params: Vec<f64>,
    zw: Vec<Vec2>,
    source_speed: Option<Vec<f64>>,
}

impl TSCurve {
    pub fn new(params: Vec<f64>, zw: Vec<Vec2>) -> Result<Self> {
        if params.len() != zw.len() {
            return Err(invalid("params and points must have the same length"));
        }
        if params.len() < 2 {
            return Err(invalid("a TS curve needs at least 2 samples"));
        }
        if let Some(i) = params.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(invalid(format!("parameters must be strictly increasing (sample {})", i + 1)));
        }
        if let Some(i) = zw.iter().position(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(invalid(format!("non-finite point at sample {i}")));
        }
        Ok(TSCurve { params, zw, source_speed: None })
    }

    pub fn with_source_speed(mut self, speed: Vec<f64>) -> Result<Self> {
        if speed.len() != self.params.len() {
            return Err(invalid("source speed length mismatch"));
        }
        self.source_speed = Some(speed);
        Ok(self)
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
        &self.zw
    }

    pub fn z(&self) -> Vec<f64> {
        self.zw.iter().map(|p| p.x).collect()
    }

    pub fn w(&self) -> Vec<f64> {
        self.zw.iter().map(|p| p.y).collect()
    }

    /// `|α'|` of the curve this image was computed from, when known.
    pub fn source_speed(&self) -> Option<&[f64]> {
        self.source_speed.as_deref()
    }

    /// Largest `|w'|` over samples with `|z| ≤ eps_axis`, relative to the
    /// local `|z'| + 1`. TreadmillSleds cross the vertical axis horizontally,
    /// so this is small for genuine images.
    pub fn axis_crossing_slope(&self, eps_axis: f64) -> f64 {
        let st = GridStencils::new(&self.params);
        let d = st.d1_vec(&self.zw);
        self.zw
            .iter()
            .zip(&d)
            .filter(|(p, _)| p.x.abs() <= eps_axis)
            .map(|(_, dv)| dv.y.abs() / (dv.x.abs() + 1.0))
            .fold(0.0, f64::max)
    }

    pub fn negate(&self) -> TSCurve {
        TSCurve {
            params: self.params.clone(),
            zw: self.zw.iter().map(|p| -*p).collect(),
            source_speed: self.source_speed.clone(),
        }
    }
}

/// `A(ρ + π) α` written with the unit tangent, shared by `ts` and `phi_ts`.
#[inline]
fn sled_point(p: Vec2, d: Vec2) -> (Vec2, f64) {
    let speed = d.norm();
    let zw = Vec2::new(-d.x * p.x - d.y * p.y, p.x * d.y - p.y * d.x) / speed;
    (zw, speed)
}

pub fn ts(c: &SampledCurve) -> TSCurve {
    let (zw, speed): (Vec<Vec2>, Vec<f64>) = c
        .points()
        .iter()
        .zip(c.tangents())
        .map(|(p, d)| sled_point(*p, *d))
        .unzip();
    TSCurve { params: c.params().to_vec(), zw, source_speed: Some(speed) }
}

/// TS by explicit construction of the pinning isometry at every sample.
/// Independent of the closed form; used to cross-check `ts`.
pub fn ts_oracle(c: &SampledCurve) -> TSCurve {
    let zw = c
        .points()
        .iter()
        .zip(c.tangents())
        .map(|(p, d)| {
            let iso = Isometry2::pinning(*p, *d, Vec2::ZERO, Vec2::new(1.0, 0.0));
            debug_assert!(iso.apply(*p).norm() < 1e-9 * (1.0 + p.norm()));
            iso.apply(Vec2::ZERO)
        })
        .collect();
    TSCurve { params: c.params().to_vec(), zw, source_speed: Some(c.speeds()) }
}

/// φ-TreadmillSled `β = A(ρ − φ + π) α`, evaluated as `A(−φ) · A(ρ + π) α`.
pub fn phi_ts(c: &SampledCurve, phi: &[f64]) -> Result<TSCurve> {
    if phi.len() != c.len() {
        return Err(invalid(format!("phi has {} values for {} samples", phi.len(), c.len())));
    }
    let (zw, speed): (Vec<Vec2>, Vec<f64>) = c
        .points()
        .iter()
        .zip(c.tangents())
        .zip(phi)
        .map(|((p, d), &f)| {
            let (q, speed) = sled_point(*p, *d);
            (Mat2::rotation(-f) * q, speed)
        })
        .unzip();
    Ok(TSCurve { params: c.params().to_vec(), zw, source_speed: Some(speed) })
}

/// Treadmill inclination `φ(t) = ∫ₐᵗ κ|α'| + ρ₀ + g(t) + π` for which
/// `φ-TS(α) = e^{i g} α`.
pub fn treadmill_program(c: &SampledCurve, g: &[f64]) -> Result<Vec<f64>> {
    if g.len() != c.len() {
        return Err(invalid(format!("g has {} values for {} samples", g.len(), c.len())));
    }
    let rate: Vec<f64> = curvature(c).iter().zip(c.speeds()).map(|(k, v)| k * v).collect();
    let turned = cumulative_integral(c.params(), &rate);
    let rho0 = c.tangents()[0].angle();
    Ok(turned
        .iter()
        .zip(g)
        .map(|(i, gi)| i + rho0 + gi + std::f64::consts::PI)
        .collect())
}

/// `TS(α) = −A(ρ) α` with `ρ` the unwrapped turning angle. On unit-speed
/// curves this is the same as `z = −⟨α, α'⟩`, `w = ⟨α', Jα⟩`.
pub fn ts_via_turning_angle(c: &SampledCurve) -> Result<TSCurve> {
    let rho = turning_angle(c)?;
    let zw = c
        .points()
        .iter()
        .zip(&rho.angles)
        .map(|(p, r)| -(Mat2::rotation(*r) * *p))
        .collect();
    Ok(TSCurve { params: c.params().to_vec(), zw, source_speed: Some(c.speeds()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{rotate, sample};
    use crate::sources::{self, RandomCurve};
    use rand::SeedableRng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn max_dist(a: &[Vec2], b: &[Vec2]) -> f64 {
        a.iter().zip(b).map(|(p, q)| (*p - *q).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn unit_circle_is_a_point() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 257).unwrap();
        let g = ts(&c);
        assert!(g.points().iter().all(|p| (*p - Vec2::new(0.0, 1.0)).norm() < 1e-12));
        let o = ts_oracle(&c);
        assert!(max_dist(g.points(), o.points()) < 1e-12);
    }

    #[test]
    fn line_maps_to_negative_axis() {
        let c = sample(&sources::line(Vec2::ZERO, Vec2::new(1.0, 0.0), 1.0, 2.0), 11).unwrap();
        let g = ts(&c);
        for (t, p) in c.params().iter().zip(g.points()) {
            assert_eq!(*p, Vec2::new(-t, 0.0));
        }
        // same line direction through the origin at an angle
        let a = 0.9;
        let c = sample(&sources::line(Vec2::ZERO, Vec2::from_angle(a), 0.5, 2.0), 11).unwrap();
        let o = ts_oracle(&c);
        for (t, p) in c.params().iter().zip(o.points()) {
            assert!((*p - Vec2::new(-t, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn oracle_agrees_on_random_curves() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let c = sample(&RandomCurve::generate(&mut rng), 300).unwrap();
            assert!(max_dist(ts(&c).points(), ts_oracle(&c).points()) < 1e-9);
        }
        let c = sample(&sources::cubic_graph(-1.5, 1.5), 601).unwrap();
        assert!(max_dist(ts(&c).points(), ts_oracle(&c).points()) < 1e-9);
    }

    #[test]
    fn phi_zero_is_ts() {
        let c = sample(&sources::cubic_graph(-1.5, 1.5), 101).unwrap();
        assert_eq!(phi_ts(&c, &vec![0.0; 101]).unwrap().points(), ts(&c).points());
        assert!(phi_ts(&c, &[0.0; 3]).is_err());
    }

    #[test]
    fn quarter_inclination_on_unit_circle() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 64).unwrap();
        let b = phi_ts(&c, &vec![FRAC_PI_2; 64]).unwrap();
        assert!(b.points().iter().all(|p| (*p - Vec2::new(-1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn program_reproduces_the_curve() {
        let n = 1000;
        let c = sample(&sources::circle(1.0, 0.0, TAU), n).unwrap();
        let phi = treadmill_program(&c, &vec![0.0; n]).unwrap();
        for (t, f) in c.params().iter().zip(&phi) {
            assert!((f - (t + FRAC_PI_2 + PI)).abs() < 1e-9);
        }
        let b = phi_ts(&c, &phi).unwrap();
        assert!(max_dist(b.points(), c.points()) < 1e-9);
    }

    #[test]
    fn program_with_half_turn_negates() {
        let n = 200;
        let c = sample(&sources::line(Vec2::ZERO, Vec2::from_angle(0.3), 0.2, 3.0), n).unwrap();
        let phi = treadmill_program(&c, &vec![PI; n]).unwrap();
        let b = phi_ts(&c, &phi).unwrap();
        for (p, q) in b.points().iter().zip(c.points()) {
            assert!((*p + *q).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let c = sample(&RandomCurve::generate(&mut rng), 100).unwrap();
        let r = rotate(&c, 2.1);
        assert!(max_dist(ts(&c).points(), ts(&r).points()) < 1e-12);
    }

    #[test]
    fn reversal_negates() {
        let c = sample(&sources::circle(1.0, 0.0, TAU), 40).unwrap();
        let g = ts(&reverse(&c));
        assert!(g.points().iter().all(|p| (*p - Vec2::new(0.0, -1.0)).norm() < 1e-12));
    }

    #[test]
    fn turning_angle_form_agrees() {
        let c = sample(&sources::cubic_graph(-1.5, 1.5), 301).unwrap();
        let a = ts(&c);
        let b = ts_via_turning_angle(&c).unwrap();
        assert!(max_dist(a.points(), b.points()) < 1e-12);
    }

    #[test]
    fn ts_curve_validation() {
        assert!(TSCurve::new(vec![0.0, 0.0], vec![Vec2::ZERO; 2]).is_err());
        assert!(TSCurve::new(vec![0.0], vec![Vec2::ZERO]).is_err());
        assert!(TSCurve::new(vec![0.0, 1.0], vec![Vec2::ZERO]).is_err());
    }
}
