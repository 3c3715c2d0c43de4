//! Small fixed-size linear algebra used throughout the crate.
//!
//! Rotations follow the clockwise convention
//!
//! ```text
//! A(τ) = [ cos τ   sin τ ]
//!        [-sin τ   cos τ ]
//! ```
//!
//! so that `A(τ₁)A(τ₂) = A(τ₁+τ₂)`, `A(ρ)` maps the unit vector at angle `ρ`
//! to `(1, 0)`, and `dA/dτ = -A(τ)J` with `J` the counterclockwise quarter
//! turn. Multiplying a point by the complex number `e^{iφ}` is `A(-φ)`.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector at angle `angle`, measured counterclockwise from +x.
    #[inline]
    pub fn from_angle(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Vec2 { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// `J v`, the counterclockwise quarter turn.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2 { x: -self.y, y: self.x }
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn normalized(self) -> Vec2 {
        self / self.norm()
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

/// Row-major 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Counterclockwise quarter turn `[[0, -1], [1, 0]]`.
    pub const J: Mat2 = Mat2 { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    /// `A(τ)`, clockwise rotation by `τ`.
    #[inline]
    pub fn rotation(tau: f64) -> Self {
        let (s, c) = tau.sin_cos();
        Mat2 { a: c, b: s, c: -s, d: c }
    }

    /// `A(ρ)` written directly in terms of the unit vector `(cos ρ, sin ρ)`.
    #[inline]
    pub fn rotation_from_unit(u: Vec2) -> Self {
        Mat2 { a: u.x, b: u.y, c: -u.y, d: u.x }
    }

    #[inline]
    pub fn apply(&self, v: Vec2) -> Vec2 {
        Vec2::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        [
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        ]
        .iter()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2 {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl Mul<Vec2> for Mat2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        self.apply(v)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: f64) -> Mat2 {
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

/// Orientation-preserving rigid motion of the plane, `p ↦ R(angle) p + translation`,
/// with `R` the usual counterclockwise rotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry2 {
    pub angle: f64,
    pub translation: Vec2,
}

impl Isometry2 {
    pub const IDENTITY: Isometry2 = Isometry2 { angle: 0.0, translation: Vec2::ZERO };

    pub fn new(angle: f64, translation: Vec2) -> Self {
        Isometry2 { angle, translation }
    }

    /// The unique oriented isometry sending `point` to `target` and the unit
    /// vector `dir` to `target_dir` (both directions need not be normalized).
    pub fn pinning(point: Vec2, dir: Vec2, target: Vec2, target_dir: Vec2) -> Self {
        let angle = target_dir.angle() - dir.angle();
        let rotated = Self::rotate_ccw(angle, point);
        Isometry2 { angle, translation: target - rotated }
    }

    fn rotate_ccw(angle: f64, p: Vec2) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y)
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        Self::rotate_ccw(self.angle, p) + self.translation
    }

    /// Differential of the motion (a pure rotation).
    pub fn apply_vector(&self, v: Vec2) -> Vec2 {
        Self::rotate_ccw(self.angle, v)
    }

    pub fn compose(&self, other: &Isometry2) -> Isometry2 {
        Isometry2 {
            angle: self.angle + other.angle,
            translation: self.apply(other.translation),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Least-squares angle `τ` minimizing `Σ |A(τ) from_i − to_i|²`, together
/// with the largest pointwise residual at that angle.
pub fn fit_rotation(from: &[Vec2], to: &[Vec2]) -> (f64, f64) {
    assert_eq!(from.len(), to.len(), "fit_rotation: length mismatch");
    let (mut c, mut s) = (0.0, 0.0);
    for (a, b) in from.iter().zip(to) {
        c += a.dot(*b);
        s += b.x * a.y - b.y * a.x;
    }
    let tau = s.atan2(c);
    let rot = Mat2::rotation(tau);
    let residual = from
        .iter()
        .zip(to)
        .map(|(a, b)| (rot * *a - *b).norm())
        .fold(0.0, f64::max);
    (tau, residual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn quarter_turn_is_clockwise() {
        let v = Mat2::rotation(FRAC_PI_2) * Vec2::new(1.0, 0.0);
        assert!((v - Vec2::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_of_unit_tangent_is_horizontal() {
        for k in 0..12 {
            let rho = -PI + k as f64 * 0.55;
            let u = Vec2::from_angle(rho);
            let v = Mat2::rotation(rho) * u;
            assert!((v - Vec2::new(1.0, 0.0)).norm() < 1e-15);
            assert!(Mat2::rotation(rho).max_abs_diff(&Mat2::rotation_from_unit(u)) < 1e-15);
        }
    }

    #[test]
    fn complex_multiplication_is_negative_angle() {
        // e^{iφ}(x + iy) == A(-φ)(x, y)
        let phi: f64 = 0.7;
        let p = Vec2::new(0.3, -1.2);
        let (s, c) = phi.sin_cos();
        let expect = Vec2::new(c * p.x - s * p.y, s * p.x + c * p.y);
        assert!((Mat2::rotation(-phi) * p - expect).norm() < 1e-15);
    }

    #[test]
    fn pinning_isometry_hits_targets() {
        let iso = Isometry2::pinning(
            Vec2::new(2.0, 1.0),
            Vec2::new(-1.0, 3.0),
            Vec2::new(0.5, 0.0),
            Vec2::new(1.0, 0.0),
        );
        assert!((iso.apply(Vec2::new(2.0, 1.0)) - Vec2::new(0.5, 0.0)).norm() < 1e-14);
        let d = iso.apply_vector(Vec2::new(-1.0, 3.0).normalized());
        assert!((d - Vec2::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fit_rotation_recovers_angle() {
        let pts: Vec<Vec2> = (0..10).map(|i| Vec2::new(i as f64, (i * i) as f64 * 0.1 - 1.0)).collect();
        let rot = Mat2::rotation(1.234);
        let moved: Vec<Vec2> = pts.iter().map(|p| rot * *p).collect();
        let (tau, res) = fit_rotation(&pts, &moved);
        assert!((tau - 1.234).abs() < 1e-12);
        assert!(res < 1e-12);
    }
}
