//! Analytic test curves.

use rand::Rng;

use crate::curve::CurveSource;
use crate::geom::Vec2;

type CurveFn = Box<dyn Fn(f64) -> Vec2 + Send + Sync>;

/// Curve given by closures; derivative closures are optional.
pub struct FnCurve {
    a: f64,
    b: f64,
    pos: CurveFn,
    d1: Option<CurveFn>,
    d2: Option<CurveFn>,
}

impl FnCurve {
    pub fn new(a: f64, b: f64, pos: impl Fn(f64) -> Vec2 + Send + Sync + 'static) -> Self {
        FnCurve { a, b, pos: Box::new(pos), d1: None, d2: None }
    }

    pub fn with_derivative(mut self, d1: impl Fn(f64) -> Vec2 + Send + Sync + 'static) -> Self {
        self.d1 = Some(Box::new(d1));
        self
    }

    pub fn with_second_derivative(mut self, d2: impl Fn(f64) -> Vec2 + Send + Sync + 'static) -> Self {
        self.d2 = Some(Box::new(d2));
        self
    }
}

impl CurveSource for FnCurve {
    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn position(&self, t: f64) -> Vec2 {
        (self.pos)(t)
    }
    fn derivative(&self, t: f64) -> Option<Vec2> {
        self.d1.as_ref().map(|f| f(t))
    }
    fn second_derivative(&self, t: f64) -> Option<Vec2> {
        self.d2.as_ref().map(|f| f(t))
    }
}

/// `r (cos t, sin t)`, counterclockwise about the origin.
pub fn circle(r: f64, a: f64, b: f64) -> FnCurve {
    FnCurve::new(a, b, move |t| Vec2::new(r * t.cos(), r * t.sin()))
        .with_derivative(move |t| Vec2::new(-r * t.sin(), r * t.cos()))
        .with_second_derivative(move |t| Vec2::new(-r * t.cos(), -r * t.sin()))
}

/// `r (cos t, −sin t)`, clockwise about the origin.
pub fn circle_clockwise(r: f64, a: f64, b: f64) -> FnCurve {
    FnCurve::new(a, b, move |t| Vec2::new(r * t.cos(), -r * t.sin()))
        .with_derivative(move |t| Vec2::new(-r * t.sin(), -r * t.cos()))
        .with_second_derivative(move |t| Vec2::new(-r * t.cos(), r * t.sin()))
}

/// `r (sin t, −cos t)`: the circle whose tangent angle equals `t`.
pub fn rolling_circle(r: f64, a: f64, b: f64) -> FnCurve {
    FnCurve::new(a, b, move |t| Vec2::new(r * t.sin(), -r * t.cos()))
        .with_derivative(move |t| Vec2::new(r * t.cos(), r * t.sin()))
        .with_second_derivative(move |t| Vec2::new(-r * t.sin(), r * t.cos()))
}

/// `origin + t·dir`.
pub fn line(origin: Vec2, dir: Vec2, a: f64, b: f64) -> FnCurve {
    FnCurve::new(a, b, move |t| origin + dir * t)
        .with_derivative(move |_| dir)
        .with_second_derivative(|_| Vec2::ZERO)
}

/// Graph of `t³ − t`.
pub fn cubic_graph(a: f64, b: f64) -> FnCurve {
    FnCurve::new(a, b, |t| Vec2::new(t, t * t * t - t))
        .with_derivative(|t| Vec2::new(1.0, 3.0 * t * t - 1.0))
        .with_second_derivative(|t| Vec2::new(0.0, 6.0 * t))
}

/// Parabola `y = x²/(4p) − p`, whose focus is the origin.
pub fn parabola_focus(p: f64, a: f64, b: f64) -> FnCurve {
    FnCurve::new(a, b, move |t| Vec2::new(t, t * t / (4.0 * p) - p))
        .with_derivative(move |t| Vec2::new(1.0, t / (2.0 * p)))
        .with_second_derivative(move |_| Vec2::new(0.0, 1.0 / (2.0 * p)))
}

/// Ellipse with semi-axes `a ≥ b`, translated so its right focus is the origin.
pub fn ellipse_focus(a: f64, b: f64, t0: f64, t1: f64) -> FnCurve {
    let c = (a * a - b * b).sqrt();
    FnCurve::new(t0, t1, move |t| Vec2::new(a * t.cos() - c, b * t.sin()))
        .with_derivative(move |t| Vec2::new(-a * t.sin(), b * t.cos()))
        .with_second_derivative(move |t| Vec2::new(-a * t.cos(), -b * t.sin()))
}

/// A rotated, translated graph `(t, Σ b_k sin(k t + φ_k))` with analytic
/// derivatives. Graphs are regular by construction (`x' = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct RandomCurve {
    pub a: f64,
    pub b: f64,
    pub offset: Vec2,
    pub heading: f64,
    pub amplitudes: [f64; 3],
    pub phases: [f64; 3],
}

impl RandomCurve {
    pub fn generate<R: Rng + ?Sized>(rng: &mut R) -> Self {
        RandomCurve {
            a: -1.5,
            b: 1.5,
            offset: Vec2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)),
            heading: rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
            amplitudes: [rng.gen_range(-0.4..0.4), rng.gen_range(-0.3..0.3), rng.gen_range(-0.2..0.2)],
            phases: [rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3), rng.gen_range(0.0..6.3)],
        }
    }

    fn place(&self, v: Vec2) -> Vec2 {
        let (s, c) = self.heading.sin_cos();
        Vec2::new(c * v.x - s * v.y, s * v.x + c * v.y)
    }

    fn graph(&self, t: f64, order: i32) -> f64 {
        self.amplitudes
            .iter()
            .zip(&self.phases)
            .enumerate()
            .map(|(i, (b, ph))| {
                let k = (i + 1) as f64;
                let arg = k * t + ph;
                match order {
                    0 => b * arg.sin(),
                    1 => b * k * arg.cos(),
                    _ => -b * k * k * arg.sin(),
                }
            })
            .sum()
    }
}

impl CurveSource for RandomCurve {
    fn domain(&self) -> (f64, f64) {
        (self.a, self.b)
    }
    fn position(&self, t: f64) -> Vec2 {
        self.offset + self.place(Vec2::new(t, self.graph(t, 0)))
    }
    fn derivative(&self, t: f64) -> Option<Vec2> {
        Some(self.place(Vec2::new(1.0, self.graph(t, 1))))
    }
    fn second_derivative(&self, t: f64) -> Option<Vec2> {
        Some(self.place(Vec2::new(0.0, self.graph(t, 2))))
    }
}
