//! The Roll operator: the trace of the origin of a moving plane while the
//! curve it carries rolls without slipping along the x-axis.
//!
//! The isometry `T_t` with `T_t(α(t)) = (s(t), 0)` and `dT_t(α'/|α'|) = (1, 0)`
//! is `p ↦ A(ρ(t)) p + (s(t), 0) − A(ρ(t)) α(t)`, so
//! `Roll(α)(t) = (s(t), 0) − A(ρ(t)) α(t)`.

use crate::curve::SampledCurve;
use crate::diff::cumulative_integral;
use crate::geom::{Isometry2, Mat2, Vec2};

#[derive(Debug, Clone, PartialEq)]
pub struct RollTrace {
    pub params: Vec<f64>,
    pub points: Vec<Vec2>,
    /// Arc length of the source from its first sample.
    pub arclens: Vec<f64>,
}

fn arclengths(c: &SampledCurve) -> Vec<f64> {
    let mut s = cumulative_integral(c.params(), &c.speeds());
    // keep monotone even where the correction term overshoots on rough data
    for i in 1..s.len() {
        if s[i] < s[i - 1] {
            s[i] = s[i - 1];
        }
    }
    s
}

pub fn roll(c: &SampledCurve) -> RollTrace {
    let arclens = arclengths(c);
    let points = c
        .points()
        .iter()
        .zip(c.tangents())
        .zip(&arclens)
        .map(|((p, d), s)| {
            let rot = Mat2::rotation_from_unit(d.normalized());
            let q = rot * *p;
            Vec2::new(s - q.x, -q.y)
        })
        .collect();
    RollTrace { params: c.params().to_vec(), points, arclens }
}

/// Roll by explicit construction of each pinning isometry.
pub fn roll_oracle(c: &SampledCurve) -> RollTrace {
    let arclens = arclengths(c);
    let points = c
        .points()
        .iter()
        .zip(c.tangents())
        .zip(&arclens)
        .map(|((p, d), s)| {
            Isometry2::pinning(*p, *d, Vec2::new(*s, 0.0), Vec2::new(1.0, 0.0)).apply(Vec2::ZERO)
        })
        .collect();
    RollTrace { params: c.params().to_vec(), points, arclens }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{rotate, sample};
    use crate::sources;
    use std::f64::consts::TAU;

    #[test]
    fn rolling_circle_center() {
        let r = 1.7;
        let c = sample(&sources::rolling_circle(r, 0.0, TAU), 500).unwrap();
        let tr = roll(&c);
        for ((t, p), s) in tr.params.iter().zip(&tr.points).zip(&tr.arclens) {
            assert!((p.y - r).abs() < 1e-10);
            assert!((p.x - r * t).abs() < 1e-9);
            assert!((s - r * t).abs() < 1e-9);
        }
        assert_eq!(tr.arclens[0], 0.0);
        assert!(tr.arclens.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn first_coordinate_is_arclength_plus_offset() {
        let c = sample(&sources::cubic_graph(-1.0, 1.0), 200).unwrap();
        let tr = roll(&c);
        let o = roll_oracle(&c);
        for (a, b) in tr.points.iter().zip(&o.points) {
            assert!((*a - *b).norm() < 1e-9);
        }
    }

    #[test]
    fn rotating_source_does_not_change_trace() {
        let c = sample(&sources::ellipse_focus(2.0, 1.0, 0.0, TAU), 400).unwrap();
        let a = roll(&c);
        let b = roll(&rotate(&c, 0.83));
        for (p, q) in a.points.iter().zip(&b.points) {
            assert!((*p - *q).norm() < 1e-12);
        }
    }
}
