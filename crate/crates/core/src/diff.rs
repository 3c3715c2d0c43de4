//! Finite differences and cumulative quadrature on (possibly non-uniform)
//! one-dimensional grids.
//!
//! Derivative stencils come from Fornberg's recursion. Interior samples use a
//! centered five-point stencil; the two samples nearest each end use a
//! six-point one-sided stencil so that second derivatives keep fourth order.

use crate::geom::Vec2;

const CENTERED_WIDTH: usize = 5;
const ONE_SIDED_WIDTH: usize = 6;

/// Fornberg weights: `w[k][j]` is the weight of `nodes[j]` in the `k`-th
/// derivative at `x0`, for `k = 0..=max_order`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Index range of the stencil used at sample `i` of an `n`-point grid.
fn stencil(i: usize, n: usize) -> std::ops::Range<usize> {
    if n <= CENTERED_WIDTH {
        return 0..n;
    }
    let half = CENTERED_WIDTH / 2;
    if i >= half && i + half < n {
        return i - half..i + half + 1;
    }
    let width = ONE_SIDED_WIDTH.min(n);
    if i < half {
        0..width
    } else {
        n - width..n
    }
}

/// Precomputed derivative weights for one grid, reusable across fields.
#[derive(Debug, Clone)]
pub struct GridStencils {
    ranges: Vec<std::ops::Range<usize>>,
    first: Vec<Vec<f64>>,
    second: Vec<Vec<f64>>,
}

impl GridStencils {
    pub fn new(params: &[f64]) -> Self {
        let n = params.len();
        assert!(n >= 2, "finite differences need at least two samples");
        let mut ranges = Vec::with_capacity(n);
        let mut first = Vec::with_capacity(n);
        let mut second = Vec::with_capacity(n);
        for i in 0..n {
            let r = stencil(i, n);
            let w = fornberg_weights(params[i], &params[r.clone()], 2);
            first.push(w[1].clone());
            second.push(w[2].clone());
            ranges.push(r);
        }
        GridStencils { ranges, first, second }
    }

    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    fn apply<T>(&self, weights: &[Vec<f64>], values: &[T], zero: T) -> Vec<T>
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        assert_eq!(values.len(), self.len(), "grid/value length mismatch");
        self.ranges
            .iter()
            .zip(weights)
            .map(|(r, w)| {
                values[r.clone()]
                    .iter()
                    .zip(w)
                    .fold(zero, |acc, (&v, &wj)| acc + v * wj)
            })
            .collect()
    }

    pub fn d1(&self, values: &[f64]) -> Vec<f64> {
        self.apply(&self.first, values, 0.0)
    }

    pub fn d2(&self, values: &[f64]) -> Vec<f64> {
        self.apply(&self.second, values, 0.0)
    }

    pub fn d1_vec(&self, values: &[Vec2]) -> Vec<Vec2> {
        self.apply(&self.first, values, Vec2::ZERO)
    }

    pub fn d2_vec(&self, values: &[Vec2]) -> Vec<Vec2> {
        self.apply(&self.second, values, Vec2::ZERO)
    }
}

pub fn derivative(params: &[f64], values: &[f64]) -> Vec<f64> {
    GridStencils::new(params).d1(values)
}

/// Cumulative trapezoid rule, starting from 0 at the first sample.
pub fn cumulative_trapezoid(params: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(acc);
    for i in 1..values.len() {
        acc += 0.5 * (params[i] - params[i - 1]) * (values[i] + values[i - 1]);
        out.push(acc);
    }
    out
}

/// Cumulative integral starting from 0 at the first sample: trapezoid rule
/// with the per-interval endpoint-derivative correction
/// `h²/12 (f'(t_i) − f'(t_{i+1}))`, i.e. exact integration of the cubic
/// Hermite interpolant. Fourth order on smooth data.
pub fn cumulative_integral(params: &[f64], values: &[f64]) -> Vec<f64> {
    if values.len() < 3 {
        return cumulative_trapezoid(params, values);
    }
    let slopes = derivative(params, values);
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(acc);
    for i in 1..values.len() {
        let h = params[i] - params[i - 1];
        acc += 0.5 * h * (values[i] + values[i - 1]) + h * h / 12.0 * (slopes[i - 1] - slopes[i]);
        out.push(acc);
    }
    out
}
