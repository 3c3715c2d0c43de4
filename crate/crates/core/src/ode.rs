//! Fixed-step classical Runge–Kutta.

/// One RK4 step of `y' = f(s, y)` from `s` with step `h`.
pub fn rk4_step<const N: usize, F>(f: &F, s: f64, y: [f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let axpy = |y: &[f64; N], k: &[f64; N], a: f64| -> [f64; N] {
        let mut out = *y;
        for i in 0..N {
            out[i] += a * k[i];
        }
        out
    };
    let k1 = f(s, &y);
    let k2 = f(s + 0.5 * h, &axpy(&y, &k1, 0.5 * h));
    let k3 = f(s + 0.5 * h, &axpy(&y, &k2, 0.5 * h));
    let k4 = f(s + h, &axpy(&y, &k3, h));
    let mut out = y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Integrates over the given grid (any direction, any spacing), returning
/// the state at every grid point. `y0` is the state at `grid[0]`.
pub fn rk4_on_grid<const N: usize, F>(f: &F, grid: &[f64], y0: [f64; N]) -> Vec<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y);
    for w in grid.windows(2) {
        y = rk4_step(f, w[0], y, w[1] - w[0]);
        out.push(y);
    }
    out
}
