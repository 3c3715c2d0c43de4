//! Helicoidal surfaces generated by a profile curve `α = (x, z)`:
//!
//! ```text
//! φ(s, t) = (x cos wt + z sin wt,  t,  −x sin wt + z cos wt)
//! ```
//!
//! Curvatures are available two ways: in closed form from the TreadmillSled
//! `(ξ₁, ξ₂)` of the profile and its turning rate `θ'`, and by finite
//! differences on a sampled mesh. Both use the unit normal
//!
//! ```text
//! ν = (sin(wt − θ), −w ξ₁, cos(wt − θ)) / √(1 + w² ξ₁²)
//! ```
//!
//! which coincides with `φ_s × φ_t / |φ_s × φ_t|`. Flipping `ν` flips `H`.

use crate::curve::{curvature, turning_angle, SampledCurve};
use crate::diff::fornberg_weights;
use crate::error::{invalid, GeomError, Result};
use crate::geom::Vec3;
use crate::treadmill::{ts, TSCurve};

/// Pitch of the screw motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HelicoidalParams {
    w: f64,
}

impl HelicoidalParams {
    pub fn new(w: f64) -> Result<Self> {
        if !(w > 0.0 && w.is_finite()) {
            return Err(invalid(format!("pitch w must be positive, got {w}")));
        }
        Ok(HelicoidalParams { w })
    }

    pub fn w(&self) -> f64 {
        self.w
    }
}

/// Grid of surface points indexed `[i_s][j_t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceMesh {
    pub s_params: Vec<f64>,
    pub t_params: Vec<f64>,
    pub points: Vec<Vec<Vec3>>,
    pub normals: Option<Vec<Vec<Vec3>>>,
}

impl SurfaceMesh {
    pub fn ns(&self) -> usize {
        self.s_params.len()
    }

    pub fn nt(&self) -> usize {
        self.t_params.len()
    }
}

/// First (`E, F, G`) and second (`e, f, g`) fundamental forms, per profile sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FundForms {
    pub first_e: Vec<f64>,
    pub first_f: Vec<f64>,
    pub first_g: Vec<f64>,
    pub second_e: Vec<f64>,
    pub second_f: Vec<f64>,
    pub second_g: Vec<f64>,
}

/// Forms at a single mesh node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeForms {
    pub first_e: f64,
    pub first_f: f64,
    pub first_g: f64,
    pub second_e: f64,
    pub second_f: f64,
    pub second_g: f64,
}

impl NodeForms {
    pub fn det(&self) -> f64 {
        self.first_e * self.first_g - self.first_f * self.first_f
    }

    pub fn mean_curvature(&self) -> f64 {
        (self.second_e * self.first_g - 2.0 * self.second_f * self.first_f + self.second_g * self.first_e)
            / (2.0 * self.det())
    }

    pub fn gauss_curvature(&self) -> f64 {
        (self.second_e * self.second_g - self.second_f * self.second_f) / self.det()
    }
}

impl FundForms {
    pub fn len(&self) -> usize {
        self.first_e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_e.is_empty()
    }

    pub fn node(&self, i: usize) -> NodeForms {
        NodeForms {
            first_e: self.first_e[i],
            first_f: self.first_f[i],
            first_g: self.first_g[i],
            second_e: self.second_e[i],
            second_f: self.second_f[i],
            second_g: self.second_g[i],
        }
    }

    pub fn mean_curvature(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i).mean_curvature()).collect()
    }

    pub fn gauss_curvature(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.node(i).gauss_curvature()).collect()
    }
}

#[inline]
fn screw(x: f64, z: f64, t: f64, w: f64) -> Vec3 {
    let (s, c) = (w * t).sin_cos();
    Vec3::new(x * c + z * s, t, -x * s + z * c)
}

fn t_grid(t_range: (f64, f64), nt: usize) -> Result<Vec<f64>> {
    if nt < 2 {
        return Err(invalid(format!("nt must be at least 2, got {nt}")));
    }
    let (a, b) = t_range;
    if !(b > a) {
        return Err(invalid(format!("empty t range [{a}, {b}]")));
    }
    Ok((0..nt)
        .map(|j| if j == nt - 1 { b } else { a + (b - a) * j as f64 / (nt - 1) as f64 })
        .collect())
}

pub fn immerse(profile: &SampledCurve, p: HelicoidalParams, t_range: (f64, f64), nt: usize) -> Result<SurfaceMesh> {
    let t_params = t_grid(t_range, nt)?;
    let points = profile
        .points()
        .iter()
        .map(|a| t_params.iter().map(|&t| screw(a.x, a.y, t, p.w)).collect())
        .collect();
    Ok(SurfaceMesh { s_params: profile.params().to_vec(), t_params, points, normals: None })
}

/// `immerse` with the analytic Gauss map attached.
pub fn immerse_oriented(profile: &SampledCurve, p: HelicoidalParams, t_range: (f64, f64), nt: usize) -> Result<SurfaceMesh> {
    let mut mesh = immerse(profile, p, t_range, nt)?;
    mesh.normals = Some(gauss_map(profile, p, &mesh.t_params)?);
    Ok(mesh)
}

pub fn gauss_map(profile: &SampledCurve, p: HelicoidalParams, t_params: &[f64]) -> Result<Vec<Vec<Vec3>>> {
    let theta = turning_angle(profile)?;
    let xi = ts(profile);
    let w = p.w;
    Ok(theta
        .angles
        .iter()
        .zip(xi.points())
        .map(|(th, x)| {
            let norm = (1.0 + w * w * x.x * x.x).sqrt();
            t_params
                .iter()
                .map(|t| {
                    let (s, c) = (w * t - th).sin_cos();
                    Vec3::new(s / norm, -w * x.x / norm, c / norm)
                })
                .collect()
        })
        .collect())
}

/// Closed-form fundamental forms in arc-length coordinates `(s, t)`.
/// The profile may have any regular parametrization; `θ'` is its signed
/// curvature.
pub fn fundamental_forms_analytic(profile: &SampledCurve, p: HelicoidalParams) -> FundForms {
    let xi = ts(profile);
    let dtheta = curvature(profile);
    let w = p.w;
    let n = profile.len();
    let mut forms = FundForms {
        first_e: Vec::with_capacity(n),
        first_f: Vec::with_capacity(n),
        first_g: Vec::with_capacity(n),
        second_e: Vec::with_capacity(n),
        second_f: Vec::with_capacity(n),
        second_g: Vec::with_capacity(n),
    };
    for (x, th) in xi.points().iter().zip(dtheta) {
        let (x1, x2) = (x.x, x.y);
        let root = (1.0 + w * w * x1 * x1).sqrt();
        forms.first_e.push(1.0);
        forms.first_f.push(-w * x2);
        forms.first_g.push(1.0 + w * w * (x1 * x1 + x2 * x2));
        forms.second_e.push(th / root);
        forms.second_f.push(-w / root);
        forms.second_g.push(w * w * x2 / root);
    }
    forms
}

/// `H = (−w² ξ₂ + θ'(1 + w²(ξ₁² + ξ₂²))) / (2 (1 + w² ξ₁²)^{3/2})`.
pub fn mean_curvature_analytic(profile: &SampledCurve, p: HelicoidalParams) -> Vec<f64> {
    let xi = ts(profile);
    let w = p.w;
    xi.points()
        .iter()
        .zip(curvature(profile))
        .map(|(x, th)| {
            let (x1, x2) = (x.x, x.y);
            (-w * w * x2 + th * (1.0 + w * w * (x1 * x1 + x2 * x2))) / (2.0 * (1.0 + w * w * x1 * x1).powf(1.5))
        })
        .collect()
}

/// Curvatures on the interior nodes of a mesh; boundary entries are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureGrid {
    pub s_params: Vec<f64>,
    pub t_params: Vec<f64>,
    pub mean: Vec<Vec<Option<f64>>>,
    pub gauss: Vec<Vec<Option<f64>>>,
}

impl CurvatureGrid {
    /// `(i, j, H, K)` over interior nodes.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        self.mean.iter().enumerate().flat_map(move |(i, row)| {
            row.iter().enumerate().filter_map(move |(j, h)| {
                h.and_then(|h| self.gauss[i][j].map(|k| (i, j, h, k)))
            })
        })
    }

    pub fn max_abs_mean(&self) -> f64 {
        self.interior().map(|(_, _, h, _)| h.abs()).fold(0.0, f64::max)
    }

    pub fn max_abs_gauss(&self) -> f64 {
        self.interior().map(|(_, _, _, k)| k.abs()).fold(0.0, f64::max)
    }

    /// Interior nodes whose profile parameter lies in `[lo, hi]`.
    pub fn interior_in_s(&self, lo: f64, hi: f64) -> impl Iterator<Item = (usize, usize, f64, f64)> + '_ {
        self.interior().filter(move |(i, _, _, _)| self.s_params[*i] >= lo && self.s_params[*i] <= hi)
    }
}

/// Three-point weights `(first, second)` at each interior index.
fn interior_weights(params: &[f64]) -> Vec<([f64; 3], [f64; 3])> {
    (1..params.len() - 1)
        .map(|i| {
            let w = fornberg_weights(params[i], &params[i - 1..=i + 1], 2);
            ([w[1][0], w[1][1], w[1][2]], [w[2][0], w[2][1], w[2][2]])
        })
        .collect()
}

/// Fundamental forms by second-order central differences of the mesh, on
/// interior nodes. Uses the mesh normals when present, else `φ_s × φ_t`.
pub fn fundamental_forms_fd(mesh: &SurfaceMesh) -> Result<Vec<Vec<Option<NodeForms>>>> {
    let (ns, nt) = (mesh.ns(), mesh.nt());
    if ns < 3 || nt < 3 {
        return Err(invalid(format!("mesh must be at least 3x3, got {ns}x{nt}")));
    }
    if mesh.points.len() != ns || mesh.points.iter().any(|r| r.len() != nt) {
        return Err(invalid("mesh point grid does not match its parameter arrays"));
    }
    let ws = interior_weights(&mesh.s_params);
    let wt = interior_weights(&mesh.t_params);
    let pts = &mesh.points;
    let mut out = vec![vec![None; nt]; ns];
    for i in 1..ns - 1 {
        let (s1, s2) = ws[i - 1];
        for j in 1..nt - 1 {
            let (t1, t2) = wt[j - 1];
            let mut ps = Vec3::default();
            let mut pss = Vec3::default();
            let mut pt = Vec3::default();
            let mut ptt = Vec3::default();
            let mut pst = Vec3::default();
            for a in 0..3 {
                ps = ps + pts[i + a - 1][j] * s1[a];
                pss = pss + pts[i + a - 1][j] * s2[a];
                pt = pt + pts[i][j + a - 1] * t1[a];
                ptt = ptt + pts[i][j + a - 1] * t2[a];
                for b in 0..3 {
                    pst = pst + pts[i + a - 1][j + b - 1] * (s1[a] * t1[b]);
                }
            }
            let normal = match &mesh.normals {
                Some(nrm) => nrm[i][j],
                None => ps.cross(pt).normalized(),
            };
            let forms = NodeForms {
                first_e: ps.dot(ps),
                first_f: ps.dot(pt),
                first_g: pt.dot(pt),
                second_e: pss.dot(normal),
                second_f: pst.dot(normal),
                second_g: ptt.dot(normal),
            };
            let det = forms.det();
            if !(det > 0.0) {
                return Err(GeomError::DegenerateMetric { i, j, det });
            }
            out[i][j] = Some(forms);
        }
    }
    Ok(out)
}

pub fn curvatures_fd(mesh: &SurfaceMesh) -> Result<CurvatureGrid> {
    let forms = fundamental_forms_fd(mesh)?;
    let mean = forms.iter().map(|row| row.iter().map(|f| f.map(|f| f.mean_curvature())).collect()).collect();
    let gauss = forms.iter().map(|row| row.iter().map(|f| f.map(|f| f.gauss_curvature())).collect()).collect();
    Ok(CurvatureGrid { s_params: mesh.s_params.clone(), t_params: mesh.t_params.clone(), mean, gauss })
}

/// `ξ₁² + ξ₂² − ξ₂/√(1 + w² ξ₁²) − M` per sample.
pub fn cmc_residual(ts_data: &TSCurve, p: HelicoidalParams, m: f64) -> Vec<f64> {
    let w = p.w;
    ts_data
        .points()
        .iter()
        .map(|x| x.x * x.x + x.y * x.y - x.y / (1.0 + w * w * x.x * x.x).sqrt() - m)
        .collect()
}
