use std::f64::consts::{PI, TAU};
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use log::info;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use treadmill::generators::{
    cmc_level_curve, conserved_quantity, flat_profile, flat_ts, minimal_profile, Branch, CmcSpec, FlatSpec,
    MinimalSpec,
};
use treadmill::helicoidal::{cmc_residual, curvatures_fd, immerse, immerse_oriented, mean_curvature_analytic};
use treadmill::inverse::{invert, invert_with, InverseOptions};
use treadmill::io::{self, PlotCurve};
use treadmill::{phi_ts, roll, rotate, ts, HelicoidalParams, SampledCurve};

use crate::{BranchArg, Command, GenCommon};

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Ts(a) => {
            let c = read_curve(&a.input)?;
            io::write_ts(&a.out, &ts(&c))?;
        }
        Command::PhiTs { io: a, phi } => {
            let c = read_curve(&a.input)?;
            io::write_ts(&a.out, &phi_ts(&c, &vec![phi; c.len()])?)?;
        }
        Command::Invert { io: a, f_override } => {
            let g = io::read_ts(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
            let inv = match f_override {
                Some(path) => {
                    let f = io::read_f_override(&path, g.params())
                        .with_context(|| format!("reading {}", path.display()))?;
                    invert_with(&g, &InverseOptions { f_override: Some(f), ..Default::default() })?
                }
                None => invert(&g)?,
            };
            io::write_curve(&a.out, &inv.alpha)?;
        }
        Command::Roll(a) => {
            let c = read_curve(&a.input)?;
            let tr = roll(&c);
            io::write_curve_rows(fs::File::create(&a.out)?, &tr.params, &tr.points)?;
        }
        Command::GenMinimal { gen, m, branch, s_span } => gen_minimal(&gen, m, branch, s_span)?,
        Command::GenCmc { gen, m } => gen_cmc(&gen, m)?,
        Command::GenFlat { gen, c, y_start, y_end } => gen_flat(&gen, c, y_start, y_end)?,
        Command::Mesh { io: a, w, nt, t_min, t_max, curvature } => {
            let p = HelicoidalParams::new(w)?;
            let c = read_curve(&a.input)?;
            let range = (t_min.unwrap_or(0.0), t_max.unwrap_or(TAU / w));
            let mesh = immerse_oriented(&c, p, range, nt)?;
            io::write_obj(&a.out, &mesh)?;
            if let Some(path) = curvature {
                io::write_curvature_csv(&path, &curvatures_fd(&immerse(&c, p, range, nt)?)?)?;
            }
            info!("mesh {}x{} written to {}", mesh.ns(), mesh.nt(), a.out.display());
        }
        Command::Verify { input, w, m, nt, seed, out } => {
            let report = verify(&input, w, m, nt, seed)?;
            let text = serde_json::to_string_pretty(&report)?;
            match out {
                Some(path) => fs::write(path, text + "\n")?,
                None => println!("{text}"),
            }
        }
        Command::Plot { inputs, out } => {
            let curves = inputs
                .iter()
                .map(|path| {
                    let (_, pts) = io::read_curve_rows(fs::File::open(path)?)?;
                    let label = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                    Ok(PlotCurve::new(label, pts))
                })
                .collect::<treadmill::Result<Vec<_>>>()?;
            io::emit_svg(&curves, &out)?;
        }
    }
    Ok(())
}

fn read_curve(path: &Path) -> Result<SampledCurve> {
    io::read_curve(path).with_context(|| format!("reading {}", path.display()))
}

fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().map(f64::abs).fold(0.0, f64::max)
}

fn write_sidecar(path: Option<&Path>, value: serde_json::Value) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, serde_json::to_string_pretty(&value)? + "\n")?;
    }
    Ok(())
}

fn gen_minimal(gen: &GenCommon, m: f64, branch: BranchArg, s_span: f64) -> Result<()> {
    let p = HelicoidalParams::new(gen.w)?;
    let branch = match branch {
        BranchArg::Upper => Branch::Upper,
        BranchArg::Lower => Branch::Lower,
    };
    let spec = MinimalSpec { params: p, m, branch, s_span, n: gen.n };
    let prof = minimal_profile(&spec)?;
    io::write_curve(&gen.out, &prof)?;
    let signed = if branch == Branch::Upper { m.abs() } else { -m.abs() };
    let drift = max_abs(ts(&prof).points().iter().map(|x| conserved_quantity(*x, gen.w) - signed));
    let h = max_abs(mean_curvature_analytic(&prof, p));
    info!("minimal profile: max|H| = {h:e}, conserved drift = {drift:e}");
    write_sidecar(
        gen.json.as_deref(),
        json!({
            "generator": "minimal",
            "w": gen.w, "M": m, "branch": branch, "s_span": s_span, "n": gen.n,
            "residuals": { "max_abs_H": h, "conserved_quantity_drift": drift },
        }),
    )
}

fn gen_cmc(gen: &GenCommon, m: f64) -> Result<()> {
    let spec = CmcSpec::new(gen.w, m, gen.n)?;
    let level = cmc_level_curve(&spec)?;
    let prof = invert(&level.ts)?.alpha;
    io::write_curve(&gen.out, &prof)?;
    let resid = max_abs(cmc_residual(&ts(&prof), spec.params, m));
    let h = max_abs(mean_curvature_analytic(&prof, spec.params).into_iter().map(|h| h - 1.0));
    info!("cmc profile: max|H - 1| = {h:e}, level-set residual = {resid:e}");
    write_sidecar(
        gen.json.as_deref(),
        json!({
            "generator": "cmc",
            "w": gen.w, "M": m, "n": gen.n,
            "residuals": {
                "max_abs_H_minus_1": h,
                "max_abs_level_set_residual": resid,
                "closure_gap": level.closure_gap,
            },
        }),
    )
}

fn gen_flat(gen: &GenCommon, c: f64, y_start: f64, y_end: f64) -> Result<()> {
    let spec = FlatSpec { c, y_start, y_end, n: gen.n };
    let prof = flat_profile(&spec)?;
    io::write_curve(&gen.out, &prof)?;
    let g = ts(&prof);
    let off_line = max_abs(g.points().iter().map(|x| x.x - c));
    let target = flat_ts(&spec)?;
    let round_trip = g.points().iter().zip(target.points()).map(|(a, b)| (*a - *b).norm()).fold(0.0, f64::max);
    write_sidecar(
        gen.json.as_deref(),
        json!({
            "generator": "flat",
            "w": gen.w, "c": c, "y_start": y_start, "y_end": y_end, "n": gen.n,
            "residuals": { "max_abs_z_minus_c": off_line, "round_trip": round_trip },
        }),
    )
}

#[derive(Debug, Serialize)]
struct CmcCheck {
    m: f64,
    max_abs_level_set_residual: f64,
    max_abs_h_minus_1: f64,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    input: String,
    w: f64,
    samples: usize,
    max_abs_h_analytic: f64,
    mesh: [usize; 2],
    max_abs_h_fd: f64,
    max_abs_k_fd: f64,
    seed: u64,
    rotation_invariance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    cmc: Option<CmcCheck>,
}

fn verify(input: &Path, w: f64, m: Option<f64>, nt: usize, seed: u64) -> Result<VerifyReport> {
    let p = HelicoidalParams::new(w)?;
    let c = read_curve(input)?;
    let h = mean_curvature_analytic(&c, p);
    let grid = curvatures_fd(&immerse(&c, p, (0.0, TAU / w), nt)?)?;

    let g = ts(&c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rot = 0.0f64;
    for _ in 0..4 {
        let tau = rng.gen_range(-PI..PI);
        let moved = ts(&rotate(&c, tau));
        rot = moved.points().iter().zip(g.points()).map(|(a, b)| (*a - *b).norm()).fold(rot, f64::max);
    }

    let cmc = m.map(|m| CmcCheck {
        m,
        max_abs_level_set_residual: max_abs(cmc_residual(&g, p, m)),
        max_abs_h_minus_1: max_abs(h.iter().map(|h| h - 1.0)),
    });
    Ok(VerifyReport {
        input: input.display().to_string(),
        w,
        samples: c.len(),
        max_abs_h_analytic: max_abs(h.iter().copied()),
        mesh: [c.len(), nt],
        max_abs_h_fd: grid.max_abs_mean(),
        max_abs_k_fd: grid.max_abs_gauss(),
        seed,
        rotation_invariance: rot,
        cmc,
    })
}
