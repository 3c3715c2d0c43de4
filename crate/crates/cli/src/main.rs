use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use treadmill::GeomError;

mod commands;

#[derive(Parser, Debug)]
#[command(name = "treadmill", version, about = "TreadmillSled, Roll and helicoidal surface profile tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// TreadmillSled of a curve
    Ts(InOut),
    /// φ-TreadmillSled with a constant inclination
    PhiTs {
        #[command(flatten)]
        io: InOut,
        /// Inclination angle in radians
        #[arg(long)]
        phi: f64,
    },
    /// Recover a curve from its TreadmillSled
    Invert {
        #[command(flatten)]
        io: InOut,
        /// CSV `t,f` with the companion function, needed for constant input
        #[arg(long)]
        f_override: Option<PathBuf>,
    },
    /// Trace of the origin while the curve rolls on the x-axis
    Roll(InOut),
    /// Profile of a minimal helicoidal surface
    GenMinimal {
        #[command(flatten)]
        gen: GenCommon,
        #[arg(long = "M", allow_hyphen_values = true)]
        m: f64,
        #[arg(long, value_enum, default_value_t = BranchArg::Upper)]
        branch: BranchArg,
        /// Arc-length extent, centered on the vertex
        #[arg(long, default_value_t = 8.0)]
        s_span: f64,
    },
    /// Profile of a helicoidal surface with constant mean curvature one
    GenCmc {
        #[command(flatten)]
        gen: GenCommon,
        #[arg(long = "M", allow_hyphen_values = true)]
        m: f64,
    },
    /// Profile of a flat helicoidal surface
    GenFlat {
        #[command(flatten)]
        gen: GenCommon,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[arg(long, allow_hyphen_values = true)]
        y_start: f64,
        #[arg(long, allow_hyphen_values = true)]
        y_end: f64,
    },
    /// Mesh of the helicoidal surface generated by a profile
    Mesh {
        #[command(flatten)]
        io: InOut,
        #[arg(long)]
        w: f64,
        #[arg(long, default_value_t = 200)]
        nt: usize,
        #[arg(long, allow_hyphen_values = true)]
        t_min: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t_max: Option<f64>,
        /// Also write interior curvatures as CSV `s,t,H,K`
        #[arg(long)]
        curvature: Option<PathBuf>,
    },
    /// Curvature and residual report for a profile, as JSON
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        w: f64,
        /// Check the CMC-one level set with this constant
        #[arg(long = "M", allow_hyphen_values = true)]
        m: Option<f64>,
        #[arg(long, default_value_t = 200)]
        nt: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the report here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// SVG plot of one or more curve files
    Plot {
        #[arg(long = "in")]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InOut {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenCommon {
    #[arg(long)]
    w: f64,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
    /// Sidecar with the parameters and achieved residuals
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BranchArg {
    Upper,
    Lower,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<GeomError>() {
        Some(e) if e.is_numeric() => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TREADMILL_LOG", "warn")).init();
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
