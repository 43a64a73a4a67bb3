//! `bianchi`: command-line front end for bianchi-core.
//!
//! Every subcommand prints one report (JSON by default, CSV with
//! `--format csv`). Exit codes: 0 success, 2 invalid input, 3 numerical
//! tolerance not met.

mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use bianchi_core::cusps::Involution;
use bianchi_core::cycles::FaceOptions;
use bianchi_core::h3::Point3;
use bianchi_core::lattice::Precision;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use cache::Cache;
use commands::Job;
use report::{render, Format};

#[derive(Parser, Debug)]
#[command(name = "bianchi", version, about = "Eisenstein cohomology invariants of Bianchi congruence subgroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    job: JobArgs,
}

#[derive(Args, Debug)]
struct JobArgs {
    /// The field Q(sqrt(-d)).
    #[arg(long, global = true, default_value_t = 1)]
    d: i64,
    /// Level N of Gamma1(N).
    #[arg(long = "N", global = true)]
    n: Option<i64>,
    /// Weight: coefficients E_{k,k}.
    #[arg(long, global = true, default_value_t = 0)]
    k: u32,
    #[arg(long, global = true, value_enum, default_value_t = Rho::Sigma)]
    rho: Rho,
    /// Target accuracy of series and lattice sums.
    #[arg(long, global = true, default_value_t = 1e-10)]
    eps: f64,
    /// Cut-off height for the face quadrature.
    #[arg(long = "t-floor", global = true, default_value_t = 0.05)]
    t_floor: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for cached lattice invariants and enumerations.
    #[arg(long = "cache-dir", global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Rho {
    Identity,
    Sigma,
    Tau,
}

#[derive(Args, Debug, Clone, Copy)]
struct PointArgs {
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    x: f64,
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    y: f64,
    #[arg(long, default_value_t = 0.8, allow_negative_numbers = true)]
    t: f64,
}

impl PointArgs {
    fn point(&self) -> Result<Point3> {
        Ok(Point3::new(Complex64::new(self.x, self.y), self.t)?)
    }

    fn json(&self) -> Value {
        json!({ "x": self.x, "y": self.y, "t": self.t })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cusp classes of Gamma1(N) by double-coset enumeration.
    Cusps,
    /// Dimensions of the Eisenstein cohomology.
    Dims,
    /// Trace of complex conjugation on H1_Eis from the exact sigma-matrix.
    TraceH1,
    /// Trace of rho on H2_Eis by counting fixed cusps.
    TraceH2,
    /// Lefschetz number of sigma on Gamma1(N).
    Lefschetz,
    /// Index [Gamma1^e(N) : Gamma1^e(N) ∩ Gamma'] by finite enumeration.
    IndexOracle,
    /// Ito's potential H, its derivatives and the differential omega at a point.
    CocycleEval {
        #[command(flatten)]
        point: PointArgs,
    },
    /// |H(Au) − H(u) − Phi(A)| for a matrix and point, or a built-in sample set.
    CoboundaryCheck {
        /// Matrix "a,b,c,d" with entries like 2, -w, 1+2w (w = omega; i also accepted).
        #[arg(long)]
        matrix: Option<String>,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Exact matrix of sigma on the cocycle basis.
    SigmaMatrix {
        /// Include every matrix entry.
        #[arg(long)]
        entries: bool,
    },
    /// Coefficients of the Eisenstein cycle over Z[i].
    Cycle {
        /// Index of the cusp class.
        #[arg(long, default_value_t = 0)]
        xi: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Cusps => "cusps",
            Command::Dims => "dims",
            Command::TraceH1 => "trace-h1",
            Command::TraceH2 => "trace-h2",
            Command::Lefschetz => "lefschetz",
            Command::IndexOracle => "index-oracle",
            Command::CocycleEval { .. } => "cocycle-eval",
            Command::CoboundaryCheck { .. } => "coboundary-check",
            Command::SigmaMatrix { .. } => "sigma-matrix",
            Command::Cycle { .. } => "cycle",
        }
    }

    fn extra_inputs(&self) -> Value {
        match self {
            Command::CocycleEval { point } => json!({ "point": point.json() }),
            Command::CoboundaryCheck { matrix, point, tol } => match matrix {
                Some(m) => json!({ "matrix": m, "point": point.json(), "tol": tol }),
                None => json!({ "matrix": "default samples", "tol": tol }),
            },
            Command::SigmaMatrix { entries } => json!({ "entries": entries }),
            Command::Cycle { xi } => json!({ "xi": xi }),
            _ => json!({}),
        }
    }
}

fn build_job(cli: &Cli) -> Result<Job> {
    let a = &cli.job;
    if a.threads == Some(0) {
        return Err(anyhow!(bianchi_core::Error::InvalidInput("--threads must be positive".into())));
    }
    let face = FaceOptions { t_floor: a.t_floor, ..Default::default() };
    face.validate()?;
    Ok(Job {
        command: cli.command.name(),
        field: commands::field(a.d)?,
        n: a.n,
        k: a.k,
        rho: match a.rho {
            Rho::Identity => Involution::Identity,
            Rho::Sigma => Involution::Sigma,
            Rho::Tau => Involution::Tau,
        },
        prec: Precision::new(a.eps)?,
        face,
        cache: a.cache_dir.as_deref().map(Cache::open).transpose()?,
        extra: cli.command.extra_inputs(),
    })
}

fn run(cli: &Cli, job: &Job) -> Result<report::Report> {
    match &cli.command {
        Command::Cusps => commands::cusps(job),
        Command::Dims => commands::dims(job),
        Command::TraceH1 => commands::trace_h1(job),
        Command::TraceH2 => commands::trace_h2(job),
        Command::Lefschetz => commands::lefschetz(job),
        Command::IndexOracle => commands::index_oracle_cmd(job),
        Command::CocycleEval { point } => commands::cocycle_eval(job, point.point()?),
        Command::CoboundaryCheck { matrix, point, tol } => {
            let sample = match matrix {
                Some(m) => Some((commands::parse_matrix(&job.field, m)?, point.point()?)),
                None => None,
            };
            commands::coboundary_check(job, sample, *tol)
        }
        Command::SigmaMatrix { entries } => commands::sigma_matrix_cmd(job, *entries),
        Command::Cycle { xi } => commands::cycle(job, *xi),
    }
}

/// 3 for numerical failures, 2 for everything else.
fn exit_code(e: &anyhow::Error) -> u8 {
    let tolerance = e
        .chain()
        .any(|c| c.downcast_ref::<bianchi_core::Error>().is_some_and(|e| e.is_tolerance()));
    if tolerance {
        3
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.job.threads {
        if n > 0 {
            // only fails if a pool already exists, which cannot happen here
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let format = cli.job.format;
    let result = build_job(&cli).and_then(|job| Ok((run(&cli, &job)?, job)));
    let (value, code) = match result {
        Ok((report, _)) => {
            let v = report.into_value();
            let code = if v.get("error").is_some() { 3 } else { 0 };
            (v, code)
        }
        Err(e) => {
            let code = exit_code(&e);
            let kind = if code == 3 { "tolerance" } else { "validation" };
            eprintln!("error: {e:#}");
            let inputs = json!({ "command": cli.command.name(), "d": cli.job.d, "N": cli.job.n, "k": cli.job.k });
            (json!({ "inputs": inputs, "error": { "kind": kind, "message": format!("{e:#}") } }), code)
        }
    };
    match render(&value, format) {
        Ok(s) => print!("{s}"),
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    }
    ExitCode::from(code)
}
