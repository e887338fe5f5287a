use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eqcorr::Error;

mod ainf;
mod toric;

/// Exit codes: 0 success, 1 mathematical mismatch, 2 parse or usage error, 3 invariant violation.
#[derive(Parser, Debug)]
#[command(
    name = "eqcorr",
    version,
    about = "Equivariant disc potentials, mirror maps and filtered A∞ structures"
)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Mori degree bound for mirror-map series.
    #[arg(long, global = true, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    order: u32,
    /// Default truncation `T^t` for algebra files without one.
    #[arg(long, global = true, default_value = "3")]
    trunc: String,
    /// Default λ-degree cap for algebra files without one.
    #[arg(long = "lambda-cap", global = true, default_value_t = eqcorr::novikov::DEFAULT_LAMBDA_CAP)]
    lambda_cap: u32,
    /// Worker threads for parallel enumeration (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Disc potential of a fan, optionally with the equivariant log part.
    Potential {
        fan: PathBuf,
        #[arg(long)]
        equivariant: bool,
    },
    /// Mirror map in both directions.
    MirrorMap { fan: PathBuf },
    /// Inverse mirror map `q̌(q)` only.
    InverseMirrorMap { fan: PathBuf },
    /// Disc potential of a compact semi-Fano fan.
    SemifanoPotential { fan: PathBuf },
    /// Maslov indices of correspondence classes `β_i^B`.
    Maslov {
        fan: PathBuf,
        /// Comma-separated 1-based rays of the stratum.
        #[arg(long)]
        stratum: Option<String>,
        /// 1-based ray index.
        #[arg(long)]
        ray: Option<usize>,
    },
    /// Facets missed by the moment level set of the subtorus.
    MissedDivisors { fan: PathBuf },
    /// Restrict a potential to a fiber given in the `[restrict]` table.
    Restrict { config: PathBuf },
    /// Compare `W_Y` on the correspondence fiber with `W_X`.
    VerifyTeleman { config: PathBuf },
    /// Filtered A∞ algebras and tri-modules.
    Ainf {
        #[command(subcommand)]
        cmd: AinfCmd,
    },
}

#[derive(Subcommand, Debug)]
enum AinfCmd {
    /// Check the A∞ (or tri-module) relations and unitality.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// Transfer an algebra to its cohomology along a strong contraction.
    Transfer {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        arity: usize,
    },
    /// Compose weak bounding cochains through a left-cyclic element.
    Compose { file: PathBuf },
    /// Residual of the squared module differential for both λ-signs.
    Obstruction { file: PathBuf },
}

/// A finished report and whether it records a mismatch.
pub struct Report {
    pub text: String,
    pub mismatch: bool,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Report { text, mismatch: false }
    }
}

pub fn read(path: &PathBuf) -> eqcorr::Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Dimension(_) => 2,
        _ => 3,
    }
}

fn run(cli: &Cli) -> eqcorr::Result<Report> {
    let o = &cli.opts;
    match &cli.cmd {
        Cmd::Potential { fan, equivariant } => toric::potential(fan, *equivariant),
        Cmd::MirrorMap { fan } => toric::mirror_map(fan, o.order, true),
        Cmd::InverseMirrorMap { fan } => toric::mirror_map(fan, o.order, false),
        Cmd::SemifanoPotential { fan } => toric::semifano(fan, o.order),
        Cmd::Maslov { fan, stratum, ray } => toric::maslov(fan, stratum.as_deref(), *ray),
        Cmd::MissedDivisors { fan } => toric::missed(fan),
        Cmd::Restrict { config } => toric::restrict(config),
        Cmd::VerifyTeleman { config } => toric::verify_teleman(config, o.order),
        Cmd::Ainf { cmd } => {
            let d = ainf::Defaults {
                truncation: o.trunc.parse()?,
                lambda_cap: o.lambda_cap,
            };
            match cmd {
                AinfCmd::Check { file, arity } => ainf::check(file, &d, *arity),
                AinfCmd::Transfer { file, arity } => ainf::transfer(file, &d, *arity),
                AinfCmd::Compose { file } => ainf::compose(file, &d),
                AinfCmd::Obstruction { file } => ainf::obstruction(file, &d),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.opts.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    };
    let report = match pool.install(|| run(&cli)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let mut text = report.text;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.opts.output {
        Some(p) => {
            if let Err(e) = std::fs::write(p, &text) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(if report.mismatch { 1 } else { 0 })
}
