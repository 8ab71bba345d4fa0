//! `magnon`: Bethe Ansatz eigenstates of the Heisenberg ring and their
//! pairwise entanglement, exported as CSV or JSON.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use output::{Format, Table};

/// Thread count for parallel sweeps; everything else is set by flags.
const THREADS_ENV: &str = "MAGNON_THREADS";

#[derive(Debug, Parser)]
#[command(name = "magnon", version, about = "Heisenberg ring eigenstates and their two-qubit entanglement")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the Bethe equations for given labels or list all bound roots.
    Solve(SolveArgs),
    /// Amplitudes of a state in the fixed-magnetization basis.
    State(StateArgs),
    /// Concurrence C_r of spin 1 with spin 1+r.
    Profile(StateArgs),
    /// Data behind one of the figures.
    Figure(FigureArgs),
    /// Profiles of the Goldstone-free two-magnon states, bare and with one
    /// Goldstone magnon added.
    Table1(Table1Args),
    /// Population statistics and surveys.
    Survey(SurveyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundClass {
    Cosh,
    Sinh,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub n: usize,
    /// Comma-separated quantum numbers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["class", "all"])]
    pub lambdas: Option<Vec<i64>>,
    #[arg(long, value_enum, requires = "all")]
    pub class: Option<BoundClass>,
    /// Every root of the chosen bound class.
    #[arg(long, requires = "class")]
    pub all: bool,
    /// Eigen-equation residual required for certification.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct StateSource {
    /// Eigenstate by quantum numbers.
    #[arg(long, value_delimiter = ',', group = "source")]
    pub lambdas: Option<Vec<i64>>,
    /// Off-shell scattering form `K,k,phi`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, group = "source")]
    pub scattering: Option<Vec<f64>>,
    /// Off-shell cosh-type bound form `u,v`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, group = "source")]
    pub cosh: Option<Vec<f64>>,
    /// Off-shell sinh-type bound form `u,v`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, group = "source")]
    pub sinh: Option<Vec<f64>>,
    /// The adjacent-pair state of an even ring.
    #[arg(long, group = "source")]
    pub singular: bool,
    /// Uniform superposition with this many up spins.
    #[arg(long, group = "source")]
    pub goldstone: Option<usize>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub source: StateSource,
    /// Goldstone magnons added by total-spin raising.
    #[arg(long, default_value_t = 0)]
    pub raise: usize,
    /// Eigen-equation residual required for certification.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    /// C_r over k at phi = 0.
    #[value(name = "1")]
    Fig1,
    /// Goldstone sector C(n, N).
    #[value(name = "2")]
    Fig2,
    /// C_r over the (k, phi) plane.
    #[value(name = "3")]
    Fig3,
    /// Cosh-type states over v.
    #[value(name = "4")]
    Fig4,
    /// Sinh-type states over v.
    #[value(name = "5")]
    Fig5,
    /// Profiles of fixed labels over ring lengths.
    #[value(name = "6")]
    Fig6,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub which: FigureKind,
    /// Ring length (largest ring for figures 2 and 6).
    #[arg(long)]
    pub n: Option<usize>,
    /// Grid points per axis.
    #[arg(long, default_value_t = magnon_core::figures::DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long)]
    pub v_min: Option<f64>,
    #[arg(long)]
    pub v_max: Option<f64>,
    /// Labels for figure 6.
    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    pub lambdas: Vec<i64>,
    /// Smallest ring for figure 6.
    #[arg(long)]
    pub n_min: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SurveyKind {
    /// Per-separation statistics of a two-magnon population.
    Separation,
    /// Goldstone quenching in the 3- or 4-magnon sector.
    Quench,
    /// Antiferromagnetic ground state.
    Ags,
    /// Profiles of fixed labels over ring lengths.
    Scan,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PopulationClass {
    All,
    Scattering,
    CoshBound,
    SinhBound,
    Singular,
    GoldstoneMixed,
}

#[derive(Debug, Args)]
pub struct SurveyArgs {
    #[arg(value_enum)]
    pub kind: SurveyKind,
    /// Ring length (largest ring for scans).
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = PopulationClass::Scattering)]
    pub class: PopulationClass,
    #[arg(long, default_value_t = 3)]
    pub magnons: usize,
    #[arg(long, value_delimiter = ',', default_value = "1,3,5")]
    pub lambdas: Vec<i64>,
    #[arg(long)]
    pub n_min: Option<usize>,
}

fn set_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV}={raw:?} is not a thread count"))?;
    if threads == 0 {
        bail!("{THREADS_ENV} must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<Table> {
    match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::State(a) => commands::state(a),
        Command::Profile(a) => commands::profile(a),
        Command::Figure(a) => commands::figure(a),
        Command::Table1(a) => commands::table1(a),
        Command::Survey(a) => commands::survey(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = set_threads().and_then(|_| {
        let table = run(&cli)?;
        let mut out: Box<dyn Write> = match &cli.out {
            Some(path) => Box::new(BufWriter::new(
                File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        table.write(cli.format, &mut out, &mut io::stderr())?;
        out.flush()?;
        Ok(table.failures.is_empty())
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
