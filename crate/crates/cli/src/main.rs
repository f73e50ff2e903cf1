mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinon_core::table::Format;

use config::{DispersionOpts, EdOpts, GridOpts, LimitOpts, QuadratureOpts, RunConfig, SumruleOpts};

/// Two-spinon structure factor, spinon dispersions and finite-chain spectra.
#[derive(Parser, Debug)]
#[command(name = "spinon", version, about)]
struct Cli {
    /// TOML file with defaults for any option; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format of written tables.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Directory for outputs without an explicit path (default: $SPINON_OUTPUT_DIR or .).
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    #[command(flatten)]
    quadrature: QuadratureOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate spinon energy and momentum.
    Dispersion(DispersionOpts),
    /// Print the structure factor at one (w, k).
    DcfPoint {
        #[arg(allow_hyphen_values = true)]
        w: f64,
        #[arg(allow_hyphen_values = true)]
        k: f64,
    },
    /// Evaluate the structure factor on a (k, w) grid.
    DcfGrid(GridOpts),
    /// Integrated weight at fixed momenta.
    Sumrule(SumruleOpts),
    /// Exact diagonalization: Lehmann lines, broadened curves, band support.
    Ed(EdOpts),
    /// Convergence of the anisotropic dispersion to the isotropic one.
    LimitCheck(LimitOpts),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl From<spinon_core::Error> for CliError {
    fn from(e: spinon_core::Error) -> Self {
        use spinon_core::Error as E;
        match e {
            E::InvalidConfig(_) | E::Domain(_) | E::Size(_) | E::OutOfZone(_) => Self::Usage(e.to_string()),
            _ => Self::Compute(e.to_string()),
        }
    }
}

/// Options after merging flags, config file and environment.
pub struct Context {
    pub format: Format,
    pub output_dir: PathBuf,
    pub quadrature: QuadratureOpts,
}

impl Context {
    pub fn extension(&self) -> &'static str {
        match self.format {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn output_path(&self, explicit: Option<PathBuf>, stem: &str) -> PathBuf {
        explicit.unwrap_or_else(|| self.output_dir.join(format!("{stem}.{}", self.extension())))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let ctx = Context {
        format: cli.format.or(file.format).unwrap_or(Format::Csv),
        output_dir: cli
            .output_dir
            .or(file.output_dir)
            .or_else(|| std::env::var_os(config::OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(".")),
        quadrature: cli.quadrature.or(file.quadrature),
    };
    match cli.command {
        Command::Dispersion(o) => commands::dispersion(&ctx, o.or(file.dispersion)),
        Command::DcfPoint { w, k } => commands::dcf_point(&ctx, w, k),
        Command::DcfGrid(o) => commands::dcf_grid(&ctx, o.or(file.dcf_grid)),
        Command::Sumrule(o) => commands::sumrule(&ctx, o.or(file.sumrule)),
        Command::Ed(o) => commands::ed(&ctx, o.or(file.ed)),
        Command::LimitCheck(o) => commands::limit_check(&ctx, o.or(file.limit_check)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
