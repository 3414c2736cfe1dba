use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use planepair::commands::{self, family_from_name};
use planepair::config::IdentityList;
use planepair::error::EXIT_OK;
use planepair::output::{destination, emit, Render};
use planepair::{CliError, Format, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "planepair",
    version,
    about = "Verify pair-of-planes and visual-angle integral identities on convex bodies"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Output file; defaults to $PLANEPAIR_OUT_DIR/<command>.<ext>, else stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Flat JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone, Copy)]
struct GridArgs {
    #[arg(long)]
    n_colat: Option<usize>,
    #[arg(long)]
    n_long: Option<usize>,
    /// Shadow support-function samples (power of two ≥ 64).
    #[arg(long)]
    n_theta: Option<usize>,
    /// Highest harmonic degree and series cut-off.
    #[arg(long)]
    n_max: Option<usize>,
    /// Polar-route truncation radius in bounding radii.
    #[arg(long)]
    r_cut: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// M, mean width, F, bounding radius, spectrum norms and the constant-width flag.
    BodyInfo {
        body: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Coefficient tables: lambda, mu, alpha, A, beta, a_fourier.
    Coeffs {
        family: String,
        /// Kernel id, for lambda and a_fourier.
        #[arg(long)]
        kernel: Option<String>,
        /// Index range such as 0..10 (inclusive) or a single index.
        #[arg(long, short = 'n', alias = "m")]
        n: Option<String>,
    },
    /// Spherical-harmonic spectrum of the support function.
    Spectrum {
        body: Option<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Evaluate identities by independent routes and report agreement.
    Verify {
        /// Identity ids, comma separated, or `all`.
        #[arg(long)]
        identity: Option<String>,
        /// Body spec; repeat for several bodies.
        #[arg(long = "body")]
        bodies: Vec<String>,
        /// Pass threshold on rel_err for every identity.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Pair integrals by every route for a kernel × body matrix.
    Table {
        #[arg(long = "body")]
        bodies: Vec<String>,
        /// Kernel ids; defaults to one, P2, P4, t2n:1, sqrt.
        #[arg(long = "kernel")]
        kernels: Vec<String>,
        /// Add the polar quadrature of the line route as a fourth column.
        #[arg(long)]
        polar: bool,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
    },
}

impl GridArgs {
    fn into_config(self) -> RunConfig {
        RunConfig {
            n_colat: self.n_colat,
            n_long: self.n_long,
            n_theta: self.n_theta,
            n_max: self.n_max,
            r_cut: self.r_cut,
            ..Default::default()
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let base = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let globals = RunConfig {
        format: cli.format,
        output: cli.output,
        ..Default::default()
    };
    let (flags, stem) = match &cli.command {
        Command::BodyInfo { body, .. } | Command::Spectrum { body, .. } => (
            RunConfig {
                bodies: body.iter().cloned().collect(),
                ..Default::default()
            },
            if matches!(cli.command, Command::BodyInfo { .. }) {
                "body-info"
            } else {
                "spectrum"
            },
        ),
        Command::Coeffs { .. } => (RunConfig::default(), "coeffs"),
        Command::Verify {
            identity,
            bodies,
            tol,
            ..
        } => (
            RunConfig {
                bodies: bodies.clone(),
                identities: identity.clone().map(IdentityList::Joined),
                tol: *tol,
                ..Default::default()
            },
            "verify",
        ),
        Command::Table {
            bodies,
            kernels,
            tol,
            ..
        } => (
            RunConfig {
                bodies: bodies.clone(),
                kernels: kernels.clone(),
                tol: *tol,
                ..Default::default()
            },
            "table",
        ),
    };
    let grid = match &cli.command {
        Command::BodyInfo { grid, .. }
        | Command::Spectrum { grid, .. }
        | Command::Verify { grid, .. }
        | Command::Table { grid, .. } => *grid,
        Command::Coeffs { .. } => GridArgs::default(),
    };
    let cfg = base
        .overlay(grid.into_config())
        .overlay(flags)
        .overlay(globals);
    cfg.validate()?;
    let format = cfg.format();
    let (text, code) = match &cli.command {
        Command::BodyInfo { .. } => (commands::body_info(&cfg)?.render(format)?, EXIT_OK),
        Command::Spectrum { .. } => (commands::spectrum_cmd(&cfg)?.render(format)?, EXIT_OK),
        Command::Coeffs { family, kernel, n } => {
            let fam = family_from_name(family)?;
            let range = n.as_deref().unwrap_or("0..10");
            (
                commands::coeffs(fam, kernel.as_deref(), range)?.render(format)?,
                EXIT_OK,
            )
        }
        Command::Verify { .. } => {
            let v = commands::verify(&cfg)?;
            (v.render(format)?, v.exit_code())
        }
        Command::Table { polar, .. } => {
            let t = commands::table(&cfg, *polar)?;
            (t.render(format)?, t.exit_code())
        }
    };
    let dest = destination(cfg.output.as_deref(), stem, format);
    emit(&text, dest.as_deref())?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
