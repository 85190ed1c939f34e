use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wandering_cli::report::{write_rows, Format};
use wandering_cli::runner::{self, SubspaceSource};
use wandering_cli::{CliError, Overrides, Scenario};
use wandering_core::{Complex64, SymVector};

#[derive(Parser)]
#[command(
    name = "wandering",
    version,
    about = "Wandering-subspace workbench for the Bergman shift"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Override the scenario degree cap.
    #[arg(long)]
    cap: Option<usize>,
    /// Override the scenario relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Override the number of circle samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Report format: csv or jsonl.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Write zero for elapsed_ms so reports are byte-identical across runs.
    #[arg(long)]
    stable: bool,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default 1).
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            cap: self.cap,
            tol: self.tol,
            samples: self.samples,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Execute every check of a scenario file.
    Run {
        scenario: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Measure a residual over increasing degree caps.
    Convergence {
        /// Scenario file defining the subspace (not needed with --zeros).
        scenario: Option<PathBuf>,
        /// Subspace name in the scenario.
        #[arg(long, conflicts_with = "zeros")]
        subspace: Option<String>,
        /// Zero set as `re:im` pairs separated by commas, e.g. `0.5:0,-0.3:0.1`.
        #[arg(long)]
        zeros: Option<String>,
        /// Strictly increasing caps, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        caps: Vec<usize>,
        /// radial_constancy, orthonormal_system, invariance or wandering_recovery.
        #[arg(long, default_value = "radial_constancy")]
        check: String,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate the radial sum, both criterion weights and the shift Gram values.
    Oracle {
        /// Scenario file defining the vector (not needed with --coords).
        scenario: Option<PathBuf>,
        /// Vector name in the scenario.
        #[arg(long, conflicts_with = "coords")]
        vector: Option<String>,
        /// Real coordinates in the e_n basis, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coords: Option<Vec<f64>>,
        #[arg(long)]
        kmax: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(path: Option<&Path>, overrides: Overrides) -> Result<Option<Scenario>, CliError> {
    path.map(|p| {
        let mut s = Scenario::load(p)?;
        s.apply(overrides);
        Ok(s)
    })
    .transpose()
}

fn parse_zeros(text: &str) -> Result<Vec<Complex64>, CliError> {
    text.split(',')
        .map(|pair| {
            let (re, im) = pair.split_once(':').unwrap_or((pair, "0"));
            let p = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Validation(format!("bad zero {pair:?}")))
            };
            Ok(Complex64::new(p(re)?, p(im)?))
        })
        .collect()
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Run { scenario, common } => {
            let (rows, code) =
                runner::run(&scenario, common.overrides(), common.jobs, common.stable)?;
            write_rows(output(common.out.as_deref())?, &rows, common.format)?;
            Ok(code)
        }
        Command::Convergence {
            scenario,
            subspace,
            zeros,
            caps,
            check,
            common,
        } => {
            let source = match (zeros, subspace) {
                (Some(z), _) => SubspaceSource::Zeros(parse_zeros(&z)?),
                (None, Some(name)) => {
                    let scenario =
                        load(scenario.as_deref(), common.overrides())?.ok_or_else(|| {
                            CliError::Validation("--subspace needs a scenario file".into())
                        })?;
                    SubspaceSource::Named { scenario, name }
                }
                (None, None) => {
                    return Err(CliError::Validation("give --subspace or --zeros".into()))
                }
            };
            let table = runner::convergence(&source, &caps, &check, common.jobs)?;
            table.write(output(common.out.as_deref())?)?;
            eprintln!(
                "verdict: {}",
                if table.monotone {
                    "non-increasing"
                } else {
                    "NOT non-increasing"
                }
            );
            Ok(if table.monotone { 0 } else { 1 })
        }
        Command::Oracle {
            scenario,
            vector,
            coords,
            kmax,
            common,
        } => {
            let loaded = load(scenario.as_deref(), common.overrides())?;
            let (q, cap, tol) = match (coords, vector) {
                (Some(c), _) => {
                    let q = SymVector::from_real(&c);
                    let cap = common.cap.unwrap_or(q.effective_degree() + kmax);
                    (
                        q,
                        cap,
                        common.tol.unwrap_or(wandering_cli::scenario::DEFAULT_TOL),
                    )
                }
                (None, Some(name)) => {
                    let s = loaded.ok_or_else(|| {
                        CliError::Validation("--vector needs a scenario file".into())
                    })?;
                    let resolved = s.validate()?;
                    let q = resolved
                        .vectors
                        .get(&name)
                        .ok_or_else(|| CliError::Validation(format!("undefined vector {name}")))?
                        .clone();
                    (q, s.cap, s.tol)
                }
                (None, None) => {
                    return Err(CliError::Validation("give --vector or --coords".into()))
                }
            };
            let table = runner::oracle(&q, kmax, cap, tol)?;
            table.write(output(common.out.as_deref())?)?;
            let flagged = table.unshifted_disagreements();
            if !flagged.is_empty() {
                eprintln!(
                    "unshifted weight disagrees with the shift Gram values at k = {flagged:?}"
                );
            }
            Ok(if table.consistent() { 0 } else { 1 })
        }
    }
}
