//! Command-line front end for `qboson`: string counts, scaling fits, Trotter
//! circuits and block-encoding checks, reported as CSV or JSON.

pub mod commands;
pub mod error;
pub mod fit;
pub mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qboson::hamiltonian::{parse_document, HamiltonianInput, HamiltonianSpec};

pub use error::{CliError, CliResult};
use fit::{fit_series, ScalingSeries};
use table::{Format, Table};

#[derive(Debug, Parser)]
#[command(
    name = "qboson",
    version,
    about = "Qubit resource counts for truncated bosonic Hamiltonians"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Relative pruning tolerance (table1, count), rank threshold (fit) or
    /// accepted verification error (trotter, blockenc).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fock-basis x and p string counts against Q·2^(Q-1).
    Table1 {
        #[arg(long, default_value_t = 14)]
        q_max: usize,
    },
    /// Pauli-string counts of a Hamiltonian file over a range of Q.
    Count {
        spec: PathBuf,
        /// Defaults to the file's qubits_per_boson.
        #[arg(long)]
        q_min: Option<usize>,
        #[arg(long)]
        q_max: Option<usize>,
    },
    /// Fit (1/Q) ln N = a + b/Q + c ln(Q)/Q to a CSV with q and n_pauli columns.
    Fit {
        series: PathBuf,
        #[arg(long)]
        q_min: Option<usize>,
        #[arg(long)]
        q_max: Option<usize>,
    },
    /// First-order Trotter circuit with a gate-count report.
    Trotter {
        spec: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        time: f64,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Compare against the exact propagator at n, 2n and 4n steps.
        #[arg(long)]
        verify: bool,
        /// Write the gate list here.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// LCU block encoding summary.
    Blockenc {
        spec: PathBuf,
        /// Build the full select unitary and check the encoded block.
        #[arg(long)]
        verify: bool,
    },
}

pub fn read_input(path: &Path) -> CliResult<HamiltonianInput> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn bosonic(input: HamiltonianInput, command: &str) -> CliResult<HamiltonianSpec> {
    match input {
        HamiltonianInput::Bosonic(spec) => Ok(spec),
        HamiltonianInput::Pauli(_) => Err(CliError::Input(format!(
            "`{command}` needs a bosonic Hamiltonian, not a [pauli] table"
        ))),
    }
}

/// Runs one subcommand and writes its report.
pub fn run(cli: &Cli) -> CliResult<()> {
    let common = &cli.common;
    let (table, outcome) = match &cli.command {
        Command::Table1 { q_max } => {
            let rows = commands::table1(*q_max, common.tol.unwrap_or(commands::DEFAULT_PRUNE_TOL))?;
            let outcome = match rows.iter().find(|r| !r.matches()) {
                Some(r) => Err(CliError::Verification(format!(
                    "Q={} gives {} / {} strings, expected {}",
                    r.q, r.x_strings, r.p_strings, r.formula
                ))),
                None => Ok(()),
            };
            (commands::table1_table(&rows), outcome)
        }
        Command::Count { spec, q_min, q_max } => {
            let input = read_input(spec)?;
            let default_q = match &input {
                HamiltonianInput::Bosonic(s) => s.config.qubits_per_boson(),
                HamiltonianInput::Pauli(s) => s.n_qubits(),
            };
            let lo = q_min.unwrap_or(default_q);
            let hi = q_max.unwrap_or(lo.max(default_q));
            if lo == 0 || lo > hi {
                return Err(CliError::Input(format!("empty Q range {lo}..={hi}")));
            }
            let tol = common.tol.unwrap_or(commands::DEFAULT_PRUNE_TOL);
            let rows = commands::count(&input, lo..=hi, tol)?;
            (commands::count_table(&rows), Ok(()))
        }
        Command::Fit {
            series,
            q_min,
            q_max,
        } => {
            let file = File::open(series)
                .map_err(|e| CliError::Input(format!("{}: {e}", series.display())))?;
            let mut s = ScalingSeries::from_csv(file)?;
            if q_min.is_some() || q_max.is_some() {
                s = s.restrict(q_min.unwrap_or(0), q_max.unwrap_or(usize::MAX));
            }
            let fit = fit_series(&s, common.tol.unwrap_or(1e-12))?;
            let rows = s.rows();
            let range = (rows[0].q, rows[rows.len() - 1].q);
            (commands::fit_table(&fit, range), Ok(()))
        }
        Command::Trotter {
            spec,
            time,
            steps,
            verify,
            circuit,
        } => {
            let spec = bosonic(read_input(spec)?, "trotter")?;
            let run = commands::trotter(&spec, *time, *steps, *verify)?;
            if let Some(path) = circuit {
                std::fs::write(path, run.evolution.circuit.to_text())?;
            }
            let outcome = commands::check_trotter(&run, common.tol);
            (commands::trotter_table(&run), outcome)
        }
        Command::Blockenc { spec, verify } => {
            let report = commands::blockenc(&read_input(spec)?, *verify)?;
            let outcome = commands::check_blockenc(
                &report,
                common.tol.unwrap_or(commands::DEFAULT_BLOCK_TOL),
            );
            (commands::blockenc_table(&report), outcome)
        }
    };
    emit(&table, common)?;
    outcome
}

fn emit(table: &Table, common: &Common) -> CliResult<()> {
    match &common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write(common.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            table.write(common.format, stdout.lock())?;
        }
    }
    Ok(())
}
