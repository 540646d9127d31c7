//! Command-line front end: coherent-state matrix elements, the oracle
//! self-check, and the vibron model reports.
//!
//! Exit codes: 0 success, 1 validation or input error, 2 internal self-check
//! failure (oracle disagreement).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use cohstate::algebra::OperatorPoly;
use cohstate::check::{run_oracle_check, ORACLE_TOL};
use cohstate::coherent::{count_contributing, matrix_element_poly, CoherentFrame, Occupancy};
use cohstate::fock::{matrix_of, FockBasis};
use cohstate::vibron::{
    build_operators, compare_report, exact_transition, minimize_r, spectrum_exact, CompareReport,
    TransitionOp,
};

#[derive(Parser)]
#[command(
    name = "cohstate",
    version,
    about = "Coherent-state matrix elements for bosonic models, with an exact Fock-space oracle and the 2D vibron model",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Matrix elements of operators between multi-species coherent states
    #[command(subcommand)]
    Me(MeCommand),
    /// Self-checks of the engine against the brute-force Fock oracle
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Two-dimensional vibron model computations
    #[command(subcommand)]
    Vibron(VibronCommand),
}

#[derive(Subcommand)]
enum MeCommand {
    /// Evaluate ⟨bra|op|ket⟩ for a frame and operator given as JSON files
    Eval(MeEvalArgs),
    /// Number of index tuples surviving the delta constraint for S species
    /// and an m-body term
    Count(MeCountArgs),
}

#[derive(Args)]
struct MeEvalArgs {
    /// Frame JSON file: {"n": .., "S": .., "alpha": [[{"re","im"}, ..], ..]}
    #[arg(long)]
    frame: PathBuf,
    #[arg(long, help = "Bra occupancies as a JSON integer array, e.g. \"[1,2]\"")]
    bra: String,
    #[arg(long, help = "Ket occupancies as a JSON integer array, e.g. \"[2,1]\"")]
    ket: String,
    /// Operator JSON file: {"n": .., "terms": [{"re","im","creators","annihilators"}, ..]}
    #[arg(long)]
    op: PathBuf,
}

#[derive(Args)]
struct MeCountArgs {
    /// Number of coherent boson species S
    #[arg(long)]
    species: usize,
    /// Body count m of the operator term
    #[arg(long)]
    body: u32,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Compare the engine against the Fock oracle on random instances
    Check(OracleCheckArgs),
}

#[derive(Args)]
struct OracleCheckArgs {
    /// RNG seed for reproducible instances
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random instances
    #[arg(long, default_value_t = 100)]
    cases: usize,
}

#[derive(Subcommand)]
enum VibronCommand {
    /// Exact SO(3)-limit levels (v, l, energy) from block diagonalization
    Energies(VibronEnergiesArgs),
    /// Exact transition intensity between two eigenstates
    Transitions(VibronTransitionsArgs),
    /// Variational minimum of the ground coherent-state energy over r
    MinimizeR(VibronNArgs),
    /// Exact-vs-coherent comparison datasets (energies, dipole, quadrupole)
    Compare(VibronCompareArgs),
}

#[derive(Args)]
struct VibronNArgs {
    /// Total boson number
    #[arg(long = "N")]
    n: u32,
}

#[derive(Args)]
struct VibronEnergiesArgs {
    /// Total boson number
    #[arg(long = "N")]
    n: u32,
    /// Write the levels as CSV to this path instead of stdout
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Dump the Hamiltonian on the full N-boson basis as coordinate text
    /// (row col re im per line, zero-based indices)
    #[arg(long)]
    dump_matrix: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpName {
    /// Dipole raising operator D+
    #[value(name = "d+")]
    DPlus,
    /// Dipole lowering operator D-
    #[value(name = "d-")]
    DMinus,
    /// Quadrupole raising operator Q+
    #[value(name = "q+")]
    QPlus,
    /// Quadrupole lowering operator Q-
    #[value(name = "q-")]
    QMinus,
}

impl From<OpName> for TransitionOp {
    fn from(op: OpName) -> Self {
        match op {
            OpName::DPlus => TransitionOp::DPlus,
            OpName::DMinus => TransitionOp::DMinus,
            OpName::QPlus => TransitionOp::QPlus,
            OpName::QMinus => TransitionOp::QMinus,
        }
    }
}

#[derive(Args)]
struct VibronTransitionsArgs {
    /// Total boson number
    #[arg(long = "N")]
    n: u32,
    /// Initial representation label v
    #[arg(long)]
    vi: u32,
    /// Initial angular momentum l
    #[arg(long)]
    li: i32,
    /// Final representation label v
    #[arg(long)]
    vf: u32,
    /// Final angular momentum l
    #[arg(long)]
    lf: i32,
    /// Transition operator
    #[arg(long)]
    op: OpName,
}

#[derive(Args)]
struct VibronCompareArgs {
    /// Total boson number
    #[arg(long = "N")]
    n: u32,
    /// Output directory for energies.csv, dipole.csv, quadrupole.csv
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
enum CliError {
    User(String),
    SelfCheck(String),
}

impl From<cohstate::Error> for CliError {
    fn from(err: cohstate::Error) -> Self {
        CliError::User(err.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::User(err.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Scientific notation with the requested number of significant digits.
fn fmt_sig(x: f64, sig: usize) -> String {
    format!("{:.*e}", sig - 1, x)
}

fn parse_occupancy(field: &str, text: &str) -> CliResult<Occupancy> {
    let counts: Vec<u32> = serde_json::from_str(text)
        .map_err(|e| CliError::User(format!("{field}: not a JSON integer array: {e}")))?;
    if counts.is_empty() {
        return Err(CliError::User(format!(
            "{field}: needs at least one species count"
        )));
    }
    Ok(Occupancy::new(counts))
}

fn read_file(field: &str, path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::User(format!("{field}: cannot read {}: {e}", path.display())))
}

fn configure_threads() -> CliResult<()> {
    match std::env::var("COHSTATE_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let threads: usize = raw.parse().map_err(|_| {
                CliError::User(format!(
                    "COHSTATE_THREADS: expected a positive integer, got {raw:?}"
                ))
            })?;
            if threads == 0 {
                return Err(CliError::User(
                    "COHSTATE_THREADS: must be at least 1".into(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global()
                .map_err(|e| CliError::User(format!("COHSTATE_THREADS: {e}")))
        }
    }
}

#[derive(Clone, Copy)]
enum Cell {
    Int(u32),
    SignedInt(i32),
    Float(f64),
    Empty,
}

/// Writes an RFC-4180-style CSV: header row, LF endings, floats with 12
/// significant digits, empty cells for undefined values.
fn emit_csv(header: &[&str], rows: &[Vec<Cell>], path: &Path) -> CliResult<()> {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row
            .iter()
            .map(|cell| match cell {
                Cell::Int(v) => v.to_string(),
                Cell::SignedInt(v) => v.to_string(),
                Cell::Float(x) => fmt_sig(*x, 12),
                Cell::Empty => String::new(),
            })
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, out)?;
    Ok(())
}

fn opt_float(v: Option<f64>) -> Cell {
    v.map_or(Cell::Empty, Cell::Float)
}

fn write_compare_csvs(report: &CompareReport, dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    let n2 = (report.n as f64) * (report.n as f64);

    let energy_rows: Vec<Vec<Cell>> = report
        .energies
        .iter()
        .map(|row| {
            vec![
                Cell::Int(row.v),
                Cell::Float(row.exact),
                Cell::Float(row.coherent),
                Cell::Float(row.exact / n2),
                Cell::Float(row.coherent / n2),
            ]
        })
        .collect();
    emit_csv(
        &[
            "v",
            "exact",
            "coherent",
            "exact_rescaled",
            "coherent_rescaled",
        ],
        &energy_rows,
        &dir.join("energies.csv"),
    )?;

    let dipole_rows: Vec<Vec<Cell>> = report
        .dipole
        .iter()
        .map(|row| {
            vec![
                Cell::Int(row.v),
                Cell::Float(row.exact_intra),
                Cell::Float(row.coherent_intra),
                opt_float(row.exact_inter),
                opt_float(row.coherent_inter),
                Cell::Float(row.exact_intra / n2),
                Cell::Float(row.coherent_intra / n2),
                opt_float(row.exact_inter.map(|x| x / n2)),
                opt_float(row.coherent_inter.map(|x| x / n2)),
            ]
        })
        .collect();
    emit_csv(
        &[
            "v",
            "exact_intra",
            "coherent_intra",
            "exact_inter",
            "coherent_inter",
            "exact_intra_rescaled",
            "coherent_intra_rescaled",
            "exact_inter_rescaled",
            "coherent_inter_rescaled",
        ],
        &dipole_rows,
        &dir.join("dipole.csv"),
    )?;

    let quad_rows: Vec<Vec<Cell>> = report
        .quadrupole
        .iter()
        .map(|row| {
            vec![
                Cell::Int(row.v),
                opt_float(row.exact_intra),
                Cell::Float(row.coherent_intra),
                opt_float(row.exact_inter_20),
                opt_float(row.exact_inter_02),
                opt_float(row.coherent_inter),
                opt_float(row.exact_intra.map(|x| x / n2)),
                Cell::Float(row.coherent_intra / n2),
                opt_float(row.exact_inter_20.map(|x| x / n2)),
                opt_float(row.exact_inter_02.map(|x| x / n2)),
                opt_float(row.coherent_inter.map(|x| x / n2)),
            ]
        })
        .collect();
    emit_csv(
        &[
            "v",
            "exact_intra",
            "coherent_intra",
            "exact_inter_20",
            "exact_inter_02",
            "coherent_inter",
            "exact_intra_rescaled",
            "coherent_intra_rescaled",
            "exact_inter_20_rescaled",
            "exact_inter_02_rescaled",
            "coherent_inter_rescaled",
        ],
        &quad_rows,
        &dir.join("quadrupole.csv"),
    )?;
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Me(MeCommand::Eval(args)) => {
            let frame_text = read_file("--frame", &args.frame)?;
            let frame = CoherentFrame::from_json(&frame_text)
                .map_err(|e| CliError::User(format!("--frame: {e}")))?;
            let op_text = read_file("--op", &args.op)?;
            let poly = OperatorPoly::from_json(&op_text)
                .map_err(|e| CliError::User(format!("--op: {e}")))?;
            let bra = parse_occupancy("--bra", &args.bra)?;
            let ket = parse_occupancy("--ket", &args.ket)?;
            for (field, occ) in [("--bra", &bra), ("--ket", &ket)] {
                if occ.species() != frame.species() {
                    return Err(CliError::User(format!(
                        "{field}: expected {} species counts for this frame, got {}",
                        frame.species(),
                        occ.species()
                    )));
                }
            }
            let me = matrix_element_poly(&frame, &bra, &ket, &poly)?;
            println!("{} {}", fmt_sig(me.re, 15), fmt_sig(me.im, 15));
        }
        Command::Me(MeCommand::Count(args)) => {
            if args.species == 0 {
                return Err(CliError::User("--species: must be at least 1".into()));
            }
            println!("{}", count_contributing(args.species, args.body));
        }
        Command::Oracle(OracleCommand::Check(args)) => {
            let outcome = run_oracle_check(args.seed, args.cases)?;
            if outcome.passed() {
                println!(
                    "{}/{} agree (max dev < {ORACLE_TOL:.0e})",
                    outcome.agree, outcome.cases
                );
            } else {
                println!(
                    "{}/{} agree (max dev = {:.3e})",
                    outcome.agree, outcome.cases, outcome.max_dev
                );
                return Err(CliError::SelfCheck(format!(
                    "engine and oracle disagree on {} of {} instances",
                    outcome.cases - outcome.agree,
                    outcome.cases
                )));
            }
        }
        Command::Vibron(VibronCommand::Energies(args)) => {
            let levels = spectrum_exact(args.n)?;
            if let Some(path) = &args.dump_matrix {
                let ops = build_operators();
                let basis = FockBasis::enumerate(3, args.n, None)?;
                let matrix = matrix_of(&ops.hamiltonian, &basis)?;
                let mut buffer = Vec::new();
                matrix.dump_coordinate(&mut buffer)?;
                if let Some(parent) = path.parent() {
                    if !parent.as_os_str().is_empty() {
                        fs::create_dir_all(parent)?;
                    }
                }
                fs::write(path, buffer)?;
            }
            match &args.csv {
                Some(path) => {
                    let rows: Vec<Vec<Cell>> = levels
                        .iter()
                        .map(|lv| {
                            vec![
                                Cell::Int(lv.v),
                                Cell::SignedInt(lv.l),
                                Cell::Float(lv.energy),
                            ]
                        })
                        .collect();
                    emit_csv(&["v", "l", "energy"], &rows, path)?;
                }
                None => {
                    for lv in &levels {
                        println!("{} {} {}", lv.v, lv.l, fmt_sig(lv.energy, 12));
                    }
                }
            }
        }
        Command::Vibron(VibronCommand::Transitions(args)) => {
            let intensity =
                exact_transition(args.n, args.vi, args.li, args.vf, args.lf, args.op.into())?;
            println!("{}", fmt_sig(intensity, 15));
        }
        Command::Vibron(VibronCommand::MinimizeR(args)) => {
            let r = minimize_r(args.n)?;
            println!("{r:.6}");
        }
        Command::Vibron(VibronCommand::Compare(args)) => {
            let report = compare_report(args.n)?;
            write_compare_csvs(&report, &args.out)?;
            for name in ["energies.csv", "dipole.csv", "quadrupole.csv"] {
                println!("wrote {}", args.out.join(name).display());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::SelfCheck(msg)) => {
            eprintln!("self-check failed: {msg}");
            ExitCode::from(2)
        }
    }
}
