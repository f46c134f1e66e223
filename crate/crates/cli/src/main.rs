use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lrcoh_cli::{parse_window, run, Command, Flags};

#[derive(Parser)]
#[command(name = "lrcoh", version, about = "Lie-Rinehart cohomology and connections on quasi-homogeneous surfaces and monomial curves")]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Degree window LO..HI for cohomology tables.
    #[arg(long, global = true, value_parser = parse_window, allow_hyphen_values = true)]
    window: Option<(i64, i64)>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-degree cohomology table and the structure assertions.
    Cohomology { file: PathBuf },
    /// Generators of Der(R), brackets, the matrix factorization.
    Derivations { file: PathBuf },
    /// Milnor and Tjurina numbers and the cohomology cross-check.
    Invariants { file: PathBuf },
    /// Connections on the module in the problem file.
    Connection {
        #[command(subcommand)]
        op: ConnOp,
    },
    /// Semigroup data, connection trichotomy and cohomology for k[Gamma].
    Curve { file: PathBuf },
}

#[derive(Subcommand)]
enum ConnOp {
    Find { file: PathBuf },
    Check { file: PathBuf },
    Curvature { file: PathBuf },
    Class { file: PathBuf },
    Equiv { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, file) = match cli.command {
        Cmd::Cohomology { file } => (Command::Cohomology, file),
        Cmd::Derivations { file } => (Command::Derivations, file),
        Cmd::Invariants { file } => (Command::Invariants, file),
        Cmd::Curve { file } => (Command::Curve, file),
        Cmd::Connection { op } => match op {
            ConnOp::Find { file } => (Command::ConnectionFind, file),
            ConnOp::Check { file } => (Command::ConnectionCheck, file),
            ConnOp::Curvature { file } => (Command::ConnectionCurvature, file),
            ConnOp::Class { file } => (Command::ConnectionClass, file),
            ConnOp::Equiv { file } => (Command::ConnectionEquiv, file),
        },
    };
    let source = match std::fs::read_to_string(&file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let out = run(cmd, &source, Flags { json: cli.json, window: cli.window });
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.exit_code as u8)
}
