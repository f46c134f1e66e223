//! Problem files, command dispatch and report rendering for the `lrcoh` binary.

pub mod commands;
pub mod problem;
pub mod report;

pub use commands::{Command, Flags};
pub use problem::{InputError, Problem};
pub use report::Report;

/// What a run prints and how it exits: 0 when every assertion passes,
/// 1 when one fails, 2 on an input error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub exit_code: i32,
}

pub fn report(cmd: Command, source: &str, flags: Flags) -> Result<(Report, bool), InputError> {
    let problem = Problem::parse(source)?;
    let json = flags.json || problem.file.options.format == Some(problem::Format::Json);
    Ok((commands::build(cmd, &problem, flags)?, json))
}

pub fn run(cmd: Command, source: &str, flags: Flags) -> Outcome {
    match report(cmd, source, flags) {
        Ok((r, json)) => Outcome {
            stdout: if json { r.to_json() } else { r.to_text() },
            stderr: String::new(),
            exit_code: r.exit_code(),
        },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), exit_code: 2 },
    }
}

/// Parses `LO..HI`.
pub fn parse_window(text: &str) -> Result<(i64, i64), String> {
    let (a, b) = text.split_once("..").ok_or_else(|| format!("expected LO..HI, got '{text}'"))?;
    let lo: i64 = a.trim().parse().map_err(|_| format!("bad lower end '{a}'"))?;
    let hi: i64 = b.trim().parse().map_err(|_| format!("bad upper end '{b}'"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}
