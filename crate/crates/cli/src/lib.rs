//! Command-line front end for `meyerion-core`: scheme files, reports, CSV
//! tables and SVG pictures. Every report starts with the input hash and an
//! echo of the parsed parameters.

mod commands;
pub mod files;
mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use files::{SchemeFile, Input};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] meyerion_core::Error),
    #[error("input error: {0}")]
    Input(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use meyerion_core::Error as E;
        match self {
            CliError::Core(E::Input(_)) | CliError::Input(_) | CliError::Io(_) => 1,
            CliError::Core(E::Invariant(_)) | CliError::Invariant(_) => 2,
            CliError::Core(E::Reliability(_) | E::Unsupported(_)) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "meyerion", version, about = "Exact cut-and-project sets, Ellis semigroups and substitution spectra")]
pub struct Cli {
    /// Report format on standard output.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scheme files: validation, generation, built-in examples.
    #[command(subcommand)]
    Scheme(SchemeCommand),
    /// Singular hyperplane arrangement.
    #[command(subcommand)]
    Arrangement(ArrangementCommand),
    /// The finite monoid of transformation types and its action.
    #[command(subcommand)]
    Ellis(EllisCommand),
    /// Fiber of the torus parametrization over a point.
    Fiber(commands::FiberArgs),
    /// One-dimensional substitutions.
    #[command(subcommand)]
    Subst(SubstCommand),
    /// Upper bound on the hull distance of two point files.
    Metric(commands::MetricArgs),
    /// Strong proximality witness and symmetric-difference densities.
    Proximality(commands::ProximalityArgs),
}

#[derive(Debug, Subcommand)]
pub enum SchemeCommand {
    Validate { scheme: PathBuf },
    Generate(commands::GenerateArgs),
    /// Print a built-in scheme as a scheme file.
    Builtin { name: commands::Builtin },
}

#[derive(Debug, Subcommand)]
pub enum ArrangementCommand {
    Analyze { scheme: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum EllisCommand {
    /// Cayley table, minimal ideal and Hasse diagram.
    Table {
        scheme: PathBuf,
        /// Write the Cayley table here instead of into the text report.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Apply an element `xi;signs` to a point `xi;signs`.
    Act {
        scheme: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum SubstCommand {
    Classify(commands::ClassifyArgs),
}

/// A finished command: human text, the JSON report and the exit status.
pub struct Report {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

/// Header shared by all reports.
pub(crate) struct Meta {
    command: &'static str,
    inputs: Vec<(String, String)>,
    parameters: Vec<(&'static str, String)>,
}

impl Meta {
    pub fn new(command: &'static str) -> Self {
        Meta {
            command,
            inputs: Vec::new(),
            parameters: Vec::new(),
        }
    }

    pub fn input(mut self, name: impl Into<String>, sha256: &str) -> Self {
        self.inputs.push((name.into(), sha256.to_string()));
        self
    }

    pub fn param(mut self, name: &'static str, value: impl ToString) -> Self {
        self.parameters.push((name, value.to_string()));
        self
    }

    pub fn text(&self) -> String {
        let mut out = format!("# meyerion {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        for (name, hash) in &self.inputs {
            out += &format!("# sha256 {name} {hash}\n");
        }
        for (k, v) in &self.parameters {
            out += &format!("# {k} = {v}\n");
        }
        out
    }

    pub fn json(&self) -> Value {
        let inputs: Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let params: Map<String, Value> = self.parameters.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
        json!({
            "tool": "meyerion",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs_sha256": inputs,
            "parameters": params,
        })
    }

    pub fn report(self, body_text: String, mut body: Value, code: i32) -> Report {
        body["meta"] = self.json();
        Report {
            text: self.text() + &body_text,
            json: body,
            code,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Scheme(SchemeCommand::Validate { scheme }) => commands::scheme_validate(scheme),
        Command::Scheme(SchemeCommand::Generate(args)) => commands::scheme_generate(args),
        Command::Scheme(SchemeCommand::Builtin { name }) => commands::scheme_builtin(*name),
        Command::Arrangement(ArrangementCommand::Analyze { scheme }) => commands::arrangement_analyze(scheme),
        Command::Ellis(EllisCommand::Table { scheme, csv }) => commands::ellis_table(scheme, csv.as_deref()),
        Command::Ellis(EllisCommand::Act { scheme, element, point }) => commands::ellis_act(scheme, element, point),
        Command::Fiber(args) => commands::fiber(args),
        Command::Subst(SubstCommand::Classify(args)) => commands::subst_classify(args),
        Command::Metric(args) => commands::metric(args),
        Command::Proximality(args) => commands::proximality(args),
    }
}

/// Runs the tool on `args`, writing the report to `out` and diagnostics to
/// `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let result = execute(&cli).and_then(|report| {
        if let Some(path) = &cli.report {
            files::write_file(path, &pretty(&report.json))?;
        }
        Ok(report)
    });
    match result {
        Ok(report) => {
            let shown = match cli.format {
                Format::Text => report.text,
                Format::Json => pretty(&report.json),
            };
            let _ = out.write_all(shown.as_bytes());
            report.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub(crate) fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}
