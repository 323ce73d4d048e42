//! Command-line front end. [`run`] never touches the process streams, so
//! it can be driven from tests; `main` only forwards its outcome.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::json;

use crate::char_classes::compute_u_prime;
use crate::cobordism::{chern_number_matrix, FormalVariety};
use crate::error::Error;
use crate::rational::format_rational;
use crate::universal_cycles::{decode, decode_suite, StandardCycle, TableOracle};
use crate::verify::{run_suite, SUITES};

#[derive(Parser, Debug)]
#[command(name = "chowlab", version, about = "Exact Chern-class calculus on formal test varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chern numbers of the cobordism basis in dimension `d`.
    ChernNumbers(MatrixArgs),
    /// Chern-number matrix with its rank certificate.
    CobordismMatrix(MatrixArgs),
    /// The polynomials U'_j and their leading coefficients.
    UPrime {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        ambient: u32,
        #[arg(long)]
        degree: u32,
    },
    /// Evaluates a standard cycle on a test variety.
    Evaluate(EvaluateArgs),
    /// Recovers a standard cycle from a table of oracle answers.
    Decode {
        #[arg(long)]
        oracle: PathBuf,
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        power: usize,
    },
    /// Runs a named invariant suite, or all of them.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long)]
    dim: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("target").required(true).args(["variety", "decode_suite"])))]
struct EvaluateArgs {
    #[arg(long)]
    cycle: PathBuf,
    /// Variety spec such as `P2 + P1xP1`.
    #[arg(long)]
    variety: Option<String>,
    /// Emit an oracle table over the whole decode suite instead.
    #[arg(long)]
    decode_suite: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Exit status and the text destined for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Engine(Error),
    Io(PathBuf, std::io::Error),
    Json(PathBuf, serde_json::Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Engine(Error::Degenerate { .. } | Error::Invariant(_)) | Failure::Verification(_) => 1,
            _ => 2,
        }
    }

    fn document(&self) -> serde_json::Value {
        match self {
            Failure::Engine(e) => {
                let kind = match e {
                    Error::Structural(_) => "structural",
                    Error::Degenerate { .. } => "degenerate",
                    Error::NotStandard(_) => "not_standard",
                    Error::MissingQueries(_) => "missing_queries",
                    Error::Invariant(_) => "invariant",
                    Error::Parse(_) => "parse",
                };
                let mut doc = json!({ "kind": kind, "message": e.to_string() });
                match e {
                    Error::Degenerate { mu, .. } => {
                        doc["mu"] = json!(mu.iter().map(format_rational).collect::<Vec<_>>());
                    }
                    Error::MissingQueries(m) => doc["missing"] = json!(m),
                    _ => {}
                }
                doc
            }
            Failure::Io(path, e) => json!({ "kind": "io", "message": format!("{}: {e}", path.display()) }),
            Failure::Json(path, e) => json!({ "kind": "parse", "message": format!("{}: {e}", path.display()) }),
            Failure::Verification(m) => json!({ "kind": "verification_failed", "message": m }),
        }
    }
}

/// Serializes pairs as a JSON object, keeping their order.
struct Ordered<V>(Vec<(String, V)>);

impl<V: Serialize> Serialize for Ordered<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(path.to_path_buf(), e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Json(path.to_path_buf(), e))
}

fn execute(command: Command) -> Result<(String, Option<Failure>), Failure> {
    let out = match command {
        Command::ChernNumbers(args) => {
            let m = chern_number_matrix(args.dim)?;
            match args.format {
                Format::Csv => m.to_csv(),
                Format::Json => {
                    let labels = m.column_labels();
                    let doc = Ordered(
                        m.rows
                            .iter()
                            .zip(&m.entries)
                            .map(|(x, row)| {
                                let numbers = labels.iter().cloned().zip(row.iter().map(format_rational)).collect();
                                (x.to_string(), Ordered(numbers))
                            })
                            .collect(),
                    );
                    to_json(&doc)
                }
            }
        }
        Command::CobordismMatrix(args) => {
            let m = chern_number_matrix(args.dim)?;
            match args.format {
                Format::Csv => m.to_csv(),
                Format::Json => to_json(&m),
            }
        }
        Command::UPrime { dim, ambient, degree } => to_json(&compute_u_prime(dim, ambient, degree)?),
        Command::Evaluate(args) => {
            let z: StandardCycle = read_json(&args.cycle)?;
            if args.decode_suite {
                to_json(&TableOracle::record(&z, &decode_suite(z.d(), z.k())?)?)
            } else {
                let spec = args.variety.expect("clap enforces one target");
                let x: FormalVariety = spec.parse()?;
                to_json(&z.evaluate(&x)?)
            }
        }
        Command::Decode { oracle, dim, power } => {
            let table: TableOracle = read_json(&oracle)?;
            to_json(&decode(&table, dim, power)?.cycle)
        }
        Command::Verify { suite, seed } => {
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut reports = Vec::new();
            for name in names {
                reports.push(run_suite(name, seed)?);
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
            let failure = (!failed.is_empty()).then(|| Failure::Verification(format!("failed suites: {}", failed.join(", "))));
            return Ok((to_json(&reports), failure));
        }
    };
    Ok((out, None))
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
            }
            let doc = json!({ "kind": "usage", "message": e.to_string().trim_end() });
            return Outcome { code: 2, stdout: String::new(), stderr: to_json(&doc) };
        }
    };
    match execute(cli.command) {
        Ok((stdout, None)) => Outcome { code: 0, stdout, stderr: String::new() },
        Ok((stdout, Some(f))) => Outcome { code: f.code(), stdout, stderr: to_json(&f.document()) },
        Err(f) => Outcome { code: f.code(), stdout: String::new(), stderr: to_json(&f.document()) },
    }
}
