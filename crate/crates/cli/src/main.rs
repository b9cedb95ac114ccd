//! `qpoly`: weights, axiom reports and duality checks for rank-metric codes.
//!
//! Exit codes: 0 success, 1 a checked property is violated, 2 bad input,
//! 3 a resource guard was hit.

mod format;
mod report;
mod verify;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpoly::delsarte::{gabidulin, random_code};
use qpoly::lattice::{enumerate_subspaces, DEFAULT_MAX_MEMBERS};
use qpoly::{support_space, Error, Matrix, PolymatroidTable, Subspace};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use format::{field_of_order, parse_input, serialize_records, CodeRecord, Record, TableRecord};
use verify::Checks;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn context(self, what: &str) -> Self {
        Failure { code: self.code, message: format!("{what}: {}", self.message) }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LatticeTooLarge { .. }
            | Error::PairScanTooLarge { .. }
            | Error::CodewordGuard { .. }
            | Error::FieldTooLarge { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

#[derive(Parser)]
#[command(name = "qpoly", version, about = "Generalized weights and duality checks for Delsarte rank-metric codes")]
struct Cli {
    /// Largest subspace lattice that may be enumerated.
    #[arg(long, global = true, env = "QPOLY_MAX_LATTICE", default_value_t = DEFAULT_MAX_MEMBERS)]
    max_lattice: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Weights, dual weights, h-profiles, axiom verdict and Wei partitions.
    Weights {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Also report the anticode weights a_r (single codes only).
        #[arg(long)]
        anticode: bool,
    },
    /// Check axioms, Wei duality and flag duality; exits 1 on a violation.
    Verify {
        /// Code, flag or table file. Without it a random population is checked.
        input: Option<PathBuf>,
        #[arg(long)]
        axioms: bool,
        #[arg(long)]
        wei: bool,
        #[arg(long)]
        flag_duality: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Write a code or table file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[command(flatten)]
        common: GenCommon,
    },
}

#[derive(Args)]
struct GenCommon {
    /// Output path; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    label: Option<String>,
}

#[derive(Subcommand)]
enum GenKind {
    /// Gabidulin code with evaluation points 1, α, …, α^{n−1} (prime q).
    Gabidulin {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// The code 𝕄(X) of all m×n matrices with rows in X.
    UniformSupport {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// A spanning vector of X as comma-separated entries; repeatable.
        #[arg(long = "basis", value_delimiter = ';')]
        basis: Vec<String>,
    },
    /// Uniformly random K-dimensional code.
    Random {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank table of the uniform U(r, n), or of its nullity function.
    Uniform {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        nullity: bool,
    },
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Writes via a sibling temporary file and a rename.
fn write_atomically(path: &Path, contents: &str) -> Result<(), Failure> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let io = |e: std::io::Error| Failure::input(format!("{}: {e}", path.display()));
    fs::write(&tmp, contents).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomically(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::input(format!("stdout: {e}")))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn parse_vector(s: &str, n: usize) -> Result<Vec<u32>, Failure> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| Failure::input(format!("basis: '{s}' is not a list of integers"))))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(Failure::input(format!("basis: '{s}' has {} entries, expected n = {n}", v.len())));
    }
    Ok(v)
}

fn generate(kind: &GenKind, label: Option<String>, max_lattice: u64) -> Result<Record, Failure> {
    let code = match *kind {
        GenKind::Gabidulin { q, m, n, k } => gabidulin(q, m, n, k)?,
        GenKind::UniformSupport { q, m, n, ref basis } => {
            let f = field_of_order(q)?;
            let rows = basis.iter().map(|s| parse_vector(s, n)).collect::<Result<Vec<_>, _>>()?;
            let x = Subspace::from_matrix(&Matrix::from_rows(&f, n, &rows).map_err(|e| Failure::from(e).context("basis"))?);
            support_space(&x, m)
        }
        GenKind::Random { q, m, n, k, seed } => {
            let f = field_of_order(q)?;
            random_code(&f, m, n, k, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
        GenKind::Uniform { q, m, n, r, nullity } => {
            let lat = enumerate_subspaces(&field_of_order(q)?, n, max_lattice)?;
            let mut table = PolymatroidTable::uniform(lat, r, m)?;
            if nullity {
                table = table.nullity_table();
            }
            return Ok(Record::Table(TableRecord::from_table(&table, label)));
        }
    };
    Ok(Record::Code(CodeRecord::from_code(&code, label)))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Weights { input, format, anticode } => {
            let input = parse_input(&read(&input)?, cli.max_lattice)?;
            let doc = report::build_report(&input, anticode, cli.max_lattice)?;
            let text = match format {
                Format::Json => json(&doc),
                Format::Text => report::render_text(&doc),
            };
            emit(None, &text)?;
            Ok(0)
        }
        Command::Verify { input, axioms, wei, flag_duality, seed, trials, format } => {
            let checks = Checks { axioms, wei, flag_duality };
            let doc = match input {
                Some(path) => {
                    let input = parse_input(&read(&path)?, cli.max_lattice)?;
                    verify::verify_input(&input, checks, cli.max_lattice)?
                }
                None => verify::verify_random(seed, trials, checks, cli.max_lattice)?,
            };
            let text = match format {
                Format::Json => json(&doc),
                Format::Text => verify::render_text(&doc),
            };
            emit(None, &text)?;
            Ok(if doc.passed { 0 } else { 1 })
        }
        Command::Gen { kind, common } => {
            let record = generate(&kind, common.label, cli.max_lattice)?;
            emit(common.out.as_deref(), &serialize_records(&[record]))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
