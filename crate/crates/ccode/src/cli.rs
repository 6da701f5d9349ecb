//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a check or operation failed, 2 bad usage.
//! Results go to standard output or `-o` files, diagnostics to standard
//! error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use ccode_core::code::{family_code, quasi2_code};
use ccode_core::matrix::{build_parity_check, verify_parity_check};
use ccode_core::search::check_search_length;
use ccode_core::{ArrayCode, Codec, ErasurePattern, Family, Stripe};
use clap::{Parser, Subcommand, ValueEnum};

use crate::codefile::{parse_code_file_with, write_code_file, Checks, CodeFileError};
use crate::report;
use crate::stripefile::{read_stripe, write_stripe, StripeFileError};

pub const DEFAULT_BLOCK_SIZE: usize = 4096;
/// Longest length `search --count` runs without `--allow-large`.
pub const COUNT_CAP: usize = 16;
/// Longest length a first-hit search runs without `--allow-large`.
pub const FIRST_CAP: usize = 24;

#[derive(Debug, Parser)]
#[command(
    name = "ccode",
    version,
    about = "Cyclic lowest-density MDS array codes for double-erasure protection"
)]
struct Cli {
    /// Load code files with structural checks only.
    #[arg(long, global = true)]
    no_verify: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a code of the given length and write its code file.
    Construct {
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Method::Search)]
        method: Method,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        /// Allow first-hit searches above length 24.
        #[arg(long)]
        allow_large: bool,
    },
    /// Check a code file with the graph oracle, the matrix oracle or both.
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Oracle::Both)]
        oracle: Oracle,
    },
    /// Write the twin of a code.
    Twin {
        file: PathBuf,
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Print the parity-check matrix, one row per line, blocks separated by spaces.
    Matrix { file: PathBuf },
    /// Exhaustive search over even starters.
    Search {
        #[arg(long)]
        length: usize,
        /// Print the number of codes (default).
        #[arg(long, conflicts_with = "first")]
        count: bool,
        /// Print the first code found.
        #[arg(long)]
        first: bool,
        /// Allow counts above length 16 and first hits above length 24.
        #[arg(long)]
        allow_large: bool,
    },
    /// Encode a data file into one stripe.
    Encode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Block size in bytes.
        #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
        block_size: usize,
    },
    /// Rebuild up to two erased columns of a stripe and write the data.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        /// Erased column indices, e.g. `3` or `0,5`.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        erased: Vec<usize>,
        #[arg(long = "out")]
        output: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Search,
    FamilyA,
    FamilyB,
    FamilyATwin,
    FamilyBTwin,
    Quasi2,
    Quasi2Twin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Oracle {
    Matrix,
    Graph,
    Both,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    CodeFile {
        path: PathBuf,
        source: CodeFileError,
    },
    #[error("{path}: {source}")]
    StripeFile {
        path: PathBuf,
        source: StripeFileError,
    },
    #[error("{0}")]
    Core(#[from] ccode_core::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult = Result<(), CliError>;

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult {
    fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_code(path: &Path, checks: Checks) -> Result<ArrayCode, CliError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::CodeFile {
        path: path.to_owned(),
        source: CodeFileError::Parse {
            line: 1,
            column: 1,
            message: "file is not UTF-8".into(),
        },
    })?;
    parse_code_file_with(&text, checks).map_err(|source| CliError::CodeFile {
        path: path.to_owned(),
        source,
    })
}

fn load_stripe(path: &Path) -> Result<Stripe, CliError> {
    read_stripe(&read(path)?).map_err(|source| CliError::StripeFile {
        path: path.to_owned(),
        source,
    })
}

fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> CliResult {
    match output {
        Some(path) => write_file(path, text.as_bytes()),
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn say(w: &mut dyn Write, text: std::fmt::Arguments<'_>) {
    // a closed pipe is not worth failing the command over
    let _ = w.write_fmt(text);
    let _ = w.write_all(b"\n");
}

fn prime_for(length: usize, p: usize, formula: &str) -> Result<usize, CliError> {
    if !ccode_core::groups::is_prime(p as u64) {
        return Err(CliError::Usage(format!(
            "length {length} needs p = {formula} = {p} to be prime"
        )));
    }
    if p < 5 {
        return Err(CliError::Usage(format!(
            "length {length} gives p = {p}; the families need p >= 5"
        )));
    }
    Ok(p)
}

fn construct(length: usize, method: Method, allow_large: bool) -> Result<ArrayCode, CliError> {
    let family = |f: Family| -> Result<ArrayCode, CliError> {
        let p = prime_for(length, length + 1, "length + 1")?;
        Ok(family_code(p, f)?)
    };
    let quasi = |twin: bool| -> Result<ArrayCode, CliError> {
        if !length.is_multiple_of(2) {
            return Err(CliError::Usage(format!(
                "quasi2 needs an even length, got {length}"
            )));
        }
        let p = prime_for(length, length / 2 + 1, "length/2 + 1")?;
        Ok(quasi2_code(p, twin)?)
    };
    match method {
        Method::Search => {
            check_length(length, FIRST_CAP, allow_large)?;
            report::find_first_ccode(length)?
                .ok_or_else(|| CliError::Failed(format!("no C-Code of length {length} exists")))
        }
        Method::FamilyA => family(Family::A),
        Method::FamilyB => family(Family::B),
        Method::FamilyATwin => family(Family::ATwin),
        Method::FamilyBTwin => family(Family::BTwin),
        Method::Quasi2 => quasi(false),
        Method::Quasi2Twin => quasi(true),
    }
}

fn check_length(length: usize, cap: usize, allow_large: bool) -> CliResult {
    check_search_length(length).map_err(|_| {
        CliError::Usage(format!(
            "search length must be even and between 4 and 36, got {length}"
        ))
    })?;
    if length > cap && !allow_large {
        return Err(CliError::Usage(format!(
            "length {length} is above {cap}; pass --allow-large to search anyway"
        )));
    }
    Ok(())
}

/// Runs both oracles as requested, printing one line per oracle.
fn verify(code: &ArrayCode, oracle: Oracle, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let graph = matches!(oracle, Oracle::Graph | Oracle::Both).then(|| code.verify_condition1());
    let matrix = match oracle {
        Oracle::Graph => None,
        _ => Some(verify_parity_check(
            &build_parity_check(code),
            code.length(),
            code.kappa(),
        )?),
    };
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    if let Some(g) = graph {
        say(out, format_args!("graph: {}", verdict(g)));
    }
    if let Some(m) = matrix {
        say(out, format_args!("matrix: {}", verdict(m)));
    }
    if let (Some(g), Some(m)) = (graph, matrix) {
        if g != m {
            say(
                err,
                format_args!(
                    "oracles disagree: graph {}, matrix {}",
                    verdict(g),
                    verdict(m)
                ),
            );
            return Err(CliError::Failed("oracle disagreement".into()));
        }
    }
    if graph == Some(false) || matrix == Some(false) {
        return Err(CliError::Failed("code is not MDS".into()));
    }
    Ok(())
}

fn print_matrix(code: &ArrayCode, out: &mut dyn Write) {
    let h = build_parity_check(code);
    let n = code.rows();
    for r in 0..h.rows() {
        let mut line = String::with_capacity(h.cols() + code.length());
        for c in 0..h.cols() {
            if c > 0 && c % n == 0 {
                line.push(' ');
            }
            line.push(if h.get(r, c) { '1' } else { '0' });
        }
        say(out, format_args!("{line}"));
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let checks = if cli.no_verify {
        Checks::Structural
    } else {
        Checks::Full
    };
    match cli.command {
        Command::Construct {
            length,
            method,
            output,
            allow_large,
        } => {
            let code = construct(length, method, allow_large)?;
            if !code.verify_condition1() {
                return Err(CliError::Failed(
                    "constructed code fails the graph oracle".into(),
                ));
            }
            emit(out, output.as_deref(), &write_code_file(&code))
        }
        Command::Verify { file, oracle } => {
            let code = load_code(&file, Checks::Structural)?;
            verify(&code, oracle, out, err)
        }
        Command::Twin { file, output } => {
            let code = load_code(&file, checks)?;
            let twin = code.twin()?;
            if checks == Checks::Full && !twin.verify_condition1() {
                return Err(CliError::Failed("twin fails the graph oracle".into()));
            }
            emit(out, output.as_deref(), &write_code_file(&twin))
        }
        Command::Matrix { file } => {
            let code = load_code(&file, checks)?;
            print_matrix(&code, out);
            Ok(())
        }
        Command::Search {
            length,
            count: _,
            first,
            allow_large,
        } => {
            if first {
                check_length(length, FIRST_CAP, allow_large)?;
                match report::find_first_ccode(length)? {
                    Some(code) => emit(out, None, &write_code_file(&code)),
                    None => Err(CliError::Failed(format!(
                        "no C-Code of length {length} exists"
                    ))),
                }
            } else {
                check_length(length, COUNT_CAP, allow_large)?;
                let r = report::count_ccodes(length)?;
                say(out, format_args!("{}", r.codes_found));
                say(
                    err,
                    format_args!(
                        "length {}: {} codes among {} even starters in {:.3} s",
                        r.length,
                        r.codes_found,
                        r.starters_examined,
                        r.elapsed.as_secs_f64()
                    ),
                );
                Ok(())
            }
        }
        Command::Encode {
            code,
            input,
            output,
            block_size,
        } => {
            let code = load_code(&code, checks)?;
            let data = read(&input)?;
            let codec = Codec::new(&code);
            if block_size == 0 {
                return Err(CliError::Usage("block size must be at least 1".into()));
            }
            let capacity = codec.info_capacity(block_size);
            if data.len() > capacity {
                return Err(CliError::Failed(format!(
                    "{} bytes do not fit one stripe of {capacity} bytes at block size {block_size}",
                    data.len()
                )));
            }
            let mut info = data;
            info.resize(capacity, 0);
            let stripe = codec.encode(&info, block_size)?;
            write_file(&output, &write_stripe(&stripe))
        }
        Command::Decode {
            code,
            input,
            erased,
            output,
        } => {
            let code = load_code(&code, checks)?;
            let mut stripe = load_stripe(&input)?;
            if stripe.length() != code.length() {
                return Err(CliError::Failed(format!(
                    "stripe has length {} but the code has length {}",
                    stripe.length(),
                    code.length()
                )));
            }
            let pattern = ErasurePattern::new(&erased, code.length())
                .map_err(|e| CliError::Usage(format!("--erased: {e}")))?;
            let codec = Codec::new(&code);
            codec.decode(&mut stripe, &pattern)?;
            let bad = codec.scrub(&stripe)?;
            if !bad.is_empty() {
                return Err(CliError::Failed(format!(
                    "stripe is inconsistent after repair; parities {bad:?} disagree (damage outside the erased columns?)"
                )));
            }
            write_file(&output, &stripe.info_bytes())
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            say(err, format_args!("error: {e}"));
            e.exit_code()
        }
    }
}
