//! The `ait` command line: argument parsing and dispatch.
//!
//! [`execute`] is the whole program minus process plumbing, so tests can run
//! it in-process and compare bytes.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use ait_core::{BitString, Dyadic};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use report::{Report, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    /// The command ran but the result is a domain failure (overflow,
    /// violation, limits too small). Exit status 1.
    #[error("{0}")]
    Domain(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A finished run: exit status and the bytes for each stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
}

/// Accepts `n`, `a^b` and `aeb`.
fn parse_count(s: &str) -> Result<u64, String> {
    let bad = || format!("expected a natural number like 100000, 10^5 or 1e5, got {s:?}");
    let pow = |base: u64, exp: &str| -> Result<u64, String> {
        let e: u32 = exp.parse().map_err(|_| bad())?;
        base.checked_pow(e)
            .ok_or_else(|| format!("{s} overflows 64 bits"))
    };
    if let Some((b, e)) = s.split_once('^') {
        pow(b.parse().map_err(|_| bad())?, e)
    } else if let Some((m, e)) = s.split_once('e') {
        let m: u64 = m.parse().map_err(|_| bad())?;
        m.checked_mul(pow(10, e)?)
            .ok_or_else(|| format!("{s} overflows 64 bits"))
    } else {
        s.parse().map_err(|_| bad())
    }
}

fn parse_bits(s: &str) -> Result<BitString, String> {
    s.parse()
        .map_err(|e: ait_core::BitStringError| e.to_string())
}

fn parse_dyadic(s: &str) -> Result<Dyadic, String> {
    s.parse()
        .map_err(|e: ait_core::bitstr::ParseDyadicError| e.to_string())
}

fn parse_test(s: &str) -> Result<String, String> {
    let names = ait_core::mltest::test_names();
    if names.iter().any(|n| n == s) {
        Ok(s.to_string())
    } else {
        Err(format!(
            "unknown test {s:?}; registered: {}",
            names.join(", ")
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// `U`, `V`, or a machine index run directly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MachineArg {
    U,
    V,
    Index(u64),
}

fn parse_machine(s: &str) -> Result<MachineArg, String> {
    match s {
        "U" | "u" => Ok(MachineArg::U),
        "V" | "v" => Ok(MachineArg::V),
        other => other
            .parse()
            .map(MachineArg::Index)
            .map_err(|_| format!("expected U, V or a machine index, got {other:?}")),
    }
}

fn parse_universal(s: &str) -> Result<ait_core::Universal, String> {
    match parse_machine(s)? {
        MachineArg::U => Ok(ait_core::Universal::Plain),
        MachineArg::V => Ok(ait_core::Universal::Prefix),
        MachineArg::Index(_) => Err("expected U or V".into()),
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ait",
    version,
    about = "Budget-bounded experiments in algorithmic information theory"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Step budget per program run.
    #[arg(long, global = true, default_value = "100000", value_parser = parse_count)]
    budget: u64,
    /// Longest program searched.
    #[arg(long, global = true, default_value_t = 12)]
    len_limit: usize,
    /// Materialization depth for test sets.
    #[arg(long, global = true, default_value_t = 10)]
    depth: usize,
    /// Dovetail stage.
    #[arg(long, global = true, default_value = "1024", value_parser = parse_count)]
    stage: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SetInput {
    /// Bit strings (`-` is the empty string).
    #[arg(value_parser = parse_bits)]
    strings: Vec<BitString>,
    /// Newline-separated bit strings.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List strings in canonical order with their indices.
    Enum {
        #[arg(long, default_value_t = 16)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        start: u64,
    },
    /// Replace a set by an antichain with the same cover.
    Pfz(SetInput),
    /// Assign prefix-free codewords to a length sequence.
    Kraft {
        #[arg(long, value_delimiter = ',', required = true)]
        lengths: Vec<usize>,
    },
    /// Kraft sum and cover measure of a set.
    Measure(SetInput),
    /// Run `U`, `V` or a numbered machine on one input.
    Run {
        #[arg(long, default_value = "V", value_parser = parse_machine)]
        machine: MachineArg,
        #[arg(value_parser = parse_bits)]
        input: BitString,
    },
    /// Budgeted complexity.
    Complexity {
        #[command(subcommand)]
        command: ComplexityCommand,
    },
    /// Lower bounds on the halting probability of `V`.
    Omega {
        /// Report the first stage at which the bound exceeds this value.
        #[arg(long, value_parser = parse_dyadic, conflicts_with = "psi")]
        until_mass: Option<Dyadic>,
        /// Reconstruct the short halting programs from this prefix.
        #[arg(long, value_parser = parse_bits)]
        psi: Option<BitString>,
    },
    /// Martin-Löf tests.
    Mltest {
        #[command(subcommand)]
        command: MltestCommand,
    },
}

#[derive(Debug, Subcommand)]
enum ComplexityCommand {
    /// Best bound for each string up to a length, or for the given strings.
    Scan {
        #[arg(long, default_value = "V", value_parser = parse_universal)]
        machine: ait_core::Universal,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
        #[arg(value_parser = parse_bits)]
        strings: Vec<BitString>,
    },
    /// Strings of each length with no shorter plain witness.
    Census {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// The padding witness on a fixed stream.
    Pad {
        #[arg(long, value_enum, default_value_t = Pattern::Zeros)]
        pattern: Pattern,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Least length whose strings all have a compressible prefix.
    Horizon {
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        m_max: usize,
    },
    /// Both subadditivity statements over short pairs.
    Subadd {
        #[arg(long, default_value_t = 4)]
        n_max: usize,
    },
    /// Minimal-length programs per output.
    Short {
        #[arg(long, default_value = "V", value_parser = parse_universal)]
        machine: ait_core::Universal,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Pattern {
    Zeros,
    Ones,
    Alternating,
}

#[derive(Debug, Subcommand)]
enum MltestCommand {
    /// Check the measure bound of a sense-1 test level by level.
    Validate {
        #[arg(long, value_parser = parse_test)]
        test: String,
        #[arg(long, default_value_t = 10)]
        levels: u64,
        #[arg(long, default_value_t = ait_core::mltest::DEFAULT_DEPTH_CAP)]
        depth_cap: usize,
    },
    /// Materialize the sense-2 form of a sense-1 test.
    Convert {
        #[arg(long, value_parser = parse_test)]
        test: String,
        #[arg(long, default_value_t = 6)]
        levels: u64,
    },
    /// The universal test over every registered test.
    Universal {
        #[arg(long, default_value_t = 5)]
        levels: u64,
    },
    /// Levels reached by a string on every registered test.
    Score {
        #[arg(long, value_parser = parse_bits, required_unless_present = "omega_bits")]
        subject: Option<BitString>,
        /// Score the first bits of the stage lower bound on Ω instead.
        #[arg(long, conflicts_with = "subject")]
        omega_bits: Option<usize>,
        #[arg(long, default_value_t = 8)]
        levels: u64,
    },
    /// Kraft-code the even levels of a converted test into a decoder.
    Bridge {
        #[arg(long, value_parser = parse_test, default_value = "leading-zeros")]
        test: String,
        #[arg(long, default_value_t = 2)]
        levels: u64,
    },
}

/// Runs the program on `args` (without the program name).
pub fn execute<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv = std::iter::once(OsString::from("ait")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string().into_bytes();
            return if e.use_stderr() {
                Execution {
                    code: 2,
                    stdout: Vec::new(),
                    stderr: text,
                }
            } else {
                Execution {
                    code: 0,
                    stdout: text,
                    stderr: Vec::new(),
                }
            };
        }
    };
    let reg = ait_core::Registry::new();
    let g = &cli.global;
    let config = RunConfig {
        budget: g.budget,
        len_limit: g.len_limit,
        depth: g.depth,
        stage: g.stage,
        registry_fingerprint: reg.fingerprint().to_string(),
    };
    let (report, failure) = match commands::run(&cli.command, &config, &reg) {
        Ok(done) => done,
        Err(e) => {
            return Execution {
                code: 1,
                stdout: Vec::new(),
                stderr: format!("error: {e}\n").into_bytes(),
            }
        }
    };
    let body = match g.format {
        Format::Csv => report.to_csv(&config),
        Format::Json => report.to_json(&config),
    };
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    match &g.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return Execution {
                    code: 1,
                    stdout,
                    stderr: format!("error: cannot write {}: {e}\n", path.display()).into_bytes(),
                };
            }
        }
        None => stdout = body.into_bytes(),
    }
    let code = match failure {
        Some(msg) => {
            stderr.extend_from_slice(format!("error: {msg}\n").as_bytes());
            1
        }
        None => 0,
    };
    Execution {
        code,
        stdout,
        stderr,
    }
}
