use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use majorant_cli::{measure, AnySampler, BenchRow};
use majorant_core::{Error, GeneratorStats, UniformSource};
use majorant_oracle::{verify_sweep, Structure};
use rand_core::{OsRng, RngCore};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "majorant", version, about = "Uniform sampling of Fibonacci words, Schröder paths and Motzkin left factors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate uniform random objects, one per line.
    Gen {
        structure: Kind,
        /// Size: weight of a Fibonacci word, half-width of a Schröder path,
        /// length of a Motzkin left factor.
        #[arg(long)]
        n: u64,
        /// Final height of Motzkin left factors.
        #[arg(long)]
        height: Option<u64>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        count: u64,
        /// A 64-bit integer, or `entropy` for a seed from the OS.
        #[arg(long, default_value = "0", value_parser = parse_seed)]
        seed: Seed,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Print session counters as one JSON line on stderr.
        #[arg(long)]
        stats: bool,
        /// Abort a draw after this many rejected proposals.
        #[arg(long)]
        max_loops: Option<u64>,
    },
    /// Check every acceptance chain exactly; prints one JSON line per check.
    Verify {
        #[arg(long, value_enum, default_value_t = Target::All)]
        structure: Target,
        /// Largest size to check [default: 2000, or 300 for motzkin].
        #[arg(long)]
        max_n: Option<u64>,
    },
    /// Time the samplers and report mean costs per object as CSV.
    Bench {
        #[arg(long)]
        structure: Kind,
        #[arg(long, value_delimiter = ',', default_value = "1000,10000,100000")]
        sizes: Vec<u64>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        /// Final height of Motzkin left factors.
        #[arg(long)]
        height: Option<u64>,
        #[arg(long, default_value = "0", value_parser = parse_seed)]
        seed: Seed,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Fib,
    Schroder,
    Motzkin,
}

impl From<Kind> for Structure {
    fn from(k: Kind) -> Structure {
        match k {
            Kind::Fib => Structure::Fib,
            Kind::Schroder => Structure::Schroder,
            Kind::Motzkin => Structure::Motzkin,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    Fib,
    Schroder,
    Motzkin,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy)]
enum Seed {
    Fixed(u64),
    Entropy,
}

impl Seed {
    fn resolve(self) -> u64 {
        match self {
            Seed::Fixed(s) => s,
            Seed::Entropy => OsRng.next_u64(),
        }
    }
}

fn parse_seed(s: &str) -> Result<Seed, String> {
    if s == "entropy" {
        return Ok(Seed::Entropy);
    }
    s.parse().map(Seed::Fixed).map_err(|_| format!("expected a 64-bit unsigned integer or `entropy`, got `{s}`"))
}

#[derive(Serialize)]
struct FibRecord<'a> {
    n: u64,
    word: &'a str,
}

#[derive(Serialize)]
struct SchroderRecord<'a> {
    n: u64,
    path: &'a str,
}

#[derive(Serialize)]
struct MotzkinRecord<'a> {
    n: u64,
    height: u64,
    word: &'a str,
}

#[derive(Serialize)]
struct StatsRecord {
    seed: u64,
    count: u64,
    outer_loops: u64,
    proposals_rejected: u64,
    proposer_retries: u64,
    accept_steps_executed: u64,
    ratio_tests: u64,
    random_calls: u64,
    max_random_arg: u64,
    max_test_operand: u64,
    large_ops: u64,
}

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_LOOP_LIMIT: u8 = 4;

fn exit_code(e: &Error) -> ExitCode {
    ExitCode::from(match e {
        Error::Contract(_) | Error::Overflow(_) => EXIT_USAGE,
        Error::Invariant(_) => EXIT_INVARIANT,
        Error::LoopLimit(_) => EXIT_LOOP_LIMIT,
    })
}

fn fail(e: Error) -> ExitCode {
    eprintln!("majorant: {e}");
    exit_code(&e)
}

/// Enforces "height iff motzkin" and returns the height to use.
fn check_height(kind: Kind, height: Option<u64>) -> u64 {
    match (kind, height) {
        (Kind::Motzkin, Some(h)) => h,
        (Kind::Motzkin, None) => Cli::command()
            .error(clap::error::ErrorKind::MissingRequiredArgument, "motzkin needs --height")
            .exit(),
        (_, Some(_)) => Cli::command()
            .error(clap::error::ErrorKind::ArgumentConflict, "--height only applies to motzkin")
            .exit(),
        (_, None) => 0,
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    kind: Kind,
    n: u64,
    height: Option<u64>,
    count: u64,
    seed: Seed,
    format: Format,
    stats: bool,
    max_loops: Option<u64>,
) -> ExitCode {
    let h = check_height(kind, height);
    let sampler = match AnySampler::new(kind.into(), n, h) {
        Ok(s) => s.with_max_loops(max_loops),
        Err(e) => return fail(e),
    };
    let seed = seed.resolve();
    let mut src = UniformSource::new(seed);
    let mut total = GeneratorStats::default();
    let mut out = BufWriter::new(io::stdout().lock());
    for _ in 0..count {
        let g = match sampler.sample(&mut src) {
            Ok(g) => g,
            Err(e) => {
                let _ = out.flush();
                return fail(e);
            }
        };
        total.merge(&g.stats);
        let word = g.object.as_str();
        let line = match (format, kind) {
            (Format::Text, _) => word.to_string(),
            (Format::Json, Kind::Fib) => serde_json::to_string(&FibRecord { n, word }).unwrap(),
            (Format::Json, Kind::Schroder) => serde_json::to_string(&SchroderRecord { n, path: word }).unwrap(),
            (Format::Json, Kind::Motzkin) => serde_json::to_string(&MotzkinRecord { n, height: h, word }).unwrap(),
        };
        if writeln!(out, "{line}").is_err() {
            return ExitCode::SUCCESS;
        }
    }
    let _ = out.flush();
    if stats {
        let record = StatsRecord {
            seed,
            count,
            outer_loops: total.outer_loops,
            proposals_rejected: total.proposals_rejected,
            proposer_retries: total.proposer_retries,
            accept_steps_executed: total.accept_steps_executed,
            ratio_tests: total.ratio_tests,
            random_calls: total.random_calls,
            max_random_arg: total.max_random_arg,
            max_test_operand: total.max_test_operand,
            large_ops: total.large_ops,
        };
        eprintln!("{}", serde_json::to_string(&record).unwrap());
    }
    ExitCode::SUCCESS
}

fn verify(target: Target, max_n: Option<u64>) -> ExitCode {
    let structures: &[Structure] = match target {
        Target::Fib => &[Structure::Fib],
        Target::Schroder => &[Structure::Schroder],
        Target::Motzkin => &[Structure::Motzkin],
        Target::All => &[Structure::Fib, Structure::Schroder, Structure::Motzkin],
    };
    let mut out = BufWriter::new(io::stdout().lock());
    let mut all_pass = true;
    for &s in structures {
        let limit = max_n.unwrap_or(if s == Structure::Motzkin { 300 } else { 2000 });
        for report in verify_sweep(s, limit) {
            all_pass &= report.pass;
            if writeln!(out, "{}", serde_json::to_string(&report).unwrap()).is_err() {
                break;
            }
        }
    }
    let _ = out.flush();
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY_FAILED)
    }
}

fn bench(kind: Kind, sizes: &[u64], samples: u64, height: Option<u64>, seed: Seed, csv: Option<&str>) -> ExitCode {
    let h = check_height(kind, height);
    let seed = seed.resolve();
    let mut rows: Vec<BenchRow> = Vec::new();
    for &n in sizes {
        let sampler = match AnySampler::new(kind.into(), n, h) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        let height = matches!(kind, Kind::Motzkin).then_some(h);
        match measure(&sampler, n, height, samples, seed) {
            Ok(row) => rows.push(row),
            Err(e) => return fail(e),
        }
    }
    let sink: Box<dyn Write> = match csv {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("majorant: cannot write {path}: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Box::new(io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    for row in &rows {
        if let Err(e) = writer.serialize(row) {
            eprintln!("majorant: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }
    let _ = writer.flush();
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Gen { structure, n, height, count, seed, format, stats, max_loops } => {
            generate(structure, n, height, count, seed, format, stats, max_loops)
        }
        Command::Verify { structure, max_n } => verify(structure, max_n),
        Command::Bench { structure, sizes, samples, height, seed, csv } => {
            bench(structure, &sizes, samples, height, seed, csv.as_deref())
        }
    }
}
