mod bench;
mod fingerprint;
mod output;
mod sketch;
mod tally;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Failure;

const EXIT_CODES: &str = "\
Exit codes:
  0  success (query: accept)
  1  query rejected
  2  I/O error
  3  precondition violated or invalid input
  4  entry budget refused the build
  5  fp-rate bound violated under default field sizing";

#[derive(Parser)]
#[command(name = "gfstream", version, about = "GF(2^k) stream fingerprints, sparse-set sketches and tally checks", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fingerprint a bit stream in one pass.
    Fingerprint(FingerprintArgs),
    /// Build, query or stress-test a membership sketch.
    #[command(subcommand)]
    Sketch(SketchCommand),
    /// Measure streaming throughput.
    Bench(BenchArgs),
    /// Tally-set checks over big integers.
    Tally(TallyArgs),
    /// Print the irreducible polynomial used for GF(2^k).
    Irreducible {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum InputFormat {
    /// Bytes, most significant bit first.
    Raw,
    /// ASCII '0'/'1' characters; whitespace is ignored.
    Bits,
}

#[derive(Args, Debug)]
pub struct InputArgs {
    /// Input bits given inline, e.g. 1011.
    #[arg(long, conflicts_with = "input")]
    pub bits: Option<String>,
    /// Input file, or - for standard input.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "raw")]
    pub format: InputFormat,
    /// Stream length in bits; required on standard input.
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Args, Debug)]
pub struct FingerprintArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Density bound used for field sizing: linear, constant:C, power:P[/Q], low-weight:C.
    #[arg(long, default_value = "linear")]
    pub f: String,
    /// Use GF(2^k) instead of the sized field.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Add the self-delimiting bit encoding of <n, a, v>.
    #[arg(long)]
    pub paper_encoding: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct LangArgs {
    /// seeded-random, low-weight, singleton or empty.
    #[arg(long, conflicts_with = "lang_file")]
    pub lang: Option<String>,
    /// JSON language spec file.
    #[arg(long)]
    pub lang_file: Option<PathBuf>,
    #[arg(long)]
    pub lang_seed: Option<u64>,
    /// Weight limit for low-weight.
    #[arg(long)]
    pub c: Option<u32>,
    /// The member of a singleton language.
    #[arg(long)]
    pub member: Option<String>,
    /// Override the language's density bound.
    #[arg(long)]
    pub density: Option<String>,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub lang: LangArgs,
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, env = "GFSTREAM_ENTRY_BUDGET", default_value_t = gfstream::sketch::DEFAULT_ENTRY_BUDGET)]
    pub budget: u64,
}

#[derive(Subcommand)]
pub enum SketchCommand {
    /// Build the table for L^n and write it as an SPSK file.
    Build {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Look up a string (fingerprinted with --seed) or a fingerprint record.
    Query {
        #[arg(long)]
        sketch: PathBuf,
        #[command(flatten)]
        input: InputArgs,
        /// Fingerprint JSON as written by the fingerprint command.
        #[arg(long, conflicts_with_all = ["bits", "input"])]
        fingerprint: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Measure acceptance fractions of random nonmembers.
    FpRate {
        #[command(flatten)]
        build: BuildArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 500)]
        nonmembers: usize,
        #[arg(long, value_enum, default_value = "exhaustive")]
        mode: Mode,
        /// Queries per string in sampled mode.
        #[arg(long, default_value_t = 64)]
        draws: u32,
        #[arg(long, value_enum, default_value = "json")]
        report: ReportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Field degrees to measure.
    #[arg(long, value_delimiter = ',', default_values_t = [8usize, 16, 32, 64])]
    pub k: Vec<usize>,
    /// Input size per degree, in MiB.
    #[arg(long, default_value_t = 16.0)]
    pub mib: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("action").required(true).args(["padding_stable", "validate", "pad", "lemma1", "construct_f"]))]
pub struct TallyArgs {
    /// Check g(2^n + n) < 2^g(n) + g(n) for the gap function.
    #[arg(long)]
    pub padding_stable: bool,
    /// Check a set against --density and --gap.
    #[arg(long)]
    pub validate: bool,
    /// Map every length m to 2^m + m.
    #[arg(long)]
    pub pad: bool,
    /// Validate the padded set after checking its preconditions.
    #[arg(long)]
    pub lemma1: bool,
    /// Compute the first --count values of the spacing function.
    #[arg(long)]
    pub construct_f: bool,
    /// Gap function family for --padding-stable.
    #[arg(long, default_value = "iter-exp")]
    pub family: String,
    /// Iteration depth.
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Argument multiplier for iter-exp.
    #[arg(long, default_value_t = 2)]
    pub scale: u64,
    /// Comma-separated decimal params for other families.
    #[arg(long)]
    pub params: Option<String>,
    #[arg(long)]
    pub n: Option<String>,
    /// Tally set as a JSON array of decimal strings, or a file holding one.
    #[arg(long)]
    pub set: Option<String>,
    /// Density function: JSON descriptor or family[:k[:p1,p2,...]].
    #[arg(long)]
    pub density: Option<String>,
    /// Gap function: JSON descriptor or family[:k[:p1,p2,...]].
    #[arg(long)]
    pub gap: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Bit-size cap for every intermediate value.
    #[arg(long, default_value_t = gfstream::tally::DEFAULT_CAP_BITS)]
    pub cap_bits: u64,
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Fingerprint(args) => fingerprint::run(args),
        Command::Sketch(cmd) => sketch::run(cmd),
        Command::Bench(args) => bench::run(args),
        Command::Tally(args) => tally::run(args),
        Command::Irreducible { k } => {
            let p = gfstream::find_irreducible(k)?;
            println!("{p:#x}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("gfstream: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
