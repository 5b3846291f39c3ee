use std::collections::HashSet;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use digestlab_core::analysis::{self, Algorithm, AnalysisReport, ReportRow, TABLE_I_INPUTS};
use digestlab_core::{digest, md5, AlgorithmParams, Block128, RenderFormat, DEFAULT_IV};

mod csv_out;

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Guard(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Guard(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Guard(m) => m,
        }
    }
}

impl From<digestlab_core::Error> for CliError {
    fn from(e: digestlab_core::Error) -> Self {
        match e {
            digestlab_core::Error::EnumerationTooLarge { .. } => CliError::Guard(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Factorial-keyed 128-bit digest, MD5 baseline, and comparison harness.
#[derive(Debug, Parser)]
#[command(name = "digestlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the 128-bit block digest of FILE (or standard input).
    Digest {
        #[command(flatten)]
        key: KeyArgs,
        #[arg(long, value_enum, default_value_t = Format::Hex)]
        format: Format,
        /// Input file; `-` or nothing reads standard input.
        input: Option<PathBuf>,
    },
    /// Print the MD5 digest of FILE (or standard input).
    Md5 { input: Option<PathBuf> },
    /// Run one of the comparison experiments.
    Analyze {
        #[command(subcommand)]
        experiment: Experiment,
    },
}

#[derive(Debug, Args)]
struct KeyArgs {
    /// Key-schedule seed in [1, 966].
    #[arg(long, env = "DIGESTLAB_SEED", default_value_t = 1)]
    seed: u64,
    /// Initial chain value as 32 hex digits.
    #[arg(long)]
    iv: Option<String>,
}

#[derive(Debug, Args)]
struct AnalysisKeyArgs {
    /// Key-schedule seed in [1, 966] for the dl128 digest.
    #[arg(long = "key-seed", env = "DIGESTLAB_SEED", default_value_t = 1)]
    key_seed: u64,
    /// Initial chain value for the dl128 digest, 32 hex digits.
    #[arg(long)]
    iv: Option<String>,
}

#[derive(Debug, Args)]
struct CsvArg {
    /// Also write rows as CSV to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Hex,
    Paper,
    Binary,
}

impl From<Format> for RenderFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Hex => RenderFormat::Hex,
            Format::Paper => RenderFormat::Paper,
            Format::Binary => RenderFormat::Binary,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgoChoice {
    Md5,
    Dl128,
    Both,
}

#[derive(Debug, Subcommand)]
enum Experiment {
    /// Distinct-character percentages of rendered digests.
    Distinct {
        /// One input per line; defaults to the five reference strings.
        #[arg(long)]
        strings: Option<PathBuf>,
        /// Rendering of dl128 digests before counting.
        #[arg(long, value_enum, default_value_t = Format::Paper)]
        render: Format,
        #[command(flatten)]
        key: AnalysisKeyArgs,
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Mean and spread of digest bits flipped by a single input-bit flip.
    Avalanche {
        #[arg(long, value_enum, default_value_t = AlgoChoice::Both)]
        algo: AlgoChoice,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Random input length in bytes.
        #[arg(long, default_value_t = 64)]
        len: usize,
        /// Seed of the input generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        key: AnalysisKeyArgs,
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Exhaustive collision search over short messages.
    Collisions {
        #[arg(long, value_enum, default_value_t = AlgoChoice::Both)]
        algo: AlgoChoice,
        #[arg(long, default_value = "abcdefghijklmnopqrstuvwxyz")]
        alphabet: String,
        #[arg(long = "max-len", default_value_t = 2)]
        max_len: usize,
        #[command(flatten)]
        key: AnalysisKeyArgs,
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Characters-per-position ratio of two digest renderings.
    Ratio {
        /// Baseline as ALPHABET:LENGTH.
        #[arg(long, default_value = "36:32", value_parser = parse_pair)]
        base: (u64, u64),
        /// Candidate as ALPHABET:LENGTH.
        #[arg(long = "new", default_value = "256:64", value_parser = parse_pair)]
        candidate: (u64, u64),
        #[command(flatten)]
        csv: CsvArg,
    },
    /// Frequency of each digest bit over random inputs.
    Bias {
        #[arg(long, value_enum, default_value_t = AlgoChoice::Both)]
        algo: AlgoChoice,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 64)]
        len: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        key: AnalysisKeyArgs,
        #[command(flatten)]
        csv: CsvArg,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected ALPHABET:LENGTH, got {s:?}"))?;
    let a = a
        .trim()
        .parse()
        .map_err(|e| format!("bad alphabet size: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("bad length: {e}"))?;
    Ok((a, b))
}

fn params(seed: u64, iv: Option<&str>) -> CliResult<AlgorithmParams> {
    let iv = iv
        .map(Block128::from_hex)
        .transpose()?
        .unwrap_or(DEFAULT_IV);
    Ok(AlgorithmParams::new(seed, iv)?)
}

fn algorithms(choice: AlgoChoice, params: AlgorithmParams) -> Vec<Algorithm> {
    match choice {
        AlgoChoice::Md5 => vec![Algorithm::Md5],
        AlgoChoice::Dl128 => vec![Algorithm::Dl128(params)],
        AlgoChoice::Both => vec![Algorithm::Md5, Algorithm::Dl128(params)],
    }
}

fn read_input(input: Option<&Path>) -> CliResult<Vec<u8>> {
    match input {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => fs::read(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
    }
}

fn read_stdin() -> CliResult<Vec<u8>> {
    let mut buf = Vec::new();
    io::stdin()
        .read_to_end(&mut buf)
        .map_err(|e| CliError::Io(format!("standard input: {e}")))?;
    Ok(buf)
}

fn emit(text: &str) -> CliResult<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io(format!("standard output: {e}")))
}

fn write_csv(report: &AnalysisReport, csv: &CsvArg) -> CliResult<()> {
    match &csv.csv {
        Some(path) => csv_out::write_report(report, path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => Ok(()),
    }
}

fn escape(bytes: &[u8]) -> String {
    bytes.escape_ascii().to_string()
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Digest { key, format, input } => {
            // config is validated before any input is read
            let params = params(key.seed, key.iv.as_deref())?;
            let message = read_input(input.as_deref())?;
            emit(&format!(
                "{}\n",
                digest(&message, &params).render(format.into())
            ))
        }
        Command::Md5 { input } => {
            let message = read_input(input.as_deref())?;
            emit(&format!("{}\n", md5(&message)))
        }
        Command::Analyze { experiment } => analyze(experiment),
    }
}

fn analyze(experiment: Experiment) -> CliResult<()> {
    match experiment {
        Experiment::Distinct {
            strings,
            render,
            key,
            csv,
        } => {
            let params = params(key.key_seed, key.iv.as_deref())?;
            let inputs: Vec<String> = match strings {
                Some(path) => {
                    let text = fs::read_to_string(&path)
                        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    text.lines()
                        .filter(|l| !l.is_empty())
                        .map(str::to_owned)
                        .collect()
                }
                None => TABLE_I_INPUTS.iter().map(|s| s.to_string()).collect(),
            };
            let report = analysis::distinctiveness_table(
                &inputs,
                &algorithms(AlgoChoice::Both, params),
                render.into(),
            )?;
            emit(&analysis::table_i_text(&report))?;
            write_csv(&report, &csv)
        }
        Experiment::Avalanche {
            algo,
            trials,
            len,
            seed,
            key,
            csv,
        } => {
            let params = params(key.key_seed, key.iv.as_deref())?;
            let mut report = AnalysisReport::new();
            let mut text = String::new();
            for alg in algorithms(algo, params) {
                let stats = analysis::avalanche(&alg, trials, len, seed)?;
                text.push_str(&format!(
                    "{:<6} trials={} len={} mean={:.4} stddev={:.4}\n",
                    alg.id(),
                    trials,
                    len,
                    stats.mean,
                    stats.stddev
                ));
                let label = format!("trials={trials} len={len} seed={seed}");
                for (metric, value) in [
                    ("avalanche_mean", stats.mean),
                    ("avalanche_stddev", stats.stddev),
                ] {
                    report.push(row(alg.id().name(), &label, "", metric, value))?;
                }
            }
            emit(&text)?;
            write_csv(&report, &csv)
        }
        Experiment::Collisions {
            algo,
            alphabet,
            max_len,
            key,
            csv,
        } => {
            let params = params(key.key_seed, key.iv.as_deref())?;
            let distinct_symbols = alphabet.bytes().collect::<HashSet<_>>().len();
            let space = analysis::message_space_size(distinct_symbols, max_len);
            let mut report = AnalysisReport::new();
            let mut text = String::new();
            for alg in algorithms(algo, params) {
                let found = analysis::collision_scan(alphabet.as_bytes(), max_len, &alg)?;
                text.push_str(&format!(
                    "{}: {} messages, {} colliding pairs\n",
                    alg.id(),
                    space,
                    found.len()
                ));
                for rec in &found {
                    let label = format!("{} | {}", escape(&rec.input_a), escape(&rec.input_b));
                    text.push_str(&format!("  {label}  {}\n", rec.shared_digest));
                    report.push(row(
                        alg.id().name(),
                        &label,
                        &rec.shared_digest,
                        "collision",
                        1.0,
                    ))?;
                }
                let label = format!("alphabet={} max_len={max_len}", escape(alphabet.as_bytes()));
                report.push(row(
                    alg.id().name(),
                    &label,
                    "",
                    "messages_scanned",
                    space as f64,
                ))?;
                report.push(row(
                    alg.id().name(),
                    &label,
                    "",
                    "collision_pairs",
                    found.len() as f64,
                ))?;
            }
            emit(&text)?;
            write_csv(&report, &csv)
        }
        Experiment::Ratio {
            base,
            candidate,
            csv,
        } => {
            let ratio = analysis::randomness_ratio(base.0, base.1, candidate.0, candidate.1)?;
            emit(&format!(
                "ratio {:.4}\npercent {}\n",
                ratio,
                analysis::ratio_percent_text(ratio)
            ))?;
            let mut report = AnalysisReport::new();
            let label = format!(
                "base={}:{} new={}:{}",
                base.0, base.1, candidate.0, candidate.1
            );
            report.push(row("dl128/md5", &label, "", "randomness_ratio", ratio))?;
            write_csv(&report, &csv)
        }
        Experiment::Bias {
            algo,
            trials,
            len,
            seed,
            key,
            csv,
        } => {
            let params = params(key.key_seed, key.iv.as_deref())?;
            let mut report = AnalysisReport::new();
            let mut text = String::new();
            for alg in algorithms(algo, params) {
                let freqs = analysis::bit_bias(&alg, trials, len, seed)?;
                let min = freqs.iter().copied().fold(f64::INFINITY, f64::min);
                let max = freqs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean = freqs.iter().sum::<f64>() / freqs.len() as f64;
                text.push_str(&format!(
                    "{:<6} trials={trials} len={len} min={min:.4} max={max:.4} mean={mean:.4}\n",
                    alg.id()
                ));
                for (i, f) in freqs.iter().enumerate() {
                    report.push(row(
                        alg.id().name(),
                        &format!("bit={i}"),
                        "",
                        "bit_freq",
                        *f,
                    ))?;
                }
            }
            emit(&text)?;
            write_csv(&report, &csv)
        }
    }
}

fn row(algorithm: &str, input: &str, digest: &str, metric: &str, value: f64) -> ReportRow {
    ReportRow {
        algorithm: algorithm.to_owned(),
        input: input.to_owned(),
        digest: digest.to_owned(),
        metric: metric.to_owned(),
        value,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("digestlab: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
