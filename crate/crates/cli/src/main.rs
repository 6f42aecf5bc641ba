//! `fountain`: generate, apply and analyze invertible GF(2) encoding matrices.
//!
//! Exit codes: 0 success, 2 domain or configuration error, 3 I/O or parse error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fountain_core::codec::{matrix_order, Codec};
use fountain_core::entropy::ZeroProbTable;
use fountain_core::experiments::{
    conjecture1_from_records, conjecture2_probe, run_saving_experiment, summarize,
    write_records_csv, write_summary_csv, InitialState, MarkovSourceConfig,
    SavingExperimentConfig, Transform,
};
use fountain_core::matrixgen::{bidiagonal, gen_full_rank, ideal_soliton, GenConfig};
use fountain_core::permgroup::{induce_permutation, verify_group, GroupCheckMode};
use fountain_core::{BitMatrix, BitVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Parser)]
#[command(name = "fountain", version, about = "Invertible GF(2) fountain-code encoding matrices")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an encoding matrix.
    Gen(GenArgs),
    /// Encode a vector: y = R x.
    Encode(CodecArgs),
    /// Decode a vector: x = R^-1 y.
    Decode(CodecArgs),
    /// Induced permutation, cycles, order and group checks for a matrix.
    Analyze(AnalyzeArgs),
    /// Per-degree zero-output probabilities under the Ideal Soliton distribution.
    Table1(Table1Args),
    /// Monte Carlo experiments.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Dist {
    IdealSoliton,
    Bidiagonal,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Dist::IdealSoliton)]
    dist: Dist,
    #[arg(long, default_value_t = GenConfig::DEFAULT_MAX_ROW_ATTEMPTS)]
    max_row_attempts: usize,
}

#[derive(Debug, Args)]
struct CodecArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Print the induced permutation in list form.
    #[arg(long)]
    perm: bool,
    /// Print the cycle decomposition of the induced permutation.
    #[arg(long)]
    cycles: bool,
    /// Print the multiplicative order of the matrix (the default when no flag is given).
    #[arg(long)]
    order: bool,
    /// Spot-check the group axioms at this matrix size.
    #[arg(long)]
    group: bool,
    /// Largest order searched; defaults to 2^min(k, 20).
    #[arg(long)]
    order_cap: Option<u64>,
    /// Sampled elements and associativity triples for --group.
    #[arg(long, default_value_t = 100)]
    samples: usize,
}

#[derive(Debug, Args)]
struct Table1Args {
    #[arg(long, default_value_t = 8)]
    k: usize,
    #[arg(long, default_value_t = 4)]
    ones: usize,
}

#[derive(Debug, Subcommand)]
enum ExperimentCommand {
    /// Saving in bits versus ones deficit.
    Saving(SavingArgs),
    /// Cost of Markov-chain realizations before and after the bidiagonal transform.
    Conjecture2(Conjecture2Args),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformArg {
    Bidiagonal,
    Soliton,
}

#[derive(Debug, Args)]
struct SavingArgs {
    #[arg(long, default_value_t = 30204)]
    n: usize,
    #[arg(long, default_value_t = 250)]
    deficit_max: usize,
    #[arg(long, default_value_t = 10)]
    step: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = TransformArg::Bidiagonal)]
    transform: TransformArg,
    /// Summary CSV path; the summary goes to stderr when omitted.
    #[arg(long)]
    summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InitialArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
    Stationary,
}

#[derive(Debug, Args)]
struct Conjecture2Args {
    #[arg(long, default_value_t = 1000)]
    length: usize,
    #[arg(long, default_value_t = 0.5)]
    p01: f64,
    #[arg(long, default_value_t = 0.5)]
    p10: f64,
    #[arg(long, value_enum, default_value_t = InitialArg::Stationary)]
    initial: InitialArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
}

#[derive(Debug)]
enum CliError {
    Core(fountain_core::Error),
    Io { path: Option<PathBuf>, source: io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(fountain_core::Error::Parse { .. }) | CliError::Io { .. } => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path: Some(p), source } => write!(f, "{}: {source}", p.display()),
            CliError::Io { path: None, source } => write!(f, "{source}"),
        }
    }
}

impl From<fountain_core::Error> for CliError {
    fn from(e: fountain_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io { path: None, source }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_file(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: Some(path.to_owned()),
        source,
    })
}

fn open_output(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(fs::File::create(p).map_err(|source| {
            CliError::Io {
                path: Some(p.to_owned()),
                source,
            }
        })?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn echo_seed(seed: u64) {
    eprintln!("seed: {seed}");
}

fn load_matrix(path: &Path) -> CliResult<BitMatrix> {
    Ok(BitMatrix::from_text(&read_file(path)?)?)
}

fn load_vector(path: &Path) -> CliResult<BitVector> {
    Ok(read_file(path)?.parse()?)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> CliResult<()> {
    let m = match args.dist {
        Dist::Bidiagonal => bidiagonal(args.k)?,
        Dist::IdealSoliton => {
            echo_seed(cli.seed);
            let cfg = GenConfig {
                k: args.k,
                seed: cli.seed,
                max_row_attempts: args.max_row_attempts,
            };
            gen_full_rank(&ideal_soliton(args.k)?, &cfg)?
        }
    };
    let mut out = open_output(cli.out.as_deref())?;
    out.write_all(m.to_text().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_codec(cli: &Cli, args: &CodecArgs, decode: bool) -> CliResult<()> {
    let codec = Codec::new(load_matrix(&args.matrix)?)?;
    let v = load_vector(&args.input)?;
    let result = if decode {
        codec.decode(&v)?
    } else {
        codec.encode(&v)?
    };
    let mut out = open_output(cli.out.as_deref())?;
    writeln!(out, "{result}")?;
    out.flush()?;
    Ok(())
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> CliResult<()> {
    let m = load_matrix(&args.matrix)?;
    let k = m.rows();
    let mut out = open_output(cli.out.as_deref())?;
    let show_order = args.order || !(args.perm || args.cycles || args.group);

    if args.perm || args.cycles {
        let p = induce_permutation(&m)?;
        if args.perm {
            write!(out, "{p}")?;
            let verdict = if p.is_bijection() { "ok" } else { "FAILED" };
            writeln!(out, "bijection: {verdict}")?;
        }
        if args.cycles {
            write!(out, "{}", p.cycles())?;
        }
    }
    if show_order {
        let cap = args.order_cap.unwrap_or(1u64 << k.min(20));
        writeln!(out, "order: {}", matrix_order(&m, cap)?)?;
    }
    if args.group {
        echo_seed(cli.seed);
        let inv = m.invert()?;
        let two_sided = m.matmul(&inv)?.is_identity() && inv.matmul(&m)?.is_identity();
        writeln!(
            out,
            "matrix inverse: {}",
            if two_sided { "verified" } else { "FAILED" }
        )?;
        let mode = if k <= 3 {
            GroupCheckMode::Exhaustive
        } else {
            GroupCheckMode::Sampled
        };
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        write!(out, "{}", verify_group(k, mode, args.samples, &mut rng)?)?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_table1(cli: &Cli, args: &Table1Args) -> CliResult<()> {
    let table = ZeroProbTable::build(args.k, args.ones)?;
    let mut out = open_output(cli.out.as_deref())?;
    write!(out, "{table}")?;
    out.flush()?;
    Ok(())
}

fn cmd_saving(cli: &Cli, args: &SavingArgs) -> CliResult<()> {
    echo_seed(cli.seed);
    let cfg = SavingExperimentConfig {
        n: args.n,
        deficits: SavingExperimentConfig::deficit_grid(args.deficit_max, args.step)?,
        trials: args.trials,
        seed: cli.seed,
        transform: match args.transform {
            TransformArg::Bidiagonal => Transform::Bidiagonal,
            TransformArg::Soliton => Transform::Soliton,
        },
    };
    let records = run_saving_experiment(&cfg)?;
    let mut out = open_output(cli.out.as_deref())?;
    write_records_csv(&mut out, &records)?;
    out.flush()?;

    let summary = summarize(&records);
    match &args.summary {
        Some(path) => {
            let mut w = open_output(Some(path))?;
            write_summary_csv(&mut w, &summary)?;
            w.flush()?;
        }
        None => write_summary_csv(io::stderr().lock(), &summary)?,
    }
    eprintln!("{}", conjecture1_from_records(cfg.n, &records));
    Ok(())
}

fn cmd_conjecture2(cli: &Cli, args: &Conjecture2Args) -> CliResult<()> {
    echo_seed(cli.seed);
    let cfg = MarkovSourceConfig {
        p01: args.p01,
        p10: args.p10,
        initial: match args.initial {
            InitialArg::Zero => InitialState::Zero,
            InitialArg::One => InitialState::One,
            InitialArg::Stationary => InitialState::Stationary,
        },
        length: args.length,
    };
    let report = conjecture2_probe(&cfg, args.trials, cli.seed)?;
    let mut out = open_output(cli.out.as_deref())?;
    writeln!(out, "seed: {}", cli.seed)?;
    writeln!(out, "{report}")?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Encode(a) => cmd_codec(cli, a, false),
        Command::Decode(a) => cmd_codec(cli, a, true),
        Command::Analyze(a) => cmd_analyze(cli, a),
        Command::Table1(a) => cmd_table1(cli, a),
        Command::Experiment(ExperimentCommand::Saving(a)) => cmd_saving(cli, a),
        Command::Experiment(ExperimentCommand::Conjecture2(a)) => cmd_conjecture2(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Io { source, .. }) if source.kind() == io::ErrorKind::BrokenPipe => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
