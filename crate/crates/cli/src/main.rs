//! `archetypes` command-line driver.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on data or runtime errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use archetypes_core::dataio::{PreprocessSpec, Shape};
use archetypes_core::harness::{
    self, expand_methods, DataSource, ExperimentConfig, Seeds, WinMode, DEFAULT_CHAIN_FRACTIONS,
};
use archetypes_core::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "archetypes", version, about = "Archetypal analysis seeding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a (method x k x seed) grid and write records.csv.
    Run(RunArgs),
    /// Median and quartiles per (method, k, stage) from a records file.
    Aggregate(AggregateArgs),
    /// Win counts per method and k from a records file.
    Wins(WinsArgs),
    /// Step-by-step seeding on a 2-D synthetic set, as CSV on stdout.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Input CSV file.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    data: Option<PathBuf>,
    /// Synthetic shape: ring, polygon-hull or gaussian-blob.
    #[arg(long)]
    synthetic: Option<String>,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Field delimiter of the input CSV.
    #[arg(long, default_value = ",")]
    delimiter: char,
    /// The input CSV starts with a header row.
    #[arg(long)]
    header: bool,
    /// none, cms (center and max-scale), cms-signed or std (standardize).
    #[arg(long, default_value = "cms")]
    preprocess: String,
    /// Comma-separated methods: uniform, furthest-first, furthest-sum, aapp,
    /// kmeanspp, aapp-mc.
    #[arg(long, value_delimiter = ',', default_value = "uniform,furthest-first,furthest-sum,aapp,kmeanspp,aapp-mc")]
    methods: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "15,25,50,75,100")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    iters: usize,
    /// Number of seeds (0..N).
    #[arg(long, default_value_t = 50, conflicts_with = "seed_list")]
    seeds: usize,
    /// Explicit comma-separated seed values.
    #[arg(long, value_delimiter = ',')]
    seed_list: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    chain_fracs: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0)]
    base_seed: u64,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Run cells one at a time on one thread (use when timing matters).
    #[arg(long)]
    serial: bool,
    /// Write zero for every time column so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct AggregateArgs {
    #[arg(long)]
    records: PathBuf,
    /// Output file; defaults to aggregate.csv next to the records.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct WinsArgs {
    #[arg(long)]
    records: PathBuf,
    /// best-init, best-overall, median-init, median-overall; all by default.
    #[arg(long, value_delimiter = ',')]
    mode: Option<Vec<String>>,
    /// Output file; defaults to wins.csv next to the records.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value = "ring")]
    shape: String,
    #[arg(long, default_value_t = 200)]
    n: usize,
    #[arg(long, value_delimiter = ',', default_value = "uniform,furthest-sum,aapp")]
    methods: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(msg) => Failure::Usage(msg),
            other => Failure::Data(other),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Aggregate(args) => aggregate(args),
        Command::Wins(args) => wins(args),
        Command::Demo(args) => demo(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> Result<T, Failure> {
    s.parse().map_err(Failure::from)
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let source = match (&args.data, &args.synthetic) {
        (Some(path), _) => {
            if !args.delimiter.is_ascii() {
                return Err(Failure::Usage("delimiter must be a single ASCII character".into()));
            }
            DataSource::Csv {
                path: path.clone(),
                delimiter: args.delimiter as u8,
                has_header: args.header,
            }
        }
        (None, Some(shape)) => DataSource::Synthetic {
            shape: parse::<Shape>(shape)?,
            n: args.n,
            d: args.d,
        },
        (None, None) => return Err(Failure::Usage("one of --data or --synthetic is required".into())),
    };
    let fracs = args
        .chain_fracs
        .clone()
        .unwrap_or_else(|| DEFAULT_CHAIN_FRACTIONS.to_vec());
    let mut cfg = ExperimentConfig::new(source);
    cfg.preprocess = parse::<PreprocessSpec>(&args.preprocess)?;
    cfg.methods = expand_methods(&args.methods, &fracs)?;
    cfg.k_list = args.k.clone();
    cfg.iters = args.iters;
    cfg.seeds = match &args.seed_list {
        Some(list) => Seeds::List(list.clone()),
        None => Seeds::Count(args.seeds),
    };
    cfg.base_seed = args.base_seed;
    cfg.serial = args.serial;
    cfg.record_timing = !args.no_timing;
    cfg.validate()?;
    Ok(cfg)
}

fn io_failure(path: &Path, source: std::io::Error) -> Failure {
    Failure::Data(Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let cfg = build_config(&args)?;
    let records = harness::run_grid(&cfg)?;
    std::fs::create_dir_all(&args.out).map_err(|e| io_failure(&args.out, e))?;
    let path = args.out.join("records.csv");
    harness::write_records(&path, &records)?;
    let errors = records.iter().filter(|r| r.is_error()).count();
    eprintln!("wrote {} records ({errors} error rows) to {}", records.len(), path.display());
    Ok(())
}

fn sibling(records: &Path, name: &str) -> PathBuf {
    records.with_file_name(name)
}

fn aggregate(args: AggregateArgs) -> Result<(), Failure> {
    let records = harness::read_records(&args.records)?;
    let rows = harness::aggregate_quantiles(&records);
    let out = args.out.unwrap_or_else(|| sibling(&args.records, "aggregate.csv"));
    harness::write_quantiles(&out, &rows)?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(())
}

fn wins(args: WinsArgs) -> Result<(), Failure> {
    let modes: Vec<WinMode> = match &args.mode {
        Some(names) => names.iter().map(|m| parse(m)).collect::<Result<_, _>>()?,
        None => WinMode::ALL.to_vec(),
    };
    let records = harness::read_records(&args.records)?;
    let tables = modes
        .into_iter()
        .map(|m| harness::win_table(&records, m))
        .collect::<Result<Vec<_>, _>>()?;
    let out = args.out.unwrap_or_else(|| sibling(&args.records, "wins.csv"));
    harness::write_wins(&out, &tables)?;
    eprintln!("wrote {} tables to {}", tables.len(), out.display());
    Ok(())
}

fn demo(args: DemoArgs) -> Result<(), Failure> {
    let shape = parse::<Shape>(&args.shape)?;
    let methods = expand_methods(&args.methods, &[0.1])?;
    let (_, steps) = harness::demo(shape, args.n, args.k, &methods, args.seed)?;
    let stdout = std::io::stdout();
    harness::write_demo(&mut stdout.lock(), &steps).map_err(|e| io_failure(Path::new("<stdout>"), e))
}
