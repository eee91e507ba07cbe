//! `crtest`: independence tests for competing-risks data and the Monte Carlo
//! study behind them.
//!
//! Exit codes: 0 success, 1 data or numeric error, 2 usage error.

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use crtest_core::mc::{self, Method, SimConfig, SimTable};
use crtest_core::{ingest, ColumnRef, FamilyParams, IngestSpec, RunReport, Sidedness};

#[derive(Parser)]
#[command(
    name = "crtest",
    version,
    about = "Test independence of failure time and cause in competing-risks data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the JEL or DDK test on a CSV file.
    Test(TestArgs),
    /// Estimate rejection rates at one (or a few) design points.
    Simulate(SimulateArgs),
    /// Estimate a full power table over grids of a, n and alpha.
    Power(PowerArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Jel,
    Ddk,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Jel => Method::Jel,
            MethodArg::Ddk => Method::Ddk,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SidedArg {
    One,
    Two,
}

impl From<SidedArg> for Sidedness {
    fn from(s: SidedArg) -> Self {
        match s {
            SidedArg::One => Sidedness::Upper,
            SidedArg::Two => Sidedness::Two,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    input: PathBuf,
    /// Time column: header name or zero-based index.
    #[arg(long)]
    time_col: String,
    /// Cause column: header name or zero-based index.
    #[arg(long)]
    cause_col: String,
    /// Raw labels recoded to cause 1 (comma separated or repeated).
    #[arg(long, value_delimiter = ',', required = true)]
    cause1: Vec<String>,
    /// Raw labels recoded to cause 2.
    #[arg(long, value_delimiter = ',', required = true)]
    cause2: Vec<String>,
    /// Raw labels for censored or event-free rows, which are excluded.
    #[arg(long, value_delimiter = ',')]
    drop: Vec<String>,
    /// The file has no header row.
    #[arg(long)]
    no_header: bool,
    #[arg(long, value_enum, default_value = "jel")]
    method: MethodArg,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Rejection region of the DDK test.
    #[arg(long, value_enum, default_value = "two")]
    sided: SidedArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct StudyArgs {
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    p1: f64,
    /// Master seed; every replication seed is derived from it.
    #[arg(long, required = true)]
    seed: u64,
    /// Replications per cell.
    #[arg(long, default_value_t = 2000)]
    reps: usize,
    /// Use 10000 replications per cell.
    #[arg(long, conflicts_with = "reps")]
    full: bool,
    /// Tests to run (defaults to both).
    #[arg(long = "method", value_enum, value_delimiter = ',')]
    methods: Vec<MethodArg>,
    #[arg(long, value_enum, default_value = "two")]
    sided: SidedArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write the table here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    alpha: Vec<f64>,
    #[command(flatten)]
    study: StudyArgs,
}

#[derive(Args)]
struct PowerArgs {
    #[arg(long, value_delimiter = ',', default_value = "1.3,1.5,1.7,1.9")]
    a_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "20,40,60,80,100")]
    n_grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.05")]
    alphas: Vec<f64>,
    #[command(flatten)]
    study: StudyArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // clap exits with 2 for usage errors and 0 for --help/--version.
        Err(e) => e.exit(),
    };
    let outcome = match cli.command {
        Command::Test(args) => run_test(args),
        Command::Simulate(args) => run_study(args.a, args.n, args.alpha, args.study),
        Command::Power(args) => run_study(args.a_grid, args.n_grid, args.alphas, args.study),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn label_set(xs: &[String]) -> BTreeSet<String> {
    xs.iter().map(|s| s.trim().to_string()).collect()
}

fn run_test(args: TestArgs) -> Result<()> {
    let spec = IngestSpec {
        path: args.input.clone(),
        time_column: ColumnRef::parse(&args.time_col),
        cause_column: ColumnRef::parse(&args.cause_col),
        cause1_labels: label_set(&args.cause1),
        cause2_labels: label_set(&args.cause2),
        drop_labels: label_set(&args.drop),
        has_header: !args.no_header,
    };
    let data = ingest(&spec).with_context(|| format!("reading {}", args.input.display()))?;
    let report = RunReport::build(&data, args.method.into(), args.alpha, args.sided.into())
        .context("running the test")?;
    match args.format {
        Format::Json => println!("{}", report.to_json()?),
        Format::Text => print!("{}", report.to_text()),
        Format::Csv => anyhow::bail!("`--format csv` is only available for simulate/power"),
    }
    Ok(())
}

fn run_study(
    a_grid: Vec<f64>,
    n_grid: Vec<usize>,
    alphas: Vec<f64>,
    study: StudyArgs,
) -> Result<()> {
    let methods = if study.methods.is_empty() {
        vec![Method::Jel, Method::Ddk]
    } else {
        study.methods.iter().map(|&m| m.into()).collect()
    };
    let config = SimConfig {
        // `a` is supplied per grid point; 1.0 only satisfies validation here.
        params: FamilyParams::new(study.lambda, study.p1, 1.0, study.seed)
            .context("invalid model parameters")?,
        n_grid,
        alpha_grid: alphas,
        a_grid,
        reps: if study.full { 10_000 } else { study.reps },
        methods,
        ddk_sided: study.sided.into(),
    };
    let table = mc::run(&config).context("running the simulation")?;
    let rendered = match study.format {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()? + "\n",
        Format::Text => render_table(&table),
    };
    match study.output {
        Some(path) => {
            fs::write(&path, rendered).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn render_table(t: &SimTable) -> String {
    let m = &t.metadata;
    let mut out = format!(
        "lambda={} p1={} reps={} seed={} generator={} ({:.1}s, {} threads)\n",
        m.lambda, m.p1, m.reps, m.seed, m.generator, m.wall_time_secs, m.threads
    );
    out.push_str("method     a     n   alpha    rate  stderr  excluded\n");
    for c in &t.cells {
        out.push_str(&format!(
            "{:<6} {:>5} {:>5} {:>7} {:>7.4} {:>7.4} {:>9}\n",
            c.method.name(),
            c.a,
            c.n,
            c.alpha,
            c.rate,
            c.stderr,
            c.excluded
        ));
    }
    out
}
