use clap::{Parser, ValueEnum};
use qxsim::params::parse_assignment;
use qxsim::{list_experiments, run_and_write, CliError, ExperimentConfig, Format};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

/// Runs a simulation experiment and emits its results as a table.
#[derive(Debug, Parser)]
#[command(name = "qxsim", version)]
struct Args {
    /// Experiment to run.
    #[arg(required_unless_present = "list")]
    experiment: Option<String>,
    /// Parameter override, `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Record wall time in the metadata.
    #[arg(long)]
    timing: bool,
    /// Print the available experiments and their parameters.
    #[arg(long)]
    list: bool,
}

fn print_list() {
    for e in list_experiments() {
        println!("{}  [{}]\n    {}", e.name, e.anchor, e.summary);
        for p in e.params {
            println!("    --param {}={}    {}", p.name, p.default, p.help);
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("QXSIM_THREADS") else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("QXSIM_THREADS={raw} is not a positive integer"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn run(args: Args) -> Result<(), CliError> {
    let params = args.params.iter().map(|s| parse_assignment(s)).collect::<Result<_, _>>()?;
    let cfg = ExperimentConfig {
        experiment: args.experiment.unwrap_or_default(),
        params,
        seed: args.seed,
        out: args.out,
        format: match args.format {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        },
        timing: args.timing,
    };
    run_and_write(&cfg).map(|_| ())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("qxsim: {msg}");
        return ExitCode::from(2);
    }
    if args.list {
        print_list();
        return ExitCode::SUCCESS;
    }
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qxsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
