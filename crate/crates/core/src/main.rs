use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fixrank::experiment::{
    format_bench_table, load_config, run_bench, run_experiment, write_atomic, write_record,
    ExperimentConfig, OutputFormat,
};
use fixrank::suite::{run_suite, SuiteOptions};
use fixrank::{Error, Field, MetricParams};

/// Riemannian optimization on fixed-rank matrices.
#[derive(Debug, Parser)]
#[command(name = "fixrank", version)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Experiment configuration file (`key = value` lines), or `example`.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file for the run record or bench table.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for data generation and the starting point.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    #[arg(long, global = true, value_name = "real|complex")]
    field: Option<Field>,
    /// Metric weights `a0,a1,b,g0,g1`.
    #[arg(long, global = true, value_name = "a0,a1,b,g0,g1")]
    params: Option<MetricParams>,
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    csv: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one problem and write its run record.
    Run,
    /// Run the invariant and oracle suite; exit status 1 on any failure.
    Check,
    /// Sweep each metric weight over a grid and print a summary table.
    Bench,
}

fn experiment_config(args: &GlobalArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.problem.seed = seed;
        cfg.solver.seed = seed;
    }
    if let Some(field) = args.field {
        cfg.problem.field = field;
    }
    if let Some(params) = args.params {
        cfg.problem.params = params;
    }
    if let Some(out) = &args.out {
        cfg.out = Some(out.clone());
    }
    if args.json {
        cfg.format = OutputFormat::Json;
    }
    if args.csv {
        cfg.format = OutputFormat::Csv;
    }
    cfg.problem.validate()?;
    Ok(cfg)
}

fn run(args: &GlobalArgs) -> Result<ExitCode, Error> {
    let cfg = experiment_config(args)?;
    let record = run_experiment(&cfg)?;
    match &cfg.out {
        Some(path) => {
            write_record(&record, path, cfg.format)?;
            let gap = record
                .relative_gap
                .map_or(String::new(), |g| format!(" gap={g:.3e}"));
            println!(
                "{:?} after {} iterations: cost={:.12e} gnorm={:.3e}{gap} -> {}",
                record.status,
                record.iterations,
                record.final_cost,
                record.final_gnorm,
                path.display()
            );
        }
        None => match cfg.format {
            OutputFormat::Json => println!("{}", record.to_json()?),
            OutputFormat::Csv => print!("{}", record.trace_csv()?),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn check(args: &GlobalArgs) -> Result<ExitCode, Error> {
    let mut opts = SuiteOptions::default();
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    if let Some(field) = args.field {
        opts.fields = vec![field];
    }
    let report = run_suite(&opts);
    for line in report.lines() {
        println!("{line}");
    }
    if args.json {
        let body = serde_json::to_string_pretty(&report)?;
        match &args.out {
            Some(path) => write_atomic(path, body.as_bytes())?,
            None => println!("{body}"),
        }
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn bench(args: &GlobalArgs) -> Result<ExitCode, Error> {
    let cfg = experiment_config(args)?;
    let rows = run_bench(&cfg)?;
    let body = if args.json {
        serde_json::to_string_pretty(&rows)? + "\n"
    } else if args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &rows {
            w.serialize(r).map_err(|e| Error::Config(format!("csv: {e}")))?;
        }
        String::from_utf8(w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?)
            .expect("csv output is utf-8")
    } else {
        format_bench_table(&rows)
    };
    match &args.out {
        Some(path) => write_atomic(path, body.as_bytes())?,
        None => print!("{body}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run => run(&cli.global),
        Command::Check => check(&cli.global),
        Command::Bench => bench(&cli.global),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parse { .. } | Error::MetricParams(_) | Error::Dimensions(_) => {
                    ExitCode::from(2)
                }
                _ => ExitCode::from(1),
            }
        }
    }
}
