use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use graphlet_sampling::exact::DEFAULT_CAP;
use graphlet_sampling::harness::{self, Document, EngineChoice, Format, MethodChoice, Output, Provenance, RunConfig};
use graphlet_sampling::{Error, IndexedGraph, Result};

#[derive(Parser)]
#[command(name = "graphlet", version, about = "Sample and count 4- and 5-node graphlets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Graph size and the sampling weight totals.
    Stats(Common),
    /// Exact census by enumeration.
    Exact {
        #[command(flatten)]
        common: Common,
        /// Motif sizes to count.
        #[arg(long = "k", value_delimiter = ',', default_values_t = [4usize, 5])]
        sizes: Vec<usize>,
        /// Refuse when the projected subgraph count exceeds this.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
    },
    /// One estimation run.
    Sample(RunArgs),
    /// Repeated runs with error metrics.
    Experiment(RunArgs),
    /// Pilot run and the budget needed for a relative error target.
    Plan(RunArgs),
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, value_enum)]
    method: MethodChoice,
    /// K (or K1 for moss5; the pilot budget for plan).
    #[arg(long, default_value_t = 1000)]
    budget: u64,
    /// K2 for moss5; defaults to --budget.
    #[arg(long)]
    budget2: Option<u64>,
    #[arg(long, default_value_t = 1)]
    repeats: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = EngineChoice::Direct)]
    engine: EngineChoice,
    /// Written by the direct engine, replayed by the vertex engine.
    #[arg(long)]
    tape: Option<PathBuf>,
    #[arg(long, default_value_t = 0.95)]
    level: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    delta: f64,
    /// JSON counts from `graphlet exact`.
    #[arg(long)]
    ground_truth: Option<PathBuf>,
    /// Motif IDs to plan for (default: all directly sampled).
    #[arg(long, value_delimiter = ',')]
    motifs: Vec<usize>,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            input: self.common.input.clone(),
            method: self.method,
            budget: self.budget,
            budget2: self.budget2,
            repeats: self.repeats,
            seed: self.seed,
            workers: self.workers,
            engine: self.engine,
            tape: self.tape.clone(),
            level: self.level,
            ground_truth: self.ground_truth.clone(),
            epsilon: self.epsilon,
            delta: self.delta,
            motifs: self.motifs.clone(),
        }
    }
}

fn emit<T: Output>(common: &Common, command: &str, config: &impl Serialize, seed: Option<u64>, g: &IndexedGraph, body: T) -> Result<()> {
    let doc = Document { provenance: Provenance::new(command, config, seed, &g.graph)?, body };
    match &common.output {
        Some(path) => {
            let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
            doc.write(&mut out, common.format)?;
            out.flush()?;
        }
        None => doc.write(std::io::stdout().lock(), common.format)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Stats(common) => {
            let g = harness::load_graph(&common.input)?;
            let report = harness::cmd_stats(&g);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            let config = serde_json::json!({ "input": common.input });
            emit(&common, "stats", &config, None, &g, report)
        }
        Command::Exact { common, sizes, cap } => {
            let g = harness::load_graph(&common.input)?;
            let report = harness::cmd_exact(&g, &sizes, cap)?;
            let config = serde_json::json!({ "input": common.input, "k": sizes, "cap": cap.to_string() });
            emit(&common, "exact", &config, None, &g, report)
        }
        Command::Sample(args) => {
            let cfg = args.config();
            let g = harness::load_graph(&cfg.input)?;
            let result = harness::cmd_sample(&g, &cfg)?;
            emit(&args.common, "sample", &cfg, Some(cfg.seed), &g, result)
        }
        Command::Experiment(args) => {
            let cfg = args.config();
            let g = harness::load_graph(&cfg.input)?;
            let truth = cfg.ground_truth.as_deref().map(harness::read_ground_truth).transpose()?;
            let result = harness::cmd_experiment(&g, &cfg, truth.as_ref())?;
            for w in &result.warnings {
                eprintln!("warning: {w}");
            }
            emit(&args.common, "experiment", &cfg, Some(cfg.seed), &g, result)
        }
        Command::Plan(args) => {
            let cfg = args.config();
            let g = harness::load_graph(&cfg.input)?;
            let result = harness::cmd_plan(&g, &cfg)?;
            emit(&args.common, "plan", &cfg, Some(cfg.seed), &g, result)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::ScaleCap { .. } = e {
                eprintln!("refusing to enumerate; raise --cap to force it");
            }
            ExitCode::from(harness::exit_code(&e) as u8)
        }
    }
}
