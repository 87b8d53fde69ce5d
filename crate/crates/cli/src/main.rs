use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use flowtri_cli::{
    cmd_analyze, cmd_decompose, cmd_dkk, cmd_equatorial, cmd_fuzz, cmd_order, cmd_quotient, Options, Outcome,
    EXIT_INVALID,
};

#[derive(Parser)]
#[command(name = "flowtri", version, about = "Exact triangulations of Gorenstein flow polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct GraphArgs {
    /// Graph JSON file.
    graph: PathBuf,
    /// Route decomposition JSON file: an array of routes, each an array of edge ids.
    #[arg(long)]
    decomposition: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Validation, idle contraction, dimension, route count and Ehrhart data.
    Analyze {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also list lattice-point counts of dilates 0..=t.
        #[arg(long)]
        max_dilate: Option<u64>,
    },
    /// Route decomposition and route simplex.
    Decompose(GraphArgs),
    /// DKK triangulation.
    Dkk(GraphArgs),
    /// Equatorial flow triangulation.
    Equatorial {
        #[command(flatten)]
        graph: GraphArgs,
        /// Compare against the DKK triangulation of every framing.
        #[arg(long)]
        exhaustive_dkk: bool,
    },
    /// Reflexive quotient polytope.
    Quotient(GraphArgs),
    /// Dual poset and order-polytope equivalence (needs an embedding).
    Order(GraphArgs),
    /// Seeded random sweep of the decomposition and h-vector checks.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let mut opts = Options { timings: cli.timings, ..Options::default() };
    let load = |g: &GraphArgs, opts: &mut Options| -> Result<String, String> {
        if let Some(p) = &g.decomposition {
            opts.decomposition = Some(read(p)?);
        }
        read(&g.graph)
    };
    Ok(match &cli.command {
        Command::Analyze { graph, max_dilate } => {
            opts.max_dilate = *max_dilate;
            cmd_analyze(&load(graph, &mut opts)?, &opts)
        }
        Command::Decompose(g) => cmd_decompose(&load(g, &mut opts)?, &opts),
        Command::Dkk(g) => cmd_dkk(&load(g, &mut opts)?, &opts),
        Command::Equatorial { graph, exhaustive_dkk } => {
            opts.exhaustive_dkk = *exhaustive_dkk;
            cmd_equatorial(&load(graph, &mut opts)?, &opts)
        }
        Command::Quotient(g) => cmd_quotient(&load(g, &mut opts)?, &opts),
        Command::Order(g) => cmd_order(&load(g, &mut opts)?, &opts),
        Command::Fuzz { seed, count } => cmd_fuzz(*seed, *count, &opts),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let text = match cli.format {
                Format::Json => outcome.report.to_json(),
                Format::Text => outcome.report.to_text(),
            };
            print!("{text}");
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(msg) => {
            eprintln!("flowtri: {msg}");
            ExitCode::from(EXIT_INVALID as u8)
        }
    }
}
