mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::Report;

#[derive(Parser, Debug)]
#[command(name = "fdf", version, about = "Exact checks for Lagrangians of Fon-der-Flaass 3-graphs")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build F, CF and BF from a digraph file.
    Construct {
        graph: PathBuf,
    },
    /// Evaluate L_CF and L_BF (uniform weights unless a weights file is given).
    Lagrangian {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Merge non-adjacent pairs until the graph is complete.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Maximize the complete-graph Lagrangian over the simplex.
    Optimize {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        restarts: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Certify h = 3/32 - g >= 0 on the sorted trivariate domain.
    Certify {
        #[arg(long, default_value = "1/1024")]
        delta: String,
        #[arg(long, default_value_t = 40)]
        max_depth: u32,
        #[arg(long, default_value = "both")]
        method: String,
    },
    /// Check every labeled orientation on n vertices.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// Check the (3,4) property of F over orientations without induced directed 4-cycles.
    ValidateFdf {
        #[arg(long)]
        n: usize,
    },
    /// Run the full chain of inequalities for one weighted digraph.
    Pipeline {
        graph: PathBuf,
        weights: PathBuf,
        /// Certificate cell size for the last link.
        #[arg(long, default_value = "1/1024")]
        delta: String,
        #[arg(long, default_value_t = 40)]
        max_depth: u32,
        /// Check the last link by exact evaluation only.
        #[arg(long)]
        no_certificate: bool,
    },
}

fn run(cli: Cli) -> anyhow::Result<Report> {
    if let Some(t) = cli.threads {
        anyhow::ensure!(t > 0, "--threads must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let seed = cli.seed;
    match cli.command {
        Command::Construct { graph } => commands::construct(&graph),
        Command::Lagrangian { graph, weights } => commands::lagrangian(&graph, weights.as_deref()),
        Command::Reduce { graph, weights } => commands::reduce(&graph, weights.as_deref()),
        Command::Optimize { n, restarts, tol } => commands::optimize(n, restarts, seed, tol),
        Command::Certify { delta, max_depth, method } => commands::certify(&delta, max_depth, &method, seed),
        Command::Enumerate { n } => commands::enumerate(n),
        Command::ValidateFdf { n } => commands::validate_fdf(n),
        Command::Pipeline { graph, weights, delta, max_depth, no_certificate } => {
            let cert = (!no_certificate).then_some((delta.as_str(), max_depth));
            commands::pipeline(&graph, &weights, cert, seed)
        }
    }
}

fn emit(report: &Report, format: Format, out: Option<&PathBuf>) -> anyhow::Result<()> {
    let body = report.render(format)?;
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (format, out) = (cli.format, cli.out.clone());
    let result = run(cli).and_then(|r| emit(&r, format, out.as_ref()).map(|_| r.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("fdf: a mathematical check failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("fdf: {e:#}");
            ExitCode::from(1)
        }
    }
}
