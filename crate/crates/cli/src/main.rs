mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn domain(e: impl std::fmt::Display) -> CliError {
        CliError::Domain(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "chambers",
    version,
    about = "Buildings with chambers missing: removals, ranks, links, extensions"
)]
pub struct Cli {
    /// Print the full JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PNorm {
    #[value(name = "1")]
    One,
    #[value(name = "inf")]
    Inf,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the built-in graphs and complexes, or print one of them.
    Catalog { name: Option<String> },
    /// Classify equivariant removals of k disjoint chambers from the order-q building.
    Classify {
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Length spectrum of a metric graph.
    Spectrum { input: String },
    /// Rank of a graph, or local rank of a complex.
    Rank {
        input: String,
        #[arg(long, value_enum, default_value = "1")]
        p: PNorm,
    },
    /// Vertex links of a complex.
    Link {
        input: String,
        #[arg(long)]
        vertex: Option<String>,
    },
    /// Curvature check: every link has girth at least 2π.
    Npc { input: String },
    /// First integral homology of a complex.
    H1 {
        input: String,
        /// Also print the fundamental group presentation.
        #[arg(long)]
        presentation: bool,
    },
    /// Extension invariant of a complex (triangulated first when needed).
    Invariant { input: String },
    /// Extensions of a complex into a building.
    Extend(ExtendArgs),
    /// Develop a ball of the universal cover.
    Develop(DevelopArgs),
    /// Search for a ball in which every link is the given graph.
    Prescribe {
        input: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Ways of adding chambers to a graph so that it becomes a building.
    Complete { input: String },
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    pub input: String,
    #[arg(long)]
    pub list_families: bool,
    #[arg(long)]
    pub count: bool,
    /// Write each extended complex into this directory.
    #[arg(long, value_name = "DIR")]
    pub emit: Option<PathBuf>,
    #[arg(long)]
    pub invariant: bool,
}

#[derive(Args, Debug)]
pub struct DevelopArgs {
    pub input: String,
    #[arg(long, default_value_t = 2)]
    pub radius: usize,
    /// Base vertex id (in the triangulated complex); the first vertex by default.
    #[arg(long)]
    pub base: Option<String>,
    /// Largest flat disk around each interior vertex.
    #[arg(long)]
    pub flat_census: bool,
    /// Also search for a ball whose links are all this graph.
    #[arg(long, value_name = "GRAPH")]
    pub prescribe: Option<String>,
    /// Write the ball with its projection block to this file.
    #[arg(long, value_name = "PATH")]
    pub emit: Option<PathBuf>,
}

pub struct Output {
    pub text: String,
    pub result: serde_json::Value,
    pub inputs: Vec<serde_json::Value>,
}

fn run(cli: &Cli, argv: &[String]) -> Result<String, CliError> {
    let start = Instant::now();
    let out = commands::dispatch(&cli.command)?;
    let rendered = if cli.json {
        let report = serde_json::json!({
            "command": argv,
            "inputs": out.inputs,
            "result": out.result,
            "timing_ms": start.elapsed().as_secs_f64() * 1e3,
        });
        serde_json::to_string_pretty(&report).expect("serializable") + "\n"
    } else {
        out.text
    };
    Ok(rendered)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    match run(&cli, &argv[1..]) {
        Ok(rendered) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error: cannot write `{}`: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
