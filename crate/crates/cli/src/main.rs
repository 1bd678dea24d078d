use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthonet::io::{report_json, report_table};
use orthonet::{
    check_properties, export_dot, network_popping, parse_dissimilarity, parse_network,
    print_dissimilarity, print_network, random_network, GenConfig, LabelledNetwork,
    NotRepresentable,
};
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "orthonet",
    version,
    about = "Level-1 network representations of orthology relations"
)]
struct Cli {
    /// Also write the resulting network as Graphviz DOT to this path.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Random seed for `gen`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,
    /// Worker threads for the library (1 keeps everything single-threaded).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Io {
    /// Input file (default: stdin).
    #[arg(short, long, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Reconstruct the level-1 network of a dissimilarity file.
    Pop(Io),
    /// Write the dissimilarity induced by a network file.
    Induce(Io),
    /// Report which characterising properties hold.
    Check {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Rewrite a network into its canonical semi-discriminating form.
    Transform(Io),
    /// Restrict a dissimilarity or network file to a subset of taxa.
    Restrict {
        #[command(flatten)]
        io: Io,
        /// Comma-separated taxon names.
        #[arg(long, value_delimiter = ',', required = true)]
        taxa: Vec<String>,
    },
    /// Exit 0 if two network files are isomorphic, 4 otherwise.
    Iso { first: PathBuf, second: PathBuf },
    /// Generate a random labelled level-1 network.
    Gen {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        m: usize,
        /// Maximum number of cycles.
        #[arg(long, default_value_t = 2)]
        cycles: usize,
        #[arg(long, default_value_t = 3)]
        max_side_len: usize,
        /// Probability that a cycle is forced to be weakly labelled.
        #[arg(long, default_value_t = 1.0)]
        weak_bias: f64,
        /// Output file (default: stdout).
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Syntax(String),
    #[error("{0}")]
    NotRepresentable(String),
    #[error("{0}")]
    Precondition(String),
    #[error("networks are not isomorphic")]
    NotIsomorphic,
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) | CliError::Syntax(_) => 1,
            CliError::NotRepresentable(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::NotIsomorphic => 4,
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Io(format!("stdout: {e}"))),
    }
}

fn read_dissimilarity(path: Option<&Path>) -> Result<orthonet::Sym3Dissimilarity, CliError> {
    parse_dissimilarity(&read_input(path)?).map_err(|e| CliError::Syntax(e.to_string()))
}

fn read_network(path: Option<&Path>) -> Result<LabelledNetwork, CliError> {
    parse_network(&read_input(path)?).map_err(|e| CliError::Syntax(e.to_string()))
}

/// Dissimilarity files start with a `taxa:` or `symbols:` header.
fn is_dissimilarity_text(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("taxa:") || l.starts_with("symbols:"))
}

fn rejection(e: &NotRepresentable, delta: &orthonet::Sym3Dissimilarity) -> CliError {
    CliError::NotRepresentable(e.describe(delta.taxa()))
}

fn emit_network(cli: &Cli, out: Option<&Path>, net: &LabelledNetwork) -> Result<(), CliError> {
    if let Some(dot) = &cli.dot {
        fs::write(dot, export_dot(net))
            .map_err(|e| CliError::Io(format!("{}: {e}", dot.display())))?;
    }
    write_output(out, &print_network(net))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Pop(io) => {
            let delta = read_dissimilarity(io.input.as_deref())?;
            let net = network_popping(&delta).map_err(|e| rejection(&e, &delta))?;
            emit_network(cli, io.output.as_deref(), &net)
        }
        Command::Induce(io) => {
            let net = read_network(io.input.as_deref())?;
            let delta = net
                .induce()
                .map_err(|e| CliError::Precondition(e.to_string()))?;
            write_output(io.output.as_deref(), &print_dissimilarity(&delta))
        }
        Command::Check { io, format } => {
            let delta = read_dissimilarity(io.input.as_deref())?;
            let report = check_properties(&delta);
            let text = match format {
                Format::Table => report_table(&report, delta.taxa()),
                Format::Json => report_json(&report, delta.taxa()),
            };
            write_output(io.output.as_deref(), &text)?;
            match &report.rejection {
                None => Ok(()),
                Some(e) => Err(rejection(e, &delta)),
            }
        }
        Command::Transform(io) => {
            let net = read_network(io.input.as_deref())?;
            emit_network(cli, io.output.as_deref(), &net.transform())
        }
        Command::Restrict { io, taxa } => {
            let text = read_input(io.input.as_deref())?;
            if is_dissimilarity_text(&text) {
                let delta =
                    parse_dissimilarity(&text).map_err(|e| CliError::Syntax(e.to_string()))?;
                let sub = delta
                    .restrict_names(taxa)
                    .map_err(|e| CliError::Precondition(e.to_string()))?;
                write_output(io.output.as_deref(), &print_dissimilarity(&sub))
            } else {
                let net = parse_network(&text).map_err(|e| CliError::Syntax(e.to_string()))?;
                let sub = net
                    .restrict_names(taxa)
                    .map_err(|e| CliError::Precondition(e.to_string()))?;
                emit_network(cli, io.output.as_deref(), &sub)
            }
        }
        Command::Iso { first, second } => {
            let a = read_network(Some(first))?;
            let b = read_network(Some(second))?;
            if a.isomorphic(&b) {
                Ok(())
            } else {
                Err(CliError::NotIsomorphic)
            }
        }
        Command::Gen {
            n,
            m,
            cycles,
            max_side_len,
            weak_bias,
            output,
        } => {
            let cfg = GenConfig {
                n: *n,
                m: *m,
                cycle_budget: *cycles,
                seed: cli.seed,
                max_side_len: *max_side_len,
                weak_label_bias: *weak_bias,
            };
            let net = random_network(&cfg).map_err(|e| CliError::Precondition(e.to_string()))?;
            emit_network(cli, output.as_deref(), &net)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(3);
    }
    // Only fails if a pool already exists, which cannot happen here.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build_global();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !cli.quiet {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}
