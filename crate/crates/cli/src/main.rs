use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use torushom_core::{load_graph, parse_rational, Caps, Rational, WeightedGraph};

mod commands;

#[derive(Parser)]
#[command(
    name = "torushom",
    version,
    about = "Exact homomorphism counts and cluster expansions on discrete tori"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Lift the vertex-count caps on exhaustive enumerations.
    #[arg(long, global = true)]
    unsafe_cap: bool,
    /// Relative tolerance required of float evaluations.
    #[arg(long, global = true, default_value_t = 1e-9)]
    rel_tol: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List dominant patterns with η and δ.
    Patterns {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Cluster terms L_1..L_k as exponential polynomials in n.
    Lk {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// 1-based pattern index, or `all` for one representative per symmetry class.
        #[arg(long, default_value = "all")]
        pattern: PatternSelector,
    },
    /// Truncated expansion of ln Z, optionally evaluated at n.
    Zformula {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Exact partition function by exhaustive search.
    Brute {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        n: u32,
    },
    /// Check the polymer identity for Z̃ and print the measures table.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value = "1/8", value_parser = parse_alpha)]
        alpha: Rational,
    },
    /// Count k-bounded functions on the hypercube.
    Kbounded {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: Option<u32>,
        /// Enumerate exactly and cross-check against the homomorphism count.
        #[arg(long)]
        exact: bool,
    },
    /// Compare engine output for proper q-colourings with the closed forms.
    Qcolor {
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug)]
enum PatternSelector {
    All,
    Index(usize),
}

impl std::str::FromStr for PatternSelector {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "all" {
            return Ok(PatternSelector::All);
        }
        match s.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(PatternSelector::Index(i)),
            _ => Err(format!("expected `all` or a positive index, got `{s}`")),
        }
    }
}

fn parse_alpha(s: &str) -> std::result::Result<Rational, String> {
    let alpha = parse_rational(s).map_err(|e| e.to_string())?;
    if alpha <= Rational::from_integer(0.into()) || alpha >= Rational::from_integer(1.into()) {
        return Err(format!("alpha must lie in (0,1), got {s}"));
    }
    Ok(alpha)
}

fn read_graph(path: &PathBuf) -> Result<WeightedGraph> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    load_graph(&text).with_context(|| format!("{}", path.display()))
}

/// A command's outcome: both renderings plus whether every check passed.
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub ok: bool,
}

fn run(cli: Cli) -> Result<Report> {
    let caps = if cli.common.unsafe_cap {
        Caps::unlimited()
    } else {
        Caps::default()
    };
    let rel_tol = cli.common.rel_tol;
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        bail!("--rel-tol must lie in (0,1)");
    }
    match cli.command {
        Command::Patterns { graph } => commands::patterns(&read_graph(&graph)?),
        Command::Lk {
            graph,
            m,
            k,
            pattern,
        } => commands::lk(&read_graph(&graph)?, m, k, pattern),
        Command::Zformula { graph, m, k, n } => {
            commands::zformula(&read_graph(&graph)?, m, k, n, rel_tol)
        }
        Command::Brute { graph, m, n } => commands::brute(&read_graph(&graph)?, m, n, caps),
        Command::Verify { graph, m, n, alpha } => {
            commands::verify(&read_graph(&graph)?, m, n, &alpha, caps)
        }
        Command::Kbounded { k, n, exact } => commands::kbounded(k, n, exact, caps),
        Command::Qcolor { q, m, k } => commands::qcolor(q, m, k),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.common.format;
    if let Some(threads) = cli.common.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("JSON values serialize")
                ),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
