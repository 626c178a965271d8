//! Induced subgraph search CLI: find a pattern in an edge-list graph,
//! report data set statistics, or run a replication experiment.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use motif_core::experiment::{
    emit_csv, run_experiment, write_replication_log, Bound, ExperimentConfig, WindowSpec,
};
use motif_core::ingest::{dataset_stats, read_edge_list, LabeledGraph};
use motif_core::pattern::Pattern;
use motif_core::rng::stream_rng;
use motif_core::search::{algorithm1, algorithm2};

#[derive(Parser)]
#[command(
    name = "motif",
    about = "Find a connected pattern as an induced subgraph of a power-law graph"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search one graph for one pattern and print a JSON result line.
    Find {
        /// Edge-list file (whitespace pairs, `#` comments).
        #[arg(long)]
        graph: PathBuf,
        /// Pattern: `house`, `cycle5`, `clique4`, `star6` or `k;u-v,...`.
        #[arg(long)]
        pattern: String,
        /// 1 = random partition, 2 = neighborhood growth.
        #[arg(long, default_value_t = 2)]
        alg: u8,
        /// Lower window fraction (`auto` = 1/ln n) for the sqrt window.
        #[arg(long, default_value = "auto", conflicts_with_all = ["gamma", "all"])]
        f1: String,
        /// Upper window fraction (`inf` allowed) for the sqrt window.
        #[arg(long, default_value = "0.9", conflicts_with_all = ["gamma", "all"])]
        f2: String,
        /// Use the `[(mu n)^gamma / ln n, (mu n)^gamma]` window instead.
        #[arg(long)]
        gamma: Option<f64>,
        /// Search the whole graph (no degree filtering).
        #[arg(long, conflicts_with = "gamma")]
        all: bool,
        /// Attempt budget for the neighborhood-growth search.
        #[arg(long, default_value_t = 10_000)]
        s: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Override the mean degree used by the window formulas
        /// (default: 2m/n of the loaded graph).
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Print data set statistics (n, m, mean degree, fitted exponent) as JSON.
    Stats {
        #[arg(long)]
        graph: PathBuf,
        /// Fix the tail cutoff instead of scanning for it.
        #[arg(long)]
        d_min: Option<usize>,
    },
    /// Run a replication experiment described by a key=value config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// CSV output path (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional JSON-lines per-replication log.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct FindReport {
    found: bool,
    checks: u64,
    selected: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    embedding: Option<Vec<u64>>,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Find {
            graph,
            pattern,
            alg,
            f1,
            f2,
            gamma,
            all,
            s,
            seed,
            mu,
        } => find(graph, &pattern, alg, &f1, &f2, gamma, all, s, seed, mu),
        Command::Stats { graph, d_min } => stats(graph, d_min),
        Command::Experiment { config, out, log } => experiment(config, out, log),
    }
}

#[allow(clippy::too_many_arguments)]
fn find(
    graph_path: PathBuf,
    pattern: &str,
    alg: u8,
    f1: &str,
    f2: &str,
    gamma: Option<f64>,
    all: bool,
    s: u64,
    seed: u64,
    mu_override: Option<f64>,
) -> Result<()> {
    let labeled: LabeledGraph = read_edge_list(&graph_path)
        .with_context(|| format!("cannot read {}", graph_path.display()))?;
    let g = &labeled.graph;
    let h = Pattern::from_spec(pattern)?;

    let n = g.vertex_count();
    let mu = mu_override.unwrap_or(2.0 * g.edge_count() as f64 / n as f64);
    let spec = if all {
        WindowSpec::Whole
    } else if let Some(gamma) = gamma {
        WindowSpec::Gamma(gamma)
    } else {
        let parse_bound = |t: &str| -> Result<Bound> {
            Ok(match t {
                "auto" => Bound::Auto,
                "inf" => Bound::Inf,
                v => Bound::Value(v.parse().with_context(|| format!("bad fraction {v:?}"))?),
            })
        };
        WindowSpec::Sqrt {
            f1: parse_bound(f1)?,
            f2: parse_bound(f2)?,
        }
    };
    let window = spec.resolve(mu, n)?;

    let mut rng = stream_rng(seed, 0);
    let outcome = match alg {
        1 => algorithm1(g, &h, &window, &mut rng),
        2 => algorithm2(g, &h, &window, s, &mut rng),
        other => bail!("alg must be 1 or 2, got {other}"),
    };

    let report = FindReport {
        found: outcome.found(),
        checks: outcome.checks,
        selected: outcome.selected,
        embedding: outcome.embedding.map(|e| {
            e.as_slice()
                .iter()
                .map(|&v| labeled.original_label(v))
                .collect()
        }),
    };
    println!("{}", serde_json::to_string(&report)?);
    Ok(())
}

fn stats(graph_path: PathBuf, d_min: Option<usize>) -> Result<()> {
    let labeled = read_edge_list(&graph_path)
        .with_context(|| format!("cannot read {}", graph_path.display()))?;
    let stats = match d_min {
        None => dataset_stats(&labeled.graph)?,
        Some(d) => {
            let degrees: Vec<usize> = labeled.graph.degrees().collect();
            let fit = motif_core::ingest::fit_tau(&degrees, Some(d))?;
            motif_core::ingest::DatasetStats {
                n: labeled.graph.vertex_count(),
                m: labeled.graph.edge_count(),
                mean_degree: 2.0 * labeled.graph.edge_count() as f64
                    / labeled.graph.vertex_count() as f64,
                tau_hat: fit.tau_hat,
                d_min: fit.d_min,
                tail_size: fit.tail_size,
            }
        }
    };
    println!("{}", serde_json::to_string(&stats)?);
    Ok(())
}

fn experiment(config_path: PathBuf, out: Option<PathBuf>, log: Option<PathBuf>) -> Result<()> {
    let text = fs::read_to_string(&config_path)
        .with_context(|| format!("cannot read {}", config_path.display()))?;
    let cfg = ExperimentConfig::parse(&text)?;
    let result = run_experiment(&cfg)?;

    match out {
        Some(path) => {
            let file =
                File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
            emit_csv(&result, BufWriter::new(file))?;
        }
        None => {
            let stdout = std::io::stdout();
            emit_csv(&result, stdout.lock())?;
        }
    }
    if let Some(path) = log {
        let file =
            File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
        write_replication_log(&result, BufWriter::new(file))?;
    }
    Ok(())
}
