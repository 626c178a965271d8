//! Inhomogeneous random graph generator CLI.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use motif_core::irg::{generate_fast, sample_weights, ModelParams};
use motif_core::rng::stream_rng;

#[derive(Parser)]
#[command(name = "irg", about = "Sample inhomogeneous random graphs with power-law weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one graph and write it as a whitespace edge list.
    Gen {
        /// Number of vertices.
        #[arg(long)]
        n: usize,
        /// Power-law exponent of the weight distribution, in (2, 3).
        #[arg(long, default_value_t = 2.5)]
        tau: f64,
        /// Master seed; the same seed always produces the same file.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge-list path.
        #[arg(long)]
        out: PathBuf,
        /// Optional output path for the sampled weights (`vertex weight`).
        #[arg(long)]
        weights: Option<PathBuf>,
    },
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen {
            n,
            tau,
            seed,
            out,
            weights: weights_path,
        } => {
            let params = ModelParams::new(n, tau)?;
            let mut rng = stream_rng(seed, 0);
            let weights = sample_weights(&params, &mut rng);
            let graph = generate_fast(&weights, params.mean_weight(), &mut rng);

            let file = File::create(&out)
                .with_context(|| format!("cannot create {}", out.display()))?;
            let mut w = BufWriter::new(file);
            for u in 0..graph.vertex_count() as u32 {
                for &v in graph.neighbors(u) {
                    if v > u {
                        writeln!(w, "{} {}", u, v)?;
                    }
                }
            }
            w.flush()?;

            if let Some(path) = weights_path {
                let file = File::create(&path)
                    .with_context(|| format!("cannot create {}", path.display()))?;
                let mut w = BufWriter::new(file);
                for (v, weight) in weights.iter().enumerate() {
                    writeln!(w, "{} {}", v, weight)?;
                }
                w.flush()?;
            }

            eprintln!(
                "generated n={} m={} tau={} seed={} -> {}",
                graph.vertex_count(),
                graph.edge_count(),
                tau,
                seed,
                out.display()
            );
            Ok(())
        }
    }
}
