//! Replication harness: run a search configuration over many independent
//! replications and aggregate success rates and check counts.
//!
//! A configuration sweeps a pattern family over a list of sizes and a list
//! of window settings. Every replication draws from its own random stream
//! derived from the master seed, so replications can run in parallel and
//! the aggregates do not depend on scheduling. For generated hosts each
//! replication samples a fresh graph; for file hosts the graph is loaded
//! once and only the search is re-randomized.
//!
//! Config files are plain `key = value` text, `#` for comments:
//!
//! ```text
//! source = irg          # or: file (with path = ...)
//! n = 1000000
//! tau = 2.5
//! pattern = cycle       # cycle | clique | star | house | k;u-v,...
//! k = 3,4,5,6,7,8       # sweep sizes (family patterns only)
//! alg = 2
//! windows = sqrt:auto:0.9, sqrt:auto:inf, all
//! s = 10000
//! reps = 100
//! seed = 42
//! ```
//!
//! Window specs: `sqrt:F1:F2` (`F1` a fraction or `auto` = 1/ln n, `F2` a
//! fraction or `inf`), `gamma:G`, or `all` for no filtering.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::Graph;
use crate::ingest::{self, IngestError};
use crate::irg::{self, IrgError, ModelParams};
use crate::pattern::{Pattern, PatternError};
use crate::rng::stream_rng;
use crate::search::{algorithm1, algorithm2, DegreeWindow, WindowError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error(transparent)]
    Irg(#[from] IrgError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    Irg { n: usize, tau: f64 },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    RandomPartition,
    NeighborhoodGrowth,
}

impl Algorithm {
    pub fn id(&self) -> u8 {
        match self {
            Algorithm::RandomPartition => 1,
            Algorithm::NeighborhoodGrowth => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PatternSweep {
    Cycle(Vec<usize>),
    Clique(Vec<usize>),
    Star(Vec<usize>),
    Fixed(Pattern),
}

impl PatternSweep {
    fn instances(&self) -> Result<Vec<Pattern>, PatternError> {
        match self {
            PatternSweep::Cycle(ks) => ks.iter().map(|&k| Pattern::cycle(k)).collect(),
            PatternSweep::Clique(ks) => ks.iter().map(|&k| Pattern::clique(k)).collect(),
            PatternSweep::Star(ks) => ks.iter().map(|&k| Pattern::star(k)).collect(),
            PatternSweep::Fixed(p) => Ok(vec![*p]),
        }
    }
}

/// Degree-window setting, unresolved: `auto` and `inf` bounds become
/// numbers only once the host's `mu` and `n` are known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowSpec {
    Sqrt { f1: Bound, f2: Bound },
    Gamma(f64),
    Whole,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// `1 / ln(n)`; valid for the lower fraction only.
    Auto,
    Inf,
    Value(f64),
}

impl WindowSpec {
    pub fn parse(spec: &str) -> Result<WindowSpec, ExperimentError> {
        let bad = || ExperimentError::Config(format!("bad window spec {spec:?}"));
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        match parts.as_slice() {
            ["all"] => Ok(WindowSpec::Whole),
            ["gamma", g] => Ok(WindowSpec::Gamma(g.parse().map_err(|_| bad())?)),
            ["sqrt", f1, f2] => {
                let parse_bound = |t: &str| -> Result<Bound, ExperimentError> {
                    match t {
                        "auto" => Ok(Bound::Auto),
                        "inf" => Ok(Bound::Inf),
                        v => Ok(Bound::Value(v.parse().map_err(|_| bad())?)),
                    }
                };
                Ok(WindowSpec::Sqrt {
                    f1: parse_bound(f1)?,
                    f2: parse_bound(f2)?,
                })
            }
            _ => Err(bad()),
        }
    }

    pub fn resolve(&self, mu: f64, n: usize) -> Result<DegreeWindow, ExperimentError> {
        match *self {
            WindowSpec::Whole => Ok(DegreeWindow::all()),
            WindowSpec::Gamma(g) => Ok(DegreeWindow::gamma_window(g, mu, n)?),
            WindowSpec::Sqrt { f1, f2 } => {
                let f1 = match f1 {
                    Bound::Auto => {
                        if n < 2 {
                            return Err(ExperimentError::Config(
                                "auto lower fraction needs n >= 2".into(),
                            ));
                        }
                        1.0 / (n as f64).ln()
                    }
                    Bound::Value(v) => v,
                    Bound::Inf => {
                        return Err(ExperimentError::Config(
                            "lower fraction cannot be inf".into(),
                        ))
                    }
                };
                let f2 = match f2 {
                    Bound::Inf => f64::INFINITY,
                    Bound::Value(v) => v,
                    Bound::Auto => {
                        return Err(ExperimentError::Config(
                            "upper fraction cannot be auto".into(),
                        ))
                    }
                };
                Ok(DegreeWindow::sqrt_window(f1, f2, mu, n)?)
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            WindowSpec::Whole => "all".to_string(),
            WindowSpec::Gamma(g) => format!("gamma {g}"),
            WindowSpec::Sqrt { f1, f2 } => {
                let bound = |b: Bound| match b {
                    Bound::Auto => "auto".to_string(),
                    Bound::Inf => "inf".to_string(),
                    Bound::Value(v) => format!("{v}"),
                };
                format!("sqrt f1={} f2={}", bound(f1), bound(f2))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    pub pattern: PatternSweep,
    pub algorithm: Algorithm,
    pub windows: Vec<WindowSpec>,
    pub budget: u64,
    pub reps: u32,
    pub seed: u64,
}

impl ExperimentConfig {
    /// Parses the `key = value` config format (see module docs).
    pub fn parse(text: &str) -> Result<ExperimentConfig, ExperimentError> {
        let mut map: BTreeMap<&str, &str> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                ExperimentError::Config(format!("line {}: expected key = value", idx + 1))
            })?;
            map.insert(key.trim(), value.trim());
        }
        let known = [
            "source", "n", "tau", "path", "pattern", "k", "alg", "windows", "s", "reps", "seed",
        ];
        for key in map.keys() {
            if !known.contains(key) {
                return Err(ExperimentError::Config(format!("unknown key {key:?}")));
            }
        }

        let get = |key: &str| map.get(key).copied();
        let require = |key: &str| {
            get(key).ok_or_else(|| ExperimentError::Config(format!("missing key {key:?}")))
        };
        fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ExperimentError> {
            value
                .parse()
                .map_err(|_| ExperimentError::Config(format!("bad value for {key:?}: {value:?}")))
        }

        let source = match require("source")? {
            "irg" => GraphSource::Irg {
                n: number("n", require("n")?)?,
                tau: number("tau", require("tau")?)?,
            },
            "file" => GraphSource::File(PathBuf::from(require("path")?)),
            other => {
                return Err(ExperimentError::Config(format!(
                    "source must be irg or file, got {other:?}"
                )))
            }
        };

        let ks: Vec<usize> = match get("k") {
            Some(list) => list
                .split(',')
                .map(|t| number("k", t.trim()))
                .collect::<Result<_, _>>()?,
            None => (3..=8).collect(),
        };
        let pattern = match require("pattern")? {
            "cycle" => PatternSweep::Cycle(ks),
            "clique" => PatternSweep::Clique(ks),
            "star" => PatternSweep::Star(ks),
            spec => PatternSweep::Fixed(Pattern::from_spec(spec)?),
        };

        let algorithm = match get("alg").unwrap_or("2") {
            "1" => Algorithm::RandomPartition,
            "2" => Algorithm::NeighborhoodGrowth,
            other => {
                return Err(ExperimentError::Config(format!(
                    "alg must be 1 or 2, got {other:?}"
                )))
            }
        };

        let windows = match get("windows") {
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(WindowSpec::parse)
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![
                WindowSpec::Sqrt {
                    f1: Bound::Auto,
                    f2: Bound::Value(0.9),
                },
                WindowSpec::Sqrt {
                    f1: Bound::Auto,
                    f2: Bound::Inf,
                },
                WindowSpec::Whole,
            ],
        };
        if windows.is_empty() {
            return Err(ExperimentError::Config("no window settings".into()));
        }

        let budget = match get("s") {
            Some(v) => number("s", v)?,
            None => 10_000,
        };
        let reps = match get("reps") {
            Some(v) => number("reps", v)?,
            None => 100,
        };
        if reps == 0 {
            return Err(ExperimentError::Config("reps must be at least 1".into()));
        }
        let seed = match get("seed") {
            Some(v) => number("seed", v)?,
            None => 0,
        };

        Ok(ExperimentConfig {
            source,
            pattern,
            algorithm,
            windows,
            budget,
            reps,
            seed,
        })
    }
}

/// Aggregate for one (pattern, window) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub k: usize,
    pub setting: String,
    pub success_rate: f64,
    /// Mean number of induced-isomorphism checks over the *successful*
    /// replications; None when nothing succeeded.
    pub mean_checks: Option<f64>,
    pub selected_mean: f64,
    pub reps: u32,
    pub seed: u64,
}

/// One replication of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepRecord {
    pub rep: u32,
    pub cell: usize,
    pub found: bool,
    pub checks: u64,
    pub selected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    /// Flat per-replication records, ordered by (rep, cell).
    pub replications: Vec<RepRecord>,
    /// Mean wall time of select + search per cell. Not part of any
    /// deterministic output format.
    pub mean_wall: Vec<Duration>,
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, ExperimentError> {
    let patterns = cfg.pattern.instances()?;
    let host = match &cfg.source {
        GraphSource::File(path) => Some(Arc::new(ingest::read_edge_list(path)?.graph)),
        GraphSource::Irg { .. } => None,
    };
    let (mu, n) = match (&cfg.source, &host) {
        (GraphSource::Irg { n, tau }, _) => (ModelParams::new(*n, *tau)?.mean_weight(), *n),
        (GraphSource::File(_), Some(g)) => {
            let n = g.vertex_count();
            (2.0 * g.edge_count() as f64 / n as f64, n)
        }
        _ => unreachable!(),
    };

    // Cells in row order: pattern-major, window-minor.
    let mut cells: Vec<(usize, usize, DegreeWindow)> = Vec::new();
    for (pi, _) in patterns.iter().enumerate() {
        for (wi, spec) in cfg.windows.iter().enumerate() {
            cells.push((pi, wi, spec.resolve(mu, n)?));
        }
    }

    let stride = cells.len() as u64 + 1;
    let per_rep: Vec<(Vec<RepRecord>, Vec<Duration>)> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| -> Result<(Vec<RepRecord>, Vec<Duration>), ExperimentError> {
            let base = rep as u64 * stride;
            let graph: Arc<Graph> = match &cfg.source {
                GraphSource::Irg { n, tau } => {
                    let params = ModelParams::new(*n, *tau)?;
                    let mut rng = stream_rng(cfg.seed, base);
                    let weights = irg::sample_weights(&params, &mut rng);
                    Arc::new(irg::generate_fast(&weights, params.mean_weight(), &mut rng))
                }
                GraphSource::File(_) => host.as_ref().expect("loaded above").clone(),
            };
            let mut records = Vec::with_capacity(cells.len());
            let mut walls = Vec::with_capacity(cells.len());
            for (cell_idx, &(pi, _, window)) in cells.iter().enumerate() {
                let mut rng = stream_rng(cfg.seed, base + 1 + cell_idx as u64);
                let start = Instant::now();
                let outcome = match cfg.algorithm {
                    Algorithm::RandomPartition => {
                        algorithm1(&graph, &patterns[pi], &window, &mut rng)
                    }
                    Algorithm::NeighborhoodGrowth => {
                        algorithm2(&graph, &patterns[pi], &window, cfg.budget, &mut rng)
                    }
                };
                walls.push(start.elapsed());
                records.push(RepRecord {
                    rep,
                    cell: cell_idx,
                    found: outcome.found(),
                    checks: outcome.checks,
                    selected: outcome.selected,
                });
            }
            Ok((records, walls))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::with_capacity(cells.len());
    let mut mean_wall = Vec::with_capacity(cells.len());
    for (cell_idx, &(pi, wi, _)) in cells.iter().enumerate() {
        let outcomes: Vec<&RepRecord> = per_rep.iter().map(|(r, _)| &r[cell_idx]).collect();
        let setting = format!(
            "alg{} {}",
            cfg.algorithm.id(),
            cfg.windows[wi].label()
        );
        rows.push(aggregate_cell(
            patterns[pi].k(),
            setting,
            &outcomes,
            cfg.reps,
            cfg.seed,
        ));
        let total: Duration = per_rep.iter().map(|(_, w)| w[cell_idx]).sum();
        mean_wall.push(total / cfg.reps);
    }

    let mut replications = Vec::with_capacity(cfg.reps as usize * cells.len());
    for (records, _) in &per_rep {
        replications.extend(records.iter().copied());
    }

    Ok(ExperimentResult {
        rows,
        replications,
        mean_wall,
    })
}

fn aggregate_cell(
    k: usize,
    setting: String,
    outcomes: &[&RepRecord],
    reps: u32,
    seed: u64,
) -> ResultRow {
    let successes: Vec<&&RepRecord> = outcomes.iter().filter(|r| r.found).collect();
    let mean_checks = if successes.is_empty() {
        None
    } else {
        Some(successes.iter().map(|r| r.checks as f64).sum::<f64>() / successes.len() as f64)
    };
    ResultRow {
        k,
        setting,
        success_rate: successes.len() as f64 / outcomes.len() as f64,
        mean_checks,
        selected_mean: outcomes.iter().map(|r| r.selected as f64).sum::<f64>()
            / outcomes.len() as f64,
        reps,
        seed,
    }
}

/// Writes the aggregate rows as CSV with a fixed column set:
/// `k,setting,success_rate,mean_checks,selected_mean,reps,seed`.
/// An empty `mean_checks` field means no replication succeeded.
pub fn emit_csv<W: Write>(result: &ExperimentResult, writer: W) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "k",
        "setting",
        "success_rate",
        "mean_checks",
        "selected_mean",
        "reps",
        "seed",
    ])
    .map_err(csv_io)?;
    for row in &result.rows {
        w.write_record([
            row.k.to_string(),
            row.setting.clone(),
            row.success_rate.to_string(),
            row.mean_checks.map(|c| c.to_string()).unwrap_or_default(),
            row.selected_mean.to_string(),
            row.reps.to_string(),
            row.seed.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one JSON object per replication record (no timing fields, so the
/// output is byte-stable for a fixed seed).
pub fn write_replication_log<W: Write>(
    result: &ExperimentResult,
    mut writer: W,
) -> Result<(), ExperimentError> {
    for rec in &result.replications {
        let row = &result.rows[rec.cell];
        writeln!(
            writer,
            "{{\"rep\":{},\"k\":{},\"setting\":\"{}\",\"found\":{},\"checks\":{},\"selected\":{}}}",
            rec.rep, row.k, row.setting, rec.found, rec.checks, rec.selected
        )?;
    }
    Ok(())
}

fn csv_io(err: csv::Error) -> ExperimentError {
    ExperimentError::Io(std::io::Error::other(err))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig::parse(
            "source = irg\n\
             n = 400\n\
             tau = 2.5\n\
             pattern = cycle\n\
             k = 3,4\n\
             alg = 2\n\
             windows = all, sqrt:auto:0.9\n\
             s = 200\n\
             reps = 6\n\
             seed = 99\n",
        )
        .unwrap()
    }

    #[test]
    fn parse_full_config() {
        let cfg = small_cfg();
        assert_eq!(cfg.source, GraphSource::Irg { n: 400, tau: 2.5 });
        assert_eq!(cfg.pattern, PatternSweep::Cycle(vec![3, 4]));
        assert_eq!(cfg.algorithm, Algorithm::NeighborhoodGrowth);
        assert_eq!(cfg.windows.len(), 2);
        assert_eq!(cfg.budget, 200);
        assert_eq!(cfg.reps, 6);
        assert_eq!(cfg.seed, 99);
    }

    #[test]
    fn parse_defaults() {
        let cfg = ExperimentConfig::parse("source = irg\nn = 100\ntau = 2.5\npattern = house\n")
            .unwrap();
        assert_eq!(cfg.pattern, PatternSweep::Fixed(Pattern::house()));
        assert_eq!(cfg.windows.len(), 3);
        assert_eq!(cfg.budget, 10_000);
        assert_eq!(cfg.reps, 100);
        assert_eq!(cfg.seed, 0);
    }

    #[test]
    fn parse_rejects_unknown_key() {
        let err = ExperimentConfig::parse("source = irg\nn = 10\ntau = 2.5\npattern = house\nbogus = 1\n");
        assert!(matches!(err, Err(ExperimentError::Config(_))));
    }

    #[test]
    fn parse_rejects_bad_window() {
        assert!(WindowSpec::parse("sqrt:auto").is_err());
        assert!(WindowSpec::parse("gamma:x").is_err());
        assert!(WindowSpec::parse("sqrt:inf:0.9")
            .unwrap()
            .resolve(3.0, 100)
            .is_err());
    }

    #[test]
    fn window_spec_labels() {
        assert_eq!(WindowSpec::Whole.label(), "all");
        assert_eq!(WindowSpec::Gamma(0.3).label(), "gamma 0.3");
        assert_eq!(
            WindowSpec::parse("sqrt:auto:inf").unwrap().label(),
            "sqrt f1=auto f2=inf"
        );
    }

    #[test]
    fn rows_are_one_per_k_per_setting() {
        let result = run_experiment(&small_cfg()).unwrap();
        assert_eq!(result.rows.len(), 4);
        let keys: Vec<(usize, &str)> = result
            .rows
            .iter()
            .map(|r| (r.k, r.setting.as_str()))
            .collect();
        assert_eq!(
            keys,
            vec![
                (3, "alg2 all"),
                (3, "alg2 sqrt f1=auto f2=0.9"),
                (4, "alg2 all"),
                (4, "alg2 sqrt f1=auto f2=0.9"),
            ]
        );
        assert_eq!(result.replications.len(), 4 * 6);
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = small_cfg();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.rows, b.rows);
        assert_eq!(a.replications, b.replications);
    }

    #[test]
    fn aggregates_insensitive_to_thread_count() {
        let cfg = small_cfg();
        let baseline = run_experiment(&cfg).unwrap();
        for threads in [2, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let run = pool.install(|| run_experiment(&cfg)).unwrap();
            assert_eq!(run.rows, baseline.rows);
            assert_eq!(run.replications, baseline.replications);
        }
    }

    #[test]
    fn mean_checks_conditions_on_success() {
        let make = |rep, found, checks| RepRecord {
            rep,
            cell: 0,
            found,
            checks,
            selected: 10,
        };
        let records = [
            make(0, true, 4),
            make(1, false, 100),
            make(2, true, 8),
            make(3, false, 100),
        ];
        let refs: Vec<&RepRecord> = records.iter().collect();
        let row = aggregate_cell(5, "s".into(), &refs, 4, 7);
        assert_eq!(row.success_rate, 0.5);
        assert_eq!(row.mean_checks, Some(6.0));
        assert_eq!(row.selected_mean, 10.0);

        let failures = [make(0, false, 9)];
        let refs: Vec<&RepRecord> = failures.iter().collect();
        let row = aggregate_cell(5, "s".into(), &refs, 1, 7);
        assert_eq!(row.mean_checks, None);
        assert_eq!(row.success_rate, 0.0);
    }

    #[test]
    fn csv_header_only_for_empty_result() {
        let empty = ExperimentResult {
            rows: vec![],
            replications: vec![],
            mean_wall: vec![],
        };
        let mut buf = Vec::new();
        emit_csv(&empty, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "k,setting,success_rate,mean_checks,selected_mean,reps,seed\n"
        );
    }

    #[test]
    fn csv_row_round_trips() {
        let result = ExperimentResult {
            rows: vec![ResultRow {
                k: 5,
                setting: "alg2 sqrt f1=auto f2=0.9".into(),
                success_rate: 0.47,
                mean_checks: Some(123.25),
                selected_mean: 84.5,
                reps: 100,
                seed: 42,
            }],
            replications: vec![],
            mean_wall: vec![Duration::ZERO],
        };
        let mut buf = Vec::new();
        emit_csv(&result, &mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let record = reader.records().next().unwrap().unwrap();
        assert_eq!(&record[0], "5");
        assert_eq!(&record[1], "alg2 sqrt f1=auto f2=0.9");
        assert_eq!(record[2].parse::<f64>().unwrap(), 0.47);
        assert_eq!(record[3].parse::<f64>().unwrap(), 123.25);
        assert_eq!(record[4].parse::<f64>().unwrap(), 84.5);
        assert_eq!(&record[5], "100");
        assert_eq!(&record[6], "42");
    }

    #[test]
    fn replication_log_is_stable() {
        let cfg = small_cfg();
        let result = run_experiment(&cfg).unwrap();
        let mut a = Vec::new();
        write_replication_log(&result, &mut a).unwrap();
        let mut b = Vec::new();
        write_replication_log(&run_experiment(&cfg).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        assert!(!a.is_empty());
        let first = String::from_utf8(a).unwrap();
        assert!(first.lines().next().unwrap().starts_with("{\"rep\":0,"));
    }
}
