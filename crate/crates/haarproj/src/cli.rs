//! Command-line front end.
//!
//! Four subcommands mirror the library surface: `sample` writes raw
//! projection probabilities, `density` tabulates the analytic two-point
//! density on a grid, `compare` runs a Monte Carlo goodness-of-fit
//! against the analytic law, and `conductance` tabulates the conductance
//! density along every available route. Output is CSV with `#`-prefixed
//! metadata lines, or JSON with the same schema under a `meta` object;
//! floating-point values are printed with 17 significant digits so reruns
//! are byte-identical.
//!
//! Exit codes: 0 success (or statistical accept), 1 statistical reject,
//! 2 usage or validation error, 3 numerical failure.

use std::fmt::Write as _;
use std::io::Write as _;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analytic::{density_auto, onepoint_density, Tolerances};
use crate::conductance::{conductance_convolution, p_g_closed_42, p_g_monte_carlo};
use crate::error::{Error, Result};
use crate::montecarlo::{compare, estimate_joint, CompareOptions, JointEstimate};
use crate::sampling::{
    partial_conductances, projection_probs, sample_frame, sample_haar, stream_rng, EnsembleKind,
    ProjectionConfig,
};

#[derive(Parser, Debug)]
#[command(
    name = "haarproj",
    version,
    about = "Projection-probability statistics of Haar-random orthogonal/unitary matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw Haar samples and write one row of projection probabilities per draw.
    Sample(SampleArgs),
    /// Tabulate the analytic two-point joint density on a grid.
    Density(DensityArgs),
    /// Compare a Monte Carlo histogram against the analytic density.
    Compare(CompareArgs),
    /// Tabulate the conductance density (closed form, convolution, Monte Carlo).
    Conductance(ConductanceArgs),
}

#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Ensemble: orthogonal or unitary.
    #[arg(long, default_value = "unitary")]
    ensemble: String,
    /// Ambient dimension N.
    #[arg(short = 'N')]
    n: usize,
    /// Subspace dimension K.
    #[arg(short = 'K')]
    k: usize,
    /// Random seed for reproducible runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path; "-" writes to stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Worker thread cap (0 = rayon default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of vectors R per draw.
    #[arg(short = 'R', default_value_t = 2)]
    r: usize,
    /// Number of Haar draws.
    #[arg(long, default_value_t = 1000)]
    draws: u64,
    /// Append the conductance g (sum over the N-K transmitting columns).
    #[arg(long, default_value_t = false)]
    with_g: bool,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Grid points per axis (inclusive endpoints).
    #[arg(long, default_value_t = 101)]
    grid: usize,
    /// Absolute tolerance of the quadrature route.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of vectors R per draw (1 or 2).
    #[arg(short = 'R', default_value_t = 2)]
    r: usize,
    /// Number of Haar draws.
    #[arg(long, default_value_t = 1_000_000)]
    draws: u64,
    /// Bins per axis of the histogram.
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Acceptance threshold on the chi-squared p-value.
    #[arg(long, default_value_t = 0.001)]
    tolerance: f64,
    /// Compare against the analytic density of a different K (power checks).
    #[arg(long)]
    analytic_k: Option<usize>,
}

#[derive(Args, Debug)]
struct ConductanceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Grid points over the support [0, min(K, N-K)].
    #[arg(long, default_value_t = 201)]
    grid: usize,
    /// Number of Monte Carlo draws.
    #[arg(long, default_value_t = 100_000)]
    draws: u64,
    /// Histogram bins for the Monte Carlo column.
    #[arg(long, default_value_t = 100)]
    bins: usize,
    /// Absolute tolerance of the convolution quadrature.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

/// Parse the process arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    let threads = match &cli.command {
        Command::Sample(a) => a.common.threads,
        Command::Density(a) => a.common.threads,
        Command::Compare(a) => a.common.threads,
        Command::Conductance(a) => a.common.threads,
    };
    if threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        pool.install(|| execute(cli))
    } else {
        execute(cli)
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Density(args) => cmd_density(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Conductance(args) => cmd_conductance(args),
    }
}

fn parse_common(common: &CommonArgs, r: usize) -> Result<(EnsembleKind, ProjectionConfig)> {
    let ensemble: EnsembleKind = common.ensemble.parse()?;
    let config = ProjectionConfig::new(common.n, common.k, r)?;
    if common.format != "csv" && common.format != "json" {
        return Err(Error::Io(format!(
            "unknown format '{}' (expected csv or json)",
            common.format
        )));
    }
    Ok((ensemble, config))
}

/// Ordered metadata echoed into every output file.
fn metadata(common: &CommonArgs, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let command_line: Vec<String> = std::env::args().collect();
    let mut meta = vec![
        ("command".to_string(), command_line.join(" ")),
        ("version".to_string(), crate::VERSION.to_string()),
        ("ensemble".to_string(), common.ensemble.clone()),
        ("N".to_string(), common.n.to_string()),
        ("K".to_string(), common.k.to_string()),
        ("seed".to_string(), common.seed.to_string()),
    ];
    for (k, v) in extra {
        meta.push((k.to_string(), v.clone()));
    }
    meta
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// One table entry: a float (printed with 17 significant digits in CSV)
/// or a label such as the evaluation method.
enum Cell {
    F(f64),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(x) => fmt_float(*x),
            Cell::S(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::F(x) => serde_json::Number::from_f64(*x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::Null),
            Cell::S(s) => serde_json::Value::String(s.clone()),
        }
    }
}

fn float_row(values: &[f64]) -> Vec<Cell> {
    values.iter().map(|&x| Cell::F(x)).collect()
}

fn write_table(
    common: &CommonArgs,
    meta: &[(String, String)],
    columns: &[&str],
    rows: &[Vec<Cell>],
) -> Result<()> {
    let body = if common.format == "csv" {
        let mut out = String::new();
        for (k, v) in meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "{}", columns.join(","));
        for row in rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    } else {
        let meta_map: serde_json::Map<String, serde_json::Value> = meta
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let json_rows: Vec<Vec<serde_json::Value>> = rows
            .iter()
            .map(|row| row.iter().map(Cell::json).collect())
            .collect();
        let doc = json!({ "meta": meta_map, "columns": columns, "rows": json_rows });
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
        s.push('\n');
        s
    };
    write_output(&common.out, &body)
}

fn write_output(path: &str, body: &str) -> Result<()> {
    if path == "-" {
        std::io::stdout()
            .write_all(body.as_bytes())
            .map_err(|e| Error::Io(e.to_string()))
    } else {
        std::fs::write(path, body).map_err(|e| Error::Io(format!("{path}: {e}")))
    }
}

fn cmd_sample(args: SampleArgs) -> Result<i32> {
    let (ensemble, config) = parse_common(&args.common, args.r)?;
    if args.draws == 0 {
        return Err(Error::InsufficientData("draws must be at least 1".into()));
    }

    const BATCH: u64 = 4096;
    let n_batches = args.draws.div_ceil(BATCH);
    let with_g = args.with_g;
    let seed = args.common.seed;
    use rayon::prelude::*;
    let mut batches: Vec<(u64, Vec<Vec<f64>>)> = (0..n_batches)
        .into_par_iter()
        .map(|batch| {
            let mut rng = stream_rng(seed, batch);
            let in_batch = BATCH.min(args.draws - batch * BATCH);
            let rows = (0..in_batch)
                .map(|_| {
                    let mut row;
                    if with_g {
                        let frame = sample_haar(ensemble, config.n, &mut rng)
                            .expect("dimensions validated");
                        row = projection_probs(&frame, config.k, config.r)
                            .expect("dimensions validated")
                            .t;
                        let g: f64 = partial_conductances(&frame, config.k)
                            .expect("dimensions validated")
                            .iter()
                            .sum();
                        row.push(g);
                    } else {
                        let frame = sample_frame(ensemble, config.n, config.r, &mut rng)
                            .expect("dimensions validated");
                        row = projection_probs(&frame, config.k, config.r)
                            .expect("dimensions validated")
                            .t;
                    }
                    row
                })
                .collect();
            (batch, rows)
        })
        .collect();
    batches.sort_by_key(|(b, _)| *b);
    let rows: Vec<Vec<Cell>> = batches
        .into_iter()
        .flat_map(|(_, r)| r)
        .map(|r| float_row(&r))
        .collect();

    let mut columns: Vec<String> = (1..=config.r).map(|i| format!("t{i}")).collect();
    if with_g {
        columns.push("g".to_string());
    }
    let column_refs: Vec<&str> = columns.iter().map(String::as_str).collect();
    let meta = metadata(
        &args.common,
        &[
            ("R", config.r.to_string()),
            ("draws", args.draws.to_string()),
        ],
    );
    write_table(&args.common, &meta, &column_refs, &rows)?;
    Ok(0)
}

fn cmd_density(args: DensityArgs) -> Result<i32> {
    let (ensemble, config) = parse_common(&args.common, 2)?;
    config.validate_analytic(ensemble)?;
    if args.grid < 2 {
        return Err(Error::InvalidDimension("grid needs at least 2 points".into()));
    }
    let tol = Tolerances {
        quad_abs_tol: args.tolerance,
        ..Tolerances::default()
    };

    let g = args.grid;
    let points: Vec<f64> = (0..g).map(|i| i as f64 / (g - 1) as f64).collect();
    use rayon::prelude::*;
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .flat_map_iter(|&t1| {
            let tol = tol;
            points.iter().map(move |&t2| {
                match density_auto(ensemble, config.n, config.k, t1, t2, &tol) {
                    Ok(v) => vec![
                        Cell::F(t1),
                        Cell::F(t2),
                        Cell::F(v.value),
                        Cell::S(v.method.to_string()),
                        Cell::F(v.est_error),
                    ],
                    // The orthogonal line singularity: report an unbounded
                    // value rather than dropping the grid point.
                    Err(Error::Singularity(_)) | Err(Error::NearSingularity(_)) => vec![
                        Cell::F(t1),
                        Cell::F(t2),
                        Cell::F(f64::INFINITY),
                        Cell::S("closed_form".to_string()),
                        Cell::F(f64::INFINITY),
                    ],
                    Err(_) => vec![
                        Cell::F(t1),
                        Cell::F(t2),
                        Cell::F(f64::NAN),
                        Cell::S("none".to_string()),
                        Cell::F(f64::NAN),
                    ],
                }
            })
        })
        .collect();

    let meta = metadata(
        &args.common,
        &[
            ("grid", args.grid.to_string()),
            ("tolerance", fmt_float(args.tolerance)),
        ],
    );
    write_table(
        &args.common,
        &meta,
        &["t1", "t2", "value", "method", "est_error"],
        &rows,
    )?;
    Ok(0)
}

fn cmd_compare(args: CompareArgs) -> Result<i32> {
    let (ensemble, config) = parse_common(&args.common, args.r)?;
    if args.r > 2 {
        return Err(Error::UnsupportedDimension(
            "compare supports R = 1 or R = 2 (analytic densities)".into(),
        ));
    }
    let analytic_k = args.analytic_k.unwrap_or(config.k);
    ProjectionConfig::new(config.n, analytic_k, args.r)?.validate_analytic(ensemble)?;

    let estimate = estimate_joint(
        ensemble,
        config.n,
        config.k,
        config.r,
        args.draws,
        args.bins,
        args.common.seed,
    )?;
    let JointEstimate::Binned(hist) = estimate else {
        return Err(Error::UnsupportedDimension("compare needs a binned estimate".into()));
    };

    let tol = Tolerances::default();
    let mut opts = CompareOptions::default();
    if ensemble == EnsembleKind::Orthogonal && args.r == 2 {
        opts.strip_eps = Some(tol.eps_ts);
    }
    let n = config.n;
    let report = if args.r == 1 {
        compare(
            &hist,
            |t| onepoint_density(ensemble, n, analytic_k, t[0]).map(|d| d.value).unwrap_or(0.0),
            args.common.seed,
            &opts,
        )?
    } else {
        compare(
            &hist,
            |t| {
                density_auto(ensemble, n, analytic_k, t[0], t[1], &tol)
                    .map(|d| d.value)
                    .unwrap_or(0.0)
            },
            args.common.seed,
            &opts,
        )?
    };

    let meta = metadata(
        &args.common,
        &[
            ("R", config.r.to_string()),
            ("analytic_K", analytic_k.to_string()),
            ("draws", args.draws.to_string()),
            ("bins", args.bins.to_string()),
            ("p_threshold", fmt_float(args.tolerance)),
        ],
    );
    let meta_map: serde_json::Map<String, serde_json::Value> = meta
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect();
    let doc = json!({ "meta": meta_map, "report": report });
    let mut body = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
    body.push('\n');
    write_output(&args.common.out, &body)?;

    Ok(if report.p_value >= args.tolerance { 0 } else { 1 })
}

fn cmd_conductance(args: ConductanceArgs) -> Result<i32> {
    let (ensemble, config) = parse_common(&args.common, 1)?;
    if args.grid < 2 {
        return Err(Error::InvalidDimension("grid needs at least 2 points".into()));
    }
    let tol = Tolerances {
        quad_abs_tol: args.tolerance.min(1e-9),
        ..Tolerances::default()
    };
    let n = config.n;
    let k = config.k;
    let g_max = k.min(n - k) as f64;

    let has_closed = ensemble == EnsembleKind::Unitary && n == 4 && k == 2;
    let has_convolution = (n - k == 2 || k == 2)
        && ProjectionConfig { n, k: if n - k == 2 { k } else { n - k }, r: 2 }
            .validate_analytic(ensemble)
            .is_ok();

    let mc = p_g_monte_carlo(ensemble, n, k, args.draws, args.bins, args.common.seed)?;
    let mc_at = |g: f64| -> f64 {
        // Piecewise-linear interpolation on the tabulated grid, which
        // spans the full support including both endpoints.
        let centers = &mc.grid;
        let values = &mc.values;
        if g < 0.0 || g > g_max {
            return 0.0;
        }
        match centers.binary_search_by(|c| c.total_cmp(&g)) {
            Ok(i) => values[i],
            Err(0) => values[0],
            Err(i) if i == centers.len() => values[centers.len() - 1],
            Err(i) => {
                let w = (g - centers[i - 1]) / (centers[i] - centers[i - 1]);
                values[i - 1] * (1.0 - w) + values[i] * w
            }
        }
    };

    use rayon::prelude::*;
    let grid_points: Vec<f64> = (0..args.grid)
        .map(|i| g_max * i as f64 / (args.grid - 1) as f64)
        .collect();
    let rows: Vec<Vec<Cell>> = grid_points
        .par_iter()
        .map(|&g| {
            let mut row = vec![g];
            if has_closed {
                row.push(p_g_closed_42(g));
            }
            if has_convolution {
                row.push(conductance_convolution(ensemble, n, k, g, &tol).unwrap_or(f64::NAN));
            }
            row.push(mc_at(g));
            float_row(&row)
        })
        .collect();

    let mut columns = vec!["g"];
    if has_closed {
        columns.push("p_closed");
    }
    if has_convolution {
        columns.push("p_convolution");
    }
    columns.push("p_mc");

    let meta = metadata(
        &args.common,
        &[
            ("grid", args.grid.to_string()),
            ("draws", args.draws.to_string()),
            ("bins", args.bins.to_string()),
            ("tolerance", fmt_float(args.tolerance)),
        ],
    );
    write_table(&args.common, &meta, &columns, &rows)?;
    Ok(0)
}
