use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use polyarc::bench::{run_bench, REFERENCE_SIZES};
use polyarc::corpus::{generate, CorpusKind, CorpusSpec, DEFAULT_SEED};
use polyarc::io::{encode_output, ingest, render_svg, write_polyline_csv, InputFormat};
use polyarc::oracle::{oracle_compress, random_instances, Profile, ORACLE_MAX_VERTICES};
use polyarc::{
    dp_compress, jump_compress, FitOptions, PenaltyConfig, ReachTables, Solution, SolverConfig,
    Tolerance,
};

#[derive(Parser)]
#[command(
    name = "polyarc",
    version,
    about = "Compress polylines into segments and circular arcs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Geojson,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Jump,
    Dp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Arcs,
    Zigzag,
}

impl From<Kind> for CorpusKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Arcs => CorpusKind::Arcs,
            Kind::Zigzag => CorpusKind::Zigzag,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compress a polyline read from CSV or GeoJSON.
    Compress {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, allow_negative_numbers = true)]
        tolerance: f64,
        #[arg(long, default_value_t = 2)]
        penalty_seg: u32,
        #[arg(long, default_value_t = 3)]
        penalty_arc: u32,
        #[arg(long, default_value_t = 4)]
        min_arc_vertices: usize,
        #[arg(long, value_enum, default_value = "jump")]
        algorithm: Algo,
        /// Use the trivial reach tables instead of computing them.
        #[arg(long)]
        loose_tables: bool,
        #[arg(long, value_enum, default_value = "on")]
        monotone_arc_check: Switch,
        /// JSON output path; `-` writes to stdout.
        #[arg(long, default_value = "-")]
        output: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the reach tables as CSV.
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Print solver statistics to stderr.
        #[arg(long)]
        stats: bool,
        /// Print the per-level jump trace to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Write a synthetic corpus as CSV.
    Generate {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "-")]
        output: PathBuf,
    },
    /// Time both solvers across corpus densities.
    Bench {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 0.06)]
        tolerance: f64,
        #[arg(long, default_value = "-")]
        csv: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Cross-check the solvers on random instances.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 30)]
        count: usize,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Input(anyhow::Error),
    Internal(anyhow::Error),
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Input(e.into())
}

fn internal<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Internal(e.into())
}

fn sink(path: &Path) -> anyhow::Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufWriter::new(std::io::stdout())))
    } else {
        let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        Ok(Box::new(BufWriter::new(f)))
    }
}

fn write_file(path: &Path, text: &str) -> anyhow::Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn check_tolerance(t: f64) -> Result<f64, Failure> {
    Tolerance::new(t).map(|t| t.get()).map_err(input)
}

fn print_stats(sol: &Solution, secs: f64) {
    let s = &sol.stats;
    eprintln!(
        "primitives {} (arcs {}), penalty {}, sse {:e}, max deviation {:.6}",
        sol.compressed.primitives.len(),
        sol.compressed.arc_count(),
        sol.compressed.total_penalty,
        sol.compressed.total_sse,
        sol.compressed.max_deviation()
    );
    eprintln!(
        "segment fits {}, arc fits {}, repeated fits {}, solve calls {}, levels {}, max depth {}, {:.3} ms",
        s.fits.segment_fits,
        s.fits.arc_fits,
        s.fits.duplicate_pairs,
        s.solve_calls,
        s.levels,
        s.max_depth,
        secs * 1e3
    );
}

#[allow(clippy::too_many_arguments)]
fn compress(
    path: &Path,
    format: Format,
    tolerance: f64,
    penalties: PenaltyConfig,
    algorithm: Algo,
    loose_tables: bool,
    monotone: Switch,
    output: &Path,
    svg: Option<&Path>,
    tables_out: Option<&Path>,
    stats: bool,
    trace: bool,
) -> Result<(), Failure> {
    let tol = check_tolerance(tolerance)?;
    penalties.validate().map_err(input)?;
    let format = match format {
        Format::Csv => InputFormat::Csv,
        Format::Geojson => InputFormat::GeoJson,
    };
    let poly = ingest(path, format)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)?;
    let cfg = SolverConfig {
        penalties,
        fit: FitOptions {
            monotone_check: monotone == Switch::On,
        },
        track_duplicates: stats,
        trace,
    };

    let start = Instant::now();
    let tables = if loose_tables {
        ReachTables::loosest(poly.len())
    } else if algorithm == Algo::Dp {
        ReachTables::backward_only(&poly, tol)
    } else {
        ReachTables::compute(&poly, tol)
    };
    let sol = match algorithm {
        Algo::Jump => jump_compress(&poly, tol, &cfg, &tables),
        Algo::Dp => polyarc::solver::dp_compress_with_tables(&poly, tol, &cfg, &tables),
    }
    .map_err(internal)?;
    let secs = start.elapsed().as_secs_f64();

    let bad = sol.compressed.violations(&poly, tol);
    if !bad.is_empty() {
        return Err(internal(anyhow::anyhow!(
            "vertices {bad:?} exceed the tolerance"
        )));
    }

    let doc = encode_output(&sol.compressed, &poly, tol, penalties);
    let mut out = sink(output).map_err(input)?;
    serde_json::to_writer_pretty(&mut out, &doc).map_err(internal)?;
    writeln!(out).and_then(|_| out.flush()).map_err(input)?;

    if let Some(p) = svg {
        write_file(p, &render_svg(&poly, &sol.compressed)).map_err(input)?;
    }
    if let Some(p) = tables_out {
        let f = File::create(p).map_err(input)?;
        tables.write_csv(BufWriter::new(f)).map_err(input)?;
    }
    if stats {
        print_stats(&sol, secs);
    }
    if trace {
        for t in &sol.trace {
            eprintln!(
                "level {} target {} retries {} solve calls {}",
                t.level,
                t.target.map_or("-".to_string(), |x| x.to_string()),
                t.retries,
                t.solve_calls
            );
        }
    }
    Ok(())
}

fn verify(seed: u64, count: usize) -> Result<(), Failure> {
    let cfg = SolverConfig {
        track_duplicates: true,
        ..SolverConfig::default()
    };
    let mut failures = 0;
    let mut oracle_checks = 0;
    for (pi, profile) in Profile::ALL.into_iter().enumerate() {
        let stream = seed.wrapping_mul(3).wrapping_add(pi as u64);
        let tol = match profile {
            Profile::Walk => 0.3,
            Profile::Smooth => 0.05,
            Profile::Mixed => 0.2,
        };
        for (j, poly) in random_instances(stream, count, 6..=60, profile)
            .iter()
            .enumerate()
        {
            let dp = dp_compress(poly, tol, &cfg).map_err(internal)?;
            let tables = ReachTables::compute(poly, tol);
            let jump = jump_compress(poly, tol, &cfg, &tables).map_err(internal)?;
            let (a, b) = (&dp.compressed, &jump.compressed);
            let mut ok = a.total_penalty == b.total_penalty
                && (a.total_sse - b.total_sse).abs() <= 1e-9 * a.total_sse.max(b.total_sse) + 1e-18
                && b.violations(poly, tol).is_empty()
                && jump.stats.fits.duplicate_pairs == 0;
            if poly.len() <= ORACLE_MAX_VERTICES {
                oracle_checks += 1;
                let o = oracle_compress(poly, tol, &cfg.penalties, cfg.fit).map_err(internal)?;
                ok &= o.penalty == b.total_penalty;
            }
            if !ok {
                failures += 1;
                eprintln!(
                    "{profile:?} #{j} (n = {}): dp ({}, {:e}) jump ({}, {:e})",
                    poly.len(),
                    a.total_penalty,
                    a.total_sse,
                    b.total_penalty,
                    b.total_sse
                );
            }
        }
    }
    println!(
        "verified {} instances ({oracle_checks} against the exhaustive oracle), {failures} failures",
        3 * count
    );
    if failures > 0 {
        return Err(internal(anyhow::anyhow!("{failures} instances disagree")));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Compress {
            input: path,
            format,
            tolerance,
            penalty_seg,
            penalty_arc,
            min_arc_vertices,
            algorithm,
            loose_tables,
            monotone_arc_check,
            output,
            svg,
            tables,
            stats,
            trace,
        } => compress(
            &path,
            format,
            tolerance,
            PenaltyConfig {
                p_seg: penalty_seg,
                p_arc: penalty_arc,
                min_arc_vertices,
            },
            algorithm,
            loose_tables,
            monotone_arc_check,
            &output,
            svg.as_deref(),
            tables.as_deref(),
            stats,
            trace,
        ),
        Command::Generate {
            kind,
            count,
            scale,
            points,
            noise,
            seed,
            output,
        } => {
            let spec = CorpusSpec {
                kind: kind.into(),
                count,
                scale,
                points_per_primitive: points,
                noise,
                seed,
            };
            let poly = generate(&spec).map_err(input)?;
            let mut out = sink(&output).map_err(input)?;
            write_polyline_csv(&poly, &mut out)
                .and_then(|_| out.flush())
                .map_err(input)
        }
        Command::Bench {
            kind,
            sizes,
            repeats,
            tolerance,
            csv,
            svg,
        } => {
            let tol = check_tolerance(tolerance)?;
            let sizes = sizes.unwrap_or_else(|| REFERENCE_SIZES.to_vec());
            if sizes.is_empty() || repeats == 0 {
                return Err(input(anyhow::anyhow!(
                    "need at least one size and one repeat"
                )));
            }
            let report = run_bench(kind.into(), &sizes, repeats, tol).map_err(internal)?;
            let mut out = sink(&csv).map_err(input)?;
            report
                .write_csv(&mut out)
                .and_then(|_| out.flush())
                .map_err(input)?;
            for &s in &sizes {
                if let Some(r) = report.ratio(s) {
                    eprintln!("{s:>4} points: dp/jump {r:.2}");
                }
            }
            if let Some(p) = svg {
                write_file(&p, &report.render_svg()).map_err(input)?;
            }
            Ok(())
        }
        Command::Verify { seed, count } => {
            if count == 0 {
                return Err(input(anyhow::anyhow!("count must be positive")));
            }
            verify(seed, count)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(e)) => {
            eprintln!("internal error: {e:#}");
            ExitCode::from(2)
        }
    }
}
