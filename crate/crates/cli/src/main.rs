//! Command-line front end: `run` drives configured experiment batches,
//! `profile` tabulates shallow-range growth, and `compare` races the
//! construction against the classical uniform baseline.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use relapprox_cli::config::{ExperimentConfig, GeneratorKind};
use relapprox_cli::csvout;
use relapprox_cli::generate::generate_points;
use relapprox_cli::runner;
use relapprox_core::numeric::{format_rational, parse_rational, Rat};
use relapprox_core::{
    canonical_ranges_with, compare, well_behaved_profile, Dim, EnumerationOptions, FamilyKind,
};

#[derive(Parser)]
#[command(
    name = "relapprox",
    about = "Small relative (p, eps)-approximations: seeded runs, growth profiles, baseline comparisons",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every seed of a JSON experiment config and write its report.
    Run(RunArgs),
    /// Tabulate shallow-range counts against the family growth bound.
    Profile(ProfileArgs),
    /// Race the construction against the classical uniform sample.
    Compare(CompareArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Replace the config's seed list (repeatable).
    #[arg(long = "seed")]
    seeds: Vec<u64>,
    /// Override the output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Allow n beyond the family's enumeration cap.
    #[arg(long)]
    force_large_n: bool,
}

#[derive(Args)]
struct ProfileArgs {
    /// Range family.
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    /// Ground set size.
    #[arg(long)]
    n: u32,
    /// Comma-separated strictly increasing depths, e.g. 1,2,4,8.
    #[arg(long, value_parser = parse_depths)]
    ks: Depths,
    /// Point-set generator (defaults to the uniform box for the family).
    #[arg(long, value_parser = parse_generator)]
    generator: Option<GeneratorKind>,
    /// Generation seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for profile.csv; print-only when absent.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Allow n beyond the family's enumeration cap.
    #[arg(long)]
    force_large_n: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Range family.
    #[arg(long, value_parser = parse_family)]
    family: FamilyKind,
    /// Ground set size.
    #[arg(long)]
    n: u32,
    /// Measure cutoff, e.g. 1/16 or 0.0625.
    #[arg(long, value_parser = parse_rat)]
    p: Rat,
    /// Tolerance, e.g. 1/4 or 0.25.
    #[arg(long, value_parser = parse_rat)]
    eps: Rat,
    /// Point-set generator (defaults to the uniform box for the family).
    #[arg(long, value_parser = parse_generator)]
    generator: Option<GeneratorKind>,
    /// Generation seed for the shared point set.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of construction seeds, used as 0..count.
    #[arg(long, default_value_t = 10)]
    seed_count: u64,
    /// Explicit construction seeds, overriding --seed-count (repeatable).
    #[arg(long = "run-seed")]
    run_seeds: Vec<u64>,
    /// Directory for comparison.csv; print-only when absent.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Allow n beyond the family's enumeration cap.
    #[arg(long)]
    force_large_n: bool,
}

#[derive(Clone)]
struct Depths(Vec<u32>);

fn parse_family(s: &str) -> Result<FamilyKind, String> {
    FamilyKind::parse(s).ok_or_else(|| {
        format!(
            "unknown family {s:?}; expected one of halfplanes2d, halfspaces3d, rects2d, boxes3d"
        )
    })
}

fn parse_generator(s: &str) -> Result<GeneratorKind, String> {
    GeneratorKind::parse(s).ok_or_else(|| {
        format!(
            "unknown generator {s:?}; expected one of uniform_square, uniform_cube, grid, convex_circle, clustered"
        )
    })
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_depths(s: &str) -> Result<Depths, String> {
    let ks = s
        .split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|e| format!("depth {t:?}: {e}")))
        .collect::<Result<Vec<u32>, String>>()?;
    if ks.is_empty() {
        return Err(String::from("at least one depth is required"));
    }
    Ok(Depths(ks))
}

fn default_generator(family: FamilyKind) -> GeneratorKind {
    match family.dim() {
        Dim::Two => GeneratorKind::UniformSquare,
        Dim::Three => GeneratorKind::UniformCube,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Profile(args) => cmd_profile(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match result {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, String> {
    let mut config = ExperimentConfig::load(&args.config).map_err(|e| e.to_string())?;
    if !args.seeds.is_empty() {
        config.seeds = args.seeds;
    }
    if let Some(dir) = args.out_dir {
        config.out_dir = Some(dir);
    }
    if args.force_large_n {
        config.force_large_n = true;
    }
    let artifacts = runner::run(&config).map_err(|e| e.to_string())?;
    let report = &artifacts.report;
    let summary = &report.body.summary;

    println!(
        "ran {} seeds: {} failed stages, {} must-pass failures, {} cap hits",
        summary.seeds_run,
        summary.seeds_failed,
        summary.must_pass_failures,
        summary.resample_cap_hits
    );
    for (mode, count) in &summary.mode_counts {
        println!("  mode {mode}: {count}");
    }
    println!(
        "  support median {} max {}, baseline median {}, resamples median {} max {}",
        summary.median_support,
        summary.max_support,
        summary.median_baseline_size,
        summary.median_resamples,
        summary.max_resamples
    );
    println!(
        "  worst errors vs ground: multiplicative {}, additive {}",
        format_rational(&summary.max_multiplicative_error),
        format_rational(&summary.max_additive_error)
    );
    println!("reproducibility sha256: {}", report.reproducibility_sha256);
    for path in &artifacts.written {
        println!("wrote {}", path.display());
    }
    Ok(if report.must_pass_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_profile(args: ProfileArgs) -> Result<ExitCode, String> {
    let family = args.family;
    let generator = args.generator.unwrap_or_else(|| default_generator(family));
    let points = generate_points(generator, family.dim(), args.n, args.seed)
        .map_err(|e| e.to_string())?;
    let catalog = canonical_ranges_with(
        &points,
        family,
        EnumerationOptions {
            force_large: args.force_large_n,
        },
    )
    .map_err(|e| e.to_string())?;
    let rows = well_behaved_profile(&catalog, &args.ks.0).map_err(|e| e.to_string())?;

    println!("family {} n {} ranges {}", family.name(), args.n, catalog.len());
    for row in &rows {
        println!(
            "  k {:>6}  count {:>12}  bound {:>16}  exceeds {}",
            row.k, row.count, row.bound, row.exceeds
        );
    }
    if let Some(dir) = args.out_dir {
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let path = dir.join("profile.csv");
        std::fs::write(&path, csvout::profile_csv(family, args.n, &rows))
            .map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(args: CompareArgs) -> Result<ExitCode, String> {
    let family = args.family;
    let generator = args.generator.unwrap_or_else(|| default_generator(family));
    let points = generate_points(generator, family.dim(), args.n, args.seed)
        .map_err(|e| e.to_string())?;
    let seeds = if args.run_seeds.is_empty() {
        (0..args.seed_count).collect()
    } else {
        args.run_seeds
    };
    let table = compare(&points, family, &args.p, &args.eps, &seeds).map_err(|e| e.to_string())?;

    let all_pass = table.rows.iter().all(|r| r.baseline_pass && r.construct_pass);
    println!(
        "{} seeds: construction support median {}, baseline size median {}",
        table.rows.len(),
        table.median_construct_support,
        table.median_baseline_size
    );
    for row in &table.rows {
        println!(
            "  seed {:>3} mode {:<18} support {:>6} (pass {}) baseline {:>6} (pass {}) resamples {}",
            row.seed,
            row.mode.name(),
            row.construct_support,
            row.construct_pass,
            row.baseline_size,
            row.baseline_pass,
            row.resamples
        );
    }
    if let Some(dir) = args.out_dir {
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        let path = dir.join("comparison.csv");
        std::fs::write(&path, csvout::comparison_table_csv(&table))
            .map_err(|e| e.to_string())?;
        println!("wrote {}", path.display());
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}
