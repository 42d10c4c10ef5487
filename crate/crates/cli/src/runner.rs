//! End-to-end seeded runs: generate, construct, certify exactly, compare
//! against the classical baseline, and assemble a reproducible report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use num_traits::Zero;
use sha2::{Digest, Sha256};

use relapprox_core::numeric::{median_u64, Rat};
use relapprox_core::rng::stage_rng;
use relapprox_core::{
    baseline_sample, canonical_ranges_with, check_pnet, check_relative, construct_with_catalog,
    weighted_measure, ApproxParams, CanonicalRange, ConstructError, ConstructionReport,
    EnumerationOptions, MemberSet, PlanMode, PnetReport, PointSet, RangeCatalog, ViolationReport,
    WeightedSample,
};

use crate::config::{ConfigError, ExperimentConfig};
use crate::csvout;
use crate::generate::generate_points;

/// Report schema emitted by this build.
pub const SCHEMA_VERSION: u32 = 1;

/// Volatile run metadata, excluded from the reproducibility hash.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ReportMeta {
    /// Milliseconds since the Unix epoch at report assembly.
    pub created_unix_ms: u64,
    /// Total wall-clock milliseconds for the run.
    pub wall_clock_ms: u64,
    /// Wall-clock milliseconds per seed, in seed order.
    pub seed_wall_clock_ms: Vec<u64>,
}

/// One completed seed: the construction and every check on it.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct SeedRecord {
    /// Master seed of this run.
    pub seed: u64,
    /// Construction tallies and the resolved plan.
    pub construction: ConstructionReport,
    /// Output measures against the intermediate sample, at the plan's
    /// internal tolerance.
    pub vs_base: ViolationReport,
    /// Output measures against the ground set, at the user tolerance.
    pub vs_ground: ViolationReport,
    /// Support coverage of all ground ranges with measure at least `p`.
    pub pnet: PnetReport,
    /// Classical uniform-sample size at the same parameters.
    pub baseline_size: u64,
    /// Whether the classical sample certified against the ground catalog.
    pub baseline_pass: bool,
    /// Whether every check above that must hold did hold.
    pub must_pass: bool,
}

/// A seed whose pipeline stopped before producing a record.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct StageFailure {
    /// Master seed of this run.
    pub seed: u64,
    /// Stage that failed: `generate`, `enumerate`, or `construct`.
    pub stage: String,
    /// The stage's error, rendered.
    pub error: String,
    /// Whether the resampling loop hit its cap.
    pub resample_cap_hit: bool,
}

/// Per-seed outcome; failures keep the run going.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SeedOutcome {
    /// The full pipeline ran and was checked.
    Completed(Box<SeedRecord>),
    /// A stage errored; later seeds still ran.
    Failed(StageFailure),
}

impl SeedOutcome {
    /// The seed this outcome belongs to.
    pub fn seed(&self) -> u64 {
        match self {
            SeedOutcome::Completed(r) => r.seed,
            SeedOutcome::Failed(f) => f.seed,
        }
    }

    /// The completed record, if any.
    pub fn record(&self) -> Option<&SeedRecord> {
        match self {
            SeedOutcome::Completed(r) => Some(r),
            SeedOutcome::Failed(_) => None,
        }
    }
}

/// Aggregates over all seeds of a run.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Summary {
    /// Seeds attempted.
    pub seeds_run: u64,
    /// Seeds that stopped in a stage error.
    pub seeds_failed: u64,
    /// Seeds whose required checks did not all hold (stage errors included).
    pub must_pass_failures: u64,
    /// Seeds that hit the resampling cap.
    pub resample_cap_hits: u64,
    /// Seeds per plan mode name.
    pub mode_counts: BTreeMap<String, u64>,
    /// Lower median of output support sizes.
    pub median_support: u64,
    /// Largest output support size.
    pub max_support: u64,
    /// Lower median of classical baseline sizes.
    pub median_baseline_size: u64,
    /// Lower median of resampling step counts.
    pub median_resamples: u64,
    /// Largest resampling step count.
    pub max_resamples: u64,
    /// Worst relative error against the ground set over all seeds.
    #[serde(with = "relapprox_core::numeric::rat_string")]
    pub max_multiplicative_error: Rat,
    /// Worst absolute error below the cutoff over all seeds.
    #[serde(with = "relapprox_core::numeric::rat_string")]
    pub max_additive_error: Rat,
}

/// Everything a run computed; the reproducibility hash covers exactly this.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ReportBody {
    /// Report schema version.
    pub schema_version: u32,
    /// The configuration that produced the run, with the output directory
    /// normalized away (where results land does not affect them).
    pub config: ExperimentConfig,
    /// One outcome per seed, in input order.
    pub seeds: Vec<SeedOutcome>,
    /// Aggregates over the outcomes.
    pub summary: Summary,
}

/// The full machine-readable report.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RunReport {
    /// Volatile metadata, excluded from the hash.
    pub meta: ReportMeta,
    /// Deterministic results.
    pub body: ReportBody,
    /// Hex SHA-256 of the serialized body.
    pub reproducibility_sha256: String,
}

impl RunReport {
    /// True when every required check on every seed held.
    pub fn must_pass_ok(&self) -> bool {
        self.body.summary.must_pass_failures == 0
    }
}

/// A report plus where its files were written.
#[derive(Debug)]
pub struct RunArtifacts {
    /// The assembled report.
    pub report: RunReport,
    /// Paths written, empty when the config named no output directory.
    pub written: Vec<PathBuf>,
}

/// Errors that abort a run before any seed starts.
#[derive(Debug)]
pub enum RunError {
    /// The configuration is invalid.
    Config(ConfigError),
    /// Report or CSV files could not be written.
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "write: {e}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Io(e)
    }
}

/// Runs every seed of the config, writes artifacts if an output directory is
/// set, and returns the report. Stage failures are recorded per seed; only
/// an invalid config or an unwritable output directory error out.
pub fn run(config: &ExperimentConfig) -> Result<RunArtifacts, RunError> {
    config.validate()?;
    let started = Instant::now();
    let options = EnumerationOptions {
        force_large: config.force_large_n,
    };
    let params = ApproxParams {
        p: config.p.clone(),
        eps: config.eps.clone(),
        constants: config.constants.clone(),
        caps: config.caps,
    };

    let mut outcomes = Vec::with_capacity(config.seeds.len());
    let mut seed_times = Vec::with_capacity(config.seeds.len());
    // Seed-independent generators produce one point set; enumerate its
    // catalog once and reuse it while consecutive seeds match.
    let mut cached: Option<(PointSet, RangeCatalog)> = None;
    for &seed in &config.seeds {
        let seed_started = Instant::now();
        outcomes.push(run_seed(config, &params, options, seed, &mut cached));
        seed_times.push(seed_started.elapsed().as_millis() as u64);
    }

    let summary = summarize(&outcomes);
    let body = ReportBody {
        schema_version: SCHEMA_VERSION,
        config: ExperimentConfig {
            out_dir: None,
            ..config.clone()
        },
        seeds: outcomes,
        summary,
    };
    let reproducibility_sha256 = body_hash(&body);
    let report = RunReport {
        meta: ReportMeta {
            created_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
            wall_clock_ms: started.elapsed().as_millis() as u64,
            seed_wall_clock_ms: seed_times,
        },
        body,
        reproducibility_sha256,
    };

    let mut written = Vec::new();
    if let Some(dir) = &config.out_dir {
        written = write_artifacts(&report, dir)?;
    }
    Ok(RunArtifacts { report, written })
}

fn run_seed(
    config: &ExperimentConfig,
    params: &ApproxParams,
    options: EnumerationOptions,
    seed: u64,
    cached: &mut Option<(PointSet, RangeCatalog)>,
) -> SeedOutcome {
    let fail = |stage: &str, error: String, cap_hit: bool| {
        SeedOutcome::Failed(StageFailure {
            seed,
            stage: stage.to_string(),
            error,
            resample_cap_hit: cap_hit,
        })
    };

    let points = match generate_points(config.generator, config.family.dim(), config.n, seed) {
        Ok(p) => p,
        Err(e) => return fail("generate", e.to_string(), false),
    };

    let reuse = matches!(cached, Some((cached_points, _)) if *cached_points == points);
    if !reuse {
        match canonical_ranges_with(&points, config.family, options) {
            Ok(catalog) => *cached = Some((points.clone(), catalog)),
            Err(e) => {
                *cached = None;
                return fail("enumerate", e.to_string(), false);
            }
        }
    }
    let (_, catalog_x) = cached.as_ref().expect("catalog was just ensured");

    let (sample, construction) = match construct_with_catalog(&points, catalog_x, params, seed) {
        Ok(pair) => pair,
        Err(e) => {
            let cap_hit = matches!(e, ConstructError::ResampleCapExceeded { .. });
            return fail("construct", e.to_string(), cap_hit);
        }
    };

    let vs_base = check_against_base(&sample, &construction, config, catalog_x, options);
    let vs_ground = check_against_ground(&sample, catalog_x, &params.p, &params.eps);
    let pnet = check_pnet(catalog_x, &sample.ground_support(), &params.p);

    let mut rng = stage_rng(seed, "baseline");
    let baseline = baseline_sample(
        &points,
        &params.p,
        &params.eps,
        &params.constants.base_scale,
        &mut rng,
    );
    let baseline_set = MemberSet::from_indices(points.len() as u32, baseline.iter().copied());
    let baseline_report = check_relative(
        catalog_x,
        |range| {
            Rat::new(
                range.members.intersection_count(&baseline_set) as i128,
                baseline.len() as i128,
            )
        },
        &params.p,
        &params.eps,
    );

    let must_pass = vs_base.pass && vs_ground.pass && pnet.pass;
    SeedOutcome::Completed(Box::new(SeedRecord {
        seed,
        construction,
        vs_base,
        vs_ground,
        pnet,
        baseline_size: baseline.len() as u64,
        baseline_pass: baseline_report.pass,
        must_pass,
    }))
}

/// Certifies the weighted output against the intermediate sample's own
/// ranges at the internal tolerance. With no violated events this holds by
/// construction, so it must pass on every completed seed.
fn check_against_base(
    sample: &WeightedSample,
    construction: &ConstructionReport,
    config: &ExperimentConfig,
    catalog_x: &RangeCatalog,
    options: EnumerationOptions,
) -> ViolationReport {
    let eps_int = &construction.plan.eps_int;
    let p_int = &construction.plan.p_int;
    if construction.plan.mode == PlanMode::DegenerateWholeSet {
        // The sample is the ground set; its catalog is already enumerated.
        return check_relative(
            catalog_x,
            |r| weighted_measure(sample, &r.members),
            p_int,
            eps_int,
        );
    }
    let catalog_f = canonical_ranges_with(&sample.base, config.family, options)
        .expect("sample catalog within the ground catalog's limits");
    check_relative(
        &catalog_f,
        |r| weighted_measure(sample, &r.members),
        p_int,
        eps_int,
    )
}

/// Certifies the weighted output against the whole ground set at the user
/// tolerance, evaluating measures through ground-index sets.
fn check_against_ground(
    sample: &WeightedSample,
    catalog_x: &RangeCatalog,
    p: &Rat,
    eps: &Rat,
) -> ViolationReport {
    let chosen_ground = sample.to_ground(&sample.chosen_light);
    let heavy_ground = sample.to_ground(&sample.heavy);
    let pi = sample.keep_prob.clone();
    let denominator = sample.denominator();
    check_relative(
        catalog_x,
        |range: &CanonicalRange| {
            let chosen = range.members.intersection_count(&chosen_ground) as i128;
            let heavy = range.members.intersection_count(&heavy_ground) as i128;
            (Rat::from_integer(chosen) + &pi * Rat::from_integer(heavy)) / &denominator
        },
        p,
        eps,
    )
}

fn summarize(outcomes: &[SeedOutcome]) -> Summary {
    let mut mode_counts = BTreeMap::new();
    let mut supports = Vec::new();
    let mut baselines = Vec::new();
    let mut resamples = Vec::new();
    let mut seeds_failed = 0;
    let mut must_pass_failures = 0;
    let mut resample_cap_hits = 0;
    let mut max_multiplicative_error = Rat::zero();
    let mut max_additive_error = Rat::zero();

    for outcome in outcomes {
        match outcome {
            SeedOutcome::Completed(r) => {
                *mode_counts
                    .entry(r.construction.plan.mode.name().to_string())
                    .or_insert(0u64) += 1;
                supports.push(r.construction.support_size as u64);
                baselines.push(r.baseline_size);
                resamples.push(
                    r.construction
                        .resample_stats
                        .as_ref()
                        .map(|s| s.resample_count)
                        .unwrap_or(0),
                );
                if !r.must_pass {
                    must_pass_failures += 1;
                }
                if r.vs_ground.max_multiplicative_error > max_multiplicative_error {
                    max_multiplicative_error = r.vs_ground.max_multiplicative_error.clone();
                }
                if r.vs_ground.max_additive_error > max_additive_error {
                    max_additive_error = r.vs_ground.max_additive_error.clone();
                }
            }
            SeedOutcome::Failed(f) => {
                seeds_failed += 1;
                must_pass_failures += 1;
                if f.resample_cap_hit {
                    resample_cap_hits += 1;
                }
            }
        }
    }
    supports.sort_unstable();
    baselines.sort_unstable();
    resamples.sort_unstable();
    Summary {
        seeds_run: outcomes.len() as u64,
        seeds_failed,
        must_pass_failures,
        resample_cap_hits,
        mode_counts,
        median_support: median_u64(&supports).unwrap_or(0),
        max_support: supports.last().copied().unwrap_or(0),
        median_baseline_size: median_u64(&baselines).unwrap_or(0),
        median_resamples: median_u64(&resamples).unwrap_or(0),
        max_resamples: resamples.last().copied().unwrap_or(0),
        max_multiplicative_error,
        max_additive_error,
    }
}

fn body_hash(body: &ReportBody) -> String {
    let bytes = serde_json::to_vec(body).expect("report body serializes");
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in digest {
        use std::fmt::Write;
        write!(hex, "{b:02x}").expect("writing to a string cannot fail");
    }
    hex
}

/// Writes `report.json`, `violations.csv`, and `comparison.csv` into `dir`,
/// creating it if needed; returns the paths written.
pub fn write_artifacts(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>, RunError> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let report_path = dir.join("report.json");
    let mut json = serde_json::to_string_pretty(report).expect("report serializes");
    json.push('\n');
    std::fs::write(&report_path, json)?;
    written.push(report_path);

    let violations_path = dir.join("violations.csv");
    std::fs::write(&violations_path, csvout::violations_csv(&report.body.seeds))?;
    written.push(violations_path);

    let comparison_path = dir.join("comparison.csv");
    std::fs::write(&comparison_path, csvout::comparison_csv(&report.body.seeds))?;
    written.push(comparison_path);

    Ok(written)
}
