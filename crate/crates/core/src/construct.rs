//! The end-to-end pipeline: plan, certified intermediate sample, layers,
//! heavy/light split, resampled coins, weighted output.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::events::BadEvent;
use crate::geometry::PointSet;
use crate::layers::{assign_layers, classify_objects};
use crate::mt::{moser_tardos, ResampleStats};
use crate::numeric::NumericError;
use crate::plan::{resolve_plan, ApproxParams, PlanMode, ResolvedPlan};
use crate::ranges::{
    canonical_ranges_with, EnumerationOptions, FamilyKind, MemberSet, RangeCatalog,
    RangeSpaceError,
};
use crate::rng::{sample_indices, stage_rng};
use crate::sample::initial_sample;
use crate::verify::ViolationReport;
use crate::weighted::WeightedSample;

/// Failures of the construction pipeline, each naming its stage.
#[derive(Debug, Clone)]
pub enum ConstructError {
    /// Parameters outside their domain.
    BadParams(String),
    /// Arithmetic domain error while resolving the plan.
    Numeric(NumericError),
    /// Range enumeration failed.
    Ranges(RangeSpaceError),
    /// No drawn sample certified within the retry cap; carries the best
    /// attempt's certification report.
    RetriesExhausted {
        /// Attempts made.
        attempts: u32,
        /// Report of the attempt with the fewest violations.
        best: ViolationReport,
    },
    /// The resampling loop hit its cap; carries the surviving events.
    ResampleCapExceeded {
        /// Steps taken.
        resamples: u64,
        /// Events still violated at the cap.
        surviving: Vec<BadEvent>,
    },
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::BadParams(msg) => write!(f, "invalid parameters: {msg}"),
            ConstructError::Numeric(e) => write!(f, "plan arithmetic: {e}"),
            ConstructError::Ranges(e) => write!(f, "range enumeration: {e}"),
            ConstructError::RetriesExhausted { attempts, best } => write!(
                f,
                "initial sampling: no certified sample within {attempts} attempts \
                 (best attempt had {} violations)",
                best.violations.len()
            ),
            ConstructError::ResampleCapExceeded {
                resamples,
                surviving,
            } => write!(
                f,
                "resampling: cap reached after {resamples} steps with {} events violated",
                surviving.len()
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ConstructError {}

impl From<NumericError> for ConstructError {
    fn from(e: NumericError) -> Self {
        ConstructError::Numeric(e)
    }
}

impl From<RangeSpaceError> for ConstructError {
    fn from(e: RangeSpaceError) -> Self {
        ConstructError::Ranges(e)
    }
}

/// Every intermediate size and tally of one construction run.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ConstructionReport {
    /// The resolved plan, provenance included.
    pub plan: ResolvedPlan,
    /// Master seed of the run.
    pub seed: u64,
    /// Size of the intermediate sample.
    pub f_size: u32,
    /// Heavy objects.
    pub heavy_size: u32,
    /// Light objects.
    pub light_size: u32,
    /// Chosen light objects.
    pub f1_size: u32,
    /// Objects with positive weight in the output.
    pub support_size: u32,
    /// Redraws of the intermediate sample.
    pub initial_retries: u32,
    /// Ranges per layer in the sample catalog (empty outside full mode).
    pub layer_histogram: Vec<u64>,
    /// Set when fewer than half of the sample objects were light.
    pub light_minority_warning: bool,
    /// Resampling tallies (full mode only).
    pub resample_stats: Option<ResampleStats>,
    /// Filled by callers that time the run; excluded from reproducibility
    /// hashes.
    pub wall_clock_ms: Option<u64>,
}

/// Runs the whole construction; enumerates the ground catalog itself when
/// the plan needs one.
pub fn construct(
    points: &PointSet,
    family: FamilyKind,
    params: &ApproxParams,
    seed: u64,
) -> Result<(WeightedSample, ConstructionReport), ConstructError> {
    let plan = resolve_plan(points.len() as u32, family, params)?;
    if plan.mode == PlanMode::Full {
        let catalog_x = canonical_ranges_with(
            points,
            family,
            EnumerationOptions { force_large: true },
        )?;
        full_construct(points, &catalog_x, plan, seed)
    } else {
        Ok(fallback_construct(points, plan, seed))
    }
}

/// Runs the whole construction against a pre-built ground catalog.
pub fn construct_with_catalog(
    points: &PointSet,
    catalog_x: &RangeCatalog,
    params: &ApproxParams,
    seed: u64,
) -> Result<(WeightedSample, ConstructionReport), ConstructError> {
    assert_eq!(
        catalog_x.ground_n() as usize,
        points.len(),
        "catalog must cover the ground set"
    );
    let plan = resolve_plan(points.len() as u32, catalog_x.family(), params)?;
    if plan.mode == PlanMode::Full {
        full_construct(points, catalog_x, plan, seed)
    } else {
        Ok(fallback_construct(points, plan, seed))
    }
}

fn fallback_construct(
    points: &PointSet,
    plan: ResolvedPlan,
    seed: u64,
) -> (WeightedSample, ConstructionReport) {
    let n = points.len();
    let indices: Vec<u32> = if plan.mode == PlanMode::DegenerateWholeSet
        || plan.sample_size as usize >= n
    {
        (0..n as u32).collect()
    } else {
        let mut rng = stage_rng(seed, "fallback-sample");
        sample_indices(&mut rng, n, plan.sample_size as usize)
    };
    let base = points
        .subset(&indices)
        .expect("sample indices come from the ground set");
    let f = indices.len() as u32;
    let light = MemberSet::full(f);
    let sample = WeightedSample {
        ground_n: n as u32,
        base_indices: indices,
        base,
        heavy: MemberSet::new(f),
        light: light.clone(),
        chosen_light: light,
        keep_prob: crate::numeric::rat(1, 1),
    };
    let report = ConstructionReport {
        plan,
        seed,
        f_size: f,
        heavy_size: 0,
        light_size: f,
        f1_size: f,
        support_size: f,
        initial_retries: 0,
        layer_histogram: Vec::new(),
        light_minority_warning: false,
        resample_stats: None,
        wall_clock_ms: None,
    };
    (sample, report)
}

fn full_construct(
    points: &PointSet,
    catalog_x: &RangeCatalog,
    plan: ResolvedPlan,
    seed: u64,
) -> Result<(WeightedSample, ConstructionReport), ConstructError> {
    let mut rng_init = stage_rng(seed, "initial-sample");
    let initial = initial_sample(points, catalog_x, &plan, &mut rng_init)?;

    let catalog_f = canonical_ranges_with(
        &initial.points,
        plan.family,
        EnumerationOptions { force_large: true },
    )?;
    let layers = assign_layers(&catalog_f, &plan);
    let partition = classify_objects(&catalog_f, &layers, &plan);
    for r in catalog_f.ranges() {
        let in_light = r.members.intersection_count(&partition.light);
        let in_heavy = r.members.intersection_count(&partition.heavy);
        assert_eq!(
            in_light + in_heavy,
            r.size(),
            "heavy/light must partition every range"
        );
    }

    let mut rng_coins = stage_rng(seed, "light-coins");
    let (coins, stats) = moser_tardos(&catalog_f, &layers, &partition, &plan, &mut rng_coins)?;

    let f = catalog_f.ground_n();
    let mut chosen_light = MemberSet::new(f);
    for (pos, &obj) in partition.light_order.iter().enumerate() {
        if coins.chosen[pos] {
            chosen_light.insert(obj);
        }
    }
    let sample = WeightedSample {
        ground_n: points.len() as u32,
        base_indices: initial.indices,
        base: initial.points,
        heavy: partition.heavy.clone(),
        light: partition.light.clone(),
        chosen_light,
        keep_prob: plan.keep_prob.clone(),
    };
    let report = ConstructionReport {
        seed,
        f_size: f,
        heavy_size: partition.heavy.len(),
        light_size: partition.light.len(),
        f1_size: sample.chosen_light.len(),
        support_size: sample.support_size(),
        initial_retries: initial.retries,
        layer_histogram: layers.histogram.clone(),
        light_minority_warning: partition.light_minority_warning,
        resample_stats: Some(stats),
        wall_clock_ms: None,
        plan,
    };
    Ok((sample, report))
}
