//! Exact brute-force certification over full range catalogs, plus the
//! classical uniform-sampling baseline for size comparisons.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::construct::{construct_with_catalog, ConstructError};
use crate::geometry::PointSet;
use crate::numeric::{ceil_log2, ceil_rat, in_open_unit_interval, median_u64, Rat};
use crate::plan::{ApproxParams, PlanMode};
use crate::ranges::{
    CanonicalRange, EnumerationOptions, FamilyKind, MemberSet, RangeCatalog,
    canonical_ranges_with,
};
use crate::rng::{sample_indices, stage_rng, StageRng};

/// Which branch of the two-branch guarantee a range falls under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GuaranteeBranch {
    /// Ground measure at or above the cutoff: bounded relative error.
    Multiplicative,
    /// Ground measure below the cutoff: bounded absolute error.
    Additive,
}

/// One failed inequality, stated as `lhs <= rhs` with its excess.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Violation {
    /// Catalog index of the offending range.
    pub range_id: u32,
    /// Branch whose inequality failed.
    pub branch: GuaranteeBranch,
    /// Left side of the failed inequality.
    #[serde(with = "crate::numeric::rat_string")]
    pub lhs: Rat,
    /// Right side of the failed inequality.
    #[serde(with = "crate::numeric::rat_string")]
    pub rhs: Rat,
    /// Excess `lhs - rhs`, always positive.
    #[serde(with = "crate::numeric::rat_string")]
    pub slack: Rat,
}

/// Outcome of certifying a measure function against a full catalog.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ViolationReport {
    /// Ranges examined.
    pub checked_ranges: u64,
    /// Every failed inequality, in catalog order.
    pub violations: Vec<Violation>,
    /// Worst relative error over ranges at or above the cutoff.
    #[serde(with = "crate::numeric::rat_string")]
    pub max_multiplicative_error: Rat,
    /// Worst absolute error over ranges below the cutoff.
    #[serde(with = "crate::numeric::rat_string")]
    pub max_additive_error: Rat,
    /// True exactly when no inequality failed.
    pub pass: bool,
}

/// Certifies a measure function against every catalog range with exact
/// arithmetic.
///
/// Ranges whose ground measure is at least `p` must match it within a
/// `1 ± eps` factor; all others must match it within `eps * p`. The measure
/// function is arbitrary, so the same checker certifies a subset against the
/// ground set, a weighted output against its base sample, or the composition
/// of the two.
pub fn check_relative<F>(
    catalog: &RangeCatalog,
    measure_of: F,
    p: &Rat,
    eps: &Rat,
) -> ViolationReport
where
    F: Fn(&CanonicalRange) -> Rat,
{
    let n = catalog.ground_n();
    assert!(n >= 1, "catalog must cover a nonempty ground set");
    let mut violations = Vec::new();
    let mut max_multiplicative_error = Rat::zero();
    let mut max_additive_error = Rat::zero();
    for (id, range) in catalog.ranges().iter().enumerate() {
        let ground = Rat::new(range.size() as i128, n as i128);
        let approx = measure_of(range);
        let deviation = (&approx - &ground).abs();
        let (branch, rhs) = if ground >= *p {
            let relative = &deviation / &ground;
            if relative > max_multiplicative_error {
                max_multiplicative_error = relative;
            }
            (GuaranteeBranch::Multiplicative, eps * &ground)
        } else {
            if deviation > max_additive_error {
                max_additive_error = deviation.clone();
            }
            (GuaranteeBranch::Additive, eps * p)
        };
        if deviation > rhs {
            let slack = &deviation - &rhs;
            violations.push(Violation {
                range_id: id as u32,
                branch,
                lhs: deviation,
                rhs,
                slack,
            });
        }
    }
    ViolationReport {
        checked_ranges: catalog.ranges().len() as u64,
        pass: violations.is_empty(),
        violations,
        max_multiplicative_error,
        max_additive_error,
    }
}

/// Outcome of checking that a support stabs every range at or above the
/// cutoff.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct PnetReport {
    /// Ranges examined.
    pub checked_ranges: u64,
    /// True exactly when no qualifying range missed the support.
    pub pass: bool,
    /// Catalog index of the first qualifying range missing the support.
    pub witness: Option<u32>,
}

/// Checks that every range of ground measure at least `p` contains a support
/// element.
pub fn check_pnet(catalog: &RangeCatalog, support: &MemberSet, p: &Rat) -> PnetReport {
    let n = catalog.ground_n();
    assert!(n >= 1, "catalog must cover a nonempty ground set");
    assert_eq!(
        support.universe(),
        n,
        "support must live on the catalog's ground set"
    );
    let mut witness = None;
    for (id, range) in catalog.ranges().iter().enumerate() {
        let ground = Rat::new(range.size() as i128, n as i128);
        if ground >= *p && range.members.intersection_count(support) == 0 {
            witness = Some(id as u32);
            break;
        }
    }
    PnetReport {
        checked_ranges: catalog.ranges().len() as u64,
        pass: witness.is_none(),
        witness,
    }
}

/// Size of the classical uniform sample: `scale * ceil(log2(1/p)) / (eps^2 p)`
/// rounded up, never exceeding `n`.
pub fn baseline_sample_size(n: u32, p: &Rat, eps: &Rat, scale: &Rat) -> u64 {
    assert!(in_open_unit_interval(p), "p must lie in (0, 1)");
    assert!(in_open_unit_interval(eps), "eps must lie in (0, 1)");
    assert!(scale > &Rat::zero(), "scale must be positive");
    let log_term = ceil_log2(&(Rat::from_integer(1) / p)).expect("1/p exceeds 1");
    let raw = scale * Rat::from_integer(log_term as i128) / (eps * eps * p);
    (ceil_rat(&raw).max(1) as u64).min(n as u64)
}

/// Draws the classical uniform sample without replacement; returns the whole
/// ground set when the size formula reaches `n`. Indices are sorted.
pub fn baseline_sample(
    points: &PointSet,
    p: &Rat,
    eps: &Rat,
    scale: &Rat,
    rng: &mut StageRng,
) -> Vec<u32> {
    let n = points.len();
    let size = baseline_sample_size(n as u32, p, eps, scale) as usize;
    if size >= n {
        (0..n as u32).collect()
    } else {
        sample_indices(rng, n, size)
    }
}

/// One seed's worth of baseline-versus-construction comparison.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct CompareRow {
    /// Master seed of the runs.
    pub seed: u64,
    /// Pipeline variant the construction routed to.
    pub mode: PlanMode,
    /// Baseline sample size.
    pub baseline_size: u64,
    /// Whether the baseline certified against the ground catalog.
    pub baseline_pass: bool,
    /// Construction support size.
    pub construct_support: u64,
    /// Whether the construction certified against the ground catalog.
    pub construct_pass: bool,
    /// Resampling steps the construction took.
    pub resamples: u64,
}

/// Per-seed rows plus aggregate medians.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ComparisonTable {
    /// One row per seed, in input order.
    pub rows: Vec<CompareRow>,
    /// Lower median of the baseline sizes.
    pub median_baseline_size: u64,
    /// Lower median of the construction support sizes.
    pub median_construct_support: u64,
}

/// Runs the construction and the classical baseline side by side over the
/// given seeds, certifying both against the full ground catalog with exact
/// arithmetic.
pub fn compare(
    points: &PointSet,
    family: FamilyKind,
    p: &Rat,
    eps: &Rat,
    seeds: &[u64],
) -> Result<ComparisonTable, ConstructError> {
    if seeds.is_empty() {
        return Err(ConstructError::BadParams(String::from("no seeds")));
    }
    let params = ApproxParams::new(p.clone(), eps.clone());
    let catalog = canonical_ranges_with(points, family, EnumerationOptions { force_large: true })?;
    let n = points.len() as u32;
    let mut rows = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let (sample, report) = construct_with_catalog(points, &catalog, &params, seed)?;
        let chosen_ground = sample.to_ground(&sample.chosen_light);
        let heavy_ground = sample.to_ground(&sample.heavy);
        let pi = sample.keep_prob.clone();
        let denominator = sample.denominator();
        let construct_report = check_relative(
            &catalog,
            |range| {
                let chosen = range.members.intersection_count(&chosen_ground) as i128;
                let heavy = range.members.intersection_count(&heavy_ground) as i128;
                (Rat::from_integer(chosen) + &pi * Rat::from_integer(heavy)) / &denominator
            },
            p,
            eps,
        );

        let mut rng = stage_rng(seed, "baseline");
        let baseline = baseline_sample(points, p, eps, &params.constants.base_scale, &mut rng);
        let baseline_set = MemberSet::from_indices(n, baseline.iter().copied());
        let baseline_report = check_relative(
            &catalog,
            |range| {
                Rat::new(
                    range.members.intersection_count(&baseline_set) as i128,
                    baseline.len() as i128,
                )
            },
            p,
            eps,
        );

        rows.push(CompareRow {
            seed,
            mode: report.plan.mode,
            baseline_size: baseline.len() as u64,
            baseline_pass: baseline_report.pass,
            construct_support: sample.support_size() as u64,
            construct_pass: construct_report.pass,
            resamples: report
                .resample_stats
                .map(|s| s.resample_count)
                .unwrap_or(0),
        });
    }
    let mut baseline_sizes: Vec<u64> = rows.iter().map(|r| r.baseline_size).collect();
    baseline_sizes.sort_unstable();
    let mut support_sizes: Vec<u64> = rows.iter().map(|r| r.construct_support).collect();
    support_sizes.sort_unstable();
    Ok(ComparisonTable {
        median_baseline_size: median_u64(&baseline_sizes).expect("rows are nonempty"),
        median_construct_support: median_u64(&support_sizes).expect("rows are nonempty"),
        rows,
    })
}
