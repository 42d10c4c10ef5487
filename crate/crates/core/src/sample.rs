//! The certified intermediate sample and the light-object coins.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::construct::ConstructError;
use crate::geometry::PointSet;
use crate::numeric::Rat;
use crate::plan::{PlanMode, ResolvedPlan};
use crate::ranges::{MemberSet, RangeCatalog};
use crate::rng::{bernoulli_exact, sample_indices, StageRng};
use crate::verify::check_relative;

/// A uniformly drawn sample whose measures were certified against the whole
/// ground catalog.
#[derive(Debug, Clone)]
pub struct InitialSample {
    /// Ascending ground indices of the sample members.
    pub indices: Vec<u32>,
    /// The sample as points, ordered like `indices`.
    pub points: PointSet,
    /// Redraws before certification succeeded.
    pub retries: u32,
}

/// Draws and certifies the intermediate sample: uniform without replacement,
/// accepted once it approximates every catalog range at the plan's internal
/// cutoff and tolerance, redrawn up to the retry cap otherwise.
pub fn initial_sample(
    points: &PointSet,
    catalog_x: &RangeCatalog,
    plan: &ResolvedPlan,
    rng: &mut StageRng,
) -> Result<InitialSample, ConstructError> {
    assert_eq!(plan.mode, PlanMode::Full, "sampling needs a full-mode plan");
    assert_eq!(catalog_x.ground_n() as usize, points.len());
    let n = points.len();
    let f_size = plan.sample_size as usize;
    let mut best: Option<crate::verify::ViolationReport> = None;
    for attempt in 0..plan.caps.initial_retries {
        let indices = sample_indices(rng, n, f_size);
        let selected = MemberSet::from_indices(n as u32, indices.iter().copied());
        let report = check_relative(
            catalog_x,
            |r| {
                Rat::new(
                    selected.intersection_count(&r.members) as i128,
                    f_size as i128,
                )
            },
            &plan.p_int,
            &plan.eps_int,
        );
        if report.pass {
            let sample_points = points
                .subset(&indices)
                .expect("sample indices come from the ground set");
            return Ok(InitialSample {
                indices,
                points: sample_points,
                retries: attempt,
            });
        }
        if best
            .as_ref()
            .map(|b| report.violations.len() < b.violations.len())
            .unwrap_or(true)
        {
            best = Some(report);
        }
    }
    Err(ConstructError::RetriesExhausted {
        attempts: plan.caps.initial_retries,
        best: best.expect("at least one attempt ran"),
    })
}

/// One inclusion coin per light object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinVector {
    /// Chosen flags, indexed by light position.
    pub chosen: Vec<bool>,
}

impl CoinVector {
    /// Number of coins.
    pub fn len(&self) -> usize {
        self.chosen.len()
    }

    /// Whether there are no coins.
    pub fn is_empty(&self) -> bool {
        self.chosen.is_empty()
    }

    /// Number of chosen objects.
    pub fn count_chosen(&self) -> u64 {
        self.chosen.iter().filter(|&&c| c).count() as u64
    }

    /// Positions of the chosen objects, ascending.
    pub fn chosen_positions(&self) -> Vec<u32> {
        self.chosen
            .iter()
            .enumerate()
            .filter_map(|(i, &c)| c.then_some(i as u32))
            .collect()
    }
}

/// Draws independent coins, each chosen with probability exactly
/// `keep_prob`.
pub fn draw_coins(
    light_total: u32,
    keep_prob: &Rat,
    rng: &mut StageRng,
) -> Result<CoinVector, ConstructError> {
    if *keep_prob <= Rat::zero() || *keep_prob > Rat::one() {
        return Err(ConstructError::BadParams(alloc::string::String::from(
            "inclusion probability must lie in (0, 1]",
        )));
    }
    let chosen = (0..light_total)
        .map(|_| bernoulli_exact(rng, keep_prob))
        .collect();
    Ok(CoinVector { chosen })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use crate::rng::stage_rng;

    #[test]
    fn certain_coins_all_chosen() {
        let mut rng = stage_rng(7, "coins");
        let coins = draw_coins(100, &Rat::one(), &mut rng).unwrap();
        assert_eq!(coins.count_chosen(), 100);
    }

    #[test]
    fn coins_deterministic_under_seed() {
        let a = draw_coins(500, &rat(1, 3), &mut stage_rng(11, "coins")).unwrap();
        let b = draw_coins(500, &rat(1, 3), &mut stage_rng(11, "coins")).unwrap();
        assert_eq!(a, b);
        let c = draw_coins(500, &rat(1, 3), &mut stage_rng(12, "coins")).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn coin_counts_concentrate() {
        // 10^4 coins at 1/3: mean 3333.3, sigma ~ 47.1, allow 5 sigma
        let coins = draw_coins(10_000, &rat(1, 3), &mut stage_rng(42, "coins")).unwrap();
        let count = coins.count_chosen() as f64;
        let mean = 10_000.0 / 3.0;
        let sigma = (10_000.0_f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        assert!((count - mean).abs() < 5.0 * sigma, "count {count} too far from {mean}");
    }

    #[test]
    fn rejects_bad_probability() {
        let mut rng = stage_rng(1, "coins");
        assert!(draw_coins(10, &rat(0, 1), &mut rng).is_err());
        assert!(draw_coins(10, &rat(3, 2), &mut rng).is_err());
    }
}
