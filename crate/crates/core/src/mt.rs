//! Resampling loop: redraw the coins of the first violated event until no
//! event is violated.
//!
//! Counts are maintained incrementally through per-coin range incidence
//! lists, so each resampling step costs time proportional to the coins it
//! redraws and the ranges they touch. The public recompute-from-scratch
//! check in [`crate::events::violated_events`] defines the semantics; the
//! loop exit condition coincides with it by construction.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::construct::ConstructError;
use crate::events::{event_tables, violated_events};
use crate::layers::{HeavyLightPartition, LayerStructure};
use crate::numeric::{floor_rat, Rat};
use crate::plan::{PlanMode, ResolvedPlan};
use crate::ranges::RangeCatalog;
use crate::rng::{bernoulli_exact, StageRng};
use crate::sample::{draw_coins, CoinVector};

/// Tallies of the resampling loop.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ResampleStats {
    /// Total resampling steps taken.
    pub resample_count: u64,
    /// Steps that redrew all coins for the size event.
    pub size_event_resamples: u64,
    /// Steps per range event, as (layer, range id, count), sorted.
    pub range_event_resamples: Vec<(u32, u32, u64)>,
}

/// Event keys ordered: size event first, then ranges by (layer, id).
type EventKey = (u8, u32, u32);

const SIZE_EVENT: EventKey = (0, 0, 0);

/// Draws coins and resamples violated events in deterministic order until
/// none remains, within the plan's resampling cap.
pub fn moser_tardos(
    catalog_f: &RangeCatalog,
    layers: &LayerStructure,
    partition: &HeavyLightPartition,
    plan: &ResolvedPlan,
    rng: &mut StageRng,
) -> Result<(CoinVector, ResampleStats), ConstructError> {
    assert_eq!(plan.mode, PlanMode::Full, "resampling needs a full-mode plan");
    let tables = event_tables(catalog_f, layers, partition, plan);
    let light_total = partition.light_order.len();
    let mut coins = draw_coins(light_total as u32, &plan.keep_prob, rng)?;

    let mut ranges_of_coin: Vec<Vec<u32>> = alloc::vec![Vec::new(); light_total];
    for (id, members) in tables.light_members.iter().enumerate() {
        for &c in members {
            ranges_of_coin[c as usize].push(id as u32);
        }
    }

    let mut counts: Vec<i128> = tables
        .light_members
        .iter()
        .map(|members| {
            members
                .iter()
                .filter(|&&c| coins.chosen[c as usize])
                .count() as i128
        })
        .collect();
    let mut total: i128 = coins.count_chosen() as i128;
    // The size bound is a fixed rational; totals are integers, so compare
    // against its floor once.
    let size_cap = floor_rat(&tables.size_bound);

    let key_of = |id: u32| (1u8, layers.layer_of[id as usize], id);
    let range_ok =
        |id: u32, counts: &[i128]| -> bool {
            let c = counts[id as usize];
            c >= tables.lo[id as usize] && c <= tables.hi[id as usize]
        };

    let mut violated: alloc::collections::BTreeSet<EventKey> = Default::default();
    if total > size_cap {
        violated.insert(SIZE_EVENT);
    }
    for id in 0..catalog_f.len() as u32 {
        if !range_ok(id, &counts) {
            violated.insert(key_of(id));
        }
    }

    let mut resample_count = 0u64;
    let mut size_event_resamples = 0u64;
    let mut range_histogram: BTreeMap<(u32, u32), u64> = BTreeMap::new();
    let all_coins: Vec<u32> = (0..light_total as u32).collect();

    while let Some(&key) = violated.iter().next() {
        if resample_count >= plan.caps.mt_max_resamples {
            let surviving = violated_events(catalog_f, layers, partition, &coins, plan);
            return Err(ConstructError::ResampleCapExceeded {
                resamples: resample_count,
                surviving,
            });
        }
        resample_count += 1;
        let dependency = if key == SIZE_EVENT {
            size_event_resamples += 1;
            &all_coins
        } else {
            let (_, layer, id) = key;
            *range_histogram.entry((layer, id)).or_insert(0) += 1;
            &tables.light_members[id as usize]
        };
        for &c in dependency {
            let new = bernoulli_exact(rng, &plan.keep_prob);
            if new == coins.chosen[c as usize] {
                continue;
            }
            coins.chosen[c as usize] = new;
            let delta = if new { 1 } else { -1 };
            total += delta;
            for &r in &ranges_of_coin[c as usize] {
                counts[r as usize] += delta;
                if range_ok(r, &counts) {
                    violated.remove(&key_of(r));
                } else {
                    violated.insert(key_of(r));
                }
            }
        }
        if total > size_cap {
            violated.insert(SIZE_EVENT);
        } else {
            violated.remove(&SIZE_EVENT);
        }
    }

    debug_assert!(
        violated_events(catalog_f, layers, partition, &coins, plan).is_empty(),
        "incremental tracking must agree with the recomputation"
    );
    debug_assert!(Rat::from_integer(total) <= tables.size_bound);

    let stats = ResampleStats {
        resample_count,
        size_event_resamples,
        range_event_resamples: range_histogram
            .into_iter()
            .map(|((layer, id), count)| (layer, id, count))
            .collect(),
    };
    Ok((coins, stats))
}
