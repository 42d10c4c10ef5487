//! Bad-event detection over the light-object coins.
//!
//! Each range deviation event compares the chosen count inside a range
//! against an exact integer interval derived from its layer; the size event
//! compares the whole chosen count against its expectation with slack. All
//! bounds reduce to integers once, so event checks are integer comparisons.

use alloc::vec::Vec;

use num_traits::One;

use crate::layers::{HeavyLightPartition, LayerStructure};
use crate::numeric::{ceil_rat, floor_rat, Rat};
use crate::plan::{PlanMode, ResolvedPlan};
use crate::ranges::RangeCatalog;
use crate::sample::CoinVector;

/// Which side of the allowed interval a count left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Count below the lower bound.
    Below,
    /// Count above the upper bound.
    Above,
}

/// Which flavor of guarantee produced a range's bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationKind {
    /// Bounds proportional to the range's light count.
    Multiplicative,
    /// Bounds widened by an absolute layer-scaled term.
    Additive,
}

/// One violated event.
#[derive(Debug, Clone, PartialEq)]
pub struct BadEvent {
    /// What went wrong.
    pub kind: BadEventKind,
    /// Coin indices the event reads (all coins for the size event).
    pub dependency: Vec<u32>,
}

/// The two event shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum BadEventKind {
    /// The light sample exceeded `(1 + slack) · keep_prob · |L|`.
    SampleTooLarge {
        /// Chosen count.
        size: u64,
        /// Exact allowed bound.
        bound: Rat,
    },
    /// A range's chosen count left its allowed interval.
    RangeDeviation {
        /// Range id in the sample catalog.
        range_id: u32,
        /// The range's layer.
        layer: u32,
        /// Bound flavor.
        deviation: DeviationKind,
        /// Violated side.
        side: Side,
        /// Chosen count inside the range.
        chosen: u64,
        /// Inclusive lower bound.
        lower: i128,
        /// Inclusive upper bound.
        upper: i128,
    },
}

/// Precomputed per-range integer bounds and dependency lists.
pub(crate) struct EventTables {
    /// Per range: ascending coin indices of its light members.
    pub light_members: Vec<Vec<u32>>,
    /// Inclusive lower chosen-count bound per range.
    pub lo: Vec<i128>,
    /// Inclusive upper chosen-count bound per range.
    pub hi: Vec<i128>,
    /// Bound flavor per range.
    pub deviation: Vec<DeviationKind>,
    /// Range ids sorted by (layer, id): the deterministic event order.
    pub order: Vec<u32>,
    /// Exact size-event bound `(1 + slack) · keep_prob · |L|`.
    pub size_bound: Rat,
}

pub(crate) fn event_tables(
    catalog_f: &RangeCatalog,
    layers: &LayerStructure,
    partition: &HeavyLightPartition,
    plan: &ResolvedPlan,
) -> EventTables {
    assert_eq!(plan.mode, PlanMode::Full, "events exist only in the full pipeline");
    let f = catalog_f.ground_n();
    let light_total = partition.light_order.len() as i128;
    let mut coin_of = alloc::vec![u32::MAX; f as usize];
    for (pos, &obj) in partition.light_order.iter().enumerate() {
        coin_of[obj as usize] = pos as u32;
    }

    let pi = &plan.keep_prob;
    let one = Rat::one();
    let mut light_members = Vec::with_capacity(catalog_f.len());
    let mut lo = Vec::with_capacity(catalog_f.len());
    let mut hi = Vec::with_capacity(catalog_f.len());
    let mut deviation = Vec::with_capacity(catalog_f.len());
    for (id, r) in catalog_f.ranges().iter().enumerate() {
        let members: Vec<u32> = r
            .members
            .iter()
            .filter_map(|m| {
                let c = coin_of[m as usize];
                (c != u32::MAX).then_some(c)
            })
            .collect();
        let light_count = Rat::from_integer(members.len() as i128);
        let layer = layers.layer_of[id];
        let expected = pi * &light_count;
        let (low, high, kind) = if layer >= 1 {
            let scaled_cutoff = Rat::from_integer(1i128 << (layer - 1)) * &plan.p_int;
            if light_count >= &scaled_cutoff * Rat::from_integer(f as i128) {
                (
                    &expected * (&one - &plan.eps_int),
                    &expected * (&one + &plan.eps_int),
                    DeviationKind::Multiplicative,
                )
            } else {
                let width =
                    pi * &plan.eps_int * &scaled_cutoff * Rat::from_integer(light_total);
                (&expected - &width, &expected + &width, DeviationKind::Additive)
            }
        } else {
            let width = pi * &plan.eps_int * &plan.p_int * Rat::from_integer(light_total);
            (&expected - &width, &expected + &width, DeviationKind::Additive)
        };
        light_members.push(members);
        lo.push(ceil_rat(&low));
        hi.push(floor_rat(&high));
        deviation.push(kind);
    }

    let mut order: Vec<u32> = (0..catalog_f.len() as u32).collect();
    order.sort_unstable_by_key(|&id| (layers.layer_of[id as usize], id));

    let size_bound = (&one + &plan.size_slack) * pi * Rat::from_integer(light_total);
    EventTables {
        light_members,
        lo,
        hi,
        deviation,
        order,
        size_bound,
    }
}

/// Recomputes every event from scratch and returns the violated ones in the
/// deterministic order: the size event first, then ranges by (layer, id).
pub fn violated_events(
    catalog_f: &RangeCatalog,
    layers: &LayerStructure,
    partition: &HeavyLightPartition,
    coins: &CoinVector,
    plan: &ResolvedPlan,
) -> Vec<BadEvent> {
    assert_eq!(
        coins.chosen.len(),
        partition.light_order.len(),
        "one coin per light object"
    );
    let tables = event_tables(catalog_f, layers, partition, plan);
    let mut out = Vec::new();
    let total = coins.count_chosen();
    if Rat::from_integer(total as i128) > tables.size_bound {
        out.push(BadEvent {
            kind: BadEventKind::SampleTooLarge {
                size: total,
                bound: tables.size_bound.clone(),
            },
            dependency: (0..coins.chosen.len() as u32).collect(),
        });
    }
    for &id in &tables.order {
        let members = &tables.light_members[id as usize];
        let chosen = members
            .iter()
            .filter(|&&c| coins.chosen[c as usize])
            .count() as i128;
        let side = if chosen < tables.lo[id as usize] {
            Side::Below
        } else if chosen > tables.hi[id as usize] {
            Side::Above
        } else {
            continue;
        };
        out.push(BadEvent {
            kind: BadEventKind::RangeDeviation {
                range_id: id,
                layer: layers.layer_of[id as usize],
                deviation: tables.deviation[id as usize],
                side,
                chosen: chosen as u64,
                lower: tables.lo[id as usize],
                upper: tables.hi[id as usize],
            },
            dependency: members.clone(),
        });
    }
    out
}
