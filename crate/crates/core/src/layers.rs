//! Layer assignment by sample measure and the heavy/light object split.

use alloc::vec::Vec;

use crate::numeric::{count_reaches, Rat};
use crate::plan::{PlanMode, ResolvedPlan};
use crate::ranges::{MemberSet, RangeCatalog};

/// Layer index for every range of a catalog over the intermediate sample.
#[derive(Debug, Clone)]
pub struct LayerStructure {
    /// Layer per range id, each in `0..=layer_count`.
    pub layer_of: Vec<u32>,
    /// Ranges per layer.
    pub histogram: Vec<u64>,
}

/// Assigns every catalog range to its measure layer.
pub fn assign_layers(catalog_f: &RangeCatalog, plan: &ResolvedPlan) -> LayerStructure {
    assert_eq!(plan.mode, PlanMode::Full, "layers exist only in the full pipeline");
    let f = catalog_f.ground_n();
    let mut layer_of = Vec::with_capacity(catalog_f.len());
    let mut histogram = alloc::vec![0u64; plan.layer_count as usize + 1];
    for r in catalog_f.ranges() {
        let measure = Rat::new(r.size() as i128, f as i128);
        let layer = layer_index(&measure, plan);
        layer_of.push(layer);
        histogram[layer as usize] += 1;
    }
    LayerStructure {
        layer_of,
        histogram,
    }
}

/// Layer of one measure value: 0 below the cutoff, otherwise the unique
/// i ≥ 1 with `2^(i-1)·p ≤ measure < 2^i·p`; the top layer is closed at 1.
pub fn layer_index(measure: &Rat, plan: &ResolvedPlan) -> u32 {
    if *measure < plan.p_int {
        return 0;
    }
    let mut upper = &plan.p_int * Rat::from_integer(2);
    let mut layer = 1;
    while layer < plan.layer_count && *measure >= upper {
        upper = &upper * Rat::from_integer(2);
        layer += 1;
    }
    layer
}

/// The heavy/light split of the intermediate sample's objects.
#[derive(Debug, Clone)]
pub struct HeavyLightPartition {
    /// Objects whose incidence count reaches a layer threshold.
    pub heavy: MemberSet,
    /// The remaining objects.
    pub light: MemberSet,
    /// Ascending sample indices of the light objects; position in this list
    /// is the coin index of the object.
    pub light_order: Vec<u32>,
    /// Incidence counts per layer and object, `counts[layer][object]`.
    pub counts: Vec<Vec<u64>>,
    /// Set when fewer than half of the objects are light, outside the
    /// regime the size analysis assumes.
    pub light_minority_warning: bool,
}

/// Splits the sample objects into heavy and light by per-layer incidence.
pub fn classify_objects(
    catalog_f: &RangeCatalog,
    layers: &LayerStructure,
    plan: &ResolvedPlan,
) -> HeavyLightPartition {
    assert_eq!(plan.mode, PlanMode::Full, "classification needs a full-mode plan");
    let f = catalog_f.ground_n();
    let layer_total = plan.layer_count as usize + 1;
    let mut counts = alloc::vec![alloc::vec![0u64; f as usize]; layer_total];
    for (id, r) in catalog_f.ranges().iter().enumerate() {
        let layer = layers.layer_of[id] as usize;
        let row = &mut counts[layer];
        for m in r.members.iter() {
            row[m as usize] += 1;
        }
    }
    let mut heavy = MemberSet::new(f);
    for obj in 0..f {
        let is_heavy = (0..layer_total)
            .any(|i| count_reaches(counts[i][obj as usize], &plan.heavy_thresholds[i]));
        if is_heavy {
            heavy.insert(obj);
        }
    }
    let light = heavy.complement();
    let light_order = light.to_vec();
    let light_minority_warning = 2 * (light.len() as u64) < f as u64;
    HeavyLightPartition {
        heavy,
        light,
        light_order,
        counts,
        light_minority_warning,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;
    use crate::plan::PlanMode;
    use alloc::vec::Vec;

    fn full_plan(p: Rat, layer_count: u32, thresholds: Vec<Rat>) -> ResolvedPlan {
        ResolvedPlan {
            mode: PlanMode::Full,
            n: 1000,
            family: crate::ranges::FamilyKind::Halfplanes2d,
            p: p.clone(),
            eps: rat(1, 2),
            p_int: p,
            eps_int: rat(1, 2),
            sample_size: 100,
            layer_count,
            deltas: Vec::new(),
            heavy_thresholds: thresholds,
            keep_prob: rat(1, 2),
            pi_clamped: false,
            size_slack: rat(1, 1),
            caps: Default::default(),
            provenance: Vec::new(),
        }
    }

    #[test]
    fn layer_boundaries_match_hand_examples() {
        let plan = full_plan(rat(1, 16), 4, Vec::new());
        assert_eq!(layer_index(&rat(1, 8), &plan), 2);
        assert_eq!(layer_index(&rat(1, 16), &plan), 1);
        assert_eq!(layer_index(&rat(1, 32), &plan), 0);
        assert_eq!(layer_index(&rat(127, 1024), &plan), 1);
        assert_eq!(layer_index(&rat(1, 4), &plan), 3);
        assert_eq!(layer_index(&rat(1, 2), &plan), 4);
        assert_eq!(layer_index(&rat(1, 1), &plan), 4);
    }

    #[test]
    fn classification_splits_by_layer_counts() {
        use crate::geometry::{Dim, Point, PointSet};
        use crate::ranges::{canonical_ranges, FamilyKind};

        // three collinear points: ranges are the prefixes and suffixes
        let points = PointSet::new(
            Dim::Two,
            alloc::vec![
                Point::xy(0, 0),
                Point::xy(1_000_000, 0),
                Point::xy(2_000_000, 0),
            ],
        )
        .unwrap();
        let catalog = canonical_ranges(&points, FamilyKind::Halfplanes2d).unwrap();
        assert_eq!(catalog.len(), 6);

        let mut plan = full_plan(
            rat(1, 4),
            2,
            alloc::vec![rat(99, 1), rat(1, 1), rat(99, 1)],
        );
        plan.sample_size = 3;
        let layers = assign_layers(&catalog, &plan);
        // sizes 0,1,1,2,2,3 -> layers 0,1,1,2,2,2
        assert_eq!(layers.histogram, alloc::vec![1, 2, 3]);

        let partition = classify_objects(&catalog, &layers, &plan);
        // layer-1 ranges are the singletons {0} and {2}
        assert_eq!(partition.heavy.to_vec(), alloc::vec![0, 2]);
        assert_eq!(partition.light_order, alloc::vec![1]);
        assert!(partition.light_minority_warning);
        assert_eq!(partition.counts[1][0], 1);
        assert_eq!(partition.counts[1][1], 0);
        assert_eq!(partition.counts[1][2], 1);
    }

    #[test]
    fn all_light_when_thresholds_high() {
        use crate::geometry::{Dim, Point, PointSet};
        use crate::ranges::{canonical_ranges, FamilyKind};

        let points = PointSet::new(
            Dim::Two,
            alloc::vec![Point::xy(0, 0), Point::xy(1_000_000, 0), Point::xy(0, 1_000_000)],
        )
        .unwrap();
        let catalog = canonical_ranges(&points, FamilyKind::Halfplanes2d).unwrap();
        let plan = full_plan(
            rat(1, 4),
            2,
            alloc::vec![rat(1000, 1), rat(1000, 1), rat(1000, 1)],
        );
        let layers = assign_layers(&catalog, &plan);
        let partition = classify_objects(&catalog, &layers, &plan);
        assert!(partition.heavy.is_empty());
        assert_eq!(partition.light.len(), 3);
        assert!(!partition.light_minority_warning);
    }
}
