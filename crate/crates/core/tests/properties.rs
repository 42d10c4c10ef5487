//! Randomized invariant checks: parameter routing, layer boundaries, catalog
//! structure, and certification monotonicity.

use proptest::prelude::*;
use relapprox_core::numeric::{ceil_log2, ceil_rat, rat, Rat};
use relapprox_core::layers::layer_index;
use relapprox_core::{
    canonical_ranges, check_relative, resolve_plan, shallow_ranges, ApproxParams, Dim, FamilyKind,
    Point, PointSet, PlanMode,
};

fn unit_rational() -> impl Strategy<Value = Rat> {
    (2i128..=64).prop_flat_map(|den| (1..den).prop_map(move |num| Rat::new(num, den)))
}

fn family() -> impl Strategy<Value = FamilyKind> {
    prop::sample::select(FamilyKind::all().to_vec())
}

fn planar_points(max_n: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec((-16i64..=16, -16i64..=16), 1..=max_n).prop_map(|coords| {
        let pts = coords.into_iter().map(|(x, y)| Point::xy(x, y)).collect();
        PointSet::new(Dim::Two, pts).unwrap()
    })
}

fn spatial_points(max_n: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec((-8i64..=8, -8i64..=8, -8i64..=8), 1..=max_n).prop_map(|coords| {
        let pts = coords
            .into_iter()
            .map(|(x, y, z)| Point::xyz(x, y, z))
            .collect();
        PointSet::new(Dim::Three, pts).unwrap()
    })
}

fn standard_size(n: u32, p: &Rat, eps: &Rat) -> u64 {
    let scale = rat(4, 1);
    let lam = ceil_log2(&(Rat::from_integer(1) / p)).unwrap() as i128;
    let raw = ceil_rat(&(scale * Rat::from_integer(lam) / (eps * eps * p))).max(1) as u64;
    raw.min(n as u64)
}

proptest! {
    #[test]
    fn routing_modes_match_their_predicates(
        p in unit_rational(),
        eps in unit_rational(),
        n in 1u32..=500,
        family in family(),
    ) {
        let params = ApproxParams::new(p.clone(), eps.clone());
        let plan = resolve_plan(n, family, &params).unwrap();
        let eighth = rat(1, 8);

        prop_assert!(plan.sample_size >= 1);
        prop_assert!(plan.sample_size <= n as u64);
        prop_assert_eq!(&plan.p_int, &p);
        prop_assert_eq!(&plan.eps_int, &(&eps / Rat::from_integer(6)));
        prop_assert!(!plan.provenance.is_empty());

        match plan.mode {
            PlanMode::AbsoluteFallback => {
                prop_assert!(p > eighth);
                let raw = ceil_rat(&(rat(4, 1) / (&eps * &eps))).max(1) as u64;
                prop_assert_eq!(plan.sample_size, raw.min(n as u64));
            }
            PlanMode::StandardFallback => {
                prop_assert!(p <= eighth);
                prop_assert!(p > plan.eps_int);
                prop_assert_eq!(plan.sample_size, standard_size(n, &p, &eps));
            }
            PlanMode::DegenerateWholeSet => {
                prop_assert!(p <= eighth);
                prop_assert!(p <= eps);
                prop_assert_eq!(plan.sample_size, n as u64);
            }
            PlanMode::Full => {
                prop_assert!(p <= eighth);
                prop_assert!(plan.p_int <= plan.eps_int);
                prop_assert!(plan.sample_size < n as u64);
            }
        }
        // Absolute routing never depends on the tolerance.
        prop_assert_eq!(plan.mode == PlanMode::AbsoluteFallback, p > eighth);

        if plan.mode == PlanMode::Full {
            prop_assert_eq!(plan.deltas.len(), plan.layer_count as usize + 1);
            prop_assert_eq!(plan.heavy_thresholds.len(), plan.deltas.len());
            prop_assert_eq!(&plan.deltas[1], &(&plan.deltas[0] * Rat::from_integer(2)));
            for w in plan.deltas[1..].windows(2) {
                prop_assert_eq!(&w[1], &(&w[0] * Rat::from_integer(2)));
            }
            for w in plan.heavy_thresholds.windows(2) {
                prop_assert!(w[0] < w[1]);
            }
            prop_assert!(plan.keep_prob > Rat::from_integer(0));
            prop_assert!(plan.keep_prob <= Rat::from_integer(1));
            if plan.pi_clamped {
                prop_assert_eq!(&plan.keep_prob, &Rat::from_integer(1));
            }
        } else {
            prop_assert_eq!(plan.layer_count, 0);
            prop_assert!(plan.deltas.is_empty());
            prop_assert_eq!(&plan.keep_prob, &Rat::from_integer(1));
        }
    }

    #[test]
    fn layer_boundaries_partition_the_measure_axis(
        num in 0i128..=720,
    ) {
        let mut params = ApproxParams::new(rat(1, 16), rat(3, 4));
        params.constants.initial_scale = rat(1, 1);
        params.constants.eps_scale = 1;
        let plan = resolve_plan(200, FamilyKind::Halfplanes2d, &params).unwrap();
        prop_assert_eq!(plan.mode, PlanMode::Full);

        let m = Rat::new(num, 720);
        let layer = layer_index(&m, &plan);
        prop_assert!(layer <= plan.layer_count);
        if layer == 0 {
            prop_assert!(m < plan.p_int);
        } else {
            let lower = &plan.p_int * Rat::from_integer(1i128 << (layer - 1));
            prop_assert!(m >= lower);
            if layer < plan.layer_count {
                prop_assert!(m < &lower * Rat::from_integer(2));
            }
        }
        // Monotone in the measure.
        let coarser = layer_index(&(&m / Rat::from_integer(2)), &plan);
        prop_assert!(coarser <= layer);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planar_catalogs_are_sorted_complete_lattices(points in planar_points(8)) {
        for fam in [FamilyKind::Halfplanes2d, FamilyKind::Rects2d] {
            let catalog = canonical_ranges(&points, fam).unwrap();
            let n = catalog.ground_n();
            let ranges = catalog.ranges();
            prop_assert!(ranges[0].members.is_empty());
            prop_assert_eq!(ranges[ranges.len() - 1].members.len(), n);
            for w in ranges.windows(2) {
                prop_assert!(w[0].members.catalog_cmp(&w[1].members).is_lt());
            }
            if fam == FamilyKind::Halfplanes2d {
                // Halfplane subsets close under complement.
                for r in ranges {
                    let co = r.members.complement();
                    prop_assert!(
                        ranges.iter().any(|s| s.members.catalog_cmp(&co).is_eq()),
                        "missing complement of {:?}",
                        r.members.to_vec()
                    );
                }
            }
            let total_size: u64 = ranges.iter().map(|r| r.size() as u64).sum();
            let total_incidence: u64 =
                relapprox_core::incidence_counts(ranges.iter(), n).iter().sum();
            prop_assert_eq!(total_size, total_incidence);
            for k in 1..=n {
                prop_assert_eq!(
                    catalog.count_up_to(k),
                    shallow_ranges(&catalog, k).unwrap().len()
                );
            }
        }
    }

    #[test]
    fn spatial_catalogs_are_sorted_complete_lattices(points in spatial_points(7)) {
        for fam in [FamilyKind::Halfspaces3d, FamilyKind::Boxes3d] {
            let catalog = canonical_ranges(&points, fam).unwrap();
            let ranges = catalog.ranges();
            prop_assert!(ranges[0].members.is_empty());
            prop_assert_eq!(ranges[ranges.len() - 1].members.len(), catalog.ground_n());
            for w in ranges.windows(2) {
                prop_assert!(w[0].members.catalog_cmp(&w[1].members).is_lt());
            }
            if fam == FamilyKind::Halfspaces3d {
                for r in ranges {
                    let co = r.members.complement();
                    prop_assert!(ranges.iter().any(|s| s.members.catalog_cmp(&co).is_eq()));
                }
            }
        }
    }

    #[test]
    fn certification_is_monotone_in_the_tolerance(
        points in planar_points(8),
        p in unit_rational(),
        eps in unit_rational(),
        noise in prop::collection::vec(-4i128..=4, 300),
    ) {
        let catalog = canonical_ranges(&points, FamilyKind::Halfplanes2d).unwrap();
        let n = catalog.ground_n();
        let perturbed = |r: &relapprox_core::CanonicalRange| {
            let ground = Rat::new(r.size() as i128, n as i128);
            let jitter = noise[(r.size() as usize * 31 + r.members.to_vec().first().copied().unwrap_or(0) as usize) % noise.len()];
            ground + Rat::new(jitter, 64)
        };

        let tight = check_relative(&catalog, perturbed, &p, &eps);
        let loose_eps = &eps + rat(1, 64);
        let loose = check_relative(&catalog, perturbed, &p, &loose_eps);
        if tight.pass {
            prop_assert!(loose.pass);
        }
        prop_assert_eq!(tight.checked_ranges, catalog.ranges().len() as u64);
        prop_assert_eq!(&tight.max_multiplicative_error, &loose.max_multiplicative_error);
        prop_assert_eq!(&tight.max_additive_error, &loose.max_additive_error);
        // Pass is exactly the two worst-case errors meeting their bounds.
        let bounds_met = tight.max_multiplicative_error <= eps
            && tight.max_additive_error <= &eps * &p;
        prop_assert_eq!(tight.pass, bounds_met);

        let exact = check_relative(
            &catalog,
            |r| Rat::new(r.size() as i128, n as i128),
            &p,
            &eps,
        );
        prop_assert!(exact.pass);
        prop_assert_eq!(&exact.max_multiplicative_error, &rat(0, 1));
        prop_assert_eq!(&exact.max_additive_error, &rat(0, 1));
    }
}
