//! Oracle equivalence on small instances: for every subset of the ground set,
//! decide realizability by an independent method (exact Fourier-Motzkin
//! feasibility for linear separation, bounding-box closure for axis-aligned
//! families) and demand the catalog contains exactly the realizable subsets.

use num_bigint::BigInt;
use rand::Rng;
use relapprox_core::{canonical_ranges, incidence_counts, Dim, FamilyKind, Point, PointSet};
use relapprox_core::rng::stage_rng;
use std::collections::{BTreeMap, BTreeSet};

/// One homogeneous constraint `sum(coeffs * vars) >= 0` (or `> 0` when strict).
#[derive(Clone)]
struct Constraint {
    coeffs: Vec<BigInt>,
    strict: bool,
}

fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    use num_traits::Zero;
    let mut a = a.clone();
    if a.sign() == num_bigint::Sign::Minus {
        a = -a;
    }
    let mut b = b.clone();
    if b.sign() == num_bigint::Sign::Minus {
        b = -b;
    }
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn normalize(mut c: Constraint) -> Constraint {
    use num_traits::Zero;
    let mut g = BigInt::zero();
    for coef in &c.coeffs {
        g = gcd(&g, coef);
    }
    if !g.is_zero() {
        for coef in &mut c.coeffs {
            *coef = &*coef / &g;
        }
    }
    c
}

/// Exact feasibility of a homogeneous system of weak and strict inequalities
/// by Fourier-Motzkin elimination over the integers.
fn fm_feasible(mut constraints: Vec<Constraint>, vars: usize) -> bool {
    use num_traits::Zero;
    for var in 0..vars {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for c in constraints {
            match c.coeffs[var].sign() {
                num_bigint::Sign::Plus => pos.push(c),
                num_bigint::Sign::Minus => neg.push(c),
                num_bigint::Sign::NoSign => rest.push(c),
            }
        }
        let mut seen: BTreeMap<Vec<BigInt>, bool> = BTreeMap::new();
        for c in rest {
            let c = normalize(c);
            *seen.entry(c.coeffs).or_insert(false) |= c.strict;
        }
        for p in &pos {
            for n in &neg {
                let alpha = &p.coeffs[var];
                let beta = -&n.coeffs[var];
                let coeffs: Vec<BigInt> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(pc, nc)| pc * &beta + nc * alpha)
                    .collect();
                let c = normalize(Constraint {
                    coeffs,
                    strict: p.strict || n.strict,
                });
                *seen.entry(c.coeffs).or_insert(false) |= c.strict;
            }
        }
        constraints = Vec::with_capacity(seen.len());
        for (coeffs, strict) in seen {
            if coeffs.iter().all(|c| c.is_zero()) {
                if strict {
                    return false;
                }
                continue;
            }
            constraints.push(Constraint { coeffs, strict });
        }
    }
    // All variables eliminated; every surviving constraint had a nonzero
    // coefficient removed, so only consistent residue remains.
    true
}

/// Is there a hyperplane with `subset` on its closed positive side and the
/// rest strictly on the negative side?
fn linearly_separable(points: &PointSet, subset: &[bool]) -> bool {
    let dim = match points.dim() {
        Dim::Two => 2,
        Dim::Three => 3,
    };
    let vars = dim + 1;
    let mut constraints = Vec::with_capacity(points.len());
    for (i, inside) in subset.iter().enumerate() {
        let pt = points.point(i as u32);
        let mut coeffs: Vec<BigInt> = (0..dim).map(|a| BigInt::from(pt.coords[a])).collect();
        coeffs.push(BigInt::from(-1));
        if !inside {
            for c in &mut coeffs {
                *c = -&*c;
            }
        }
        constraints.push(Constraint {
            coeffs,
            strict: !inside,
        });
    }
    fm_feasible(constraints, vars)
}

/// Is `subset` exactly the set of points inside its own bounding box?
fn box_realizable(points: &PointSet, subset: &[bool], dim: usize) -> bool {
    let members: Vec<u32> = subset
        .iter()
        .enumerate()
        .filter_map(|(i, &inside)| inside.then_some(i as u32))
        .collect();
    if members.is_empty() {
        return true;
    }
    let mut lo = [i64::MAX; 3];
    let mut hi = [i64::MIN; 3];
    for &m in &members {
        let pt = points.point(m);
        for a in 0..dim {
            lo[a] = lo[a].min(pt.coords[a]);
            hi[a] = hi[a].max(pt.coords[a]);
        }
    }
    for (i, &inside) in subset.iter().enumerate() {
        let pt = points.point(i as u32);
        let in_box = (0..dim).all(|a| lo[a] <= pt.coords[a] && pt.coords[a] <= hi[a]);
        if in_box != inside {
            return false;
        }
    }
    true
}

fn realizable_subsets(
    points: &PointSet,
    test: impl Fn(&PointSet, &[bool]) -> bool,
) -> BTreeSet<Vec<u32>> {
    let n = points.len();
    let mut out = BTreeSet::new();
    for mask in 0..(1u32 << n) {
        let subset: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        if test(points, &subset) {
            out.insert(
                subset
                    .iter()
                    .enumerate()
                    .filter_map(|(i, &b)| b.then_some(i as u32))
                    .collect(),
            );
        }
    }
    out
}

fn catalog_subsets(points: &PointSet, family: FamilyKind) -> BTreeSet<Vec<u32>> {
    let catalog = canonical_ranges(points, family).unwrap();

    // Incidence conservation: per-object counts sum to the total of range sizes.
    let counts = incidence_counts(catalog.ranges(), catalog.ground_n());
    let count_total: u64 = counts.iter().map(|&c| c).sum();
    let size_total: u64 = catalog.ranges().iter().map(|r| r.size() as u64).sum();
    assert_eq!(count_total, size_total, "incidence conservation");

    catalog
        .ranges()
        .iter()
        .map(|r| r.members.to_vec())
        .collect()
}

fn assert_catalog_matches(points: &PointSet, family: FamilyKind) {
    let by_catalog = catalog_subsets(points, family);
    let by_oracle = match family {
        FamilyKind::Halfplanes2d | FamilyKind::Halfspaces3d => {
            realizable_subsets(points, linearly_separable)
        }
        FamilyKind::Rects2d => realizable_subsets(points, |p, s| box_realizable(p, s, 2)),
        FamilyKind::Boxes3d => realizable_subsets(points, |p, s| box_realizable(p, s, 3)),
    };
    let missing: Vec<_> = by_oracle.difference(&by_catalog).take(5).collect();
    let extra: Vec<_> = by_catalog.difference(&by_oracle).take(5).collect();
    assert!(
        missing.is_empty() && extra.is_empty(),
        "{family:?} n={}: catalog {} vs oracle {}; missing from catalog: {missing:?}; \
         not realizable: {extra:?}",
        points.len(),
        by_catalog.len(),
        by_oracle.len(),
    );
}

fn random_points(dim: Dim, n: usize, max: i64, seed: u64) -> PointSet {
    let mut rng = stage_rng(seed, "oracle-points");
    let pts = (0..n)
        .map(|_| {
            let x = rng.gen_range(0..=max);
            let y = rng.gen_range(0..=max);
            match dim {
                Dim::Two => Point::xy(x, y),
                Dim::Three => Point::xyz(x, y, rng.gen_range(0..=max)),
            }
        })
        .collect();
    PointSet::new(dim, pts).unwrap()
}

#[test]
fn halfplanes_match_separability_oracle_on_random_sets() {
    for n in 1..=9usize {
        for seed in 0..3u64 {
            let points = random_points(Dim::Two, n, 12, seed * 31 + n as u64);
            assert_catalog_matches(&points, FamilyKind::Halfplanes2d);
        }
    }
}

#[test]
fn halfplanes_match_oracle_on_structured_sets() {
    let cases: Vec<Vec<[i64; 2]>> = vec![
        vec![[0, 0], [1, 1], [2, 2], [3, 3], [4, 4]],
        vec![[0, 0], [0, 0], [1, 0], [1, 0], [2, 1]],
        vec![[0, 0], [1, 0], [2, 0], [0, 1], [1, 1], [2, 1], [0, 2], [1, 2], [2, 2]],
        vec![[5, 0], [4, 3], [3, 4], [0, 5], [-3, 4], [-4, 3], [-5, 0]],
        vec![[0, 0]],
        vec![[2, 3], [2, 3]],
    ];
    for coords in cases {
        let pts = coords.iter().map(|&[x, y]| Point::xy(x, y)).collect();
        let points = PointSet::new(Dim::Two, pts).unwrap();
        assert_catalog_matches(&points, FamilyKind::Halfplanes2d);
    }
}

#[test]
fn halfspaces_match_separability_oracle_on_random_sets() {
    for n in 1..=8usize {
        for seed in 0..2u64 {
            let points = random_points(Dim::Three, n, 8, seed * 17 + n as u64);
            assert_catalog_matches(&points, FamilyKind::Halfspaces3d);
        }
    }
}

#[test]
fn halfspaces_match_oracle_on_structured_sets() {
    let cases: Vec<Vec<[i64; 3]>> = vec![
        // Collinear in space.
        vec![[0, 0, 0], [1, 2, 3], [2, 4, 6], [3, 6, 9]],
        // Coplanar grid.
        vec![[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1], [2, 2, 1]],
        // Cube corners.
        vec![
            [0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0],
            [0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1],
        ],
        // Duplicates and a lone apex.
        vec![[0, 0, 0], [0, 0, 0], [1, 1, 1]],
    ];
    for coords in cases {
        let pts = coords.iter().map(|&[x, y, z]| Point::xyz(x, y, z)).collect();
        let points = PointSet::new(Dim::Three, pts).unwrap();
        assert_catalog_matches(&points, FamilyKind::Halfspaces3d);
    }
}

#[test]
fn rects_match_bounding_box_oracle() {
    for n in 1..=12usize {
        for seed in 0..3u64 {
            let points = random_points(Dim::Two, n, 9, seed * 13 + n as u64);
            assert_catalog_matches(&points, FamilyKind::Rects2d);
        }
    }
    let collinear = PointSet::new(
        Dim::Two,
        vec![Point::xy(0, 0), Point::xy(1, 0), Point::xy(2, 0), Point::xy(3, 0)],
    )
    .unwrap();
    assert_catalog_matches(&collinear, FamilyKind::Rects2d);
}

#[test]
fn boxes_match_bounding_box_oracle() {
    for n in 1..=12usize {
        for seed in 0..2u64 {
            let points = random_points(Dim::Three, n, 6, seed * 7 + n as u64);
            assert_catalog_matches(&points, FamilyKind::Boxes3d);
        }
    }
    let lattice = PointSet::new(
        Dim::Three,
        (0..8)
            .map(|i| Point::xyz(i % 2, (i / 2) % 2, i / 4))
            .collect(),
    )
    .unwrap();
    assert_catalog_matches(&lattice, FamilyKind::Boxes3d);
}
