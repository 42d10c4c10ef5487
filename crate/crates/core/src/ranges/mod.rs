//! Canonical range enumeration for four geometric families.
//!
//! A canonical range is a distinct subset of the ground point set realizable
//! by a region of the family (closed halfplane, closed halfspace, closed
//! axis-aligned rectangle or box). Catalogs are deduplicated by member set,
//! always contain the empty and full range, and are sorted by size and then
//! lexicographically by member indices, so output order is deterministic.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::geometry::{Coord, Dim, PointSet};
use crate::numeric::Rat;

mod boxes;
mod halfplanes;
mod halfspaces;

/// The supported range families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Closed halfplanes over points in the plane.
    Halfplanes2d,
    /// Closed halfspaces over points in 3-space.
    Halfspaces3d,
    /// Closed axis-aligned rectangles over points in the plane.
    Rects2d,
    /// Closed axis-aligned boxes over points in 3-space.
    Boxes3d,
}

impl FamilyKind {
    /// Ambient dimension of the family.
    pub fn dim(self) -> Dim {
        match self {
            FamilyKind::Halfplanes2d | FamilyKind::Rects2d => Dim::Two,
            FamilyKind::Halfspaces3d | FamilyKind::Boxes3d => Dim::Three,
        }
    }

    /// Exponent `c` in the shallow-range growth bound `n · φ(n) · k^c`.
    pub fn exponent(self) -> u32 {
        match self {
            FamilyKind::Halfplanes2d => 1,
            FamilyKind::Halfspaces3d | FamilyKind::Rects2d | FamilyKind::Boxes3d => 2,
        }
    }

    /// Slowly-growing factor `φ(m)` in the growth bound, evaluated exactly:
    /// 1 for halfplanes and halfspaces, `max(1, ⌈log2 m⌉)` for rectangles and
    /// its cube for boxes.
    pub fn phi(self, m: u64) -> u64 {
        let lg = ilog2_ceil(m).max(1) as u64;
        match self {
            FamilyKind::Halfplanes2d | FamilyKind::Halfspaces3d => 1,
            FamilyKind::Rects2d => lg,
            FamilyKind::Boxes3d => lg * lg * lg,
        }
    }

    /// Largest ground-set size enumerated without the force option.
    pub fn enumeration_cap(self) -> usize {
        match self {
            FamilyKind::Halfplanes2d | FamilyKind::Rects2d => 400,
            FamilyKind::Halfspaces3d | FamilyKind::Boxes3d => 200,
        }
    }

    /// Stable lowercase name used in configs and CSV output.
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Halfplanes2d => "halfplanes2d",
            FamilyKind::Halfspaces3d => "halfspaces3d",
            FamilyKind::Rects2d => "rects2d",
            FamilyKind::Boxes3d => "boxes3d",
        }
    }

    /// Parses the stable name.
    pub fn parse(name: &str) -> Option<FamilyKind> {
        match name {
            "halfplanes2d" => Some(FamilyKind::Halfplanes2d),
            "halfspaces3d" => Some(FamilyKind::Halfspaces3d),
            "rects2d" => Some(FamilyKind::Rects2d),
            "boxes3d" => Some(FamilyKind::Boxes3d),
            _ => None,
        }
    }

    /// All four families.
    pub fn all() -> [FamilyKind; 4] {
        [
            FamilyKind::Halfplanes2d,
            FamilyKind::Halfspaces3d,
            FamilyKind::Rects2d,
            FamilyKind::Boxes3d,
        ]
    }
}

/// `⌈log2 m⌉` for integers, with `ilog2_ceil(0) = 0`.
pub fn ilog2_ceil(m: u64) -> u32 {
    if m <= 1 {
        0
    } else {
        64 - (m - 1).leading_zeros()
    }
}

/// A set of point indices over a fixed ground size, stored as a bitset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MemberSet {
    universe: u32,
    words: Vec<u64>,
    count: u32,
}

impl MemberSet {
    /// Empty set over `0..universe`.
    pub fn new(universe: u32) -> Self {
        MemberSet {
            universe,
            words: alloc::vec![0u64; universe.div_ceil(64) as usize],
            count: 0,
        }
    }

    /// Set containing the given indices.
    pub fn from_indices(universe: u32, indices: impl IntoIterator<Item = u32>) -> Self {
        let mut s = MemberSet::new(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Full set over `0..universe`.
    pub fn full(universe: u32) -> Self {
        MemberSet::from_indices(universe, 0..universe)
    }

    /// Ground size this set lives over.
    pub fn universe(&self) -> u32 {
        self.universe
    }

    /// Number of members.
    pub fn len(&self) -> u32 {
        self.count
    }

    /// Whether the set is empty.
    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    /// Inserts an index (idempotent).
    pub fn insert(&mut self, i: u32) {
        debug_assert!(i < self.universe);
        let w = (i / 64) as usize;
        let bit = 1u64 << (i % 64);
        if self.words[w] & bit == 0 {
            self.words[w] |= bit;
            self.count += 1;
        }
    }

    /// Membership test.
    pub fn contains(&self, i: u32) -> bool {
        if i >= self.universe {
            return false;
        }
        self.words[(i / 64) as usize] & (1u64 << (i % 64)) != 0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let base = wi as u32 * 64;
            BitIter { word: w, base }
        })
    }

    /// Members collected into a vector.
    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    /// Size of the intersection with another set over the same universe.
    pub fn intersection_count(&self, other: &MemberSet) -> u32 {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Union with another set over the same universe.
    pub fn union(&self, other: &MemberSet) -> MemberSet {
        debug_assert_eq!(self.universe, other.universe);
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a | b)
            .collect();
        let count = words.iter().map(|w| w.count_ones()).sum();
        MemberSet {
            universe: self.universe,
            words,
            count,
        }
    }

    /// Complement within the universe.
    pub fn complement(&self) -> MemberSet {
        let mut words: Vec<u64> = self.words.iter().map(|w| !w).collect();
        if self.universe % 64 != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << (self.universe % 64)) - 1;
            }
        }
        MemberSet {
            universe: self.universe,
            words,
            count: self.universe - self.count,
        }
    }

    /// Total order: by size, then lexicographically by the ascending member
    /// sequence (the set containing the smallest non-shared index first).
    pub fn catalog_cmp(&self, other: &MemberSet) -> Ordering {
        debug_assert_eq!(self.universe, other.universe);
        self.count.cmp(&other.count).then_with(|| {
            for (a, b) in self.words.iter().zip(&other.words) {
                if a != b {
                    let low = (a ^ b).trailing_zeros();
                    return if a & (1u64 << low) != 0 {
                        Ordering::Less
                    } else {
                        Ordering::Greater
                    };
                }
            }
            Ordering::Equal
        })
    }
}

struct BitIter {
    word: u64,
    base: u32,
}

impl Iterator for BitIter {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        if self.word == 0 {
            None
        } else {
            let low = self.word.trailing_zeros();
            self.word &= self.word - 1;
            Some(self.base + low)
        }
    }
}

/// Description of a region realizing a canonical range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeWitness {
    /// Closed halfplane/halfspace `{ x : coeffs · x ≥ offset }` with exact
    /// integer coefficients (third coefficient 0 in the plane).
    Halfspace {
        /// Normal vector.
        coeffs: [i128; 3],
        /// Inclusive threshold.
        offset: i128,
    },
    /// Limit of halfspaces: keeps every point strictly on the positive side
    /// of `plane · x > plane_offset`, and among points exactly on the plane
    /// keeps those with `axis · x ≥ cut`.
    TiltedHalfspace {
        /// Plane normal (positive side kept).
        plane: [i128; 3],
        /// Plane offset.
        plane_offset: i128,
        /// In-plane direction deciding which coplanar points are kept.
        axis: [i128; 3],
        /// Inclusive threshold along `axis`.
        cut: i128,
    },
    /// Closed axis-aligned box `[min, max]` per axis (z ignored in the plane).
    AxisBox {
        /// Lower corner.
        min: [Coord; 3],
        /// Upper corner.
        max: [Coord; 3],
    },
    /// A region of the family avoiding every point.
    EmptyRegion,
    /// A region of the family covering every point.
    FullRegion,
}

/// A deduplicated realizable subset together with a realizing witness.
#[derive(Debug, Clone)]
pub struct CanonicalRange {
    /// The member point indices.
    pub members: MemberSet,
    /// A region realizing exactly `members`.
    pub witness: RangeWitness,
}

impl CanonicalRange {
    /// Number of points in the range.
    pub fn size(&self) -> u32 {
        self.members.len()
    }
}

/// Errors from enumeration and the counting helpers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeSpaceError {
    /// Family dimension does not match the point set dimension.
    DimensionMismatch {
        /// Dimension required by the family.
        family: Dim,
        /// Dimension of the supplied points.
        points: Dim,
    },
    /// Ground set exceeds the per-family enumeration cap.
    TooManyPoints {
        /// Supplied ground size.
        n: usize,
        /// Cap for the family.
        cap: usize,
    },
    /// Depth parameter outside `1..=n`.
    InvalidDepth {
        /// Requested depth.
        k: u32,
        /// Ground size.
        n: u32,
    },
    /// Measure over an empty ground set.
    ZeroGround,
    /// Range size exceeds the ground size.
    RangeExceedsGround,
    /// Profile depth list empty or not strictly increasing.
    BadProfileDepths,
}

impl fmt::Display for RangeSpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RangeSpaceError::DimensionMismatch { family, points } => write!(
                f,
                "family needs {family:?} points but the point set is {points:?}"
            ),
            RangeSpaceError::TooManyPoints { n, cap } => write!(
                f,
                "ground set of {n} points exceeds the enumeration cap {cap}; pass force to override"
            ),
            RangeSpaceError::InvalidDepth { k, n } => {
                write!(f, "depth {k} outside 1..={n}")
            }
            RangeSpaceError::ZeroGround => write!(f, "measure needs a non-empty ground set"),
            RangeSpaceError::RangeExceedsGround => {
                write!(f, "range size exceeds ground size")
            }
            RangeSpaceError::BadProfileDepths => {
                write!(f, "profile depths must be non-empty and strictly increasing")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RangeSpaceError {}

/// Options for [`canonical_ranges_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct EnumerationOptions {
    /// Enumerate past the per-family ground-size cap.
    pub force_large: bool,
}

/// The full deduplicated catalog of canonical ranges of one family over one
/// ground set, in deterministic order.
#[derive(Debug, Clone)]
pub struct RangeCatalog {
    family: FamilyKind,
    ground_n: u32,
    ranges: Vec<CanonicalRange>,
}

impl RangeCatalog {
    /// Family that produced the catalog.
    pub fn family(&self) -> FamilyKind {
        self.family
    }

    /// Ground set size.
    pub fn ground_n(&self) -> u32 {
        self.ground_n
    }

    /// Number of canonical ranges.
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    /// Catalogs are never empty (they contain at least ∅ and the full set).
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ranges sorted by size then lexicographic members.
    pub fn ranges(&self) -> &[CanonicalRange] {
        &self.ranges
    }

    /// Range by position in the deterministic order.
    pub fn range(&self, id: u32) -> &CanonicalRange {
        &self.ranges[id as usize]
    }

    /// Position of a member set in the catalog, if realizable.
    pub fn find(&self, members: &MemberSet) -> Option<u32> {
        self.ranges
            .binary_search_by(|r| r.members.catalog_cmp(members))
            .ok()
            .map(|i| i as u32)
    }

    /// Number of ranges with size at most `k` (the catalog is sorted by size).
    pub fn count_up_to(&self, k: u32) -> usize {
        self.ranges.partition_point(|r| r.size() <= k)
    }
}

/// Accumulates candidate member sets, deduplicating by set.
pub(crate) struct CatalogBuilder {
    universe: u32,
    seen: hashbrown::HashSet<MemberSet>,
    out: Vec<CanonicalRange>,
}

impl CatalogBuilder {
    pub(crate) fn new(universe: u32) -> Self {
        CatalogBuilder {
            universe,
            seen: hashbrown::HashSet::new(),
            out: Vec::new(),
        }
    }

    pub(crate) fn add(&mut self, members: MemberSet, witness: RangeWitness) {
        debug_assert_eq!(members.universe(), self.universe);
        if self.seen.insert(members.clone()) {
            self.out.push(CanonicalRange { members, witness });
        }
    }

    fn finish(mut self, family: FamilyKind) -> RangeCatalog {
        if !self.seen.contains(&MemberSet::new(self.universe)) {
            let empty = MemberSet::new(self.universe);
            self.out.push(CanonicalRange {
                members: empty,
                witness: RangeWitness::EmptyRegion,
            });
        }
        if !self.seen.contains(&MemberSet::full(self.universe)) {
            self.out.push(CanonicalRange {
                members: MemberSet::full(self.universe),
                witness: RangeWitness::FullRegion,
            });
        }
        self.out
            .sort_unstable_by(|a, b| a.members.catalog_cmp(&b.members));
        RangeCatalog {
            family,
            ground_n: self.universe,
            ranges: self.out,
        }
    }
}

/// Enumerates the full catalog of canonical ranges, refusing ground sets
/// larger than the family cap.
pub fn canonical_ranges(
    points: &PointSet,
    family: FamilyKind,
) -> Result<RangeCatalog, RangeSpaceError> {
    canonical_ranges_with(points, family, EnumerationOptions::default())
}

/// Enumerates the full catalog with explicit options.
pub fn canonical_ranges_with(
    points: &PointSet,
    family: FamilyKind,
    options: EnumerationOptions,
) -> Result<RangeCatalog, RangeSpaceError> {
    if points.dim() != family.dim() {
        return Err(RangeSpaceError::DimensionMismatch {
            family: family.dim(),
            points: points.dim(),
        });
    }
    let cap = family.enumeration_cap();
    if points.len() > cap && !options.force_large {
        return Err(RangeSpaceError::TooManyPoints {
            n: points.len(),
            cap,
        });
    }
    let mut builder = CatalogBuilder::new(points.len() as u32);
    match family {
        FamilyKind::Halfplanes2d => halfplanes::enumerate(points, &mut builder),
        FamilyKind::Halfspaces3d => halfspaces::enumerate(points, &mut builder),
        FamilyKind::Rects2d => boxes::enumerate_rects(points, &mut builder),
        FamilyKind::Boxes3d => boxes::enumerate_boxes(points, &mut builder),
    }
    Ok(builder.finish(family))
}

/// Ranges of size at most `k`, in catalog order. `k` must lie in `1..=n`.
pub fn shallow_ranges(
    catalog: &RangeCatalog,
    k: u32,
) -> Result<Vec<&CanonicalRange>, RangeSpaceError> {
    if k == 0 || k > catalog.ground_n() {
        return Err(RangeSpaceError::InvalidDepth {
            k,
            n: catalog.ground_n(),
        });
    }
    Ok(catalog.ranges().iter().filter(|r| r.size() <= k).collect())
}

/// Exact counting measure `range_size / ground_size`.
pub fn raw_measure(range_size: u32, ground_size: u32) -> Result<Rat, RangeSpaceError> {
    if ground_size == 0 {
        return Err(RangeSpaceError::ZeroGround);
    }
    if range_size > ground_size {
        return Err(RangeSpaceError::RangeExceedsGround);
    }
    Ok(Rat::new(range_size as i128, ground_size as i128))
}

/// For each ground point, the number of the given ranges containing it.
pub fn incidence_counts<'a>(
    ranges: impl IntoIterator<Item = &'a CanonicalRange>,
    ground_n: u32,
) -> Vec<u64> {
    let mut counts = alloc::vec![0u64; ground_n as usize];
    for r in ranges {
        for i in r.members.iter() {
            counts[i as usize] += 1;
        }
    }
    counts
}

/// One row of a shallow-range growth profile.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct ProfileRow {
    /// Depth `k`.
    pub k: u32,
    /// Number of canonical ranges of size at most `k`.
    pub count: u64,
    /// Growth bound `n · φ(n) · k^c` with unit constant.
    pub bound: u128,
    /// Whether `count` exceeds the unit-constant bound.
    pub exceeds: bool,
}

/// Shallow-range counts against the family growth bound, for strictly
/// increasing depths `ks` (each in `1..=n`).
pub fn well_behaved_profile(
    catalog: &RangeCatalog,
    ks: &[u32],
) -> Result<Vec<ProfileRow>, RangeSpaceError> {
    if ks.is_empty() || ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(RangeSpaceError::BadProfileDepths);
    }
    let n = catalog.ground_n();
    let family = catalog.family();
    let mut rows = Vec::with_capacity(ks.len());
    for &k in ks {
        if k == 0 || k > n {
            return Err(RangeSpaceError::InvalidDepth { k, n });
        }
        let count = catalog.count_up_to(k) as u64;
        let bound = (n as u128)
            * (family.phi(n as u64) as u128)
            * (k as u128).pow(family.exponent());
        rows.push(ProfileRow {
            k,
            count,
            bound,
            exceeds: (count as u128) > bound,
        });
    }
    Ok(rows)
}

/// Formats a witness compactly for diagnostics.
pub fn witness_summary(w: &RangeWitness) -> String {
    use alloc::format;
    match w {
        RangeWitness::Halfspace { coeffs, offset } => {
            format!("halfspace {coeffs:?} >= {offset}")
        }
        RangeWitness::TiltedHalfspace {
            plane,
            plane_offset,
            axis,
            cut,
        } => format!("tilted halfspace {plane:?} > {plane_offset}, on-plane {axis:?} >= {cut}"),
        RangeWitness::AxisBox { min, max } => format!("box {min:?}..{max:?}"),
        RangeWitness::EmptyRegion => String::from("empty region"),
        RangeWitness::FullRegion => String::from("full region"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_set_basics() {
        let mut s = MemberSet::new(130);
        for i in [0u32, 63, 64, 65, 129] {
            s.insert(i);
        }
        s.insert(64);
        assert_eq!(s.len(), 5);
        assert_eq!(s.to_vec(), alloc::vec![0, 63, 64, 65, 129]);
        assert!(s.contains(129) && !s.contains(128));
        let c = s.complement();
        assert_eq!(c.len(), 125);
        assert_eq!(s.intersection_count(&c), 0);
        assert_eq!(MemberSet::full(130).intersection_count(&s), 5);
    }

    #[test]
    fn catalog_order_matches_list_order() {
        let u = 70;
        let mk = |v: &[u32]| MemberSet::from_indices(u, v.iter().copied());
        // size first
        assert_eq!(mk(&[5]).catalog_cmp(&mk(&[0, 1])), Ordering::Less);
        // then lexicographic member sequence
        assert_eq!(mk(&[0, 3]).catalog_cmp(&mk(&[1, 2])), Ordering::Less);
        assert_eq!(mk(&[0, 3]).catalog_cmp(&mk(&[0, 2])), Ordering::Greater);
        assert_eq!(mk(&[0, 69]).catalog_cmp(&mk(&[0, 69])), Ordering::Equal);
        assert_eq!(mk(&[1, 64]).catalog_cmp(&mk(&[1, 65])), Ordering::Less);
    }

    #[test]
    fn incidence_matches_hand_example() {
        let u = 3;
        let ranges = alloc::vec![
            CanonicalRange {
                members: MemberSet::from_indices(u, [0, 1]),
                witness: RangeWitness::EmptyRegion,
            },
            CanonicalRange {
                members: MemberSet::from_indices(u, [1, 2]),
                witness: RangeWitness::EmptyRegion,
            },
        ];
        assert_eq!(incidence_counts(ranges.iter(), u), alloc::vec![1, 2, 1]);
    }

    #[test]
    fn measure_domain() {
        assert_eq!(raw_measure(1, 4).unwrap(), Rat::new(1, 4));
        assert!(raw_measure(1, 0).is_err());
        assert!(raw_measure(5, 4).is_err());
    }

    #[test]
    fn ilog2_ceil_values() {
        assert_eq!(ilog2_ceil(0), 0);
        assert_eq!(ilog2_ceil(1), 0);
        assert_eq!(ilog2_ceil(2), 1);
        assert_eq!(ilog2_ceil(3), 2);
        assert_eq!(ilog2_ceil(1024), 10);
        assert_eq!(ilog2_ceil(1025), 11);
    }
}
