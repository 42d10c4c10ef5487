//! Construction and exact verification of small relative (p, eps)-approximations
//! for geometric range spaces over finite point sets.
//!
//! The crate is organised around four layers:
//!
//! * [`geometry`]: exact fixed-scale integer coordinates and orientation
//!   predicates. No floating point is used anywhere in the crate.
//! * [`ranges`]: canonical range enumeration for four families (halfplanes in
//!   the plane, halfspaces in 3-space, axis-aligned rectangles and boxes),
//!   shallow-range counting, incidence counts and growth profiles.
//! * [`plan`], [`layers`], [`sample`], [`events`], [`mt`], [`weighted`],
//!   [`construct`]: the sampling pipeline. Parameter resolution, an initial
//!   certified sample, measure layering, heavy/light object classification,
//!   independent coin sampling of the light part, resampling of violated
//!   deviation events until none remain, and assembly of the weighted sample.
//! * [`verify`]: an exact rational verifier used both as the certification
//!   oracle inside the pipeline and as the external acceptance check, plus a
//!   uniform-sampling baseline for size comparisons.
//!
//! Determinism: every randomised operation takes an explicit seed or a
//! [`rng::StageRng`] derived from one, and all arithmetic that feeds a
//! decision is exact (integer or rational), so identical inputs produce
//! identical outputs on every run.
//!
//! The crate is `no_std` (with `alloc`); file formats, timing and CLI live in
//! the companion binary crate.

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod construct;
pub mod events;
pub mod geometry;
pub mod layers;
pub mod mt;
pub mod numeric;
pub mod plan;
pub mod ranges;
pub mod rng;
pub mod sample;
pub mod verify;
pub mod weighted;

pub use construct::{construct, construct_with_catalog, ConstructError, ConstructionReport};
pub use events::{violated_events, BadEvent, BadEventKind, DeviationKind, Side};
pub use geometry::{Dim, GeometryError, Point, PointSet};
pub use layers::{assign_layers, classify_objects, HeavyLightPartition, LayerStructure};
pub use mt::{moser_tardos, ResampleStats};
pub use numeric::Rat;
pub use plan::{resolve_plan, ApproxParams, Caps, Constants, PlanMode, ResolvedPlan};
pub use ranges::{
    canonical_ranges, canonical_ranges_with, incidence_counts, raw_measure, shallow_ranges,
    well_behaved_profile, CanonicalRange, EnumerationOptions, FamilyKind, MemberSet, ProfileRow,
    RangeCatalog, RangeSpaceError,
};
pub use sample::{draw_coins, initial_sample, CoinVector, InitialSample};
pub use verify::{
    baseline_sample, baseline_sample_size, check_pnet, check_relative, compare, ComparisonTable,
    PnetReport, ViolationReport,
};
pub use weighted::{weighted_measure, WeightedSample};
