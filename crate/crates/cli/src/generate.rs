//! Deterministic point-set generators.
//!
//! Every coordinate is an exact decimal with at most six fractional digits,
//! stored as an integer number of millionths, so all downstream geometry
//! stays rational. Each generator derives its randomness from the master
//! seed through a labeled stage split; the same `(kind, n, seed)` triple
//! always yields the same set.

use std::fmt;

use rand::Rng;
use relapprox_core::numeric::{floor_rat, rat, Rat};
use relapprox_core::rng::stage_rng;
use relapprox_core::{Dim, GeometryError, Point, PointSet};

use crate::config::GeneratorKind;

/// Coordinates span `[0, SPAN]` millionths, the unit square or cube.
const SPAN: i64 = 1_000_000;

/// Errors from point generation.
#[derive(Debug)]
pub enum GenerateError {
    /// The generator cannot produce points of the requested dimension.
    DimMismatch {
        /// Requested generator.
        kind: GeneratorKind,
        /// Requested dimension.
        dim: Dim,
    },
    /// `n` must be at least 1.
    EmptyRequest,
    /// The rounded circle points failed the exact convex-position check.
    ConvexityLost,
    /// The assembled coordinates were rejected by the point-set constructor.
    Geometry(GeometryError),
}

impl fmt::Display for GenerateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenerateError::DimMismatch { kind, dim } => {
                write!(f, "generator {} cannot produce {dim:?} points", kind.name())
            }
            GenerateError::EmptyRequest => write!(f, "n must be at least 1"),
            GenerateError::ConvexityLost => {
                write!(f, "rounded circle points are not in strict convex position")
            }
            GenerateError::Geometry(e) => write!(f, "geometry: {e}"),
        }
    }
}

impl std::error::Error for GenerateError {}

impl From<GeometryError> for GenerateError {
    fn from(e: GeometryError) -> Self {
        GenerateError::Geometry(e)
    }
}

/// Generates `n` points of the given dimension, deterministically in `seed`.
pub fn generate_points(
    kind: GeneratorKind,
    dim: Dim,
    n: u32,
    seed: u64,
) -> Result<PointSet, GenerateError> {
    if n == 0 {
        return Err(GenerateError::EmptyRequest);
    }
    if let Some(fixed) = kind.fixed_dim() {
        if fixed != dim {
            return Err(GenerateError::DimMismatch { kind, dim });
        }
    }
    let points = match kind {
        GeneratorKind::UniformSquare => uniform(Dim::Two, n, seed, "gen-uniform-square"),
        GeneratorKind::UniformCube => uniform(Dim::Three, n, seed, "gen-uniform-cube"),
        GeneratorKind::Grid => grid(dim, n),
        GeneratorKind::ConvexCircle => convex_circle(n, seed)?,
        GeneratorKind::Clustered => clustered(dim, n, seed),
    };
    Ok(PointSet::new(dim, points)?)
}

fn uniform(dim: Dim, n: u32, seed: u64, label: &str) -> Vec<Point> {
    let mut rng = stage_rng(seed, label);
    (0..n)
        .map(|_| {
            let x = rng.gen_range(0..=SPAN);
            let y = rng.gen_range(0..=SPAN);
            match dim {
                Dim::Two => Point::xy(x, y),
                Dim::Three => Point::xyz(x, y, rng.gen_range(0..=SPAN)),
            }
        })
        .collect()
}

fn ceil_sqrt(n: u32) -> u32 {
    let r = n.isqrt();
    if r * r < n {
        r + 1
    } else {
        r
    }
}

fn ceil_cbrt(n: u32) -> u32 {
    let mut r = 1u32;
    while r * r * r < n {
        r += 1;
    }
    r
}

/// The first `n` cells of a side-`ceil(n^(1/dim))` lattice spanning the box.
fn grid(dim: Dim, n: u32) -> Vec<Point> {
    let side = match dim {
        Dim::Two => ceil_sqrt(n),
        Dim::Three => ceil_cbrt(n),
    } as i64;
    let step = if side <= 1 { 0 } else { SPAN / (side - 1) };
    (0..n as i64)
        .map(|i| match dim {
            Dim::Two => Point::xy((i % side) * step, (i / side) * step),
            Dim::Three => Point::xyz(
                (i % side) * step,
                ((i / side) % side) * step,
                (i / (side * side)) * step,
            ),
        })
        .collect()
}

const CIRCLE_CENTER: i64 = 500_000;
const CIRCLE_RADIUS: i128 = 499_500;

/// Points near a common circle on a rational angle grid, rounded to
/// millionths and then exactly certified to lie in strict convex position.
///
/// The grid places parameter `u_i = (i + offset) / n` on `[0, 1)`, splits it
/// into a quadrant and a local value `s`, and maps `s` through
/// `((1 - s^2), 2s) / (1 + s^2)`, which traverses a quarter of the unit
/// circle with strictly increasing angle. The seed only rotates the grid.
fn convex_circle(n: u32, seed: u64) -> Result<Vec<Point>, GenerateError> {
    let offset = rat((seed % 997) as i128, 997);
    let radius = Rat::from_integer(CIRCLE_RADIUS);
    let mut points = Vec::with_capacity(n as usize);
    for i in 0..n {
        let quarters = (Rat::from_integer(i as i128) + &offset) * rat(4, n as i128);
        let q = floor_rat(&quarters);
        let s = quarters - Rat::from_integer(q);
        let s_sq = &s * &s;
        let denom = Rat::from_integer(1) + &s_sq;
        let x = &radius * (Rat::from_integer(1) - &s_sq) / &denom;
        let y = &radius * rat(2, 1) * &s / &denom;
        let (x, y) = match q {
            0 => (x, y),
            1 => (-&y, x),
            2 => (-&x, -&y),
            _ => (y, -&x),
        };
        points.push(Point::xy(
            CIRCLE_CENTER + round_rat(&x),
            CIRCLE_CENTER + round_rat(&y),
        ));
    }
    if !strictly_convex_ccw(&points) {
        return Err(GenerateError::ConvexityLost);
    }
    Ok(points)
}

fn round_rat(x: &Rat) -> i64 {
    floor_rat(&(x + rat(1, 2))) as i64
}

/// Exact certificate that a cyclic vertex sequence makes strict left turns
/// only. The sequence is produced in increasing angle around one center, so
/// it winds once, and all-strict-left-turns then certifies a convex polygon
/// with every input point a vertex: strict convex position.
fn strictly_convex_ccw(points: &[Point]) -> bool {
    let n = points.len();
    if n == 1 {
        return true;
    }
    if n == 2 {
        return points[0] != points[1];
    }
    for i in 0..n {
        let a = points[i].coords;
        let b = points[(i + 1) % n].coords;
        let c = points[(i + 2) % n].coords;
        let cross = (b[0] - a[0]) as i128 * (c[1] - b[1]) as i128
            - (b[1] - a[1]) as i128 * (c[0] - b[0]) as i128;
        if cross <= 0 {
            return false;
        }
    }
    true
}

const CLUSTER_SPREAD: i64 = 120_000;

/// Bell-shaped clusters: `ceil(sqrt(n))` uniform centers, points assigned
/// round-robin, each offset per axis by a mean of three uniforms.
fn clustered(dim: Dim, n: u32, seed: u64) -> Vec<Point> {
    let mut rng = stage_rng(seed, "gen-clustered");
    let k = ceil_sqrt(n) as usize;
    let centers: Vec<[i64; 3]> = (0..k)
        .map(|_| {
            let x = rng.gen_range(0..=SPAN);
            let y = rng.gen_range(0..=SPAN);
            let z = match dim {
                Dim::Two => 0,
                Dim::Three => rng.gen_range(0..=SPAN),
            };
            [x, y, z]
        })
        .collect();
    (0..n as usize)
        .map(|i| {
            let center = centers[i % k];
            let mut coords = [0i64; 3];
            for (axis, c) in coords.iter_mut().enumerate().take(dim.arity()) {
                let sum: i64 = (0..3).map(|_| rng.gen_range(0..=CLUSTER_SPREAD)).sum();
                let jitter = sum / 3 - CLUSTER_SPREAD / 2;
                *c = (center[axis] + jitter).clamp(0, SPAN);
            }
            Point { coords }
        })
        .collect()
}
