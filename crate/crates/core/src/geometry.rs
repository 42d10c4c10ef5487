//! Exact fixed-scale coordinates and orientation predicates.
//!
//! Coordinates are decimals with at most six fractional digits, stored as
//! `i64` integers scaled by 10^6. The magnitude cap [`COORD_LIMIT`] keeps
//! every predicate in this module (and every witness construction downstream)
//! inside `i128` with no overflow, so all geometric decisions are exact.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Scaled integer coordinate (value × 10^6).
pub type Coord = i64;

/// Multiplier between user-facing decimal values and stored integers.
pub const COORD_SCALE: i64 = 1_000_000;

/// Maximum allowed magnitude of a scaled coordinate (≈ 1073.74 in value).
pub const COORD_LIMIT: i64 = 1 << 30;

/// Ambient dimension of a point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Dim {
    /// Points in the plane.
    Two,
    /// Points in 3-space.
    Three,
}

impl Dim {
    /// Number of coordinates per point.
    pub fn arity(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

/// A point with scaled integer coordinates; `coords[2] == 0` in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    /// Scaled coordinates (x, y, z).
    pub coords: [Coord; 3],
}

impl Point {
    /// Plane point from scaled coordinates.
    pub fn xy(x: Coord, y: Coord) -> Self {
        Point { coords: [x, y, 0] }
    }

    /// Space point from scaled coordinates.
    pub fn xyz(x: Coord, y: Coord, z: Coord) -> Self {
        Point { coords: [x, y, z] }
    }
}

/// Errors from point-set construction and parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeometryError {
    /// A point set must contain at least one point.
    Empty,
    /// A coordinate exceeded [`COORD_LIMIT`].
    CoordinateOutOfRange {
        /// Index of the offending point.
        index: usize,
    },
    /// 2D points must have zero third coordinate.
    NonZeroThirdCoordinate {
        /// Index of the offending point.
        index: usize,
    },
    /// Text input could not be parsed.
    Parse {
        /// One-based line number of the offending input line.
        line: usize,
        /// What went wrong on that line.
        message: String,
    },
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::Empty => write!(f, "point set must be non-empty"),
            GeometryError::CoordinateOutOfRange { index } => {
                write!(f, "coordinate magnitude exceeds limit at point {index}")
            }
            GeometryError::NonZeroThirdCoordinate { index } => {
                write!(f, "2D point {index} has a non-zero third coordinate")
            }
            GeometryError::Parse { line, message } => {
                write!(f, "parse error on line {line}: {message}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for GeometryError {}

/// An immutable finite point set with duplicate diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    dim: Dim,
    points: Vec<Point>,
    /// Groups of ≥ 2 coincident point indices, each group sorted ascending.
    duplicate_groups: Vec<Vec<u32>>,
}

impl PointSet {
    /// Builds a point set, validating coordinate bounds and flagging duplicates.
    pub fn new(dim: Dim, points: Vec<Point>) -> Result<Self, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::Empty);
        }
        for (i, p) in points.iter().enumerate() {
            if p.coords.iter().any(|&c| c.abs() > COORD_LIMIT) {
                return Err(GeometryError::CoordinateOutOfRange { index: i });
            }
            if dim == Dim::Two && p.coords[2] != 0 {
                return Err(GeometryError::NonZeroThirdCoordinate { index: i });
            }
        }
        let mut order: Vec<u32> = (0..points.len() as u32).collect();
        order.sort_unstable_by_key(|&i| points[i as usize].coords);
        let mut duplicate_groups = Vec::new();
        let mut start = 0;
        for end in 1..=order.len() {
            if end == order.len()
                || points[order[end] as usize].coords != points[order[start] as usize].coords
            {
                if end - start >= 2 {
                    let mut group: Vec<u32> = order[start..end].to_vec();
                    group.sort_unstable();
                    duplicate_groups.push(group);
                }
                start = end;
            }
        }
        duplicate_groups.sort_unstable();
        Ok(PointSet {
            dim,
            points,
            duplicate_groups,
        })
    }

    /// Ambient dimension.
    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; point sets are non-empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The points in input order.
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Point at `index`.
    pub fn point(&self, index: u32) -> Point {
        self.points[index as usize]
    }

    /// Groups of coincident points (each group has at least two indices).
    pub fn duplicate_groups(&self) -> &[Vec<u32>] {
        &self.duplicate_groups
    }

    /// Sub-point-set at the given indices (order preserved).
    pub fn subset(&self, indices: &[u32]) -> Result<PointSet, GeometryError> {
        let pts = indices
            .iter()
            .map(|&i| self.points[i as usize])
            .collect::<Vec<_>>();
        PointSet::new(self.dim, pts)
    }

    /// Parses the plain-text format: first non-comment line `d n`, then `n`
    /// lines of `d` exact decimal coordinates separated by whitespace.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn from_text(text: &str) -> Result<Self, GeometryError> {
        let mut rows = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, header) = rows.next().ok_or(GeometryError::Parse {
            line: 0,
            message: "missing header line".to_string(),
        })?;
        let mut it = header.split_whitespace();
        let d: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GeometryError::Parse {
                line,
                message: "header must be `d n`".to_string(),
            })?;
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GeometryError::Parse {
                line,
                message: "header must be `d n`".to_string(),
            })?;
        if it.next().is_some() || !(d == 2 || d == 3) {
            return Err(GeometryError::Parse {
                line,
                message: "header must be `d n` with d in {2, 3}".to_string(),
            });
        }
        let dim = if d == 2 { Dim::Two } else { Dim::Three };
        let mut points = Vec::with_capacity(n);
        for _ in 0..n {
            let (line, row) = rows.next().ok_or(GeometryError::Parse {
                line: 0,
                message: format!("expected {n} coordinate lines"),
            })?;
            let mut coords = [0i64; 3];
            let mut tokens = row.split_whitespace();
            for slot in coords.iter_mut().take(d) {
                let tok = tokens.next().ok_or_else(|| GeometryError::Parse {
                    line,
                    message: format!("expected {d} coordinates"),
                })?;
                *slot = parse_coordinate(tok).map_err(|message| GeometryError::Parse {
                    line,
                    message,
                })?;
            }
            if tokens.next().is_some() {
                return Err(GeometryError::Parse {
                    line,
                    message: format!("expected exactly {d} coordinates"),
                });
            }
            points.push(Point { coords });
        }
        if let Some((line, _)) = rows.next() {
            return Err(GeometryError::Parse {
                line,
                message: "trailing content after declared points".to_string(),
            });
        }
        PointSet::new(dim, points)
    }

    /// Serialises back to the plain-text format (LF line endings).
    pub fn to_text(&self) -> String {
        let d = self.dim.arity();
        let mut out = format!("{} {}\n", d, self.points.len());
        for p in &self.points {
            let row: Vec<String> = p.coords[..d].iter().map(|&c| format_coordinate(c)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Parses one exact decimal with at most six fractional digits into a scaled
/// coordinate, enforcing [`COORD_LIMIT`].
pub fn parse_coordinate(token: &str) -> Result<Coord, String> {
    let (sign, rest) = match token.strip_prefix('-') {
        Some(r) => (-1i64, r),
        None => (1i64, token.strip_prefix('+').unwrap_or(token)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("empty coordinate {token:?}"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("non-decimal coordinate {token:?}"));
    }
    if !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(format!("non-decimal coordinate {token:?}"));
    }
    if frac_part.len() > 6 {
        return Err(format!(
            "coordinate {token:?} has more than six fractional digits"
        ));
    }
    let int_val: i64 = if int_part.is_empty() {
        0
    } else {
        int_part
            .parse()
            .map_err(|_| format!("coordinate {token:?} too large"))?
    };
    let mut frac_val: i64 = 0;
    let mut scale = COORD_SCALE;
    for c in frac_part.chars() {
        scale /= 10;
        frac_val += (c as i64 - '0' as i64) * scale;
    }
    let scaled = int_val
        .checked_mul(COORD_SCALE)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(|| format!("coordinate {token:?} too large"))?;
    if scaled > COORD_LIMIT {
        return Err(format!("coordinate {token:?} exceeds magnitude limit"));
    }
    Ok(sign * scaled)
}

/// Formats a scaled coordinate back to its exact decimal form.
pub fn format_coordinate(c: Coord) -> String {
    let sign = if c < 0 { "-" } else { "" };
    let a = c.unsigned_abs();
    let int_part = a / COORD_SCALE as u64;
    let frac_part = a % COORD_SCALE as u64;
    if frac_part == 0 {
        format!("{sign}{int_part}")
    } else {
        let digits = format!("{frac_part:06}");
        format!("{sign}{int_part}.{}", digits.trim_end_matches('0'))
    }
}

/// Sign of the cross product (b − a) × (c − a): positive when `c` lies to the
/// left of the directed line `a → b`. Exact.
pub fn orient2d(a: Point, b: Point, c: Point) -> i8 {
    let ux = (b.coords[0] - a.coords[0]) as i128;
    let uy = (b.coords[1] - a.coords[1]) as i128;
    let vx = (c.coords[0] - a.coords[0]) as i128;
    let vy = (c.coords[1] - a.coords[1]) as i128;
    sign_i128(ux * vy - uy * vx)
}

/// Sign of det[b − a, c − a, d − a]: positive when `d` lies on the positive
/// side of the plane through `a`, `b`, `c` oriented by the right-hand rule.
pub fn orient3d(a: Point, b: Point, c: Point, d: Point) -> i8 {
    let u = diff(b, a);
    let v = diff(c, a);
    let w = diff(d, a);
    let det = u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
        + u[2] * (v[0] * w[1] - v[1] * w[0]);
    sign_i128(det)
}

/// Cross product (b − a) × (c − a) as an exact integer normal vector.
pub fn plane_normal(a: Point, b: Point, c: Point) -> [i128; 3] {
    let u = diff(b, a);
    let v = diff(c, a);
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

/// Index of the largest-magnitude component of a vector (must be non-zero).
pub fn dominant_axis(v: [i128; 3]) -> usize {
    let mags = [v[0].unsigned_abs(), v[1].unsigned_abs(), v[2].unsigned_abs()];
    let mut best = 0;
    for i in 1..3 {
        if mags[i] > mags[best] {
            best = i;
        }
    }
    best
}

/// Projects a point to the coordinate plane orthogonal to `axis`, keeping
/// the other two coordinates in cyclic order (axis+1, axis+2).
pub fn project_drop_axis(p: Point, axis: usize) -> [Coord; 2] {
    [p.coords[(axis + 1) % 3], p.coords[(axis + 2) % 3]]
}

/// Exact dot product of an integer vector with a point.
pub fn dot(v: [i128; 3], p: Point) -> i128 {
    v[0] * p.coords[0] as i128 + v[1] * p.coords[1] as i128 + v[2] * p.coords[2] as i128
}

fn diff(a: Point, b: Point) -> [i128; 3] {
    [
        (a.coords[0] - b.coords[0]) as i128,
        (a.coords[1] - b.coords[1]) as i128,
        (a.coords[2] - b.coords[2]) as i128,
    ]
}

fn sign_i128(v: i128) -> i8 {
    match v.cmp(&0) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}
