//! Enumeration of subsets realizable by closed halfplanes.
//!
//! Every non-trivial realizable subset can be realized with its boundary
//! line through one or two input points. The sweep visits each input line
//! once (through its two smallest defining indices) and emits, per side, the
//! open side, the closed side, and the open side plus a prefix or suffix of
//! the collinear points ordered along the line. Witnesses stay exact closed
//! halfplanes: translations use a doubled normal with an odd offset, and
//! prefix witnesses tilt the normal by the line direction scaled so no
//! off-line point changes side.

use alloc::vec::Vec;

use crate::geometry::PointSet;

use super::{CatalogBuilder, MemberSet, RangeWitness};

/// Witness in the coordinates handed to [`enumerate_planar`].
pub(crate) enum PlanarWitness {
    /// Closed halfplane `a·x + b·y ≥ c`.
    Closed {
        /// Normal x component.
        a: i128,
        /// Normal y component.
        b: i128,
        /// Inclusive threshold.
        c: i128,
    },
    /// Realized by a halfplane avoiding all points.
    Empty,
    /// Realized by a halfplane covering all points.
    Full,
}

/// Emits every subset of `pts` realizable by a closed halfplane. Subsets may
/// repeat; callers deduplicate.
pub(crate) fn enumerate_planar(
    pts: &[[i64; 2]],
    mut emit: impl FnMut(MemberSet, PlanarWitness),
) {
    let n = pts.len() as u32;
    emit(MemberSet::new(n), PlanarWitness::Empty);
    emit(MemberSet::full(n), PlanarWitness::Full);
    if n < 2 {
        return;
    }
    let cross = |d: [i128; 2], e: [i128; 2]| d[0] * e[1] - d[1] * e[0];
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if pts[i] == pts[j] {
                continue;
            }
            let p = [pts[i][0] as i128, pts[i][1] as i128];
            let d = [
                pts[j][0] as i128 - p[0],
                pts[j][1] as i128 - p[1],
            ];
            let mut side_a = MemberSet::new(n);
            let mut side_b = MemberSet::new(n);
            let mut on_line: Vec<u32> = Vec::new();
            for (k, q) in pts.iter().enumerate() {
                let s = cross(d, [q[0] as i128 - p[0], q[1] as i128 - p[1]]);
                if s > 0 {
                    side_a.insert(k as u32);
                } else if s < 0 {
                    side_b.insert(k as u32);
                } else {
                    on_line.push(k as u32);
                }
            }
            // Process each line once: through its smallest on-line index and
            // the next on-line index at a distinct location.
            if on_line[0] != i as u32 {
                continue;
            }
            let second = on_line
                .iter()
                .copied()
                .find(|&k| pts[k as usize] != pts[i]);
            if second != Some(j as u32) {
                continue;
            }

            let na = [-d[1], d[0]];
            let ca = na[0] * p[0] + na[1] * p[1];
            let mut with_line_a = side_a.clone();
            let mut with_line_b = side_b.clone();
            for &k in &on_line {
                with_line_a.insert(k);
                with_line_b.insert(k);
            }
            emit(
                with_line_a,
                PlanarWitness::Closed {
                    a: na[0],
                    b: na[1],
                    c: ca,
                },
            );
            emit(
                with_line_b,
                PlanarWitness::Closed {
                    a: -na[0],
                    b: -na[1],
                    c: -ca,
                },
            );
            emit(
                side_a.clone(),
                PlanarWitness::Closed {
                    a: 2 * na[0],
                    b: 2 * na[1],
                    c: 2 * ca + 1,
                },
            );
            emit(
                side_b.clone(),
                PlanarWitness::Closed {
                    a: -2 * na[0],
                    b: -2 * na[1],
                    c: -2 * ca + 1,
                },
            );

            // Positions along the line and the global spread, which bounds
            // the tilt scale needed to keep off-line points on their side.
            let t_of = |q: [i64; 2]| d[0] * q[0] as i128 + d[1] * q[1] as i128;
            let mut t_min = i128::MAX;
            let mut t_max = i128::MIN;
            for q in pts {
                let t = t_of(*q);
                t_min = t_min.min(t);
                t_max = t_max.max(t);
            }
            let mut ordered: Vec<(i128, u32)> =
                on_line.iter().map(|&k| (t_of(pts[k as usize]), k)).collect();
            ordered.sort_unstable();

            let scale = |t_q: i128| 1 + (t_max - t_q).max(t_q - t_min);
            let mut run = |base: &MemberSet, base_n: [i128; 2], base_c: i128| {
                // prefixes: on-line points with t ≤ t_q
                let mut cur = base.clone();
                let mut idx = 0;
                while idx < ordered.len() {
                    let t_q = ordered[idx].0;
                    while idx < ordered.len() && ordered[idx].0 == t_q {
                        cur.insert(ordered[idx].1);
                        idx += 1;
                    }
                    let m = scale(t_q);
                    emit(
                        cur.clone(),
                        PlanarWitness::Closed {
                            a: m * base_n[0] - d[0],
                            b: m * base_n[1] - d[1],
                            c: m * base_c - t_q,
                        },
                    );
                }
                // suffixes: on-line points with t ≥ t_q
                let mut cur = base.clone();
                let mut idx = ordered.len();
                while idx > 0 {
                    let t_q = ordered[idx - 1].0;
                    while idx > 0 && ordered[idx - 1].0 == t_q {
                        cur.insert(ordered[idx - 1].1);
                        idx -= 1;
                    }
                    let m = scale(t_q);
                    emit(
                        cur.clone(),
                        PlanarWitness::Closed {
                            a: m * base_n[0] + d[0],
                            b: m * base_n[1] + d[1],
                            c: m * base_c + t_q,
                        },
                    );
                }
            };
            run(&side_a, na, ca);
            run(&side_b, [-na[0], -na[1]], -ca);
        }
    }
}

pub(crate) fn enumerate(points: &PointSet, builder: &mut CatalogBuilder) {
    let pts: Vec<[i64; 2]> = points
        .points()
        .iter()
        .map(|p| [p.coords[0], p.coords[1]])
        .collect();
    enumerate_planar(&pts, |members, w| {
        let witness = match w {
            PlanarWitness::Closed { a, b, c } => RangeWitness::Halfspace {
                coeffs: [a, b, 0],
                offset: c,
            },
            PlanarWitness::Empty => RangeWitness::EmptyRegion,
            PlanarWitness::Full => RangeWitness::FullRegion,
        };
        builder.add(members, witness);
    });
}
