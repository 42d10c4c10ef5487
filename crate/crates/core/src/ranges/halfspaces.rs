//! Enumeration of subsets realizable by closed halfspaces.
//!
//! Degenerate ground sets are handled by affine rank: coincident points give
//! only the trivial subsets, collinear points give prefixes and suffixes
//! along the line, and coplanar points reduce to the planar sweep through an
//! axis projection. In general position every non-trivial subset is realized
//! with its boundary plane through one, two, or three input points; the
//! sweep visits each input plane once (through its lexicographically first
//! defining triple), emits both open and both closed sides exactly, and
//! refines the coplanar points by the planar sweep, recorded as a tilted
//! halfspace witness.

use alloc::vec::Vec;

use crate::geometry::{dominant_axis, dot, plane_normal, project_drop_axis, Point, PointSet};

use super::halfplanes::{enumerate_planar, PlanarWitness};
use super::{CatalogBuilder, MemberSet, RangeWitness};

pub(crate) fn enumerate(points: &PointSet, builder: &mut CatalogBuilder) {
    let n = points.len() as u32;
    let pts = points.points();

    let Some(j0) = pts.iter().position(|q| q.coords != pts[0].coords) else {
        return; // all points coincide; builder supplies empty and full
    };
    let first_off_line = pts
        .iter()
        .position(|&q| plane_normal(pts[0], pts[j0], q) != [0, 0, 0]);
    let Some(k0) = first_off_line else {
        enumerate_collinear(pts, n, builder);
        return;
    };
    let base_normal = plane_normal(pts[0], pts[j0], pts[k0]);
    let base_c = dot(base_normal, pts[0]);
    if pts.iter().all(|&q| dot(base_normal, q) == base_c) {
        enumerate_coplanar(pts, base_normal, n, builder);
        return;
    }

    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            if pts[j].coords == pts[i].coords {
                continue;
            }
            'triples: for k in (j + 1)..pts.len() {
                let normal = plane_normal(pts[i], pts[j], pts[k]);
                if normal == [0, 0, 0] {
                    continue;
                }
                let c = dot(normal, pts[i]);
                let mut side_a = MemberSet::new(n);
                let mut side_b = MemberSet::new(n);
                let mut on_plane: Vec<u32> = Vec::new();
                for (l, &q) in pts.iter().enumerate() {
                    let s = dot(normal, q) - c;
                    if s > 0 {
                        side_a.insert(l as u32);
                    } else if s < 0 {
                        side_b.insert(l as u32);
                    } else {
                        on_plane.push(l as u32);
                    }
                }
                // Process each plane once: through its first index, the next
                // at a distinct location, and the next off that line.
                if on_plane[0] != i as u32 {
                    continue 'triples;
                }
                let second = on_plane
                    .iter()
                    .copied()
                    .find(|&l| pts[l as usize].coords != pts[i].coords);
                if second != Some(j as u32) {
                    continue 'triples;
                }
                let third = on_plane.iter().copied().find(|&l| {
                    plane_normal(pts[i], pts[j], pts[l as usize]) != [0, 0, 0]
                });
                if third != Some(k as u32) {
                    continue 'triples;
                }

                let mut with_plane_a = side_a.clone();
                let mut with_plane_b = side_b.clone();
                for &l in &on_plane {
                    with_plane_a.insert(l);
                    with_plane_b.insert(l);
                }
                builder.add(
                    with_plane_a,
                    RangeWitness::Halfspace {
                        coeffs: normal,
                        offset: c,
                    },
                );
                builder.add(
                    with_plane_b,
                    RangeWitness::Halfspace {
                        coeffs: [-normal[0], -normal[1], -normal[2]],
                        offset: -c,
                    },
                );
                builder.add(
                    side_a.clone(),
                    RangeWitness::Halfspace {
                        coeffs: [2 * normal[0], 2 * normal[1], 2 * normal[2]],
                        offset: 2 * c + 1,
                    },
                );
                builder.add(
                    side_b.clone(),
                    RangeWitness::Halfspace {
                        coeffs: [-2 * normal[0], -2 * normal[1], -2 * normal[2]],
                        offset: -2 * c + 1,
                    },
                );

                // Refine the coplanar points by every halfplane within the
                // plane, via the axis projection.
                let axis = dominant_axis(normal);
                let proj: Vec<[i64; 2]> = on_plane
                    .iter()
                    .map(|&l| project_drop_axis(pts[l as usize], axis))
                    .collect();
                enumerate_planar(&proj, |t_local, pw| {
                    let PlanarWitness::Closed { a, b, c: cut } = pw else {
                        return; // full and empty refinements equal the sides
                    };
                    let mut axis3 = [0i128; 3];
                    axis3[(axis + 1) % 3] = a;
                    axis3[(axis + 2) % 3] = b;
                    let mut in_a = side_a.clone();
                    let mut in_b = side_b.clone();
                    for l in t_local.iter() {
                        in_a.insert(on_plane[l as usize]);
                        in_b.insert(on_plane[l as usize]);
                    }
                    builder.add(
                        in_a,
                        RangeWitness::TiltedHalfspace {
                            plane: normal,
                            plane_offset: c,
                            axis: axis3,
                            cut,
                        },
                    );
                    builder.add(
                        in_b,
                        RangeWitness::TiltedHalfspace {
                            plane: [-normal[0], -normal[1], -normal[2]],
                            plane_offset: -c,
                            axis: axis3,
                            cut,
                        },
                    );
                });
            }
        }
    }
}

fn enumerate_collinear(pts: &[Point], n: u32, builder: &mut CatalogBuilder) {
    let j0 = pts
        .iter()
        .position(|q| q.coords != pts[0].coords)
        .expect("caller found a distinct pair");
    let d = [
        (pts[j0].coords[0] - pts[0].coords[0]) as i128,
        (pts[j0].coords[1] - pts[0].coords[1]) as i128,
        (pts[j0].coords[2] - pts[0].coords[2]) as i128,
    ];
    let mut ordered: Vec<(i128, u32)> = pts
        .iter()
        .enumerate()
        .map(|(k, &q)| (dot(d, q), k as u32))
        .collect();
    ordered.sort_unstable();
    let mut cur = MemberSet::new(n);
    let mut idx = 0;
    while idx < ordered.len() {
        let t_q = ordered[idx].0;
        while idx < ordered.len() && ordered[idx].0 == t_q {
            cur.insert(ordered[idx].1);
            idx += 1;
        }
        builder.add(
            cur.clone(),
            RangeWitness::Halfspace {
                coeffs: [-d[0], -d[1], -d[2]],
                offset: -t_q,
            },
        );
    }
    let mut cur = MemberSet::new(n);
    let mut idx = ordered.len();
    while idx > 0 {
        let t_q = ordered[idx - 1].0;
        while idx > 0 && ordered[idx - 1].0 == t_q {
            cur.insert(ordered[idx - 1].1);
            idx -= 1;
        }
        builder.add(
            cur.clone(),
            RangeWitness::Halfspace {
                coeffs: d,
                offset: t_q,
            },
        );
    }
}

fn enumerate_coplanar(pts: &[Point], normal: [i128; 3], n: u32, builder: &mut CatalogBuilder) {
    let axis = dominant_axis(normal);
    let proj: Vec<[i64; 2]> = pts.iter().map(|&q| project_drop_axis(q, axis)).collect();
    debug_assert_eq!(n as usize, proj.len());
    enumerate_planar(&proj, |members, pw| {
        let witness = match pw {
            PlanarWitness::Closed { a, b, c } => {
                let mut coeffs = [0i128; 3];
                coeffs[(axis + 1) % 3] = a;
                coeffs[(axis + 2) % 3] = b;
                RangeWitness::Halfspace { coeffs, offset: c }
            }
            PlanarWitness::Empty => RangeWitness::EmptyRegion,
            PlanarWitness::Full => RangeWitness::FullRegion,
        };
        builder.add(members, witness);
    });
}
