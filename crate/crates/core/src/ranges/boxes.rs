//! Enumeration of subsets realizable by closed axis-aligned rectangles and
//! boxes.
//!
//! Every realizable subset S has a unique tight box: the bounding box of S,
//! whose faces pass through coordinate value groups of S. The sweep walks all
//! windows of value groups per axis and emits a window exactly when every
//! face is attained by a member, so each subset is produced once, from its
//! bounding box.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{Coord, PointSet};

use super::{CatalogBuilder, MemberSet, RangeWitness};

/// Distinct coordinate values along one axis with their point indices.
struct AxisGroups {
    values: Vec<Coord>,
    members: Vec<Vec<u32>>,
    group_of: Vec<u32>,
}

fn axis_groups(points: &PointSet, axis: usize) -> AxisGroups {
    let mut order: Vec<u32> = (0..points.len() as u32).collect();
    order.sort_unstable_by_key(|&i| (points.point(i).coords[axis], i));
    let mut values = Vec::new();
    let mut members: Vec<Vec<u32>> = Vec::new();
    let mut group_of = vec![0u32; points.len()];
    for &i in &order {
        let v = points.point(i).coords[axis];
        if values.last() != Some(&v) {
            values.push(v);
            members.push(Vec::new());
        }
        group_of[i as usize] = (values.len() - 1) as u32;
        members.last_mut().unwrap().push(i);
    }
    AxisGroups {
        values,
        members,
        group_of,
    }
}

fn order_along(points: &PointSet, axis: usize) -> Vec<u32> {
    let mut order: Vec<u32> = (0..points.len() as u32).collect();
    order.sort_unstable_by_key(|&i| (points.point(i).coords[axis], i));
    order
}

/// Runs of equal coordinate over an axis-sorted index list, as
/// `(value, start, end)` slices into the list.
fn runs(sorted: &[u32], points: &PointSet, axis: usize) -> Vec<(Coord, usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < sorted.len() {
        let v = points.point(sorted[start]).coords[axis];
        let mut end = start + 1;
        while end < sorted.len() && points.point(sorted[end]).coords[axis] == v {
            end += 1;
        }
        out.push((v, start, end));
        start = end;
    }
    out
}

pub(crate) fn enumerate_rects(points: &PointSet, b: &mut CatalogBuilder) {
    let n = points.len() as u32;
    let xg = axis_groups(points, 0);
    let yorder = order_along(points, 1);
    let gx = xg.values.len();
    let mut in_q = vec![false; n as usize];
    for gl in 0..gx {
        for v in in_q.iter_mut() {
            *v = false;
        }
        for gh in gl..gx {
            for &i in &xg.members[gh] {
                in_q[i as usize] = true;
            }
            let qy: Vec<u32> = yorder
                .iter()
                .copied()
                .filter(|&i| in_q[i as usize])
                .collect();
            let ygroups = runs(&qy, points, 1);
            for s in 0..ygroups.len() {
                let mut cur = MemberSet::new(n);
                let mut c_lo = 0u32;
                let mut c_hi = 0u32;
                for (e, &(yv, gs, ge)) in ygroups.iter().enumerate().skip(s) {
                    let _ = e;
                    for &i in &qy[gs..ge] {
                        cur.insert(i);
                        let g = xg.group_of[i as usize] as usize;
                        if g == gl {
                            c_lo += 1;
                        }
                        if g == gh {
                            c_hi += 1;
                        }
                    }
                    if c_lo > 0 && c_hi > 0 {
                        b.add(
                            cur.clone(),
                            RangeWitness::AxisBox {
                                min: [xg.values[gl], ygroups[s].0, 0],
                                max: [xg.values[gh], yv, 0],
                            },
                        );
                    }
                }
            }
        }
    }
}

pub(crate) fn enumerate_boxes(points: &PointSet, b: &mut CatalogBuilder) {
    let n = points.len() as u32;
    let xg = axis_groups(points, 0);
    let yorder = order_along(points, 1);
    let zorder = order_along(points, 2);
    let gx = xg.values.len();
    let mut in_q = vec![false; n as usize];
    let mut ygroup_of = vec![0u32; n as usize];
    for gl in 0..gx {
        for v in in_q.iter_mut() {
            *v = false;
        }
        for gh in gl..gx {
            for &i in &xg.members[gh] {
                in_q[i as usize] = true;
            }
            let qy: Vec<u32> = yorder
                .iter()
                .copied()
                .filter(|&i| in_q[i as usize])
                .collect();
            let ygroups = runs(&qy, points, 1);
            let ng = ygroups.len();
            let mut pref_lo = vec![0u32; ng + 1];
            let mut pref_hi = vec![0u32; ng + 1];
            for (gi, &(_, gs, ge)) in ygroups.iter().enumerate() {
                let mut lo = 0;
                let mut hi = 0;
                for &i in &qy[gs..ge] {
                    ygroup_of[i as usize] = gi as u32;
                    let g = xg.group_of[i as usize] as usize;
                    if g == gl {
                        lo += 1;
                    }
                    if g == gh {
                        hi += 1;
                    }
                }
                pref_lo[gi + 1] = pref_lo[gi] + lo;
                pref_hi[gi + 1] = pref_hi[gi] + hi;
            }
            let qz: Vec<u32> = zorder
                .iter()
                .copied()
                .filter(|&i| in_q[i as usize])
                .collect();
            let mut wz: Vec<u32> = Vec::with_capacity(qz.len());
            for s in 0..ng {
                for e in s..ng {
                    if pref_lo[e + 1] == pref_lo[s] || pref_hi[e + 1] == pref_hi[s] {
                        continue;
                    }
                    wz.clear();
                    wz.extend(qz.iter().copied().filter(|&i| {
                        let g = ygroup_of[i as usize] as usize;
                        g >= s && g <= e
                    }));
                    let zgroups = runs(&wz, points, 2);
                    for zs in 0..zgroups.len() {
                        let mut cur = MemberSet::new(n);
                        let mut cx_lo = 0u32;
                        let mut cx_hi = 0u32;
                        let mut cy_lo = 0u32;
                        let mut cy_hi = 0u32;
                        for &(zv, gs, ge) in &zgroups[zs..] {
                            for &i in &wz[gs..ge] {
                                cur.insert(i);
                                let g = xg.group_of[i as usize] as usize;
                                if g == gl {
                                    cx_lo += 1;
                                }
                                if g == gh {
                                    cx_hi += 1;
                                }
                                let yg = ygroup_of[i as usize] as usize;
                                if yg == s {
                                    cy_lo += 1;
                                }
                                if yg == e {
                                    cy_hi += 1;
                                }
                            }
                            if cx_lo > 0 && cx_hi > 0 && cy_lo > 0 && cy_hi > 0 {
                                b.add(
                                    cur.clone(),
                                    RangeWitness::AxisBox {
                                        min: [xg.values[gl], ygroups[s].0, zgroups[zs].0],
                                        max: [xg.values[gh], ygroups[e].0, zv],
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
