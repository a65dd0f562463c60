//! Planar convex hulls (Andrew's monotone chain) and point membership.

use alloc::vec::Vec;

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull vertices without collinear points.
/// Degenerate inputs give one or two vertices.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts: Vec<[f64; 2]> = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<[f64; 2]> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Membership in the hull returned by [`convex_hull`], boundary included
/// up to `tol` (absolute, in coordinate units).
pub fn hull_contains(hull: &[[f64; 2]], p: [f64; 2], tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => (hull[0][0] - p[0]).abs() <= tol && (hull[0][1] - p[1]).abs() <= tol,
        2 => on_segment(hull[0], hull[1], p, tol),
        n => (0..n).all(|k| {
            let a = hull[k];
            let b = hull[(k + 1) % n];
            let len = crate::num::dist(a, b);
            cross(a, b, p) >= -tol * len
        }),
    }
}

fn on_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2], tol: f64) -> bool {
    let len = crate::num::dist(a, b);
    if cross(a, b, p).abs() > tol * len {
        return false;
    }
    let t = ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / (len * len);
    t >= -tol / len && t <= 1.0 + tol / len
}
