//! Discrete projective duality: support elements of a sampled convex body.
//!
//! Each scanned outward direction yields the cooriented contact element of
//! the supporting hyperplane of the body's point cloud:
//!
//! * three-dimensional bodies (the body lives in the `(u, v, w)` slice) —
//!   `(p, q, r)` carries the unit outward normal, `(u, v, w)` the touching
//!   point, and `s` the support value `max ⟨n, x⟩`;
//! * four-dimensional bodies — directions are drawn from the upper
//!   hemisphere (`n₄` bounded away from zero) and the element is written in
//!   the affine chart with vertical component one: `(p, q, r) = n₁..₃ / n₄`
//!   and `(u, v, w, s)` the touching point itself.

use super::{ContactElement, LegendreError};
use crate::classify::PointCloudBody;
use crate::sampling::{fibonacci_sphere, hopf_sphere3};

/// Smallest admissible vertical component of a scanned 4D direction; the
/// affine chart degenerates as the hyperplane turns vertical.
const MIN_VERTICAL: f64 = 0.05;

fn support(points: &[[f64; 4]], dir: &[f64; 4]) -> ([f64; 4], f64) {
    let mut best = points[0];
    let mut value = f64::NEG_INFINITY;
    for x in points {
        let h = x[0] * dir[0] + x[1] * dir[1] + x[2] * dir[2] + x[3] * dir[3];
        if h > value {
            value = h;
            best = *x;
        }
    }
    (best, value)
}

/// Support elements of the body over a deterministic direction scan.
///
/// For 4D bodies the scan keeps only directions with `n₄ > 0.05`, so fewer
/// than `n_directions` elements come back.
pub fn dual_support_elements(
    body: &PointCloudBody,
    n_directions: usize,
) -> Result<Vec<ContactElement>, LegendreError> {
    if body.points.is_empty() {
        return Err(LegendreError::EmptyBody);
    }
    let mut out = Vec::new();
    if body.dim == 3 {
        for n in fibonacci_sphere(n_directions) {
            let dir = [n[0], n[1], n[2], 0.0];
            let (touch, value) = support(&body.points, &dir);
            out.push(ContactElement {
                p: n[0],
                q: n[1],
                r: n[2],
                u: touch[0],
                v: touch[1],
                w: touch[2],
                s: value,
            });
        }
    } else {
        for n in hopf_sphere3(n_directions) {
            if n[3] <= MIN_VERTICAL {
                continue;
            }
            let (touch, _) = support(&body.points, &n);
            out.push(ContactElement {
                p: n[0] / n[3],
                q: n[1] / n[3],
                r: n[2] / n[3],
                u: touch[0],
                v: touch[1],
                w: touch[2],
                s: touch[3],
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_ball_elements_are_self_dual() {
        // Dense cloud on the unit sphere: support value is ~1 in every
        // direction and the touching point nearly equals the direction.
        let points: Vec<[f64; 4]> = fibonacci_sphere(4000)
            .into_iter()
            .map(|n| [n[0], n[1], n[2], 0.0])
            .collect();
        let body = PointCloudBody::new(3, points);
        let elements = dual_support_elements(&body, 200).unwrap();
        assert_eq!(elements.len(), 200);
        for e in &elements {
            assert!(e.s <= 1.0 + 1e-12 && e.s > 0.998, "support {}", e.s);
            let gap = ((e.u - e.p).powi(2) + (e.v - e.q).powi(2) + (e.w - e.r).powi(2)).sqrt();
            assert!(gap < 0.1, "touch point strays {gap}");
        }
    }

    #[test]
    fn four_dimensional_chart_is_vertical_normalized() {
        // Hypercube corners: each admissible direction touches a corner,
        // and the chart fiber is the rescaled normal.
        let mut corners = Vec::new();
        for mask in 0..16u32 {
            corners.push([
                if mask & 1 == 0 { -1.0 } else { 1.0 },
                if mask & 2 == 0 { -1.0 } else { 1.0 },
                if mask & 4 == 0 { -1.0 } else { 1.0 },
                if mask & 8 == 0 { -1.0 } else { 1.0 },
            ]);
        }
        let body = PointCloudBody::new(4, corners);
        let elements = dual_support_elements(&body, 500).unwrap();
        assert!(!elements.is_empty() && elements.len() < 500);
        for e in &elements {
            // Touching point is a corner and the fibers are finite.
            assert_eq!(e.u.abs(), 1.0);
            assert_eq!(e.v.abs(), 1.0);
            assert_eq!(e.w.abs(), 1.0);
            assert_eq!(e.s.abs(), 1.0);
            assert!(e.p.abs() <= 1.0 / MIN_VERTICAL + 1e-9);
            // Corner sign matches the normal's sign where decisive.
            if e.p.abs() > 0.2 {
                assert_eq!(e.u.signum(), e.p.signum());
            }
        }
    }

    #[test]
    fn empty_body_is_an_error() {
        let body = PointCloudBody::new(3, Vec::new());
        assert!(matches!(
            dual_support_elements(&body, 10),
            Err(LegendreError::EmptyBody)
        ));
    }
}
