//! Fixture bodies with known singular-support structure.
//!
//! Every constructor returns a boundary cloud plus an implicit descriptor
//! (negative inside).  Multi-lobe bodies reuse one sphere pattern for all
//! lobes, so corresponding samples differ by exact center offsets and
//! coincidence directions are resolved to machine precision:
//!
//! * `ellipsoid` — strictly convex, no singular support directions;
//! * `peanut` — two unit balls at `±1.5 e₁`: one closed circle of double
//!   tangencies, orthogonal to the lobe axis;
//! * `perturbed_peanut` — the peanut with a graded double crest on the
//!   outer pole of the first lobe: a second, open two-contact arc whose
//!   ends are quartic merge points;
//! * `caltrop` — four unit balls at the vertices of a regular tetrahedron
//!   inside the hyperplane `x₄ = 0`: pair sheets, triple arcs, and one
//!   quadruple tangency at `+e₄` in the upper hemisphere;
//! * `quartic_flat` — convex body whose lowest point supports `−e₃` with
//!   sag exactly `ξ₁⁴ + ξ₂²`: a quartic tangency;
//! * `flat_spot` — a plateau of positive area at the bottom: degenerate
//!   beyond quartic order;
//! * `torus` — a genuinely non-convex demo surface.

use super::{Descriptor, PointCloudBody};
use crate::sampling::{fibonacci_sphere, hopf_sphere3};
use std::sync::Arc;

const GOLDEN_ANGLE: f64 = 2.399963229728653; // π(3 − √5)

fn len3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn len4(v: [f64; 4]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]).sqrt()
}

/// Evenly filling sample of the disk of the given radius (sunflower spiral),
/// with the exact center prepended.
fn sunflower_disk(n: usize, radius: f64) -> Vec<(f64, f64)> {
    let mut pts = vec![(0.0, 0.0)];
    for k in 0..n {
        let r = radius * (((k as f64) + 0.5) / n as f64).sqrt();
        let phi = GOLDEN_ANGLE * k as f64;
        pts.push((r * phi.cos(), r * phi.sin()));
    }
    pts
}

/// Axis-aligned ellipsoid with semi-axes `(a, b, c)`.
pub fn ellipsoid(a: f64, b: f64, c: f64, n: usize) -> PointCloudBody {
    let points = fibonacci_sphere(n)
        .into_iter()
        .map(|s| [a * s[0], b * s[1], c * s[2], 0.0])
        .collect();
    let descriptor: Descriptor = Arc::new(move |x: &[f64; 4]| {
        (x[0] / a).powi(2) + (x[1] / b).powi(2) + (x[2] / c).powi(2) - 1.0
    });
    PointCloudBody::new(3, points).with_descriptor(descriptor)
}

const LOBE_OFFSET: f64 = 1.5;

/// Two unit balls centred at `±1.5 e₁`.  Directions orthogonal to the lobe
/// axis support both lobes at equal height: a closed circle of double
/// tangencies.
pub fn peanut(n_per_lobe: usize) -> PointCloudBody {
    let centers = [[-LOBE_OFFSET, 0.0, 0.0], [LOBE_OFFSET, 0.0, 0.0]];
    let pattern = fibonacci_sphere(n_per_lobe);
    let mut points = Vec::with_capacity(2 * pattern.len());
    for c in centers {
        for s in &pattern {
            points.push([c[0] + s[0], c[1] + s[1], c[2] + s[2], 0.0]);
        }
    }
    let descriptor: Descriptor = Arc::new(move |x: &[f64; 4]| {
        let d1 = len3([x[0] + LOBE_OFFSET, x[1], x[2]]) - 1.0;
        let d2 = len3([x[0] - LOBE_OFFSET, x[1], x[2]]) - 1.0;
        d1.min(d2)
    });
    PointCloudBody::new(3, points).with_descriptor(descriptor)
}

/// Radial crest profile of the perturbed peanut, as a function of the unit
/// direction `d` from the first lobe's center.  The radius gains
/// `c·ξ₁²·exp(−(1+d₁)/τ − ξ₂²/σ²)`: a globally smooth swelling of the
/// outer pole `−e₁`, transverse to the crest plane `ξ₁ = 0`, and
/// negligible from the equator on (the decay factor is below `10⁻³`
/// there).  Where the local quadratic gain exceeds the sphere's `1/2`,
/// the support height `ξ₁²(1/2 − gain)` has two minima — a crest pair
/// with ridges near `ξ₁ ≈ ±0.37` — and the decay drives the gain through
/// `1/2` at `ξ₂ ≈ ±0.43`, where the pair collides in a genuine quartic
/// minimum.  The tails flatten slowly enough that the surface stays
/// convex outside the crest valley, so the valley is the only
/// hull-bridged region: no spurious coincidence skirt forms around the
/// swelling.
fn crest_bump(d: [f64; 3]) -> f64 {
    const GAIN: f64 = 1.7; // peak quadratic gain, against the sphere's 1/2
    const TAU: f64 = 0.14; // radial decay scale of the swelling
    const SIGMA_SQ: f64 = 0.35; // extra grading along the crest
    let (xi1, xi2) = (d[1], d[2]);
    GAIN * xi1 * xi1 * (-(1.0 + d[0]) / TAU - xi2 * xi2 / SIGMA_SQ).exp()
}

/// The peanut with a graded double crest on the first lobe's outer pole.
/// Adds an open two-contact arc of directions near `−e₁` (tilting along
/// `e₃`) on top of the peanut's closed circle; the arc's ends are quartic
/// merge candidates.  `n_cap` extra samples densify the crest region.
pub fn perturbed_peanut(n_per_lobe: usize, n_cap: usize) -> PointCloudBody {
    let c1 = [-LOBE_OFFSET, 0.0, 0.0];
    let c2 = [LOBE_OFFSET, 0.0, 0.0];
    let pattern = fibonacci_sphere(n_per_lobe);
    let mut points = Vec::new();
    for s in &pattern {
        let r = 1.0 + crest_bump(*s);
        points.push([c1[0] + r * s[0], c1[1] + r * s[1], c1[2] + r * s[2], 0.0]);
    }
    for s in &pattern {
        points.push([c2[0] + s[0], c2[1] + s[1], c2[2] + s[2], 0.0]);
    }
    // Dense cap around the outer pole, exponential-map spiral.
    for (t1, t2) in sunflower_disk(n_cap, 0.8) {
        let rho = (t1 * t1 + t2 * t2).sqrt();
        let (axial, tang) = (rho.cos(), if rho > 1e-12 { rho.sin() / rho } else { 1.0 });
        let d = [-axial, tang * t1, tang * t2];
        let r = 1.0 + crest_bump(d);
        points.push([c1[0] + r * d[0], c1[1] + r * d[1], c1[2] + r * d[2], 0.0]);
    }
    let descriptor: Descriptor = Arc::new(move |x: &[f64; 4]| {
        let v1 = [x[0] - c1[0], x[1] - c1[1], x[2] - c1[2]];
        let r1 = len3(v1);
        let d1 = if r1 > 1e-9 {
            r1 - 1.0 - crest_bump([v1[0] / r1, v1[1] / r1, v1[2] / r1])
        } else {
            r1 - 1.0
        };
        let d2 = len3([x[0] - c2[0], x[1] - c2[1], x[2] - c2[2]]) - 1.0;
        d1.min(d2)
    });
    PointCloudBody::new(3, points).with_descriptor(descriptor)
}

/// Tetrahedron vertices of circumradius 2 inside `x₄ = 0`.
pub fn caltrop_centers() -> [[f64; 4]; 4] {
    let s = 2.0 / 3.0f64.sqrt();
    [
        [s, s, s, 0.0],
        [s, -s, -s, 0.0],
        [-s, s, -s, 0.0],
        [-s, -s, s, 0.0],
    ]
}

/// Four unit balls at the vertices of a regular tetrahedron in the
/// hyperplane `x₄ = 0` of four-space.  The only direction of the upper
/// hemisphere supporting all four balls at once is `+e₄`.
pub fn caltrop(n_per_ball: usize) -> PointCloudBody {
    let centers = caltrop_centers();
    let pattern = hopf_sphere3(n_per_ball);
    let mut points = Vec::with_capacity(4 * pattern.len());
    for c in centers {
        for s in &pattern {
            points.push([c[0] + s[0], c[1] + s[1], c[2] + s[2], c[3] + s[3]]);
        }
    }
    let descriptor: Descriptor = Arc::new(move |x: &[f64; 4]| {
        centers
            .iter()
            .map(|c| len4([x[0] - c[0], x[1] - c[1], x[2] - c[2], x[3] - c[3]]) - 1.0)
            .fold(f64::INFINITY, f64::min)
    });
    PointCloudBody::new(4, points).with_descriptor(descriptor)
}

/// Shared skeleton of the flat-bottomed bodies: the convex region
/// `{x₃ ≥ −1 + profile(ξ)} ∩ {|x| ≤ 1.1}` sampled as a bottom patch plus
/// the admissible part of the sphere.
fn bowl_body(
    n_sphere: usize,
    n_patch: usize,
    profile: impl Fn(f64, f64) -> f64 + Send + Sync + Copy + 'static,
) -> PointCloudBody {
    const BALL_SQ: f64 = 1.21;
    let mut points = Vec::new();
    for (xi1, xi2) in sunflower_disk(n_patch, 0.9) {
        let x3 = -1.0 + profile(xi1, xi2);
        if xi1 * xi1 + xi2 * xi2 + x3 * x3 < BALL_SQ {
            points.push([xi1, xi2, x3, 0.0]);
        }
    }
    for s in fibonacci_sphere(n_sphere) {
        let p = [1.1 * s[0], 1.1 * s[1], 1.1 * s[2], 0.0];
        if p[2] >= -1.0 + profile(p[0], p[1]) {
            points.push(p);
        }
    }
    let descriptor: Descriptor = Arc::new(move |x: &[f64; 4]| {
        let ball = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - BALL_SQ;
        let bottom = (-1.0 + profile(x[0], x[1])) - x[2];
        ball.max(bottom)
    });
    PointCloudBody::new(3, points).with_descriptor(descriptor)
}

/// Convex body whose sag below the supporting plane of `−e₃` is exactly
/// `ξ₁⁴ + ξ₂²`: one direction of quartic tangency.
pub fn quartic_flat(n_sphere: usize, n_patch: usize) -> PointCloudBody {
    bowl_body(n_sphere, n_patch, |xi1, xi2| xi1.powi(4) + xi2 * xi2)
}

/// Body with an exactly flat disk of radius 0.2 at the bottom: the support
/// of `−e₃` is degenerate beyond any finite tangency order.
pub fn flat_spot(n_sphere: usize, n_patch: usize) -> PointCloudBody {
    bowl_body(n_sphere, n_patch, |xi1, xi2| {
        let t = (xi1 * xi1 + xi2 * xi2 - 0.04).max(0.0);
        t * t
    })
}

/// Torus of revolution around `e₃` — a non-convex demo body.
pub fn torus(major: f64, minor: f64, n: usize) -> PointCloudBody {
    let mut points = Vec::with_capacity(n);
    for k in 0..n {
        let u = GOLDEN_ANGLE * k as f64;
        let v = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / n as f64;
        let ring = major + minor * v.cos();
        points.push([ring * u.cos(), ring * u.sin(), minor * v.sin(), 0.0]);
    }
    let descriptor: Descriptor = Arc::new(move |x: &[f64; 4]| {
        let ring = (x[0] * x[0] + x[1] * x[1]).sqrt() - major;
        ring * ring + x[2] * x[2] - minor * minor
    });
    PointCloudBody::new(3, points).with_descriptor(descriptor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_on_boundary(body: &PointCloudBody, tol: f64) {
        let g = body.descriptor.as_ref().unwrap();
        for p in &body.points {
            assert!(g(p).abs() <= tol, "point {p:?} off boundary: {}", g(p));
        }
    }

    #[test]
    fn clouds_sit_on_their_descriptor_zero_sets() {
        assert_on_boundary(&ellipsoid(1.3, 1.0, 0.8, 500), 1e-12);
        assert_on_boundary(&peanut(500), 1e-12);
        assert_on_boundary(&perturbed_peanut(500, 300), 1e-12);
        assert_on_boundary(&caltrop(400), 1e-12);
        assert_on_boundary(&quartic_flat(500, 300), 1e-12);
        assert_on_boundary(&flat_spot(500, 300), 1e-12);
        assert_on_boundary(&torus(2.0, 0.5, 500), 1e-12);
    }

    #[test]
    fn descriptor_signs_distinguish_inside_and_outside() {
        let bodies = [
            ellipsoid(1.3, 1.0, 0.8, 100),
            peanut(100),
            caltrop(100),
            quartic_flat(200, 100),
        ];
        let insiders = [
            [0.0, 0.0, 0.0, 0.0],
            [1.5, 0.0, 0.0, 0.0],
            caltrop_centers()[0],
            [0.0, 0.0, -0.9, 0.0],
        ];
        for (body, inside) in bodies.iter().zip(&insiders) {
            let g = body.descriptor.as_ref().unwrap();
            assert!(g(inside) < 0.0);
            assert!(g(&[9.0, 9.0, 9.0, 9.0]) > 0.0);
        }
    }

    #[test]
    fn peanut_lobes_use_one_pattern() {
        let body = peanut(400);
        for i in 0..400 {
            let (a, b) = (body.points[i], body.points[400 + i]);
            assert_eq!(b[0] - a[0], 3.0);
            assert_eq!(b[1], a[1]);
            assert_eq!(b[2], a[2]);
        }
    }

    #[test]
    fn caltrop_geometry_is_regular() {
        let centers = caltrop_centers();
        for c in centers {
            assert!((len4(c) - 2.0).abs() < 1e-12);
            assert_eq!(c[3], 0.0);
        }
        let edge = (32.0f64 / 3.0).sqrt();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = len4([
                    centers[i][0] - centers[j][0],
                    centers[i][1] - centers[j][1],
                    centers[i][2] - centers[j][2],
                    0.0,
                ]);
                assert!((d - edge).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn crest_bump_is_mirror_symmetric_and_localized() {
        let d = [-0.95, 0.28, 0.1];
        let n = len3(d);
        let d = [d[0] / n, d[1] / n, d[2] / n];
        let m = [d[0], -d[1], d[2]];
        assert_eq!(crest_bump(d), crest_bump(m));
        assert!(crest_bump(d) > 0.0);
        // Decays to noise by the equator and on the inner hemisphere.
        assert!(crest_bump([0.0, 1.0, 0.0]) < 2e-3);
        assert!(crest_bump([0.95, 0.28, 0.1]) < 1e-6);
        // Vanishes identically on the crest plane.
        assert_eq!(crest_bump([-0.9798, 0.0, 0.2]), 0.0);
    }

    #[test]
    fn quartic_flat_sag_is_exact() {
        let body = quartic_flat(500, 300);
        let g = body.descriptor.as_ref().unwrap();
        // Along the bottom graph the descriptor vanishes identically.
        for (xi1, xi2) in [(0.0, 0.0), (0.3, 0.1), (-0.5, 0.4)] {
            let x3 = -1.0 + xi1 * xi1 * xi1 * xi1 + xi2 * xi2;
            assert!(g(&[xi1, xi2, x3, 0.0]).abs() < 1e-15);
        }
        // The lowest boundary point is the origin of the patch.
        let (_, value) = body.support(&[0.0, 0.0, -1.0, 0.0]);
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_spot_plateau_is_flat() {
        let body = flat_spot(500, 1000);
        let plateau: Vec<_> = body
            .points
            .iter()
            .filter(|p| p[0] * p[0] + p[1] * p[1] < 0.035 && p[2] < 0.0)
            .collect();
        assert!(plateau.len() > 30, "{} plateau samples", plateau.len());
        for p in plateau {
            assert_eq!(p[2], -1.0);
        }
    }
}
