//! The swallowtail body: membership, boundary parameterization, discriminant
//! and Euclidean projection.
//!
//! The body is
//!
//! ```text
//! V₃ = { (u, v, w) : τ⁴ + uτ² + vτ + w ≥ 0 for all τ },
//! ```
//!
//! the set of coefficient triples whose quartic stays nonnegative.  It is a
//! closed convex set (an intersection of half-spaces, one per τ) whose
//! boundary is the graph sheet `w = 3τ⁴ + uτ²`, `v = −4τ³ − 2uτ` over
//! `u ≥ −2τ²`, glued along the edge `{u = −2σ², v = 0, w = σ⁴}` where the
//! minimizing tangency doubles up at `±σ`.  Membership reduces to the exact
//! minimum of the quartic over its (closed-form) critical points.
//!
//! Projection is a hybrid.  Cutting planes localize: each violated tangency
//! `uτ² + vτ + w ≥ −τ⁴` is a half-space with inward normal `(τ², τ, 1)`
//! containing the body, and projecting onto the accumulated cuts (exactly,
//! through the dual nonnegative least-squares problem) gives trial points
//! whose distance lower-bounds the true one.  Stratified Newton then
//! finishes: a stationarity solve on the smooth sheet (2 unknowns), the
//! closed-form edge cubic `s³ + (2 − w)s + u = 0` in `s = σ²`, or the vertex
//! itself.  A polished candidate is accepted only when it certifies its own
//! optimality — it lies on the body and the displacement sits in the normal
//! cone spanned by its active tangencies — which for a convex body is the
//! full KKT condition, so an accepted foot is the global projection up to
//! the verification tolerances, independent of how it was found.

use crate::roots::{quartic_critical_points, quartic_min, quartic_value};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ProjectionError {
    #[error("cutting-plane projection did not converge within {cuts} cuts")]
    NonConvergence { cuts: usize },
}

/// A coefficient triple `(u, v, w)` of the monic depressed quartic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuarticPoint {
    pub u: f64,
    pub v: f64,
    pub w: f64,
}

impl QuarticPoint {
    pub fn new(u: f64, v: f64, w: f64) -> Self {
        QuarticPoint { u, v, w }
    }

    /// Global minimum of `τ⁴ + uτ² + vτ + w` and its minimizers.
    pub fn min_value(&self) -> (f64, Vec<f64>) {
        quartic_min(self.u, self.v, self.w)
    }

    /// Exact membership in the body: the quartic minimum is nonnegative.
    pub fn contains(&self) -> bool {
        self.min_value().0 >= 0.0
    }

    /// The boundary discriminant
    /// `32u³v² + 64u²w² + 144uv²w − 27v⁴ + 256w³`.
    pub fn discriminant(&self) -> f64 {
        let (u, v, w) = (self.u, self.v, self.w);
        32.0 * u.powi(3) * v * v + 64.0 * u * u * w * w + 144.0 * u * v * v * w
            - 27.0 * v.powi(4)
            + 256.0 * w.powi(3)
    }

    /// Minimizers of the quartic within a value slack `gap` of the minimum.
    /// Used to enumerate the active supporting tangencies of a boundary
    /// point, where near-coincident minima must both count.
    pub fn near_minimizers(&self, gap: f64) -> Vec<f64> {
        let crits = quartic_critical_points(self.u, self.v);
        let min = crits
            .iter()
            .map(|&t| quartic_value(self.u, self.v, self.w, t))
            .fold(f64::INFINITY, f64::min);
        crits
            .into_iter()
            .filter(|&t| quartic_value(self.u, self.v, self.w, t) <= min + gap)
            .collect()
    }
}

/// The graph chart of the boundary sheet: parameters `(τ, u)` with the
/// tangency location first.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundaryChart {
    pub tau: f64,
    pub u: f64,
}

impl BoundaryChart {
    pub fn new(tau: f64, u: f64) -> Self {
        BoundaryChart { tau, u }
    }

    /// The boundary point `(u, −4τ³ − 2uτ, 3τ⁴ + uτ²)`, where the quartic
    /// has a double root at `τ`.
    pub fn point(&self) -> [f64; 3] {
        let (t, u) = (self.tau, self.u);
        [u, -4.0 * t.powi(3) - 2.0 * u * t, 3.0 * t.powi(4) + u * t * t]
    }

    /// The tangency at `τ` is the global minimum exactly when `u ≥ −2τ²`;
    /// charts outside this range describe a non-supporting sheet.
    pub fn is_supporting(&self) -> bool {
        self.u >= -2.0 * self.tau * self.tau
    }

    /// Inward normal `(τ², τ, 1)` of the supporting half-space
    /// `uτ² + vτ + w ≥ −τ⁴`.
    pub fn inward_normal(&self) -> [f64; 3] {
        [self.tau * self.tau, self.tau, 1.0]
    }
}

/// Configuration of the cutting-plane projection.
#[derive(Clone, Debug)]
pub struct ProjectionConfig {
    /// Stop once the worst tangency violation at the trial point is below
    /// this; it bounds the distance error directly (see the module docs).
    pub violation_stop: f64,
    /// Cap on accumulated cutting planes.
    pub max_cuts: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            violation_stop: 1e-10,
            max_cuts: 200,
        }
    }
}

/// Result of projecting a point onto the body.
#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    /// Nearest point of the body.
    pub foot: [f64; 3],
    /// Euclidean distance from the query to the foot (0 inside).
    pub distance: f64,
    /// Tangency parameter of the supporting chart at the foot when the foot
    /// lies on the smooth sheet; `None` on the edge and at the vertex, where
    /// the normal cone is more than one ray wide.
    pub normal_tau: Option<f64>,
    /// All tangency locations active at the foot (loose slack): the
    /// generators of the supporting normal cone.
    pub active_taus: Vec<f64>,
    /// Number of cutting planes accumulated.
    pub cuts: usize,
}

impl Projection {
    /// Angle between the displacement `query − foot` and the normal cone
    /// spanned by the outward normals `−(τ², τ, 1)` of the active
    /// tangencies.  Zero (exactly) for interior queries.
    pub fn alignment_angle(&self, query: [f64; 3]) -> f64 {
        let d = [
            query[0] - self.foot[0],
            query[1] - self.foot[1],
            query[2] - self.foot[2],
        ];
        let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if dn == 0.0 || self.active_taus.is_empty() {
            return 0.0;
        }
        // Cone projection of d: min ‖d − Aλ‖ over λ ≥ 0, columns of A the
        // outward normals.
        let k = self.active_taus.len();
        let a = DMatrix::from_fn(3, k, |i, j| {
            let t = self.active_taus[j];
            -[t * t, t, 1.0][i]
        });
        let dv = DVector::from_row_slice(&d);
        let m = a.transpose() * &a;
        let rhs = a.transpose() * &dv;
        let lambda = nnls(&m, &rhs, 100);
        let proj = &a * lambda;
        let res = (&dv - proj).norm();
        (res / dn).clamp(0.0, 1.0).asin()
    }
}

/// Alignment tolerance (radians) under which a polished candidate foot is
/// accepted as KKT-certified; Newton lands many orders below this, so the
/// threshold cleanly separates converged strata from wrong guesses.
const POLISH_ALIGNMENT: f64 = 1e-8;

/// Euclidean projection of `(u, v, w)` onto the body.
///
/// Each round projects exactly onto the intersection of the accumulated
/// half-space cuts (via the dual nonnegative least-squares problem), then
/// tries to finish with the stratified Newton polish seeded by the
/// tangencies competing at the current trial point; a polished foot is
/// returned only when it passes the KKT certificate (membership plus
/// normal-cone alignment), which for a convex body implies it is the global
/// projection.  Failing that, the most-violated tangency of the trial is
/// added as a new cut.  Since every cut contains the body, each trial
/// distance lower-bounds the true one, and termination of the pure
/// cutting-plane loop at violation `ε` yields a foot within `ε` of the body.
pub fn project_to_v3(pt: [f64; 3], cfg: &ProjectionConfig) -> Result<Projection, ProjectionError> {
    let query = QuarticPoint::new(pt[0], pt[1], pt[2]);
    let scale = 1.0 + pt.iter().map(|c| c.abs()).fold(0.0, f64::max);
    if query.min_value().0 >= -cfg.violation_stop {
        return Ok(Projection {
            foot: pt,
            distance: 0.0,
            normal_tau: None,
            active_taus: Vec::new(),
            cuts: 0,
        });
    }

    // Accumulated cuts: rows n_j = (τ², τ, 1), offsets c_j = −τ⁴, feasible
    // side n_j · x ≥ c_j.
    let mut normals: Vec<[f64; 3]> = Vec::new();
    let mut offsets: Vec<f64> = Vec::new();
    let mut x = pt;
    let mut trial_dist = 0.0;
    loop {
        let (min, _) = quartic_min(x[0], x[1], x[2]);
        if min >= -cfg.violation_stop {
            break;
        }

        // All tangencies competing at the current trial seed the polish;
        // the slack is generous on purpose — a bad seed just fails the
        // certificate.
        let seeds =
            QuarticPoint::new(x[0], x[1], x[2]).near_minimizers(min.abs() + 1e-9 * scale);
        let mut best: Option<Projection> = None;
        for foot in polish_candidates(pt, &seeds, trial_dist) {
            if QuarticPoint::new(foot[0], foot[1], foot[2]).min_value().0 < -cfg.violation_stop {
                continue;
            }
            let cand = finish(pt, foot, normals.len(), scale);
            if cand.alignment_angle(pt) <= POLISH_ALIGNMENT
                && best.as_ref().map_or(true, |b| cand.distance < b.distance)
            {
                best = Some(cand);
            }
        }
        if let Some(proj) = best {
            return Ok(proj);
        }

        if normals.len() >= cfg.max_cuts {
            return Err(ProjectionError::NonConvergence { cuts: normals.len() });
        }
        let tau = quartic_min(x[0], x[1], x[2]).1[0];
        normals.push([tau * tau, tau, 1.0]);
        offsets.push(-tau.powi(4));

        // x = pt + Aᵀλ with λ ≥ 0 minimizing ½λᵀAAᵀλ − λᵀ(c − A·pt).
        let k = normals.len();
        let a = DMatrix::from_fn(k, 3, |i, j| normals[i][j]);
        let rhs = DVector::from_fn(k, |i, _| {
            offsets[i] - (normals[i][0] * pt[0] + normals[i][1] * pt[1] + normals[i][2] * pt[2])
        });
        let m = &a * a.transpose();
        let lambda = nnls(&m, &rhs, 50 + 4 * k);
        let shift = a.transpose() * lambda;
        x = [pt[0] + shift[0], pt[1] + shift[1], pt[2] + shift[2]];
        let d = [pt[0] - x[0], pt[1] - x[1], pt[2] - x[2]];
        trial_dist = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    }

    Ok(finish(pt, x, normals.len(), scale))
}

/// Assemble the projection record for a settled foot: active tangencies,
/// chart parameter when the foot is smooth, distance.
fn finish(pt: [f64; 3], foot: [f64; 3], cuts: usize, scale: f64) -> Projection {
    let q = QuarticPoint::new(foot[0], foot[1], foot[2]);
    let active = q.near_minimizers(1e-7 * scale);
    // The foot is smooth when a single tangency is active and its curvature
    // q''(τ) = 12τ² + 2u is safely positive; otherwise the normal cone is
    // wider than a ray.
    let normal_tau = if active.len() == 1 {
        let t = active[0];
        if 12.0 * t * t + 2.0 * foot[0] > 1e-6 * scale {
            Some(t)
        } else {
            None
        }
    } else {
        None
    };
    let d = [pt[0] - foot[0], pt[1] - foot[1], pt[2] - foot[2]];
    Projection {
        foot,
        distance: (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt(),
        normal_tau,
        active_taus: active,
        cuts,
    }
}

/// Candidate feet from every boundary stratum.
///
/// Smooth sheet: Newton on the stationarity system in `(τ, λ)` from each
/// seed tangency, keeping solutions with `λ ≥ 0` on a supporting chart.
/// Edge: `(−2σ², 0, σ⁴)` is stationary iff `s = σ²` solves the depressed
/// cubic `s³ + (2 − w)s + u = 0`, closed form.  Vertex: the origin, whose
/// normal cone is the single ray `−e_w`.  All candidates face the KKT
/// certificate afterwards, so over-generation is harmless.
fn polish_candidates(pt: [f64; 3], seeds: &[f64], lambda0: f64) -> Vec<[f64; 3]> {
    let mut cands: Vec<[f64; 3]> = Vec::new();
    for &tau0 in seeds {
        if let Some((tau, lambda)) = smooth_newton(pt, tau0, lambda0) {
            let u = pt[0] + lambda * tau * tau;
            if lambda >= -1e-12 && u >= -2.0 * tau * tau - 1e-9 * (1.0 + u.abs()) {
                cands.push(BoundaryChart::new(tau, u).point());
            }
        }
    }
    for s in crate::roots::depressed_cubic_roots(2.0 - pt[2], pt[0]) {
        if s > 0.0 {
            cands.push([-2.0 * s, 0.0, s * s]);
        }
    }
    cands.push([0.0, 0.0, 0.0]);
    cands
}

/// Newton on the smooth-sheet stationarity system: the foot is
/// `pt + λ(τ², τ, 1)` and simultaneously the chart point of tangency `τ`,
/// which after eliminating `u = pt_u + λτ²` leaves two equations,
///
/// ```text
/// E₁ = −4τ³ − 2·pt_u·τ − 2λτ³ − λτ − pt_v,
/// E₂ = 3τ⁴ + pt_u·τ² + λ(τ⁴ − 1) − pt_w.
/// ```
fn smooth_newton(pt: [f64; 3], tau0: f64, lambda0: f64) -> Option<(f64, f64)> {
    let (mut tau, mut lambda) = (tau0, lambda0);
    for _ in 0..60 {
        let t2 = tau * tau;
        let t3 = t2 * tau;
        let t4 = t2 * t2;
        let e1 = -4.0 * t3 - 2.0 * pt[0] * tau - 2.0 * lambda * t3 - lambda * tau - pt[1];
        let e2 = 3.0 * t4 + pt[0] * t2 + lambda * (t4 - 1.0) - pt[2];
        let j11 = -12.0 * t2 - 2.0 * pt[0] - 6.0 * lambda * t2 - lambda;
        let j12 = -2.0 * t3 - tau;
        let j21 = 12.0 * t3 + 2.0 * pt[0] * tau + 4.0 * lambda * t3;
        let j22 = t4 - 1.0;
        let det = j11 * j22 - j12 * j21;
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        let dtau = -(e1 * j22 - e2 * j12) / det;
        let dlambda = -(j11 * e2 - j21 * e1) / det;
        tau += dtau;
        lambda += dlambda;
        if !tau.is_finite() || !lambda.is_finite() || tau.abs() > 1e6 {
            return None;
        }
        if dtau.abs() + dlambda.abs() <= 1e-14 * (1.0 + tau.abs() + lambda.abs()) {
            return Some((tau, lambda));
        }
    }
    None
}

/// Envelope of the swallowtail normal form:
/// `t − ½·dist²((x, y, z), V₃)`.
pub fn envelope_v3(x: f64, y: f64, z: f64, t: f64) -> Result<f64, ProjectionError> {
    let proj = project_to_v3([x, y, z], &ProjectionConfig::default())?;
    Ok(t - 0.5 * proj.distance * proj.distance)
}

/// Lawson–Hanson nonnegative least squares for `min ½λᵀMλ − λᵀrhs`, `λ ≥ 0`,
/// with `M` symmetric positive semidefinite.  Singular passive blocks (from
/// near-parallel cuts) are handled by the SVD pseudo-inverse.
fn nnls(m: &DMatrix<f64>, rhs: &DVector<f64>, max_iter: usize) -> DVector<f64> {
    let n = rhs.len();
    let mut lambda = DVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = 1.0 + rhs.amax();
    let tol = 1e-12 * scale;

    for _ in 0..max_iter {
        // w = rhs − Mλ is the negative gradient; optimal when w ≤ tol on the
        // zero set.
        let w = rhs - m * &lambda;
        let mut best: Option<(usize, f64)> = None;
        for i in 0..n {
            if !passive[i] && w[i] > tol {
                if best.map_or(true, |(_, bw)| w[i] > bw) {
                    best = Some((i, w[i]));
                }
            }
        }
        let Some((enter, _)) = best else { break };
        passive[enter] = true;

        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let k = idx.len();
            let mp = DMatrix::from_fn(k, k, |i, j| m[(idx[i], idx[j])]);
            let rp = DVector::from_fn(k, |i, _| rhs[idx[i]]);
            let svd = mp.svd(true, true);
            let z = svd.solve(&rp, 1e-12 * scale).unwrap_or_else(|_| DVector::zeros(k));

            if z.iter().all(|&v| v > 0.0) {
                let mut next = DVector::zeros(n);
                for (ii, &i) in idx.iter().enumerate() {
                    next[i] = z[ii];
                }
                lambda = next;
                break;
            }
            // Step toward z until the first passive coordinate hits zero.
            let mut alpha = 1.0f64;
            for (ii, &i) in idx.iter().enumerate() {
                if z[ii] <= 0.0 {
                    let li = lambda[i];
                    if li - z[ii] > 0.0 {
                        alpha = alpha.min(li / (li - z[ii]));
                    } else {
                        alpha = 0.0;
                    }
                }
            }
            for (ii, &i) in idx.iter().enumerate() {
                lambda[i] += alpha * (z[ii] - lambda[i]);
                if z[ii] <= 0.0 && lambda[i] <= tol.max(0.0) {
                    lambda[i] = 0.0;
                    passive[i] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn membership_spot_checks() {
        // (τ² − 1)²: on the boundary, contained.
        assert!(QuarticPoint::new(-2.0, 0.0, 1.0).contains());
        // τ⁴ + 1: interior.
        assert!(QuarticPoint::new(0.0, 0.0, 1.0).contains());
        // τ⁴ − 1: outside, minimum −1 at τ = 0.
        let q = QuarticPoint::new(0.0, 0.0, -1.0);
        assert!(!q.contains());
        let (min, args) = q.min_value();
        assert_abs_diff_eq!(min, -1.0, epsilon = 1e-15);
        assert_eq!(args, vec![0.0]);
    }

    #[test]
    fn discriminant_vanishes_on_shifted_double_root_chart() {
        // The discriminant equals the classical quartic discriminant
        // evaluated at (u, v, w + u²/4), so it vanishes exactly where the
        // shifted quartic acquires a repeated root: on the chart
        // w = 3τ⁴ + uτ² − u²/4.
        for &(tau, u) in &[(1.0f64, -1.0), (0.5, 0.3), (-0.8, 2.0), (1.3, -4.0)] {
            let v = -4.0 * tau.powi(3) - 2.0 * u * tau;
            let w = 3.0 * tau.powi(4) + u * tau * tau - 0.25 * u * u;
            let q = QuarticPoint::new(u, v, w);
            let scale = (1.0 + u.abs() + v.abs() + w.abs()).powi(4);
            assert!(q.discriminant().abs() < 1e-9 * scale, "disc {}", q.discriminant());
        }
        // Frozen values off that chart: nonzero even on the boundary of the
        // body itself.
        assert_abs_diff_eq!(
            QuarticPoint::new(-2.0, 0.0, 1.0).discriminant(),
            512.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(QuarticPoint::new(0.0, 0.0, 1.0).discriminant(), 256.0, epsilon = 1e-12);
    }

    #[test]
    fn boundary_chart_lies_on_boundary() {
        for &(tau, u) in &[(1.0, -1.0), (0.5, 0.3), (-0.8, 2.0), (0.0, 1.0)] {
            let ch = BoundaryChart::new(tau, u);
            assert!(ch.is_supporting() == (u >= -2.0 * tau * tau));
            let [pu, pv, pw] = ch.point();
            let q = QuarticPoint::new(pu, pv, pw);
            // Double root at τ: value and derivative vanish there.
            assert_abs_diff_eq!(quartic_value(pu, pv, pw, tau), 0.0, epsilon = 1e-12);
            if ch.is_supporting() {
                let (min, _) = q.min_value();
                assert_abs_diff_eq!(min, 0.0, epsilon = 1e-12);
            }
        }
        // Non-supporting chart: the tangency is a local, not global, minimum.
        let ch = BoundaryChart::new(0.1, -3.0);
        assert!(!ch.is_supporting());
        let [pu, pv, pw] = ch.point();
        assert!(QuarticPoint::new(pu, pv, pw).min_value().0 < -1e-3);
    }

    #[test]
    fn projection_of_edge_facing_point() {
        // (−3, 0, 0) projects onto the edge point (−2, 0, 1) at distance √2;
        // the displacement lies strictly inside the two-ray normal cone, so
        // no single chart parameter is reported.
        let proj = project_to_v3([-3.0, 0.0, 0.0], &ProjectionConfig::default()).unwrap();
        assert_abs_diff_eq!(proj.foot[0], -2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(proj.foot[1], 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(proj.foot[2], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(proj.distance, 2.0f64.sqrt(), epsilon = 1e-9);
        assert!(proj.normal_tau.is_none());
        assert_eq!(proj.active_taus.len(), 2);
        assert!(proj.alignment_angle([-3.0, 0.0, 0.0]) < 1e-6);
    }

    #[test]
    fn projection_of_smooth_facing_point() {
        // (1, 0, −1): the body lies in {w ≥ 0} and contains (1, 0, 0), which
        // is the unique nearest point; the tangency there is τ = 0 with
        // curvature 2u = 2 > 0, a smooth foot.
        let proj = project_to_v3([1.0, 0.0, -1.0], &ProjectionConfig::default()).unwrap();
        assert_abs_diff_eq!(proj.foot[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(proj.foot[1], 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(proj.foot[2], 0.0, epsilon = 1e-8);
        assert_abs_diff_eq!(proj.distance, 1.0, epsilon = 1e-9);
        let tau = proj.normal_tau.expect("smooth foot has a chart parameter");
        assert_abs_diff_eq!(tau, 0.0, epsilon = 1e-6);
        assert!(proj.alignment_angle([1.0, 0.0, -1.0]) < 1e-6);
    }

    #[test]
    fn projection_of_vertex_facing_point() {
        // (0, 0, −1) projects onto the vertex (0, 0, 0): the active tangency
        // is degenerate (q'' = 0), so no chart parameter is reported.
        let proj = project_to_v3([0.0, 0.0, -1.0], &ProjectionConfig::default()).unwrap();
        for c in proj.foot {
            assert_abs_diff_eq!(c, 0.0, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(proj.distance, 1.0, epsilon = 1e-8);
        assert!(proj.normal_tau.is_none());
    }

    #[test]
    fn interior_points_project_to_themselves() {
        let proj = project_to_v3([1.0, 1.0, 5.0], &ProjectionConfig::default()).unwrap();
        assert_eq!(proj.distance, 0.0);
        assert_eq!(proj.cuts, 0);
        assert_eq!(proj.alignment_angle([1.0, 1.0, 5.0]), 0.0);
    }

    #[test]
    fn envelope_matches_distance() {
        // dist²((−3,0,0), V₃) = 2, so the envelope at t is t − 1.
        let e = envelope_v3(-3.0, 0.0, 0.0, 0.25).unwrap();
        assert_abs_diff_eq!(e, -0.75, epsilon = 1e-9);
        // Inside the body the envelope is t itself.
        assert_abs_diff_eq!(envelope_v3(0.0, 0.0, 2.0, 0.5).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn projected_feet_are_members_within_stop_tolerance() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let cfg = ProjectionConfig::default();
        for _ in 0..300 {
            let pt = [
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
                rng.gen_range(-4.0..4.0),
            ];
            let proj = project_to_v3(pt, &cfg).unwrap();
            let q = QuarticPoint::new(proj.foot[0], proj.foot[1], proj.foot[2]);
            assert!(q.min_value().0 >= -cfg.violation_stop * 1.0001);
            if proj.distance > 1e-6 {
                assert!(
                    proj.alignment_angle(pt) < 1e-6,
                    "misaligned displacement at {pt:?}"
                );
            }
        }
    }
}
