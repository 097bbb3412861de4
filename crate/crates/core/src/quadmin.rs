//! Minimization of convex quadratics over the nonnegative orthant and the
//! envelope functions built from it.
//!
//! The boundary of a generic convex hull is locally the zero set of one of a
//! short list of envelope functions, each an orthant-constrained minimum
//!
//! ```text
//! E(x, t) = min { ½ κᵀQκ + κ·b(x) + t : κ ≥ 0 },   dim κ ∈ {1, 2, 3},
//! ```
//!
//! with `Q` positive definite and unit diagonal.  Because the objective is an
//! exact quadratic, the minimum is found by enumerating the `2^dim` faces of
//! the orthant, solving the equality-constrained system on each face and
//! keeping the best feasible KKT point — no iteration and no tolerance
//! tuning.  The same machinery evaluates the two-dimensional envelope in its
//! second guise, as `t − ½·dist²` to an angle in an oblique metric, which the
//! tests use as an independent cross-check.
//!
//! Cubic and higher graded corrections (the `R3` germs) are handled by a
//! per-face Newton iteration seeded at the quadratic-part solution, with a
//! coarse grid as fallback when every face fails.

use crate::genfam::GeneratingFamily;
use crate::poly::Poly;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadMinError {
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("dimension {0} outside the supported range 1..=3")]
    DimensionMismatch(usize),
    #[error("mixing coefficient alpha = {0} outside (-1, 1)")]
    AlphaOutOfRange(f64),
    #[error("minimization failed to converge ({0})")]
    NonConvergence(&'static str),
}

/// `min ½ pᵀQp + pᵀb + c0` over `p ≥ 0`, `dim ∈ {1,2,3}`, `Q` symmetric
/// positive definite with unit diagonal.
#[derive(Clone, Debug)]
pub struct OrthantQp {
    dim: usize,
    q: [[f64; 3]; 3],
    b: [f64; 3],
    c0: f64,
}

/// Exact solution of an [`OrthantQp`].
#[derive(Clone, Debug, Serialize)]
pub struct QpSolution {
    /// Componentwise minimizer (length = problem dimension).
    pub minimizer: Vec<f64>,
    /// Minimum value, including the constant offset.
    pub value: f64,
    /// 0-based indices of the coordinates pinned at zero.
    pub active_set: Vec<usize>,
    /// max over coordinates of primal violation, dual violation and
    /// complementarity defect.
    pub kkt_residual: f64,
}

impl OrthantQp {
    /// General constructor. `q` must be symmetric with unit diagonal and
    /// positive definite on its leading `dim × dim` block.
    pub fn new(dim: usize, q: [[f64; 3]; 3], b: [f64; 3], c0: f64) -> Result<Self, QuadMinError> {
        if !(1..=3).contains(&dim) {
            return Err(QuadMinError::DimensionMismatch(dim));
        }
        for i in 0..dim {
            if q[i][i] != 1.0 {
                return Err(QuadMinError::NotPositiveDefinite);
            }
            for j in 0..dim {
                if q[i][j] != q[j][i] {
                    return Err(QuadMinError::NotPositiveDefinite);
                }
            }
        }
        // Leading principal minors.
        if dim >= 2 && 1.0 - q[0][1] * q[0][1] <= 0.0 {
            return Err(QuadMinError::NotPositiveDefinite);
        }
        if dim >= 3 && det3(&q) <= 0.0 {
            return Err(QuadMinError::NotPositiveDefinite);
        }
        Ok(OrthantQp { dim, q, b, c0 })
    }

    pub fn dim1(b: f64, c0: f64) -> Self {
        OrthantQp::new(1, ident3(), [b, 0.0, 0.0], c0).expect("1x1 identity is definite")
    }

    pub fn dim2(a: f64, b: [f64; 2], c0: f64) -> Result<Self, QuadMinError> {
        let mut q = ident3();
        q[0][1] = a;
        q[1][0] = a;
        OrthantQp::new(2, q, [b[0], b[1], 0.0], c0)
    }

    pub fn dim3(a: f64, b: f64, c: f64, rhs: [f64; 3], c0: f64) -> Result<Self, QuadMinError> {
        let mut q = ident3();
        q[0][1] = a;
        q[1][0] = a;
        q[0][2] = b;
        q[2][0] = b;
        q[1][2] = c;
        q[2][1] = c;
        OrthantQp::new(3, q, rhs, c0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Objective value at an arbitrary point.
    pub fn objective(&self, p: &[f64]) -> f64 {
        let mut acc = self.c0;
        for i in 0..self.dim {
            acc += p[i] * self.b[i] + 0.5 * p[i] * p[i];
            for j in (i + 1)..self.dim {
                acc += self.q[i][j] * p[i] * p[j];
            }
        }
        acc
    }

    /// Exact minimization by enumeration of the `2^dim` orthant faces.
    ///
    /// On each face the free coordinates solve the linear stationarity
    /// system; the best primal-feasible candidate is the global minimum by
    /// convexity.
    pub fn solve(&self) -> QpSolution {
        let dim = self.dim;
        let mut best: Option<(f64, [f64; 3])> = None;
        for mask in 0..(1u32 << dim) {
            // Bit set => coordinate active (pinned to zero).
            let free: Vec<usize> = (0..dim).filter(|i| mask & (1 << i) == 0).collect();
            let mut p = [0.0f64; 3];
            if !free.is_empty() {
                let k = free.len();
                let mut a = [[0.0f64; 3]; 3];
                let mut rhs = [0.0f64; 3];
                for (ii, &i) in free.iter().enumerate() {
                    rhs[ii] = -self.b[i];
                    for (jj, &j) in free.iter().enumerate() {
                        a[ii][jj] = self.q[i][j];
                    }
                }
                let sol = match solve_small(&a, &rhs, k) {
                    Some(s) => s,
                    None => continue,
                };
                let mut feasible = true;
                for (ii, &i) in free.iter().enumerate() {
                    if sol[ii] < -1e-12 {
                        feasible = false;
                        break;
                    }
                    p[i] = sol[ii].max(0.0);
                }
                if !feasible {
                    continue;
                }
            }
            let val = self.objective(&p);
            if best.map_or(true, |(bv, _)| val < bv) {
                best = Some((val, p));
            }
        }
        let (value, p) = best.expect("the all-active face is always feasible");
        let minimizer: Vec<f64> = p[..dim].to_vec();
        let active_set: Vec<usize> = (0..dim).filter(|&i| minimizer[i] == 0.0).collect();
        QpSolution {
            kkt_residual: self.kkt_residual(&minimizer),
            minimizer,
            value,
            active_set,
        }
    }

    /// KKT residual of a candidate: primal feasibility, dual feasibility and
    /// complementarity, all as one max.
    pub fn kkt_residual(&self, p: &[f64]) -> f64 {
        let mut res: f64 = 0.0;
        for i in 0..self.dim {
            let mut g = self.b[i];
            for j in 0..self.dim {
                g += self.q[i][j] * p[j];
            }
            res = res.max(-p[i]).max(-g).max((p[i] * g).abs());
        }
        res.max(0.0)
    }
}

fn ident3() -> [[f64; 3]; 3] {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Solve the leading `k × k` block of `a·x = rhs` by Cramer's rule.
/// Returns `None` when the block is (numerically) singular.
fn solve_small(a: &[[f64; 3]; 3], rhs: &[f64; 3], k: usize) -> Option<[f64; 3]> {
    match k {
        1 => {
            if a[0][0].abs() < 1e-300 {
                None
            } else {
                Some([rhs[0] / a[0][0], 0.0, 0.0])
            }
        }
        2 => {
            let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
            if det.abs() < 1e-14 {
                return None;
            }
            Some([
                (rhs[0] * a[1][1] - a[0][1] * rhs[1]) / det,
                (a[0][0] * rhs[1] - rhs[0] * a[1][0]) / det,
                0.0,
            ])
        }
        3 => {
            let det = det3(a);
            if det.abs() < 1e-14 {
                return None;
            }
            let mut out = [0.0f64; 3];
            for col in 0..3 {
                let mut m = *a;
                for row in 0..3 {
                    m[row][col] = rhs[row];
                }
                out[col] = det3(&m) / det;
            }
            Some(out)
        }
        _ => None,
    }
}

/// Mixing-coefficient profile `α(z)` for the two-dimensional envelope.  The
/// base value must satisfy `|a| < 1`; evaluation re-checks the profile value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaProfile {
    /// `α(z) = a`
    Constant { a: f64 },
    /// `α(z) = a + z`
    Linear { a: f64 },
    /// `α(z) = a + z²`
    PlusQuadratic { a: f64 },
    /// `α(z) = a − z²`
    MinusQuadratic { a: f64 },
}

impl AlphaProfile {
    pub fn new(self) -> Result<Self, QuadMinError> {
        let a = self.base();
        if a.abs() < 1.0 {
            Ok(self)
        } else {
            Err(QuadMinError::AlphaOutOfRange(a))
        }
    }

    pub fn base(&self) -> f64 {
        match *self {
            AlphaProfile::Constant { a }
            | AlphaProfile::Linear { a }
            | AlphaProfile::PlusQuadratic { a }
            | AlphaProfile::MinusQuadratic { a } => a,
        }
    }

    pub fn alpha(&self, z: f64) -> f64 {
        match *self {
            AlphaProfile::Constant { a } => a,
            AlphaProfile::Linear { a } => a + z,
            AlphaProfile::PlusQuadratic { a } => a + z * z,
            AlphaProfile::MinusQuadratic { a } => a - z * z,
        }
    }

    /// `α(z)` with the domain check `|α| < 1`.
    pub fn checked_alpha(&self, z: f64) -> Result<f64, QuadMinError> {
        let a = self.alpha(z);
        if a.abs() < 1.0 {
            Ok(a)
        } else {
            Err(QuadMinError::AlphaOutOfRange(a))
        }
    }

    /// Opening angle `β(z) = π − arccos α(z)` of the angle sector in the
    /// oblique metric; always in `(0, π)` on the valid domain.
    pub fn beta(&self, z: f64) -> Result<f64, QuadMinError> {
        Ok(std::f64::consts::PI - self.checked_alpha(z)?.acos())
    }
}

/// Envelope of the first nontrivial normal form:
/// `min over p ≥ 0 of (p²/2 + px) + t = t − ½·min(x,0)²`.
pub fn envelope_r1(x: f64, _y: f64, _z: f64, t: f64) -> f64 {
    t - 0.5 * x.min(0.0) * x.min(0.0)
}

/// Envelope of the two-dimensional normal form
/// `min over p,q ≥ 0 of (p²+q²)/2 + α(z)pq + px + qy + t`.
pub fn envelope_r2(x: f64, y: f64, z: f64, t: f64, profile: &AlphaProfile) -> Result<f64, QuadMinError> {
    let alpha = profile.checked_alpha(z)?;
    Ok(OrthantQp::dim2(alpha, [x, y], t)?.solve().value)
}

/// Squared distance from `(x, y)` to the angle `{x ≥ 0, y ≥ 0}` in the
/// metric `ds² = (dx² − 2α dx dy + dy²)/(1 − α²)`.
///
/// This is the independent second route to the `R2` envelope: the envelope
/// equals `t − ½·dist²`.  Candidates are the two edge feet (valid when their
/// foot parameter is nonnegative) and the vertex; interior points give 0.
pub fn r2_metric_distance_sq(x: f64, y: f64, alpha: f64) -> Result<f64, QuadMinError> {
    if alpha.abs() >= 1.0 {
        return Err(QuadMinError::AlphaOutOfRange(alpha));
    }
    if x >= 0.0 && y >= 0.0 {
        return Ok(0.0);
    }
    let mut best = (x * x - 2.0 * alpha * x * y + y * y) / (1.0 - alpha * alpha); // vertex
    if x - alpha * y >= 0.0 {
        // Foot on the x ≥ 0 edge: the oblique perpendicular drop has squared
        // length y² exactly.
        best = best.min(y * y);
    }
    if y - alpha * x >= 0.0 {
        best = best.min(x * x);
    }
    Ok(best)
}

/// Configuration for the graded (cubic-and-higher) envelope evaluation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct R3Config {
    /// Half-width of the fiber evaluation box `[0, box_half_width]³` used by
    /// divergence guards and the grid fallback.
    pub box_half_width: f64,
    /// Grid nodes per axis in the fallback lattice.
    pub grid_n: usize,
    /// Newton iteration cap per orthant face.
    pub newton_max_iter: usize,
    /// Newton stop: step max-norm below this.
    pub step_tol: f64,
    /// Acceptance tolerance on the KKT residual of a face candidate.
    pub kkt_tol: f64,
}

impl Default for R3Config {
    fn default() -> Self {
        R3Config {
            box_half_width: 3.0,
            grid_n: 25,
            newton_max_iter: 50,
            step_tol: 1e-12,
            kkt_tol: 1e-10,
        }
    }
}

/// Result of an `envelope_r3` evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct R3Solution {
    pub value: f64,
    pub minimizer: [f64; 3],
    /// 0-based fiber coordinates pinned at zero.
    pub active_set: Vec<usize>,
    pub kkt_residual: f64,
}

/// Envelope of a full three-fiber generating family:
/// `min over (p,q,r) ≥ 0 of F(p, q, r, x, y, z, t)`.
///
/// Every orthant face is searched by Newton iteration seeded at the
/// quadratic-part solution; if no face produces a valid KKT point the
/// evaluation falls back to a coarse lattice and polishes from there.
pub fn envelope_r3(
    x: f64,
    y: f64,
    z: f64,
    t: f64,
    family: &GeneratingFamily,
    config: &R3Config,
) -> Result<R3Solution, QuadMinError> {
    let f = family
        .poly()
        .eval_partial(&[None, None, None, Some(x), Some(y), Some(z), Some(t)]);
    let grad: Vec<Poly> = (0..3).map(|i| f.diff(i)).collect();
    let hess: Vec<Vec<Poly>> = (0..3)
        .map(|i| (0..3).map(|j| grad[i].diff(j)).collect())
        .collect();

    // Quadratic-part seed: the family's fiber-quadratic form (unit diagonal
    // by the family invariants) with the restricted linear coefficients.
    let (a, b, c) = family.fiber_quadratic_offdiag()?;
    let lin = [
        f.coeff([1, 0, 0, 0, 0, 0, 0]),
        f.coeff([0, 1, 0, 0, 0, 0, 0]),
        f.coeff([0, 0, 1, 0, 0, 0, 0]),
    ];
    let seed = OrthantQp::dim3(a, b, c, lin, 0.0)?.solve();
    let seed_p = [seed.minimizer[0], seed.minimizer[1], seed.minimizer[2]];

    let mut best: Option<R3Solution> = None;
    for mask in 0..8u32 {
        if let Some(c) = newton_on_face(&f, &grad, &hess, mask, &seed_p, config) {
            if best.as_ref().map_or(true, |b| c.value < b.value) {
                best = Some(c);
            }
        }
    }
    if best.is_none() {
        // Coarse lattice over the evaluation box, then polish.
        let n = config.grid_n.max(2);
        let h = config.box_half_width / (n - 1) as f64;
        let mut grid_best = (f64::INFINITY, [0.0f64; 3]);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let p = [i as f64 * h, j as f64 * h, k as f64 * h];
                    let val = f.eval(&[p[0], p[1], p[2], 0.0, 0.0, 0.0, 0.0]);
                    if val < grid_best.0 {
                        grid_best = (val, p);
                    }
                }
            }
        }
        for mask in 0..8u32 {
            if let Some(c) = newton_on_face(&f, &grad, &hess, mask, &grid_best.1, config) {
                if best.as_ref().map_or(true, |b| c.value < b.value) {
                    best = Some(c);
                }
            }
        }
    }
    best.ok_or(QuadMinError::NonConvergence(
        "no orthant face produced a valid KKT point",
    ))
}

fn newton_on_face(
    f: &Poly,
    grad: &[Poly],
    hess: &[Vec<Poly>],
    mask: u32,
    seed: &[f64; 3],
    config: &R3Config,
) -> Option<R3Solution> {
    let free: Vec<usize> = (0..3).filter(|i| mask & (1 << i) == 0).collect();
    let mut p = [0.0f64; 3];
    for &i in &free {
        p[i] = seed[i].max(0.0);
    }
    let at = |p: &[f64; 3]| [p[0], p[1], p[2], 0.0, 0.0, 0.0, 0.0];

    if !free.is_empty() {
        let mut converged = false;
        for _ in 0..config.newton_max_iter {
            let x7 = at(&p);
            let k = free.len();
            let mut h = [[0.0f64; 3]; 3];
            let mut g = [0.0f64; 3];
            for (ii, &i) in free.iter().enumerate() {
                g[ii] = -grad[i].eval(&x7);
                for (jj, &j) in free.iter().enumerate() {
                    h[ii][jj] = hess[i][j].eval(&x7);
                }
            }
            // Require a positive definite face Hessian; a saddle or maximum
            // face cannot carry the minimum of a coercive restriction.
            if !is_pd(&h, k) {
                return None;
            }
            let step = solve_small(&h, &g, k)?;
            let mut sup = 0.0f64;
            for (ii, &i) in free.iter().enumerate() {
                p[i] += step[ii];
                sup = sup.max(step[ii].abs());
            }
            if p.iter().any(|&c| c.abs() > 10.0 * config.box_half_width) {
                return None;
            }
            if sup < config.step_tol {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
    }

    // Validate the KKT conditions on this face.
    let x7 = at(&p);
    let mut kkt: f64 = 0.0;
    for i in 0..3 {
        let gi = grad[i].eval(&x7);
        if mask & (1 << i) == 0 {
            if p[i] < -1e-10 {
                return None;
            }
            p[i] = p[i].max(0.0);
            kkt = kkt.max(gi.abs().min((p[i] * gi).abs()));
        } else if gi < -config.kkt_tol {
            return None;
        }
    }
    let x7 = at(&p);
    for i in 0..3 {
        let gi = grad[i].eval(&x7);
        kkt = kkt.max(-p[i]).max(-gi).max((p[i] * gi).abs());
    }
    if kkt > config.kkt_tol.max(1e-8) {
        return None;
    }
    Some(R3Solution {
        value: f.eval(&x7),
        minimizer: p,
        active_set: (0..3).filter(|&i| p[i] == 0.0).collect(),
        kkt_residual: kkt,
    })
}

fn is_pd(h: &[[f64; 3]; 3], k: usize) -> bool {
    match k {
        0 => true,
        1 => h[0][0] > 0.0,
        2 => h[0][0] > 0.0 && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0,
        3 => {
            h[0][0] > 0.0
                && h[0][0] * h[1][1] - h[0][1] * h[1][0] > 0.0
                && det3(h) > 0.0
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn qp_all_positive_b_pins_origin() {
        let qp = OrthantQp::dim3(0.2, -0.1, 0.3, [1.0, 1.0, 1.0], 5.0).unwrap();
        let sol = qp.solve();
        assert_eq!(sol.minimizer, vec![0.0, 0.0, 0.0]);
        assert_eq!(sol.value, 5.0);
        assert_eq!(sol.active_set, vec![0, 1, 2]);
        assert!(sol.kkt_residual <= 1e-12);
    }

    #[test]
    fn qp_interior_solution_dim2() {
        // a = 0.5, b = (-1,-1): interior minimizer (2/3, 2/3), value -2/3.
        let qp = OrthantQp::dim2(0.5, [-1.0, -1.0], 0.0).unwrap();
        let sol = qp.solve();
        assert_abs_diff_eq!(sol.minimizer[0], 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.minimizer[1], 2.0 / 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sol.value, -2.0 / 3.0, epsilon = 1e-14);
        assert!(sol.active_set.is_empty());
    }

    #[test]
    fn qp_rejects_bad_forms() {
        assert_eq!(
            OrthantQp::dim2(1.0, [0.0, 0.0], 0.0).unwrap_err(),
            QuadMinError::NotPositiveDefinite
        );
        let mut q = ident3();
        q[0][0] = 2.0;
        assert_eq!(
            OrthantQp::new(2, q, [0.0; 3], 0.0).unwrap_err(),
            QuadMinError::NotPositiveDefinite
        );
        assert_eq!(
            OrthantQp::new(0, ident3(), [0.0; 3], 0.0).unwrap_err(),
            QuadMinError::DimensionMismatch(0)
        );
    }

    #[test]
    fn envelope_r1_closed_form() {
        assert_eq!(envelope_r1(2.0, 0.0, 0.0, 1.0), 1.0);
        assert_eq!(envelope_r1(-2.0, 0.0, 0.0, 0.0), -2.0);
        // Equals the 1-dimensional orthant minimum.
        for &(x, t) in &[(-1.5, 0.3), (0.7, -0.2), (0.0, 0.0)] {
            let qp = OrthantQp::dim1(x, t);
            assert_abs_diff_eq!(envelope_r1(x, 9.0, 9.0, t), qp.solve().value, epsilon = 1e-15);
        }
    }

    #[test]
    fn envelope_r2_matches_metric_distance() {
        let profile = AlphaProfile::Constant { a: 0.0 }.new().unwrap();
        // α = 0 at (x,y) = (-1,-1): value t − 1.
        let v = envelope_r2(-1.0, -1.0, 0.0, 0.0, &profile).unwrap();
        assert_abs_diff_eq!(v, -1.0, epsilon = 1e-14);
        let d2 = r2_metric_distance_sq(-1.0, -1.0, 0.0).unwrap();
        assert_abs_diff_eq!(v, -0.5 * d2, epsilon = 1e-14);

        // Oblique case: α = 0.3 at (-1, 0.2): foot on the y-edge, value -1/2.
        let p3 = AlphaProfile::Constant { a: 0.3 }.new().unwrap();
        let v = envelope_r2(-1.0, 0.2, 0.0, 0.0, &p3).unwrap();
        assert_abs_diff_eq!(v, -0.5, epsilon = 1e-14);
        let d2 = r2_metric_distance_sq(-1.0, 0.2, 0.3).unwrap();
        assert_abs_diff_eq!(d2, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn alpha_profile_domain() {
        assert!(matches!(
            AlphaProfile::Constant { a: 1.0 }.new(),
            Err(QuadMinError::AlphaOutOfRange(_))
        ));
        let lin = AlphaProfile::Linear { a: 0.5 }.new().unwrap();
        assert_eq!(lin.alpha(0.2), 0.7);
        assert!(lin.checked_alpha(0.6).is_err());
        // β stays in (0, π) and hits π/2 at α = 0.
        let c0 = AlphaProfile::Constant { a: 0.0 };
        assert_abs_diff_eq!(c0.beta(0.0).unwrap(), std::f64::consts::FRAC_PI_2, epsilon = 1e-15);
        for &a in &[-0.99, -0.5, 0.0, 0.5, 0.99] {
            let b = AlphaProfile::Constant { a }.beta(0.0).unwrap();
            assert!(b > 0.0 && b < std::f64::consts::PI);
        }
    }

    #[test]
    fn envelope_r3_decoupled_quadratic() {
        // Pure quadratic family, a=b=c=0, base (-1,-1,-1,0): three decoupled
        // one-dimensional minimizations of p²/2 − p, each contributing −1/2.
        let fam = GeneratingFamily::theorem_item4(0.0, 0.0, 0.0, &Poly::zero()).unwrap();
        let sol = envelope_r3(-1.0, -1.0, -1.0, 0.0, &fam, &R3Config::default()).unwrap();
        assert_abs_diff_eq!(sol.value, -1.5, epsilon = 1e-12);
        for i in 0..3 {
            assert_abs_diff_eq!(sol.minimizer[i], 1.0, epsilon = 1e-10);
        }
        assert!(sol.kkt_residual <= 1e-10);
    }

    #[test]
    fn envelope_r3_agrees_with_qp_on_quadratic_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let cfg = R3Config::default();
        for _ in 0..200 {
            let a: f64 = rng.gen_range(-0.4..0.4);
            let b: f64 = rng.gen_range(-0.4..0.4);
            let c: f64 = rng.gen_range(-0.4..0.4);
            let fam = match GeneratingFamily::theorem_item4(a, b, c, &Poly::zero()) {
                Ok(f) => f,
                Err(_) => continue,
            };
            let x: f64 = rng.gen_range(-1.0..1.0);
            let y: f64 = rng.gen_range(-1.0..1.0);
            let z: f64 = rng.gen_range(-1.0..1.0);
            let t: f64 = rng.gen_range(-1.0..1.0);
            let newton = envelope_r3(x, y, z, t, &fam, &cfg).unwrap();
            let qp = OrthantQp::dim3(a, b, c, [x, y, z], t).unwrap().solve();
            assert_abs_diff_eq!(newton.value, qp.value, epsilon = 1e-9);
        }
    }
}
