//! Local tangency order of a supported contact.
//!
//! Near a contact of the supporting hyperplane of direction `n`, the
//! boundary is the graph of the *sag* `f(ξ) ≥ 0` over the tangent chart —
//! the drop of the boundary below the hyperplane.  The tangency order is
//! read off the jet of `f`:
//!
//! * all sag Hessian eigenvalues commensurate → nondegenerate `A₁`;
//! * one eigenvalue collapses but the quartic term along its eigenvector
//!   survives → `A₃` (the sag is a one-parameter quartic well);
//! * quadratic and quartic both vanish → degenerate beyond the catalogue.
//!
//! Sag values come from bisecting the body descriptor along lines parallel
//! to `n`, so they are exact to bracket-width precision and support finite
//! differencing at small steps.

use super::{normalize, tangent_frame, PointCloudBody};
use nalgebra::DMatrix;
use serde::Serialize;

/// `λ_min/λ_max` below this marks a collapsed quadratic direction.
const RATIO_DEGENERATE: f64 = 1e-3;
/// Quartic coefficient above this confirms a quartic well.
const QUARTIC_MIN: f64 = 1e-6;
/// Largest eigenvalue below this means the contact is flat to quadratic
/// order in every direction.
const HESSIAN_FLOOR: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TangencyClass {
    A1,
    A3,
    Degenerate,
}

#[derive(Clone, Debug, Serialize)]
pub struct TangencyReport {
    pub class: TangencyClass,
    /// Boundary point the analysis was centred on.
    pub contact: [f64; 4],
    /// Sag Hessian eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// `|λ_min|/λ_max` (zero when the Hessian vanishes).  The magnitude
    /// matters: a chart centred between two contacts sits on a saddle where
    /// `λ_min < 0`, and only a genuine quartic transition drives it to zero.
    pub eigenvalue_ratio: f64,
    /// Height-gradient component along the softest eigendirection at the
    /// chart centre.  The Newton polish cannot control this direction, so
    /// it stays zero only when the supporting direction sits exactly on the
    /// coincidence locus; it grows linearly with any tilt across it.
    pub soft_gradient: f64,
    /// Fitted quartic coefficient along the collapsed direction, when the
    /// quadratic test was inconclusive.
    pub quartic_coeff: Option<f64>,
}

/// Tangent chart over a boundary point: heights along `n` are solved from
/// the descriptor by bisection.
struct Chart<'a> {
    body: &'a PointCloudBody,
    n: [f64; 4],
    center: [f64; 4],
    frame: Vec<[f64; 4]>,
    scale: f64,
}

impl<'a> Chart<'a> {
    fn point(&self, xi: &[f64], t: f64) -> [f64; 4] {
        let mut p = self.center;
        for (x, e) in xi.iter().zip(&self.frame) {
            for c in 0..4 {
                p[c] += x * e[c];
            }
        }
        for c in 0..4 {
            p[c] += t * self.n[c];
        }
        p
    }

    /// Height of the boundary above the chart plane at tangent offset `xi`
    /// (positive toward `n`).  `None` when no bracket exists.
    fn height(&self, xi: &[f64]) -> Option<f64> {
        let g = self.body.descriptor.as_ref()?;
        let eval = |t: f64| g(&self.point(xi, t));
        let mut t_hi = 0.02 * self.scale;
        while eval(t_hi) <= 0.0 {
            t_hi *= 2.0;
            if t_hi > 0.9 * self.scale {
                return None;
            }
        }
        let mut t_lo = -0.02 * self.scale;
        while eval(t_lo) >= 0.0 {
            t_lo *= 2.0;
            if t_lo < -1.5 * self.scale {
                return None;
            }
        }
        for _ in 0..90 {
            let mid = 0.5 * (t_lo + t_hi);
            if eval(mid) > 0.0 {
                t_hi = mid;
            } else {
                t_lo = mid;
            }
        }
        Some(0.5 * (t_lo + t_hi))
    }
}

/// Symmetric finite-difference gradient and Hessian of the height function.
fn height_jet(chart: &Chart, xi: &[f64], h: f64) -> Option<(Vec<f64>, DMatrix<f64>)> {
    let d = xi.len();
    let h0 = chart.height(xi)?;
    let shifted = |di: usize, si: f64, dj: usize, sj: f64| -> Option<f64> {
        let mut x = xi.to_vec();
        x[di] += si * h;
        x[dj] += sj * h;
        chart.height(&x)
    };
    let mut grad = vec![0.0; d];
    let mut hess = DMatrix::zeros(d, d);
    for i in 0..d {
        let (up, dn) = (shifted(i, 1.0, i, 0.0)?, shifted(i, -1.0, i, 0.0)?);
        grad[i] = (up - dn) / (2.0 * h);
        hess[(i, i)] = (up - 2.0 * h0 + dn) / (h * h);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let pp = shifted(i, 1.0, j, 1.0)?;
            let pm = shifted(i, 1.0, j, -1.0)?;
            let mp = shifted(i, -1.0, j, 1.0)?;
            let mm = shifted(i, -1.0, j, -1.0)?;
            let v = (pp - pm - mp + mm) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Some((grad, hess))
}

/// Classify the tangency of the body's boundary against the supporting
/// hyperplane of `direction`, starting from a contact estimate `seed`.
/// Needs a descriptor; returns `None` when the local boundary graph cannot
/// be resolved.
pub fn tangency_order(
    body: &PointCloudBody,
    direction: &[f64; 4],
    seed: &[f64; 4],
) -> Option<TangencyReport> {
    body.descriptor.as_ref()?;
    let n = normalize(direction);
    let scale = 0.5 * body.diameter();
    let mut chart = Chart {
        body,
        n,
        center: *seed,
        frame: tangent_frame(&n, body.dim),
        scale,
    };
    // Drop the seed onto the boundary along n.
    let t0 = chart.height(&vec![0.0; body.dim - 1])?;
    chart.center = chart.point(&vec![0.0; body.dim - 1], t0);

    // Newton polish toward the local height maximum, restricted to the
    // well-conditioned eigendirections so a collapsed (quartic) direction
    // cannot derail the step.
    let d = body.dim - 1;
    let h = 1e-3 * scale;
    let mut xi = vec![0.0; d];
    for _ in 0..6 {
        let (grad, hess) = height_jet(&chart, &xi, h)?;
        let sag = -hess;
        let eig = nalgebra::SymmetricEigen::new(sag.clone());
        let sigma_max = eig
            .eigenvalues
            .iter()
            .fold(0.0f64, |acc, &v| acc.max(v.abs()));
        if sigma_max < HESSIAN_FLOOR {
            break;
        }
        let mut step = vec![0.0; d];
        let mut moved = 0.0f64;
        for k in 0..d {
            let sigma = eig.eigenvalues[k];
            if sigma > (1e-2 * sigma_max).max(HESSIAN_FLOOR) {
                let mut proj = 0.0;
                for c in 0..d {
                    proj += grad[c] * eig.eigenvectors[(c, k)];
                }
                let amount = proj / sigma;
                for c in 0..d {
                    step[c] += amount * eig.eigenvectors[(c, k)];
                }
                moved += amount * amount;
            }
        }
        let norm = moved.sqrt();
        let cap = 0.05 * scale;
        if norm > cap {
            for s in &mut step {
                *s *= cap / norm;
            }
        }
        for c in 0..d {
            xi[c] += step[c];
        }
        if norm < 1e-12 * scale {
            break;
        }
    }

    // Final sag jet at the polished contact.
    let (grad, hess) = height_jet(&chart, &xi, h)?;
    let sag = -hess;
    let contact_height = chart.height(&xi)?;
    let contact = chart.point(&xi, contact_height);

    let eig = nalgebra::SymmetricEigen::new(sag.clone());
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let lambda_max = eigenvalues[0];
    let lambda_min = *eigenvalues.last().unwrap();
    let soft = order[d - 1];
    let vdir: Vec<f64> = (0..d).map(|c| eig.eigenvectors[(c, soft)]).collect();
    let soft_gradient = grad
        .iter()
        .zip(&vdir)
        .map(|(g, v)| g * v)
        .sum::<f64>()
        .abs();

    if lambda_max < HESSIAN_FLOOR {
        return Some(TangencyReport {
            class: TangencyClass::Degenerate,
            contact,
            eigenvalue_ratio: 0.0,
            soft_gradient,
            eigenvalues,
            quartic_coeff: None,
        });
    }
    let ratio = lambda_min.abs() / lambda_max;
    if ratio >= RATIO_DEGENERATE {
        return Some(TangencyReport {
            class: TangencyClass::A1,
            contact,
            eigenvalue_ratio: ratio,
            soft_gradient,
            eigenvalues,
            quartic_coeff: None,
        });
    }

    // Quartic probe along the collapsed eigendirection.
    let h4 = 0.05 * scale;
    let f0 = contact_height;
    let sample = |t: f64| -> Option<f64> {
        let x: Vec<f64> = xi.iter().zip(&vdir).map(|(a, v)| a + t * v).collect();
        Some(f0 - chart.height(&x)?)
    };
    let ts = [-h4, -0.5 * h4, 0.5 * h4, h4];
    let mut p = 0.0;
    let mut q = 0.0;
    let (mut s4, mut s6, mut s8) = (0.0, 0.0, 0.0);
    for t in ts {
        let f = sample(t)?;
        p += f * t * t;
        q += f * t.powi(4);
        s4 += t.powi(4);
        s6 += t.powi(6);
        s8 += t.powi(8);
    }
    let det = s4 * s8 - s6 * s6;
    let quartic = (s4 * q - s6 * p) / det;
    let class = if quartic > QUARTIC_MIN {
        TangencyClass::A3
    } else {
        TangencyClass::Degenerate
    };
    Some(TangencyReport {
        class,
        contact,
        eigenvalue_ratio: ratio,
        soft_gradient,
        eigenvalues,
        quartic_coeff: Some(quartic),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{caltrop, caltrop_centers, ellipsoid, flat_spot, peanut, quartic_flat};
    use super::*;

    #[test]
    fn ellipsoid_pole_is_nondegenerate() {
        let body = ellipsoid(1.3, 1.0, 0.8, 2000);
        let dir = [1.0, 0.0, 0.0, 0.0];
        let (seed, _) = body.support(&dir);
        let report = tangency_order(&body, &dir, &body.points[seed]).unwrap();
        assert_eq!(report.class, TangencyClass::A1);
        // Sag eigenvalues of the ellipsoid pole: a/c², a/b².
        assert!((report.eigenvalues[0] - 1.3 / 0.64).abs() < 5e-3);
        assert!((report.eigenvalues[1] - 1.3).abs() < 5e-3);
        assert!((report.contact[0] - 1.3).abs() < 1e-9);
        assert!(report.contact[1].abs() < 1e-6);
    }

    #[test]
    fn quartic_flat_bottom_is_a3() {
        let body = quartic_flat(2000, 1500);
        let dir = [0.0, 0.0, -1.0, 0.0];
        let (seed, _) = body.support(&dir);
        let report = tangency_order(&body, &dir, &body.points[seed]).unwrap();
        assert_eq!(report.class, TangencyClass::A3);
        assert!(report.eigenvalue_ratio < 1e-4, "{}", report.eigenvalue_ratio);
        let c4 = report.quartic_coeff.unwrap();
        assert!((c4 - 1.0).abs() < 1e-3, "quartic fit {c4}");
        // Soft direction is ξ₁, stiff is ξ₂ with sag coefficient 2.
        assert!((report.eigenvalues[0] - 2.0).abs() < 1e-3);
    }

    #[test]
    fn flat_spot_bottom_is_degenerate() {
        let body = flat_spot(2000, 1500);
        let dir = [0.0, 0.0, -1.0, 0.0];
        let (seed, _) = body.support(&dir);
        let report = tangency_order(&body, &dir, &body.points[seed]).unwrap();
        assert_eq!(report.class, TangencyClass::Degenerate);
        assert!(report.eigenvalues[0].abs() < 1e-7);
    }

    #[test]
    fn caltrop_ball_contact_is_a1_in_three_tangent_directions() {
        let body = caltrop(1500);
        let dir = [0.0, 0.0, 0.0, 1.0];
        let seed = {
            let c = caltrop_centers()[0];
            [c[0], c[1], c[2], 1.0]
        };
        let report = tangency_order(&body, &dir, &seed).unwrap();
        assert_eq!(report.class, TangencyClass::A1);
        assert_eq!(report.eigenvalues.len(), 3);
        for ev in &report.eigenvalues {
            assert!((ev - 1.0).abs() < 1e-4, "unit-ball sag eigenvalue {ev}");
        }
    }

    #[test]
    fn peanut_lobe_contact_is_a1() {
        let body = peanut(2000);
        let dir = normalize(&[0.0, 0.3, 0.95, 0.0]);
        let (seed, _) = body.support(&dir);
        let report = tangency_order(&body, &dir, &body.points[seed]).unwrap();
        assert_eq!(report.class, TangencyClass::A1);
        assert!(report.eigenvalue_ratio > 0.9);
    }
}
