//! Strata tables, parametrizations, membership tests, and tangency checks
//! for the model varieties.
//!
//! Every stratum used here is three-dimensional (three parameters), and each
//! parametrization is written together with its analytic tangent frame so the
//! Legendre property — the contact form annihilates every tangent direction —
//! can be checked exactly rather than by finite differences.

use super::phi3;
use super::{ContactElement, LegendreError, Variety};
use crate::roots::quartic_min;

/// Descriptor for one stratum of a model variety.
#[derive(Clone, Debug)]
pub struct StratumInfo {
    pub index: usize,
    pub param_names: [&'static str; 3],
    pub description: String,
}

/// A parametrized point of one stratum, carrying the ambient element.
#[derive(Clone, Copy, Debug)]
pub struct StratumPoint {
    pub variety: Variety,
    pub stratum_index: usize,
    pub params: [f64; 3],
    pub element: ContactElement,
}

impl StratumPoint {
    /// Analytic tangent vectors of the parametrization at this point, one per
    /// parameter, ordered like the coordinates `(p,q,r,u,v,w,s)`.
    pub fn tangents(&self) -> [[f64; 7]; 3] {
        embed(self.variety, self.stratum_index, &self.params)
            .expect("stratum point was validated on construction")
            .1
    }
}

const FIBER_NAMES: [&str; 3] = ["p", "q", "r"];
const BASE_NAMES: [&str; 3] = ["u", "v", "w"];

fn cone_level(variety: Variety) -> Option<usize> {
    match variety {
        Variety::R0 => Some(0),
        Variety::R1 => Some(1),
        Variety::R2 => Some(2),
        Variety::R3 => Some(3),
        _ => None,
    }
}

/// Strata table of a model variety.  `R̃_l` has `2^l` strata indexed by the
/// bits of the stratum number, highest bit on the `(p,u)` pair; the printed
/// four strata of `R̃₂` appear in order as indices `0..4`.
pub fn strata(variety: Variety) -> Vec<StratumInfo> {
    if let Some(l) = cone_level(variety) {
        return (0..1usize << l)
            .map(|mask| {
                let mut names = [""; 3];
                let mut parts = Vec::new();
                for i in 0..3 {
                    if i < l {
                        if (mask >> (l - 1 - i)) & 1 == 0 {
                            names[i] = BASE_NAMES[i];
                            parts.push(format!("{}=0, {}>=0", FIBER_NAMES[i], BASE_NAMES[i]));
                        } else {
                            names[i] = FIBER_NAMES[i];
                            parts.push(format!("{}=0, {}>=0", BASE_NAMES[i], FIBER_NAMES[i]));
                        }
                    } else {
                        names[i] = BASE_NAMES[i];
                        parts.push(format!("{}=0, {} free", FIBER_NAMES[i], BASE_NAMES[i]));
                    }
                }
                parts.push("s=0".to_string());
                StratumInfo {
                    index: mask,
                    param_names: names,
                    description: parts.join("; "),
                }
            })
            .collect();
    }
    match variety {
        Variety::V3tilde => vec![
            StratumInfo {
                index: 0,
                param_names: ["tau", "u", "w_excess"],
                description: "zero section over the swallowtail body: p=q=r=s=0, \
                              quartic min >= 0 (u >= -2 tau^2, w_excess >= 0)"
                    .into(),
            },
            StratumInfo {
                index: 1,
                param_names: ["tau", "u", "r"],
                description: "conormal of the smooth boundary: p=r tau^2, q=r tau, r>=0, \
                              v=-4tau^3-2u tau, w=3tau^4+u tau^2 (u >= -2 tau^2), s=0"
                    .into(),
            },
            StratumInfo {
                index: 2,
                param_names: ["tau", "q", "r"],
                description: "normal cone over the cuspidal edge: p=r tau^2, |q|<=r|tau|, \
                              r>=0, u=-2tau^2, v=0, w=tau^4, s=0"
                    .into(),
            },
        ],
        Variety::V3bar => vec![
            StratumInfo {
                index: 0,
                param_names: ["u", "v", "w"],
                description: "Legendre plane p=q=r=s=0".into(),
            },
            StratumInfo {
                index: 1,
                param_names: ["tau", "u", "r"],
                description: "shifted boundary chart: p=r tau^2 + r u/2, q=r tau, \
                              v=-4tau^3-2u tau, w=3tau^4+u tau^2-u^2/4, s=0 (all params free)"
                    .into(),
            },
            StratumInfo {
                index: 2,
                param_names: ["q", "r", "u"],
                description: "Legendre plane p=v=w=s=0".into(),
            },
        ],
        Variety::Phi3 => vec![
            StratumInfo {
                index: 0,
                param_names: ["tau", "l1", "l2"],
                description: "zero-fiber branch: p=q=r=s=0, w=-tau^4-l1 tau^2-l2 tau".into(),
            },
            StratumInfo {
                index: 1,
                param_names: ["tau", "l1", "l3"],
                description: "folded branch: p=-g tau^2, q=-g tau, r=-g, v=-4tau^3-2 l1 tau, \
                              s=g^2/2 with g=-3tau^4-l1 tau^2+l3"
                    .into(),
            },
        ],
        _ => unreachable!("cone varieties handled above"),
    }
}

/// Embedding and tangent frame of one stratum; `None` for an unknown index.
/// Inequality constraints are not enforced here — `parametrize` does that.
#[allow(clippy::type_complexity)]
fn embed(
    variety: Variety,
    index: usize,
    params: &[f64; 3],
) -> Option<(ContactElement, [[f64; 7]; 3])> {
    let [a, b, c] = *params;
    let mut coords = [0.0; 7];
    let mut tangents = [[0.0; 7]; 3];
    if let Some(l) = cone_level(variety) {
        if index >= 1usize << l {
            return None;
        }
        for i in 0..3 {
            let slot = if i < l && (index >> (l - 1 - i)) & 1 == 1 {
                i
            } else {
                3 + i
            };
            coords[slot] = params[i];
            tangents[i][slot] = 1.0;
        }
        return Some((ContactElement::from_coords(coords), tangents));
    }
    match (variety, index) {
        (Variety::V3tilde, 0) => {
            let (tau, u, excess) = (a, b, c);
            coords = [
                0.0,
                0.0,
                0.0,
                u,
                -4.0 * tau.powi(3) - 2.0 * u * tau,
                3.0 * tau.powi(4) + u * tau * tau + excess,
                0.0,
            ];
            tangents[0] = [
                0.0,
                0.0,
                0.0,
                0.0,
                -12.0 * tau * tau - 2.0 * u,
                12.0 * tau.powi(3) + 2.0 * u * tau,
                0.0,
            ];
            tangents[1] = [0.0, 0.0, 0.0, 1.0, -2.0 * tau, tau * tau, 0.0];
            tangents[2] = [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0];
        }
        (Variety::V3tilde, 1) => {
            let (tau, u, r) = (a, b, c);
            coords = [
                r * tau * tau,
                r * tau,
                r,
                u,
                -4.0 * tau.powi(3) - 2.0 * u * tau,
                3.0 * tau.powi(4) + u * tau * tau,
                0.0,
            ];
            tangents[0] = [
                2.0 * r * tau,
                r,
                0.0,
                0.0,
                -12.0 * tau * tau - 2.0 * u,
                12.0 * tau.powi(3) + 2.0 * u * tau,
                0.0,
            ];
            tangents[1] = [0.0, 0.0, 0.0, 1.0, -2.0 * tau, tau * tau, 0.0];
            tangents[2] = [tau * tau, tau, 1.0, 0.0, 0.0, 0.0, 0.0];
        }
        (Variety::V3tilde, 2) => {
            let (tau, q, r) = (a, b, c);
            coords = [
                r * tau * tau,
                q,
                r,
                -2.0 * tau * tau,
                0.0,
                tau.powi(4),
                0.0,
            ];
            tangents[0] = [
                2.0 * r * tau,
                0.0,
                0.0,
                -4.0 * tau,
                0.0,
                4.0 * tau.powi(3),
                0.0,
            ];
            tangents[1] = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
            tangents[2] = [tau * tau, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        }
        (Variety::V3bar, 0) => {
            coords[3] = a;
            coords[4] = b;
            coords[5] = c;
            tangents[0][3] = 1.0;
            tangents[1][4] = 1.0;
            tangents[2][5] = 1.0;
        }
        (Variety::V3bar, 1) => {
            let (tau, u, r) = (a, b, c);
            coords = [
                r * tau * tau + r * u / 2.0,
                r * tau,
                r,
                u,
                -4.0 * tau.powi(3) - 2.0 * u * tau,
                3.0 * tau.powi(4) + u * tau * tau - u * u / 4.0,
                0.0,
            ];
            tangents[0] = [
                2.0 * r * tau,
                r,
                0.0,
                0.0,
                -12.0 * tau * tau - 2.0 * u,
                12.0 * tau.powi(3) + 2.0 * u * tau,
                0.0,
            ];
            tangents[1] = [
                r / 2.0,
                0.0,
                0.0,
                1.0,
                -2.0 * tau,
                tau * tau - u / 2.0,
                0.0,
            ];
            tangents[2] = [tau * tau + u / 2.0, tau, 1.0, 0.0, 0.0, 0.0, 0.0];
        }
        (Variety::V3bar, 2) => {
            coords[1] = a;
            coords[2] = b;
            coords[3] = c;
            tangents[0][1] = 1.0;
            tangents[1][2] = 1.0;
            tangents[2][3] = 1.0;
        }
        (Variety::Phi3, 0) => {
            let pt = phi3::phi3_branch_a(a, b, c);
            coords = pt.coords();
            let tau = a;
            tangents[0] = [
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
                -4.0 * tau.powi(3) - 2.0 * b * tau - c,
                0.0,
            ];
            tangents[1] = [0.0, 0.0, 0.0, 1.0, 0.0, -tau * tau, 0.0];
            tangents[2] = [0.0, 0.0, 0.0, 0.0, 1.0, -tau, 0.0];
        }
        (Variety::Phi3, 1) => {
            let pt = phi3::phi3_branch_b(a, b, c);
            coords = pt.coords();
            let (tau, l1) = (a, b);
            let g = -pt.r;
            let dg_dtau = -12.0 * tau.powi(3) - 2.0 * l1 * tau;
            tangents[0] = [
                -dg_dtau * tau * tau - 2.0 * g * tau,
                -dg_dtau * tau - g,
                -dg_dtau,
                0.0,
                -12.0 * tau * tau - 2.0 * l1,
                0.0,
                g * dg_dtau,
            ];
            tangents[1] = [tau.powi(4), tau.powi(3), tau * tau, 1.0, -2.0 * tau, 0.0, -g * tau * tau];
            tangents[2] = [-tau * tau, -tau, -1.0, 0.0, 0.0, 1.0, g];
        }
        _ => return None,
    }
    Some((ContactElement::from_coords(coords), tangents))
}

fn reject(
    variety: Variety,
    stratum: usize,
    detail: &'static str,
) -> Result<StratumPoint, LegendreError> {
    Err(LegendreError::ParamOutOfRange {
        variety: variety.name(),
        stratum,
        detail,
    })
}

/// Build the ambient element of one stratum point, validating the stratum's
/// inequality constraints on the parameters.
pub fn parametrize(
    variety: Variety,
    index: usize,
    params: &[f64; 3],
) -> Result<StratumPoint, LegendreError> {
    if let Some(l) = cone_level(variety) {
        if index < 1usize << l {
            for (i, &value) in params.iter().enumerate().take(l) {
                if value < 0.0 {
                    return reject(variety, index, "cone parameters must be nonnegative");
                }
                let _ = i;
            }
        }
    }
    match (variety, index) {
        (Variety::V3tilde, 0) | (Variety::V3tilde, 1) => {
            let (tau, u) = (params[0], params[1]);
            if u < -2.0 * tau * tau {
                return reject(variety, index, "need u >= -2 tau^2 on the boundary chart");
            }
            if params[2] < 0.0 {
                let detail = if index == 0 {
                    "need w_excess >= 0 inside the body"
                } else {
                    "need r >= 0 on the conormal"
                };
                return reject(variety, index, detail);
            }
        }
        (Variety::V3tilde, 2) => {
            let (tau, q, r) = (params[0], params[1], params[2]);
            if r < 0.0 {
                return reject(variety, index, "need r >= 0 in the normal cone");
            }
            if q.abs() > r * tau.abs() {
                return reject(variety, index, "need |q| <= r |tau| in the normal cone");
            }
        }
        _ => {}
    }
    match embed(variety, index, params) {
        Some((element, _)) => Ok(StratumPoint {
            variety,
            stratum_index: index,
            params: *params,
            element,
        }),
        None => Err(LegendreError::UnknownStratum {
            variety: variety.name(),
            stratum: index,
        }),
    }
}

/// Index of the lowest-numbered stratum containing `element` to tolerance
/// `tol`, or `None`.
pub fn membership(variety: Variety, element: &ContactElement, tol: f64) -> Option<usize> {
    let e = element;
    if let Some(l) = cone_level(variety) {
        if e.s.abs() > tol {
            return None;
        }
        let fibers = [e.p, e.q, e.r];
        let bases = [e.u, e.v, e.w];
        'mask: for mask in 0..1usize << l {
            for i in 0..3 {
                if i < l {
                    if (mask >> (l - 1 - i)) & 1 == 0 {
                        if fibers[i].abs() > tol || bases[i] < -tol {
                            continue 'mask;
                        }
                    } else if bases[i].abs() > tol || fibers[i] < -tol {
                        continue 'mask;
                    }
                } else if fibers[i].abs() > tol {
                    continue 'mask;
                }
            }
            return Some(mask);
        }
        return None;
    }
    match variety {
        Variety::V3tilde => {
            if e.s.abs() > tol {
                return None;
            }
            if e.p.abs() <= tol && e.q.abs() <= tol && e.r.abs() <= tol {
                let (min_value, _) = quartic_min(e.u, e.v, e.w);
                if min_value >= -tol {
                    return Some(0);
                }
            }
            if e.r > tol {
                let tau = e.q / e.r;
                let fit = (e.p - e.r * tau * tau).abs().max(
                    (e.v + 4.0 * tau.powi(3) + 2.0 * e.u * tau)
                        .abs()
                        .max((e.w - 3.0 * tau.powi(4) - e.u * tau * tau).abs()),
                );
                if fit <= tol && e.u >= -2.0 * tau * tau - tol {
                    return Some(1);
                }
            }
            if e.r >= -tol && e.u <= tol {
                let tau = (-e.u.min(0.0) / 2.0).sqrt();
                let fit = e
                    .v
                    .abs()
                    .max((e.w - tau.powi(4)).abs())
                    .max((e.p - e.r * tau * tau).abs());
                if fit <= tol && e.q.abs() <= e.r * tau + tol {
                    return Some(2);
                }
            }
            None
        }
        Variety::V3bar => {
            if e.s.abs() > tol {
                return None;
            }
            if e.p.abs() <= tol && e.q.abs() <= tol && e.r.abs() <= tol {
                return Some(0);
            }
            if e.r.abs() > tol {
                let tau = e.q / e.r;
                let fit = (e.p - e.r * tau * tau - e.r * e.u / 2.0)
                    .abs()
                    .max((e.v + 4.0 * tau.powi(3) + 2.0 * e.u * tau).abs())
                    .max((e.w - 3.0 * tau.powi(4) - e.u * tau * tau + e.u * e.u / 4.0).abs());
                if fit <= tol {
                    return Some(1);
                }
            }
            if e.p.abs() <= tol && e.v.abs() <= tol && e.w.abs() <= tol {
                return Some(2);
            }
            None
        }
        Variety::Phi3 => phi3::phi3_membership(e, tol),
        _ => unreachable!("cone varieties handled above"),
    }
}

/// Largest absolute value of the contact form on the analytic tangent frame
/// at one stratum point — zero (to rounding) exactly when the stratum is
/// Legendre at that point.
pub fn contact_tangency(
    variety: Variety,
    index: usize,
    params: &[f64; 3],
) -> Result<f64, LegendreError> {
    let point = parametrize(variety, index, params)?;
    Ok(point
        .tangents()
        .iter()
        .map(|t| point.element.contact_pairing(t).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cone_strata_counts_are_powers_of_two() {
        assert_eq!(strata(Variety::R0).len(), 1);
        assert_eq!(strata(Variety::R1).len(), 2);
        assert_eq!(strata(Variety::R2).len(), 4);
        assert_eq!(strata(Variety::R3).len(), 8);
        assert_eq!(strata(Variety::V3tilde).len(), 3);
        assert_eq!(strata(Variety::V3bar).len(), 3);
        assert_eq!(strata(Variety::Phi3).len(), 2);
    }

    #[test]
    fn printed_cone_pair_strata_order() {
        // The four strata of the doubled cone pair, in printed order: the
        // high bit switches the (p,u) pair, the low bit the (q,v) pair.
        let s0 = parametrize(Variety::R2, 0, &[1.0, 2.0, 3.0]).unwrap().element;
        assert_eq!(s0.coords(), [0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 0.0]);
        let s1 = parametrize(Variety::R2, 1, &[1.0, 2.0, 3.0]).unwrap().element;
        assert_eq!(s1.coords(), [0.0, 2.0, 0.0, 1.0, 0.0, 3.0, 0.0]);
        let s2 = parametrize(Variety::R2, 2, &[1.0, 2.0, 3.0]).unwrap().element;
        assert_eq!(s2.coords(), [1.0, 0.0, 0.0, 0.0, 2.0, 3.0, 0.0]);
        let s3 = parametrize(Variety::R2, 3, &[1.0, 2.0, 3.0]).unwrap().element;
        assert_eq!(s3.coords(), [1.0, 2.0, 0.0, 0.0, 0.0, 3.0, 0.0]);
    }

    #[test]
    fn cone_parametrize_rejects_negative_cone_params() {
        assert!(parametrize(Variety::R2, 1, &[-0.5, 1.0, 0.0]).is_err());
        // Third coordinate pair of R2 is free, negative is fine.
        assert!(parametrize(Variety::R2, 1, &[0.5, 1.0, -4.0]).is_ok());
        assert!(matches!(
            parametrize(Variety::R1, 5, &[0.0; 3]),
            Err(LegendreError::UnknownStratum { .. })
        ));
    }

    #[test]
    fn swallowtail_conormal_lies_over_boundary_chart() {
        let pt = parametrize(Variety::V3tilde, 1, &[0.7, -0.3, 1.4]).unwrap();
        let e = pt.element;
        // Base point solves the quartic with a double root at tau.
        let val = crate::roots::quartic_value(e.u, e.v, e.w, 0.7);
        assert!(val.abs() < 1e-12);
        let deriv = 4.0 * 0.7f64.powi(3) + 2.0 * e.u * 0.7 + e.v;
        assert!(deriv.abs() < 1e-12);
        // Fiber is the outward conormal ray.
        assert!((e.p - 1.4 * 0.49).abs() < 1e-15);
        assert!((e.q - 1.4 * 0.7).abs() < 1e-15);
    }

    #[test]
    fn parametrize_membership_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let cases: Vec<(Variety, usize)> = [
            (Variety::R0, 1),
            (Variety::R1, 2),
            (Variety::R2, 4),
            (Variety::R3, 8),
            (Variety::V3tilde, 3),
            (Variety::V3bar, 3),
            (Variety::Phi3, 2),
        ]
        .iter()
        .flat_map(|&(v, n)| (0..n).map(move |i| (v, i)))
        .collect();
        for (variety, index) in cases {
            for _ in 0..50 {
                let raw: [f64; 3] = [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ];
                let params = admissible_params(variety, index, raw);
                let point = parametrize(variety, index, &params).unwrap();
                let found = membership(variety, &point.element, 1e-12);
                assert!(
                    found.is_some(),
                    "{:?} stratum {index} params {params:?} not recognized",
                    variety
                );
                assert!(
                    found.unwrap() <= index,
                    "{:?}: expected stratum at most {index}, got {found:?}",
                    variety
                );
            }
        }
    }

    /// Clamp raw samples into the stratum's admissible parameter range.
    fn admissible_params(variety: Variety, index: usize, raw: [f64; 3]) -> [f64; 3] {
        let mut p = raw;
        match (variety, index) {
            (Variety::R0, _) | (Variety::R1, _) | (Variety::R2, _) | (Variety::R3, _) => {
                let l = match variety {
                    Variety::R0 => 0,
                    Variety::R1 => 1,
                    Variety::R2 => 2,
                    _ => 3,
                };
                for q in p.iter_mut().take(l) {
                    *q = q.abs();
                }
            }
            (Variety::V3tilde, 0) | (Variety::V3tilde, 1) => {
                p[1] = p[1].max(-2.0 * p[0] * p[0]);
                p[2] = p[2].abs();
            }
            (Variety::V3tilde, 2) => {
                p[2] = p[2].abs();
                let cap = p[2] * p[0].abs();
                p[1] = p[1].clamp(-cap, cap);
            }
            _ => {}
        }
        p
    }

    #[test]
    fn membership_rejects_off_variety_points() {
        let off = ContactElement::from_coords([0.3, 0.1, 0.2, 0.5, -0.4, 0.7, 0.0]);
        for variety in [
            Variety::R1,
            Variety::R2,
            Variety::R3,
            Variety::V3tilde,
            Variety::V3bar,
        ] {
            assert_eq!(membership(variety, &off, 1e-9), None, "{variety:?}");
        }
        let lifted = ContactElement::from_coords([0.0, 0.0, 0.0, 0.5, -0.4, 0.7, 0.3]);
        assert_eq!(membership(Variety::V3tilde, &lifted, 1e-9), None);
    }

    #[test]
    fn membership_picks_lowest_index() {
        // The origin of the base with zero fiber sits in every cone stratum's
        // closure; the reported stratum must be the first.
        let origin = ContactElement::ORIGIN;
        assert_eq!(membership(Variety::R2, &origin, 1e-12), Some(0));
        assert_eq!(membership(Variety::V3tilde, &origin, 1e-12), Some(0));
        assert_eq!(membership(Variety::V3bar, &origin, 1e-12), Some(0));
    }

    #[test]
    fn swallowtail_interior_is_stratum_zero_only() {
        // u=1,v=0,w=1 has positive quartic minimum: inside the body.
        let inner = ContactElement::from_coords([0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(membership(Variety::V3tilde, &inner, 1e-12), Some(0));
        // u=0,v=0,w=-1 has negative minimum: outside, not in the variety
        // unless a fiber direction matches (it cannot with zero fiber).
        let outer = ContactElement::from_coords([0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0]);
        assert_eq!(membership(Variety::V3tilde, &outer, 1e-12), None);
    }

    #[test]
    fn edge_cone_membership_canonicalizes_tau() {
        // tau=0.9 edge point with an interior cone direction.
        let pt = parametrize(Variety::V3tilde, 2, &[0.9, 0.3, 1.1]).unwrap();
        assert_eq!(membership(Variety::V3tilde, &pt.element, 1e-12), Some(2));
        // Negative tau parametrizes the same stratum (mirror normal cone).
        let mirror = parametrize(Variety::V3tilde, 2, &[-0.9, -0.3, 1.1]).unwrap();
        assert_eq!(membership(Variety::V3tilde, &mirror.element, 1e-12), Some(2));
    }

    #[test]
    fn contact_tangency_vanishes_on_all_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let table: Vec<(Variety, usize)> = [
            (Variety::R1, 2),
            (Variety::R2, 4),
            (Variety::R3, 8),
            (Variety::V3tilde, 3),
            (Variety::V3bar, 3),
            (Variety::Phi3, 2),
        ]
        .iter()
        .flat_map(|&(v, n)| (0..n).map(move |i| (v, i)))
        .collect();
        for (variety, index) in table {
            for _ in 0..40 {
                let raw: [f64; 3] = [
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                    rng.gen_range(-1.5..1.5),
                ];
                let params = admissible_params(variety, index, raw);
                let worst = contact_tangency(variety, index, &params).unwrap();
                assert!(
                    worst <= 1e-10,
                    "{:?} stratum {index}: pairing {worst:e} at {params:?}",
                    variety
                );
            }
        }
    }

    #[test]
    fn shifted_chart_differs_from_conormal_chart() {
        // Same (tau,u,r): the conormal chart and the shifted algebraic chart
        // disagree in p and w by exactly ru/2 and u^2/4.
        let a = parametrize(Variety::V3tilde, 1, &[1.0, 1.0, 2.0]).unwrap().element;
        let b = parametrize(Variety::V3bar, 1, &[1.0, 1.0, 2.0]).unwrap().element;
        assert!((b.p - a.p - 2.0 * 1.0 / 2.0).abs() < 1e-15);
        assert!((a.w - b.w - 0.25).abs() < 1e-15);
        assert_eq!(a.q, b.q);
    }
}
