//! The pair-singularity chart and its substitution onto the doubled cone pair.
//!
//! Near a coincident tangency pair the manifold of cooriented support
//! elements is written in a primed chart `(p′, q′, r′, u, v, w, s)`;
//! the polynomial substitution below straightens that chart onto standard
//! contact coordinates, carrying the four strata of the singular support
//! set `M̃*₀` onto the four printed strata of the doubled cone pair `R̃₂`.

use super::{ContactElement, LegendreError};

/// Number of strata of the singular support set in the primed chart.
pub const MSTAR_STRATA: usize = 4;

/// The straightening substitution `(p′,q′,r′,u,v,w,s) ↦ (P,Q,R;U,V,W,S)`:
///
/// ```text
/// U = p′              W = q′              Q = r′              V = s
/// P = 2p′ − 2q′² − u
/// R = −v − 4p′q′
/// S = w − P·p′ − R·q′ + p′² − 4p′q′²
/// ```
pub fn a1a3_substitute(chart: &[f64; 7]) -> ContactElement {
    let [pp, qp, rp, u, v, w, s] = *chart;
    let cap_p = 2.0 * pp - 2.0 * qp * qp - u;
    let cap_r = -v - 4.0 * pp * qp;
    // Grouped so that on the tangency sheet (w equal to the sheet height)
    // the cancellation is bitwise exact.
    let sheet_w = -pp * pp + 4.0 * pp * qp * qp;
    let cap_s = w - cap_p * pp - cap_r * qp - sheet_w;
    ContactElement {
        p: cap_p,
        q: rp,
        r: cap_r,
        u: pp,
        v: s,
        w: qp,
        s: cap_s,
    }
}

/// Primed-chart coordinates of one stratum of `M̃*₀`.
///
/// Strata 0 and 1 lie over the smooth tangency sheet
/// (`u = 2p′ − 2q′²`, `v = −4p′q′`, `w = −p′² + 4p′q′²`), with the vertical
/// ray `s ≥ 0` respectively the fiber ray `r′ ≥ 0`; strata 2 and 3 lie over
/// the coincidence locus `p′ = 0`, `u ≤ −2q′²`, `v = w = 0`.
///
/// Parameter order: `[p′, q′, s]`, `[p′, q′, r′]`, `[q′, u, s]`, `[q′, u, r′]`.
pub fn mstar_parametrize(index: usize, params: &[f64; 3]) -> Result<[f64; 7], LegendreError> {
    let reject = |detail: &'static str| {
        Err(LegendreError::ParamOutOfRange {
            variety: "Mstar0",
            stratum: index,
            detail,
        })
    };
    match index {
        0 | 1 => {
            let [pp, qp, ray] = *params;
            if pp < 0.0 {
                return reject("need p' >= 0 on the tangency sheet");
            }
            if ray < 0.0 {
                return reject("ray parameter must be nonnegative");
            }
            let u = 2.0 * pp - 2.0 * qp * qp;
            let v = -4.0 * pp * qp;
            let w = -pp * pp + 4.0 * pp * qp * qp;
            Ok(if index == 0 {
                [pp, qp, 0.0, u, v, w, ray]
            } else {
                [pp, qp, ray, u, v, w, 0.0]
            })
        }
        2 | 3 => {
            let [qp, u, ray] = *params;
            if u > -2.0 * qp * qp {
                return reject("need u <= -2 q'^2 on the coincidence locus");
            }
            if ray < 0.0 {
                return reject("ray parameter must be nonnegative");
            }
            Ok(if index == 2 {
                [0.0, qp, 0.0, u, 0.0, 0.0, ray]
            } else {
                [0.0, qp, ray, u, 0.0, 0.0, 0.0]
            })
        }
        _ => Err(LegendreError::UnknownStratum {
            variety: "Mstar0",
            stratum: index,
        }),
    }
}

/// Image of one singular-support stratum point under the substitution.
pub fn mstar_image(index: usize, params: &[f64; 3]) -> Result<ContactElement, LegendreError> {
    Ok(a1a3_substitute(&mstar_parametrize(index, params)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::{membership, Variety};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn substitution_frozen_example() {
        let image = a1a3_substitute(&[1.0, 2.0, 3.0, 0.5, -0.25, 0.75, 1.25]);
        assert_eq!(
            image.coords(),
            [-6.5, 3.0, -7.75, 1.0, 1.25, 2.0, 7.75]
        );
    }

    #[test]
    fn strata_map_onto_matching_cone_pair_strata() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for index in 0..MSTAR_STRATA {
            for _ in 0..100 {
                // Strictly interior parameters so membership is unambiguous.
                let params = match index {
                    0 | 1 => [
                        rng.gen_range(0.1..1.5),
                        rng.gen_range(-1.5..1.5),
                        rng.gen_range(0.1..1.5),
                    ],
                    _ => {
                        let qp = rng.gen_range(-1.5..1.5f64);
                        [
                            qp,
                            -2.0 * qp * qp - rng.gen_range(0.1..1.5),
                            rng.gen_range(0.1..1.5),
                        ]
                    }
                };
                let image = mstar_image(index, &params).unwrap();
                assert_eq!(
                    membership(Variety::R2, &image, 1e-12),
                    Some(index),
                    "stratum {index} params {params:?} image {:?}",
                    image.coords()
                );
            }
        }
    }

    #[test]
    fn out_of_range_params_are_rejected() {
        assert!(mstar_parametrize(0, &[-0.1, 0.0, 0.0]).is_err());
        assert!(mstar_parametrize(1, &[0.1, 0.0, -0.5]).is_err());
        assert!(mstar_parametrize(2, &[1.0, 0.0, 0.0]).is_err());
        assert!(mstar_parametrize(3, &[1.0, -3.0, 0.2]).is_ok());
        assert!(matches!(
            mstar_parametrize(4, &[0.0; 3]),
            Err(LegendreError::UnknownStratum { .. })
        ));
    }

    #[test]
    fn tangency_sheet_image_is_exactly_flat() {
        // On strata 0/1 the substituted P, R, S must vanish identically,
        // not merely to rounding: every cancellation is between equal
        // products of the same inputs.
        let image = mstar_image(1, &[0.7, -1.2, 0.9]).unwrap();
        assert_eq!(image.p, 0.0);
        assert_eq!(image.r, 0.0);
        assert_eq!(image.s, 0.0);
        assert_eq!(image.u, 0.7);
        assert_eq!(image.w, -1.2);
        assert_eq!(image.q, 0.9);
    }
}
