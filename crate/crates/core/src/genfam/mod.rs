//! Generating families of Legendre fibrations and the computations built on
//! them: quasihomogeneous splitting, fiber maps, contact vector fields, the
//! infinitesimal action on families, fronts, and the rank test for the
//! normal-form module.
//!
//! A generating family is a polynomial `F(p, q, r; x, y, z, t)` with
//! `F(0) = 0` and vanishing fiber gradient `F_κ(0) = 0`, nondegenerate in
//! the sense that the block matrix `‖F_κμ, F_κt; F_μ, F_t‖` is invertible at
//! the origin.  It presents a fibration of the contact space by
//!
//! ```text
//! λ = F_κ(κ, μ, t),   s = F(κ, μ, t) − κ·λ,
//! ```
//!
//! whose fibers are Legendre; the base coordinates are `(μ, t)`.  The
//! quasihomogeneous grading `deg κ = deg μ = 1`, `deg t = 2` splits
//! `F = F₂ + F₃ + …` and is the bookkeeping behind the envelope evaluators.

mod field;
mod front;
mod omega;

pub use field::{
    bracket, contact_field, contact_field_polys, family_flow_derivative, flow, flow_commutator,
    lemma2_action, GeneratingFunction,
};
pub use front::{
    front, item5_fibration, parametric_v3_front, simple_fibration, transport_to_simple,
    AxisSpec, FrontError, FrontFamily, FrontSample, GridSpec,
};
pub use omega::{omega_matrix, omega_rank};

use crate::legendre::ContactElement;
use crate::poly::Poly;
use crate::quadmin::{AlphaProfile, OrthantQp, QuadMinError};
use std::collections::BTreeMap;
use thiserror::Error;

/// Quasihomogeneous weights of `(p, q, r, x, y, z, t)`.
pub const QUASI_WEIGHTS: [u32; 7] = [1, 1, 1, 1, 1, 1, 2];

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("family value at the origin is {0}, not 0")]
    NonzeroConstant(f64),
    #[error("fiber gradient at the origin is nonzero")]
    FiberGradientAtOrigin,
    #[error("nondegeneracy determinant at the origin is {0:e}")]
    Degenerate(f64),
    #[error("monomial of quasidegree {0} below the minimum 2")]
    QuasidegreeTooLow(u32),
    #[error("fiber quadratic form is not positive definite with unit diagonal")]
    NotPositiveDefinite,
}

/// A validated generating family `F(p, q, r; x, y, z, t)`.
#[derive(Clone, Debug)]
pub struct GeneratingFamily {
    poly: Poly,
    max_quasidegree: u32,
}

impl GeneratingFamily {
    /// Validates and wraps a polynomial: zero value and fiber gradient at
    /// the origin, quasidegrees ≥ 2, and the nondegeneracy determinant.
    pub fn new(poly: Poly) -> Result<Self, FamilyError> {
        let c = poly.coeff([0; 7]);
        if c != 0.0 {
            return Err(FamilyError::NonzeroConstant(c));
        }
        for i in 0..3 {
            let mut e = [0u8; 7];
            e[i] = 1;
            if poly.coeff(e) != 0.0 {
                return Err(FamilyError::FiberGradientAtOrigin);
            }
        }
        let mut max_deg = 2u32;
        for (exps, _) in poly.terms() {
            let d = Poly::quasidegree_of(exps, &QUASI_WEIGHTS);
            if d < 2 {
                return Err(FamilyError::QuasidegreeTooLow(d));
            }
            max_deg = max_deg.max(d);
        }
        let fam = GeneratingFamily {
            poly,
            max_quasidegree: max_deg,
        };
        let det = fam.nondegeneracy_determinant();
        if det.abs() < 1e-12 {
            return Err(FamilyError::Degenerate(det));
        }
        Ok(fam)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn max_quasidegree(&self) -> u32 {
        self.max_quasidegree
    }

    /// The natural fibration family `px + qy + rz + t`.
    pub fn theorem_item1() -> Self {
        GeneratingFamily::new(base_coupling()).expect("natural family is nondegenerate")
    }

    /// `p²/2 + px + qy + rz + t`.
    pub fn theorem_item2() -> Self {
        let f = &Poly::monomial_in(0, 2, 0.5) + &base_coupling();
        GeneratingFamily::new(f).expect("half-space family is nondegenerate")
    }

    /// `(p² + q²)/2 + α(z)pq + px + qy + rz + t` with the profile's `α`.
    pub fn theorem_item3(profile: &AlphaProfile) -> Result<Self, FamilyError> {
        if profile.base().abs() >= 1.0 {
            return Err(FamilyError::NotPositiveDefinite);
        }
        let pq = &Poly::var(0) * &Poly::var(1);
        let mut f = &(&Poly::monomial_in(0, 2, 0.5) + &Poly::monomial_in(1, 2, 0.5))
            + &base_coupling();
        let alpha_poly = match *profile {
            AlphaProfile::Constant { a } => Poly::constant(a),
            AlphaProfile::Linear { a } => &Poly::constant(a) + &Poly::var(5),
            AlphaProfile::PlusQuadratic { a } => &Poly::constant(a) + &Poly::monomial_in(5, 2, 1.0),
            AlphaProfile::MinusQuadratic { a } => {
                &Poly::constant(a) + &Poly::monomial_in(5, 2, -1.0)
            }
        };
        f = &f + &(&alpha_poly * &pq);
        GeneratingFamily::new(f)
    }

    /// `F₂(a,b,c) + F₃` with
    /// `F₂ = (p²+q²+r²)/2 + apq + bpr + cqr + px + qy + rz + t`.
    /// `f3` holds the higher quasidegree terms (may be zero).
    pub fn theorem_item4(a: f64, b: f64, c: f64, f3: &Poly) -> Result<Self, FamilyError> {
        OrthantQp::dim3(a, b, c, [0.0; 3], 0.0).map_err(|_| FamilyError::NotPositiveDefinite)?;
        for (exps, _) in f3.terms() {
            if Poly::quasidegree_of(exps, &QUASI_WEIGHTS) < 3 {
                return Err(FamilyError::QuasidegreeTooLow(Poly::quasidegree_of(
                    exps,
                    &QUASI_WEIGHTS,
                )));
            }
        }
        let mut f = base_coupling();
        for i in 0..3 {
            f = &f + &Poly::monomial_in(i, 2, 0.5);
        }
        f = &f + &cross_term(0, 1, a);
        f = &f + &cross_term(0, 2, b);
        f = &f + &cross_term(1, 2, c);
        GeneratingFamily::new(&f + f3)
    }

    /// `(p² + q² + r²)/2 + px + qy + rz + t`.
    pub fn theorem_item5() -> Self {
        GeneratingFamily::theorem_item4(0.0, 0.0, 0.0, &Poly::zero())
            .expect("orthogonal quadratic family is nondegenerate")
    }

    /// The reduced form of the fifth family: `(q² + r²)/2 + px + qy + rz + t`
    /// (degenerate in `p`, still a nondegenerate family).
    pub fn item5_simple() -> Self {
        let f = &(&Poly::monomial_in(1, 2, 0.5) + &Poly::monomial_in(2, 2, 0.5))
            + &base_coupling();
        GeneratingFamily::new(f).expect("reduced family is nondegenerate")
    }

    /// The 4×4 determinant `det ‖F_κμ, F_κt; F_μ, F_t‖` at the origin.
    pub fn nondegeneracy_determinant(&self) -> f64 {
        let zero = [0.0f64; 7];
        let mut m = nalgebra::Matrix4::<f64>::zeros();
        for i in 0..3 {
            let fki = self.poly.diff(i);
            for j in 0..3 {
                m[(i, j)] = fki.diff(3 + j).eval(&zero);
            }
            m[(i, 3)] = fki.diff(6).eval(&zero);
        }
        for j in 0..3 {
            m[(3, j)] = self.poly.diff(3 + j).eval(&zero);
        }
        m[(3, 3)] = self.poly.diff(6).eval(&zero);
        m.determinant()
    }

    /// Off-diagonal coefficients `(a, b, c)` of the fiber-quadratic form,
    /// after checking the form is `(p²+q²+r²)/2 + apq + bpr + cqr` with unit
    /// diagonal and positive definite.
    pub fn fiber_quadratic_offdiag(&self) -> Result<(f64, f64, f64), QuadMinError> {
        for i in 0..3 {
            let mut e = [0u8; 7];
            e[i] = 2;
            if (self.poly.coeff(e) - 0.5).abs() > 1e-12 {
                return Err(QuadMinError::NotPositiveDefinite);
            }
        }
        let coeff2 = |i: usize, j: usize| {
            let mut e = [0u8; 7];
            e[i] = 1;
            e[j] = 1;
            self.poly.coeff(e)
        };
        let (a, b, c) = (coeff2(0, 1), coeff2(0, 2), coeff2(1, 2));
        OrthantQp::dim3(a, b, c, [0.0; 3], 0.0)?;
        Ok((a, b, c))
    }

    /// The point of the fibration's fiber over `(μ, t)` with fiber
    /// coordinate `κ`: `λ = F_κ`, `s = F − κ·λ`.
    pub fn fiber_map(&self, kappa: [f64; 3], mu: [f64; 3], t: f64) -> ContactElement {
        let at = [kappa[0], kappa[1], kappa[2], mu[0], mu[1], mu[2], t];
        let mut lambda = [0.0f64; 3];
        for i in 0..3 {
            lambda[i] = self.poly.diff(i).eval(&at);
        }
        let f = self.poly.eval(&at);
        let s = f - kappa[0] * lambda[0] - kappa[1] * lambda[1] - kappa[2] * lambda[2];
        ContactElement {
            p: kappa[0],
            q: kappa[1],
            r: kappa[2],
            u: lambda[0],
            v: lambda[1],
            w: lambda[2],
            s,
        }
    }
}

/// Splits the family by quasidegree; summing the pieces reproduces it.
pub fn quasi_components(f: &GeneratingFamily) -> BTreeMap<u32, Poly> {
    f.poly().quasi_split(&QUASI_WEIGHTS)
}

fn base_coupling() -> Poly {
    let mut f = Poly::var(6);
    for i in 0..3 {
        f = &f + &cross_term(i, 3 + i, 1.0);
    }
    f
}

/// Monomial `c·xᵢxⱼ` (squares when `i == j`).
fn cross_term(i: usize, j: usize, c: f64) -> Poly {
    let mut e = [0u8; 7];
    e[i] += 1;
    e[j] += 1;
    Poly::monomial(e, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_families_pass_invariants() {
        for fam in [
            GeneratingFamily::theorem_item1(),
            GeneratingFamily::theorem_item2(),
            GeneratingFamily::theorem_item3(&AlphaProfile::Linear { a: 0.3 }).unwrap(),
            GeneratingFamily::theorem_item4(0.2, -0.1, 0.3, &Poly::zero()).unwrap(),
            GeneratingFamily::theorem_item5(),
            GeneratingFamily::item5_simple(),
        ] {
            assert!(fam.nondegeneracy_determinant().abs() > 1e-12);
        }
        // The orthogonal family has determinant exactly ±1.
        assert_abs_diff_eq!(
            GeneratingFamily::theorem_item5().nondegeneracy_determinant().abs(),
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn invalid_families_are_rejected() {
        // Linear fiber term at the origin.
        let bad = &Poly::var(0) + &base_coupling();
        assert_eq!(
            GeneratingFamily::new(bad).unwrap_err(),
            FamilyError::FiberGradientAtOrigin
        );
        // Constant offset.
        let bad = &Poly::constant(1.0) + &base_coupling();
        assert!(matches!(
            GeneratingFamily::new(bad).unwrap_err(),
            FamilyError::NonzeroConstant(_)
        ));
        // Degenerate: no t term at all kills the last row.
        let bad = cross_term(0, 3, 1.0);
        assert!(matches!(
            GeneratingFamily::new(bad).unwrap_err(),
            FamilyError::Degenerate(_)
        ));
        // |a| ≥ 1 breaks positive definiteness of the pair quadratic.
        assert_eq!(
            GeneratingFamily::theorem_item3(&AlphaProfile::Constant { a: 1.0 }).unwrap_err(),
            FamilyError::NotPositiveDefinite
        );
        assert_eq!(
            GeneratingFamily::theorem_item4(0.9, 0.9, -0.9, &Poly::zero()).unwrap_err(),
            FamilyError::NotPositiveDefinite
        );
    }

    #[test]
    fn quasi_components_split_and_recombine() {
        // F₂ + p³ splits into exactly the degrees 2 and 3; pt sits in 3.
        let f3 = &Poly::monomial_in(0, 3, 1.0) + &cross_term(0, 6, 0.25);
        let fam = GeneratingFamily::theorem_item4(0.0, 0.0, 0.0, &f3).unwrap();
        let pieces = quasi_components(&fam);
        assert_eq!(pieces.keys().copied().collect::<Vec<_>>(), vec![2, 3]);
        let mut sum = Poly::zero();
        for piece in pieces.values() {
            sum = &sum + piece;
        }
        assert!((&sum - fam.poly()).is_zero());

        // Euler identity: Σ wᵢ xᵢ ∂ᵢ (piece) = deg · piece at random points.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for (deg, piece) in &pieces {
            let grads: Vec<Poly> = (0..7).map(|i| piece.diff(i)).collect();
            for _ in 0..20 {
                let mut x = [0.0f64; 7];
                for c in &mut x {
                    *c = rng.gen_range(-1.0..1.0);
                }
                let euler: f64 = (0..7)
                    .map(|i| QUASI_WEIGHTS[i] as f64 * x[i] * grads[i].eval(&x))
                    .sum();
                assert_abs_diff_eq!(euler, *deg as f64 * piece.eval(&x), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn fiber_map_of_natural_family_is_identity_on_base() {
        let fam = GeneratingFamily::theorem_item1();
        let el = fam.fiber_map([0.3, -0.7, 1.1], [0.5, 0.25, -0.4], 2.0);
        assert_eq!([el.u, el.v, el.w], [0.5, 0.25, -0.4]);
        assert_abs_diff_eq!(el.s, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn fiber_map_quadratic_example() {
        // F = p²/2 + px + qy + rz + t at κ = (1,0,0), μ = 0, t = 0:
        // λ = (1, 0, 0), s = −1/2.
        let fam = GeneratingFamily::theorem_item2();
        let el = fam.fiber_map([1.0, 0.0, 0.0], [0.0; 3], 0.0);
        assert_eq!([el.u, el.v, el.w], [1.0, 0.0, 0.0]);
        assert_abs_diff_eq!(el.s, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn item5_fibers_match_their_closed_form() {
        // For F = (p²+q²+r²)/2 + px + qy + rz + t the fibers are
        // u = p+x, v = q+y, w = r+z, s = t − (p²+q²+r²)/2.
        let fam = GeneratingFamily::theorem_item5();
        let el = fam.fiber_map([0.5, -1.0, 2.0], [0.1, 0.2, 0.3], 0.7);
        assert_abs_diff_eq!(el.u, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(el.v, -0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(el.w, 2.3, epsilon = 1e-15);
        assert_abs_diff_eq!(el.s, 0.7 - 0.5 * (0.25 + 1.0 + 4.0), epsilon = 1e-15);
    }
}
