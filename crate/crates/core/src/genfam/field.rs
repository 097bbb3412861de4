//! Contact vector fields of generating functions and their action on
//! generating families.
//!
//! A function `K(κ, λ, s)` on the contact space generates the field
//!
//! ```text
//! κ̇ = κ K_s − K_λ,   λ̇ = K_κ,   ṡ = K − κ·K_κ,
//! ```
//!
//! which preserves the contact structure `κ dλ + ds = 0`.  The bracket of
//! two generating functions generates the commutator of their fields:
//!
//! ```text
//! {K, L} = κ K_s L_κ − K_λ L_κ + K_κ L_λ + K L_s − κ K_κ L_s − K_s L.
//! ```
//!
//! When the field acts on a Legendre fibration presented by a family `F`,
//! the family changes at the rate `K(F) = −K(κ, F_κ, F − κ·F_κ)`.

use super::GeneratingFamily;
use crate::poly::Poly;

/// A generating function `K(p, q, r, u, v, w, s)` on the contact space.
pub type GeneratingFunction = Poly;

/// Velocity of the contact field of `K` at a point, ordered
/// `(ṗ, q̇, ṙ, u̇, v̇, ẇ, ṡ)`.
pub fn contact_field(k: &GeneratingFunction, at: &[f64; 7]) -> [f64; 7] {
    let ks = k.diff(6).eval(at);
    let mut vel = [0.0f64; 7];
    for i in 0..3 {
        let kk = k.diff(i).eval(at); // K_κᵢ
        let kl = k.diff(3 + i).eval(at); // K_λᵢ
        vel[i] = at[i] * ks - kl;
        vel[3 + i] = kk;
    }
    vel[6] = k.eval(at) - (0..3).map(|i| at[i] * k.diff(i).eval(at)).sum::<f64>();
    vel
}

/// The seven component polynomials of the contact field of `K`.
pub fn contact_field_polys(k: &GeneratingFunction) -> [Poly; 7] {
    let ks = k.diff(6);
    let mut sdot = k.clone();
    let mut comps: Vec<Poly> = vec![Poly::zero(); 7];
    for i in 0..3 {
        let kk = k.diff(i);
        comps[i] = &(&Poly::var(i) * &ks) - &k.diff(3 + i);
        comps[3 + i] = kk.clone();
        sdot = &sdot - &(&Poly::var(i) * &kk);
    }
    comps[6] = sdot;
    comps.try_into().expect("seven components")
}

/// Flows a point along the contact field of `K` for the given time with a
/// fixed-step classical Runge–Kutta integrator.
pub fn flow(k: &GeneratingFunction, start: [f64; 7], time: f64, steps: usize) -> [f64; 7] {
    assert!(steps > 0, "flow needs at least one step");
    let h = time / steps as f64;
    let mut x = start;
    for _ in 0..steps {
        let k1 = contact_field(k, &x);
        let k2 = contact_field(k, &offset(&x, &k1, h / 2.0));
        let k3 = contact_field(k, &offset(&x, &k2, h / 2.0));
        let k4 = contact_field(k, &offset(&x, &k3, h));
        for i in 0..7 {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    x
}

fn offset(x: &[f64; 7], dir: &[f64; 7], h: f64) -> [f64; 7] {
    let mut y = *x;
    for i in 0..7 {
        y[i] += h * dir[i];
    }
    y
}

/// The bracket `{K, L}`, computed exactly on coefficient tables.  It
/// generates the commutator of the two contact fields.
pub fn bracket(k: &GeneratingFunction, l: &GeneratingFunction) -> GeneratingFunction {
    let ks = k.diff(6);
    let ls = l.diff(6);
    let mut out = &(k * &ls) - &(&ks * l);
    for i in 0..3 {
        let kappa = Poly::var(i);
        out = &out + &(&(&kappa * &ks) * &l.diff(i));
        out = &out - &(&k.diff(3 + i) * &l.diff(i));
        out = &out + &(&k.diff(i) * &l.diff(3 + i));
        out = &out - &(&(&kappa * &k.diff(i)) * &ls);
    }
    out
}

/// Rate of change of the family `F` when its fibration is dragged by the
/// contact field of `K`: the polynomial `−K(κ, F_κ, F − κ·F_κ)` in the
/// family variables.
pub fn lemma2_action(k: &GeneratingFunction, f: &GeneratingFamily) -> Poly {
    let fp = f.poly();
    let mut s_poly = fp.clone();
    let mut subs: Vec<Option<Poly>> = Vec::with_capacity(7);
    for i in 0..3 {
        subs.push(Some(Poly::var(i)));
    }
    for i in 0..3 {
        let fki = fp.diff(i);
        s_poly = &s_poly - &(&Poly::var(i) * &fki);
        subs.push(Some(fki));
    }
    subs.push(Some(s_poly));
    let refs: Vec<Option<&Poly>> = subs.iter().map(|o| o.as_ref()).collect();
    -&k.compose(refs.as_slice().try_into().expect("seven substitutions"))
}

/// Finite-difference rate of change of the family value at a fiber point
/// `(κ; μ, t)` when the fibration is dragged by the contact flow of `K`.
///
/// Dragging the fibration moves the family's Legendre graph backwards
/// through the flow, so the graph point is transported for times `∓eps`, the
/// family value is recovered from the transported point through
/// `F = s + ⟨κ, λ⟩`, and the base drift `⟨F_κ, κ̇⟩` is subtracted.  The
/// computation uses only the integrated flow and the family's own
/// derivatives, never [`lemma2_action`], so it serves as an independent check
/// of that formula with an `O(eps²)` truncation error.
pub fn family_flow_derivative(
    k: &GeneratingFunction,
    f: &GeneratingFamily,
    kappa: [f64; 3],
    mu: [f64; 3],
    t: f64,
    eps: f64,
) -> f64 {
    let start = f.fiber_map(kappa, mu, t).coords();
    let plus = flow(k, start, -eps, 4);
    let minus = flow(k, start, eps, 4);
    let graph_value = |x: &[f64; 7]| x[6] + x[0] * x[3] + x[1] * x[4] + x[2] * x[5];
    let mut rate = (graph_value(&plus) - graph_value(&minus)) / (2.0 * eps);
    let at = [kappa[0], kappa[1], kappa[2], mu[0], mu[1], mu[2], t];
    for i in 0..3 {
        rate -= f.poly().diff(i).eval(&at) * (plus[i] - minus[i]) / (2.0 * eps);
    }
    rate
}

/// Symmetrized second-order finite-difference commutator of the flows of
/// `K` and `L` at `x`: `(Φ_L^ε ∘ Φ_K^ε − Φ_K^ε ∘ Φ_L^ε) x / ε²` averaged
/// over `±ε`.  Converges to the field of `{K, L}` with an `O(ε²)` error,
/// giving a bracket check that never touches the coefficient-table product.
pub fn flow_commutator(
    k: &GeneratingFunction,
    l: &GeneratingFunction,
    x: &[f64; 7],
    eps: f64,
) -> [f64; 7] {
    let one_sided = |e: f64| -> [f64; 7] {
        let kl = flow(l, flow(k, *x, e, 4), e, 4);
        let lk = flow(k, flow(l, *x, e, 4), e, 4);
        std::array::from_fn(|i| (kl[i] - lk[i]) / (e * e))
    };
    let a = one_sided(eps);
    let b = one_sided(-eps);
    std::array::from_fn(|i| 0.5 * (a[i] + b[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn var(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn field_of_s_scales_fibers() {
        // K = s: κ̇ = κ, λ̇ = 0, and the formula gives ṡ = K − κ·K_κ = s,
        // which vanishes on the zero section s = 0.
        let k = var(6);
        let at = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let vel = contact_field(&k, &at);
        assert_eq!(&vel[0..3], &[1.0, 2.0, 3.0]);
        assert_eq!(&vel[3..6], &[0.0, 0.0, 0.0]);
        assert_eq!(vel[6], 7.0);
        let on_section = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 0.0];
        assert_eq!(contact_field(&k, &on_section)[6], 0.0);
    }

    #[test]
    fn field_of_pu_at_unit_point() {
        // K = pu at (p,u) = (1,1): ṗ = −K_u = −1, u̇ = K_p = 1,
        // ṡ = K − pK_p = pu − pu = 0.
        let k = &var(0) * &var(3);
        let mut at = [0.0; 7];
        at[0] = 1.0;
        at[3] = 1.0;
        let vel = contact_field(&k, &at);
        assert_eq!(vel[0], -1.0);
        assert_eq!(vel[3], 1.0);
        assert_eq!(vel[6], 0.0);
    }

    #[test]
    fn field_polys_match_pointwise_field() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let k = &(&(&var(0) * &var(3)) + &(&var(1) * &var(6))) + &var(4).pow(2);
        let comps = contact_field_polys(&k);
        for _ in 0..50 {
            let mut at = [0.0f64; 7];
            for c in &mut at {
                *c = rng.gen_range(-2.0..2.0);
            }
            let vel = contact_field(&k, &at);
            for i in 0..7 {
                assert_abs_diff_eq!(comps[i].eval(&at), vel[i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn flow_preserves_contact_structure() {
        // Transport a tangent vector of the zero section S = {λ free, κ = s = 0}
        // along the flow and check κ·dλ + ds stays zero; also check the flow of
        // K = s has the closed form (κ e^τ, λ, s e^τ).
        let k = var(6);
        let start = [0.5, -0.25, 1.0, 0.1, 0.2, 0.3, 2.0];
        let end = flow(&k, start, 0.5, 500);
        let g = 0.5f64.exp();
        for i in 0..3 {
            assert_abs_diff_eq!(end[i], start[i] * g, epsilon = 1e-10);
            assert_abs_diff_eq!(end[3 + i], start[3 + i], epsilon = 1e-12);
        }
        assert_abs_diff_eq!(end[6], start[6] * g, epsilon = 1e-10);
    }

    #[test]
    fn bracket_is_antisymmetric_and_matches_frozen_values() {
        // {u, p} = −1.
        let b = bracket(&var(3), &var(0));
        assert_eq!(b.coeff([0; 7]), -1.0);
        assert_eq!(b.num_terms(), 1);
        // Antisymmetry on a messier pair, coefficient by coefficient.
        let k = &(&var(0) * &var(3)) + &(&var(6) * &var(1));
        let l = &var(4).pow(2) + &(&var(2) * &var(5));
        let kl = bracket(&k, &l);
        let lk = bracket(&l, &k);
        assert!((&kl + &lk).is_zero());
        // {K, K} = 0 exactly.
        assert!(bracket(&k, &k).is_zero());
    }

    #[test]
    fn bracket_generates_commutator_of_fields() {
        // Exact check on coefficient tables: with [X,Y] = DY·X − DX·Y, the
        // field of {K, L} equals [V_K, V_L] componentwise.
        let k = &(&var(0) * &var(3)) + &var(6).pow(2);
        let l = &(&var(1) * &var(4)) + &(&var(0) * &var(6));
        let vk = contact_field_polys(&k);
        let vl = contact_field_polys(&l);
        let vb = contact_field_polys(&bracket(&k, &l));
        for i in 0..7 {
            let mut lie = Poly::zero();
            for j in 0..7 {
                lie = &lie + &(&vl[i].diff(j) * &vk[j]);
                lie = &lie - &(&vk[i].diff(j) * &vl[j]);
            }
            let diff = &lie - &vb[i];
            assert!(
                diff.coeff_norm() < 1e-12,
                "component {i} mismatch, norm {}",
                diff.coeff_norm()
            );
        }
    }

    #[test]
    fn lemma2_action_frozen_example() {
        // K = pu, F = p²/2 + px + qy + rz + t:
        // K(F) = −p·F_p = −(p² + px).
        let k = &var(0) * &var(3);
        let fam = GeneratingFamily::theorem_item2();
        let action = lemma2_action(&k, &fam);
        let expect = &Poly::monomial_in(0, 2, -1.0) + &super::super::cross_term(0, 3, -1.0);
        assert!((&action - &expect).is_zero());
    }

    #[test]
    fn lemma2_action_of_s_is_quadratic_defect() {
        // K = s gives −(F − κ·F_κ) = Q(κ) − t for a family F₂ = Q + κμ + t.
        let fam = GeneratingFamily::theorem_item4(0.3, -0.2, 0.1, &Poly::zero()).unwrap();
        let action = lemma2_action(&Poly::var(6), &fam);
        let mut expect = Poly::monomial_in(6, 1, -1.0);
        for i in 0..3 {
            expect = &expect + &Poly::monomial_in(i, 2, 0.5);
        }
        expect = &expect + &super::super::cross_term(0, 1, 0.3);
        expect = &expect + &super::super::cross_term(0, 2, -0.2);
        expect = &expect + &super::super::cross_term(1, 2, 0.1);
        assert!((&action - &expect).is_zero());
    }

    #[test]
    fn flow_commutator_matches_bracket_field() {
        let k = &(&var(0) * &var(3)) + &var(6).pow(2);
        let l = &(&var(1) * &var(4)) + &(&var(0) * &var(6));
        let b = bracket(&k, &l);
        let x = [0.3, -0.5, 0.7, 0.2, -0.4, 0.6, 0.1];
        let fd = flow_commutator(&k, &l, &x, 1e-3);
        let exact = contact_field(&b, &x);
        for i in 0..7 {
            assert_abs_diff_eq!(fd[i], exact[i], epsilon = 1e-6);
        }
    }

    #[test]
    fn family_flow_derivative_matches_action() {
        use crate::genfam::GeneratingFamily;
        let f = GeneratingFamily::theorem_item2();
        // K = s scales fibers; a generic quadratic mixes all slots.
        let ks = [
            var(6),
            &(&(&var(0) * &var(3)) + &var(4).pow(2)) + &(&var(6) * &var(1)),
        ];
        let (kappa, mu, t) = ([0.4, 0.7, 0.0], [0.2, -0.3, 0.5], 0.6);
        let at = [kappa[0], kappa[1], kappa[2], mu[0], mu[1], mu[2], t];
        for k in &ks {
            let fd = family_flow_derivative(k, &f, kappa, mu, t, 1e-4);
            let exact = lemma2_action(k, &f).eval(&at);
            assert_abs_diff_eq!(fd, exact, epsilon = 1e-8);
        }
    }
}
