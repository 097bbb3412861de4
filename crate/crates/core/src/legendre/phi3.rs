//! The open-swallowtail model `Φ̃₃` and the reducing map onto it.
//!
//! The variety is generated by the family `Φ₃ = ½(τ⁴ + λ₁τ² + λ₂τ + λ₃)²`
//! of squared quartics: fibers `λᵢ = ∂Φ₃/∂κᵢ` over the critical set, with
//! `s = Φ₃ − Σ κᵢ ∂Φ₃/∂κᵢ`.  Two branches cover it:
//!
//! * branch A — the critical points with vanishing square, `κ = 0`, `s = 0`,
//!   base on the zero locus `λ₃ = −τ⁴ − λ₁τ² − λ₂τ`;
//! * branch B — the folded sheet `κ = −g·(τ², τ, 1)`, `λ₂ = −4τ³ − 2λ₁τ`,
//!   `s = g²/2`, where `g = −3τ⁴ − λ₁τ² + λ₃`.
//!
//! The proper variety keeps only branch-A points whose quartic attains a
//! nonpositive minimum (the zero locus is reachable); the extension up to
//! manifolds with boundary drops that condition.  `phi3_reduce` is the
//! polynomial contact transformation `(ϰ, λ, σ) = (p, q, r; u, v, w − r,
//! s + r²/2)` that carries the swallowtail conormal into branch B.

use super::ContactElement;
use crate::roots::quartic_min;
use serde::{Deserialize, Serialize};

/// Which branch of the model matched a membership query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phi3Branch {
    ZeroFiber,
    Folded,
}

/// Branch-A point: `κ = 0`, base on the zero locus of the quartic.
pub fn phi3_branch_a(tau: f64, l1: f64, l2: f64) -> ContactElement {
    ContactElement {
        p: 0.0,
        q: 0.0,
        r: 0.0,
        u: l1,
        v: l2,
        w: -tau.powi(4) - l1 * tau * tau - l2 * tau,
        s: 0.0,
    }
}

/// Branch-B point: the folded sheet with defect `g = −3τ⁴ − λ₁τ² + λ₃`.
pub fn phi3_branch_b(tau: f64, l1: f64, l3: f64) -> ContactElement {
    let g = -3.0 * tau.powi(4) - l1 * tau * tau + l3;
    ContactElement {
        p: -g * tau * tau,
        q: -g * tau,
        r: -g,
        u: l1,
        v: -4.0 * tau.powi(3) - 2.0 * l1 * tau,
        w: l3,
        s: g * g / 2.0,
    }
}

fn branch_a_residual(e: &ContactElement) -> f64 {
    e.p.abs().max(e.q.abs()).max(e.r.abs()).max(e.s.abs())
}

fn branch_b_residual(e: &ContactElement) -> Option<f64> {
    if e.r == 0.0 {
        return None;
    }
    let tau = e.q / e.r;
    let g = -e.r;
    Some(
        (e.p - e.r * tau * tau)
            .abs()
            .max((e.v + 4.0 * tau.powi(3) + 2.0 * e.u * tau).abs())
            .max(((-3.0 * tau.powi(4) - e.u * tau * tau + e.w) - g).abs())
            .max((e.s - e.r * e.r / 2.0).abs()),
    )
}

/// Membership in the proper model: branch A additionally demands that the
/// quartic over the base point attains a nonpositive minimum.  Returns the
/// lowest matching branch index (`0` = zero-fiber, `1` = folded).
pub fn phi3_membership(e: &ContactElement, tol: f64) -> Option<usize> {
    if branch_a_residual(e) <= tol && quartic_min(e.u, e.v, e.w).0 <= tol {
        return Some(0);
    }
    if e.r.abs() > tol {
        if let Some(fit) = branch_b_residual(e) {
            if fit <= tol {
                return Some(1);
            }
        }
    }
    None
}

/// Membership in the extension up to manifolds with boundary: branch A with
/// the reachability condition dropped.
pub fn phi3_membership_extended(e: &ContactElement, tol: f64) -> Option<usize> {
    if branch_a_residual(e) <= tol {
        return Some(0);
    }
    if e.r.abs() > tol {
        if let Some(fit) = branch_b_residual(e) {
            if fit <= tol {
                return Some(1);
            }
        }
    }
    None
}

/// The reducing contact transformation `(p,q,r;u,v,w,s) ↦ (ϰ, λ, σ)` with
/// `ϰ = (p,q,r)`, `λ = (u, v, w − r)`, `σ = s + r²/2`.
pub fn phi3_reduce(e: &ContactElement) -> ContactElement {
    ContactElement {
        w: e.w - e.r,
        s: e.s + e.r * e.r / 2.0,
        ..*e
    }
}

/// Inverse of [`phi3_reduce`].
pub fn phi3_unreduce(e: &ContactElement) -> ContactElement {
    ContactElement {
        w: e.w + e.r,
        s: e.s - e.r * e.r / 2.0,
        ..*e
    }
}
