//! The contact space and the model Legendre varieties.
//!
//! Points of the ambient space carry coordinates `(p, q, r; u, v, w, s)`;
//! the cooriented contact element applied at `(u, v, w, s)` is the
//! half-space `p du + q dv + r dw + ds ≤ 0`, and the contact structure is
//! the kernel of that form.  The model varieties live here:
//!
//! * `R̃_l` (`l = 0..3`) — products of cone pairs `{p_i u_i = 0, p_i, u_i ≥ 0}`
//!   over the first `l` coordinate pairs, with `2^l` strata each;
//! * `Ṽ₃` — the union of the zero section over the swallowtail body, the
//!   conormal over its smooth boundary, and the normal cone over the
//!   cuspidal edge;
//! * `V̄₃` — the irreducible algebraic extension with the shifted chart
//!   `w = 3τ⁴ + uτ² − u²/4` plus two Legendre planes;
//! * `Φ̃₃` — the open-swallowtail model generated by the family
//!   `Φ₃ = ½(τ⁴ + λ₁τ² + λ₂τ + λ₃)²`;
//!
//! together with strata parametrizations, membership tests, the ten-generator
//! ideal, the reducing diffeomorphism onto `Φ̃₃`, the pair-singularity chart
//! substitution, and a discrete support-element duality used by the
//! classification scans.

pub mod a1a3;
mod duality;
mod ideal;
mod phi3;
mod strata;

pub use duality::dual_support_elements;
pub use ideal::{
    generators, verify_ideal, verify_ideal_tampered, ChartReport, IdealReport, IDEAL_SIZE,
};
pub use phi3::{
    phi3_branch_a, phi3_branch_b, phi3_membership, phi3_membership_extended, phi3_reduce,
    phi3_unreduce, Phi3Branch,
};
pub use strata::{contact_tangency, membership, parametrize, strata, StratumInfo, StratumPoint};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point of the contact space: element `p du + q dv + r dw + ds ≤ 0`
/// applied at `(u, v, w, s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactElement {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub s: f64,
}

impl ContactElement {
    pub const ORIGIN: ContactElement = ContactElement {
        p: 0.0,
        q: 0.0,
        r: 0.0,
        u: 0.0,
        v: 0.0,
        w: 0.0,
        s: 0.0,
    };

    pub fn from_coords(c: [f64; 7]) -> Self {
        ContactElement {
            p: c[0],
            q: c[1],
            r: c[2],
            u: c[3],
            v: c[4],
            w: c[5],
            s: c[6],
        }
    }

    pub fn coords(&self) -> [f64; 7] {
        [self.p, self.q, self.r, self.u, self.v, self.w, self.s]
    }

    /// Value of the contact form `p du + q dv + r dw + ds` on a velocity
    /// ordered like the coordinates.
    pub fn contact_pairing(&self, velocity: &[f64; 7]) -> f64 {
        self.p * velocity[3] + self.q * velocity[4] + self.r * velocity[5] + velocity[6]
    }
}

/// The model Legendre varieties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variety {
    R0,
    R1,
    R2,
    R3,
    V3tilde,
    V3bar,
    Phi3,
}

impl Variety {
    pub fn name(&self) -> &'static str {
        match self {
            Variety::R0 => "R0",
            Variety::R1 => "R1",
            Variety::R2 => "R2",
            Variety::R3 => "R3",
            Variety::V3tilde => "V3tilde",
            Variety::V3bar => "V3bar",
            Variety::Phi3 => "Phi3",
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum LegendreError {
    #[error("stratum {stratum} of {variety}: {detail}")]
    ParamOutOfRange {
        variety: &'static str,
        stratum: usize,
        detail: &'static str,
    },
    #[error("{variety} has no stratum {stratum}")]
    UnknownStratum {
        variety: &'static str,
        stratum: usize,
    },
    #[error("body has no sample points")]
    EmptyBody,
}
