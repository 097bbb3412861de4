//! Geometry of convex hulls near their singular support planes.
//!
//! The crate makes four families of computations available:
//!
//! * [`quadmin`] — minimization of convex quadratics (and small graded
//!   perturbations of them) over the nonnegative orthant, and the envelope
//!   functions whose under-graphs are the local normal forms `R0..R3` of a
//!   convex hull boundary.
//! * [`swallowtail`] — the convex body `V3` of nonnegative quartics
//!   `τ⁴ + uτ² + vτ + w`, with exact membership, Euclidean projection and the
//!   envelope of the fourth normal form.
//! * [`legendre`] / [`genfam`] — the contact-geometric side: the Legendre
//!   varieties of cooriented support elements attached to the normal forms,
//!   the polynomial ideal of the hardest one, generating
//!   families/functions, contact vector fields and fronts.
//! * [`classify`] — a sampling-based classifier that scans a convex body for
//!   singular support planes (`2A1`, `3A1`, `4A1`, `A3`, …) from point-cloud
//!   or analytic descriptions.
//!
//! Everything is deterministic: randomized checks take explicit seeds, and
//! scans iterate in fixed order.

pub mod classify;
pub mod genfam;
pub mod legendre;
pub mod poly;
pub mod quadmin;
pub mod roots;
pub mod sampling;
pub mod swallowtail;

pub use poly::Poly;
pub use quadmin::{AlphaProfile, OrthantQp, QpSolution};
pub use swallowtail::{BoundaryChart, Projection, QuarticPoint};
