//! Deterministic, low-discrepancy sampling of spheres and boxes.
//!
//! Direction scans over `S²` and `S³` drive the support-plane classifier, so
//! they must be reproducible run to run and close to equidistributed: the
//! clustering stage downstream keys its tolerances to the nominal spacing
//! `O(n^{-1/2})` (respectively `O(n^{-1/3})`), which a Fibonacci spiral and a
//! Hopf-coordinate lattice deliver without randomness.  Randomized box
//! sampling is always seeded explicitly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Golden-ratio conjugate, the 1-d low-discrepancy rotation.
const GOLDEN: f64 = 0.618_033_988_749_894_9;
/// First two components of the R2 rotation (built on the plastic number),
/// used for the torus angles of the `S³` lattice.
const PLASTIC_1: f64 = 0.754_877_666_246_692_7;
const PLASTIC_2: f64 = 0.569_840_290_998_053_2;

/// `n` nearly equidistributed points on the unit sphere `S² ⊂ R³`
/// (Fibonacci spiral).
pub fn fibonacci_sphere(n: usize) -> Vec<[f64; 3]> {
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        let z = 1.0 - (2.0 * k as f64 + 1.0) / n as f64;
        let r = (1.0 - z * z).max(0.0).sqrt();
        let phi = std::f64::consts::TAU * (k as f64 * GOLDEN).fract();
        pts.push([r * phi.cos(), r * phi.sin(), z]);
    }
    pts
}

/// `n` nearly equidistributed points on the unit sphere `S³ ⊂ R⁴`.
///
/// In Hopf coordinates a point is
/// `(cos ξ₁ sin η, sin ξ₁ sin η, cos ξ₂ cos η, sin ξ₂ cos η)` with
/// `η ∈ [0, π/2]`; uniform measure has CDF `sin²η` in `η`, so stratifying
/// `sin²η` uniformly and rotating the two torus angles by independent
/// irrationals equidistributes the lattice.
pub fn hopf_sphere3(n: usize) -> Vec<[f64; 4]> {
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        let u = (k as f64 + 0.5) / n as f64;
        let eta = u.sqrt().asin();
        let (se, ce) = eta.sin_cos();
        let xi1 = std::f64::consts::TAU * (k as f64 * PLASTIC_1).fract();
        let xi2 = std::f64::consts::TAU * (k as f64 * PLASTIC_2).fract();
        pts.push([xi1.cos() * se, xi1.sin() * se, xi2.cos() * ce, xi2.sin() * ce]);
    }
    pts
}

/// `n` seeded uniform samples from the axis box `[lo, hi]` in `D` dimensions.
pub fn seeded_box<const D: usize>(seed: u64, lo: [f64; D], hi: [f64; D], n: usize) -> Vec<[f64; D]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        let mut p = [0.0f64; D];
        for i in 0..D {
            p[i] = rng.gen_range(lo[i]..=hi[i]);
        }
        pts.push(p);
    }
    pts
}
