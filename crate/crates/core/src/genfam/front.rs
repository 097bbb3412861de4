//! Fronts of the normal families over a rectangular grid in `(x, y, z)`.
//!
//! Every normal family pairs an envelope `e(x, y, z, t)` — the minimum of
//! the family over the relevant fiber orthant, or the defect
//! `t − ½·dist²((x,y,z), V₃)` for the swallowtail variety — with the body
//! `{e ≤ 0}`.  The front is the graph `t = h(x, y, z)` of the envelope's
//! zero in `t`.  The envelope is strictly increasing in `t` (slope exactly
//! one for the normal forms), so the height is recovered either in closed
//! form or by a safeguarded bisection.

use super::GeneratingFamily;
use crate::legendre::ContactElement;
use crate::quadmin::{
    envelope_r1, envelope_r2, envelope_r3, AlphaProfile, QuadMinError, R3Config,
};
use crate::swallowtail::{project_to_v3, ProjectionConfig, ProjectionError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FrontError {
    #[error("grid leaves the family domain: alpha({z}) = {alpha} is outside (-1, 1)")]
    GridOutOfDomain { z: f64, alpha: f64 },
    #[error("envelope evaluation failed: {0}")]
    Envelope(#[from] QuadMinError),
    #[error("projection failed: {0}")]
    Projection(#[from] ProjectionError),
    #[error("no sign change bracketing the front height over ({x}, {y}, {z})")]
    RootBracket { x: f64, y: f64, z: f64 },
    #[error("axis needs at least one point and hi >= lo")]
    BadAxis,
}

/// Uniform closed grid on one axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisSpec {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self, FrontError> {
        if n == 0 || hi < lo || !lo.is_finite() || !hi.is_finite() {
            return Err(FrontError::BadAxis);
        }
        Ok(AxisSpec { lo, hi, n })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let h = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + h * i as f64).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x: AxisSpec,
    pub y: AxisSpec,
    pub z: AxisSpec,
}

impl GridSpec {
    pub fn cube(lo: f64, hi: f64, n: usize) -> Result<Self, FrontError> {
        let a = AxisSpec::new(lo, hi, n)?;
        Ok(GridSpec { x: a, y: a, z: a })
    }

    pub fn len(&self) -> usize {
        self.x.n * self.y.n * self.z.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index: `x` slowest, `z` fastest.
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.y.n + iy) * self.z.n + iz
    }

    pub fn nodes(&self) -> Vec<[f64; 3]> {
        let (xs, ys, zs) = (self.x.points(), self.y.points(), self.z.points());
        let mut out = Vec::with_capacity(self.len());
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }
}

/// Which of the five normal families (plus the reduced fifth form) to front.
#[derive(Clone, Debug)]
pub enum FrontFamily {
    /// `px + qy + rz + t`: the front is the hyperplane `t = 0`.
    Item1,
    /// `p²/2 + px + qy + rz + t`.
    Item2,
    /// `(p²+q²)/2 + α(z)pq + px + qy + rz + t`.
    Item3(AlphaProfile),
    /// A positive-definite three-fiber family `F₂ + F₃ + …`.
    Item4 {
        family: GeneratingFamily,
        config: R3Config,
    },
    /// `(p²+q²+r²)/2 + px + qy + rz + t`: front of the swallowtail body.
    Item5,
    /// `(q²+r²)/2 + px + qy + rz + t` carried over the transported variety;
    /// the front coincides with the fifth family's.
    Item5Simple,
}

/// Heights of a front over a grid, cooriented toward increasing `t`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrontSample {
    pub grid: GridSpec,
    /// `grid.len()` heights in `GridSpec::index` order.
    pub heights: Vec<f64>,
    /// The body lies below the front; the coorienting normal points to +t.
    pub cooriented_up: bool,
}

/// Computes the front heights of a family over the grid.
pub fn front(family: &FrontFamily, grid: &GridSpec) -> Result<FrontSample, FrontError> {
    if grid.is_empty() {
        return Err(FrontError::BadAxis);
    }
    if let FrontFamily::Item3(profile) = family {
        for z in grid.z.points() {
            let alpha = profile.alpha(z);
            if alpha.abs() >= 1.0 {
                return Err(FrontError::GridOutOfDomain { z, alpha });
            }
        }
    }
    let nodes = grid.nodes();
    let heights: Result<Vec<f64>, FrontError> = nodes
        .par_iter()
        .map(|&[x, y, z]| height_at(family, x, y, z))
        .collect();
    Ok(FrontSample {
        grid: *grid,
        heights: heights?,
        cooriented_up: true,
    })
}

fn height_at(family: &FrontFamily, x: f64, y: f64, z: f64) -> Result<f64, FrontError> {
    match family {
        FrontFamily::Item1 => Ok(0.0),
        FrontFamily::Item2 => Ok(-envelope_r1(x, y, z, 0.0)),
        FrontFamily::Item3(profile) => Ok(-envelope_r2(x, y, z, 0.0, profile)?),
        FrontFamily::Item4 { family, config } => {
            let e0 = envelope_r3(x, y, z, 0.0, family, config)?.value;
            let guess = -e0;
            let at_guess = envelope_r3(x, y, z, guess, family, config)?.value;
            if at_guess.abs() <= 1e-10 {
                return Ok(guess);
            }
            bisect(
                |t| Ok(envelope_r3(x, y, z, t, family, config)?.value),
                guess,
                x,
                y,
                z,
            )
        }
        FrontFamily::Item5 | FrontFamily::Item5Simple => {
            let proj = project_to_v3([x, y, z], &ProjectionConfig::default())?;
            Ok(0.5 * proj.distance * proj.distance)
        }
    }
}

/// Safeguarded bisection on an increasing envelope: expands the bracket
/// around the affine-in-`t` guess, then halves to 1e-10.
fn bisect(
    f: impl Fn(f64) -> Result<f64, FrontError>,
    guess: f64,
    x: f64,
    y: f64,
    z: f64,
) -> Result<f64, FrontError> {
    let mut half = 0.5;
    let (mut lo, mut hi) = (guess - half, guess + half);
    let (mut flo, mut fhi) = (f(lo)?, f(hi)?);
    let mut tries = 0;
    while flo > 0.0 || fhi < 0.0 {
        tries += 1;
        if tries > 8 {
            return Err(FrontError::RootBracket { x, y, z });
        }
        half *= 4.0;
        lo = guess - half;
        hi = guess + half;
        flo = f(lo)?;
        fhi = f(hi)?;
    }
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Base-point map of the fifth family's fibration:
/// `(κ; λ, s) ↦ (u−p, v−q, w−r, s + (p²+q²+r²)/2)`.
pub fn item5_fibration(el: &ContactElement) -> [f64; 4] {
    [
        el.u - el.p,
        el.v - el.q,
        el.w - el.r,
        el.s + 0.5 * (el.p * el.p + el.q * el.q + el.r * el.r),
    ]
}

/// Base-point map of the reduced fifth family:
/// `(κ; λ, s) ↦ (u, v−q, w−r, s + (q²+r²)/2)`.
pub fn simple_fibration(el: &ContactElement) -> [f64; 4] {
    [
        el.u,
        el.v - el.q,
        el.w - el.r,
        el.s + 0.5 * (el.q * el.q + el.r * el.r),
    ]
}

/// Contactomorphism taking the fifth family's fibration to the reduced one:
/// `(p, q, r; u, v, w, s) ↦ (p, q, r; u−p, v, w, s + p²/2)`.  It is strict
/// (`κ dλ + ds` is preserved exactly) and satisfies
/// `simple_fibration ∘ transport = item5_fibration`.
pub fn transport_to_simple(el: &ContactElement) -> ContactElement {
    ContactElement {
        p: el.p,
        q: el.q,
        r: el.r,
        u: el.u - el.p,
        v: el.v,
        w: el.w,
        s: el.s + 0.5 * el.p * el.p,
    }
}

/// Random points on the fifth family's front, produced parametrically: the
/// three strata of the variety over the swallowtail are sampled and pushed
/// through the fibration.  Each returned `(x, y, z, t)` satisfies
/// `t = ½·dist²((x,y,z), V₃)`.
pub fn parametric_v3_front(n: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let tau: f64 = rng.gen_range(-1.5..1.5);
        let el = match i % 3 {
            0 => {
                // Graph stratum: zero section over the body's interior.
                let u = rng.gen_range(-2.0 * tau * tau..2.0);
                let w0 = 3.0 * tau.powi(4) + u * tau * tau;
                ContactElement {
                    p: 0.0,
                    q: 0.0,
                    r: 0.0,
                    u,
                    v: -4.0 * tau.powi(3) - 2.0 * u * tau,
                    w: w0 + rng.gen_range(0.0..2.0),
                    s: 0.0,
                }
            }
            1 => {
                // Conormal stratum over the smooth boundary.
                let u = rng.gen_range(-2.0 * tau * tau..2.0);
                let r = rng.gen_range(0.0..2.0);
                ContactElement {
                    p: r * tau * tau,
                    q: r * tau,
                    r,
                    u,
                    v: -4.0 * tau.powi(3) - 2.0 * u * tau,
                    w: 3.0 * tau.powi(4) + u * tau * tau,
                    s: 0.0,
                }
            }
            _ => {
                // Normal-cone stratum over the cuspidal edge.
                let r = rng.gen_range(0.0..2.0);
                let q = rng.gen_range(-r * tau.abs()..=r * tau.abs());
                ContactElement {
                    p: r * tau * tau,
                    q,
                    r,
                    u: -2.0 * tau * tau,
                    v: 0.0,
                    w: tau.powi(4),
                    s: 0.0,
                }
            }
        };
        out.push(item5_fibration(&el));
    }
    out
}
