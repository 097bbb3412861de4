//! Support scans and contact-type classification of sampled convex bodies.
//!
//! A body is a boundary point cloud in 3 or 4 dimensions, optionally backed
//! by a smooth implicit descriptor (negative inside, positive outside).  The
//! pipeline mirrors how generic support singularities stratify:
//!
//! 1. **scan** — every direction of a deterministic sphere grid gets its
//!    supporting hyperplane; boundary points within a band of the support
//!    value are clustered by single linkage, and more than one cluster flags
//!    a candidate multiple tangency;
//! 2. **refine** — flagged directions are driven onto the exact coincidence
//!    locus by Gauss–Newton equalization of the per-cluster support values;
//!    a capture window around the refined direction promotes the contact set
//!    when further clusters join (pairs cascade to triples to quadruples);
//! 3. **verify** — the refined direction is confirmed at a much tighter
//!    band, so only true co-supporting contacts survive;
//! 4. **classify** — with a descriptor, each confirmed contact gets a local
//!    tangency order (nondegenerate `A₁`, quartic `A₃`, or degenerate) from
//!    the sag of the boundary below the supporting hyperplane;
//! 5. **catalogue** — confirmed directions group into singular families
//!    (closed loops, open arcs, sheets, isolated points); open two-contact
//!    arcs additionally get extrapolated merge candidates at their ends,
//!    polished by a derivative-free descent of the soft sag eigenvalue and
//!    confirmed where the two contacts collide into a quartic tangency.

mod bodies;
mod tangency;

pub use bodies::{
    caltrop, caltrop_centers, ellipsoid, flat_spot, peanut, perturbed_peanut, quartic_flat, torus,
};
pub use tangency::{tangency_order, TangencyClass, TangencyReport};

use crate::sampling::{fibonacci_sphere, hopf_sphere3};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Smooth implicit function backing a sampled body: negative inside,
/// positive outside, zero on the boundary.
pub type Descriptor = Arc<dyn Fn(&[f64; 4]) -> f64 + Send + Sync>;

/// A sampled convex (or semialgebraic) body: a boundary point cloud, its
/// ambient dimension, and an optional implicit descriptor.  Points of a
/// three-dimensional body keep a zero fourth coordinate.
#[derive(Clone)]
pub struct PointCloudBody {
    pub dim: usize,
    pub points: Vec<[f64; 4]>,
    pub descriptor: Option<Descriptor>,
}

impl fmt::Debug for PointCloudBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PointCloudBody")
            .field("dim", &self.dim)
            .field("points", &self.points.len())
            .field("descriptor", &self.descriptor.is_some())
            .finish()
    }
}

fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn dist(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
        + (a[3] - b[3]).powi(2))
    .sqrt()
}

fn normalize(v: &[f64; 4]) -> [f64; 4] {
    let n = dot(v, v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
}

impl PointCloudBody {
    pub fn new(dim: usize, points: Vec<[f64; 4]>) -> Self {
        assert!(dim == 3 || dim == 4, "bodies live in dimension 3 or 4");
        PointCloudBody {
            dim,
            points,
            descriptor: None,
        }
    }

    pub fn with_descriptor(mut self, descriptor: Descriptor) -> Self {
        self.descriptor = Some(descriptor);
        self
    }

    /// Bounding-box diagonal — the scale reference for every tolerance.
    pub fn diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for p in &self.points {
            for i in 0..4 {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
        }
        (0..4).map(|i| (hi[i] - lo[i]).powi(2)).sum::<f64>().sqrt()
    }

    /// Index and value of the farthest point along `dir`.
    pub fn support(&self, dir: &[f64; 4]) -> (usize, f64) {
        let mut best = 0;
        let mut value = f64::NEG_INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            let h = dot(p, dir);
            if h > value {
                value = h;
                best = i;
            }
        }
        (best, value)
    }

    /// Farthest point along `dir` among points within `radius` of an anchor
    /// point — keeps a contact's identity while a direction is adjusted.
    fn local_argmax(&self, dir: &[f64; 4], anchor: usize, radius: f64) -> usize {
        let center = self.points[anchor];
        let mut best = anchor;
        let mut value = f64::NEG_INFINITY;
        for (i, p) in self.points.iter().enumerate() {
            if dist(p, &center) <= radius {
                let h = dot(p, dir);
                if h > value {
                    value = h;
                    best = i;
                }
            }
        }
        best
    }

    /// Median nearest-neighbour distance over a deterministic subsample —
    /// the cloud's own resolution.
    pub fn cloud_spacing(&self) -> f64 {
        let n = self.points.len();
        if n < 2 {
            return 0.0;
        }
        let stride = (n / 192).max(1);
        let mut gaps: Vec<f64> = Vec::new();
        for i in (0..n).step_by(stride) {
            let p = self.points[i];
            let mut nearest = f64::INFINITY;
            for (j, q) in self.points.iter().enumerate() {
                if j != i {
                    nearest = nearest.min(dist(&p, q));
                }
            }
            gaps.push(nearest);
        }
        gaps.sort_by(|a, b| a.total_cmp(b));
        gaps[gaps.len() / 2]
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("body has no sample points")]
    EmptyBody,
    #[error("need at least {needed} boundary samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("direction grid is empty")]
    NoDirections,
}

fn default_directions() -> usize {
    4000
}
fn default_cluster_tol() -> f64 {
    1e-2
}
fn default_capture_mult() -> f64 {
    1.5
}
fn default_tight_tol() -> f64 {
    1e-9
}
fn default_linkage_mult() -> f64 {
    2.5
}
fn default_max_contacts() -> usize {
    6
}
fn default_min_vertical() -> f64 {
    0.05
}

/// Tunables of the classification pipeline.  All length-like tolerances are
/// relative: bands scale with the body diameter, angular windows with the
/// direction-grid spacing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Directions generated on the sphere (S² grid, or S³ grid before the
    /// hemisphere cut).
    #[serde(default = "default_directions")]
    pub n_directions: usize,
    /// Support band and cluster linkage, as a fraction of the diameter.
    #[serde(default = "default_cluster_tol")]
    pub cluster_tol: f64,
    /// Capture window for contact-set promotion, in units of
    /// grid-spacing × diameter.
    #[serde(default = "default_capture_mult")]
    pub capture_mult: f64,
    /// Confirmation band fraction after refinement.
    #[serde(default = "default_tight_tol")]
    pub tight_tol: f64,
    /// Floor of the family-grouping linkage, in units of grid spacing; the
    /// working linkage adapts upward to the observed hit density along each
    /// coincidence locus (see `classify_body`).
    #[serde(default = "default_linkage_mult")]
    pub linkage_mult: f64,
    /// Hard cap on simultaneous contacts chased by the capture loop.
    #[serde(default = "default_max_contacts")]
    pub max_contacts: usize,
    /// Smallest admissible vertical component of 4D scan directions.
    #[serde(default = "default_min_vertical")]
    pub min_vertical: f64,
    /// Extra directions to probe for tangency order, on top of the scan.
    #[serde(default)]
    pub probe_directions: Vec<[f64; 4]>,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            n_directions: default_directions(),
            cluster_tol: default_cluster_tol(),
            capture_mult: default_capture_mult(),
            tight_tol: default_tight_tol(),
            linkage_mult: default_linkage_mult(),
            max_contacts: default_max_contacts(),
            min_vertical: default_min_vertical(),
            probe_directions: Vec::new(),
        }
    }
}

/// Derived absolute scales of one scan.
#[derive(Clone, Copy, Debug)]
struct ScanGeometry {
    /// Typical angular gap of the direction grid.
    spacing: f64,
    /// Euclidean linkage for clustering boundary points.
    linkage_dist: f64,
    /// Raw detection band on support values.
    band: f64,
    /// Capture window on support values for contact promotion.
    capture: f64,
    /// Confirmation band on support values.
    tight: f64,
    /// Equalization convergence threshold.
    equalize_tol: f64,
}

fn geometry(body: &PointCloudBody, cfg: &ClassifyConfig) -> ScanGeometry {
    let diameter = body.diameter();
    let spacing = if body.dim == 3 {
        (4.0 * std::f64::consts::PI / cfg.n_directions as f64).sqrt()
    } else {
        (2.0 * std::f64::consts::PI.powi(2) / cfg.n_directions as f64).cbrt()
    };
    let band = cfg.cluster_tol * diameter;
    ScanGeometry {
        spacing,
        linkage_dist: band.max(2.5 * body.cloud_spacing()),
        band,
        capture: cfg.capture_mult * spacing * diameter,
        tight: cfg.tight_tol * diameter,
        equalize_tol: 1e-11 * diameter,
    }
}

/// The scan's direction grid: a Fibonacci sphere in 3D, a Hopf-angle grid on
/// the upper hemisphere (`n₄` bounded away from zero) in 4D.
pub fn scan_directions(dim: usize, cfg: &ClassifyConfig) -> Vec<[f64; 4]> {
    if dim == 3 {
        fibonacci_sphere(cfg.n_directions)
            .into_iter()
            .map(|n| [n[0], n[1], n[2], 0.0])
            .collect()
    } else {
        hopf_sphere3(cfg.n_directions)
            .into_iter()
            .filter(|n| n[3] > cfg.min_vertical)
            .collect()
    }
}

/// One scanned direction: its support value and the clustered near-support
/// contacts (representative boundary points and their indices).
#[derive(Clone, Debug, Serialize)]
pub struct SupportRecord {
    pub direction: [f64; 4],
    pub value: f64,
    pub contact_indices: Vec<usize>,
    pub contacts: Vec<[f64; 4]>,
}

impl SupportRecord {
    pub fn multiplicity(&self) -> usize {
        self.contacts.len()
    }
}

/// Single-linkage clusters of the given point indices at the linkage
/// distance; returns one representative (the support argmax) per cluster.
fn cluster_representatives(
    body: &PointCloudBody,
    indices: &[usize],
    dir: &[f64; 4],
    linkage: f64,
) -> Vec<usize> {
    let k = indices.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for a in 0..k {
        for b in (a + 1)..k {
            if dist(&body.points[indices[a]], &body.points[indices[b]]) <= linkage {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for a in 0..k {
        let root = find(&mut parent, a);
        let entry = best.entry(root).or_insert(indices[a]);
        if dot(&body.points[indices[a]], dir) > dot(&body.points[*entry], dir) {
            *entry = indices[a];
        }
    }
    best.into_values().collect()
}

fn in_band_indices(body: &PointCloudBody, dir: &[f64; 4], value: f64, band: f64) -> Vec<usize> {
    body.points
        .iter()
        .enumerate()
        .filter(|(_, p)| value - dot(p, dir) <= band)
        .map(|(i, _)| i)
        .collect()
}

/// One-stage support scan: support value and banded contact clusters for
/// every direction of the grid.
pub fn support_scan(
    body: &PointCloudBody,
    directions: &[[f64; 4]],
    cfg: &ClassifyConfig,
) -> Result<Vec<SupportRecord>, ClassifyError> {
    if body.points.is_empty() {
        return Err(ClassifyError::EmptyBody);
    }
    if directions.is_empty() {
        return Err(ClassifyError::NoDirections);
    }
    let geom = geometry(body, cfg);
    Ok(directions
        .par_iter()
        .map(|dir| {
            let (_, value) = body.support(dir);
            let near = in_band_indices(body, dir, value, geom.band);
            let reps = cluster_representatives(body, &near, dir, geom.linkage_dist);
            SupportRecord {
                direction: *dir,
                value,
                contacts: reps.iter().map(|&i| body.points[i]).collect(),
                contact_indices: reps,
            }
        })
        .collect())
}

/// Orthonormal tangent frame of the sphere at `n` (dim−1 vectors).
fn tangent_frame(n: &[f64; 4], dim: usize) -> Vec<[f64; 4]> {
    let mut frame: Vec<[f64; 4]> = Vec::new();
    for i in 0..dim {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        let a = dot(&v, n);
        for j in 0..4 {
            v[j] -= a * n[j];
        }
        for f in &frame {
            let a = dot(&v, f);
            for j in 0..4 {
                v[j] -= a * f[j];
            }
        }
        let len = dot(&v, &v).sqrt();
        if len > 1e-6 {
            for x in &mut v {
                *x /= len;
            }
            frame.push(v);
        }
        if frame.len() == dim - 1 {
            break;
        }
    }
    frame
}

/// Gauss–Newton equalization of the support values of a fixed feature set.
/// Each feature is a boundary point index, refreshed locally as the
/// direction moves.  Support over a point cloud is piecewise linear in the
/// direction, so once the iteration enters the correct linearity cell it
/// lands on the coincidence locus to machine precision.
fn equalize(
    body: &PointCloudBody,
    start: &[f64; 4],
    features: &[usize],
    geom: &ScanGeometry,
) -> Option<([f64; 4], Vec<usize>)> {
    let m = features.len();
    let dim = body.dim;
    let r_loc = 3.0 * geom.linkage_dist;
    let mut n = *start;
    let mut feats = features.to_vec();
    for _ in 0..30 {
        for f in feats.iter_mut() {
            *f = body.local_argmax(&n, *f, r_loc);
        }
        let values: Vec<f64> = feats.iter().map(|&i| dot(&body.points[i], &n)).collect();
        let worst = values[1..]
            .iter()
            .map(|v| (v - values[0]).abs())
            .fold(0.0, f64::max);
        if worst <= geom.equalize_tol {
            return Some((n, feats));
        }
        let frame = tangent_frame(&n, dim);
        let rows = m - 1;
        let cols = frame.len();
        let mut a = DMatrix::zeros(rows, cols);
        let mut rhs = DVector::zeros(rows);
        let x0 = body.points[feats[0]];
        for i in 1..m {
            let xi = body.points[feats[i]];
            let delta = [xi[0] - x0[0], xi[1] - x0[1], xi[2] - x0[2], xi[3] - x0[3]];
            for (j, e) in frame.iter().enumerate() {
                a[(i - 1, j)] = dot(&delta, e);
            }
            rhs[i - 1] = -(values[i] - values[0]);
        }
        let svd = a.svd(true, true);
        let step = svd.solve(&rhs, 1e-12).ok()?;
        let mut norm = step.norm();
        let cap = 0.3;
        let scale = if norm > cap { cap / norm } else { 1.0 };
        norm *= scale;
        let mut moved = n;
        for (j, e) in frame.iter().enumerate() {
            for c in 0..4 {
                moved[c] += scale * step[j] * e[c];
            }
        }
        n = normalize(&moved);
        if norm < 1e-16 {
            break;
        }
    }
    None
}

/// A confirmed multiple tangency after refinement.
#[derive(Clone, Debug, Serialize)]
pub struct RefinedContact {
    pub direction: [f64; 4],
    pub support: f64,
    pub contact_indices: Vec<usize>,
    pub contacts: Vec<[f64; 4]>,
    pub origin_direction: [f64; 4],
}

/// Refine a flagged record onto the exact coincidence locus.  The capture
/// loop promotes the contact set whenever equalization pulls further
/// features into the capture window (a pair near a triple point cascades to
/// the triple, then possibly to a quadruple).  Returns `None` when the
/// flagged multiplicity does not survive tight confirmation.
pub fn refine_direction(
    body: &PointCloudBody,
    record: &SupportRecord,
    cfg: &ClassifyConfig,
) -> Option<RefinedContact> {
    let geom = geometry(body, cfg);
    let mut feats = record.contact_indices.clone();
    if feats.len() < 2 {
        return None;
    }
    let mut best: Option<([f64; 4], Vec<usize>)> = None;
    let mut start = record.direction;
    for _ in 0..6 {
        match equalize(body, &start, &feats, &geom) {
            Some((n, f)) => {
                let m = f.len();
                best = Some((n, f));
                let (_, h) = body.support(&n);
                let window = in_band_indices(body, &n, h, geom.capture);
                let reps = cluster_representatives(body, &window, &n, geom.linkage_dist);
                if reps.len() > m && reps.len() <= cfg.max_contacts {
                    feats = reps;
                    start = n;
                } else {
                    break;
                }
            }
            None => break,
        }
    }
    let (n, _) = best?;
    let (_, h) = body.support(&n);
    let tight = in_band_indices(body, &n, h, geom.tight);
    let reps = cluster_representatives(body, &tight, &n, geom.linkage_dist);
    if reps.len() < 2 {
        return None;
    }
    Some(RefinedContact {
        direction: n,
        support: h,
        contacts: reps.iter().map(|&i| body.points[i]).collect(),
        contact_indices: reps,
        origin_direction: record.direction,
    })
}

/// Merge-candidate at the end of an open two-contact arc: the direction
/// where the two contacts are extrapolated to collide.
#[derive(Clone, Debug, Serialize)]
pub struct A3Candidate {
    pub direction: [f64; 4],
    pub contact_gap: f64,
    pub eigenvalue_ratio: Option<f64>,
    pub quartic_coeff: Option<f64>,
    pub confirmed: bool,
}

/// A connected family of confirmed singular directions with a common label.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub label: String,
    pub members: usize,
    pub representative: [f64; 4],
    /// Supporting direction of every member record.
    pub directions: Vec<[f64; 4]>,
    /// For 3D families with enough members: whether the direction set closes
    /// into a loop (`None` when the test does not apply).
    pub closed: Option<bool>,
    pub mean_contact_gap: f64,
    pub a3_candidates: Vec<A3Candidate>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub direction: [f64; 4],
    pub outcome: Option<TangencyReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub dim: usize,
    pub directions_scanned: usize,
    pub raw_flagged: usize,
    pub refined_count: usize,
    pub families: Vec<FamilyReport>,
    /// Family counts per label, plus merge candidates under `"A3"`.
    pub catalogue: BTreeMap<String, usize>,
    pub probes: Vec<ProbeReport>,
}

fn label_from(classes: &[Option<TangencyClass>]) -> String {
    let m = classes.len();
    if classes.iter().any(|c| c.is_none()) {
        return format!("{m}-contact");
    }
    let a1 = classes
        .iter()
        .filter(|c| **c == Some(TangencyClass::A1))
        .count();
    let a3 = classes
        .iter()
        .filter(|c| **c == Some(TangencyClass::A3))
        .count();
    if a1 + a3 < m {
        return format!("{m}-degenerate");
    }
    let mut parts = Vec::new();
    if a1 == 1 {
        parts.push("A1".to_string());
    } else if a1 > 1 {
        parts.push(format!("{a1}A1"));
    }
    if a3 == 1 {
        parts.push("A3".to_string());
    } else if a3 > 1 {
        parts.push(format!("{a3}A3"));
    }
    parts.join("")
}

/// Smallest pairwise gap among a record's contacts.
fn min_contact_gap(contacts: &[[f64; 4]]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..contacts.len() {
        for j in (i + 1)..contacts.len() {
            best = best.min(dist(&contacts[i], &contacts[j]));
        }
    }
    best
}

/// Hard cap (radians) on the adaptive family linkage: hit spacing along a
/// sparsely sampled coincidence locus widens the linkage, but never so far
/// that well-separated features — say isolated coincidence directions a
/// tetrahedral angle apart — chain into one family.
const FAMILY_LINKAGE_CAP: f64 = 0.5;

/// Whether two same-label records continue one another: directions within
/// the angular linkage and contacts in bijection at half the intra-record
/// contact separation (so families never jump across distinct features).
fn records_adjacent(
    a: &RefinedContact,
    b: &RefinedContact,
    linkage_angle: f64,
) -> bool {
    let cosang = dot(&a.direction, &b.direction).clamp(-1.0, 1.0);
    if cosang.acos() > linkage_angle {
        return false;
    }
    let threshold = 0.5 * min_contact_gap(&a.contacts).min(min_contact_gap(&b.contacts));
    let mut used = vec![false; b.contacts.len()];
    for ca in &a.contacts {
        let mut matched = false;
        for (j, cb) in b.contacts.iter().enumerate() {
            if !used[j] && dist(ca, cb) <= threshold {
                used[j] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return false;
        }
    }
    true
}

/// Spherical linear extrapolation: `t = 0` gives `a`, `t = 1` gives `b`,
/// `t > 1` continues past `b` on the same great circle.
fn slerp(a: &[f64; 4], b: &[f64; 4], t: f64) -> [f64; 4] {
    let c = dot(a, b).clamp(-1.0, 1.0);
    let omega = c.acos();
    if omega < 1e-9 {
        return *b;
    }
    let (sa, sb) = (
        ((1.0 - t) * omega).sin() / omega.sin(),
        (t * omega).sin() / omega.sin(),
    );
    normalize(&[
        sa * a[0] + sb * b[0],
        sa * a[1] + sb * b[1],
        sa * a[2] + sb * b[2],
        sa * a[3] + sb * b[3],
    ])
}

/// Angular positions of 3D family members on their best-fit great circle.
fn circle_angles(members: &[&(RefinedContact, Vec<Option<TangencyClass>>)]) -> Option<Vec<f64>> {
    if members.len() < 4 {
        return None;
    }
    let mut cov = [[0.0f64; 3]; 3];
    for (rc, _) in members {
        for i in 0..3 {
            for j in 0..3 {
                cov[i][j] += rc.direction[i] * rc.direction[j];
            }
        }
    }
    let mat = nalgebra::Matrix3::from_fn(|i, j| cov[i][j]);
    let eig = nalgebra::SymmetricEigen::new(mat);
    // Two dominant eigenvectors span the circle plane.
    let mut order: Vec<usize> = (0..3).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let b1 = eig.eigenvectors.column(order[0]);
    let b2 = eig.eigenvectors.column(order[1]);
    Some(
        members
            .iter()
            .map(|(rc, _)| {
                let d = rc.direction;
                let x = d[0] * b1[0] + d[1] * b1[1] + d[2] * b1[2];
                let y = d[0] * b2[0] + d[1] * b2[1] + d[2] * b2[2];
                y.atan2(x)
            })
            .collect(),
    )
}

/// Full classification pipeline; see the module docs for the stages.
pub fn classify_body(
    body: &PointCloudBody,
    cfg: &ClassifyConfig,
) -> Result<ClassificationReport, ClassifyError> {
    if body.points.is_empty() {
        return Err(ClassifyError::EmptyBody);
    }
    if body.points.len() < 16 {
        return Err(ClassifyError::InsufficientSamples {
            needed: 16,
            got: body.points.len(),
        });
    }
    let directions = scan_directions(body.dim, cfg);
    if directions.is_empty() {
        return Err(ClassifyError::NoDirections);
    }
    let geom = geometry(body, cfg);
    let records = support_scan(body, &directions, cfg)?;
    let flagged: Vec<&SupportRecord> = records.iter().filter(|r| r.multiplicity() >= 2).collect();
    let refined: Vec<RefinedContact> = flagged
        .par_iter()
        .filter_map(|r| refine_direction(body, r, cfg))
        .collect();

    // Tangency classes per confirmed contact (descriptor permitting).
    let analyzed: Vec<(RefinedContact, Vec<Option<TangencyClass>>)> = refined
        .into_par_iter()
        .map(|rc| {
            let classes: Vec<Option<TangencyClass>> = rc
                .contacts
                .iter()
                .map(|c| tangency_order(body, &rc.direction, c).map(|t| t.class))
                .collect();
            (rc, classes)
        })
        .collect();

    // Group into families: same label, chained directions, continued
    // contacts.  The angular linkage adapts to the local hit density: raw
    // flags thin out along a coincidence locus as the band narrows relative
    // to the grid, so a fixed multiple of the grid spacing would shatter a
    // sparsely hit loop into arcs.  Each record reaches three times its
    // nearest same-label neighbour (floored by the grid-spacing rule so
    // duplicate finds of one direction still merge, capped so distinct
    // features stay apart), and a pair links at the smaller of its reaches —
    // dense structures never bleed into sparse ones.
    let labels: Vec<String> = analyzed.iter().map(|(_, cl)| label_from(cl)).collect();
    let k = analyzed.len();
    let floor = cfg.linkage_mult * geom.spacing;
    let cap = FAMILY_LINKAGE_CAP.max(floor);
    let reach: Vec<f64> = (0..k)
        .map(|i| {
            let nn = (0..k)
                .filter(|&j| j != i && labels[j] == labels[i])
                .map(|j| {
                    dot(&analyzed[i].0.direction, &analyzed[j].0.direction)
                        .clamp(-1.0, 1.0)
                        .acos()
                })
                .fold(f64::INFINITY, f64::min);
            (3.0 * nn).max(floor).min(cap)
        })
        .collect();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if labels[i] == labels[j]
                && records_adjacent(&analyzed[i].0, &analyzed[j].0, reach[i].min(reach[j]))
            {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..k {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }

    let mut families = Vec::new();
    for indices in groups.values() {
        let members: Vec<&(RefinedContact, Vec<Option<TangencyClass>>)> =
            indices.iter().map(|&i| &analyzed[i]).collect();
        let label = labels[indices[0]].clone();
        let family_reach = {
            let mut r: Vec<f64> = indices.iter().map(|&i| reach[i]).collect();
            r.sort_by(f64::total_cmp);
            r[r.len() / 2]
        };
        let mut mean_dir = [0.0; 4];
        let mut mean_gap = 0.0;
        for (rc, _) in &members {
            for c in 0..4 {
                mean_dir[c] += rc.direction[c];
            }
            mean_gap += min_contact_gap(&rc.contacts);
        }
        mean_gap /= members.len() as f64;
        let representative = normalize(&mean_dir);

        let mut closed = None;
        let mut a3_candidates = Vec::new();
        if body.dim == 3 {
            if let Some(angles) = circle_angles(&members) {
                let mut order: Vec<usize> = (0..members.len()).collect();
                order.sort_by(|&i, &j| angles[i].total_cmp(&angles[j]));
                let mut max_gap = 0.0f64;
                let mut gap_at = 0;
                for s in 0..order.len() {
                    let t = (s + 1) % order.len();
                    let mut gap = angles[order[t]] - angles[order[s]];
                    if gap < 0.0 {
                        gap += 2.0 * std::f64::consts::PI;
                    }
                    if gap > max_gap {
                        max_gap = gap;
                        gap_at = s;
                    }
                }
                let is_closed = max_gap <= 3.0 * family_reach;
                closed = Some(is_closed);
                if !is_closed && label == "2A1" && members.len() >= 4 {
                    // The arc runs from order[gap_at+1] around to order[gap_at].
                    let arc: Vec<usize> = (0..order.len())
                        .map(|s| order[(gap_at + 1 + s) % order.len()])
                        .collect();
                    for (end, prev) in [
                        (arc[0], arc[1]),
                        (arc[arc.len() - 1], arc[arc.len() - 2]),
                    ] {
                        a3_candidates.extend(merge_candidate(
                            body,
                            &members[end].0,
                            &members[prev].0,
                        ));
                    }
                }
            }
        }

        families.push(FamilyReport {
            label,
            members: members.len(),
            representative,
            directions: members.iter().map(|(rc, _)| rc.direction).collect(),
            closed,
            mean_contact_gap: mean_gap,
            a3_candidates,
        });
    }
    families.sort_by(|a, b| a.label.cmp(&b.label).then(b.members.cmp(&a.members)));

    let mut catalogue: BTreeMap<String, usize> = BTreeMap::new();
    for f in &families {
        *catalogue.entry(f.label.clone()).or_insert(0) += 1;
    }
    let merge_count: usize = families
        .iter()
        .map(|f| f.a3_candidates.iter().filter(|c| c.confirmed).count())
        .sum();
    if merge_count > 0 {
        *catalogue.entry("A3".to_string()).or_insert(0) += merge_count;
    }

    let probes: Vec<ProbeReport> = cfg
        .probe_directions
        .iter()
        .map(|raw| {
            let direction = normalize(raw);
            let (seed, _) = body.support(&direction);
            ProbeReport {
                direction,
                outcome: tangency_order(body, &direction, &body.points[seed]),
            }
        })
        .collect();

    Ok(ClassificationReport {
        dim: body.dim,
        directions_scanned: directions.len(),
        raw_flagged: flagged.len(),
        refined_count: k,
        families,
        catalogue,
        probes,
    })
}

/// Extrapolate the merge direction past an open arc's end member and locate
/// the quartic collision of its two contacts.  `end` is the last member,
/// `prev` its neighbour along the arc; the contact gap shrinks toward the
/// merge like a square root of arc length, so the gap squared extrapolates
/// linearly.  The extrapolation only lands near the merge — the exact
/// direction, where the soft sag eigenvalue crosses zero, sits in a basin
/// far narrower than the member spacing — so a derivative-free descent of
/// `|λ_soft|` over the tangent chart finishes the job.
fn merge_candidate(
    body: &PointCloudBody,
    end: &RefinedContact,
    prev: &RefinedContact,
) -> Option<A3Candidate> {
    let g_end = min_contact_gap(&end.contacts);
    let g_prev = min_contact_gap(&prev.contacts);
    if !(g_end < g_prev) || !g_end.is_finite() {
        return None;
    }
    let overshoot = g_end * g_end / (g_prev * g_prev - g_end * g_end);
    let t = 1.0 + overshoot.min(3.0);
    let seed_dir = slerp(&prev.direction, &end.direction, t);
    // Contacts merge around the midpoint of the end member's pair.
    let seed = [
        (end.contacts[0][0] + end.contacts[1][0]) / 2.0,
        (end.contacts[0][1] + end.contacts[1][1]) / 2.0,
        (end.contacts[0][2] + end.contacts[1][2]) / 2.0,
        (end.contacts[0][3] + end.contacts[1][3]) / 2.0,
    ];
    let frame = tangent_frame(&seed_dir, body.dim);
    let mut direction = seed_dir;
    if frame.len() >= 2 {
        let dir_at = |s: f64, r: f64| {
            let mut d = [0.0; 4];
            for c in 0..4 {
                d[c] = seed_dir[c] + s * frame[0][c] + r * frame[1][c];
            }
            normalize(&d)
        };
        // Seeded at the contact midpoint, the chart polish settles between
        // the two wells, so the soft eigenvalue is negative over the arc's
        // interior, zero at the merge, and positive beyond.  The polish
        // cannot control the soft direction, so the soft gradient stays
        // zero only on the coincidence locus and grows with any tilt
        // across the crest.  Their scale-free sum is a V-shaped objective
        // in both chart coordinates, bottoming at the merge direction.
        let glen = 0.025 * body.diameter();
        let mut objective = |s: f64, r: f64| {
            let Some(rep) = tangency_order(body, &dir_at(s, r), &seed) else {
                return f64::INFINITY;
            };
            let lambda_max = rep.eigenvalues[0];
            if lambda_max <= 0.0 {
                return f64::INFINITY;
            }
            let soft = rep.eigenvalues.last().unwrap().abs();
            (soft + rep.soft_gradient / glen) / lambda_max
        };
        let end_angle = dot(&end.direction, &seed_dir).clamp(-1.0, 1.0).acos();
        let h0 = (2.0 * end_angle).max(0.02);
        let (s0, r0, coarse) = nelder_mead_2d(&mut objective, h0, 120);
        if coarse.is_finite() {
            // Fine restart: a fresh small simplex escapes any collapsed
            // or trough-stuck shape left by the coarse stage.
            let mut recentred = |s: f64, r: f64| objective(s0 + s, r0 + r);
            let (s1, r1, _) = nelder_mead_2d(&mut recentred, 1e-3, 60);
            direction = dir_at(s0 + s1, r0 + r1);
        }
    }
    let outcome = tangency_order(body, &direction, &seed);
    let (ratio, quartic, confirmed) = match &outcome {
        Some(r) => (
            Some(r.eigenvalue_ratio),
            r.quartic_coeff,
            r.class == TangencyClass::A3,
        ),
        None => (None, None, false),
    };
    Some(A3Candidate {
        direction,
        contact_gap: g_end,
        eigenvalue_ratio: ratio,
        quartic_coeff: quartic,
        confirmed,
    })
}

/// Deterministic Nelder–Mead descent over the plane, started on a right
/// simplex with leg `h` at the origin.  `f` may return infinity where it
/// cannot be evaluated.  Returns the best vertex and its value.
fn nelder_mead_2d<F: FnMut(f64, f64) -> f64>(f: &mut F, h: f64, iters: usize) -> (f64, f64, f64) {
    let mut v = [[0.0, 0.0], [h, 0.0], [0.0, h]];
    let mut fv = [f(v[0][0], v[0][1]), f(v[1][0], v[1][1]), f(v[2][0], v[2][1])];
    for _ in 0..iters {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        let [b, m, w] = idx;
        let spread = (v[b][0] - v[w][0]).hypot(v[b][1] - v[w][1])
            + (v[m][0] - v[w][0]).hypot(v[m][1] - v[w][1]);
        if spread < 1e-9 {
            break;
        }
        let c = [(v[b][0] + v[m][0]) / 2.0, (v[b][1] + v[m][1]) / 2.0];
        let refl = [2.0 * c[0] - v[w][0], 2.0 * c[1] - v[w][1]];
        let fr = f(refl[0], refl[1]);
        if fr < fv[b] {
            let ext = [3.0 * c[0] - 2.0 * v[w][0], 3.0 * c[1] - 2.0 * v[w][1]];
            let fe = f(ext[0], ext[1]);
            if fe < fr {
                (v[w], fv[w]) = (ext, fe);
            } else {
                (v[w], fv[w]) = (refl, fr);
            }
        } else if fr < fv[m] {
            (v[w], fv[w]) = (refl, fr);
        } else {
            let con = [(c[0] + v[w][0]) / 2.0, (c[1] + v[w][1]) / 2.0];
            let fc = f(con[0], con[1]);
            if fc < fv[w] {
                (v[w], fv[w]) = (con, fc);
            } else {
                for i in [m, w] {
                    v[i] = [(v[i][0] + v[b][0]) / 2.0, (v[i][1] + v[b][1]) / 2.0];
                    fv[i] = f(v[i][0], v[i][1]);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if fv[i] < fv[best] {
            best = i;
        }
    }
    (v[best][0], v[best][1], fv[best])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipsoid_has_no_singular_families() {
        let body = ellipsoid(1.3, 1.0, 0.8, 3000);
        let cfg = ClassifyConfig {
            n_directions: 1500,
            ..ClassifyConfig::default()
        };
        let report = classify_body(&body, &cfg).unwrap();
        assert_eq!(report.raw_flagged, 0, "strictly convex body flagged");
        assert!(report.families.is_empty());
        assert!(report.catalogue.is_empty());
    }

    #[test]
    fn peanut_has_one_closed_double_tangency_circle() {
        let body = peanut(3000);
        let cfg = ClassifyConfig {
            n_directions: 2000,
            ..ClassifyConfig::default()
        };
        let report = classify_body(&body, &cfg).unwrap();
        assert_eq!(report.catalogue.get("2A1"), Some(&1), "{:?}", report.catalogue);
        let family = &report.families[0];
        assert_eq!(family.label, "2A1");
        assert_eq!(family.closed, Some(true));
        // The coincidence circle is orthogonal to the lobe axis.
        assert!(family.representative[0].abs() < 0.2);
        // Contacts sit one on each lobe, three apart.
        assert!((family.mean_contact_gap - 3.0).abs() < 0.3);
    }

    #[test]
    fn empty_and_tiny_bodies_error() {
        let cfg = ClassifyConfig::default();
        assert!(matches!(
            classify_body(&PointCloudBody::new(3, vec![]), &cfg),
            Err(ClassifyError::EmptyBody)
        ));
        let tiny = PointCloudBody::new(3, vec![[0.0; 4]; 5]);
        assert!(matches!(
            classify_body(&tiny, &cfg),
            Err(ClassifyError::InsufficientSamples { .. })
        ));
    }

    #[test]
    fn support_record_flags_two_lobes() {
        let body = peanut(2000);
        let cfg = ClassifyConfig::default();
        // Straight up: both lobes support equally.
        let record = &support_scan(&body, &[[0.0, 0.0, 1.0, 0.0]], &cfg).unwrap()[0];
        assert_eq!(record.multiplicity(), 2);
        assert!((record.value - 1.0).abs() < 1e-3);
        // Along the axis: single lobe.
        let record = &support_scan(&body, &[[1.0, 0.0, 0.0, 0.0]], &cfg).unwrap()[0];
        assert_eq!(record.multiplicity(), 1);
        assert!((record.value - 2.5).abs() < 1e-3);
    }

    #[test]
    fn refinement_lands_on_the_coincidence_circle() {
        let body = peanut(3000);
        let cfg = ClassifyConfig::default();
        // A direction near but not on the circle.
        let raw = normalize(&[0.01, 0.3, 0.954, 0.0]);
        let record = &support_scan(&body, &[raw], &cfg).unwrap()[0];
        assert_eq!(record.multiplicity(), 2);
        let refined = refine_direction(&body, record, &cfg).expect("refinement");
        assert!(refined.direction[0].abs() < 1e-10, "{:?}", refined.direction);
        assert_eq!(refined.contacts.len(), 2);
    }

    #[test]
    fn equalize_is_exact_on_a_two_point_cloud() {
        // Two isolated points: the equalized direction must see equal support
        // values to machine precision.
        let body = PointCloudBody::new(
            3,
            vec![
                [1.0, 0.4, 0.0, 0.0],
                [-1.0, 0.6, 0.0, 0.0],
                [0.0, -5.0, 0.0, 0.0],
                [0.3, -5.0, 0.2, 0.0],
                [-0.4, -5.0, 0.2, 0.0],
                [0.1, -5.0, -0.3, 0.0],
                [0.2, -5.1, 0.1, 0.0],
                [-0.2, -5.2, 0.0, 0.0],
                [0.0, -5.3, 0.1, 0.0],
                [0.05, -5.0, 0.25, 0.0],
                [1.0, 0.4, 0.1, 0.0],
                [-1.0, 0.6, 0.1, 0.0],
                [1.0, 0.38, 0.05, 0.0],
                [-1.0, 0.58, 0.05, 0.0],
                [0.9, 0.35, 0.0, 0.0],
                [-0.9, 0.55, 0.0, 0.0],
            ],
        );
        let cfg = ClassifyConfig {
            n_directions: 500,
            ..ClassifyConfig::default()
        };
        // Start near the equalizing direction so both crests fall in the band.
        let start = normalize(&[0.1, 1.0, 0.0, 0.0]);
        let record = &support_scan(&body, &[start], &cfg).unwrap()[0];
        assert!(record.multiplicity() >= 2);
        let refined = refine_direction(&body, record, &cfg).expect("refinement");
        let h: Vec<f64> = refined
            .contacts
            .iter()
            .map(|c| dot(c, &refined.direction))
            .collect();
        for v in &h[1..] {
            assert!((v - h[0]).abs() < 1e-12);
        }
    }
}
