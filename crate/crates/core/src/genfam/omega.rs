//! Rank certificate for the mixed-monomial module behind the four-fiber
//! normal form.
//!
//! Reducing a family against the quadratic part leaves obstructions spanned
//! by the monomials `⟨pqr, qr, pr, pq⟩`.  The allowable infinitesimal moves
//! populate an 8×4 matrix over that basis with entries in `x, y, z` and
//! `ω = 2t − x² − y² − z²`; full rank away from the origin means every
//! obstruction is removable there, while all rows vanish at the origin.

use nalgebra::{DMatrix, SVD};

/// The 8×4 coefficient matrix over the basis `⟨pqr, qr, pr, pq⟩`.
pub fn omega_matrix(x: f64, y: f64, z: f64, t: f64) -> [[f64; 4]; 8] {
    let om = 2.0 * t - x * x - y * y - z * z;
    [
        [0.0, 0.0, z, y],
        [0.0, z, 0.0, x],
        [0.0, y, x, 0.0],
        [x, om + x * x, 0.0, 0.0],
        [y, 0.0, om + y * y, 0.0],
        [z, 0.0, 0.0, om + z * z],
        [om, 0.0, 0.0, 0.0],
        [0.0, 3.0 * x, 2.0 * y, z],
    ]
}

/// Numerical rank of [`omega_matrix`]: singular values above
/// `1e-10 · σ_max`.
pub fn omega_rank(x: f64, y: f64, z: f64, t: f64) -> usize {
    let rows = omega_matrix(x, y, z, t);
    let m = DMatrix::from_fn(8, 4, |i, j| rows[i][j]);
    let svd = SVD::new(m, false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    svd.singular_values.iter().filter(|&&s| s > 1e-10 * smax).count()
}
