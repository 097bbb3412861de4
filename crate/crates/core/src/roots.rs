//! Closed-form real root extraction for low-degree polynomials.
//!
//! The swallowtail body is the set of `(u, v, w)` for which the quartic
//! `τ⁴ + uτ² + vτ + w` is nonnegative on all of ℝ.  Deciding that exactly
//! reduces to evaluating the quartic at the real roots of its derivative
//! `4τ³ + 2uτ + v`, so the cubic solver below is the workhorse of the whole
//! membership/projection stack.  Closed forms are polished with a couple of
//! Newton steps to push rounding error down to the last few ulps.

/// Real roots of `t² + bt + c` (monic), ascending. Uses the numerically
/// stable variant that avoids cancellation in the small root.
pub fn quadratic_roots(b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / 2.0];
    }
    let sq = disc.sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    let (r1, r2) = if b == 0.0 {
        (-sq / 2.0, sq / 2.0)
    } else {
        (q, c / q)
    };
    let mut out = vec![r1, r2];
    out.sort_by(f64::total_cmp);
    out
}

/// Real roots of the depressed cubic `t³ + pt + q`, ascending.
///
/// Trigonometric form in the three-root regime, Cardano otherwise; every
/// root gets two guarded Newton corrections afterwards.
pub fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    let mut roots = if p == 0.0 && q == 0.0 {
        vec![0.0]
    } else if p == 0.0 {
        vec![(-q).cbrt()]
    } else {
        // Discriminant of t³+pt+q is −4p³−27q².
        let disc = -4.0 * p * p * p - 27.0 * q * q;
        if disc > 0.0 {
            // Three distinct real roots; p < 0 necessarily.
            let m = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
            let theta = arg.acos() / 3.0;
            (0..3)
                .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
                .collect()
        } else if disc == 0.0 {
            // Repeated roots: simple root 3q/p, double root −3q/(2p).
            let mut v = vec![3.0 * q / p, -3.0 * q / (2.0 * p)];
            v.sort_by(f64::total_cmp);
            v.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
            v
        } else {
            // One real root. Stable Cardano via the larger cube root.
            let half_q = q / 2.0;
            let rad = (half_q * half_q + p * p * p / 27.0).sqrt();
            let u = if half_q >= 0.0 { -half_q - rad } else { -half_q + rad };
            let u = u.cbrt();
            vec![u - p / (3.0 * u)]
        }
    };
    for r in roots.iter_mut() {
        *r = polish_depressed_cubic(*r, p, q);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + a.abs()));
    roots
}

fn polish_depressed_cubic(t0: f64, p: f64, q: f64) -> f64 {
    let mut t = t0;
    for _ in 0..2 {
        let f = t * t * t + p * t + q;
        let df = 3.0 * t * t + p;
        if df.abs() > 1e-300 {
            let step = f / df;
            if step.is_finite() && step.abs() < 1.0 + t.abs() {
                t -= step;
            }
        }
    }
    t
}

/// Real critical points of the quartic `τ⁴ + uτ² + vτ + w`, i.e. real roots
/// of `4τ³ + 2uτ + v`, ascending.
pub fn quartic_critical_points(u: f64, v: f64) -> Vec<f64> {
    depressed_cubic_roots(u / 2.0, v / 4.0)
}

/// Value of the quartic `τ⁴ + uτ² + vτ + w` at `τ`.
#[inline]
pub fn quartic_value(u: f64, v: f64, w: f64, tau: f64) -> f64 {
    ((tau * tau + u) * tau + v) * tau + w
}

/// Global minimum of `τ⁴ + uτ² + vτ + w` over ℝ together with every critical
/// point attaining it (within an absolute slack of a few ulps, so that the
/// two symmetric minima of an even quartic are both reported).
pub fn quartic_min(u: f64, v: f64, w: f64) -> (f64, Vec<f64>) {
    let crit = quartic_critical_points(u, v);
    debug_assert!(!crit.is_empty(), "a real cubic always has a real root");
    let mut best = f64::INFINITY;
    for &t in &crit {
        let val = quartic_value(u, v, w, t);
        if val < best {
            best = val;
        }
    }
    let scale = 1.0 + u.abs() + v.abs() + w.abs();
    let slack = 64.0 * f64::EPSILON * scale;
    let argmins = crit
        .into_iter()
        .filter(|&t| quartic_value(u, v, w, t) <= best + slack)
        .collect();
    (best, argmins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn quadratic_simple() {
        let r = quadratic_roots(-3.0, 2.0); // (t-1)(t-2)
        assert_eq!(r.len(), 2);
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r[1], 2.0, epsilon = 1e-14);
        assert!(quadratic_roots(0.0, 1.0).is_empty());
    }

    #[test]
    fn cubic_three_real_roots() {
        // t³ - 7t + 6 = (t-1)(t-2)(t+3)
        let r = depressed_cubic_roots(-7.0, 6.0);
        assert_eq!(r.len(), 3);
        assert_abs_diff_eq!(r[0], -3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r[2], 2.0, epsilon = 1e-12);
    }

    #[test]
    fn cubic_one_real_root() {
        // t³ + t - 2 = (t-1)(t²+t+2)
        let r = depressed_cubic_roots(1.0, -2.0);
        assert_eq!(r.len(), 1);
        assert_abs_diff_eq!(r[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn cubic_triple_and_double() {
        assert_eq!(depressed_cubic_roots(0.0, 0.0), vec![0.0]);
        // t³ - 3t + 2 = (t-1)²(t+2): discriminant zero.
        let r = depressed_cubic_roots(-3.0, 2.0);
        assert!(r.iter().any(|&t| (t - 1.0).abs() < 1e-9));
        assert!(r.iter().any(|&t| (t + 2.0).abs() < 1e-9));
    }

    #[test]
    fn cubic_residuals_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20_000 {
            let p: f64 = rng.gen_range(-5.0..5.0);
            let q: f64 = rng.gen_range(-5.0..5.0);
            for t in depressed_cubic_roots(p, q) {
                let res = t * t * t + p * t + q;
                assert!(res.abs() < 1e-9, "p={p} q={q} t={t} res={res}");
            }
        }
    }

    #[test]
    fn quartic_min_even_case_reports_both_minima() {
        // τ⁴ - 2τ² + 1 = (τ²-1)²: minima at ±1, min value 0.
        let (m, args) = quartic_min(-2.0, 0.0, 1.0);
        assert_abs_diff_eq!(m, 0.0, epsilon = 1e-13);
        assert_eq!(args.len(), 2);
        assert_abs_diff_eq!(args[0], -1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(args[1], 1.0, epsilon = 1e-9);
    }

    #[test]
    fn quartic_min_vs_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..2000 {
            let u: f64 = rng.gen_range(-3.0..3.0);
            let v: f64 = rng.gen_range(-3.0..3.0);
            let w: f64 = rng.gen_range(-3.0..3.0);
            let (m, _) = quartic_min(u, v, w);
            let mut grid_min = f64::INFINITY;
            for k in 0..=4000 {
                let t = -2.5 + 5.0 * k as f64 / 4000.0;
                grid_min = grid_min.min(quartic_value(u, v, w, t));
            }
            assert!(m <= grid_min + 1e-12, "exact min above grid min");
            assert!(grid_min <= m + 1e-4, "grid min far above exact min");
        }
    }
}
