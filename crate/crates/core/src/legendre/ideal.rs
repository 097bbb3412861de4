//! The ten-polynomial ideal of the algebraic swallowtail conormal.
//!
//! The generators below vanish identically on the shifted boundary chart
//! `p = rτ² + ru/2`, `q = rτ`, `v = −4τ³ − 2uτ`, `w = 3τ⁴ + uτ² − u²/4`,
//! `s = 0` — the three-dimensional chart of the irreducible algebraic
//! variety — and cut out its Zariski closure.  The first generator is the
//! swallowtail discriminant in the shifted base coordinates; the last is
//! the vertical coordinate `s`.
//!
//! `verify_ideal` settles empirically which of the two candidate stratum-2
//! charts the ideal annihilates: the geometric conormal chart
//! (`w = 3τ⁴ + uτ²`) leaves several generators nonzero, while the shifted
//! algebraic chart kills all ten.

use super::ContactElement;
use crate::poly::Poly;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::OnceLock;

pub const IDEAL_SIZE: usize = 10;

// Exponent rows are ordered (p, q, r, u, v, w, s).
fn build_generators() -> [Poly; IDEAL_SIZE] {
    [
        // Discriminant of the quartic in the shifted base chart.
        Poly::from_terms([
            ([0, 0, 0, 3, 2, 0, 0], 32.0),
            ([0, 0, 0, 2, 0, 2, 0], 64.0),
            ([0, 0, 0, 1, 2, 1, 0], 144.0),
            ([0, 0, 0, 0, 4, 0, 0], -27.0),
            ([0, 0, 0, 0, 0, 3, 0], 256.0),
        ]),
        // Euler-type pairing of fiber against base weights.
        Poly::from_terms([
            ([1, 0, 0, 1, 0, 0, 0], 2.0),
            ([0, 1, 0, 0, 1, 0, 0], 3.0),
            ([0, 0, 1, 0, 0, 1, 0], 4.0),
        ]),
        Poly::from_terms([
            ([1, 0, 0, 0, 1, 0, 0], 3.0),
            ([0, 1, 0, 0, 0, 1, 0], 4.0),
            ([0, 0, 1, 1, 1, 0, 0], -2.0),
        ]),
        Poly::from_terms([
            ([1, 0, 0, 0, 0, 1, 0], 16.0),
            ([0, 1, 0, 1, 1, 0, 0], -8.0),
            ([0, 0, 1, 1, 0, 1, 0], -8.0),
            ([0, 0, 1, 0, 2, 0, 0], -3.0),
        ]),
        Poly::from_terms([
            ([2, 0, 0, 0, 0, 0, 0], 1.0),
            ([0, 1, 1, 0, 1, 0, 0], 1.0),
            ([0, 0, 2, 0, 0, 1, 0], 1.0),
        ]),
        Poly::from_terms([
            ([1, 1, 0, 0, 0, 0, 0], 4.0),
            ([0, 0, 2, 0, 1, 0, 0], 1.0),
        ]),
        Poly::from_terms([
            ([1, 0, 1, 0, 0, 0, 0], 2.0),
            ([0, 2, 0, 0, 0, 0, 0], -2.0),
            ([0, 0, 2, 1, 0, 0, 0], -1.0),
        ]),
        Poly::from_terms([
            ([1, 0, 1, 0, 1, 0, 0], 1.0),
            ([0, 2, 0, 0, 1, 0, 0], -4.0),
            ([0, 1, 1, 0, 0, 1, 0], -4.0),
        ]),
        Poly::from_terms([
            ([2, 0, 1, 0, 0, 0, 0], 1.0),
            ([1, 2, 0, 0, 0, 0, 0], -4.0),
            ([0, 0, 3, 0, 0, 1, 0], 1.0),
        ]),
        Poly::var(6),
    ]
}

/// The ten ideal generators, in their printed order.
pub fn generators() -> &'static [Poly; IDEAL_SIZE] {
    static GENS: OnceLock<[Poly; IDEAL_SIZE]> = OnceLock::new();
    GENS.get_or_init(build_generators)
}

/// Values of all ten generators at one contact element.
pub fn evaluate(e: &ContactElement) -> [f64; IDEAL_SIZE] {
    let x = e.coords();
    let gens = generators();
    std::array::from_fn(|i| gens[i].eval(&x))
}

/// Double-double scalar: an unevaluated sum `hi + lo` carrying roughly 32
/// significant digits.  The vanishing of the generators on the algebraic
/// chart is an exact polynomial identity, but plain f64 evaluation of the
/// chart-then-generator composition cancels terms of size ~1e6 and leaves
/// rounding noise near 1e-8 at box corners; compensated evaluation keeps the
/// check's own rounding far below the certified tolerance.
#[derive(Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: (hi - s) + lo,
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let b = s - self.hi;
        let err = (self.hi - (s - b)) + (o.hi - b);
        Dd::renorm(s, err + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let err = f64::mul_add(self.hi, o.hi, -p);
        Dd::renorm(p, err + self.hi * o.lo + self.lo * o.hi)
    }

    fn scale(self, c: f64) -> Dd {
        self.mul(Dd::from(c))
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

fn eval_generators_dd(coords: &[Dd; 7]) -> [f64; IDEAL_SIZE] {
    let gens = generators();
    std::array::from_fn(|i| {
        let mut acc = Dd::from(0.0);
        for (exps, coeff) in gens[i].terms() {
            let mut term = Dd::from(*coeff);
            for (var, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul(coords[var]);
                }
            }
            acc = acc.add(term);
        }
        acc.value()
    })
}

/// Compensated coordinates of the shifted algebraic chart.
fn shifted_chart_coords(tau: f64, u: f64, r: f64) -> [Dd; 7] {
    let (t, uu, rr) = (Dd::from(tau), Dd::from(u), Dd::from(r));
    let t2 = t.mul(t);
    let t3 = t2.mul(t);
    let t4 = t2.mul(t2);
    [
        rr.mul(t2).add(rr.mul(uu).scale(0.5)),
        rr.mul(t),
        rr,
        uu,
        t3.scale(-4.0).add(uu.mul(t).scale(-2.0)),
        t4.scale(3.0)
            .add(uu.mul(t2))
            .add(uu.mul(uu).scale(-0.25)),
        Dd::from(0.0),
    ]
}

/// Compensated coordinates of the geometric conormal chart.
fn conormal_chart_coords(tau: f64, u: f64, r: f64) -> [Dd; 7] {
    let (t, uu, rr) = (Dd::from(tau), Dd::from(u), Dd::from(r));
    let t2 = t.mul(t);
    let t3 = t2.mul(t);
    let t4 = t2.mul(t2);
    [
        rr.mul(t2),
        rr.mul(t),
        rr,
        uu,
        t3.scale(-4.0).add(uu.mul(t).scale(-2.0)),
        t4.scale(3.0).add(uu.mul(t2)),
        Dd::from(0.0),
    ]
}

/// Per-chart vanishing record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChartReport {
    pub chart: String,
    pub parameter_box: String,
    pub per_generator_max: [f64; IDEAL_SIZE],
    pub overall_max: f64,
}

/// Outcome of the empirical vanishing comparison.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdealReport {
    pub samples: usize,
    pub tolerance: f64,
    pub charts: Vec<ChartReport>,
    pub annihilating_chart: Option<String>,
    pub off_variety_samples: usize,
    pub off_variety_min: f64,
    pub resolution: String,
}

/// Value change of generator `index` when its lexicographically first
/// coefficient is shifted by `delta`: `delta` times that monomial.
fn coefficient_shift(index: usize, delta: f64, coords: &[Dd; 7]) -> f64 {
    let x: [f64; 7] = std::array::from_fn(|i| coords[i].value());
    let (exps, _) = generators()[index]
        .terms()
        .next()
        .expect("generators are nonzero");
    let mut m = delta;
    for (var, &e) in exps.iter().enumerate() {
        m *= x[var].powi(e as i32);
    }
    m
}

fn chart_report(
    chart: &str,
    parameter_box: &str,
    samples: usize,
    rng: &mut ChaCha8Rng,
    tamper: Option<(usize, f64)>,
    sample: impl Fn(&mut ChaCha8Rng) -> [Dd; 7],
) -> ChartReport {
    let mut per_generator_max = [0.0f64; IDEAL_SIZE];
    for _ in 0..samples {
        let coords = sample(rng);
        let mut values = eval_generators_dd(&coords);
        if let Some((index, delta)) = tamper {
            values[index] += coefficient_shift(index, delta, &coords);
        }
        for (worst, value) in per_generator_max.iter_mut().zip(values.iter()) {
            *worst = worst.max(value.abs());
        }
    }
    let overall_max = per_generator_max.iter().fold(0.0f64, |m, v| m.max(*v));
    ChartReport {
        chart: chart.to_string(),
        parameter_box: parameter_box.to_string(),
        per_generator_max,
        overall_max,
    }
}

/// Sample both candidate stratum-2 charts and random off-variety points,
/// recording which chart the generators annihilate.
pub fn verify_ideal(samples: usize, tolerance: f64, seed: u64) -> IdealReport {
    verify_ideal_tampered(samples, tolerance, seed, None)
}

/// [`verify_ideal`] with a fault-injection hook: when `tamper` is
/// `Some((index, delta))`, the lexicographically first coefficient of
/// generator `index` is shifted by `delta` before every chart evaluation, so
/// a nonzero `delta` must break the annihilation and flip the report to
/// failing.  The off-variety floor is left untouched.
pub fn verify_ideal_tampered(
    samples: usize,
    tolerance: f64,
    seed: u64,
    tamper: Option<(usize, f64)>,
) -> IdealReport {
    if let Some((index, _)) = tamper {
        assert!(index < IDEAL_SIZE, "tamper index out of range");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let conormal = chart_report(
        "conormal chart (w = 3 tau^4 + u tau^2)",
        "tau in [-1.5, 1.5], u in [-2 tau^2, 2], r in [0, 2]",
        samples,
        &mut rng,
        tamper,
        |rng| {
            let tau = rng.gen_range(-1.5..1.5);
            let u = rng.gen_range(-2.0 * tau * tau..2.0);
            let r = rng.gen_range(0.0..2.0);
            conormal_chart_coords(tau, u, r)
        },
    );
    let shifted = chart_report(
        "shifted algebraic chart (w = 3 tau^4 + u tau^2 - u^2/4)",
        "tau in [-1.5, 1.5], u in [-2, 2], r in [-2, 2]",
        samples,
        &mut rng,
        tamper,
        |rng| {
            let tau = rng.gen_range(-1.5..1.5);
            let u = rng.gen_range(-2.0..2.0);
            let r = rng.gen_range(-2.0..2.0);
            shifted_chart_coords(tau, u, r)
        },
    );

    let mut off_variety_min = f64::INFINITY;
    for _ in 0..samples {
        let coords: [f64; 7] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let e = ContactElement::from_coords(coords);
        let largest = evaluate(&e)
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        off_variety_min = off_variety_min.min(largest);
    }
    if samples == 0 {
        off_variety_min = 0.0;
    }

    let charts = vec![conormal, shifted];
    let annihilating_chart = charts
        .iter()
        .find(|c| c.overall_max <= tolerance)
        .map(|c| c.chart.clone());
    let resolution = match &annihilating_chart {
        Some(name) => format!(
            "the generators vanish (max {:.3e}) on `{name}` and not on the other \
             candidate (max {:.3e}); the printed ideal cuts out the closure of the \
             shifted algebraic chart, whose fiber p = r tau^2 + r u/2 and base \
             w = 3 tau^4 + u tau^2 - u^2/4 differ from the geometric conormal by \
             the shear w -> w + u^2/4",
            charts.iter().find(|c| &c.chart == name).unwrap().overall_max,
            charts
                .iter()
                .find(|c| &c.chart != name)
                .map(|c| c.overall_max)
                .unwrap_or(f64::NAN),
        ),
        None => "no candidate chart annihilates the generators at this tolerance".to_string(),
    };
    IdealReport {
        samples,
        tolerance,
        charts,
        annihilating_chart,
        off_variety_samples: samples,
        off_variety_min,
        resolution,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::strata::parametrize;
    use crate::legendre::Variety;

    fn base_only(u: f64, v: f64, w: f64) -> ContactElement {
        ContactElement::from_coords([0.0, 0.0, 0.0, u, v, w, 0.0])
    }

    #[test]
    fn discriminant_frozen_values() {
        let gens = generators();
        assert_eq!(gens[0].eval(&base_only(-2.0, 0.0, 1.0).coords()), 512.0);
        assert_eq!(gens[0].eval(&base_only(0.0, 0.0, 1.0).coords()), 256.0);
        assert_eq!(gens[0].eval(&base_only(0.0, -4.0, 3.0).coords()), 0.0);
    }

    #[test]
    fn generator_table_is_frozen() {
        let gens = generators();
        assert_eq!(gens[0].coeff([0, 0, 0, 3, 2, 0, 0]), 32.0);
        assert_eq!(gens[0].coeff([0, 0, 0, 0, 0, 3, 0]), 256.0);
        assert_eq!(gens[0].coeff([0, 0, 0, 0, 4, 0, 0]), -27.0);
        assert_eq!(gens[1].num_terms(), 3);
        assert_eq!(gens[6].coeff([0, 0, 2, 1, 0, 0, 0]), -1.0);
        assert_eq!(gens[9].coeff([0, 0, 0, 0, 0, 0, 1]), 1.0);
        assert_eq!(gens[9].num_terms(), 1);
    }

    #[test]
    fn shifted_chart_sample_annihilates_all_generators() {
        // tau = 1, u = -1, r = 2 on the shifted chart.
        let e = parametrize(Variety::V3bar, 1, &[1.0, -1.0, 2.0])
            .unwrap()
            .element;
        assert_eq!(e.coords(), [1.0, 2.0, 2.0, -1.0, -2.0, 1.75, 0.0]);
        for (i, value) in evaluate(&e).iter().enumerate() {
            assert_eq!(*value, 0.0, "generator {i}");
        }
    }

    #[test]
    fn conormal_chart_sample_fails_two_generators() {
        // tau = 1, u = -2, r = 1 on the geometric conormal chart.
        let e = parametrize(Variety::V3tilde, 1, &[1.0, -2.0, 1.0])
            .unwrap()
            .element;
        let values = evaluate(&e);
        assert_eq!(values[0], 512.0);
        assert_eq!(values[4], 2.0);
    }

    #[test]
    fn compensated_evaluation_kills_rounding_at_box_corners() {
        // Worst corner of the sampling box: plain f64 evaluation leaves
        // cancellation noise near 1e-8 here, compensated stays at zero.
        for coords in [
            shifted_chart_coords(1.5, 2.0, -2.0),
            shifted_chart_coords(-1.5, 2.0, 2.0),
            shifted_chart_coords(1.5, -2.0, 2.0),
        ] {
            for v in eval_generators_dd(&coords) {
                assert!(v.abs() < 1e-18, "{v:e}");
            }
        }
    }

    #[test]
    fn verify_ideal_selects_shifted_chart() {
        let report = verify_ideal(100, 1e-9, 7);
        let name = report.annihilating_chart.as_deref().unwrap();
        assert!(name.starts_with("shifted algebraic chart"));
        assert!(report.charts[1].overall_max <= 1e-9);
        assert!(report.charts[0].overall_max > 1.0);
        assert!(report.off_variety_min >= 1e-3);
        assert!(report.resolution.contains("shear"));
    }

    #[test]
    fn tampered_coefficient_breaks_the_annihilation() {
        let clean = verify_ideal_tampered(100, 1e-9, 7, None);
        assert!(clean.annihilating_chart.is_some());
        for index in [0, 2, 6] {
            let report = verify_ideal_tampered(100, 1e-9, 7, Some((index, 1e-3)));
            assert!(report.annihilating_chart.is_none(), "generator {index}");
            // The injected shift is visible at roughly its own size.
            assert!(report.charts[1].per_generator_max[index] > 1e-6);
        }
        // Off-variety floor is untouched by the hook.
        let report = verify_ideal_tampered(100, 1e-9, 7, Some((2, 1e-3)));
        assert!(report.off_variety_min >= 1e-3);
    }
}
