//! `verify` subcommand: runs the identity suites — ideal annihilation,
//! support-matrix rank, family flow rate, bracket/commutator, stratum
//! tangency, and the two-single-point reduction maps — against seeded random
//! samples, and writes a JSON report.  Exit 0 only when every suite passes.

use crate::cfg::FileCfg;
use crate::out::{self, usage, CliError, Result};
use hullfront::genfam::{
    bracket, contact_field, family_flow_derivative, flow_commutator, lemma2_action, omega_rank,
    GeneratingFamily,
};
use hullfront::legendre::a1a3::{mstar_image, MSTAR_STRATA};
use hullfront::legendre::{
    contact_tangency, membership, parametrize, phi3_membership, phi3_membership_extended,
    phi3_reduce, strata, verify_ideal_tampered, Variety, IDEAL_SIZE,
};
use hullfront::sampling::seeded_box;
use hullfront::{AlphaProfile, Poly};
use serde::Serialize;
use std::path::Path;

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    /// Suite to run: all, ideal, omega, lemma2, bracket, tangency, a1a3,
    /// phi3.
    #[arg(long)]
    pub suite: Option<String>,
    /// Sample count per suite unit (default: 1000 for ideal and omega, 100
    /// elsewhere).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Fault-injection hook, e.g. `ideal:3`: perturbs one coefficient of the
    /// named generator by 1e-3 so the run must fail.
    #[arg(long)]
    pub tamper: Option<String>,
}

const FILE_KEYS: &[&str] = &["suite", "samples", "tamper"];
const SUITES: &[&str] = &[
    "ideal", "omega", "lemma2", "bracket", "tangency", "a1a3", "phi3",
];

#[derive(Serialize)]
struct VerifyConfig {
    command: &'static str,
    suite: String,
    samples: Option<usize>,
    tamper: Option<String>,
    seed: u64,
}

/// One suite's verdict, serialized into the report.
struct SuiteOutcome {
    name: &'static str,
    pass: bool,
    /// Human-readable locator of the worst sample, for the failure message.
    worst: String,
    detail: serde_json::Value,
}

fn parse_tamper(text: &str) -> Result<(usize, f64)> {
    let (target, index) = text
        .split_once(':')
        .ok_or_else(|| usage("tamper hook must look like ideal:3"))?;
    if target != "ideal" {
        return Err(usage(format!("tamper target `{target}` is not supported (only ideal)")));
    }
    let k: usize = index
        .parse()
        .map_err(|_| usage(format!("tamper index `{index}` is not an integer")))?;
    if !(1..=IDEAL_SIZE).contains(&k) {
        return Err(usage(format!(
            "tamper index {k} outside the generator range 1..={IDEAL_SIZE}"
        )));
    }
    Ok((k - 1, 1e-3))
}

pub fn run(args: &VerifyArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    file.check_keys(FILE_KEYS)?;
    let suite = args
        .suite
        .clone()
        .or(file.str("suite")?)
        .unwrap_or_else(|| "all".to_string());
    if suite != "all" && !SUITES.contains(&suite.as_str()) {
        return Err(usage(format!(
            "suite `{suite}` is not one of all, {}",
            SUITES.join(", ")
        )));
    }
    let samples = match args.samples {
        Some(n) => Some(n),
        None => file.usize("samples")?,
    };
    if samples == Some(0) {
        return Err(usage("sample count must be positive"));
    }
    let tamper_text = args.tamper.clone().or(file.str("tamper")?);
    let tamper = tamper_text.as_deref().map(parse_tamper).transpose()?;

    let config = VerifyConfig {
        command: "verify",
        suite: suite.clone(),
        samples,
        tamper: tamper_text.clone(),
        seed,
    };
    let stamp = out::stamp(&config, seed);

    let enabled = |name: &str| suite == "all" || suite == name;
    let n_or = |default: usize| samples.unwrap_or(default);
    let mut outcomes: Vec<SuiteOutcome> = Vec::new();
    if enabled("ideal") {
        outcomes.push(ideal_suite(n_or(1000), seed, tamper));
    }
    if enabled("omega") {
        outcomes.push(omega_suite(n_or(1000), seed.wrapping_add(1)));
    }
    if enabled("lemma2") {
        outcomes.push(lemma2_suite(n_or(100), seed.wrapping_add(2)));
    }
    if enabled("bracket") {
        outcomes.push(bracket_suite(n_or(100), seed.wrapping_add(3)));
    }
    if enabled("tangency") {
        outcomes.push(tangency_suite(n_or(100), seed.wrapping_add(4)));
    }
    if enabled("a1a3") {
        outcomes.push(a1a3_suite(n_or(100), seed.wrapping_add(5)));
    }
    if enabled("phi3") {
        outcomes.push(phi3_suite(n_or(100), seed.wrapping_add(6)));
    }

    let pass = outcomes.iter().all(|o| o.pass);
    let report = serde_json::json!({
        "command": "verify",
        "suite": suite,
        "samples": samples,
        "tamper": tamper_text,
        "seed": seed,
        "config_hash": stamp.config_hash,
        "pass": pass,
        "suites": outcomes.iter().map(|o| {
            let mut d = o.detail.clone();
            if let serde_json::Value::Object(map) = &mut d {
                map.insert("name".into(), o.name.into());
                map.insert("pass".into(), o.pass.into());
            }
            d
        }).collect::<Vec<_>>(),
    });
    out::write_json(&out::out_path(out_dir, "verify_report.json"), &report)?;

    for o in &outcomes {
        println!(
            "suite {}: {} ({})",
            o.name,
            if o.pass { "pass" } else { "FAIL" },
            o.worst
        );
    }
    if pass {
        Ok(())
    } else {
        let failing: Vec<String> = outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| format!("{}: {}", o.name, o.worst))
            .collect();
        Err(CliError::Check(format!(
            "verification failed — {}",
            failing.join("; ")
        )))
    }
}

fn ideal_suite(samples: usize, seed: u64, tamper: Option<(usize, f64)>) -> SuiteOutcome {
    let report = verify_ideal_tampered(samples, 1e-9, seed, tamper);
    let annihilated = report.annihilating_chart.is_some();
    let separated = report.off_variety_min >= 1e-3;
    let pass = annihilated && separated;
    // Closest-to-failing generator on the better chart.
    let best = report
        .charts
        .iter()
        .min_by(|a, b| a.overall_max.total_cmp(&b.overall_max))
        .expect("two charts");
    let (worst_gen, worst_val) = best
        .per_generator_max
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("ten generators");
    let worst = if pass {
        format!(
            "10/10 generators <= 1e-9 on the annihilating chart (max {:.3e})",
            best.overall_max
        )
    } else if !annihilated {
        format!(
            "generator {} reaches {:.3e} on `{}`",
            worst_gen + 1,
            worst_val,
            best.chart
        )
    } else {
        format!(
            "off-variety floor {:.3e} below 1e-3",
            report.off_variety_min
        )
    };
    SuiteOutcome {
        name: "ideal",
        pass,
        worst,
        detail: serde_json::to_value(&report).expect("ideal report serializes"),
    }
}

fn omega_suite(samples: usize, seed: u64) -> SuiteOutcome {
    let origin_rank = omega_rank(0.0, 0.0, 0.0, 0.0);
    let mut rank4 = 0usize;
    let mut worst_point = [0.0f64; 4];
    let mut worst_rank = 4usize;
    for mut pt in seeded_box::<4>(seed, [-2.0; 4], [2.0; 4], samples) {
        // The rank claim concerns nonzero points; nudge degenerate samples.
        if pt.iter().map(|c| c.abs()).fold(0.0f64, f64::max) < 1e-3 {
            pt[0] += 1.0;
        }
        let rank = omega_rank(pt[0], pt[1], pt[2], pt[3]);
        if rank == 4 {
            rank4 += 1;
        } else if rank < worst_rank {
            worst_rank = rank;
            worst_point = pt;
        }
    }
    let pass = origin_rank < 4 && rank4 == samples;
    let worst = if pass {
        format!("origin rank {origin_rank}, rank-4 count {rank4}/{samples}")
    } else if origin_rank >= 4 {
        format!("origin rank {origin_rank} expected < 4")
    } else {
        format!(
            "rank {} at ({:.3}, {:.3}, {:.3}, {:.3})",
            worst_rank, worst_point[0], worst_point[1], worst_point[2], worst_point[3]
        )
    };
    SuiteOutcome {
        name: "omega",
        pass,
        worst,
        detail: serde_json::json!({
            "samples": samples,
            "origin_rank": origin_rank,
            "rank4_count": rank4,
        }),
    }
}

/// Deterministic degree-two monomial basis in the seven contact variables.
fn quadratic_basis() -> Vec<[u8; 7]> {
    let mut basis = vec![[0u8; 7]];
    for i in 0..7 {
        let mut e = [0u8; 7];
        e[i] = 1;
        basis.push(e);
    }
    for i in 0..7 {
        for j in i..7 {
            let mut e = [0u8; 7];
            e[i] += 1;
            e[j] += 1;
            basis.push(e);
        }
    }
    basis
}

fn poly_from_coeffs(basis: &[[u8; 7]], coeffs: &[f64]) -> Poly {
    let mut p = Poly::zero();
    for (e, c) in basis.iter().zip(coeffs) {
        p = &p + &Poly::monomial(*e, *c);
    }
    p
}

/// The family catalog cycled through by the randomized identity suites.
fn catalog_family(index: usize, aux: &[f64; 3]) -> GeneratingFamily {
    match index % 6 {
        0 => GeneratingFamily::theorem_item1(),
        1 => GeneratingFamily::theorem_item2(),
        2 => {
            let profile = AlphaProfile::Constant { a: 0.8 * aux[0] };
            GeneratingFamily::theorem_item3(&profile).expect("|a| < 1 by construction")
        }
        3 => {
            let (a, b, c) = (0.3 * aux[0], 0.3 * aux[1], 0.3 * aux[2]);
            GeneratingFamily::theorem_item4(a, b, c, &Poly::zero())
                .expect("small couplings stay positive definite")
        }
        4 => GeneratingFamily::theorem_item5(),
        _ => GeneratingFamily::item5_simple(),
    }
}

fn lemma2_suite(samples: usize, seed: u64) -> SuiteOutcome {
    const TOL: f64 = 1e-5;
    const EPS: f64 = 1e-4;
    let basis = quadratic_basis();
    let coeffs = seeded_box::<36>(seed, [-1.0; 36], [1.0; 36], samples);
    let points = seeded_box::<7>(seed.wrapping_add(17), [-0.8; 7], [0.8; 7], samples);
    let aux = seeded_box::<3>(seed.wrapping_add(41), [-1.0; 3], [1.0; 3], samples);
    let mut worst_res = 0.0f64;
    let mut worst_at = String::new();
    for i in 0..samples {
        let k = poly_from_coeffs(&basis, &coeffs[i]);
        let f = catalog_family(i, &aux[i]);
        let at = points[i];
        let kappa = [at[0], at[1], at[2]];
        let mu = [at[3], at[4], at[5]];
        let t = at[6];
        let fd = family_flow_derivative(&k, &f, kappa, mu, t, EPS);
        let exact = lemma2_action(&k, &f).eval(&at);
        let res = (fd - exact).abs();
        if res > worst_res {
            worst_res = res;
            worst_at = format!("sample {i} (family {}) residual {res:.3e}", i % 6);
        }
    }
    let pass = worst_res <= TOL;
    SuiteOutcome {
        name: "lemma2",
        pass,
        worst: if worst_at.is_empty() {
            "no samples".to_string()
        } else {
            worst_at
        },
        detail: serde_json::json!({
            "samples": samples,
            "tolerance": TOL,
            "fd_step": EPS,
            "worst_residual": worst_res,
        }),
    }
}

fn bracket_suite(samples: usize, seed: u64) -> SuiteOutcome {
    const TOL: f64 = 1e-5;
    // The symmetrized commutator truncates at O(eps²) with a constant from
    // third-order flow terms; this step keeps that well under the tolerance
    // for the sampled coefficient range while staying far above rounding.
    const EPS: f64 = 3e-4;
    let basis = quadratic_basis();
    let ka = seeded_box::<36>(seed, [-0.5; 36], [0.5; 36], samples);
    let kb = seeded_box::<36>(seed.wrapping_add(29), [-0.5; 36], [0.5; 36], samples);
    let points = seeded_box::<7>(seed.wrapping_add(53), [-0.8; 7], [0.8; 7], samples);
    let mut worst_res = 0.0f64;
    let mut worst_at = String::new();
    for i in 0..samples {
        let k = poly_from_coeffs(&basis, &ka[i]);
        let l = poly_from_coeffs(&basis, &kb[i]);
        let x = points[i];
        let fd = flow_commutator(&k, &l, &x, EPS);
        let exact = contact_field(&bracket(&k, &l), &x);
        let res = fd
            .iter()
            .zip(exact.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if res > worst_res {
            worst_res = res;
            worst_at = format!("sample {i} residual {res:.3e}");
        }
    }
    let pass = worst_res <= TOL;
    SuiteOutcome {
        name: "bracket",
        pass,
        worst: if worst_at.is_empty() {
            "no samples".to_string()
        } else {
            worst_at
        },
        detail: serde_json::json!({
            "samples": samples,
            "tolerance": TOL,
            "fd_step": EPS,
            "worst_residual": worst_res,
        }),
    }
}

fn tangency_suite(samples: usize, seed: u64) -> SuiteOutcome {
    const TOL: f64 = 1e-10;
    let varieties = [
        Variety::R1,
        Variety::R2,
        Variety::R3,
        Variety::V3tilde,
        Variety::V3bar,
    ];
    let mut worst_res = 0.0f64;
    let mut worst_at = String::new();
    let mut per_stratum = Vec::new();
    let mut stratum_seed = seed;
    for variety in varieties {
        for info in strata(variety) {
            stratum_seed = stratum_seed.wrapping_add(1);
            let raw = seeded_box::<3>(stratum_seed, [0.05; 3], [1.2; 3], samples);
            let mut stratum_max = 0.0f64;
            for params in raw {
                // The only stratum with a coupled constraint needs
                // |q| <= r·|tau|; everywhere else positive parameters are
                // inside the domain.
                let p = if variety == Variety::V3tilde && info.index == 2 {
                    [params[0], 0.75 * params[1] * params[2] * params[0], params[2]]
                } else {
                    params
                };
                let res = contact_tangency(variety, info.index, &p)
                    .expect("sampled parameters lie in the stratum domain");
                stratum_max = stratum_max.max(res);
            }
            if stratum_max > worst_res {
                worst_res = stratum_max;
                worst_at = format!(
                    "{} stratum {} residual {stratum_max:.3e}",
                    variety.name(),
                    info.index
                );
            }
            per_stratum.push(serde_json::json!({
                "variety": variety.name(),
                "stratum": info.index,
                "max_contact_pairing": stratum_max,
            }));
        }
    }
    let pass = worst_res <= TOL;
    SuiteOutcome {
        name: "tangency",
        pass,
        worst: if worst_at.is_empty() {
            "no strata".to_string()
        } else {
            worst_at
        },
        detail: serde_json::json!({
            "samples_per_stratum": samples,
            "tolerance": TOL,
            "worst_residual": worst_res,
            "strata": per_stratum,
        }),
    }
}

fn a1a3_suite(samples: usize, seed: u64) -> SuiteOutcome {
    const TOL: f64 = 1e-12;
    let mut failures = 0usize;
    let mut worst_at = String::new();
    let mut mapped = Vec::new();
    for index in 0..MSTAR_STRATA {
        let raw = seeded_box::<3>(seed.wrapping_add(index as u64), [0.0; 3], [1.0; 3], samples);
        let mut hits = 0usize;
        for r in raw {
            // Strictly interior parameters per stratum, mirroring the
            // substitution's domain.
            let params = match index {
                0 | 1 => [0.1 + 1.4 * r[0], -1.5 + 3.0 * r[1], 0.1 + 1.4 * r[2]],
                _ => {
                    let qp = -1.5 + 3.0 * r[0];
                    [qp, -2.0 * qp * qp - (0.1 + 1.4 * r[1]), 0.1 + 1.4 * r[2]]
                }
            };
            let image = mstar_image(index, &params).expect("interior parameters");
            if membership(Variety::R2, &image, TOL) == Some(index) {
                hits += 1;
            } else {
                failures += 1;
                if worst_at.is_empty() {
                    worst_at = format!(
                        "stratum {index} params ({:.3}, {:.3}, {:.3}) missed its image stratum",
                        params[0], params[1], params[2]
                    );
                }
            }
        }
        mapped.push(serde_json::json!({
            "stratum": index,
            "hits": hits,
            "samples": samples,
        }));
    }
    let pass = failures == 0;
    SuiteOutcome {
        name: "a1a3",
        pass,
        worst: if pass {
            format!(
                "{MSTAR_STRATA} strata map onto their cone-pair strata at {samples} samples each"
            )
        } else {
            worst_at
        },
        detail: serde_json::json!({
            "samples_per_stratum": samples,
            "tolerance": TOL,
            "strata": mapped,
        }),
    }
}

fn phi3_suite(samples: usize, seed: u64) -> SuiteOutcome {
    const TOL: f64 = 1e-10;
    let mut failures = 0usize;
    let mut worst_at = String::new();
    let mut counts = Vec::new();
    for stratum in [0usize, 1] {
        let raw = seeded_box::<3>(
            seed.wrapping_add(stratum as u64),
            [0.05; 3],
            [1.2; 3],
            samples,
        );
        let mut extended_hits = 0usize;
        let mut proper_hits = 0usize;
        for params in raw {
            let point = parametrize(Variety::V3tilde, stratum, &params)
                .expect("positive parameters lie in the stratum domain");
            let reduced = phi3_reduce(&point.element);
            let extended = phi3_membership_extended(&reduced, TOL).is_some();
            let proper = phi3_membership(&reduced, TOL).is_some();
            if extended {
                extended_hits += 1;
            }
            if proper {
                proper_hits += 1;
            }
            // The conormal stratum must land on a branch proper; the body
            // stratum is only required to satisfy the extended reading.
            let ok = extended && (stratum != 1 || proper);
            if !ok {
                failures += 1;
                if worst_at.is_empty() {
                    worst_at = format!(
                        "stratum {stratum} params ({:.3}, {:.3}, {:.3}) left the reduced model",
                        params[0], params[1], params[2]
                    );
                }
            }
        }
        counts.push(serde_json::json!({
            "stratum": stratum,
            "extended_hits": extended_hits,
            "proper_hits": proper_hits,
            "samples": samples,
        }));
    }
    let pass = failures == 0;
    SuiteOutcome {
        name: "phi3",
        pass,
        worst: if pass {
            format!("reduction maps both strata into the model at {samples} samples each")
        } else {
            worst_at
        },
        detail: serde_json::json!({
            "samples_per_stratum": samples,
            "tolerance": TOL,
            "strata": counts,
        }),
    }
}
