//! `envelope` subcommand: evaluates the support-defect value of one normal
//! form over a sampling grid.  The body is the sublevel set `value ≤ 0`, so
//! the zero contour of the emitted field is the boundary section.

use crate::cfg::FileCfg;
use crate::out::{
    self, contour_segments, usage, AxisRange, CliError, Result, Stamp, SvgLayer,
};
use hullfront::genfam::GeneratingFamily;
use hullfront::quadmin::{envelope_r1, envelope_r2, envelope_r3, R3Config};
use hullfront::swallowtail::envelope_v3;
use hullfront::{AlphaProfile, Poly};
use serde::Serialize;
use std::collections::BTreeMap;
use std::path::Path;

#[derive(clap::Args, Debug)]
pub struct EnvelopeArgs {
    /// Normal form: r0, r1, r2, r3, or v3.
    #[arg(long)]
    pub form: Option<String>,
    /// Grid axes over x, y, z, t, e.g. `x=-1:1:101,t=-1:1:101`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Mixing-angle profile for r2: constant, linear, plus-quadratic,
    /// minus-quadratic.
    #[arg(long)]
    pub alpha: Option<String>,
    /// Base coefficient of the alpha profile (|a| < 1).
    #[arg(long)]
    pub a: Option<f64>,
    /// Fixed value of any coordinate the grid leaves out.
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    /// Off-diagonal fiber couplings of the r3 form.
    #[arg(long)]
    pub r3a: Option<f64>,
    #[arg(long)]
    pub r3b: Option<f64>,
    #[arg(long)]
    pub r3c: Option<f64>,
    /// Higher-order fiber terms of the r3 form: JSON list of
    /// `{"exps": [7 ints], "coeff": number}`.
    #[arg(long)]
    pub f3: Option<String>,
}

const FILE_KEYS: &[&str] = &[
    "form", "grid", "alpha", "a", "x", "y", "z", "t", "r3a", "r3b", "r3c", "f3",
];

/// Fully resolved envelope run; hashing this (it includes the seed) stamps
/// every output.
#[derive(Serialize)]
struct EnvelopeConfig {
    command: &'static str,
    form: String,
    grid: Vec<AxisRange>,
    fixed: BTreeMap<String, f64>,
    alpha: Option<AlphaProfile>,
    r3: Option<R3Params>,
    seed: u64,
}

#[derive(Serialize)]
struct R3Params {
    a: f64,
    b: f64,
    c: f64,
    f3: Vec<([u8; 7], f64)>,
}

/// Parses the `--f3` JSON term list into a polynomial.
pub fn parse_terms(text: &str) -> Result<Vec<([u8; 7], f64)>> {
    #[derive(serde::Deserialize)]
    struct Term {
        exps: Vec<u8>,
        coeff: f64,
    }
    let terms: Vec<Term> = serde_json::from_str(text)
        .map_err(|e| usage(format!("term list is not valid JSON: {e}")))?;
    let mut out = Vec::with_capacity(terms.len());
    for term in terms {
        let exps: [u8; 7] = term
            .exps
            .as_slice()
            .try_into()
            .map_err(|_| usage("each term needs exactly 7 exponents"))?;
        out.push((exps, term.coeff));
    }
    Ok(out)
}

pub fn poly_from_terms(terms: &[([u8; 7], f64)]) -> Poly {
    let mut p = Poly::zero();
    for &(exps, coeff) in terms {
        p = &p + &Poly::monomial(exps, coeff);
    }
    p
}

fn resolve(args: &EnvelopeArgs, file: &FileCfg, seed: u64) -> Result<EnvelopeConfig> {
    file.check_keys(FILE_KEYS)?;
    let form = args
        .form
        .clone()
        .or(file.str("form")?)
        .ok_or_else(|| usage("envelope needs --form (r0, r1, r2, r3, or v3)"))?;
    if !["r0", "r1", "r2", "r3", "v3"].contains(&form.as_str()) {
        return Err(usage(format!(
            "form `{form}` is not one of r0, r1, r2, r3, v3"
        )));
    }
    let grid_spec = args
        .grid
        .clone()
        .or(file.str("grid")?)
        .unwrap_or_else(|| "x=-1:1:101,t=-1:1:101".to_string());
    let grid = out::parse_grid(&grid_spec, &["x", "y", "z", "t"])?;

    let mut fixed = BTreeMap::new();
    for (name, flag) in [("x", args.x), ("y", args.y), ("z", args.z), ("t", args.t)] {
        if grid.iter().any(|a| a.name == name) {
            continue;
        }
        let value = match flag {
            Some(v) => v,
            None => file.f64(name)?.unwrap_or(0.0),
        };
        fixed.insert(name.to_string(), value);
    }

    let alpha = if form == "r2" {
        let kind = args
            .alpha
            .clone()
            .or(file.str("alpha")?)
            .unwrap_or_else(|| "constant".to_string());
        let a = match args.a {
            Some(v) => v,
            None => file.f64("a")?.unwrap_or(0.0),
        };
        let profile = match kind.as_str() {
            "constant" => AlphaProfile::Constant { a },
            "linear" => AlphaProfile::Linear { a },
            "plus-quadratic" => AlphaProfile::PlusQuadratic { a },
            "minus-quadratic" => AlphaProfile::MinusQuadratic { a },
            other => {
                return Err(usage(format!(
                    "alpha profile `{other}` is not one of constant, linear, \
                     plus-quadratic, minus-quadratic"
                )))
            }
        };
        Some(profile.new().map_err(|e| usage(format!("invalid alpha profile: {e}")))?)
    } else {
        None
    };

    let r3 = if form == "r3" {
        let pick = |flag: Option<f64>, key: &str| -> Result<f64> {
            Ok(match flag {
                Some(v) => v,
                None => file.f64(key)?.unwrap_or(0.0),
            })
        };
        let f3_text = args.f3.clone().or(file.str("f3")?);
        let f3 = match f3_text {
            Some(text) => parse_terms(&text)?,
            None => Vec::new(),
        };
        Some(R3Params {
            a: pick(args.r3a, "r3a")?,
            b: pick(args.r3b, "r3b")?,
            c: pick(args.r3c, "r3c")?,
            f3,
        })
    } else {
        None
    };

    Ok(EnvelopeConfig {
        command: "envelope",
        form,
        grid,
        fixed,
        alpha,
        r3,
        seed,
    })
}

/// Value of the configured form at one point.
struct Evaluator<'a> {
    form: &'a str,
    alpha: Option<&'a AlphaProfile>,
    r3_family: Option<(GeneratingFamily, R3Config)>,
}

impl Evaluator<'_> {
    fn value(&self, x: f64, y: f64, z: f64, t: f64) -> Result<f64> {
        match self.form {
            "r0" => Ok(t),
            "r1" => Ok(envelope_r1(x, y, z, t)),
            "r2" => envelope_r2(x, y, z, t, self.alpha.expect("alpha resolved for r2"))
                .map_err(|e| usage(format!("envelope value at z = {z}: {e}"))),
            "r3" => {
                let (family, config) = self.r3_family.as_ref().expect("family resolved for r3");
                envelope_r3(x, y, z, t, family, config)
                    .map(|sol| sol.value)
                    .map_err(|e| {
                        usage(format!("envelope value at ({x}, {y}, {z}, {t}): {e}"))
                    })
            }
            "v3" => envelope_v3(x, y, z, t)
                .map_err(|e| usage(format!("envelope value at ({x}, {y}, {z}): {e}"))),
            other => unreachable!("form {other} rejected at resolve time"),
        }
    }
}

pub fn run(args: &EnvelopeArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    let config = resolve(args, file, seed)?;
    let stamp = out::stamp(&config, seed);

    let r3_family = match &config.r3 {
        Some(p) => {
            let f3 = poly_from_terms(&p.f3);
            let family = GeneratingFamily::theorem_item4(p.a, p.b, p.c, &f3)
                .map_err(|e| usage(format!("invalid r3 form: {e}")))?;
            Some((family, R3Config::default()))
        }
        None => None,
    };
    let eval = Evaluator {
        form: &config.form,
        alpha: config.alpha.as_ref(),
        r3_family,
    };

    // Row-major walk, last axis fastest; fixed coordinates fill the rest.
    let axis_points: Vec<Vec<f64>> = config.grid.iter().map(|a| a.points()).collect();
    let total: usize = axis_points.iter().map(|p| p.len()).product();
    let coordinate = |name: &str, at: &[usize], cfg: &EnvelopeConfig| -> f64 {
        for (k, axis) in cfg.grid.iter().enumerate() {
            if axis.name == name {
                return axis_points[k][at[k]];
            }
        }
        *cfg.fixed.get(name).expect("missing coordinates are fixed")
    };

    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(total);
    let mut index = vec![0usize; config.grid.len()];
    for _ in 0..total {
        let x = coordinate("x", &index, &config);
        let y = coordinate("y", &index, &config);
        let z = coordinate("z", &index, &config);
        let t = coordinate("t", &index, &config);
        let value = eval.value(x, y, z, t)?;
        let mut row: Vec<f64> = index
            .iter()
            .enumerate()
            .map(|(k, &i)| axis_points[k][i])
            .collect();
        row.push(value);
        rows.push(row);
        for k in (0..index.len()).rev() {
            index[k] += 1;
            if index[k] < axis_points[k].len() {
                break;
            }
            index[k] = 0;
        }
    }

    let csv_name = format!("envelope_{}.csv", config.form);
    let mut columns: Vec<&str> = config.grid.iter().map(|a| a.name.as_str()).collect();
    columns.push("value");
    out::write_csv(
        &out::out_path(out_dir, &csv_name),
        &stamp,
        &columns,
        rows.iter().cloned(),
    )?;

    // The SVG sections the first two grid axes, any further axes held at
    // their midpoint sample.
    let mut outputs = vec![csv_name.clone()];
    let mut section = serde_json::Value::Null;
    if config.grid.len() >= 2 {
        let svg_name = format!("envelope_{}_section.svg", config.form);
        let (svg, fixed_at) = section_svg(&config, &axis_points, &rows, &stamp)?;
        out::write_svg(&out::out_path(out_dir, &svg_name), &svg)?;
        outputs.push(svg_name);
        section = serde_json::json!({
            "axes": [config.grid[0].name, config.grid[1].name],
            "fixed_at": fixed_at,
        });
    }

    let manifest_name = format!("envelope_{}_manifest.json", config.form);
    outputs.push(manifest_name.clone());
    let manifest = serde_json::json!({
        "command": "envelope",
        "form": config.form,
        "parameters": {
            "alpha": config.alpha,
            "r3": config.r3.as_ref().map(|p| serde_json::json!({
                "a": p.a, "b": p.b, "c": p.c, "f3": p.f3,
            })),
            "fixed": config.fixed,
        },
        "grid": config.grid,
        "seed": seed,
        "config_hash": stamp.config_hash,
        "section": section,
        "outputs": outputs,
    });
    out::write_json(&out::out_path(out_dir, &manifest_name), &manifest)?;
    println!(
        "envelope {}: {} nodes -> {}",
        config.form,
        total,
        out_dir.display()
    );
    Ok(())
}

/// Builds the 2D contour section over the first two grid axes.  Returns the
/// document and the held values of the remaining axes.
fn section_svg(
    config: &EnvelopeConfig,
    axis_points: &[Vec<f64>],
    rows: &[Vec<f64>],
    stamp: &Stamp,
) -> std::result::Result<(String, BTreeMap<String, f64>), CliError> {
    let dims: Vec<usize> = axis_points.iter().map(|p| p.len()).collect();
    // Strides of the row-major layout (last axis fastest).
    let mut strides = vec![1usize; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let mut fixed_at = BTreeMap::new();
    let mut base = 0usize;
    for k in 2..dims.len() {
        let mid = dims[k] / 2;
        base += mid * strides[k];
        fixed_at.insert(config.grid[k].name.clone(), axis_points[k][mid]);
    }
    let value_col = dims.len();
    let xs = &axis_points[0];
    let ys = &axis_points[1];
    let field = |i: usize, j: usize| rows[base + i * strides[0] + j * strides[1]][value_col];

    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..xs.len() {
        for j in 0..ys.len() {
            let v = field(i, j);
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }

    let mut layers = Vec::new();
    // Thin guide levels across the sampled range, bold zero contour on top.
    if hi > lo {
        let mut guides = Vec::new();
        for k in 1..=7 {
            let level = lo + (hi - lo) * k as f64 / 8.0;
            if level.abs() < 1e-15 {
                continue;
            }
            for seg in contour_segments(xs, ys, &|i, j| field(i, j), level) {
                guides.push(seg.to_vec());
            }
        }
        layers.push(SvgLayer {
            polylines: guides,
            stroke: "#b8c4d8".to_string(),
            width: 0.8,
        });
    }
    let zero: Vec<Vec<(f64, f64)>> = contour_segments(xs, ys, &|i, j| field(i, j), 0.0)
        .into_iter()
        .map(|seg| seg.to_vec())
        .collect();
    layers.push(SvgLayer {
        polylines: zero,
        stroke: "#c62828".to_string(),
        width: 1.8,
    });

    let title = format!(
        "{} envelope section ({}, {})",
        config.form, config.grid[0].name, config.grid[1].name
    );
    let svg = out::svg_section(
        stamp,
        &title,
        &config.grid[0].name,
        &config.grid[1].name,
        (xs[0], *xs.last().unwrap()),
        (ys[0], *ys.last().unwrap()),
        &layers,
    );
    Ok((svg, fixed_at))
}
