//! `front` subcommand: emits the singular-front height field of one normal
//! family over a base grid, with profile sections through the grid centre.

use crate::cfg::FileCfg;
use crate::envelope::{parse_terms, poly_from_terms};
use crate::out::{self, usage, AxisRange, Result, SvgLayer};
use hullfront::genfam::{front, FrontFamily, FrontSample, GeneratingFamily, GridSpec};
use hullfront::quadmin::R3Config;
use hullfront::AlphaProfile;
use serde::Serialize;
use std::path::Path;

#[derive(clap::Args, Debug)]
pub struct FrontArgs {
    /// Family: item1, item2, item3, item4, item5, item5-simple.
    #[arg(long)]
    pub family: Option<String>,
    /// Base grid, e.g. `x=-1:1:41,y=-1:1:41,z=-1:1:41` (all three axes).
    #[arg(long)]
    pub grid: Option<String>,
    /// Mixing-angle profile for item3 (see `envelope`).
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub a: Option<f64>,
    /// Off-diagonal fiber couplings for item4.
    #[arg(long)]
    pub r3a: Option<f64>,
    #[arg(long)]
    pub r3b: Option<f64>,
    #[arg(long)]
    pub r3c: Option<f64>,
    /// Higher-order fiber terms for item4 (JSON, see `envelope --f3`).
    #[arg(long)]
    pub f3: Option<String>,
}

const FILE_KEYS: &[&str] = &["family", "grid", "alpha", "a", "r3a", "r3b", "r3c", "f3"];

#[derive(Serialize)]
struct FrontConfig {
    command: &'static str,
    family: String,
    grid: Vec<AxisRange>,
    alpha: Option<AlphaProfile>,
    r3: Option<(f64, f64, f64, Vec<([u8; 7], f64)>)>,
    seed: u64,
}

fn resolve(args: &FrontArgs, file: &FileCfg, seed: u64) -> Result<FrontConfig> {
    file.check_keys(FILE_KEYS)?;
    let family = args
        .family
        .clone()
        .or(file.str("family")?)
        .ok_or_else(|| usage("front needs --family (item1..item5, item5-simple)"))?;
    let known = [
        "item1",
        "item2",
        "item3",
        "item4",
        "item5",
        "item5-simple",
    ];
    if !known.contains(&family.as_str()) {
        return Err(usage(format!(
            "family `{family}` is not one of {}",
            known.join(", ")
        )));
    }
    let grid_spec = args
        .grid
        .clone()
        .or(file.str("grid")?)
        .unwrap_or_else(|| "x=-1:1:41,y=-1:1:41,z=-1:1:41".to_string());
    let axes = out::parse_grid(&grid_spec, &["x", "y", "z"])?;
    if axes.len() != 3 || axes[0].name != "x" || axes[1].name != "y" || axes[2].name != "z" {
        return Err(usage("front grid must name x, y, z in order"));
    }

    let alpha = if family == "item3" {
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

    let r3 = if family == "item4" {
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
        Some((
            pick(args.r3a, "r3a")?,
            pick(args.r3b, "r3b")?,
            pick(args.r3c, "r3c")?,
            f3,
        ))
    } else {
        None
    };

    Ok(FrontConfig {
        command: "front",
        family,
        grid: axes,
        alpha,
        r3,
        seed,
    })
}

pub fn run(args: &FrontArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    let config = resolve(args, file, seed)?;
    let stamp = out::stamp(&config, seed);

    let family = match config.family.as_str() {
        "item1" => FrontFamily::Item1,
        "item2" => FrontFamily::Item2,
        "item3" => FrontFamily::Item3(config.alpha.clone().expect("alpha resolved for item3")),
        "item4" => {
            let (a, b, c, terms) = config.r3.as_ref().expect("couplings resolved for item4");
            let f3 = poly_from_terms(terms);
            let family = GeneratingFamily::theorem_item4(*a, *b, *c, &f3)
                .map_err(|e| usage(format!("degenerate family: {e}")))?;
            if family.nondegeneracy_determinant().abs() < 1e-12 {
                return Err(usage(
                    "degenerate family: non-degeneracy determinant below 1e-12 at the origin",
                ));
            }
            FrontFamily::Item4 {
                family,
                config: R3Config::default(),
            }
        }
        "item5" => FrontFamily::Item5,
        "item5-simple" => FrontFamily::Item5Simple,
        other => unreachable!("family {other} rejected at resolve time"),
    };

    let grid = GridSpec {
        x: axis_spec(&config.grid[0])?,
        y: axis_spec(&config.grid[1])?,
        z: axis_spec(&config.grid[2])?,
    };
    let sample: FrontSample =
        front(&family, &grid).map_err(|e| usage(format!("front evaluation failed: {e}")))?;

    // CSV of the full height field in grid-index order.
    let csv_name = format!("front_{}.csv", config.family);
    let xs = grid.x.points();
    let ys = grid.y.points();
    let zs = grid.z.points();
    let mut rows = Vec::with_capacity(sample.heights.len());
    for (ix, &x) in xs.iter().enumerate() {
        for (iy, &y) in ys.iter().enumerate() {
            for (iz, &z) in zs.iter().enumerate() {
                let h = sample.heights[grid.index(ix, iy, iz)];
                rows.push(vec![x, y, z, h]);
            }
        }
    }
    out::write_csv(
        &out::out_path(out_dir, &csv_name),
        &stamp,
        &["x", "y", "z", "height"],
        rows.into_iter(),
    )?;

    // Two profile sections through the grid centre: height against x and
    // against y, the remaining base coordinates held at their midpoints.
    let mut outputs = vec![csv_name.clone()];
    for (axis_name, points, height_at) in [
        (
            "x",
            &xs,
            Box::new(|i: usize| sample.heights[grid.index(i, ys.len() / 2, zs.len() / 2)])
                as Box<dyn Fn(usize) -> f64>,
        ),
        (
            "y",
            &ys,
            Box::new(|j: usize| sample.heights[grid.index(xs.len() / 2, j, zs.len() / 2)]),
        ),
    ] {
        let line: Vec<(f64, f64)> = points
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, height_at(i)))
            .collect();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(_, h) in &line {
            lo = lo.min(h);
            hi = hi.max(h);
        }
        if !(lo.is_finite() && hi.is_finite()) {
            continue;
        }
        if hi - lo < 1e-12 {
            hi = lo + 1.0;
        }
        let svg = out::svg_section(
            &stamp,
            &format!("{} front profile over {}", config.family, axis_name),
            axis_name,
            "t",
            (points[0], *points.last().unwrap()),
            (lo, hi),
            &[SvgLayer {
                polylines: vec![line],
                stroke: "#1565c0".to_string(),
                width: 1.8,
            }],
        );
        let svg_name = format!("front_{}_{}_section.svg", config.family, axis_name);
        out::write_svg(&out::out_path(out_dir, &svg_name), &svg)?;
        outputs.push(svg_name);
    }

    let manifest_name = format!("front_{}_manifest.json", config.family);
    outputs.push(manifest_name.clone());
    let manifest = serde_json::json!({
        "command": "front",
        "family": config.family,
        "parameters": {
            "alpha": config.alpha,
            "r3": config.r3,
        },
        "grid": config.grid,
        "cooriented_up": sample.cooriented_up,
        "seed": seed,
        "config_hash": stamp.config_hash,
        "outputs": outputs,
    });
    out::write_json(&out::out_path(out_dir, &manifest_name), &manifest)?;
    println!(
        "front {}: {} heights, cooriented_up={} -> {}",
        config.family,
        sample.heights.len(),
        sample.cooriented_up,
        out_dir.display()
    );
    Ok(())
}

fn axis_spec(axis: &AxisRange) -> Result<hullfront::genfam::AxisSpec> {
    hullfront::genfam::AxisSpec::new(axis.lo, axis.hi, axis.n)
        .map_err(|e| usage(format!("bad grid axis {}: {e}", axis.name)))
}
