//! `swallowtail` subcommand: point membership, certified projection, and 2D
//! discriminant sections of the quartic-positivity body.

use crate::cfg::FileCfg;
use crate::out::{self, contour_segments, usage, AxisRange, Result, SvgLayer};
use hullfront::swallowtail::{project_to_v3, ProjectionConfig, QuarticPoint};
use serde::Serialize;
use std::path::Path;

#[derive(clap::Subcommand, Debug)]
pub enum SwallowtailMode {
    /// Tests whether a base point lies in the body.
    Membership(PointArgs),
    /// Projects an exterior point onto the body with a tangency certificate.
    Projection(PointArgs),
    /// Samples the minimum-quartic field over a 2D section.
    Section(SectionArgs),
}

#[derive(clap::Args, Debug)]
pub struct PointArgs {
    /// Base point `u,v,w`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Option<String>,
}

#[derive(clap::Args, Debug)]
pub struct SectionArgs {
    /// Two of u, v, w, e.g. `v=-3:3:201,w=-3:3:201`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Fixed value of the remaining coordinate.
    #[arg(long, allow_negative_numbers = true)]
    pub u: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
}

#[derive(Serialize)]
struct PointConfig {
    command: &'static str,
    mode: &'static str,
    point: [f64; 3],
    seed: u64,
}

#[derive(Serialize)]
struct SectionConfig {
    command: &'static str,
    mode: &'static str,
    grid: Vec<AxisRange>,
    fixed_name: String,
    fixed_value: f64,
    seed: u64,
}

fn parse_point(text: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(usage("point must be three comma-separated numbers u,v,w"));
    }
    let mut p = [0.0f64; 3];
    for (slot, part) in p.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad coordinate `{part}`")))?;
        if !slot.is_finite() {
            return Err(usage("point coordinates must be finite"));
        }
    }
    Ok(p)
}

pub fn run(mode: &SwallowtailMode, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    match mode {
        SwallowtailMode::Membership(args) => membership(args, file, seed, out_dir),
        SwallowtailMode::Projection(args) => projection(args, file, seed, out_dir),
        SwallowtailMode::Section(args) => section(args, file, seed, out_dir),
    }
}

fn resolve_point(args: &PointArgs, file: &FileCfg) -> Result<[f64; 3]> {
    file.check_keys(&["point"])?;
    let text = args
        .point
        .clone()
        .or(file.str("point")?)
        .ok_or_else(|| usage("needs --point u,v,w"))?;
    parse_point(&text)
}

fn membership(args: &PointArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    let point = resolve_point(args, file)?;
    let config = PointConfig {
        command: "swallowtail",
        mode: "membership",
        point,
        seed,
    };
    let stamp = out::stamp(&config, seed);
    let qp = QuarticPoint::new(point[0], point[1], point[2]);
    let (min_value, minimizers) = qp.min_value();
    let report = serde_json::json!({
        "command": "swallowtail",
        "mode": "membership",
        "point": point,
        "inside": qp.contains(),
        "min_quartic_value": min_value,
        "minimizers": minimizers,
        "discriminant": qp.discriminant(),
        "seed": seed,
        "config_hash": stamp.config_hash,
    });
    out::write_json(&out::out_path(out_dir, "swallowtail_membership.json"), &report)?;
    println!(
        "membership ({}, {}, {}): inside={} min={:.6e}",
        point[0],
        point[1],
        point[2],
        qp.contains(),
        min_value
    );
    Ok(())
}

fn projection(args: &PointArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    let point = resolve_point(args, file)?;
    let config = PointConfig {
        command: "swallowtail",
        mode: "projection",
        point,
        seed,
    };
    let stamp = out::stamp(&config, seed);
    let projection = project_to_v3(point, &ProjectionConfig::default())
        .map_err(|e| usage(format!("projection failed: {e}")))?;
    let alignment = projection.alignment_angle(point);
    let report = serde_json::json!({
        "command": "swallowtail",
        "mode": "projection",
        "point": point,
        "projection": projection,
        "alignment_angle": alignment,
        "seed": seed,
        "config_hash": stamp.config_hash,
    });
    out::write_json(&out::out_path(out_dir, "swallowtail_projection.json"), &report)?;
    println!(
        "projection ({}, {}, {}): distance={:.6e} alignment={:.3e} rad",
        point[0], point[1], point[2], projection.distance, alignment
    );
    Ok(())
}

fn section(args: &SectionArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    file.check_keys(&["grid", "u", "v", "w"])?;
    let grid_spec = args
        .grid
        .clone()
        .or(file.str("grid")?)
        .unwrap_or_else(|| "v=-3:3:201,w=-3:3:201".to_string());
    let axes = out::parse_grid(&grid_spec, &["u", "v", "w"])?;
    if axes.len() != 2 {
        return Err(usage("section grid must name exactly two of u, v, w"));
    }
    let fixed_name = ["u", "v", "w"]
        .iter()
        .find(|n| !axes.iter().any(|a| &a.name == *n))
        .expect("two of three axes taken")
        .to_string();
    let fixed_flag = match fixed_name.as_str() {
        "u" => args.u,
        "v" => args.v,
        _ => args.w,
    };
    let fixed_value = match fixed_flag {
        Some(v) => v,
        None => file.f64(&fixed_name)?.unwrap_or(-2.0),
    };

    let config = SectionConfig {
        command: "swallowtail",
        mode: "section",
        grid: axes,
        fixed_name: fixed_name.clone(),
        fixed_value,
        seed,
    };
    let stamp = out::stamp(&config, seed);

    let as_uvw = |a: f64, b: f64| -> [f64; 3] {
        let mut p = [fixed_value; 3];
        let names = ["u", "v", "w"];
        let ia = names.iter().position(|n| *n == config.grid[0].name).unwrap();
        let ib = names.iter().position(|n| *n == config.grid[1].name).unwrap();
        let ifix = names.iter().position(|n| *n == fixed_name).unwrap();
        p[ia] = a;
        p[ib] = b;
        p[ifix] = fixed_value;
        p
    };

    let apoints = config.grid[0].points();
    let bpoints = config.grid[1].points();
    let mut rows = Vec::with_capacity(apoints.len() * bpoints.len());
    let mut values = vec![0.0f64; apoints.len() * bpoints.len()];
    for (i, &a) in apoints.iter().enumerate() {
        for (j, &b) in bpoints.iter().enumerate() {
            let [u, v, w] = as_uvw(a, b);
            let qp = QuarticPoint::new(u, v, w);
            let (min_value, _) = qp.min_value();
            values[i * bpoints.len() + j] = min_value;
            rows.push(vec![
                a,
                b,
                min_value,
                if qp.contains() { 1.0 } else { 0.0 },
                qp.discriminant(),
            ]);
        }
    }

    let csv_name = "swallowtail_section.csv";
    let columns = [
        config.grid[0].name.as_str(),
        config.grid[1].name.as_str(),
        "min_quartic_value",
        "inside",
        "discriminant",
    ];
    out::write_csv(
        &out::out_path(out_dir, csv_name),
        &stamp,
        &columns,
        rows.into_iter(),
    )?;

    // Boundary of the body (zero level of the minimum) over the section,
    // with the discriminant's zero set as a thin guide.
    let field = |i: usize, j: usize| values[i * bpoints.len() + j];
    let disc = |i: usize, j: usize| {
        let [u, v, w] = as_uvw(apoints[i], bpoints[j]);
        QuarticPoint::new(u, v, w).discriminant()
    };
    let layers = vec![
        SvgLayer {
            polylines: contour_segments(&apoints, &bpoints, &disc, 0.0)
                .into_iter()
                .map(|s| s.to_vec())
                .collect(),
            stroke: "#b8c4d8".to_string(),
            width: 0.8,
        },
        SvgLayer {
            polylines: contour_segments(&apoints, &bpoints, &field, 0.0)
                .into_iter()
                .map(|s| s.to_vec())
                .collect(),
            stroke: "#c62828".to_string(),
            width: 1.8,
        },
    ];
    let svg = out::svg_section(
        &stamp,
        &format!("swallowtail section at {fixed_name} = {fixed_value}"),
        &config.grid[0].name,
        &config.grid[1].name,
        (apoints[0], *apoints.last().unwrap()),
        (bpoints[0], *bpoints.last().unwrap()),
        &layers,
    );
    let svg_name = "swallowtail_section.svg";
    out::write_svg(&out::out_path(out_dir, svg_name), &svg)?;

    let manifest = serde_json::json!({
        "command": "swallowtail",
        "mode": "section",
        "grid": config.grid,
        "fixed": { "name": config.fixed_name, "value": fixed_value },
        "seed": seed,
        "config_hash": stamp.config_hash,
        "outputs": [csv_name, svg_name, "swallowtail_section_manifest.json"],
    });
    out::write_json(
        &out::out_path(out_dir, "swallowtail_section_manifest.json"),
        &manifest,
    )?;
    println!(
        "section {} x {} at {} = {}: {} nodes -> {}",
        config.grid[0].name,
        config.grid[1].name,
        fixed_name,
        fixed_value,
        apoints.len() * bpoints.len(),
        out_dir.display()
    );
    Ok(())
}
