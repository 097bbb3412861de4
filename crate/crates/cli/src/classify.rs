//! `classify` subcommand: runs the support-scan singularity classification
//! of a convex body given as a named analytic sample cloud or a JSON point
//! list, and writes the stratification summary plus a per-direction label
//! table.

use crate::cfg::FileCfg;
use crate::out::{self, usage, Result};
use hullfront::classify::{
    caltrop, classify_body, ellipsoid, peanut, perturbed_peanut, torus, ClassifyConfig,
    PointCloudBody,
};
use serde::Serialize;
use std::path::Path;

#[derive(clap::Args, Debug)]
pub struct ClassifyArgs {
    /// Built-in body: ellipsoid, peanut, caltrop, torus, perturbed-peanut.
    #[arg(long)]
    pub body: Option<String>,
    /// JSON point-list file: `[[x,y,z],...]`, `[[x,y,z,w],...]`, or
    /// `{"dim": 3|4, "points": [[x,y,z,w],...]}`.
    #[arg(long)]
    pub points: Option<String>,
    /// Sample count of the built-in body surface.
    #[arg(long)]
    pub density: Option<usize>,
    /// Scan directions (defaults to the classifier's own choice).
    #[arg(long)]
    pub directions: Option<usize>,
    /// Contact-cluster tolerance relative to the body diameter.
    #[arg(long)]
    pub cluster_tol: Option<f64>,
    /// Ellipsoid semi-axes, e.g. `1.3,1.0,0.8`.
    #[arg(long)]
    pub semi_axes: Option<String>,
}

const FILE_KEYS: &[&str] = &[
    "body",
    "points",
    "density",
    "directions",
    "cluster_tol",
    "semi_axes",
];

#[derive(Serialize)]
struct ResolvedClassify {
    command: &'static str,
    body: String,
    density: Option<usize>,
    semi_axes: Option<[f64; 3]>,
    classifier: ClassifyConfig,
    seed: u64,
}

fn parse_semi_axes(text: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(usage("semi-axes must be three comma-separated numbers"));
    }
    let mut axes = [0.0; 3];
    for (slot, part) in axes.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| usage(format!("bad semi-axis `{part}`")))?;
        if !(*slot > 0.0) {
            return Err(usage("semi-axes must be positive"));
        }
    }
    Ok(axes)
}

/// Accepts a bare point array (rows of 3 or 4 coordinates) or an object with
/// explicit dimension.
fn load_points(path: &Path) -> Result<PointCloudBody> {
    #[derive(serde::Deserialize)]
    struct Explicit {
        dim: usize,
        points: Vec<Vec<f64>>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read body file {}: {e}", path.display())))?;
    let (dim, rows): (Option<usize>, Vec<Vec<f64>>) =
        match serde_json::from_str::<Explicit>(&text) {
            Ok(e) => (Some(e.dim), e.points),
            Err(_) => {
                let rows: Vec<Vec<f64>> = serde_json::from_str(&text).map_err(|e| {
                    usage(format!(
                        "body file {} is neither an object with dim/points nor a point array: {e}",
                        path.display()
                    ))
                })?;
                (None, rows)
            }
        };
    if rows.is_empty() {
        return Err(usage("body point list is empty"));
    }
    let width = rows[0].len();
    if width != 3 && width != 4 {
        return Err(usage("body points need 3 or 4 coordinates"));
    }
    let dim = match dim {
        Some(d) if d == 3 || d == 4 => d,
        Some(d) => return Err(usage(format!("body dimension {d} is not 3 or 4"))),
        None => width,
    };
    if dim < width {
        return Err(usage("body dimension smaller than the coordinate count"));
    }
    let mut points = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(usage(format!("body point {i} has {} coordinates, expected {width}", row.len())));
        }
        let mut p = [0.0f64; 4];
        for (slot, &c) in p.iter_mut().zip(row.iter()) {
            if !c.is_finite() {
                return Err(usage(format!("body point {i} has a non-finite coordinate")));
            }
            *slot = c;
        }
        points.push(p);
    }
    Ok(PointCloudBody::new(dim, points))
}

pub fn run(args: &ClassifyArgs, file: &FileCfg, seed: u64, out_dir: &Path) -> Result<()> {
    file.check_keys(FILE_KEYS)?;
    let body_name = args.body.clone().or(file.str("body")?);
    let points_path = args.points.clone().or(file.str("points")?);
    if body_name.is_some() == points_path.is_some() {
        return Err(usage("classify needs exactly one of --body or --points"));
    }
    let density = match args.density {
        Some(n) => Some(n),
        None => file.usize("density")?,
    };
    let semi_axes = match &args.semi_axes {
        Some(t) => Some(parse_semi_axes(t)?),
        None => file
            .str("semi_axes")?
            .as_deref()
            .map(parse_semi_axes)
            .transpose()?,
    };

    let mut classifier = ClassifyConfig::default();
    if let Some(n) = args.directions.or(file.usize("directions")?) {
        classifier.n_directions = n;
    }
    if let Some(tol) = match args.cluster_tol {
        Some(v) => Some(v),
        None => file.f64("cluster_tol")?,
    } {
        if !(tol > 0.0) {
            return Err(usage("cluster tolerance must be positive"));
        }
        classifier.cluster_tol = tol;
    }

    let n = density.unwrap_or(3000);
    let (label, body) = match (&body_name, &points_path) {
        (Some(name), None) => {
            let body = match name.as_str() {
                "ellipsoid" => {
                    let [a, b, c] = semi_axes.unwrap_or([1.3, 1.0, 0.8]);
                    ellipsoid(a, b, c, n)
                }
                "peanut" => peanut(n),
                "caltrop" => caltrop(n),
                "torus" => torus(1.0, 0.4, n),
                "perturbed-peanut" => perturbed_peanut(n, n / 2),
                other => {
                    return Err(usage(format!(
                        "body `{other}` is not one of ellipsoid, peanut, caltrop, torus, \
                         perturbed-peanut"
                    )))
                }
            };
            (name.clone(), body)
        }
        (None, Some(path)) => ("points".to_string(), load_points(Path::new(path))?),
        _ => unreachable!("validated above"),
    };

    let config = ResolvedClassify {
        command: "classify",
        body: label.clone(),
        density,
        semi_axes,
        classifier: classifier.clone(),
        seed,
    };
    let stamp = out::stamp(&config, seed);

    let report =
        classify_body(&body, &classifier).map_err(|e| usage(format!("malformed body: {e}")))?;

    let summary_name = "classify_summary.json";
    let summary = serde_json::json!({
        "command": "classify",
        "body": label,
        "density": density,
        "classifier": classifier,
        "seed": seed,
        "config_hash": stamp.config_hash,
        "report": report,
    });
    out::write_json(&out::out_path(out_dir, summary_name), &summary)?;

    // Direction-label table: one row per family member direction.
    let mut rows: Vec<Vec<String>> = Vec::new();
    for (family_index, family) in report.families.iter().enumerate() {
        for dir in &family.directions {
            let mut row = vec![family_index.to_string(), family.label.clone()];
            row.extend(dir.iter().map(|c| format!("{c:.16e}")));
            rows.push(row);
        }
    }
    out::write_csv_text(
        &out::out_path(out_dir, "classify_directions.csv"),
        &stamp,
        &["family", "label", "d1", "d2", "d3", "d4"],
        rows.into_iter(),
    )?;

    let catalogue: Vec<String> = report
        .catalogue
        .iter()
        .map(|(k, v)| format!("{k} x{v}"))
        .collect();
    println!(
        "classify {}: {} directions, {} families [{}] -> {}",
        label,
        report.directions_scanned,
        report.families.len(),
        catalogue.join(", "),
        out_dir.display()
    );
    Ok(())
}
