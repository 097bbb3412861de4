//! Shared output plumbing: error-to-exit-code mapping, the config stamp
//! embedded in every file, CSV/JSON/SVG writers, grid-flag parsing, and a
//! marching-squares contour tracer.
//!
//! Determinism contract: every writer is a pure function of its arguments,
//! floats are printed with 17 significant digits (`{:.16e}`), and iteration
//! orders are fixed, so identical resolved configurations produce
//! byte-identical files.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Failure modes mapped onto the stable exit-code contract: usage and
/// configuration problems exit 2, verification failures exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) => m,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Reproducibility stamp written into every output file.
#[derive(Clone, Debug, Serialize)]
pub struct Stamp {
    pub config_hash: String,
    pub seed: u64,
}

/// Hashes the fully resolved run configuration (which itself records the
/// seed) so outputs can be traced back to the exact inputs.
pub fn stamp<T: Serialize>(config: &T, seed: u64) -> Stamp {
    let json = serde_json::to_string(config).expect("run configuration serializes");
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    Stamp {
        config_hash: format!("{:x}", hasher.finalize()),
        seed,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)
                .map_err(|e| usage(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    fs::write(path, contents).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

/// Writes a CSV table: two stamp comment lines, a header row, then one row
/// per record with every value in full-precision scientific notation.
pub fn write_csv(
    path: &Path,
    stamp: &Stamp,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "# config_hash={}", stamp.config_hash);
    let _ = writeln!(s, "# seed={}", stamp.seed);
    let _ = writeln!(s, "{}", columns.join(","));
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v:.16e}");
        }
        s.push('\n');
    }
    write_file(path, &s)
}

/// Writes a CSV table whose rows mix text and numeric cells.
pub fn write_csv_text(
    path: &Path,
    stamp: &Stamp,
    columns: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let mut s = String::new();
    let _ = writeln!(s, "# config_hash={}", stamp.config_hash);
    let _ = writeln!(s, "# seed={}", stamp.seed);
    let _ = writeln!(s, "{}", columns.join(","));
    for row in rows {
        let _ = writeln!(s, "{}", row.join(","));
    }
    write_file(path, &s)
}

/// Pretty-prints a JSON value (the caller embeds the stamp as fields).
pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("json value serializes");
    s.push('\n');
    write_file(path, &s)
}

/// One stroked layer of an SVG section: a set of polylines in data
/// coordinates.
pub struct SvgLayer {
    pub polylines: Vec<Vec<(f64, f64)>>,
    pub stroke: String,
    pub width: f64,
}

/// Renders polyline layers into a framed 2D section with axis labels and the
/// reproducibility stamp in a leading comment.
pub fn svg_section(
    stamp: &Stamp,
    title: &str,
    x_label: &str,
    y_label: &str,
    x_range: (f64, f64),
    y_range: (f64, f64),
    layers: &[SvgLayer],
) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const ML: f64 = 56.0; // left margin
    const MR: f64 = 16.0;
    const MT: f64 = 36.0;
    const MB: f64 = 44.0;
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    let sx = (W - ML - MR) / if x1 > x0 { x1 - x0 } else { 1.0 };
    let sy = (H - MT - MB) / if y1 > y0 { y1 - y0 } else { 1.0 };
    let map = |p: (f64, f64)| -> (f64, f64) {
        (ML + (p.0 - x0) * sx, H - MB - (p.1 - y0) * sy)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">"
    );
    let _ = writeln!(
        s,
        "<!-- config_hash={} seed={} -->",
        stamp.config_hash, stamp.seed
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<rect x=\"{ML}\" y=\"{MT}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" \
         stroke=\"#444\" stroke-width=\"1\"/>",
        W - ML - MR,
        H - MT - MB
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"22\" font-family=\"monospace\" font-size=\"14\" \
         text-anchor=\"middle\">{}</text>",
        W / 2.0,
        title
    );
    let _ = writeln!(
        s,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"middle\">{}</text>",
        W / 2.0,
        H - 12.0,
        x_label
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{:.2}\" font-family=\"monospace\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>",
        H / 2.0,
        H / 2.0,
        y_label
    );
    // Corner tick labels keep the section quantitative without a full axis.
    for (value, x, y, anchor) in [
        (x0, ML, H - MB + 16.0, "start"),
        (x1, W - MR, H - MB + 16.0, "end"),
        (y0, ML - 6.0, H - MB, "end"),
        (y1, ML - 6.0, MT + 10.0, "end"),
    ] {
        let _ = writeln!(
            s,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"monospace\" font-size=\"11\" \
             text-anchor=\"{anchor}\">{value:.3}</text>"
        );
    }
    for layer in layers {
        for line in &layer.polylines {
            if line.len() < 2 {
                continue;
            }
            let mut points = String::new();
            for &p in line {
                let (px, py) = map(p);
                let _ = write!(points, "{px:.2},{py:.2} ");
            }
            let _ = writeln!(
                s,
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{}\"/>",
                points.trim_end(),
                layer.stroke,
                layer.width
            );
        }
    }
    let _ = writeln!(s, "</svg>");
    s
}

pub fn write_svg(path: &Path, contents: &str) -> Result<()> {
    write_file(path, contents)
}

/// One axis of a sampling grid, parsed from `name=lo:hi:n`.
#[derive(Clone, Debug, Serialize)]
pub struct AxisRange {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl AxisRange {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + step * i as f64).collect()
    }
}

/// Parses a grid flag such as `x=-1:1:101,t=-1:1:101`, restricted to the
/// given axis names, each at most once.
pub fn parse_grid(spec: &str, allowed: &[&str]) -> Result<Vec<AxisRange>> {
    let mut axes: Vec<AxisRange> = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, range) = part
            .split_once('=')
            .ok_or_else(|| usage(format!("grid axis `{part}` is not of the form name=lo:hi:n")))?;
        if !allowed.contains(&name) {
            return Err(usage(format!(
                "grid axis `{name}` is not one of {}",
                allowed.join(", ")
            )));
        }
        if axes.iter().any(|a| a.name == name) {
            return Err(usage(format!("grid axis `{name}` given twice")));
        }
        let fields: Vec<&str> = range.split(':').collect();
        if fields.len() != 3 {
            return Err(usage(format!("grid axis `{part}` is not of the form name=lo:hi:n")));
        }
        let lo: f64 = fields[0]
            .parse()
            .map_err(|_| usage(format!("grid axis `{name}`: bad lower bound `{}`", fields[0])))?;
        let hi: f64 = fields[1]
            .parse()
            .map_err(|_| usage(format!("grid axis `{name}`: bad upper bound `{}`", fields[1])))?;
        let n: usize = fields[2]
            .parse()
            .map_err(|_| usage(format!("grid axis `{name}`: bad point count `{}`", fields[2])))?;
        if n == 0 {
            return Err(usage(format!("grid axis `{name}`: point count must be positive")));
        }
        if !(lo.is_finite() && hi.is_finite()) || hi < lo {
            return Err(usage(format!("grid axis `{name}`: need finite lo <= hi")));
        }
        axes.push(AxisRange {
            name: name.to_string(),
            lo,
            hi,
            n,
        });
    }
    if axes.is_empty() {
        return Err(usage("grid must name at least one axis"));
    }
    Ok(axes)
}

/// Traces the `level` contour of a scalar field sampled on a rectilinear
/// grid by marching squares with linear edge interpolation.  Returns
/// segments in data coordinates; saddle cells are split by the cell-centre
/// average, which keeps the output deterministic.
pub fn contour_segments(
    xs: &[f64],
    ys: &[f64],
    value: &dyn Fn(usize, usize) -> f64,
    level: f64,
) -> Vec<[(f64, f64); 2]> {
    let mut segments = Vec::new();
    if xs.len() < 2 || ys.len() < 2 {
        return segments;
    }
    // Edge crossing between two grid nodes, linearly interpolated.
    let cross = |a: f64, b: f64| (level - a) / (b - a);
    for j in 0..ys.len() - 1 {
        for i in 0..xs.len() - 1 {
            let v = [
                value(i, j),
                value(i + 1, j),
                value(i + 1, j + 1),
                value(i, j + 1),
            ];
            if v.iter().any(|t| !t.is_finite()) {
                continue;
            }
            let mut case = 0usize;
            for (bit, t) in v.iter().enumerate() {
                if *t > level {
                    case |= 1 << bit;
                }
            }
            if case == 0 || case == 15 {
                continue;
            }
            let corners = [
                (xs[i], ys[j]),
                (xs[i + 1], ys[j]),
                (xs[i + 1], ys[j + 1]),
                (xs[i], ys[j + 1]),
            ];
            // Interpolated crossing on edge k (corner k to corner (k+1)%4).
            let edge_point = |k: usize| -> (f64, f64) {
                let (a, b) = (v[k], v[(k + 1) % 4]);
                let t = cross(a, b).clamp(0.0, 1.0);
                let (pa, pb) = (corners[k], corners[(k + 1) % 4]);
                (pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1))
            };
            let mut push = |ea: usize, eb: usize| {
                segments.push([edge_point(ea), edge_point(eb)]);
            };
            match case {
                1 | 14 => push(3, 0),
                2 | 13 => push(0, 1),
                4 | 11 => push(1, 2),
                8 | 7 => push(2, 3),
                3 | 12 => push(3, 1),
                6 | 9 => push(0, 2),
                5 | 10 => {
                    // Saddle: disambiguate with the cell-centre average.
                    let centre = 0.25 * (v[0] + v[1] + v[2] + v[3]);
                    let joined = (centre > level) == (case == 5);
                    if joined {
                        push(3, 0);
                        push(1, 2);
                    } else {
                        push(0, 1);
                        push(2, 3);
                    }
                }
                _ => unreachable!("cases 0 and 15 are filtered"),
            }
        }
    }
    segments
}

/// Joins a file name onto the output directory.
pub fn out_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing_round_trips_and_rejects_junk() {
        let axes = parse_grid("x=-1:1:101,t=-1:1:3", &["x", "y", "z", "t"]).unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(axes[0].name, "x");
        assert_eq!(axes[1].points(), vec![-1.0, 0.0, 1.0]);
        assert!(parse_grid("q=-1:1:5", &["x", "t"]).is_err());
        assert!(parse_grid("x=-1:1:0", &["x"]).is_err());
        assert!(parse_grid("x=1:-1:5", &["x"]).is_err());
        assert!(parse_grid("x=-1:1:5,x=0:1:2", &["x"]).is_err());
        assert!(parse_grid("", &["x"]).is_err());
    }

    #[test]
    fn contour_of_a_linear_field_is_a_straight_cut() {
        // value = x over [0,1]²: the 0.5 contour is the vertical line x=0.5.
        let xs: Vec<f64> = (0..5).map(|i| i as f64 / 4.0).collect();
        let ys = xs.clone();
        let segs = contour_segments(&xs, &ys, &|i, _| xs[i], 0.5);
        assert!(!segs.is_empty());
        for [a, b] in segs {
            assert!((a.0 - 0.5).abs() < 1e-12 && (b.0 - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn stamp_is_stable_for_equal_configs() {
        #[derive(Serialize)]
        struct C {
            a: u32,
        }
        let s1 = stamp(&C { a: 7 }, 3);
        let s2 = stamp(&C { a: 7 }, 3);
        assert_eq!(s1.config_hash, s2.config_hash);
        assert_eq!(s1.config_hash.len(), 64);
    }
}
