//! Command-line front end. One tool, subcommand style: read an exponential
//! sum as JSON from a file or stdin, write JSON (CSV for `plotdata`) to a
//! file or stdout. Exit 0 on success, 2 when the input or flags are invalid,
//! 3 when a numerical procedure gives up or a verification suite fails.

use clap::{Parser, Subcommand};
use serde::Serialize;
use std::io::Read;
use std::path::PathBuf;

use crate::expsum::{minimal_spacing, ExpSum};
use crate::metric::{bounds, witness_family};
use crate::roots::{strip_count_bounds, winding_count_detailed, CountInterval, Rectangle};
use crate::tropical::{
    cell_query, clusters_1d, root_free_strips, root_interval, skeleton_2d, trop_points_1d,
    trop_vertices, Cluster,
};
use crate::verify::{run_suite, SuiteReport};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "exptrop",
    version,
    about = "Tropical varieties of exponential sums: root strips, winding counts, distance bounds"
)]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tropical points (univariate) or tropical vertices (multivariate)
    Trop {
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Polyhedral cell of the subdivision containing a query point
    Cells {
        /// Query point, comma-separated coordinates
        #[arg(long, value_name = "X,Y,..", allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Root count of a rectangle with multiplicity (univariate)
    Count {
        /// Rectangle re1,re2,im1,im2
        #[arg(long, value_name = "X1,X2,U,V", allow_hyphen_values = true)]
        rect: String,
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Root interval, root-free strips, clusters, optional strip counts
    Strips {
        /// Horizontal strip im1,im2 to count roots in
        #[arg(long, value_name = "U,V", allow_hyphen_values = true)]
        strip: Option<String>,
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Hausdorff distance bounds between the root set and the tropical set
    Bounds {
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Seeded randomized self-checks
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Extremal family attaining the lower distance bound
    Witness {
        /// Number of terms
        #[arg(long = "t")]
        t: usize,
        /// Number of variables
        #[arg(long = "n")]
        n: usize,
        /// Minimal frequency spacing
        #[arg(long = "delta")]
        delta: f64,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Tropical 1-skeleton of a bivariate sum as CSV segments
    Plotdata {
        #[arg(long, value_name = "FILE")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

/// Parse a command line and run it, returning the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("exptrop: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<ExpSum> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p)?,
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    ExpSum::from_json_str(&text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_output(path, &text)
}

fn parse_floats(s: &str, expect: usize, what: &str) -> Result<Vec<f64>> {
    let vals: std::result::Result<Vec<f64>, _> =
        s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let vals = vals.map_err(|_| Error::InvalidInput(format!("{what}: cannot parse {s:?}")))?;
    if vals.len() != expect {
        return Err(Error::InvalidInput(format!(
            "{what}: expected {expect} comma-separated numbers, got {}",
            vals.len()
        )));
    }
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("flag value"));
    }
    Ok(vals)
}

#[derive(Serialize)]
struct TropOut {
    n: usize,
    t: usize,
    delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interval: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct CountOut {
    center: f64,
    radius: f64,
    lower: usize,
    upper: usize,
}

impl From<CountInterval> for CountOut {
    fn from(iv: CountInterval) -> Self {
        CountOut {
            center: iv.center,
            radius: iv.radius,
            lower: iv.lower(),
            upper: iv.upper(),
        }
    }
}

#[derive(Serialize)]
struct StripCountsOut {
    u: f64,
    v: f64,
    total: CountOut,
    budget: f64,
    per_cluster: Vec<(Cluster, CountOut)>,
}

#[derive(Serialize)]
struct StripsOut {
    delta: f64,
    points: Vec<f64>,
    interval: [f64; 2],
    root_free: Vec<[f64; 2]>,
    epsilon: f64,
    clusters: Vec<Cluster>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<StripCountsOut>,
}

#[derive(Serialize)]
struct VerifyOut {
    seed: u64,
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Trop { input, output } => {
            let g = read_input(&input)?;
            let delta = minimal_spacing(&g)?.delta;
            let out = if g.n() == 1 {
                let points = trop_points_1d(&g)?.values();
                let interval = root_interval(&g)?;
                TropOut {
                    n: 1,
                    t: g.t(),
                    delta,
                    points: Some(points),
                    interval: Some([interval.0, interval.1]),
                    vertices: None,
                }
            } else {
                TropOut {
                    n: g.n(),
                    t: g.t(),
                    delta,
                    points: None,
                    interval: None,
                    vertices: Some(trop_vertices(&g)?),
                }
            };
            write_json(&output, &out)?;
        }
        Cmd::Cells {
            point,
            input,
            output,
        } => {
            let g = read_input(&input)?;
            let w = parse_floats(&point, g.n(), "--point")?;
            let cell = cell_query(&g, &w)?;
            write_json(&output, &cell)?;
        }
        Cmd::Count {
            rect,
            input,
            output,
        } => {
            let g = read_input(&input)?;
            let r = parse_floats(&rect, 4, "--rect")?;
            let rect = Rectangle::new(r[0], r[1], r[2], r[3])?;
            let report = winding_count_detailed(&g, &rect)?;
            write_json(&output, &report)?;
        }
        Cmd::Strips {
            strip,
            input,
            output,
        } => {
            let g = read_input(&input)?;
            let delta = minimal_spacing(&g)?.delta;
            let points = trop_points_1d(&g)?.values();
            let interval = root_interval(&g)?;
            let root_free = root_free_strips(&g)?
                .into_iter()
                .map(|(a, b)| [a, b])
                .collect();
            let clusters = clusters_1d(&g)?;
            let counts = match strip {
                Some(s) => {
                    let uv = parse_floats(&s, 2, "--strip")?;
                    let sc = strip_count_bounds(&g, uv[0], uv[1])?;
                    Some(StripCountsOut {
                        u: uv[0],
                        v: uv[1],
                        total: sc.total.into(),
                        budget: sc.budget,
                        per_cluster: sc
                            .per_cluster
                            .into_iter()
                            .map(|(c, iv)| (c, iv.into()))
                            .collect(),
                    })
                }
                None => None,
            };
            let out = StripsOut {
                delta,
                points,
                interval: [interval.0, interval.1],
                root_free,
                epsilon: clusters.epsilon,
                clusters: clusters.components,
                counts,
            };
            write_json(&output, &out)?;
        }
        Cmd::Bounds { input, output } => {
            let g = read_input(&input)?;
            let report = bounds(&g)?;
            write_json(&output, &report)?;
        }
        Cmd::Verify {
            suite,
            seed,
            output,
        } => {
            let suites = run_suite(&suite, seed)?;
            let passed = suites.iter().all(|s| s.passed());
            write_json(&output, &VerifyOut { seed, passed, suites })?;
            if !passed {
                return Ok(3);
            }
        }
        Cmd::Witness {
            t,
            n,
            delta,
            output,
        } => {
            let g = witness_family(t, n, delta)?;
            let mut text = g.to_json_string();
            text.push('\n');
            write_output(&output, &text)?;
        }
        Cmd::Plotdata { input, output } => {
            let g = read_input(&input)?;
            if g.n() != 2 {
                return Err(Error::InvalidInput(format!(
                    "plotdata requires a bivariate sum, got n = {}",
                    g.n()
                )));
            }
            let text = plotdata_csv(&g)?;
            write_output(&output, &text)?;
        }
    }
    Ok(0)
}

/// CSV of the tropical 1-skeleton clipped to a box around the vertices,
/// padded by the distance band so the figure shows the whole neighborhood
/// that contains the zero set.
fn plotdata_csv(g: &ExpSum) -> Result<String> {
    let delta = minimal_spacing(g)?.delta;
    let band = ((g.t() - 1) as f64).ln() / delta;
    let vertices = trop_vertices(g)?;
    let (mut x1, mut x2, mut y1, mut y2) = (-1.0f64, 1.0f64, -1.0f64, 1.0f64);
    for v in &vertices {
        x1 = x1.min(v[0]);
        x2 = x2.max(v[0]);
        y1 = y1.min(v[1]);
        y2 = y2.max(v[1]);
    }
    let pad = band + 1.0;
    let (x1, x2, y1, y2) = (x1 - pad, x2 + pad, y1 - pad, y2 + pad);
    let segments = skeleton_2d(g, (x1, x2), (y1, y2))?;
    let mut out = String::new();
    out.push_str("# exptrop plotdata: tropical 1-skeleton as line segments\n");
    out.push_str(&format!("# t = {}, n = {}, delta = {:.12}\n", g.t(), g.n(), delta));
    out.push_str(&format!("# band_radius = {band:.12}\n"));
    out.push_str(&format!("# bbox = {x1:.6},{x2:.6},{y1:.6},{y2:.6}\n"));
    out.push_str(&format!("# vertices = {}\n", vertices.len()));
    out.push_str("segment_id,x1,y1,x2,y2\n");
    for (id, seg) in segments.iter().enumerate() {
        let ([a, b], [c, d]) = seg.endpoints();
        out.push_str(&format!("{id},{a:.12},{b:.12},{c:.12},{d:.12}\n"));
    }
    Ok(out)
}
