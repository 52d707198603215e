use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, PathPolyline, Point, Prim};
use crate::metrics::{apollonian_directed_density_exact, ferrand_density, hma_sample, kp_density, quasihyperbolic_distance, GeodesicOptions};
use crate::numeric::{fmt17, grid_golden_max};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

/// Scalar fields over a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    /// Ferrand density `σ`.
    Sigma,
    /// Kulkarni-Pinkall density `μ`.
    Mu,
    /// Quasihyperbolic density `1/δ`.
    Qh,
    /// Smallest directed Apollonian density over all directions.
    AlphaMin,
    AlphaMax,
    /// `AlphaMax / AlphaMin`.
    AlphaRatio,
    MuOverSigma,
    DeltaSigma,
    DeltaMu,
    /// `δ · 1/δ`.
    DeltaK,
    DeltaAlphaMin,
}

impl FieldKind {
    pub const ALL: [FieldKind; 11] = [
        FieldKind::Sigma,
        FieldKind::Mu,
        FieldKind::Qh,
        FieldKind::AlphaMin,
        FieldKind::AlphaMax,
        FieldKind::AlphaRatio,
        FieldKind::MuOverSigma,
        FieldKind::DeltaSigma,
        FieldKind::DeltaMu,
        FieldKind::DeltaK,
        FieldKind::DeltaAlphaMin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Sigma => "sigma",
            FieldKind::Mu => "mu",
            FieldKind::Qh => "qh",
            FieldKind::AlphaMin => "alpha_min",
            FieldKind::AlphaMax => "alpha_max",
            FieldKind::AlphaRatio => "alpha_ratio",
            FieldKind::MuOverSigma => "mu_over_sigma",
            FieldKind::DeltaSigma => "delta_sigma",
            FieldKind::DeltaMu => "delta_mu",
            FieldKind::DeltaK => "delta_k",
            FieldKind::DeltaAlphaMin => "delta_alpha_min",
        }
    }
}

impl FromStr for FieldKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.to_ascii_lowercase().replace('-', "_");
        let alias = match t.as_str() {
            "ferrand" => "sigma",
            "kp" | "kulkarni_pinkall" => "mu",
            "k" | "quasihyperbolic" => "qh",
            other => other,
        };
        FieldKind::ALL.into_iter().find(|k| k.name() == alias).ok_or_else(|| {
            let names: Vec<&str> = FieldKind::ALL.iter().map(|k| k.name()).collect();
            format!("unknown field '{s}', expected one of {}", names.join(", "))
        })
    }
}

/// Directions scanned before golden refinement of the directed density.
const DIRECTIONS: usize = 32;

fn directed_extremes(domain: &DomainSpec, z: Point) -> Result<(f64, f64)> {
    let err = std::cell::Cell::new(None);
    let f = |th: f64| match apollonian_directed_density_exact(domain, z, Point::polar(th)) {
        Ok(d) => d.value,
        Err(e) => {
            err.set(Some(e));
            f64::NAN
        }
    };
    let (_, hi) = grid_golden_max(f, 0.0, PI, DIRECTIONS, 1e-10);
    let (_, lo) = grid_golden_max(|t| -f(t), 0.0, PI, DIRECTIONS, 1e-10);
    match err.take() {
        Some(e) => Err(e),
        None => Ok((-lo, hi)),
    }
}

/// Value of a field at an interior point with its error estimate.
pub fn field_value(domain: &DomainSpec, kind: FieldKind, z: Point, m: usize) -> Result<(f64, f64)> {
    let delta = domain.dist_to_boundary(z)?;
    let sigma = || ferrand_density(domain, z, m).map(|v| (v.value, v.error_estimate));
    let mu = || kp_density(domain, z, m).map(|v| (v.0.value, v.0.error_estimate));
    let out = match kind {
        FieldKind::Sigma => sigma()?,
        FieldKind::Mu => mu()?,
        FieldKind::Qh => (1.0 / delta, 0.0),
        FieldKind::AlphaMin => (directed_extremes(domain, z)?.0, 0.0),
        FieldKind::AlphaMax => (directed_extremes(domain, z)?.1, 0.0),
        FieldKind::AlphaRatio => {
            let (lo, hi) = directed_extremes(domain, z)?;
            (hi / lo, 0.0)
        }
        FieldKind::MuOverSigma => {
            let (s, es) = sigma()?;
            let (u, eu) = mu()?;
            (u / s, (eu / s) + (u * es / (s * s)))
        }
        FieldKind::DeltaSigma => {
            let (s, e) = sigma()?;
            (delta * s, delta * e)
        }
        FieldKind::DeltaMu => {
            let (u, e) = mu()?;
            (delta * u, delta * e)
        }
        FieldKind::DeltaK => (delta * (1.0 / delta), 0.0),
        FieldKind::DeltaAlphaMin => (delta * directed_extremes(domain, z)?.0, 0.0),
    };
    Ok(out)
}

/// Axis-parallel plotting window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Window {
    /// Square of half-side `1.1·scale` around the domain anchor.
    pub fn around(domain: &DomainSpec) -> Self {
        let c = domain.anchor();
        let h = 1.1 * domain.scale();
        Window { xmin: c.x - h, xmax: c.x + h, ymin: c.y - h, ymax: c.y + h }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.xmin, self.xmax, self.ymin, self.ymax].iter().all(|v| v.is_finite()) && self.xmin < self.xmax && self.ymin < self.ymax;
        if ok {
            Ok(())
        } else {
            Err(Error::BadParameters("window needs xmin < xmax and ymin < ymax".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotOptions {
    /// Boundary samples per density evaluation.
    pub samples: usize,
    pub window: Option<Window>,
    /// Endpoints of a quasihyperbolic geodesic to overlay.
    pub geodesic: Option<(Point, Point)>,
    pub geodesic_options: GeodesicOptions,
    /// Overlay hyperbolic centers seeded from every fourth grid node.
    pub hma: bool,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions { samples: 256, window: None, geodesic: None, geodesic_options: GeodesicOptions::default(), hma: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Sampled field with its overlays.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldData {
    pub kind: FieldKind,
    pub window: Window,
    pub grid: usize,
    /// Cell centers inside the domain, row by row from the bottom.
    pub samples: Vec<FieldSample>,
    pub geodesic: Option<PathPolyline>,
    pub hma_centers: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldPlot {
    pub data: FieldData,
    pub svg: String,
    /// `x,y,value` rows.
    pub csv: String,
}

/// Samples `kind` at the centers of a `grid × grid` cell array and renders it.
pub fn emit_field_plot(domain: &DomainSpec, kind: FieldKind, grid: usize, opts: &PlotOptions) -> Result<FieldPlot> {
    domain.validate()?;
    if grid < 2 {
        return Err(Error::BadParameters(format!("grid must be at least 2, got {grid}")));
    }
    let win = opts.window.unwrap_or_else(|| Window::around(domain));
    win.validate()?;
    let hx = (win.xmax - win.xmin) / grid as f64;
    let hy = (win.ymax - win.ymin) / grid as f64;
    let mut samples = Vec::new();
    let mut seeds = Vec::new();
    for j in 0..grid {
        for i in 0..grid {
            let z = Point::new(win.xmin + (i as f64 + 0.5) * hx, win.ymin + (j as f64 + 0.5) * hy);
            if !domain.contains(z) {
                continue;
            }
            let (value, _) = field_value(domain, kind, z, opts.samples)?;
            samples.push(FieldSample { x: z.x, y: z.y, value });
            if i % 4 == 2 && j % 4 == 2 {
                seeds.push(z);
            }
        }
    }
    let geodesic = match opts.geodesic {
        Some((x, y)) => Some(quasihyperbolic_distance(domain, x, y, &opts.geodesic_options)?.1),
        None => None,
    };
    let hma_centers = if opts.hma { hma_sample(domain, &seeds, opts.samples)?.centers() } else { vec![] };
    let data = FieldData { kind, window: win, grid, samples, geodesic, hma_centers };
    let csv = field_csv(&data);
    let svg = field_svg(domain, &data);
    Ok(FieldPlot { data, svg, csv })
}

fn field_csv(data: &FieldData) -> String {
    let mut w = super::csv_writer();
    w.write_record(["x", "y", "value"]).unwrap();
    for s in &data.samples {
        w.write_record([fmt17(s.x), fmt17(s.y), fmt17(s.value)]).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

/// Viridis-like ramp on `[0, 1]`.
fn ramp(t: f64) -> (u8, u8, u8) {
    const STOPS: [(f64, f64, f64); 5] =
        [(68.0, 1.0, 84.0), (59.0, 82.0, 139.0), (33.0, 145.0, 140.0), (94.0, 201.0, 98.0), (253.0, 231.0, 37.0)];
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let s = t * 4.0;
    let i = (s.floor() as usize).min(3);
    let f = s - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |p: f64, q: f64| (p + (q - p) * f).round() as u8;
    (mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

/// Value range for the color map: 2nd to 98th percentile of finite values.
fn color_range(samples: &[FieldSample]) -> (f64, f64) {
    let mut v: Vec<f64> = samples.iter().map(|s| s.value).filter(|v| v.is_finite()).collect();
    if v.is_empty() {
        return (0.0, 1.0);
    }
    v.sort_by(f64::total_cmp);
    let q = |p: f64| v[((v.len() - 1) as f64 * p).round() as usize];
    (q(0.02), q(0.98))
}

const WIDTH: f64 = 480.0;

fn field_svg(domain: &DomainSpec, data: &FieldData) -> String {
    let win = data.window;
    let sx = WIDTH / (win.xmax - win.xmin);
    let height = (win.ymax - win.ymin) * sx;
    let px = |p: Point| ((p.x - win.xmin) * sx, (win.ymax - p.y) * sx);
    let cw = (win.xmax - win.xmin) / data.grid as f64 * sx;
    let ch = (win.ymax - win.ymin) / data.grid as f64 * sx;
    let (lo, hi) = color_range(&data.samples);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.3} {height:.3}">"#);
    let _ = writeln!(s, r#"<title>{} on [{}, {}] x [{}, {}], color range [{lo:.6e}, {hi:.6e}]</title>"#, data.kind.name(), win.xmin, win.xmax, win.ymin, win.ymax);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<g shape-rendering="crispEdges">"#);
    for c in &data.samples {
        let t = if hi - lo > 1e-9 * hi.abs().max(lo.abs()) { (c.value - lo) / (hi - lo) } else { 0.5 };
        let (r, g, b) = ramp(t);
        let (x, y) = px(Point::new(c.x, c.y));
        let _ = writeln!(s, r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="rgb({r},{g},{b})"/>"#, x - cw / 2.0, y - ch / 2.0, cw + 0.05, ch + 0.05);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="none" stroke="black" stroke-width="1.5">"#);
    let far = 10.0 * (win.xmax - win.xmin + win.ymax - win.ymin);
    for p in domain.primitives() {
        match p {
            Prim::Circle { c, r, .. } => {
                let (x, y) = px(c);
                let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#, r * sx);
            }
            Prim::Line { n, d } => {
                let foot = n * d;
                let (a, b) = (px(foot + n.perp() * far), px(foot - n.perp() * far));
                let _ = writeln!(s, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a.0, a.1, b.0, b.1);
            }
            Prim::Seg { a, b, .. } => {
                let (a, b) = (px(a), px(b));
                let _ = writeln!(s, r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#, a.0, a.1, b.0, b.1);
            }
            Prim::Pt { p } => {
                let (x, y) = px(p);
                let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="black"/>"#);
            }
        }
    }
    let _ = writeln!(s, "</g>");
    if let Some(g) = &data.geodesic {
        let pts: Vec<String> = g.vertices.iter().map(|&v| px(v)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="red" stroke-width="2" points="{}"/>"#, pts.join(" "));
    }
    if !data.hma_centers.is_empty() {
        let _ = writeln!(s, r#"<g fill="white" stroke="black" stroke-width="0.5">"#);
        for &c in &data.hma_centers {
            let (x, y) = px(c);
            let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
