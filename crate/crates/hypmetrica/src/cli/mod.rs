//! Command line front end. Every subcommand writes CSV (header row, LF line
//! endings, 17 significant digits) or pretty JSON; `plot` also writes SVG.
//! Failures print one JSON diagnostic line on stderr and exit with
//! [`Error::exit_code`].

mod plot;

pub use plot::{emit_field_plot, field_value, FieldData, FieldKind, FieldPlot, FieldSample, PlotOptions, Window};

use crate::bounds::{
    bernardi_norm_bound, bound_bernardi_f, bound_dabgamma, bound_l_beta, bound_l_one, bound_mabbc, bound_nab, bound_strongly_starlike,
    delta_bernardi, delta_gamma, delta_orders, lambda_delta, lambda_star, lambda_star_gamma, radius_sp, radius_sp_second_coeff, radius_u,
    radius_u_residual, BoundMethod, BoundResult, RadiusResult, strongly_starlike_norm_bound,
};
use crate::error::{Error, Result};
use crate::geometry::{DomainSpec, Point};
use crate::metrics::{
    apollonian_distance, apollonian_inner_distance, j_distance, lambda_apollonian_distance, quasihyperbolic_distance, seittenranta_distance,
    GeodesicOptions, JVariant, MetricValue,
};
use crate::numeric::fmt17;
use crate::relations::{
    classify, estimate_relation, run_scenarios, suite_by_name, EvalConfig, MetricKind, PairSampler, RelationEstimate, RelationVerdict,
};
use crate::univalent::{alexander, bbc_transform, bernardi, class_screens, libera, norm, ClassSpec, DiskSampler, MembershipReport, NormEstimate, PowerSeries, DEFAULT_TRUNCATION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Environment variable holding the worker thread count of `scenarios`.
pub const THREADS_ENV: &str = "HYPMETRICA_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Parsed command line.
#[derive(Debug, Clone, Parser)]
#[command(name = "hypmetrica", version, about = "Hyperbolic-type metrics on planar domains and pre-Schwarzian norm bounds")]
pub struct CommandConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Boundary samples `m`, at least 16.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Grid resolution: cells per side for `plot`, cells per boundary distance for geodesics.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Relative tolerance in `(0, 0.1]`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Distance between two points.
    Metric {
        /// alpha (apollonian), j_min, j_product, k, alpha_inner, alpha_lambda, seittenranta.
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        y: Point,
    },
    /// Density or density ratio at a point.
    Density {
        /// sigma, mu, qh, alpha_min, alpha_max, alpha_ratio, mu_over_sigma, delta_sigma, delta_mu, delta_k, delta_alpha_min.
        #[arg(long)]
        kind: FieldKind,
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: Point,
    },
    /// Ratio estimate and verdict for a pair of metrics.
    Relate {
        #[command(flatten)]
        domain: DomainArg,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// JSON pair sampler; generic pairs when absent.
        #[arg(long)]
        sampler: Option<PathBuf>,
        /// Pairs per scale of the generic sampler.
        #[arg(long, default_value_t = 50)]
        pairs: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.1,0.03,0.01")]
        scales: Vec<f64>,
    },
    /// Scenario suite: `default`, `classical` or `all`.
    Scenarios {
        #[arg(long, default_value = "default")]
        suite: String,
    },
    /// Pre-Schwarzian norm of a series.
    Norm {
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Coefficient and norm screens of a series for a class.
    Membership {
        #[command(flatten)]
        series: SeriesArgs,
        /// sp, u, starlike, convex, janowski_convex, janowski_starlike, strongly_starlike, f_beta, t_star.
        #[arg(long)]
        class: String,
        #[command(flatten)]
        params: Params,
    },
    /// Radius of a property: sp, sp2 or u.
    Radius {
        #[arg(long)]
        name: String,
        #[command(flatten)]
        params: Params,
    },
    /// Sharp norm bounds and starlikeness orders.
    Bound {
        /// L, L1, F, N, M, D, SS, SS_norm, delta, delta_bernardi, delta_gamma, bernardi_norm, lambda_delta, lambda_star, lambda_star_gamma.
        #[arg(long)]
        name: String,
        #[command(flatten)]
        params: Params,
    },
    /// Field plot as SVG with a companion CSV.
    Plot {
        #[arg(long)]
        kind: FieldKind,
        #[command(flatten)]
        domain: DomainArg,
        /// xmin,xmax,ymin,ymax
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        window: Option<Vec<f64>>,
        /// Endpoints of a geodesic overlay: x1,y1,x2,y2.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        geodesic: Option<Vec<f64>>,
        /// Overlay hyperbolic centers of the medial axis.
        #[arg(long)]
        hma: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct DomainArg {
    /// JSON domain file, or a catalog keyword such as `unit_disk` or `annulus(1,4)`.
    #[arg(long = "domain", allow_hyphen_values = true)]
    pub domain: String,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// JSON file of `[re, im]` coefficient pairs.
    #[arg(long)]
    pub series: Option<PathBuf>,
    /// Named family: identity, koebe, ell, g_beta(β), extremal_AB(A,B).
    #[arg(long, conflicts_with = "series", allow_hyphen_values = true)]
    pub family: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
    pub truncation: usize,
    /// alexander, libera, bernardi(γ) or bbc(b,c), applied before use.
    #[arg(long, allow_hyphen_values = true)]
    pub transform: Option<String>,
}

/// Numeric parameters of bounds, radii and classes.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    #[arg(long = "A", allow_negative_numbers = true)]
    pub big_a: Option<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub big_b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub c: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Second coefficient `|f″(0)|/2`.
    #[arg(long, allow_negative_numbers = true)]
    pub f2: Option<f64>,
}

fn need(v: Option<f64>, flag: &str) -> Result<f64> {
    v.ok_or_else(|| Error::BadParameters(format!("--{flag} is required")))
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected x,y but got '{s}'"));
    }
    let x: f64 = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let y: f64 = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Point::new(x, y))
}

/// Splits `name(p1, p2, ...)` into the name and its numeric parameters.
pub fn parse_keyword(s: &str) -> Result<(String, Vec<f64>)> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s.to_string(), vec![]));
    };
    if !s.ends_with(')') {
        return Err(Error::BadParameters(format!("unbalanced parentheses in '{s}'")));
    }
    let inner = &s[open + 1..s.len() - 1];
    let params = if inner.trim().is_empty() {
        vec![]
    } else {
        inner
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| Error::BadParameters(format!("parameter '{p}' in '{s}': {e}"))))
            .collect::<Result<Vec<f64>>>()?
    };
    Ok((s[..open].trim().to_string(), params))
}

/// A catalog domain by keyword, with optional parameters.
pub fn catalog_domain(keyword: &str) -> Result<DomainSpec> {
    let (name, p) = parse_keyword(keyword)?;
    let arity = |ks: &[usize]| -> Result<()> {
        if ks.contains(&p.len()) {
            Ok(())
        } else {
            Err(Error::BadParameters(format!("{name} takes {ks:?} parameters, got {}", p.len())))
        }
    };
    let pt = |i: usize| if p.len() > i + 1 { Point::new(p[i], p[i + 1]) } else { Point::ORIGIN };
    let d = match name.as_str() {
        "unit_disk" => {
            arity(&[0])?;
            DomainSpec::unit_disk()
        }
        "disk" => {
            arity(&[0, 1, 3])?;
            match p.len() {
                0 => DomainSpec::unit_disk(),
                1 => DomainSpec::disk(Point::ORIGIN, p[0]),
                _ => DomainSpec::disk(pt(0), p[2]),
            }
        }
        "upper_half_plane" | "half_plane" => {
            arity(&[0])?;
            DomainSpec::upper_half_plane()
        }
        "strip" => {
            arity(&[0, 1])?;
            DomainSpec::strip(p.first().copied().unwrap_or(1.0))
        }
        "annulus" => {
            arity(&[2])?;
            DomainSpec::annulus(p[0], p[1])
        }
        "punctured_disk" => {
            arity(&[0, 2])?;
            DomainSpec::punctured_disk(pt(0))
        }
        "punctured_plane" => {
            arity(&[0, 2])?;
            DomainSpec::punctured_plane(pt(0))
        }
        "disk_exterior" => {
            arity(&[0, 1, 3])?;
            match p.len() {
                0 => DomainSpec::disk_exterior(Point::ORIGIN, 1.0),
                1 => DomainSpec::disk_exterior(Point::ORIGIN, p[0]),
                _ => DomainSpec::disk_exterior(pt(0), p[2]),
            }
        }
        "square_exterior" => {
            arity(&[0, 1])?;
            DomainSpec::square_exterior(p.first().copied().unwrap_or(1.0))
        }
        "square" => {
            arity(&[0, 1])?;
            DomainSpec::square(p.first().copied().unwrap_or(1.0))
        }
        "lollipop" => {
            arity(&[0])?;
            DomainSpec::lollipop()
        }
        "slit_half_plane" => {
            arity(&[0])?;
            DomainSpec::slit_half_plane()
        }
        "half_strip" => {
            arity(&[0])?;
            DomainSpec::half_strip()
        }
        "half_strip_minus_rectangle" => {
            arity(&[1])?;
            DomainSpec::half_strip_minus_rectangle(p[0])
        }
        "square_minus_disk" => {
            arity(&[0])?;
            DomainSpec::square_minus_disk()
        }
        _ => return Err(Error::BadParameters(format!("'{keyword}' is neither a readable file nor a catalog domain"))),
    };
    d.validate()?;
    Ok(d)
}

fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A JSON domain file when `arg` names a file, otherwise a catalog keyword.
pub fn load_domain(arg: &str) -> Result<DomainSpec> {
    let path = std::path::Path::new(arg);
    if path.is_file() {
        let d = DomainSpec::from_json(&read_file(path)?)?;
        d.validate()?;
        Ok(d)
    } else {
        catalog_domain(arg)
    }
}

impl SeriesArgs {
    pub fn load(&self) -> Result<PowerSeries> {
        let f = match (&self.series, &self.family) {
            (Some(p), _) => PowerSeries::from_json(&read_file(p)?)?,
            (None, Some(k)) => {
                let (name, params) = parse_keyword(k)?;
                PowerSeries::named(&name, &params, self.truncation)?
            }
            (None, None) => return Err(Error::BadParameters("one of --series or --family is required".into())),
        };
        match &self.transform {
            None => Ok(f),
            Some(t) => {
                let (name, p) = parse_keyword(t)?;
                match (name.as_str(), p.as_slice()) {
                    ("alexander", []) => alexander(&f),
                    ("libera", []) => libera(&f),
                    ("bernardi", [g]) => bernardi(&f, *g),
                    ("bbc", [b, c]) => bbc_transform(&f, *b, *c),
                    _ => Err(Error::BadParameters(format!("unknown transform '{t}'"))),
                }
            }
        }
    }
}

/// Writer with the CSV conventions of every report.
pub(crate) fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv_writer();
    w.write_record(header).unwrap();
    for r in rows {
        w.write_record(r).unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub kind: MetricKind,
    pub x: Point,
    pub y: Point,
    pub value: MetricValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRecord {
    pub kind: FieldKind,
    pub x: Point,
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelateRecord {
    pub a: MetricKind,
    pub b: MetricKind,
    pub estimate: RelationEstimate,
    pub verdict: RelationVerdict,
}

/// One named quantity of the `bound` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub value: f64,
    pub extremizer: Option<f64>,
    pub method: Option<BoundMethod>,
    #[serde(default)]
    pub outside_hypotheses: Vec<String>,
    #[serde(default)]
    pub multimodal: bool,
}

impl BoundRecord {
    fn scalar(name: &str, value: f64) -> Self {
        BoundRecord { name: name.into(), value, extremizer: None, method: None, outside_hypotheses: vec![], multimodal: false }
    }

    fn from_result(name: &str, r: BoundResult) -> Self {
        BoundRecord {
            name: name.into(),
            value: r.value,
            extremizer: Some(r.extremizer),
            method: Some(r.method),
            outside_hypotheses: r.outside_hypotheses,
            multimodal: r.multimodal,
        }
    }
}

/// Text written by a command: the primary output plus companion files.
#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    pub primary: String,
    pub companions: Vec<(PathBuf, String)>,
}

impl Emission {
    fn text(s: String) -> Self {
        Emission { primary: s, companions: vec![] }
    }
}

impl CommandConfig {
    /// Checks the numeric options.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tol {
            if !(t > 0.0 && t <= 0.1) {
                return Err(Error::BadParameters(format!("--tol must lie in (0, 0.1], got {t}")));
            }
        }
        if let Some(m) = self.samples {
            if m < 16 {
                return Err(Error::BadParameters(format!("--samples must be at least 16, got {m}")));
            }
        }
        if let Some(g) = self.grid {
            if g < 2 {
                return Err(Error::BadParameters(format!("--grid must be at least 2, got {g}")));
            }
        }
        if self.format == Format::Svg && !matches!(self.command, Command::Plot { .. }) {
            return Err(Error::BadParameters("--format svg is only available for plot".into()));
        }
        Ok(())
    }

    fn geodesic_options(&self) -> GeodesicOptions {
        let mut g = GeodesicOptions::default();
        if let Some(t) = self.tol {
            g.tol = t;
        }
        if let Some(k) = self.grid {
            g.kappa = k as f64;
        }
        g
    }

    fn eval_config(&self) -> EvalConfig {
        let mut c = EvalConfig { seed: self.seed, ..EvalConfig::default() };
        if let Some(m) = self.samples {
            c.samples = m;
        }
        if let Some(t) = self.tol {
            c.geodesic.tol = t;
        }
        if let Some(k) = self.grid {
            c.geodesic.kappa = k as f64;
        }
        c
    }
}

/// Worker threads from [`THREADS_ENV`], else the available parallelism.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(Error::BadParameters(format!("{THREADS_ENV} must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn metric_value(kind: MetricKind, d: &DomainSpec, x: Point, y: Point, m: usize, g: &GeodesicOptions) -> Result<MetricValue> {
    Ok(match kind {
        MetricKind::Alpha => apollonian_distance(d, x, y, m)?.0,
        MetricKind::JMin => j_distance(d, x, y, JVariant::Min)?,
        MetricKind::JProduct => j_distance(d, x, y, JVariant::Product)?,
        MetricKind::K => quasihyperbolic_distance(d, x, y, g)?.0,
        MetricKind::AlphaInner => apollonian_inner_distance(d, x, y, g)?.0,
        MetricKind::AlphaLambda => lambda_apollonian_distance(d, x, y, m)?,
        MetricKind::Seittenranta => seittenranta_distance(d, x, y, m)?,
    })
}

fn class_spec(name: &str, p: &Params) -> Result<ClassSpec> {
    let mut obj = serde_json::Map::new();
    obj.insert("class".into(), name.into());
    let fields = [("alpha", p.alpha), ("beta", p.beta), ("lambda", p.lambda), ("mu", p.mu), ("a", p.big_a), ("b", p.big_b)];
    for (k, v) in fields {
        if let Some(v) = v {
            obj.insert(k.into(), v.into());
        }
    }
    serde_json::from_value(serde_json::Value::Object(obj)).map_err(|e| Error::BadParameters(format!("class {name}: {e}")))
}

fn radius_csv(r: &RadiusResult) -> String {
    csv_table(
        &["r0", "residual", "bracket_lo", "bracket_hi", "iterations", "cross_check"],
        &[vec![fmt17(r.r0), fmt17(r.residual), fmt17(r.bracket.0), fmt17(r.bracket.1), r.iterations.to_string(), fmt17(r.cross_check)]],
    )
}

fn bounds(name: &str, p: &Params) -> Result<Vec<BoundRecord>> {
    let out = match name {
        "L" => vec![BoundRecord::from_result("L", bound_l_beta(p.beta.unwrap_or(1.0), need(p.b, "b")?, need(p.c, "c")?)?)],
        "L1" => vec![BoundRecord::from_result("L1", bound_l_one(need(p.b, "b")?, need(p.c, "c")?)?)],
        "F" => vec![BoundRecord::scalar("F", bound_bernardi_f(need(p.gamma, "gamma")?)?)],
        "N" => vec![BoundRecord::scalar("N", bound_nab(need(p.big_a, "A")?, need(p.big_b, "B")?)?)],
        "M" => {
            let r = bound_mabbc(need(p.big_a, "A")?, need(p.big_b, "B")?, need(p.b, "b")?, need(p.c, "c")?)?;
            vec![BoundRecord::from_result("M", r)]
        }
        "D" => vec![BoundRecord::from_result("D", bound_dabgamma(need(p.big_a, "A")?, need(p.big_b, "B")?, need(p.gamma, "gamma")?)?)],
        "SS" => vec![BoundRecord::from_result("SS", bound_strongly_starlike(need(p.alpha, "alpha")?, need(p.beta, "beta")?)?)],
        "SS_norm" => vec![BoundRecord::scalar("SS_norm", strongly_starlike_norm_bound(need(p.alpha, "alpha")?, need(p.beta, "beta")?)?)],
        "delta" => {
            vec![BoundRecord::scalar("delta", delta_orders(need(p.alpha, "alpha")?, need(p.beta, "beta")?, need(p.gamma, "gamma")?)?)]
        }
        "delta_bernardi" => vec![BoundRecord::scalar("delta_bernardi", delta_bernardi(need(p.alpha, "alpha")?, need(p.gamma, "gamma")?)?)],
        "delta_gamma" => vec![BoundRecord::scalar("delta_gamma", delta_gamma(need(p.gamma, "gamma")?)?)],
        "bernardi_norm" => vec![BoundRecord::scalar("bernardi_norm", bernardi_norm_bound(need(p.gamma, "gamma")?)?)],
        "lambda_delta" => vec![BoundRecord::scalar("lambda_delta", lambda_delta(need(p.delta, "delta")?, need(p.a, "a")?)?)],
        "lambda_star" => vec![BoundRecord::scalar("lambda_star", lambda_star(need(p.mu, "mu")?)?)],
        "lambda_star_gamma" => {
            let t = lambda_star_gamma(need(p.gamma, "gamma")?, need(p.f2, "f2")?)?;
            vec![BoundRecord::scalar("lambda_s", t.lambda_s), BoundRecord::scalar("lambda_r", t.lambda_r)]
        }
        _ => return Err(Error::BadParameters(format!("unknown bound '{name}'"))),
    };
    Ok(out)
}

/// Runs a command and returns its output without writing anything.
pub fn execute(cfg: &CommandConfig) -> Result<Emission> {
    cfg.validate()?;
    let csv = cfg.format == Format::Csv;
    match &cfg.command {
        Command::Metric { kind, domain, x, y } => {
            let d = load_domain(&domain.domain)?;
            let k = MetricKind::parse(kind)?;
            let value = metric_value(k, &d, *x, *y, cfg.samples.unwrap_or(2000), &cfg.geodesic_options())?;
            let r = MetricRecord { kind: k, x: *x, y: *y, value };
            Ok(Emission::text(if csv {
                csv_table(
                    &["kind", "x1", "x2", "y1", "y2", "value", "error_estimate"],
                    &[vec![
                        k.name().into(),
                        fmt17(x.x),
                        fmt17(x.y),
                        fmt17(y.x),
                        fmt17(y.y),
                        fmt17(r.value.value),
                        fmt17(r.value.error_estimate),
                    ]],
                )
            } else {
                json(&r)
            }))
        }
        Command::Density { kind, domain, x } => {
            let d = load_domain(&domain.domain)?;
            let (value, error_estimate) = field_value(&d, *kind, *x, cfg.samples.unwrap_or(2000))?;
            let r = DensityRecord { kind: *kind, x: *x, value, error_estimate };
            Ok(Emission::text(if csv {
                csv_table(
                    &["kind", "x1", "x2", "value", "error_estimate"],
                    &[vec![kind.name().into(), fmt17(x.x), fmt17(x.y), fmt17(value), fmt17(error_estimate)]],
                )
            } else {
                json(&r)
            }))
        }
        Command::Relate { domain, a, b, sampler, pairs, scales } => {
            let d = load_domain(&domain.domain)?;
            let (a, b) = (MetricKind::parse(a)?, MetricKind::parse(b)?);
            let sampler = match sampler {
                Some(p) => serde_json::from_str(&read_file(p)?).map_err(|e| Error::BadParameters(format!("sampler JSON: {e}")))?,
                None => PairSampler::Generic { count: *pairs },
            };
            let config = cfg.eval_config();
            let estimate = estimate_relation(&d, a, b, &sampler, scales, &config)?;
            let verdict = classify(&estimate, &config.thresholds);
            let r = RelateRecord { a, b, estimate, verdict };
            Ok(Emission::text(if csv {
                let mut rows: Vec<Vec<String>> = r
                    .estimate
                    .refinement_history
                    .iter()
                    .map(|&(s, hi, lo)| vec![a.name().into(), b.name().into(), fmt17(s), fmt17(hi), fmt17(lo), String::new()])
                    .collect();
                rows.push(vec![
                    a.name().into(),
                    b.name().into(),
                    "all".into(),
                    fmt17(r.estimate.sup_ratio),
                    fmt17(r.estimate.inf_ratio),
                    r.verdict.class.label().into(),
                ]);
                csv_table(&["a", "b", "scale", "sup_ratio", "inf_ratio", "verdict"], &rows)
            } else {
                json(&r)
            }))
        }
        Command::Scenarios { suite } => {
            let s = suite_by_name(suite)?;
            let report = run_scenarios(&s, &cfg.eval_config(), threads_from_env()?);
            Ok(Emission::text(if csv { report.to_csv() } else { report.to_json() }))
        }
        Command::Norm { series } => {
            let f = series.load()?;
            let e: NormEstimate = norm(&f, &DiskSampler::default())?;
            Ok(Emission::text(if csv {
                csv_table(
                    &["value", "error_estimate", "argmax_radius", "argmax_angle", "trusted_radius", "boundary_limit"],
                    &[vec![
                        fmt17(e.value),
                        fmt17(e.error_estimate),
                        fmt17(e.argmax_radius),
                        fmt17(e.argmax_angle),
                        fmt17(e.trusted_radius),
                        e.boundary_limit.to_string(),
                    ]],
                )
            } else {
                json(&e)
            }))
        }
        Command::Membership { series, class, params } => {
            let f = series.load()?;
            let spec = class_spec(class, params)?;
            let reports: Vec<MembershipReport> = class_screens(&f, &spec, params.mu.unwrap_or(0.0))?;
            Ok(Emission::text(if csv {
                let rows: Vec<Vec<String>> = reports
                    .iter()
                    .map(|r| vec![r.condition_id.clone(), r.satisfied.to_string(), fmt17(r.slack), r.tail_bound.map(fmt17).unwrap_or_default()])
                    .collect();
                csv_table(&["condition_id", "satisfied", "slack", "tail_bound"], &rows)
            } else {
                json(&reports)
            }))
        }
        Command::Radius { name, params: p } => {
            let r = match name.as_str() {
                "sp" => radius_sp(need(p.mu, "mu")?, need(p.alpha, "alpha")?)?,
                "sp2" => radius_sp_second_coeff(need(p.alpha, "alpha")?, need(p.f2, "f2")?)?,
                "u" => {
                    let (alpha, lambda) = (need(p.alpha, "alpha")?, need(p.lambda, "lambda")?);
                    let r0 = radius_u(alpha, lambda)?;
                    RadiusResult { r0, residual: radius_u_residual(alpha, lambda, r0), bracket: (r0, r0), iterations: 0, cross_check: 0.0 }
                }
                _ => return Err(Error::BadParameters(format!("unknown radius '{name}'"))),
            };
            Ok(Emission::text(if csv { radius_csv(&r) } else { json(&r) }))
        }
        Command::Bound { name, params } => {
            let rows = bounds(name, params)?;
            Ok(Emission::text(if csv {
                let body: Vec<Vec<String>> = rows
                    .iter()
                    .map(|r| {
                        vec![
                            r.name.clone(),
                            fmt17(r.value),
                            r.extremizer.map(fmt17).unwrap_or_default(),
                            r.method.map(|m| serde_json::to_value(m).unwrap().as_str().unwrap().to_string()).unwrap_or_default(),
                            r.outside_hypotheses.join("; "),
                            r.multimodal.to_string(),
                        ]
                    })
                    .collect();
                csv_table(&["name", "value", "extremizer", "method", "outside_hypotheses", "multimodal"], &body)
            } else {
                json(&rows)
            }))
        }
        Command::Plot { kind, domain, window, geodesic, hma } => {
            let d = load_domain(&domain.domain)?;
            for (flag, v) in [("window", window), ("geodesic", geodesic)] {
                if v.as_ref().is_some_and(|v| v.len() != 4) {
                    return Err(Error::BadParameters(format!("--{flag} takes exactly four comma-separated numbers")));
                }
            }
            let opts = PlotOptions {
                samples: cfg.samples.unwrap_or(256),
                window: window.as_ref().map(|w| Window { xmin: w[0], xmax: w[1], ymin: w[2], ymax: w[3] }),
                geodesic: geodesic.as_ref().map(|g| (Point::new(g[0], g[1]), Point::new(g[2], g[3]))),
                geodesic_options: cfg.geodesic_options(),
                hma: *hma,
            };
            let grid = cfg.grid.unwrap_or(48);
            let p = emit_field_plot(&d, *kind, grid, &opts)?;
            let (primary, companion, ext) = match cfg.format {
                Format::Svg => (p.svg, p.csv, "csv"),
                Format::Csv => (p.csv, p.svg, "svg"),
                Format::Json => (json(&p.data), p.svg, "svg"),
            };
            let companions = match &cfg.out {
                Some(o) => vec![(o.with_extension(ext), companion)],
                None => vec![],
            };
            Ok(Emission { primary, companions })
        }
    }
}

/// Machine-readable failure report written to standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
    /// Full error state, present for numeric non-convergence.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

impl Diagnostic {
    pub fn from_error(e: &Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(['(', '{', ' ']).next().unwrap_or("Error").to_string();
        let code = e.exit_code();
        Diagnostic { error: kind, message: e.to_string(), exit_code: code, trace: (code == 3).then_some(debug) }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("diagnostic serializes")
    }
}

fn write_emission(cfg: &CommandConfig, em: &Emission) -> Result<()> {
    let io = |p: &std::path::Path, e: std::io::Error| Error::Io(format!("{}: {e}", p.display()));
    match &cfg.out {
        Some(o) => {
            std::fs::write(o, &em.primary).map_err(|e| io(o, e))?;
            for (p, s) in &em.companions {
                std::fs::write(p, s).map_err(|e| io(p, e))?;
            }
        }
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(em.primary.as_bytes()).map_err(|e| io(std::path::Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}

/// Executes and writes a parsed command; returns the process exit code.
pub fn run(cfg: &CommandConfig) -> i32 {
    match execute(cfg).and_then(|em| write_emission(cfg, &em)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", Diagnostic::from_error(&e).to_line());
            e.exit_code()
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match CommandConfig::try_parse_from(args) {
        Ok(cfg) => run(&cfg),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                let d = Diagnostic { error: "Usage".into(), message: e.kind().to_string(), exit_code: 2, trace: None };
                eprintln!("{}", d.to_line());
                2
            } else {
                0
            }
        }
    }
}
