//! Command-line front end. Output is CSV with a header row (or JSON with
//! `--format json`); rows are ordered by exact parameter value so the output
//! does not depend on `--jobs`.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dynamics::{
    bifurcation_member, detect_matching, Endpoint, MatchingCertificate, MatchingError, Membership, SlopeSpec,
    DEFAULT_BUDGET,
};
use crate::exact::{parse_rational, simplest_between, FieldElement, Rational};
use crate::spectral::{
    build_partition, invariant_density, metric_entropy, metric_entropy_closed, metric_entropy_interp,
    metric_entropy_rokhlin, topological_entropy_markov, transition_matrices, PartitionSource,
};
use crate::symbolic::{enclosing_interval, interval_from_pseudocenter, is_pseudocenter, PseudocenterCheck};
use crate::windows::{plateau_scan, PlateauKind};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Failure(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Failure(_) => 2,
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Catalog of matching intervals.
    Intervals,
    /// Entropies at the endpoints and inside each enumerated interval.
    Entropy,
    /// Membership of parameters in the bifurcation set.
    Bifurcation,
    /// Candidate plateaux of the entropy.
    Plateaux,
    /// Invariant density on the prematching partition.
    Density,
    /// Entropies on an even grid of parameters.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "matching", version, about = "Matching intervals and entropy of Q_gamma(x) = x+1 | 1+s(1-x)")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// Parameters for `bifurcation` and `density`.
    pub gammas: Vec<String>,
    /// key=value file; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `int:N` or `quad:a+b*sqrt(d)`.
    #[arg(long)]
    pub slope: Option<String>,
    /// `lo,hi` as rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub range: Option<String>,
    /// Longest pseudocenter expansion to enumerate (default 8).
    #[arg(long)]
    pub depth: Option<u32>,
    /// Orbit steps per side before giving up on matching.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Grid points for non-integer slopes.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Points per interval, plateau or sweep.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub slope: SlopeSpec,
    pub range: (Rational, Rational),
    pub depth: u32,
    pub budget: usize,
    pub grid: usize,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub format: Format,
    pub gammas: Vec<String>,
}

const KEYS: [&str; 10] = ["slope", "range", "depth", "budget", "grid", "samples", "out", "jobs", "format", "gamma"];

pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key=value", n + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(CliError::Config(format!("line {}: unknown key `{k}`", n + 1)));
        }
        map.insert(k.to_string(), v.trim().to_string());
    }
    Ok(map)
}

fn parse_range(text: &str) -> Result<(Rational, Rational), CliError> {
    let (a, b) = text.split_once(',').ok_or_else(|| CliError::Config(format!("range `{text}` is not lo,hi")))?;
    let lo = parse_rational(a.trim()).map_err(config)?;
    let hi = parse_rational(b.trim()).map_err(config)?;
    if lo >= hi {
        return Err(CliError::Config(format!("range {lo},{hi} is empty or reversed")));
    }
    Ok((lo, hi))
}

fn pick<T: std::str::FromStr>(flag: Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    if flag.is_some() {
        return Ok(flag);
    }
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|e| CliError::Config(format!("{key}: {e}"))))
        .transpose()
}

impl RunConfig {
    pub fn from_args(args: Args) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => parse_config_file(&fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?)?,
            None => BTreeMap::new(),
        };
        let slope_text = args.slope.or_else(|| file.get("slope").cloned()).unwrap_or_else(|| "int:2".into());
        let slope = SlopeSpec::parse(&slope_text).map_err(config)?;
        let range = match args.range.or_else(|| file.get("range").cloned()) {
            Some(r) => parse_range(&r)?,
            None => (Rational::zero(), Rational::one()),
        };
        let default_samples = match args.command {
            Command::Entropy => 3,
            Command::Plateaux => 5,
            _ => 21,
        };
        let default_budget = if slope.as_integer().is_some() { DEFAULT_BUDGET } else { 60 };
        let format = match (args.format, file.get("format")) {
            (Some(f), _) => f,
            (None, Some(f)) => Format::from_str(f, true).map_err(config)?,
            (None, None) => Format::Csv,
        };
        let mut gammas = args.gammas;
        if gammas.is_empty() {
            if let Some(g) = file.get("gamma") {
                gammas = g.split([';', ' ']).filter(|x| !x.is_empty()).map(String::from).collect();
            }
        }
        let cfg = RunConfig {
            command: args.command,
            slope,
            range,
            depth: pick(args.depth, &file, "depth")?.unwrap_or(8),
            budget: pick(args.budget, &file, "budget")?.unwrap_or(default_budget),
            grid: pick(args.grid, &file, "grid")?.unwrap_or(400),
            samples: pick(args.samples, &file, "samples")?.unwrap_or(default_samples),
            out: pick(args.out, &file, "out")?,
            jobs: pick(args.jobs, &file, "jobs")?.unwrap_or(1).max(1),
            format,
            gammas,
        };
        if cfg.budget == 0 || cfg.grid == 0 {
            return Err(CliError::Config("budget and grid must be positive".into()));
        }
        Ok(cfg)
    }

    fn integer_slope(&self) -> Result<u64, CliError> {
        self.slope
            .as_integer()
            .ok_or_else(|| CliError::Config(format!("{:?} needs an integer slope", self.command)))
    }
}

/// Renders with 15 significant digits, trailing zeros dropped.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&e) {
        return format!("{:.14e}", x);
    }
    let s = format!("{:.*}", (14 - e).max(0) as usize, x);
    if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s }
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    json: Vec<Value>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new(), json: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        let obj: serde_json::Map<String, Value> =
            self.header.iter().zip(&row).map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
        self.json.push(Value::Object(obj));
        self.rows.push(row);
    }

    fn push_with_json(&mut self, row: Vec<String>, value: Value) {
        self.rows.push(row);
        self.json.push(value);
    }

    fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header).map_err(|e| CliError::Io(e.into()))?;
                for r in &self.rows {
                    w.write_record(r).map_err(|e| CliError::Io(e.into()))?;
                }
                w.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json).map_err(|e| CliError::Io(e.into()))?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

fn endpoint_str(e: &Endpoint) -> String {
    e.to_string()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(config)
}

fn cmd_intervals(cfg: &RunConfig) -> Result<Table, CliError> {
    let (lo, hi) = &cfg.range;
    if let Some(s) = cfg.slope.as_integer() {
        let recs = crate::windows::enumerate_range(s, lo, hi, cfg.depth, cfg.jobs).map_err(|e| CliError::Failure(e.to_string()))?;
        let mut t = Table::new(vec!["xi", "w", "v", "xiL", "xiR", "delta", "depth", "xiL_float", "xiR_float"]);
        for r in recs.iter().filter(|r| &r.xi_l >= lo && &r.xi_r <= hi) {
            let row = vec![
                r.xi.to_string(),
                r.w.to_string(),
                r.v.to_string(),
                r.xi_l.to_string(),
                r.xi_r.to_string(),
                r.delta.to_string(),
                r.depth().to_string(),
                fmt_float(crate::exact::rational_to_f64(&r.xi_l)),
                fmt_float(crate::exact::rational_to_f64(&r.xi_r)),
            ];
            t.push_with_json(row, r.to_json());
        }
        return Ok(t);
    }
    let certs = pool(cfg.jobs)?.install(|| grid_certificates(cfg));
    let mut t = Table::new(vec!["gamma", "kappa_minus", "kappa_plus", "delta", "lo", "hi", "lo_float", "hi_float"]);
    for (g, c) in certs {
        t.push(vec![
            g.to_string(),
            c.kappa_minus.to_string(),
            c.kappa_plus.to_string(),
            c.delta.to_string(),
            endpoint_str(&c.lo),
            endpoint_str(&c.hi),
            fmt_float(c.lo.to_f64()),
            fmt_float(c.hi.to_f64()),
        ]);
    }
    Ok(t)
}

/// Distinct certificates at `grid` interior rational points of the range,
/// ordered by left endpoint.
fn grid_certificates(cfg: &RunConfig) -> Vec<(FieldElement, MatchingCertificate)> {
    let (lo, hi) = &cfg.range;
    let n = BigInt::from(cfg.grid as u64 + 1);
    let found: Vec<Option<(FieldElement, MatchingCertificate)>> = (1..=cfg.grid)
        .into_par_iter()
        .map(|k| {
            let t = Rational::new(BigInt::from(k as u64), n.clone());
            let g = FieldElement::Rational(lo + (hi - lo) * t);
            detect_matching(&cfg.slope, &g, cfg.budget).ok().map(|c| (g, c))
        })
        .collect();
    let mut seen = std::collections::HashSet::new();
    let mut out: Vec<_> = found.into_iter().flatten().filter(|(_, c)| seen.insert((c.lo.clone(), c.hi.clone()))).collect();
    out.sort_by(|a, b| a.1.lo.to_f64().total_cmp(&b.1.lo.to_f64()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// One line of an entropy sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub gamma: FieldElement,
    pub h_metric_coeff: Option<FieldElement>,
    pub h_metric: Option<f64>,
    pub h_top: Option<f64>,
    pub method: String,
    pub delta: Option<i64>,
    pub interval: Option<(String, String)>,
    pub error: Option<String>,
}

pub const SWEEP_HEADER: [&str; 10] = [
    "gamma_exact",
    "gamma_float",
    "h_metric_coeff",
    "h_metric_float",
    "h_top_float",
    "method",
    "delta",
    "interval_lo",
    "interval_hi",
    "error",
];

impl SweepRow {
    fn new(gamma: FieldElement, method: &str) -> Self {
        SweepRow {
            gamma,
            h_metric_coeff: None,
            h_metric: None,
            h_top: None,
            method: method.into(),
            delta: None,
            interval: None,
            error: None,
        }
    }

    pub fn record(&self) -> Vec<String> {
        vec![
            self.gamma.to_string(),
            fmt_float(self.gamma.to_f64()),
            opt(self.h_metric_coeff.as_ref()),
            opt(self.h_metric.map(fmt_float)),
            opt(self.h_top.map(fmt_float)),
            self.method.clone(),
            opt(self.delta),
            opt(self.interval.as_ref().map(|i| i.0.clone())),
            opt(self.interval.as_ref().map(|i| i.1.clone())),
            opt(self.error.as_ref()),
        ]
    }
}

fn add_error(row: &mut SweepRow, e: impl ToString) {
    let e = e.to_string();
    row.error = Some(match row.error.take() {
        Some(prev) => format!("{prev}; {e}"),
        None => e,
    });
}

/// Rokhlin entropy (certificate or Markov partition) and, for integer
/// slopes, the Markov topological entropy.
fn sample_row(cfg: &RunConfig, gamma: FieldElement) -> SweepRow {
    let mut row = SweepRow::new(gamma.clone(), "rokhlin");
    match detect_matching(&cfg.slope, &gamma, cfg.budget) {
        Ok(c) => {
            row.delta = Some(c.delta);
            row.interval = Some((endpoint_str(&c.lo), endpoint_str(&c.hi)));
        }
        Err(MatchingError::StructuralFailure { .. }) => add_error(&mut row, "structural failure"),
        Err(_) => {}
    }
    match metric_entropy(&cfg.slope, &gamma, cfg.budget) {
        Ok((_, _, h)) => {
            row.h_metric = Some(h.value);
            row.h_metric_coeff = h.coeff;
        }
        Err(e) => add_error(&mut row, e),
    }
    if cfg.slope.as_integer().is_some() {
        match topological_entropy_markov(&cfg.slope, &gamma, cfg.budget) {
            Ok(h) => row.h_top = Some(h.value),
            Err(e) => add_error(&mut row, e),
        }
    }
    row
}

fn closed_form_row(s: u64, g: &Rational) -> SweepRow {
    let mut row = SweepRow::new(FieldElement::Rational(g.clone()), "closedForm");
    match metric_entropy_closed(s, g) {
        Ok(h) => {
            row.h_metric = Some(h.value);
            row.h_metric_coeff = h.coeff;
        }
        Err(e) => add_error(&mut row, e),
    }
    let sr = Rational::from_integer(BigInt::from(s));
    if !g.is_positive() {
        row.delta = Some((s * s) as i64 - 1);
        row.interval = Some(("-inf".into(), "0".into()));
    } else {
        row.delta = Some(-(s as i64 + 1));
        row.interval = Some(((&sr / (&sr + Rational::one())).to_string(), "inf".into()));
    }
    row
}

fn even_points(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    if n <= 1 {
        return vec![lo.clone()];
    }
    let step = (hi - lo) / Rational::from_integer(BigInt::from(n as u64 - 1));
    (0..n).map(|k| lo + &step * Rational::from_integer(BigInt::from(k as u64))).collect()
}

fn sweep_table(rows: Vec<SweepRow>) -> Table {
    let mut t = Table::new(SWEEP_HEADER.to_vec());
    for r in rows {
        t.push(r.record());
    }
    t
}

fn cmd_sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let (lo, hi) = &cfg.range;
    let pts = even_points(lo, hi, cfg.samples);
    let rows: Vec<SweepRow> =
        pool(cfg.jobs)?.install(|| pts.into_par_iter().map(|g| sample_row(cfg, FieldElement::Rational(g))).collect());
    Ok(sweep_table(rows))
}

fn cmd_entropy(cfg: &RunConfig) -> Result<Table, CliError> {
    let (lo, hi) = &cfg.range;
    let Some(s) = cfg.slope.as_integer() else {
        // quadratic slopes: Rokhlin values inside the intervals found on the grid
        let certs = pool(cfg.jobs)?.install(|| grid_certificates(cfg));
        let rows: Vec<SweepRow> = pool(cfg.jobs)?.install(|| {
            certs.into_par_iter().map(|(g, _)| sample_row(cfg, g)).collect()
        });
        let mut rows = rows;
        rows.sort_by(|a, b| a.gamma.cmp(&b.gamma));
        return Ok(sweep_table(rows));
    };
    let sr = Rational::from_integer(BigInt::from(s));
    let top = &sr / (&sr + Rational::one());
    let mut rows = Vec::new();
    // half-lines
    if lo <= &Rational::zero() {
        let end = if hi < &Rational::zero() { hi.clone() } else { Rational::zero() };
        for g in even_points(lo, &end, cfg.samples.max(2)) {
            rows.push(closed_form_row(s, &g));
        }
    }
    if hi >= &top {
        let start = if lo > &top { lo.clone() } else { top.clone() };
        for g in even_points(&start, hi, cfg.samples.max(2)) {
            rows.push(closed_form_row(s, &g));
        }
    }
    let recs = crate::windows::enumerate_range(s, lo, hi, cfg.depth, cfg.jobs).map_err(|e| CliError::Failure(e.to_string()))?;
    let recs: Vec<_> = recs.into_iter().filter(|r| &r.xi_l >= lo && &r.xi_r <= hi).collect();
    let per: Vec<Vec<SweepRow>> = pool(cfg.jobs)?.install(|| {
        recs.par_iter()
            .map(|r| {
                let interval = Some((r.xi_l.to_string(), r.xi_r.to_string()));
                let mut a = sample_row(cfg, FieldElement::Rational(r.xi_l.clone()));
                let mut b = sample_row(cfg, FieldElement::Rational(r.xi_r.clone()));
                for e in [&mut a, &mut b] {
                    e.delta = Some(r.delta);
                    e.interval = interval.clone();
                }
                let mut out = vec![a.clone()];
                let (fa, fb) = (crate::exact::rational_to_f64(&r.xi_l), crate::exact::rational_to_f64(&r.xi_r));
                for k in 1..=cfg.samples {
                    let t = Rational::new(BigInt::from(k as u64), BigInt::from(cfg.samples as u64 + 1));
                    let g = &r.xi_l + (&r.xi_r - &r.xi_l) * t;
                    let mut row = SweepRow::new(FieldElement::Rational(g.clone()), "interpolation");
                    row.delta = Some(r.delta);
                    row.interval = interval.clone();
                    match (a.h_metric, b.h_metric) {
                        (Some(ha), Some(hb)) => {
                            match metric_entropy_interp(ha, hb, fa, fb, crate::exact::rational_to_f64(&g)) {
                                Ok(h) => row.h_metric = Some(h),
                                Err(e) => add_error(&mut row, e),
                            }
                        }
                        _ => add_error(&mut row, "missing endpoint entropy"),
                    }
                    out.push(row);
                }
                out.push(b);
                out
            })
            .collect()
    });
    rows.extend(per.into_iter().flatten());
    rows.sort_by(|a, b| a.gamma.cmp(&b.gamma));
    rows.dedup_by(|a, b| a.gamma == b.gamma);
    Ok(sweep_table(rows))
}

fn parse_gammas(cfg: &RunConfig) -> Result<Vec<FieldElement>, CliError> {
    if cfg.gammas.is_empty() {
        return Err(CliError::Config(format!("{:?} needs at least one gamma", cfg.command)));
    }
    cfg.gammas.iter().map(|g| cfg.slope.parse_value(g).map_err(config)).collect()
}

fn cmd_bifurcation(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.integer_slope()?;
    let gammas = parse_gammas(cfg)?;
    let mut t = Table::new(vec!["gamma", "membership", "witness", "pseudocenter", "xi", "xiL", "xiR", "delta", "error"]);
    for g in gammas {
        let mut row = vec![g.to_string(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new(), String::new()];
        let Some(q) = g.as_rational() else {
            row[8] = "gamma must be rational".into();
            t.push(row);
            continue;
        };
        match bifurcation_member(s, q) {
            Ok(Membership::Member) => row[1] = "member".into(),
            Ok(Membership::NonMember(k)) => {
                row[1] = "nonMember".into();
                row[2] = k.to_string();
            }
            Err(e) => row[8] = e.to_string(),
        }
        if let Ok(PseudocenterCheck::Yes) = is_pseudocenter(s, q) {
            row[3] = "yes".into();
        }
        let rec = if row[3] == "yes" {
            interval_from_pseudocenter(s, q).ok()
        } else if row[1] == "nonMember" {
            enclosing_interval(s, q, 64).ok().flatten()
        } else {
            None
        };
        if let Some(r) = rec {
            row[4] = r.xi.to_string();
            row[5] = r.xi_l.to_string();
            row[6] = r.xi_r.to_string();
            row[7] = r.delta.to_string();
        }
        t.push(row);
    }
    Ok(t)
}

fn cmd_plateaux(cfg: &RunConfig) -> Result<Table, CliError> {
    let s = cfg.integer_slope()?;
    let (lo, hi) = &cfg.range;
    let mut cands = plateau_scan(s, lo, hi, cfg.depth, cfg.jobs).map_err(|e| CliError::Failure(e.to_string()))?;
    cands.sort_by(|a, b| (&b.hi - &b.lo).cmp(&(&a.hi - &a.lo)).then_with(|| a.lo.cmp(&b.lo)));
    let checks: Vec<(String, String, String)> = pool(cfg.jobs)?.install(|| {
        cands
            .par_iter()
            .map(|c| {
                if c.kind != PlateauKind::NeutralWindow || cfg.samples == 0 {
                    return (String::new(), String::new(), String::new());
                }
                let pts = plateau_samples(&c.lo, &c.hi, cfg.samples);
                let mut hm = Vec::new();
                let mut ht = Vec::new();
                for g in pts {
                    let g = FieldElement::Rational(g);
                    if let Ok((_, _, h)) = metric_entropy(&cfg.slope, &g, cfg.budget) {
                        hm.push(h.value);
                    }
                    if let Ok(h) = topological_entropy_markov(&cfg.slope, &g, cfg.budget) {
                        ht.push(h.value);
                    }
                }
                let spread = |v: &[f64]| v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
                let ok = !hm.is_empty() && !ht.is_empty() && spread(&hm) < 1e-10 && spread(&ht) < 1e-10;
                (ok.to_string(), fmt_float(hm.first().copied().unwrap_or(f64::NAN)), fmt_float(ht.first().copied().unwrap_or(f64::NAN)))
            })
            .collect()
    });
    let mut t = Table::new(vec!["lo", "hi", "kind", "depth", "lo_float", "hi_float", "seed", "verified", "h_metric_float", "h_top_float"]);
    for (c, (ok, hm, ht)) in cands.iter().zip(checks) {
        t.push(vec![
            c.lo.to_string(),
            c.hi.to_string(),
            c.kind.to_string(),
            c.depth.to_string(),
            fmt_float(crate::exact::rational_to_f64(&c.lo)),
            fmt_float(crate::exact::rational_to_f64(&c.hi)),
            opt(c.seed.as_ref()),
            ok,
            hm,
            ht,
        ]);
    }
    Ok(t)
}

/// The simplest rational in each of `n` equal open subintervals; small
/// denominators keep the Markov partitions small.
pub fn plateau_samples(lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    let cuts = even_points(lo, hi, n.max(1) + 1);
    let mut pts: Vec<Rational> = cuts.windows(2).map(|w| simplest_between(&w[0], Some(&w[1]))).collect();
    pts.dedup();
    pts
}

fn cmd_density(cfg: &RunConfig) -> Result<(Table, Value), CliError> {
    let gammas = parse_gammas(cfg)?;
    let g = &gammas[0];
    let cert = detect_matching(&cfg.slope, g, cfg.budget).map_err(|e| CliError::Failure(format!("gamma = {g}: {e}")))?;
    let part = build_partition(&cfg.slope, g, PartitionSource::Certificate(&cert)).map_err(|e| CliError::Failure(e.to_string()))?;
    let td = transition_matrices(&cfg.slope, g, &part).map_err(|e| CliError::Failure(e.to_string()))?;
    let dp = invariant_density(&td, &part).map_err(|e| CliError::Failure(e.to_string()))?;
    let h = metric_entropy_rokhlin(&dp, &part, &cfg.slope, g);
    let masses = dp.masses(&part);
    let total = masses.iter().fold(FieldElement::zero(), |a, m| &a + m);
    let mut t = Table::new(vec!["atom", "lo", "hi", "slope", "r", "r_float", "mass", "mass_float"]);
    let mut atoms = Vec::new();
    for i in 0..part.len() {
        let (a, b) = part.atom(i);
        let row = vec![
            i.to_string(),
            a.to_string(),
            b.to_string(),
            td.slopes[i].to_string(),
            dp.values[i].to_string(),
            fmt_float(dp.values[i].to_f64()),
            masses[i].to_string(),
            fmt_float(masses[i].to_f64()),
        ];
        atoms.push(json!({"lo": row[1], "hi": row[2], "slope": row[3], "r": row[4], "mass": row[6]}));
        t.push(row);
    }
    let summary = json!({
        "gamma": g.to_string(),
        "kappa": [cert.kappa_minus, cert.kappa_plus],
        "delta": cert.delta,
        "interval": [endpoint_str(&cert.lo), endpoint_str(&cert.hi)],
        "atoms": atoms,
        "normalization": total.to_string(),
        "h_metric_coeff": opt(h.coeff.as_ref()),
        "h_metric_float": fmt_float(h.value),
    });
    Ok((t, summary))
}

/// Runs one invocation, writing to `stdout` unless `--out` is set.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let mut file;
    let out: &mut dyn Write = match &cfg.out {
        Some(p) => {
            file = io::BufWriter::new(fs::File::create(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?);
            &mut file
        }
        None => stdout,
    };
    match cfg.command {
        Command::Intervals => cmd_intervals(cfg)?.write(cfg.format, out),
        Command::Entropy => cmd_entropy(cfg)?.write(cfg.format, out),
        Command::Sweep => cmd_sweep(cfg)?.write(cfg.format, out),
        Command::Bifurcation => cmd_bifurcation(cfg)?.write(cfg.format, out),
        Command::Plateaux => cmd_plateaux(cfg)?.write(cfg.format, out),
        Command::Density => {
            let (t, summary) = cmd_density(cfg)?;
            match cfg.format {
                Format::Csv => {
                    t.write(Format::Csv, out)?;
                    eprintln!("normalization={}", summary["normalization"].as_str().unwrap_or_default());
                    eprintln!("h_metric_coeff={}", summary["h_metric_coeff"].as_str().unwrap_or_default());
                    Ok(())
                }
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *out, &summary).map_err(|e| CliError::Io(e.into()))?;
                    writeln!(out)?;
                    Ok(())
                }
            }
        }
    }
}

/// Parses arguments, runs, and maps failures to exit codes
/// (0 ok, 1 config error, 2 structural or dynamical failure).
const VALUE_FLAGS: [&str; 10] =
    ["--config", "--slope", "--range", "--depth", "--budget", "--grid", "--samples", "--out", "--jobs", "--format"];

// clap reads `-1/5` as a short flag; a leading space makes it a positional
// and the number parsers trim it
fn shield_negatives<I, T>(args: I) -> Vec<std::ffi::OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString>,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let mut out = Vec::with_capacity(args.len());
    for (i, a) in args.iter().enumerate() {
        let after_flag = i > 0 && args[i - 1].to_str().is_some_and(|p| VALUE_FLAGS.contains(&p));
        match a.to_str() {
            Some(s) if !after_flag && s.len() > 1 && s.starts_with('-') && s[1..].starts_with(|c: char| c.is_ascii_digit() || c == '.') => {
                out.push(format!(" {s}").into())
            }
            _ => out.push(a.clone()),
        }
    }
    out
}

pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(shield_negatives(args)) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = RunConfig::from_args(args).and_then(|cfg| run(&cfg, stdout));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("matching: {e}");
            e.exit_code()
        }
    }
}
