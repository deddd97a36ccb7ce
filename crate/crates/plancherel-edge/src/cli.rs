//! Configuration, subcommands and output files behind the binary.
//!
//! A run is described by a [`RunConfig`]. Values come from command-line
//! flags first, then from `--config`, then from defaults. `--config` accepts
//! a JSON config, or any file this program wrote: CSV files start with a
//! `# {...}` metadata line and JSON files carry a `meta` object, and both
//! hold the resolved config.
//!
//! Exit codes: 0 success, 1 failed identity check, 2 invalid config or I/O
//! error, 3 resource cap, 4 theory tail bound out of tolerance.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::airy::{self, Functional, TheoryOptions};
use crate::diagrams::generate_diagrams;
use crate::dynamics::{self, CampaignSpec, EdgeProcessSample, Flavor};
use crate::error::Error;
use crate::verify;

/// Identifies the build in every output file.
pub const BUILD_ID: &str = concat!("plancherel-edge ", env!("CARGO_PKG_VERSION"), "+", env!("PLANCHEREL_EDGE_COMMIT"));

pub const MAX_N: usize = 10_000_000;
pub const MAX_SAMPLES: usize = 1_000_000;
/// Bound on recorded floats per simulate run.
pub const MAX_RECORDED: usize = 100_000_000;
pub const MAX_J: usize = 1000;

#[derive(Parser, Debug)]
#[command(name = "plancherel-edge", version, about = "Plancherel decay chain and its Airy edge limit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandLine,
}

#[derive(Subcommand, Debug)]
pub enum CommandLine {
    /// Sample edge trajectories and estimate Laplace functionals.
    Simulate(Flags),
    /// Run the exact identity suite.
    Verify(Flags),
    /// Tabulate diagram counts, ψ and φ.
    Theory(Flags),
    /// Compare one Plancherel sample with the limit shape.
    LimitShape(Flags),
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated; one value per circuit, or a sweep when k = 1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub tau: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub flavor: Option<Flavor>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Lines recorded per family.
    #[arg(long)]
    pub j_max: Option<usize>,
    #[arg(long)]
    pub s_max: Option<usize>,
    /// Longest list or polynomial in the verify suite.
    #[arg(long)]
    pub m_max: Option<usize>,
    #[arg(long)]
    pub floor: Option<f64>,
    /// Relative tolerance on series tails.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Simulate,
    Verify,
    Theory,
    LimitShape,
}

/// Fully resolved parameters of one run. The output path is not part of it,
/// so a file regenerated elsewhere is byte-identical.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub n: usize,
    pub samples: usize,
    pub seed: Option<u64>,
    pub k: usize,
    pub alpha: Vec<f64>,
    pub tau: Vec<f64>,
    pub flavor: Flavor,
    pub j_max: usize,
    pub s_max: usize,
    pub m_max: usize,
    pub floor: f64,
    pub tolerance: f64,
    pub format: Format,
}

/// A config file: every field optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartialConfig {
    pub command: Option<Command>,
    pub n: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub k: Option<usize>,
    pub alpha: Option<Vec<f64>>,
    pub tau: Option<Vec<f64>>,
    pub flavor: Option<Flavor>,
    pub j_max: Option<usize>,
    pub s_max: Option<usize>,
    pub m_max: Option<usize>,
    pub floor: Option<f64>,
    pub tolerance: Option<f64>,
    pub format: Option<Format>,
}

/// Why a run stopped early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Resource(String),
    Tail(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Tail(_) => 4,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Invalid(m) => write!(f, "invalid configuration: {m}"),
            Failure::Resource(m) => write!(f, "resource cap exceeded: {m}"),
            Failure::Tail(m) => write!(f, "series tail out of tolerance: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TailBound { .. } => Failure::Tail(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Reads a config from a JSON config file or from an output file.
pub fn load_config_file(path: &Path) -> Outcome<PartialConfig> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let value: Value = if let Some(rest) = text.strip_prefix("# ") {
        serde_json::from_str(rest.lines().next().unwrap_or_default())
    } else {
        serde_json::from_str(&text)
    }
    .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    let value = match value {
        Value::Object(ref m) if m.contains_key("meta") => value["meta"]["config"].clone(),
        Value::Object(ref m) if m.contains_key("config") && m.contains_key("build") => value["config"].clone(),
        v => v,
    };
    serde_json::from_value(value).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Flags over file over defaults, then validation.
    pub fn resolve(command: Command, flags: &Flags, file: Option<PartialConfig>) -> Outcome<RunConfig> {
        let file = file.unwrap_or_default();
        if file.command.is_some_and(|c| c != command) {
            return Err(Failure::Invalid(format!("config file is for {:?}, not {command:?}", file.command.unwrap())));
        }
        let k = flags.k.or(file.k).unwrap_or(match flags.alpha.as_ref().or(file.alpha.as_ref()) {
            Some(a) if a.len() == 2 && command == Command::Simulate => 2,
            _ => 1,
        });
        let (alpha_default, tau_default) = if k == 2 { (vec![1.0, 1.0], vec![0.0, 0.5]) } else { (vec![1.0], vec![0.0]) };
        let cfg = RunConfig {
            command,
            n: flags.n.or(file.n).unwrap_or(match command {
                Command::Simulate => 10_000,
                Command::Verify => 6,
                Command::Theory => 0,
                Command::LimitShape => 100_000,
            }),
            samples: flags.samples.or(file.samples).unwrap_or(if command == Command::Simulate { 100 } else { 1 }),
            seed: flags.seed.or(file.seed),
            k,
            alpha: flags.alpha.clone().or(file.alpha).unwrap_or(alpha_default),
            tau: flags.tau.clone().or(file.tau).unwrap_or(tau_default),
            flavor: flags.flavor.or(file.flavor).unwrap_or(Flavor::Frobenius),
            j_max: flags.j_max.or(file.j_max).unwrap_or(dynamics::DEFAULT_J_MAX),
            s_max: flags.s_max.or(file.s_max).unwrap_or(airy::S_MAX_K1),
            m_max: flags.m_max.or(file.m_max).unwrap_or(8),
            floor: flags.floor.or(file.floor).unwrap_or(airy::FLOOR),
            tolerance: flags.tolerance.or(file.tolerance).unwrap_or(1e-3),
            format: flags.format.or(file.format).unwrap_or(if command == Command::Verify { Format::Json } else { Format::Csv }),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Outcome<()> {
        let bad = |m: &str| Err(Failure::Invalid(m.to_string()));
        let stochastic = matches!(self.command, Command::Simulate | Command::LimitShape);
        if stochastic && self.seed.is_none() {
            return bad("a seed is required");
        }
        if self.command != Command::Theory && self.n == 0 {
            return bad("n must be positive");
        }
        if self.samples == 0 {
            return bad("samples must be positive");
        }
        if !(1..=2).contains(&self.k) {
            return bad("k must be 1 or 2");
        }
        if self.alpha.is_empty() || self.alpha.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return bad("alpha values must be positive");
        }
        if self.tau.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
            return bad("tau values must be non-negative");
        }
        if (self.k == 1 && self.tau.len() != 1) || (self.k == 2 && (self.alpha.len() != 2 || self.tau.len() != 2)) {
            return bad("k = 1 takes one tau (and any number of alphas); k = 2 takes two of each");
        }
        if self.s_max % 2 == 1 || !(2..=airy::S_MAX_K1).contains(&self.s_max) {
            return bad("s_max must be even, between 2 and 6");
        }
        if !(self.floor > 0.0) || !(self.tolerance > 0.0) {
            return bad("floor and tolerance must be positive");
        }
        if self.j_max == 0 {
            return bad("j_max must be positive");
        }
        match self.command {
            Command::Simulate => {
                let grid = self.tau_grid();
                let steps = dynamics::decay_time(self.n, *grid.last().unwrap());
                if steps > self.n {
                    return bad("tau grid needs more decay steps than n");
                }
                if self.n > MAX_N || self.samples > MAX_SAMPLES || self.j_max > MAX_J {
                    return Err(Failure::Resource(format!("n ≤ {MAX_N}, samples ≤ {MAX_SAMPLES}, j_max ≤ {MAX_J}")));
                }
                if self.samples.saturating_mul(grid.len()).saturating_mul(2 * self.j_max) > MAX_RECORDED {
                    return Err(Failure::Resource(format!("more than {MAX_RECORDED} recorded values")));
                }
            }
            Command::LimitShape if self.n > MAX_N => return Err(Failure::Resource(format!("n ≤ {MAX_N}"))),
            Command::Verify if self.n > verify::VERIFY_N_CAP || self.m_max > verify::VERIFY_M_CAP => {
                return Err(Failure::Resource(format!("verify caps are n ≤ {}, m ≤ {}", verify::VERIFY_N_CAP, verify::VERIFY_M_CAP)))
            }
            Command::Verify if self.n < 4 || self.m_max < 4 => return bad("verify needs n ≥ 4 and m_max ≥ 4"),
            _ => {}
        }
        Ok(())
    }

    /// Sorted distinct times of the `τ` values.
    pub fn tau_grid(&self) -> Vec<f64> {
        let mut g = self.tau.clone();
        g.sort_by(f64::total_cmp);
        g.dedup();
        g
    }

    pub fn campaign(&self) -> CampaignSpec {
        CampaignSpec {
            n: self.n,
            samples: self.samples,
            seed: self.seed.unwrap_or_default(),
            tau_grid: self.tau_grid(),
            flavor: self.flavor,
            j_max: self.j_max,
        }
    }

    fn theory_options(&self) -> TheoryOptions {
        TheoryOptions { s_max_k1: self.s_max, s_max_k2: self.s_max, ..TheoryOptions::default() }
    }
}

/// Provenance block written at the top of every output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Meta {
    pub build: String,
    pub seed: Option<u64>,
    pub config: RunConfig,
    pub summary: Value,
}

/// Bytes of the main output, extra files keyed by suffix, and the exit code.
#[derive(Clone, Debug)]
pub struct Output {
    pub main: Vec<u8>,
    pub extra: Vec<(String, Vec<u8>)>,
    pub exit_code: i32,
}

/// Floats with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_bytes(meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> Outcome<Vec<u8>> {
    let mut buf = Vec::new();
    let line = serde_json::to_string(meta).map_err(|e| Failure::Invalid(e.to_string()))?;
    writeln!(buf, "# {line}").expect("write to memory");
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(buf);
    let io = |e: csv::Error| Failure::Invalid(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure::Invalid(e.to_string()))
}

fn json_bytes(body: &Value) -> Outcome<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(body).map_err(|e| Failure::Invalid(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn meta(cfg: &RunConfig, summary: Value) -> Meta {
    Meta { build: BUILD_ID.to_string(), seed: cfg.seed, config: cfg.clone(), summary }
}

/// Runs a resolved config and renders its output without touching disk.
pub fn execute(cfg: &RunConfig) -> Outcome<Output> {
    cfg.validate()?;
    match cfg.command {
        Command::Simulate => simulate(cfg),
        Command::Verify => run_verify(cfg),
        Command::Theory => theory(cfg),
        Command::LimitShape => limit_shape(cfg),
    }
}

const LAPLACE_HEADER: [&str; 12] =
    ["k", "alpha_1", "alpha_2", "tau_1", "tau_2", "functional", "estimate", "stderr", "floor_bias", "samples", "prediction", "prediction_error"];

fn pad(xs: &[f64]) -> [String; 2] {
    [xs.first().map_or(String::new(), |&x| fmt_float(x)), xs.get(1).map_or(String::new(), |&x| fmt_float(x))]
}

/// One row per `(ᾱ, functional)`: the empirical Laplace functional of the
/// campaign and its limit.
pub fn laplace_rows(cfg: &RunConfig, samples: &[EdgeProcessSample]) -> Outcome<Vec<(Value, Vec<String>)>> {
    let alphas: Vec<Vec<f64>> = if cfg.k == 1 { cfg.alpha.iter().map(|&a| vec![a]).collect() } else { vec![cfg.alpha.clone()] };
    let opts = cfg.theory_options();
    let mut rows = Vec::new();
    for alpha in alphas {
        for functional in [Functional::Top, Functional::Both] {
            let even = vec![false; cfg.k];
            let est = airy::empirical_laplace(samples, &alpha, &cfg.tau, functional, &even, cfg.floor)?;
            let pred = match functional {
                Functional::Top => airy::phi(&alpha, &cfg.tau, &opts)?,
                Functional::Both => airy::laplace_prediction(&alpha, &cfg.tau, &opts)?,
            };
            let [a1, a2] = pad(&alpha);
            let [t1, t2] = pad(&cfg.tau);
            let name = format!("{functional:?}").to_lowercase();
            rows.push((
                json!({ "k": cfg.k, "alpha": alpha, "tau": cfg.tau, "functional": functional, "estimate": est.estimate,
                        "stderr": est.stderr, "floor_bias": est.floor_bias, "samples": est.samples,
                        "prediction": pred.value, "prediction_error": pred.error }),
                vec![
                    cfg.k.to_string(),
                    a1,
                    a2,
                    t1,
                    t2,
                    name,
                    fmt_float(est.estimate),
                    fmt_float(est.stderr),
                    fmt_float(est.floor_bias),
                    est.samples.to_string(),
                    fmt_float(pred.value),
                    fmt_float(pred.error),
                ],
            ));
        }
    }
    Ok(rows)
}

const SAMPLE_HEADER: [&str; 7] = ["sample", "grid", "tau", "time", "family", "j", "x"];

/// Trajectory records of samples `first..`, one line per recorded value.
pub fn sample_rows(samples: &[EdgeProcessSample], first: usize) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, s) in samples.iter().enumerate() {
        for (g, (&tau, &time)) in s.tau_grid.iter().zip(&s.times).enumerate() {
            for (family, lines) in [("top", &s.lines[g]), ("primed", &s.primed[g])] {
                for (j, &x) in lines.iter().enumerate() {
                    rows.push(vec![
                        (first + i).to_string(),
                        g.to_string(),
                        fmt_float(tau),
                        time.to_string(),
                        family.to_string(),
                        (j + 1).to_string(),
                        fmt_float(x),
                    ]);
                }
            }
        }
    }
    rows
}

fn simulate(cfg: &RunConfig) -> Outcome<Output> {
    let samples = dynamics::run_campaign(&cfg.campaign())?;
    let rows = laplace_rows(cfg, &samples)?;
    let summary = json!({ "samples": samples.len(), "tau_grid": cfg.tau_grid() });
    let m = meta(cfg, summary);
    match cfg.format {
        Format::Json => {
            let laplace: Vec<Value> = rows.into_iter().map(|r| r.0).collect();
            Ok(Output { main: json_bytes(&json!({ "meta": m, "laplace": laplace, "samples": samples }))?, extra: vec![], exit_code: 0 })
        }
        Format::Csv => {
            let table: Vec<Vec<String>> = rows.into_iter().map(|r| r.1).collect();
            let main = csv_bytes(&m, &LAPLACE_HEADER, &table)?;
            let extra = csv_bytes(&m, &SAMPLE_HEADER, &sample_rows(&samples, 0))?;
            Ok(Output { main, extra: vec![("samples".into(), extra)], exit_code: 0 })
        }
    }
}

fn run_verify(cfg: &RunConfig) -> Outcome<Output> {
    let report = verify::run_suite(cfg.n, cfg.m_max).map_err(|e| Failure::Resource(e.to_string()))?;
    let exit_code = if report.passed { 0 } else { 1 };
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.family).collect();
    let summary = json!({ "passed": report.passed, "checks": report.checks.len(), "families": report.families.len(), "failed": failed });
    let m = meta(cfg, summary);
    let main = match cfg.format {
        Format::Json => json_bytes(&json!({ "meta": m, "report": report }))?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.family.to_string(),
                        c.name.clone(),
                        if c.passed { "pass" } else { "fail" }.to_string(),
                        c.counterexample.as_ref().map_or(String::new(), Value::to_string),
                    ]
                })
                .collect();
            csv_bytes(&m, &["family", "check", "status", "counterexample"], &rows)?
        }
    };
    Ok(Output { main, extra: vec![], exit_code })
}

const THEORY_HEADER: [&str; 10] = ["quantity", "k", "s", "alpha_1", "alpha_2", "tau_1", "tau_2", "value", "error", "s_max"];

fn theory(cfg: &RunConfig) -> Outcome<Output> {
    let opts = cfg.theory_options();
    let mut rows: Vec<Vec<String>> = Vec::new();
    let blank = || String::new();
    for s in (2..=cfg.s_max).step_by(2) {
        let diagrams = generate_diagrams(s, cfg.k)?;
        let mut push = |name: &str, v: usize| {
            rows.push(vec![name.into(), cfg.k.to_string(), s.to_string(), blank(), blank(), blank(), blank(), v.to_string(), "0".into(), cfg.s_max.to_string()]);
        };
        push("diagram_count", diagrams.len());
        if cfg.k == 2 {
            push("connected_count", diagrams.iter().filter(|d| d.components() == 1).count());
        }
    }
    let points: Vec<(Vec<f64>, Vec<f64>)> =
        if cfg.k == 1 { cfg.alpha.iter().map(|&a| (vec![a], cfg.tau.clone())).collect() } else { vec![(cfg.alpha.clone(), cfg.tau.clone())] };
    for (alpha, tau) in points {
        let psi = airy::psi(&alpha, &tau, cfg.s_max, cfg.tolerance)?;
        let phi = airy::phi(&alpha, &tau, &opts)?;
        let pred = airy::laplace_prediction(&alpha, &tau, &opts)?;
        let [a1, a2] = pad(&alpha);
        let [t1, t2] = pad(&tau);
        for (name, v, e) in [
            ("psi", psi.value, psi.tail),
            ("phi", phi.value, phi.error),
            ("phi_leading", phi.leading, 0.0),
            ("laplace_prediction", pred.value, pred.error),
        ] {
            rows.push(vec![
                name.into(),
                cfg.k.to_string(),
                blank(),
                a1.clone(),
                a2.clone(),
                t1.clone(),
                t2.clone(),
                fmt_float(v),
                fmt_float(e),
                cfg.s_max.to_string(),
            ]);
        }
    }
    let m = meta(cfg, json!({ "rows": rows.len() }));
    let main = match cfg.format {
        Format::Csv => csv_bytes(&m, &THEORY_HEADER, &rows)?,
        Format::Json => {
            let table: Vec<Value> =
                rows.iter().map(|r| Value::Object(THEORY_HEADER.iter().zip(r).map(|(h, v)| (h.to_string(), json!(v))).collect())).collect();
            json_bytes(&json!({ "meta": m, "table": table }))?
        }
    };
    Ok(Output { main, extra: vec![], exit_code: 0 })
}

fn limit_shape(cfg: &RunConfig) -> Outcome<Output> {
    let mut rng = crate::rng::stream(cfg.seed.unwrap_or_default(), 0);
    let lambda = dynamics::sample_plancherel(cfg.n, &mut rng, None);
    let statistic = dynamics::limit_shape_statistic(&lambda)?;
    let fr = lambda.frobenius();
    let n = cfg.n as f64;
    let w = std::f64::consts::PI / (4.0 * n.sqrt());
    let mut atoms: Vec<f64> = fr.f.iter().map(|&f| f as f64 / n.sqrt()).chain(fr.fprime.iter().map(|&f| -(f as f64) / n.sqrt())).collect();
    atoms.sort_by(f64::total_cmp);
    let curve: Vec<(f64, f64, f64)> = (0..=400)
        .map(|i| {
            let x = -2.5 + i as f64 * 0.0125;
            let below = atoms.partition_point(|&a| a <= x);
            (x, below as f64 * w, dynamics::limit_cdf(x))
        })
        .collect();
    let summary = json!({ "statistic": statistic, "mass": dynamics::frobenius_measure_mass(&lambda), "frobenius_rank": fr.d() });
    let m = meta(cfg, summary);
    let main = match cfg.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = curve.iter().map(|&(x, e, l)| vec![fmt_float(x), fmt_float(e), fmt_float(l)]).collect();
            csv_bytes(&m, &["x", "empirical_cdf", "limit_cdf"], &rows)?
        }
        Format::Json => {
            let c: Vec<Value> = curve.iter().map(|&(x, e, l)| json!({ "x": x, "empirical_cdf": e, "limit_cdf": l })).collect();
            json_bytes(&json!({ "meta": m, "curve": c }))?
        }
    };
    Ok(Output { main, extra: vec![], exit_code: 0 })
}

/// `dir/stem.ext` becomes `dir/stem.suffix.ext`.
pub fn extra_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{suffix}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{suffix}"),
    };
    out.with_file_name(name)
}

fn write_output(out: Option<&Path>, output: &Output) -> Outcome<()> {
    let io = |p: &Path, e: std::io::Error| Failure::Invalid(format!("{}: {e}", p.display()));
    match out {
        Some(path) => {
            fs::write(path, &output.main).map_err(|e| io(path, e))?;
            for (suffix, bytes) in &output.extra {
                let p = extra_path(path, suffix);
                fs::write(&p, bytes).map_err(|e| io(&p, e))?;
            }
        }
        None => std::io::stdout().write_all(&output.main).map_err(|e| io(Path::new("stdout"), e))?,
    }
    Ok(())
}

/// Entry point of the binary; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (command, flags) = match &cli.command {
        CommandLine::Simulate(f) => (Command::Simulate, f),
        CommandLine::Verify(f) => (Command::Verify, f),
        CommandLine::Theory(f) => (Command::Theory, f),
        CommandLine::LimitShape(f) => (Command::LimitShape, f),
    };
    let result = (|| {
        let file = flags.config.as_deref().map(load_config_file).transpose()?;
        let cfg = RunConfig::resolve(command, flags, file)?;
        let output = execute(&cfg)?;
        write_output(flags.out.as_deref(), &output)?;
        Ok::<_, Failure>(output.exit_code)
    })();
    match result {
        Ok(code) => {
            if code == 1 {
                eprintln!("verification failed; see the report");
            }
            code
        }
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}
