//! Reproducible Monte Carlo experiments over the curve ensemble, one per
//! headline statement: annulus classes, nest depths, point separation,
//! sup-norm growth, univariate root counts, deterministic bound tables, and
//! the perturbation-stability certificate. Each run emits a trial table, a
//! machine summary, and a human report; identical configs produce
//! byte-identical trial tables regardless of worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::barrier::{certify, subspace_alpha, sup_norm_estimate};
use crate::kostlan::{
    count_real_roots, sample_in_hyperplane_with, sample_kostlan, sample_univariate_kostlan,
    trial_rng, SamplerConfig, VarianceConvention, MAX_SAMPLING_DEGREE,
};
use crate::poly::{HomogeneousPoly, MultiIndex};
use crate::projgeom::{pack_fs_balls, ProjectivePoint, SphereGrid};
use crate::reference::{chebyshev_nest, scattered_ovals, small_oval, Reference};
use crate::topology::{
    annulus_class, nest_depth_at, separation_classes, AnnulusClass, AnnulusSpec,
};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("bad value for `{key}`: {why}")]
    BadValue { key: &'static str, why: String },
    #[error("config line {line}: {why}")]
    Parse { line: usize, why: String },
    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
    #[error("config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Bounds,
    LargeComponents,
    Nests,
    Separation,
    SupnormTail,
    UnivariateRoots,
    BarrierStability,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::Bounds,
        ExperimentKind::LargeComponents,
        ExperimentKind::Nests,
        ExperimentKind::Separation,
        ExperimentKind::SupnormTail,
        ExperimentKind::UnivariateRoots,
        ExperimentKind::BarrierStability,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Bounds => "bounds",
            ExperimentKind::LargeComponents => "large-components",
            ExperimentKind::Nests => "nests",
            ExperimentKind::Separation => "separation",
            ExperimentKind::SupnormTail => "supnorm-tail",
            ExperimentKind::UnivariateRoots => "univariate-roots",
            ExperimentKind::BarrierStability => "barrier-stability",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentKind {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ConfigError::UnknownExperiment(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => {
                Err(ConfigError::BadValue { key: "format", why: format!("{other:?}") })
            }
        }
    }
}

/// Which unit vector spans the rejected direction in the hyperplane
/// ensemble: the scattered reference or the peak monomial X₀ᵈ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HyperplaneChoice {
    #[default]
    Scattered,
    Peak,
}

impl HyperplaneChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            HyperplaneChoice::Scattered => "scattered",
            HyperplaneChoice::Peak => "peak",
        }
    }
}

impl FromStr for HyperplaneChoice {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "scattered" => Ok(HyperplaneChoice::Scattered),
            "peak" => Ok(HyperplaneChoice::Peak),
            other => {
                Err(ConfigError::BadValue { key: "hyperplane_v", why: format!("{other:?}") })
            }
        }
    }
}

/// Everything a run needs. Build one with [`ExperimentConfig::new`] (kind
/// defaults), a config file, or field-by-field, then `validate` runs before
/// any sampling.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub d: Vec<usize>,
    pub f: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub m: usize,
    /// Ball parameter for certificates; None picks the kind default (6f for
    /// ovals, 4f for nests, 6 for scattered).
    pub g: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    /// 0 = auto: 64 rays; ≥ 8 planar cells and ≥ 4 sphere cells per d^{-1/2}.
    pub resolution: usize,
    pub n_directions: usize,
    pub ball_samples: usize,
    pub convention: VarianceConvention,
    pub hyperplane_v: HyperplaneChoice,
    /// 0 = one worker per core. Results never depend on this.
    pub workers: usize,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        use ExperimentKind::*;
        let (d, f, trials): (&[usize], f64, u64) = match experiment {
            Bounds => (&[100, 1000], 3.0, 1),
            LargeComponents => (&[20, 50, 100], 1.0, 2000),
            Nests => (&[10, 20, 40], 2.5, 10_000),
            Separation => (&[50, 100], 1.0, 300),
            SupnormTail => (&[10, 20, 40, 80], 1.0, 500),
            UnivariateRoots => (&[4, 16, 64], 1.0, 20_000),
            BarrierStability => (&[60], 2.0, 1000),
        };
        ExperimentConfig {
            experiment,
            d: d.to_vec(),
            f,
            alpha: 0.9,
            epsilon: 0.3,
            m: 2,
            g: None,
            trials,
            seed: 1,
            resolution: 0,
            n_directions: 8,
            ball_samples: 1000,
            convention: VarianceConvention::Half,
            hyperplane_v: HyperplaneChoice::Scattered,
            workers: 0,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.trials < 1 {
            return Err(ConfigError::BadValue { key: "trials", why: "must be >= 1".into() });
        }
        if self.d.is_empty() {
            return Err(ConfigError::BadValue { key: "d", why: "need at least one degree".into() });
        }
        for &d in &self.d {
            let min_d = if self.experiment == ExperimentKind::UnivariateRoots { 1 } else { 2 };
            // bounds never samples, so degree is limited only by norm-table size
            let max_d = if self.experiment == ExperimentKind::Bounds {
                100_000
            } else {
                MAX_SAMPLING_DEGREE
            };
            if d < min_d || d > max_d {
                return Err(ConfigError::BadValue {
                    key: "d",
                    why: format!("{d} outside [{min_d}, {max_d}]"),
                });
            }
        }
        if !(self.f > 0.0 && self.f.is_finite()) {
            return Err(ConfigError::BadValue { key: "f", why: format!("{} <= 0", self.f) });
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(ConfigError::BadValue { key: "alpha", why: "need 0 < alpha <= 1".into() });
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(ConfigError::BadValue {
                key: "epsilon",
                why: "need 0 < epsilon < 1/2".into(),
            });
        }
        if self.m < 1 {
            return Err(ConfigError::BadValue { key: "m", why: "must be >= 1".into() });
        }
        if let Some(g) = self.g {
            if !(g >= 1.0 && g.is_finite()) {
                return Err(ConfigError::BadValue { key: "g", why: "must be >= 1".into() });
            }
        }
        if self.n_directions < 8 {
            return Err(ConfigError::BadValue {
                key: "n_directions",
                why: "must be >= 8".into(),
            });
        }
        if self.ball_samples < 1000 {
            return Err(ConfigError::BadValue {
                key: "ball_samples",
                why: "must be >= 1000".into(),
            });
        }
        Ok(())
    }

    /// Flat `key = value` text; `#` starts a comment, `d` takes a comma list.
    pub fn from_ini_str(text: &str) -> Result<Self, ConfigError> {
        let mut kv: Vec<(usize, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Parse { line: i + 1, why: format!("expected key = value, got {line:?}") });
            };
            kv.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let experiment = kv
            .iter()
            .find(|(_, k, _)| k == "experiment")
            .ok_or(ConfigError::MissingKey("experiment"))?
            .2
            .parse::<ExperimentKind>()?;
        let mut cfg = ExperimentConfig::new(experiment);
        for (line, k, v) in kv {
            let bad = |key: &'static str| ConfigError::Parse {
                line,
                why: format!("bad value {v:?} for `{key}`"),
            };
            match k.as_str() {
                "experiment" => {}
                "d" => {
                    cfg.d = v
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<Result<_, _>>()
                        .map_err(|_| bad("d"))?;
                }
                "f" => cfg.f = v.parse().map_err(|_| bad("f"))?,
                "alpha" => cfg.alpha = v.parse().map_err(|_| bad("alpha"))?,
                "epsilon" => cfg.epsilon = v.parse().map_err(|_| bad("epsilon"))?,
                "m" => cfg.m = v.parse().map_err(|_| bad("m"))?,
                "g" => cfg.g = Some(v.parse().map_err(|_| bad("g"))?),
                "trials" => cfg.trials = v.parse().map_err(|_| bad("trials"))?,
                "seed" => cfg.seed = v.parse().map_err(|_| bad("seed"))?,
                "resolution" => cfg.resolution = v.parse().map_err(|_| bad("resolution"))?,
                "n_directions" => {
                    cfg.n_directions = v.parse().map_err(|_| bad("n_directions"))?
                }
                "ball_samples" => {
                    cfg.ball_samples = v.parse().map_err(|_| bad("ball_samples"))?
                }
                "convention" => {
                    cfg.convention = v.parse().map_err(|_| bad("convention"))?
                }
                "hyperplane_v" => {
                    cfg.hyperplane_v = v.parse().map_err(|_| bad("hyperplane_v"))?
                }
                "workers" => cfg.workers = v.parse().map_err(|_| bad("workers"))?,
                "format" => cfg.format = v.parse().map_err(|_| bad("format"))?,
                other => {
                    return Err(ConfigError::Parse {
                        line,
                        why: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            experiment: String,
            d: Option<Vec<usize>>,
            f: Option<f64>,
            alpha: Option<f64>,
            epsilon: Option<f64>,
            m: Option<usize>,
            g: Option<f64>,
            trials: Option<u64>,
            seed: Option<u64>,
            resolution: Option<usize>,
            n_directions: Option<usize>,
            ball_samples: Option<usize>,
            convention: Option<String>,
            hyperplane_v: Option<String>,
            workers: Option<usize>,
            format: Option<String>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        let mut cfg = ExperimentConfig::new(raw.experiment.parse()?);
        if let Some(d) = raw.d {
            cfg.d = d;
        }
        if let Some(f) = raw.f {
            cfg.f = f;
        }
        if let Some(a) = raw.alpha {
            cfg.alpha = a;
        }
        if let Some(e) = raw.epsilon {
            cfg.epsilon = e;
        }
        if let Some(m) = raw.m {
            cfg.m = m;
        }
        cfg.g = raw.g.or(cfg.g);
        if let Some(t) = raw.trials {
            cfg.trials = t;
        }
        if let Some(s) = raw.seed {
            cfg.seed = s;
        }
        if let Some(r) = raw.resolution {
            cfg.resolution = r;
        }
        if let Some(n) = raw.n_directions {
            cfg.n_directions = n;
        }
        if let Some(b) = raw.ball_samples {
            cfg.ball_samples = b;
        }
        if let Some(c) = raw.convention {
            cfg.convention = c
                .parse()
                .map_err(|_| ConfigError::BadValue { key: "convention", why: c })?;
        }
        if let Some(h) = raw.hyperplane_v {
            cfg.hyperplane_v = h.parse()?;
        }
        if let Some(w) = raw.workers {
            cfg.workers = w;
        }
        if let Some(f) = raw.format {
            cfg.format = f.parse()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Dispatches on the file extension: `.json` is JSON, anything else the
    /// flat key-value format.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&text)
        } else {
            Self::from_ini_str(&text)
        }
    }

    /// Every field, including defaults, in the flat config syntax.
    pub fn echo(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("experiment = {}\n", self.experiment));
        let ds: Vec<String> = self.d.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!("d = {}\n", ds.join(",")));
        s.push_str(&format!("f = {}\n", self.f));
        s.push_str(&format!("alpha = {}\n", self.alpha));
        s.push_str(&format!("epsilon = {}\n", self.epsilon));
        s.push_str(&format!("m = {}\n", self.m));
        match self.g {
            Some(g) => s.push_str(&format!("g = {g}\n")),
            None => s.push_str("# g = (kind default)\n"),
        }
        s.push_str(&format!("trials = {}\n", self.trials));
        s.push_str(&format!("seed = {}\n", self.seed));
        s.push_str(&format!("resolution = {}\n", self.resolution));
        s.push_str(&format!("n_directions = {}\n", self.n_directions));
        s.push_str(&format!("ball_samples = {}\n", self.ball_samples));
        s.push_str(&format!("convention = {}\n", self.convention.as_str()));
        s.push_str(&format!("hyperplane_v = {}\n", self.hyperplane_v.as_str()));
        s.push_str(&format!("workers = {}\n", self.workers));
        s.push_str(&format!("format = {}\n", self.format.as_str()));
        s
    }
}

// ---------------------------------------------------------------------------
// statistics

/// 95% default is z = 1.96. Degenerate n = 0 reports the vacuous [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct WilsonInterval {
    pub p_hat: f64,
    pub lo: f64,
    pub hi: f64,
}

pub fn wilson_interval(successes: u64, n: u64, z: f64) -> WilsonInterval {
    if n == 0 {
        return WilsonInterval { p_hat: 0.0, lo: 0.0, hi: 1.0 };
    }
    let zero = successes == 0;
    let full = successes == n;
    let (s, n) = (successes as f64, n as f64);
    let p = s / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    WilsonInterval {
        p_hat: p,
        // the interval ends exactly at 0 and 1 in the degenerate cases;
        // don't let rounding pull it inside
        lo: if zero { 0.0 } else { (center - half).max(0.0) },
        hi: if full { 1.0 } else { (center + half).min(1.0) },
    }
}

/// Deterministic summation independent of accumulation order elsewhere.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
        }
    }
}

pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = pairwise_sum(xs) / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n as f64 - 1.0);
    (mean, (var / n as f64).sqrt())
}

fn median(xs: &[f64]) -> f64 {
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

// ---------------------------------------------------------------------------
// harness

/// splitmix64 step: decorrelates the per-degree sampling streams.
fn mix_seed(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `job` for trial indices 0..trials on a pool of `workers` threads
/// (0 = cores), collecting in index order so output never depends on
/// scheduling.
fn run_indexed<T: Send>(
    trials: u64,
    workers: usize,
    job: impl Fn(u64) -> T + Sync + Send,
) -> Vec<T> {
    if workers == 1 {
        return (0..trials).map(job).collect();
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if workers > 0 {
        builder = builder.num_threads(workers);
    }
    let pool = builder.build().expect("thread pool");
    pool.install(|| (0..trials).into_par_iter().map(job).collect())
}

// ---------------------------------------------------------------------------
// outputs

#[derive(Debug, Clone)]
pub struct TrialTable {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl TrialTable {
    fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(r)
                        .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                        .collect(),
                )
            })
            .collect();
        Value::Array(rows)
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub table: TrialTable,
    pub summary: Value,
    pub report_md: String,
    /// Certified invariants that failed; a nonempty list means exit code 2.
    pub violations: Vec<String>,
}

impl ExperimentReport {
    /// Writes trials.csv (or trials.json), summary.json, and report.md.
    pub fn write_outputs(&self, dir: &Path, format: OutputFormat) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let trials_path = match format {
            OutputFormat::Csv => {
                let p = dir.join("trials.csv");
                std::fs::write(&p, self.table.to_csv())?;
                p
            }
            OutputFormat::Json => {
                let p = dir.join("trials.json");
                let mut text = serde_json::to_string_pretty(&self.table.to_json())?;
                text.push('\n');
                std::fs::write(&p, text)?;
                p
            }
        };
        written.push(trials_path);
        let summary_path = dir.join("summary.json");
        let mut text = serde_json::to_string_pretty(&self.summary)?;
        text.push('\n');
        std::fs::write(&summary_path, text)?;
        written.push(summary_path);
        let report_path = dir.join("report.md");
        std::fs::write(&report_path, &self.report_md)?;
        written.push(report_path);
        Ok(written)
    }
}

fn md_header(cfg: &ExperimentConfig) -> String {
    let mut s = format!("# {} experiment\n\n## Configuration\n\n```\n", cfg.experiment);
    s.push_str(&cfg.echo());
    s.push_str("```\n\n## Results\n\n");
    s
}

fn md_footer(s: &mut String, violations: &[String], indeterminate_note: bool) {
    if indeterminate_note {
        s.push_str(
            "\nIndeterminate trials (degenerate boundaries or unresolved scans after one 4x \
             resolution retry) are excluded from both numerator and denominator of every \
             probability and reported on their own.\n",
        );
    }
    if violations.is_empty() {
        s.push_str("\nNo invariant violations.\n");
    } else {
        s.push_str("\n## VIOLATIONS\n\n");
        for v in violations {
            s.push_str(&format!("- {v}\n"));
        }
    }
}

fn to_cfg_err<E: std::fmt::Display>(e: E) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}

/// Centers for the scattered construction: a deterministic spherical-spiral
/// packing with pairwise FS distance >= 2 d^(epsilon - 1/2).
pub fn scattered_points(
    d: usize,
    epsilon: f64,
    m: usize,
) -> Result<Vec<ProjectivePoint>, ConfigError> {
    let rho = (d as f64).powf(epsilon - 0.5);
    if rho > std::f64::consts::PI / 4.0 {
        return Err(ConfigError::Invalid(format!(
            "d = {d} too small: required separation radius {rho:.3} exceeds pi/4"
        )));
    }
    let centers = pack_fs_balls(rho).map_err(to_cfg_err)?;
    if centers.len() < m {
        return Err(ConfigError::Invalid(format!(
            "only {} centers fit with separation 2*d^(eps-1/2) = {:.4}, need m = {m}",
            centers.len(),
            2.0 * rho
        )));
    }
    Ok(centers.into_iter().take(m).collect())
}

fn auto_ray_resolution(cfg: &ExperimentConfig) -> usize {
    if cfg.resolution > 0 {
        cfg.resolution
    } else {
        64
    }
}

fn auto_planar_resolution(cfg: &ExperimentConfig, window: f64, d: usize) -> usize {
    if cfg.resolution > 0 {
        cfg.resolution
    } else {
        (16.0 * window * (d as f64).sqrt()).ceil().max(256.0) as usize
    }
}

fn auto_sphere_resolution(cfg: &ExperimentConfig, d: usize, floor: f64, scale: f64) -> usize {
    if cfg.resolution > 0 {
        cfg.resolution
    } else {
        (scale * (d as f64).sqrt()).ceil().max(floor) as usize
    }
}

// ---------------------------------------------------------------------------
// runners

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::Bounds => run_bounds(cfg),
        ExperimentKind::LargeComponents => run_large_components(cfg),
        ExperimentKind::Nests => run_nests(cfg),
        ExperimentKind::Separation => run_separation(cfg),
        ExperimentKind::SupnormTail => run_supnorm_tail(cfg),
        ExperimentKind::UnivariateRoots => run_univariate_roots(cfg),
        ExperimentKind::BarrierStability => run_barrier_stability(cfg),
    }
}

/// Deterministic table: norms, boundary infima, thresholds, and probability
/// bounds for each reference kind at each degree.
pub fn run_bounds(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let mut table = TrialTable::new(vec![
        "kind",
        "d",
        "f",
        "g",
        "l2_norm_sq",
        "l2_reference",
        "inf_k_numeric",
        "inf_k_bound",
        "below_asymptotic",
        "m",
        "prob_lower_log10",
        "convention",
    ]);
    let mut md = md_header(cfg);
    let mut rows_json = Vec::new();
    let mut first_ok: BTreeMap<&'static str, Option<usize>> = BTreeMap::new();
    for &d in &cfg.d {
        let df = d as f64;
        let mut entries: Vec<(&'static str, Box<dyn Reference>, f64, f64)> = Vec::new();
        let so = small_oval(d, cfg.f).map_err(to_cfg_err)?;
        let g_oval = cfg.g.unwrap_or(6.0 * cfg.f).clamp(1.0, df);
        // second-order expansion of the exact norm
        let oval_ref =
            2.0 * cfg.f * cfg.f / df.powi(4) * (1.0 - 3.0 / df + 4.0 / (cfg.f * cfg.f));
        entries.push(("small-oval", Box::new(so), g_oval, oval_ref));
        match chebyshev_nest(d, cfg.f, cfg.alpha) {
            Ok(nest) => {
                let g_nest = cfg.g.unwrap_or(4.0 * cfg.f).clamp(1.0, df);
                // an upper bound, not an asymptotic
                let nest_ref = cfg.f * cfg.f * (2.0f64).powf(10.0 * cfg.f) / df.powi(2);
                entries.push(("nest", Box::new(nest), g_nest, nest_ref));
            }
            Err(e) => {
                md.push_str(&format!("- nest skipped at d = {d}: {e}\n"));
            }
        }
        // sum-of-rotated-ovals expansion is cubic in d; keep it off the
        // deterministic large-d rows
        if d <= 2000 {
            match scattered_points(d, cfg.epsilon, cfg.m)
                .and_then(|pts| scattered_ovals(d, &pts, cfg.epsilon).map_err(to_cfg_err))
            {
                Ok(sc) => {
                    let g_sc = cfg.g.unwrap_or(6.0).clamp(1.0, df);
                    let sc_ref = 10.0 * cfg.m as f64 / df.powi(4);
                    entries.push(("scattered", Box::new(sc), g_sc, sc_ref));
                }
                Err(e) => {
                    md.push_str(&format!("- scattered skipped at d = {d}: {e}\n"));
                }
            }
        } else {
            md.push_str(&format!("- scattered skipped at d = {d}: expansion too large\n"));
        }
        for (name, reference, g, l2_ref) in entries {
            let cert =
                certify(reference.as_ref(), g, (4 * d).max(512)).map_err(to_cfg_err)?;
            let l2 = reference.l2_norm_sq();
            table.push(vec![
                name.to_string(),
                d.to_string(),
                cfg.f.to_string(),
                g.to_string(),
                l2.to_string(),
                l2_ref.to_string(),
                cert.inf_k_numeric.to_string(),
                cert.inf_k_bound.to_string(),
                cert.below_asymptotic.to_string(),
                cert.m.to_string(),
                cert.prob_lower.log10.to_string(),
                cfg.convention.as_str().to_string(),
            ]);
            let slot = first_ok.entry(name).or_insert(None);
            if slot.is_none() && !cert.below_asymptotic {
                *slot = Some(d);
            }
            rows_json.push(json!({
                "kind": name, "d": d, "f": cfg.f, "g": g,
                "l2_norm_sq": l2, "l2_reference": l2_ref,
                "inf_k_numeric": cert.inf_k_numeric, "inf_k_bound": cert.inf_k_bound,
                "below_asymptotic": cert.below_asymptotic,
                "m": cert.m, "prob_lower_log10": cert.prob_lower.log10,
            }));
            md.push_str(&format!(
                "- {name} d={d}: inf_K = {:.6e} (closed form {:.6e}{}), m = {:.4e}, \
                 log10 P >= {:.4e}\n",
                cert.inf_k_numeric,
                cert.inf_k_bound,
                if cert.below_asymptotic { ", below asymptotic regime" } else { "" },
                cert.m,
                cert.prob_lower.log10,
            ));
        }
    }
    let thresholds: Value = first_ok
        .iter()
        .map(|(k, v)| (k.to_string(), v.map_or(Value::Null, |d| json!(d))))
        .collect::<serde_json::Map<String, Value>>()
        .into();
    md.push_str(
        "\nThe smallest configured degree where the numeric infimum clears the closed-form \
         bound, per kind: ",
    );
    md.push_str(&thresholds.to_string());
    md.push('\n');
    let violations = Vec::new();
    md_footer(&mut md, &violations, false);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "rows": rows_json,
        "first_d_above_closed_form": thresholds,
    });
    Ok(ExperimentReport {
        kind: cfg.experiment,
        table,
        summary,
        report_md: md,
        violations,
    })
}

fn classify_annulus(
    f: &HomogeneousPoly,
    ann: &AnnulusSpec,
    n_directions: usize,
    resolution: usize,
) -> &'static str {
    match annulus_class(f, ann, n_directions, resolution) {
        Ok(AnnulusClass::Nontrivial) => "nontrivial",
        Ok(AnnulusClass::Trivial) => "trivial",
        Err(_) => match annulus_class(f, ann, n_directions, 4 * resolution) {
            Ok(AnnulusClass::Nontrivial) => "nontrivial",
            Ok(AnnulusClass::Trivial) => "trivial",
            Err(_) => "indeterminate",
        },
    }
}

pub fn run_large_components(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let ray_res = auto_ray_resolution(cfg);
    let mut table = TrialTable::new(vec!["d", "trial", "outcome"]);
    let mut md = md_header(cfg);
    let mut per_d = Vec::new();
    let mut violations = Vec::new();
    for &d in &cfg.d {
        let ann = AnnulusSpec::new(
            ProjectivePoint::e0(),
            (cfg.f / (2.0 * d as f64)).sqrt(),
            (3.0 * cfg.f / (2.0 * d as f64)).sqrt(),
        )
        .map_err(to_cfg_err)?;
        let scfg = SamplerConfig::new(d, cfg.convention, mix_seed(cfg.seed, d as u64))
            .map_err(to_cfg_err)?;
        let outcomes = run_indexed(cfg.trials, cfg.workers, |trial| {
            let q = sample_kostlan(&scfg, trial);
            classify_annulus(&q, &ann, cfg.n_directions, ray_res)
        });
        let mut counts = [0u64; 3]; // nontrivial, trivial, indeterminate
        for (t, o) in outcomes.iter().enumerate() {
            table.push(vec![d.to_string(), t.to_string(), o.to_string()]);
            match *o {
                "nontrivial" => counts[0] += 1,
                "trivial" => counts[1] += 1,
                _ => counts[2] += 1,
            }
        }
        assert_eq!(counts.iter().sum::<u64>(), cfg.trials);
        let det = counts[0] + counts[1];
        let wil = wilson_interval(counts[0], det, 1.96);
        // the certificate this probability is guaranteed to dominate
        let so = small_oval(d, cfg.f).map_err(to_cfg_err)?;
        let g = cfg.g.unwrap_or(6.0 * cfg.f).clamp(1.0, d as f64);
        let cert = certify(&so, g, (4 * d).max(512)).map_err(to_cfg_err)?;
        let rho = (g / d as f64).sqrt().atan();
        let packing = pack_fs_balls(rho.min(std::f64::consts::PI / 4.0))
            .map_err(to_cfg_err)?
            .len();
        if wil.hi < cert.prob_lower.value {
            violations.push(format!(
                "d = {d}: empirical CI upper bound {} falls below the certified lower bound {}",
                wil.hi, cert.prob_lower.value
            ));
        }
        per_d.push(json!({
            "d": d,
            "trials": cfg.trials,
            "nontrivial": counts[0], "trivial": counts[1], "indeterminate": counts[2],
            "p_hat": wil.p_hat, "wilson_lo": wil.lo, "wilson_hi": wil.hi,
            "ci_excludes_zero": wil.lo > 0.0,
            "m": cert.m,
            "prob_lower_log10": cert.prob_lower.log10,
            "packing_count": packing,
            "expected_count_lower_estimate": wil.lo * packing as f64,
        }));
        md.push_str(&format!(
            "- d={d}: p(nontrivial) = {:.4} [{:.4}, {:.4}] over {det} determinate trials \
             ({} indeterminate); certified log10 bound {:.3e}; {} disjoint balls pack, \
             expected-count lower estimate {:.2}\n",
            wil.p_hat, wil.lo, wil.hi, counts[2], cert.prob_lower.log10, packing,
            wil.lo * packing as f64,
        ));
    }
    md_footer(&mut md, &violations, true);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "per_d": per_d,
    });
    Ok(ExperimentReport { kind: cfg.experiment, table, summary, report_md: md, violations })
}

pub fn run_nests(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let mut table = TrialTable::new(vec!["d", "trial", "depth", "lower_bound", "outcome"]);
    let mut md = md_header(cfg);
    let mut per_d = Vec::new();
    let mut violations = Vec::new();
    for &d in &cfg.d {
        let window = (6.0 * cfg.f / d as f64).sqrt().min(1.5);
        let res = auto_planar_resolution(cfg, window, d);
        let scfg = SamplerConfig::new(d, cfg.convention, mix_seed(cfg.seed, d as u64))
            .map_err(to_cfg_err)?;
        let origin = ProjectivePoint::e0();
        let results = run_indexed(cfg.trials, cfg.workers, |trial| {
            let q = sample_kostlan(&scfg, trial);
            nest_depth_at(&q, &origin, window, res)
                .or_else(|_| nest_depth_at(&q, &origin, window, 4 * res))
                .ok()
        });
        let mut depths = Vec::new();
        let mut histogram: BTreeMap<usize, u64> = BTreeMap::new();
        let mut lower_bounded = 0u64;
        let mut indeterminate = 0u64;
        for (t, r) in results.iter().enumerate() {
            match r {
                Some(nd) => {
                    table.push(vec![
                        d.to_string(),
                        t.to_string(),
                        nd.depth.to_string(),
                        nd.is_lower_bound.to_string(),
                        "ok".to_string(),
                    ]);
                    depths.push(nd.depth as f64);
                    *histogram.entry(nd.depth).or_insert(0) += 1;
                    lower_bounded += nd.is_lower_bound as u64;
                }
                None => {
                    indeterminate += 1;
                    table.push(vec![
                        d.to_string(),
                        t.to_string(),
                        String::new(),
                        String::new(),
                        "indeterminate".to_string(),
                    ]);
                }
            }
        }
        let (mean, se) = mean_stderr(&depths);
        let bound = (d as f64).sqrt() / 2.0;
        if depths.len() >= 100 && mean > bound + 3.0 * se {
            violations.push(format!(
                "d = {d}: mean nest depth {mean:.4} exceeds sqrt(d)/2 = {bound:.4} + 3 se"
            ));
        }
        // deterministic sub-test on the reference nest, when it exists at this d;
        // its depth n/2 doubles as the threshold for the tail probability
        let mut det_json = Value::Null;
        let mut threshold = 1usize;
        match chebyshev_nest(d, cfg.f, cfg.alpha) {
            Ok(nest) => {
                let expect = nest.n / 2;
                threshold = expect.max(1);
                let win = 1.3 * nest.extremal_radii[0];
                match nest_depth_at(&nest.poly, &origin, win, res.max(256)) {
                    Ok(nd) if nd.depth == expect => {
                        det_json = json!({ "expected": expect, "got": nd.depth, "pass": true });
                    }
                    Ok(nd) => {
                        violations.push(format!(
                            "d = {d}: reference nest depth {} != {expect}",
                            nd.depth
                        ));
                        det_json =
                            json!({ "expected": expect, "got": nd.depth, "pass": false });
                    }
                    Err(e) => {
                        violations
                            .push(format!("d = {d}: reference nest depth failed: {e}"));
                    }
                }
                for (k, ann) in nest.annuli().iter().enumerate() {
                    match annulus_class(&nest.poly, ann, cfg.n_directions, 64) {
                        Ok(AnnulusClass::Nontrivial) => {}
                        other => violations.push(format!(
                            "d = {d}: reference annulus {k} should be nontrivial, got {other:?}"
                        )),
                    }
                }
            }
            Err(e) => md.push_str(&format!("- reference nest unavailable at d = {d}: {e}\n")),
        }
        let deep = depths.iter().filter(|&&x| x >= threshold as f64).count() as u64;
        let wil = wilson_interval(deep, depths.len() as u64, 1.96);
        let hist: Value = histogram
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect::<serde_json::Map<_, _>>()
            .into();
        per_d.push(json!({
            "d": d, "window": window, "resolution": res,
            "trials": cfg.trials, "indeterminate": indeterminate,
            "mean_depth": mean, "stderr": se, "upper_bound_sqrt_d_over_2": bound,
            "depth_threshold": threshold,
            "p_depth_ge_threshold": wil.p_hat, "wilson_lo": wil.lo, "wilson_hi": wil.hi,
            "ci_excludes_zero": wil.lo > 0.0,
            "lower_bounded_trials": lower_bounded,
            "histogram": hist,
            "reference_nest": det_json,
        }));
        md.push_str(&format!(
            "- d={d}: mean depth {mean:.4} +- {se:.4} (bound sqrt(d)/2 = {bound:.3}), \
             P(depth >= {threshold}) = {:.4} [{:.4}, {:.4}], {indeterminate} indeterminate\n",
            wil.p_hat, wil.lo, wil.hi,
        ));
    }
    md_footer(&mut md, &violations, true);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "per_d": per_d,
    });
    Ok(ExperimentReport { kind: cfg.experiment, table, summary, report_md: md, violations })
}

pub fn run_separation(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let mut table = TrialTable::new(vec!["d", "trial", "classes", "partition", "outcome"]);
    let mut md = md_header(cfg);
    let mut per_d = Vec::new();
    let mut violations = Vec::new();
    for &d in &cfg.d {
        let points = scattered_points(d, cfg.epsilon, cfg.m)?;
        let res = auto_sphere_resolution(cfg, d, 64.0, 6.0);
        let grid = SphereGrid::new(res).map_err(to_cfg_err)?;
        let fine_grid = SphereGrid::new(4 * res).map_err(to_cfg_err)?;
        // deterministic: the scattered reference must fully separate its centers
        let sc = scattered_ovals(d, &points, cfg.epsilon).map_err(to_cfg_err)?;
        let det_sep = match separation_classes(&sc.poly, &points, &grid) {
            Ok(groups) => groups.len() == cfg.m,
            Err(_) => false,
        };
        if !det_sep {
            violations.push(format!(
                "d = {d}: the scattered reference failed to separate its own {} centers",
                cfg.m
            ));
        }
        let scfg = SamplerConfig::new(d, cfg.convention, mix_seed(cfg.seed, d as u64))
            .map_err(to_cfg_err)?;
        let results: Vec<Option<Vec<Vec<usize>>>> =
            run_indexed(cfg.trials, cfg.workers, |trial| {
                let q = sample_kostlan(&scfg, trial);
                separation_classes(&q, &points, &grid)
                    .or_else(|_| separation_classes(&q, &points, &fine_grid))
                    .ok()
            });
        let mut separated = 0u64;
        let mut determinate = 0u64;
        for (t, r) in results.iter().enumerate() {
            match r {
                Some(groups) => {
                    determinate += 1;
                    let all = groups.len() == cfg.m;
                    separated += all as u64;
                    let sig = groups
                        .iter()
                        .map(|g| {
                            g.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("+")
                        })
                        .collect::<Vec<_>>()
                        .join("|");
                    table.push(vec![
                        d.to_string(),
                        t.to_string(),
                        groups.len().to_string(),
                        sig,
                        if all { "separated".into() } else { "joined".into() },
                    ]);
                }
                None => {
                    table.push(vec![
                        d.to_string(),
                        t.to_string(),
                        String::new(),
                        String::new(),
                        "indeterminate".to_string(),
                    ]);
                }
            }
        }
        let wil = wilson_interval(separated, determinate, 1.96);
        per_d.push(json!({
            "d": d, "m": cfg.m, "epsilon": cfg.epsilon,
            "grid_resolution": res,
            "required_separation": 2.0 * (d as f64).powf(cfg.epsilon - 0.5),
            "trials": cfg.trials,
            "determinate": determinate,
            "indeterminate": cfg.trials - determinate,
            "p_all_separated": wil.p_hat, "wilson_lo": wil.lo, "wilson_hi": wil.hi,
            "ci_excludes_zero": wil.lo > 0.0,
            "deterministic_reference_separates": det_sep,
        }));
        md.push_str(&format!(
            "- d={d}: P(all {} points separated) = {:.4} [{:.4}, {:.4}] over {determinate} \
             determinate trials; reference curve separates: {det_sep}\n",
            cfg.m, wil.p_hat, wil.lo, wil.hi,
        ));
    }
    md_footer(&mut md, &violations, true);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "per_d": per_d,
    });
    Ok(ExperimentReport { kind: cfg.experiment, table, summary, report_md: md, violations })
}

pub fn run_supnorm_tail(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let mut table = TrialTable::new(vec!["d", "ensemble", "trial", "sup_norm"]);
    let mut md = md_header(cfg);
    let mut per_d = Vec::new();
    let mut violations = Vec::new();
    let mut full_ratios = Vec::new();
    let mut hyper_ratios = Vec::new();
    for &d in &cfg.d {
        let res = auto_sphere_resolution(cfg, d, 48.0, 6.0);
        let v = match cfg.hyperplane_v {
            HyperplaneChoice::Scattered => {
                let points = scattered_points(d, cfg.epsilon, cfg.m)?;
                scattered_ovals(d, &points, cfg.epsilon).map_err(to_cfg_err)?.poly
            }
            HyperplaneChoice::Peak => {
                HomogeneousPoly::monomial(MultiIndex::new(d, 0, 0), 1.0).map_err(to_cfg_err)?
            }
        }
        .normalize_l2()
        .map_err(to_cfg_err)?;
        let scfg = SamplerConfig::new(d, cfg.convention, mix_seed(cfg.seed, 2 * d as u64))
            .map_err(to_cfg_err)?;
        let hcfg =
            SamplerConfig::new(d, cfg.convention, mix_seed(cfg.seed, 2 * d as u64 + 1))
                .map_err(to_cfg_err)?;
        let full: Vec<f64> = run_indexed(cfg.trials, cfg.workers, |trial| {
            let q = sample_kostlan(&scfg, trial)
                .normalize_l2()
                .expect("Gaussian draw is nonzero almost surely");
            sup_norm_estimate(&q, res).expect("valid resolution")
        });
        let hyper: Vec<f64> = run_indexed(cfg.trials, cfg.workers, |trial| {
            let mut rng = trial_rng(hcfg.master_seed, trial, 1);
            let q = sample_in_hyperplane_with(&hcfg, &v, &mut rng)
                .expect("unit reference")
                .normalize_l2()
                .expect("Gaussian draw is nonzero almost surely");
            sup_norm_estimate(&q, res).expect("valid resolution")
        });
        for (name, vals) in [("full", &full), ("hyperplane", &hyper)] {
            for (t, s) in vals.iter().enumerate() {
                table.push(vec![d.to_string(), name.to_string(), t.to_string(), s.to_string()]);
            }
        }
        let sqrt_log_d = (d as f64).ln().sqrt();
        let med_full = median(&full);
        let med_hyper = median(&hyper);
        full_ratios.push((d, med_full / sqrt_log_d));
        hyper_ratios.push((d, med_hyper / sqrt_log_d));
        let exceed = |vals: &[f64], med: f64| {
            vals.iter().filter(|&&x| x > 2.0 * med).count() as f64 / vals.len() as f64
        };
        if cfg.trials >= 100 {
            let gap = (med_full - med_hyper).abs() / med_full;
            if gap >= 0.10 {
                violations.push(format!(
                    "d = {d}: full and hyperplane medians differ by {:.1}% (>= 10%)",
                    100.0 * gap
                ));
            }
        }
        let alpha = subspace_alpha(&v, &SphereGrid::new(res).map_err(to_cfg_err)?)
            .map_err(to_cfg_err)?
            .alpha;
        // the reference oval itself has an outsized sup norm
        let p0 = small_oval(d, cfg.f)
            .map_err(to_cfg_err)?
            .poly
            .normalize_l2()
            .map_err(to_cfg_err)?;
        let p0_sup = sup_norm_estimate(&p0, res).map_err(to_cfg_err)?;
        per_d.push(json!({
            "d": d, "resolution": res, "samples": cfg.trials,
            "median_full": med_full, "median_hyperplane": med_hyper,
            "median_full_over_sqrt_log_d": med_full / sqrt_log_d,
            "median_hyperplane_over_sqrt_log_d": med_hyper / sqrt_log_d,
            "exceedance_full_at_2x_median": exceed(&full, med_full),
            "exceedance_hyperplane_at_2x_median": exceed(&hyper, med_hyper),
            "subspace_alpha": alpha,
            "reference_oval_sup_over_sqrt_log_d": p0_sup / sqrt_log_d,
        }));
        md.push_str(&format!(
            "- d={d}: medians full {med_full:.4} / hyperplane {med_hyper:.4}, \
             per sqrt(log d) {:.4} / {:.4}; alpha = {alpha:.6}; reference oval sup / \
             sqrt(log d) = {:.2}\n",
            med_full / sqrt_log_d,
            med_hyper / sqrt_log_d,
            p0_sup / sqrt_log_d,
        ));
    }
    for (name, ratios) in [("full", &full_ratios), ("hyperplane", &hyper_ratios)] {
        if ratios.len() >= 2 && cfg.trials >= 100 {
            let max = ratios.iter().map(|r| r.1).fold(f64::NEG_INFINITY, f64::max);
            let min = ratios.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
            if max / min > 1.25 {
                violations.push(format!(
                    "{name} ensemble: median/sqrt(log d) spread {:.3} exceeds 1.25",
                    max / min
                ));
            }
        }
    }
    md_footer(&mut md, &violations, false);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "per_d": per_d,
    });
    Ok(ExperimentReport { kind: cfg.experiment, table, summary, report_md: md, violations })
}

pub fn run_univariate_roots(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let mut table = TrialTable::new(vec!["d", "trial", "roots", "flagged"]);
    let mut md = md_header(cfg);
    let mut per_d = Vec::new();
    let mut violations = Vec::new();
    for &d in &cfg.d {
        let seed_d = mix_seed(cfg.seed, d as u64);
        let results = run_indexed(cfg.trials, cfg.workers, |trial| {
            let mut rng = trial_rng(seed_d, trial, 1);
            let p = sample_univariate_kostlan(d, &mut rng);
            count_real_roots(&p).ok()
        });
        let mut clean = Vec::new();
        let mut flagged = 0u64;
        let mut failed = 0u64;
        for (t, r) in results.iter().enumerate() {
            match r {
                Some(rc) => {
                    table.push(vec![
                        d.to_string(),
                        t.to_string(),
                        rc.count.to_string(),
                        rc.flagged.to_string(),
                    ]);
                    if rc.flagged {
                        flagged += 1;
                    } else {
                        clean.push(rc.count as f64);
                    }
                }
                None => {
                    failed += 1;
                    table.push(vec![d.to_string(), t.to_string(), String::new(), "error".into()]);
                }
            }
        }
        let (mean, se) = mean_stderr(&clean);
        let expect = (d as f64).sqrt();
        let z = if se > 0.0 { (mean - expect) / se } else { 0.0 };
        if clean.len() >= 1000 && z.abs() > 3.0 {
            violations.push(format!(
                "d = {d}: mean real-root count {mean:.4} is {z:.1} standard errors from sqrt(d) \
                 = {expect:.4}"
            ));
        }
        per_d.push(json!({
            "d": d, "trials": cfg.trials, "flagged": flagged, "errors": failed,
            "mean_roots": mean, "stderr": se, "expected_sqrt_d": expect, "z": z,
        }));
        md.push_str(&format!(
            "- d={d}: mean real roots {mean:.4} +- {se:.4}, sqrt(d) = {expect:.4}, z = {z:.2} \
             ({flagged} flagged)\n"
        ));
    }
    md_footer(&mut md, &violations, false);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "per_d": per_d,
    });
    Ok(ExperimentReport { kind: cfg.experiment, table, summary, report_md: md, violations })
}

/// The three reference kinds at each configured degree, P̃ + Q with Q drawn
/// from the hyperplane P̃⊥ and scaled to satisfy the perturbation bound: the
/// annulus classes must never change, and the scaled sup must stay under the
/// boundary infimum when re-measured at finer sampling.
pub fn run_barrier_stability(cfg: &ExperimentConfig) -> Result<ExperimentReport, ConfigError> {
    cfg.validate()?;
    let ray_res = auto_ray_resolution(cfg);
    let mut table =
        TrialTable::new(vec!["kind", "d", "trial", "sup_ok", "classes_ok", "outcome"]);
    let mut md = md_header(cfg);
    let mut per_ref = Vec::new();
    let mut violations = Vec::new();
    for &d in &cfg.d {
        let mut refs: Vec<Box<dyn Reference>> = Vec::new();
        refs.push(Box::new(small_oval(d, cfg.f).map_err(to_cfg_err)?));
        let nest_f = 5.0f64.min(d as f64 / 2.0);
        match chebyshev_nest(d, nest_f, cfg.alpha) {
            Ok(nest) => refs.push(Box::new(nest)),
            Err(e) => md.push_str(&format!("- nest skipped at d = {d}: {e}\n")),
        }
        match scattered_points(d, cfg.epsilon, cfg.m)
            .and_then(|pts| scattered_ovals(d, &pts, cfg.epsilon).map_err(to_cfg_err))
        {
            Ok(sc) => refs.push(Box::new(sc)),
            Err(e) => md.push_str(&format!("- scattered skipped at d = {d}: {e}\n")),
        }
        for (ri, reference) in refs.iter().enumerate() {
            let kind = reference.kind();
            let p = reference.poly().normalize_l2().map_err(to_cfg_err)?;
            let circles = reference.k_circles();
            // sup and inf of |·|² over the boundary circles, at unit
            // representatives where |value| is the FS norm
            let sweep = |q: &HomogeneousPoly, angles: usize, want_sup: bool| -> f64 {
                let dense = q.to_dense();
                let mut best = if want_sup { 0.0f64 } else { f64::INFINITY };
                for kc in &circles {
                    let s = 1.0 / (1.0 + kc.radius * kc.radius).sqrt();
                    for a in 0..angles.max(1) {
                        let th = 2.0 * std::f64::consts::PI * a as f64 / angles as f64;
                        let local = [s, s * kc.radius * th.cos(), s * kc.radius * th.sin()];
                        let v = dense.evaluate(kc.rotation.apply(local));
                        best = if want_sup { best.max(v * v) } else { best.min(v * v) };
                        if kc.radius == 0.0 {
                            break;
                        }
                    }
                }
                best
            };
            // trig-poly Nyquist with room to spare
            let coarse = (4 * d).max(256);
            let fine = (8 * d).max(1024);
            let inf_sq = sweep(&p, fine, false);
            let annuli = reference.annuli();
            let baseline: Vec<AnnulusClass> = annuli
                .iter()
                .map(|ann| {
                    annulus_class(&p, ann, cfg.n_directions, ray_res).map_err(to_cfg_err)
                })
                .collect::<Result<_, _>>()?;
            let scfg = SamplerConfig::new(
                d,
                cfg.convention,
                mix_seed(cfg.seed, (d as u64) << 3 | ri as u64),
            )
            .map_err(to_cfg_err)?;
            #[derive(Clone, Copy)]
            enum Trial {
                Ok { sup_ok: bool, classes_ok: bool },
                Indeterminate,
            }
            let zero = HomogeneousPoly::zero(d).map_err(to_cfg_err)?;
            let results = run_indexed(cfg.trials, cfg.workers, |trial| {
                let mut rng = trial_rng(scfg.master_seed, trial, 1);
                let q0 = sample_in_hyperplane_with(&scfg, &p, &mut rng).expect("unit p");
                let sup0 = sweep(&q0, coarse, true);
                if sup0 == 0.0 {
                    return Trial::Indeterminate;
                }
                let scale = 0.9 * (inf_sq / sup0).sqrt();
                let q = zero.add_scaled(&q0, scale).expect("same degree");
                // independent finer re-measurement of the perturbation bound
                let sup_ok = sweep(&q, fine, true) < inf_sq;
                let perturbed = p.add_scaled(&q, 1.0).expect("same degree");
                let mut classes_ok = true;
                for (ann, base) in annuli.iter().zip(&baseline) {
                    match annulus_class(&perturbed, ann, cfg.n_directions, ray_res).or_else(
                        |_| annulus_class(&perturbed, ann, cfg.n_directions, 4 * ray_res),
                    ) {
                        Ok(c) => classes_ok &= c == *base,
                        Err(_) => return Trial::Indeterminate,
                    }
                }
                Trial::Ok { sup_ok, classes_ok }
            });
            let mut pass = 0u64;
            let mut sup_fail = 0u64;
            let mut class_fail = 0u64;
            let mut indet = 0u64;
            for (t, r) in results.iter().enumerate() {
                match r {
                    Trial::Ok { sup_ok, classes_ok } => {
                        table.push(vec![
                            kind.to_string(),
                            d.to_string(),
                            t.to_string(),
                            sup_ok.to_string(),
                            classes_ok.to_string(),
                            "ok".to_string(),
                        ]);
                        sup_fail += !sup_ok as u64;
                        class_fail += !classes_ok as u64;
                        pass += (*sup_ok && *classes_ok) as u64;
                    }
                    Trial::Indeterminate => {
                        indet += 1;
                        table.push(vec![
                            kind.to_string(),
                            d.to_string(),
                            t.to_string(),
                            String::new(),
                            String::new(),
                            "indeterminate".to_string(),
                        ]);
                    }
                }
            }
            if sup_fail > 0 {
                violations.push(format!(
                    "{kind} d = {d}: {sup_fail} perturbations broke the sup bound after scaling"
                ));
            }
            if class_fail > 0 {
                violations.push(format!(
                    "{kind} d = {d}: {class_fail} perturbations changed an annulus class"
                ));
            }
            per_ref.push(json!({
                "kind": kind.to_string(), "d": d, "trials": cfg.trials,
                "pass": pass, "sup_violations": sup_fail,
                "class_changes": class_fail, "indeterminate": indet,
                "inf_k_sq": inf_sq,
            }));
            md.push_str(&format!(
                "- {kind} d={d}: {pass}/{} perturbations preserved everything \
                 ({indet} indeterminate, {sup_fail} sup violations, {class_fail} class changes)\n",
                cfg.trials,
            ));
        }
    }
    // grid-refinement stability: extraction depth must be stable under 2x
    {
        let d = *cfg.d.iter().min().expect("validated nonempty").min(&40);
        let window = (12.0 / d as f64).sqrt().min(1.5);
        let res = auto_planar_resolution(cfg, window, d);
        let scfg = SamplerConfig::new(d, cfg.convention, mix_seed(cfg.seed, 999))
            .map_err(to_cfg_err)?;
        let origin = ProjectivePoint::e0();
        let agreements = run_indexed(50, cfg.workers, |trial| {
            let q = sample_kostlan(&scfg, trial);
            let a = nest_depth_at(&q, &origin, window, res).ok();
            let b = nest_depth_at(&q, &origin, window, 2 * res).ok();
            match (a, b) {
                (Some(x), Some(y)) => Some(x.depth == y.depth),
                _ => None,
            }
        });
        let ok = agreements.iter().flatten().filter(|&&x| x).count();
        let det = agreements.iter().flatten().count();
        if det > 0 && (ok as f64) < 0.95 * det as f64 {
            violations.push(format!(
                "grid-refinement stability: depth agreed on only {ok}/{det} windows at d = {d}"
            ));
        }
        per_ref.push(json!({
            "kind": "grid-refinement", "d": d, "agree": ok, "determinate": det,
        }));
        md.push_str(&format!(
            "- grid refinement at d={d}: depth stable under 2x resolution on {ok}/{det} windows\n"
        ));
    }
    md_footer(&mut md, &violations, true);
    let summary = json!({
        "experiment": cfg.experiment.as_str(),
        "config": cfg.echo(),
        "per_reference": per_ref,
    });
    Ok(ExperimentReport { kind: cfg.experiment, table, summary, report_md: md, violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn wilson_basic_coverage() {
        let w = wilson_interval(30, 100, 1.96);
        assert!((w.p_hat - 0.3).abs() < 1e-12);
        assert!(w.lo < 0.3 && 0.3 < w.hi);
        assert!(w.lo > 0.21 && w.hi < 0.40);
        assert_eq!(wilson_interval(0, 0, 1.96).hi, 1.0);
        // coverage on a synthetic Bernoulli(0.3) stream
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut covered = 0;
        let reps = 2000;
        for _ in 0..reps {
            let mut s = 0u64;
            for _ in 0..200 {
                s += (rng.gen::<f64>() < 0.3) as u64;
            }
            let w = wilson_interval(s, 200, 1.96);
            covered += (w.lo <= 0.3 && 0.3 <= w.hi) as u64;
        }
        let rate = covered as f64 / reps as f64;
        assert!((0.93..=0.97).contains(&rate), "coverage {rate}");
    }

    #[test]
    fn pairwise_sum_and_stats() {
        let xs: Vec<f64> = (1..=1000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        let (mean, se) = mean_stderr(&xs);
        assert!((mean - 500.5).abs() < 1e-9);
        // known closed form: sd of 1..n is sqrt(n(n+1)/12)
        let sd = (1000.0f64 * 1001.0 / 12.0).sqrt();
        assert!((se - sd / 1000.0f64.sqrt()).abs() / se < 1e-10);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn config_parsing_and_validation() {
        let ini = "
            # a comment
            experiment = large-components
            d = 10, 20
            trials = 17
            f = 1.5
            convention = unit
        ";
        let a = ExperimentConfig::from_ini_str(ini).unwrap();
        assert_eq!(a.experiment, ExperimentKind::LargeComponents);
        assert_eq!(a.d, vec![10, 20]);
        assert_eq!(a.trials, 17);
        assert_eq!(a.convention, VarianceConvention::Unit);
        assert_eq!(a.seed, 1); // default
        let js = r#"{"experiment": "large-components", "d": [10, 20], "trials": 17,
                     "f": 1.5, "convention": "unit"}"#;
        let b = ExperimentConfig::from_json_str(js).unwrap();
        assert_eq!(b.d, a.d);
        assert_eq!(b.trials, a.trials);
        assert_eq!(b.convention, a.convention);
        // errors
        assert!(ExperimentConfig::from_ini_str("experiment = nope").is_err());
        assert!(ExperimentConfig::from_ini_str("d = 5").is_err()); // missing experiment
        assert!(ExperimentConfig::from_ini_str(
            "experiment = nests\nunknown_key = 3"
        )
        .is_err());
        let mut bad = ExperimentConfig::new(ExperimentKind::Nests);
        bad.trials = 0;
        assert!(bad.validate().is_err());
        bad = ExperimentConfig::new(ExperimentKind::Nests);
        bad.epsilon = 0.7;
        assert!(bad.validate().is_err());
        bad = ExperimentConfig::new(ExperimentKind::Nests);
        bad.d = vec![MAX_SAMPLING_DEGREE + 1];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn large_components_reproducible_across_workers() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::LargeComponents);
        cfg.d = vec![12];
        cfg.trials = 60;
        cfg.workers = 1;
        let one = run_large_components(&cfg).unwrap();
        cfg.workers = 4;
        let four = run_large_components(&cfg).unwrap();
        assert_eq!(one.table.to_csv(), four.table.to_csv());
        // summaries agree except for the echoed worker count
        assert_eq!(
            serde_json::to_string(&one.summary["per_d"]).unwrap(),
            serde_json::to_string(&four.summary["per_d"]).unwrap()
        );
        // accounting identity
        let per_d = &one.summary["per_d"][0];
        let total = per_d["nontrivial"].as_u64().unwrap()
            + per_d["trivial"].as_u64().unwrap()
            + per_d["indeterminate"].as_u64().unwrap();
        assert_eq!(total, 60);
    }

    #[test]
    fn univariate_runner_matches_sqrt_d() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::UnivariateRoots);
        cfg.d = vec![4];
        cfg.trials = 800;
        let rep = run_univariate_roots(&cfg).unwrap();
        assert!(rep.violations.is_empty());
        let mean = rep.summary["per_d"][0]["mean_roots"].as_f64().unwrap();
        let se = rep.summary["per_d"][0]["stderr"].as_f64().unwrap();
        assert!((mean - 2.0).abs() <= 4.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn bounds_runner_emits_all_kinds() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Bounds);
        cfg.d = vec![100];
        let rep = run_bounds(&cfg).unwrap();
        let kinds: Vec<&str> =
            rep.table.rows.iter().map(|r| r[0].as_str()).collect();
        assert!(kinds.contains(&"small-oval"));
        assert!(kinds.contains(&"nest"));
        assert!(kinds.contains(&"scattered"));
        assert!(rep.violations.is_empty());
        // the small-oval l2 column equals the exact closed form
        let row = rep.table.rows.iter().find(|r| r[0] == "small-oval").unwrap();
        let l2: f64 = row[4].parse().unwrap();
        let so = small_oval(100, cfg.f).unwrap();
        assert!((l2 - so.l2_norm_sq()).abs() <= 1e-15 * l2);
    }

    #[test]
    fn nests_runner_small() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Nests);
        cfg.d = vec![10];
        cfg.trials = 60;
        let rep = run_nests(&cfg).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        let mean = rep.summary["per_d"][0]["mean_depth"].as_f64().unwrap();
        assert!(mean <= 10.0f64.sqrt() / 2.0 + 0.5);
        let det = &rep.summary["per_d"][0]["reference_nest"];
        assert_eq!(det["pass"], Value::Bool(true));
    }

    #[test]
    fn separation_runner_small() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Separation);
        cfg.d = vec![40];
        cfg.trials = 40;
        let rep = run_separation(&cfg).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        let det = rep.summary["per_d"][0]["deterministic_reference_separates"]
            .as_bool()
            .unwrap();
        assert!(det);
        // m = 1 is vacuous: everything counts as separated
        cfg.m = 1;
        cfg.trials = 10;
        let rep = run_separation(&cfg).unwrap();
        let p = rep.summary["per_d"][0]["p_all_separated"].as_f64().unwrap();
        let indet = rep.summary["per_d"][0]["indeterminate"].as_u64().unwrap();
        assert!(p == 1.0 || indet == 10);
    }

    #[test]
    fn barrier_stability_runner_small() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::BarrierStability);
        cfg.d = vec![24];
        cfg.trials = 15;
        let rep = run_barrier_stability(&cfg).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
    }

    #[test]
    fn supnorm_runner_small() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::SupnormTail);
        cfg.d = vec![10];
        cfg.trials = 20;
        let rep = run_supnorm_tail(&cfg).unwrap();
        assert!(rep.violations.is_empty(), "{:?}", rep.violations);
        let med = rep.summary["per_d"][0]["median_full"].as_f64().unwrap();
        assert!(med.is_finite() && med > 1.0);
        let alpha = rep.summary["per_d"][0]["subspace_alpha"].as_f64().unwrap();
        assert!(alpha >= 1.0 - 1e-9);
    }

    #[test]
    fn outputs_written_to_disk() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::UnivariateRoots);
        cfg.d = vec![3];
        cfg.trials = 5;
        let rep = run_univariate_roots(&cfg).unwrap();
        let dir = std::env::temp_dir().join(format!("kc-exp-{}", std::process::id()));
        let files = rep.write_outputs(&dir, OutputFormat::Csv).unwrap();
        assert_eq!(files.len(), 3);
        let csv = std::fs::read_to_string(dir.join("trials.csv")).unwrap();
        assert!(csv.starts_with("d,trial,roots,flagged\n"));
        assert_eq!(csv.lines().count(), 6);
        let summary: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join("summary.json")).unwrap())
                .unwrap();
        assert_eq!(summary["experiment"], "univariate-roots");
        let files = rep.write_outputs(&dir, OutputFormat::Json).unwrap();
        assert!(files[0].ends_with("trials.json"));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
