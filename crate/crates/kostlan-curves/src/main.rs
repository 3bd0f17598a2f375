use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kostlan_curves::experiments::{run, ConfigError, ExperimentConfig, ExperimentKind};

/// Exit codes: 0 success, 2 invariant violation, 3 configuration error.
#[derive(Parser)]
#[command(name = "kostlan-curves", version, disable_help_subcommand = true)]
#[command(about = "Monte Carlo and deterministic experiments on random projective plane curves")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Deterministic norm and probability-bound tables for the reference curves
    Bounds(RunArgs),
    /// Probability of a nontrivial annulus class around a random point
    LargeComponents(RunArgs),
    /// Distribution of nest depth at the origin
    Nests(RunArgs),
    /// Probability that fixed well-separated points land in distinct complement classes
    Separation(RunArgs),
    /// Sup-norm growth against sqrt(log d), full sphere vs hyperplane ensembles
    SupnormTail(RunArgs),
    /// Mean real-root count of univariate Kostlan polynomials vs sqrt(d)
    UnivariateRoots(RunArgs),
    /// Perturbation-stability certificate: annulus classes survive barrier-bounded noise
    BarrierStability(RunArgs),
}

impl Cmd {
    fn split(self) -> (ExperimentKind, RunArgs) {
        match self {
            Cmd::Bounds(a) => (ExperimentKind::Bounds, a),
            Cmd::LargeComponents(a) => (ExperimentKind::LargeComponents, a),
            Cmd::Nests(a) => (ExperimentKind::Nests, a),
            Cmd::Separation(a) => (ExperimentKind::Separation, a),
            Cmd::SupnormTail(a) => (ExperimentKind::SupnormTail, a),
            Cmd::UnivariateRoots(a) => (ExperimentKind::UnivariateRoots, a),
            Cmd::BarrierStability(a) => (ExperimentKind::BarrierStability, a),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Config file: flat `key = value` lines, or JSON if the extension is .json
    #[arg(long)]
    config: Option<PathBuf>,
    /// Degrees, comma separated
    #[arg(long, value_delimiter = ',')]
    d: Option<Vec<usize>>,
    /// Oval/nest size parameter
    #[arg(long)]
    f: Option<f64>,
    /// Nest fraction: the reference nest has floor(alpha*f) rings
    #[arg(long)]
    alpha: Option<f64>,
    /// Separation exponent, in (0, 1/2)
    #[arg(long)]
    epsilon: Option<f64>,
    /// Number of scattered centers / points to separate
    #[arg(long)]
    m: Option<usize>,
    /// Ball parameter for certificates (default depends on the reference kind)
    #[arg(long)]
    g: Option<f64>,
    /// Monte Carlo trials per degree
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; every trial derives its own stream from it
    #[arg(long)]
    seed: Option<u64>,
    /// Scan/grid resolution; 0 picks a degree-aware default
    #[arg(long)]
    resolution: Option<usize>,
    /// Rays per annulus-class measurement (>= 8)
    #[arg(long = "n-directions")]
    n_directions: Option<usize>,
    /// Monte Carlo samples per ball average (>= 1000)
    #[arg(long = "ball-samples")]
    ball_samples: Option<usize>,
    /// Coefficient variance convention: half or unit
    #[arg(long)]
    convention: Option<String>,
    /// Rejected direction for the hyperplane ensemble: scattered or peak
    #[arg(long = "hyperplane-v")]
    hyperplane_v: Option<String>,
    /// Worker threads; 0 = one per core. Output bytes never depend on this
    #[arg(long)]
    workers: Option<usize>,
    /// Trial table format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// Output directory for trials.csv/trials.json, summary.json, report.md
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn into_config(self, kind: ExperimentKind) -> Result<(ExperimentConfig, PathBuf), ConfigError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let cfg = ExperimentConfig::from_file(path)?;
                if cfg.experiment != kind {
                    return Err(ConfigError::Invalid(format!(
                        "config file is for `{}` but the `{}` subcommand was invoked",
                        cfg.experiment, kind
                    )));
                }
                cfg
            }
            None => ExperimentConfig::new(kind),
        };
        if let Some(d) = self.d {
            cfg.d = d;
        }
        if let Some(f) = self.f {
            cfg.f = f;
        }
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        if let Some(e) = self.epsilon {
            cfg.epsilon = e;
        }
        if let Some(m) = self.m {
            cfg.m = m;
        }
        if self.g.is_some() {
            cfg.g = self.g;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.resolution {
            cfg.resolution = r;
        }
        if let Some(n) = self.n_directions {
            cfg.n_directions = n;
        }
        if let Some(b) = self.ball_samples {
            cfg.ball_samples = b;
        }
        if let Some(c) = self.convention {
            cfg.convention = c.parse().map_err(ConfigError::Invalid)?;
        }
        if let Some(h) = self.hyperplane_v {
            cfg.hyperplane_v = h.parse()?;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(fmt) = self.format {
            cfg.format = fmt.parse()?;
        }
        cfg.validate()?;
        let out = self
            .out
            .unwrap_or_else(|| PathBuf::from("runs").join(kind.as_str()));
        Ok((cfg, out))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(3);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let (kind, args) = cli.command.split();
    let (cfg, out) = match args.into_config(kind) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(3);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(3);
        }
    };
    match report.write_outputs(&out, cfg.format) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
        }
        Err(e) => {
            eprintln!("cannot write outputs to {}: {e}", out.display());
            return ExitCode::FAILURE;
        }
    }
    if report.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("invariant violations:");
        for v in &report.violations {
            eprintln!("  - {v}");
        }
        ExitCode::from(2)
    }
}
