//! Command-line front end: argument parsing, resolved run configurations
//! and the figure-data commands.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::dfs::{fidelity_threshold, ImperfectionModel, TargetParam};
use crate::dynamics::{euler_maruyama_ensemble, langevin_ensemble, CoherenceEstimate, NoiseParams};
use crate::error::{Error, Result};
use crate::fisher::ghz_optimal_precision;
use crate::mle::{mle_curve, total_time_grid};
use crate::optimize::{optimal_precision, product_precision_opt, OptimizationConfig};
use crate::symstate::{ghz_full, SchemeSpec, MAX_FULL_ATOMS};

#[derive(Debug, Parser)]
#[command(name = "qfreq", version, about = "Frequency estimation with atoms under collective dephasing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal precision versus atom number for GHZ, product and optimized probes.
    PrecisionCurve(RunArgs),
    /// Minimum preparation parameter ξ for which the DFS scheme wins.
    FidelityBound(RunArgs),
    /// ML uncertainty versus total time, DFS scheme against product baseline.
    MleCurve(RunArgs),
    /// Monte-Carlo check of the averaged GHZ coherence.
    Trajectories(RunArgs),
}

impl Command {
    fn parts(&self) -> (CommandKind, &RunArgs) {
        match self {
            Command::PrecisionCurve(a) => (CommandKind::PrecisionCurve, a),
            Command::FidelityBound(a) => (CommandKind::FidelityBound, a),
            Command::MleCurve(a) => (CommandKind::MleCurve, a),
            Command::Trajectories(a) => (CommandKind::Trajectories, a),
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Atom number `N`, or an inclusive range `A-B`.
    #[arg(long)]
    pub n_atoms: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Interrogation time of one run.
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub total_time: Option<f64>,
    #[arg(long)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub eta_h: Option<f64>,
    #[arg(long)]
    pub eta_m: Option<f64>,
    /// Largest number of repetitions on the total-time grid.
    #[arg(long)]
    pub nu: Option<u64>,
    /// Number of points on the total-time grid.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    /// Number of Monte-Carlo paths.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Integrate paths with Euler–Maruyama using this many steps instead of
    /// sampling them exactly.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Replay a configuration taken from a previous output file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Omega,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    PrecisionCurve,
    FidelityBound,
    MleCurve,
    Trajectories,
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n_min: usize,
    pub n_max: usize,
    pub gamma: f64,
    pub t: f64,
    pub total_time: f64,
    pub xi: f64,
    pub eta_h: f64,
    pub eta_m: f64,
    pub nu: u64,
    pub points: usize,
    pub target: TargetParam,
    pub paths: usize,
    pub steps: Option<usize>,
    pub seed: u64,
    pub optimizer: OptimizationConfig,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Figure-caption defaults for each command.
    pub fn defaults(command: CommandKind) -> Self {
        let base = Self {
            command,
            n_min: 1,
            n_max: 10,
            gamma: 1.0,
            t: 3.0,
            total_time: 1.0,
            xi: 0.6,
            eta_h: 0.98,
            eta_m: 0.99,
            nu: 10_000,
            points: 41,
            target: TargetParam::Omega,
            paths: 100_000,
            steps: None,
            seed: 0,
            optimizer: OptimizationConfig::default(),
            format: OutputFormat::Csv,
            out: None,
        };
        match command {
            CommandKind::PrecisionCurve => base,
            CommandKind::FidelityBound => Self {
                n_min: 2,
                n_max: 20,
                ..base
            },
            CommandKind::MleCurve => Self {
                n_min: 20,
                n_max: 20,
                ..base
            },
            CommandKind::Trajectories => Self {
                n_min: 3,
                n_max: 3,
                t: 0.3,
                format: OutputFormat::Json,
                ..base
            },
        }
    }

    /// Overrides every field for which a flag was given.
    pub fn apply(&mut self, args: &RunArgs) -> Result<()> {
        if let Some(n) = &args.n_atoms {
            (self.n_min, self.n_max) = parse_range(n)?;
        }
        let set = |dst: &mut f64, v: Option<f64>| {
            if let Some(v) = v {
                *dst = v;
            }
        };
        set(&mut self.gamma, args.gamma);
        set(&mut self.t, args.t);
        set(&mut self.total_time, args.total_time);
        set(&mut self.xi, args.xi);
        set(&mut self.eta_h, args.eta_h);
        set(&mut self.eta_m, args.eta_m);
        if let Some(v) = args.nu {
            self.nu = v;
        }
        if let Some(v) = args.points {
            self.points = v;
        }
        if let Some(v) = args.target {
            self.target = match v {
                TargetArg::Omega => TargetParam::Omega,
                TargetArg::Delta => TargetParam::Delta,
            };
        }
        if let Some(v) = args.paths {
            self.paths = v;
        }
        if args.steps.is_some() {
            self.steps = args.steps;
        }
        if let Some(v) = args.restarts {
            self.optimizer.n_restarts = v;
        }
        if let Some(v) = args.seed {
            self.seed = v;
            self.optimizer.seed = v;
        }
        if args.out.is_some() {
            self.out = args.out.clone();
        }
        if let Some(v) = args.format {
            self.format = v;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.n_min == 0 || self.n_min > self.n_max {
            return bad(format!("atom range {}-{} is empty", self.n_min, self.n_max));
        }
        let positive = [("gamma", self.gamma), ("t", self.t), ("total-time", self.total_time)];
        for (name, v) in positive {
            let ok = if name == "gamma" && self.command == CommandKind::Trajectories {
                v >= 0.0 && v.is_finite()
            } else {
                v > 0.0 && v.is_finite()
            };
            if !ok {
                return bad(format!("--{name} must be positive, got {v}"));
            }
        }
        ImperfectionModel::new(self.xi, self.eta_h, self.eta_m)?;
        self.optimizer.validate()?;
        match self.command {
            CommandKind::PrecisionCurve => {}
            CommandKind::FidelityBound => {
                if self.n_max < 2 {
                    return bad("fidelity-bound needs an even N ≥ 2 in the range".into());
                }
            }
            CommandKind::MleCurve => {
                if self.n_min != self.n_max || self.n_min % 2 != 0 {
                    return bad(format!("mle-curve needs a single even N, got {}-{}", self.n_min, self.n_max));
                }
                if self.nu == 0 || self.points < 2 {
                    return bad("mle-curve needs --nu ≥ 1 and --points ≥ 2".into());
                }
            }
            CommandKind::Trajectories => {
                if self.n_min != self.n_max || self.n_min > MAX_FULL_ATOMS {
                    return bad(format!(
                        "trajectories needs a single N ≤ {MAX_FULL_ATOMS}, got {}-{}",
                        self.n_min, self.n_max
                    ));
                }
                if self.paths == 0 {
                    return bad("--paths must be at least 1".into());
                }
                if self.steps == Some(0) {
                    return bad("--steps must be at least 1".into());
                }
            }
        }
        Ok(())
    }

    /// The block embedded in output files. The output path is left out so
    /// that the content does not depend on where it was written.
    pub fn embedded(&self) -> Self {
        Self {
            out: None,
            ..self.clone()
        }
    }

    /// Reads a configuration from a JSON file, a JSON output file, or the
    /// header of a CSV output file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::parse_embedded(&text)
    }

    pub fn parse_embedded(text: &str) -> Result<Self> {
        let parse = |s: &str| {
            serde_json::from_str::<RunConfig>(s).map_err(|e| Error::InvalidParameter(format!("bad config: {e}")))
        };
        if let Some(line) = text.lines().find_map(|l| l.strip_prefix(CONFIG_PREFIX)) {
            return parse(line);
        }
        if let Ok(v) = serde_json::from_str::<serde_json::Value>(text) {
            if let Some(c) = v.get("config") {
                return parse(&c.to_string());
            }
        }
        parse(text)
    }
}

const CONFIG_PREFIX: &str = "# config: ";

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let num = |x: &str| {
        x.trim()
            .parse::<usize>()
            .map_err(|_| Error::InvalidParameter(format!("bad atom number {x:?}")))
    };
    match s.split_once('-') {
        Some((a, b)) => Ok((num(a)?, num(b)?)),
        None => {
            let n = num(s)?;
            Ok((n, n))
        }
    }
}

/// Resolves the configuration for a parsed command line.
pub fn resolve(command: &Command) -> Result<RunConfig> {
    let (kind, args) = command.parts();
    let mut config = match &args.config {
        Some(path) => {
            let c = RunConfig::load(path)?;
            if c.command != kind {
                return Err(Error::InvalidParameter(format!(
                    "config is for {:?}, not {:?}",
                    c.command, kind
                )));
            }
            c
        }
        None => RunConfig::defaults(kind),
    };
    config.apply(args)?;
    config.validate()?;
    Ok(config)
}

/// Rendered output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub content: String,
    /// False if some optimization hit its iteration limit.
    pub converged: bool,
}

pub fn execute(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    match config.command {
        CommandKind::PrecisionCurve => precision_curve(config),
        CommandKind::FidelityBound => fidelity_bound(config),
        CommandKind::MleCurve => mle_curve_report(config),
        CommandKind::Trajectories => trajectories(config),
    }
}

/// Formats a number in scientific notation with 17 significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

enum Cell {
    Int(u64),
    Num(f64),
}

fn table(config: &RunConfig, columns: &[&str], rows: &[Vec<Cell>]) -> Result<String> {
    let embedded = config.embedded();
    match config.format {
        OutputFormat::Csv => {
            let json = serde_json::to_string(&embedded).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let mut s = String::new();
            let _ = writeln!(s, "# qfreq {}", command_name(config.command));
            let _ = writeln!(s, "{CONFIG_PREFIX}{json}");
            let _ = writeln!(s, "{}", columns.join(","));
            for row in rows {
                let cells: Vec<String> = row
                    .iter()
                    .map(|c| match c {
                        Cell::Int(i) => i.to_string(),
                        Cell::Num(x) => fmt_num(*x),
                    })
                    .collect();
                let _ = writeln!(s, "{}", cells.join(","));
            }
            Ok(s)
        }
        OutputFormat::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let map: serde_json::Map<String, serde_json::Value> = columns
                        .iter()
                        .zip(row)
                        .map(|(k, c)| {
                            let v = match c {
                                Cell::Int(i) => serde_json::Value::from(*i),
                                Cell::Num(x) => serde_json::Value::from(*x),
                            };
                            (k.to_string(), v)
                        })
                        .collect();
                    serde_json::Value::Object(map)
                })
                .collect();
            let doc = serde_json::json!({ "config": embedded, "rows": rows });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn command_name(kind: CommandKind) -> &'static str {
    match kind {
        CommandKind::PrecisionCurve => "precision-curve",
        CommandKind::FidelityBound => "fidelity-bound",
        CommandKind::MleCurve => "mle-curve",
        CommandKind::Trajectories => "trajectories",
    }
}

fn precision_curve(config: &RunConfig) -> Result<Report> {
    let (g, tt) = (config.gamma, config.total_time);
    let mut rows = Vec::new();
    let mut converged = true;
    for n in config.n_min..=config.n_max {
        let (_, ghz) = ghz_optimal_precision(n, g, tt)?;
        let (_, product) = product_precision_opt(n, g, tt)?;
        let opt = optimal_precision(n, g, tt, &config.optimizer)?;
        converged &= opt.converged;
        let uncorrelated = (2.0 * std::f64::consts::E / n as f64).sqrt() * (g / tt).sqrt();
        rows.push(vec![
            Cell::Int(n as u64),
            Cell::Num(ghz),
            Cell::Num(product),
            Cell::Num(opt.bound),
            Cell::Num(uncorrelated),
        ]);
    }
    let columns = ["N", "delta_ghz", "delta_product", "delta_optimal", "delta_uncorr_product"];
    Ok(Report {
        content: table(config, &columns, &rows)?,
        converged,
    })
}

fn fidelity_bound(config: &RunConfig) -> Result<Report> {
    let gamma_t = config.gamma * config.t;
    let mut rows = Vec::new();
    for n in (config.n_min.max(2)..=config.n_max).filter(|n| n % 2 == 0) {
        let xi = fidelity_threshold(n, config.eta_h, config.eta_m, gamma_t)?;
        rows.push(vec![Cell::Int(n as u64), Cell::Num(xi)]);
    }
    Ok(Report {
        content: table(config, &["N", "xi_min"], &rows)?,
        converged: true,
    })
}

fn mle_curve_report(config: &RunConfig) -> Result<Report> {
    let imp = ImperfectionModel::new(config.xi, config.eta_h, config.eta_m)?;
    let totals = total_time_grid(config.t, config.nu, config.points)?;
    let points = mle_curve(config.n_min, &imp, config.gamma, config.t, config.target, &totals)?;
    let rows: Vec<Vec<Cell>> = points
        .iter()
        .map(|p| {
            vec![
                Cell::Num(p.total_time),
                Cell::Num(p.delta_dfs),
                Cell::Num(p.bound_dfs),
                Cell::Num(p.delta_product),
                Cell::Num(p.bound_product),
                Cell::Int(p.nu_dfs),
                Cell::Int(p.nu_product),
                Cell::Int(p.nu_floored as u64),
            ]
        })
        .collect();
    let columns = match config.target {
        TargetParam::Omega => [
            "T",
            "delta_omega_dfs",
            "bound_dfs",
            "delta_omega_product",
            "bound_product",
            "nu_dfs",
            "nu_product",
            "nu_floored",
        ],
        TargetParam::Delta => [
            "T",
            "delta_delta_dfs",
            "bound_dfs",
            "delta_delta_product",
            "bound_product",
            "nu_dfs",
            "nu_product",
            "nu_floored",
        ],
    };
    Ok(Report {
        content: table(config, &columns, &rows)?,
        converged: true,
    })
}

/// JSON summary of the trajectory check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySummary {
    pub config: RunConfig,
    pub method: String,
    pub seed: u64,
    pub n_paths: usize,
    pub analytic_magnitude: f64,
    pub mc_mean_re: f64,
    pub mc_mean_im: f64,
    pub mc_magnitude: f64,
    pub std_error: f64,
    /// `|MC - analytic| / SE`; zero when the paths are deterministic.
    pub deviation_in_se: f64,
    pub deterministic: bool,
    pub pass: bool,
}

/// Paths are generated in blocks so that memory stays bounded.
const PATH_BLOCK: usize = 4096;

fn trajectories(config: &RunConfig) -> Result<Report> {
    let n = config.n_min;
    let noise = NoiseParams::new(config.gamma, config.t)?;
    let state = ghz_full(n)?;
    let scheme = SchemeSpec::conventional(n, 0.0, 0.0)?;
    let last = (1usize << n) - 1;
    let mut samples: Vec<C64> = Vec::with_capacity(config.paths);
    let mut start = 0;
    while start < config.paths {
        let len = PATH_BLOCK.min(config.paths - start);
        let seed = config.seed.wrapping_add(start as u64);
        let block = match config.steps {
            Some(steps) => euler_maruyama_ensemble(&state, &scheme, noise, steps, len, seed)?,
            None => langevin_ensemble(&state, &scheme, noise, len, seed)?,
        };
        samples.extend(block.iter().map(|s| s.amplitudes()[0] * s.amplitudes()[last].conj()));
        start += len;
    }
    let est = CoherenceEstimate::from_samples(&samples)?;
    let analytic = 0.5 * (-config.gamma * (n * n) as f64 * config.t).exp();
    let diff = (est.magnitude() - analytic).abs();
    let deterministic = est.std_error == 0.0;
    let (deviation, pass) = if deterministic {
        (0.0, diff < 1e-12)
    } else {
        (diff / est.std_error, diff < 3.0 * est.std_error)
    };
    let summary = TrajectorySummary {
        config: config.embedded(),
        method: if config.steps.is_some() { "euler_maruyama" } else { "exact" }.into(),
        seed: config.seed,
        n_paths: config.paths,
        analytic_magnitude: analytic,
        mc_mean_re: est.mean_re,
        mc_mean_im: est.mean_im,
        mc_magnitude: est.magnitude(),
        std_error: est.std_error,
        deviation_in_se: deviation,
        deterministic,
        pass,
    };
    let mut content =
        serde_json::to_string_pretty(&summary).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    content.push('\n');
    Ok(Report {
        content,
        converged: true,
    })
}

/// Exit status for a failed run: 2 for invalid input, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidAtomNumber(_)
        | Error::InvalidParameter(_)
        | Error::DimensionMismatch { .. }
        | Error::OutOfRange { .. }
        | Error::NotNormalized(_)
        | Error::NotHermitian(_)
        | Error::NegativeEigenvalue(_)
        | Error::NegativeProbability(_) => 2,
        Error::EmptyEnsemble | Error::DegenerateBias(_) => 1,
    }
}

/// Parses, runs and writes output; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let config = match resolve(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let report = match execute(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &report.content) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 1;
            }
        }
        None => print!("{}", report.content),
    }
    if report.converged {
        0
    } else {
        eprintln!("error: optimizer did not converge for at least one row");
        3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(kind: CommandKind, edit: impl FnOnce(&mut RunConfig)) -> Report {
        let mut c = RunConfig::defaults(kind);
        edit(&mut c);
        execute(&c).unwrap()
    }

    #[test]
    fn config_round_trips() {
        for kind in [
            CommandKind::PrecisionCurve,
            CommandKind::FidelityBound,
            CommandKind::MleCurve,
            CommandKind::Trajectories,
        ] {
            let mut c = RunConfig::defaults(kind);
            c.out = Some(PathBuf::from("x.csv"));
            c.steps = Some(7);
            let s = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<RunConfig>(&s).unwrap(), c);
        }
    }

    #[test]
    fn ranges_parse() {
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert_eq!(parse_range("2-20").unwrap(), (2, 20));
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn precision_curve_rows() {
        let r = run(CommandKind::PrecisionCurve, |c| {
            c.n_max = 3;
            c.optimizer.n_restarts = 4;
        });
        let lines: Vec<&str> = r.content.lines().collect();
        assert_eq!(lines[2], "N,delta_ghz,delta_product,delta_optimal,delta_uncorr_product");
        let first: Vec<f64> = lines[3].split(',').skip(1).map(|x| x.parse().unwrap()).collect();
        let root = (2.0 * std::f64::consts::E).sqrt();
        assert!((first[0] - root).abs() < 1e-9);
        assert!((first[1] - first[0]).abs() < 1e-9 && (first[2] - first[0]).abs() < 1e-9);
        for line in &lines[3..] {
            let ghz: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!((ghz - root).abs() < 1e-9);
        }
    }

    #[test]
    fn fidelity_rows_are_even() {
        let r = run(CommandKind::FidelityBound, |_| {});
        let rows: Vec<&str> = r.content.lines().skip(3).collect();
        assert_eq!(rows.len(), 10);
        let row14 = rows.iter().find(|l| l.starts_with("14,")).unwrap();
        let xi: f64 = row14[3..].parse().unwrap();
        assert!((xi - 0.0961).abs() < 5e-4);
    }

    #[test]
    fn numbers_use_seventeen_digits() {
        assert_eq!(fmt_num(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_num(-2.5), "-2.5000000000000000e0");
    }

    #[test]
    fn embedded_config_replays() {
        let r = run(CommandKind::FidelityBound, |c| {
            c.eta_h = 0.97;
            c.out = Some(PathBuf::from("/tmp/somewhere.csv"));
        });
        let back = RunConfig::parse_embedded(&r.content).unwrap();
        assert_eq!(back.out, None);
        assert_eq!(execute(&back).unwrap().content, r.content);
        let j = run(CommandKind::FidelityBound, |c| c.format = OutputFormat::Json);
        let back = RunConfig::parse_embedded(&j.content).unwrap();
        assert_eq!(execute(&back).unwrap().content, j.content);
    }

    #[test]
    fn validation_failures() {
        let mut c = RunConfig::defaults(CommandKind::MleCurve);
        c.n_min = 3;
        c.n_max = 3;
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults(CommandKind::Trajectories);
        c.paths = 0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::defaults(CommandKind::PrecisionCurve);
        c.gamma = -1.0;
        assert!(c.validate().is_err());
        assert_eq!(exit_code(&c.validate().unwrap_err()), 2);
    }

    #[test]
    fn noiseless_trajectories_are_deterministic() {
        let r = run(CommandKind::Trajectories, |c| {
            c.gamma = 0.0;
            c.paths = 10;
            c.seed = 42;
        });
        let s: TrajectorySummary = serde_json::from_str(&r.content).unwrap();
        assert!(s.deterministic && s.pass);
        assert_eq!(s.seed, 42);
    }
}
