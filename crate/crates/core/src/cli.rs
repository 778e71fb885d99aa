//! Command line front end. Every subcommand accepts `--config FILE`, a flat
//! `key=value` file whose keys are long flag names; flags given on the
//! command line override it.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{fit_rate, rate_svg, read_csv, run_experiment, Estimator, ExperimentConfig, Knobs};
use crate::error::{Error, Result};
use crate::geometry::{FiniteMetricSpace, ModelParams};
use crate::io::{format_table, read_cloud, read_pairs, read_table, write_cloud};
use crate::localpoly::{estimate_curvature_radius, FitConfig};
use crate::metric::{MetricEstimate, PluginMetric};
use crate::reach::{reach_estimate, sdr_plugin_full, ReachConfig};
use crate::sdr::sdr_delta;
use crate::synth::{oracle, sample_from_oracle_stream, ShapeSpec};

#[derive(Parser, Debug)]
#[command(name = "reachkit", version, about = "Geometric inference from point clouds")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw a seeded sample from a synthetic shape.
    Sample(SampleArgs),
    /// Plug-in geodesic distances on a point cloud.
    EstimateMetric(MetricArgs),
    /// Spherical distortion radius from a distance table or the plug-in metric.
    Sdr(SdrArgs),
    /// Minimal curvature radius from local polynomial patches.
    Curvature(CurvatureArgs),
    /// Reach estimate with regime attribution.
    Reach(ReachArgs),
    /// Convergence sweep over sample sizes, written as CSV.
    Bench(BenchArgs),
    /// Log-log rate fit of a sweep CSV.
    FitRate(FitRateArgs),
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub shape: String,
    /// Shape parameters as `k=v,k=v`.
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Intrinsic dimension.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub rch_min: Option<f64>,
    #[arg(long)]
    pub f_min: Option<f64>,
    /// Defaults to `f_min`.
    #[arg(long)]
    pub f_max: Option<f64>,
    /// JSON file with the model parameters instead of the flags above.
    #[arg(long)]
    pub model: Option<PathBuf>,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        if let Some(p) = &self.model {
            let text = std::fs::read_to_string(p)?;
            return serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()));
        }
        let need = |name: &str| Error::invalid(format!("missing --{name} (or --model FILE)"));
        let f_min = self.f_min.ok_or_else(|| need("f-min"))?;
        Ok(ModelParams {
            d: self.d.ok_or_else(|| need("d"))?,
            k: self.k,
            rch_min: self.rch_min.ok_or_else(|| need("rch-min"))?,
            l: Vec::new(),
            f_min,
            f_max: self.f_max.unwrap_or(f_min),
        })
    }
}

#[derive(Args, Debug)]
pub struct MetricArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long, default_value_t = f64::INFINITY)]
    pub cap: f64,
    /// Only these index pairs, one `i,j` per line.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SdrArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub delta: f64,
    /// Intrinsic distance table; without it the plug-in metric is used.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Include every pair radius in the output.
    #[arg(long)]
    pub dump: bool,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Args, Debug)]
pub struct CurvatureArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub h: f64,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 9)]
    pub grid: usize,
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
}

#[derive(Args, Debug)]
pub struct ReachArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub adaptive: bool,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long)]
    pub shape: String,
    #[arg(long, default_value = "")]
    pub params: String,
    #[arg(long, default_value = "metric")]
    pub estimator: String,
    /// Comma separated, strictly increasing.
    #[arg(long, value_delimiter = ',')]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub epsilon_scale: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub sources: Option<usize>,
    /// Record wall-clock times (output is then not byte-reproducible).
    #[arg(long)]
    pub timing: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FitRateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

/// Reads a flat `key=value` file into `--key value` tokens. Booleans become
/// bare flags when true and are dropped when false.
pub fn config_tokens(text: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().replace('_', "-");
        let v = v.trim();
        match v {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => {
                out.push(format!("--{key}"));
                out.push(v.to_string());
            }
        }
    }
    Ok(out)
}

/// Splices `--config FILE` contents in front of the user's flags.
pub fn expand_config(args: Vec<String>) -> Result<Vec<String>> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            config = Some(it.next().ok_or_else(|| Error::invalid("--config needs a file"))?);
        } else if let Some(p) = a.strip_prefix("--config=") {
            config = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let tokens = config_tokens(&std::fs::read_to_string(&path)?)?;
    // program name and subcommand stay in front
    let split = rest.len().min(2);
    let mut out: Vec<String> = rest[..split].to_vec();
    out.extend(tokens);
    out.extend_from_slice(&rest[split..]);
    Ok(out)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            // a closed pipe (`| head`) is not an error
            if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Numeric(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample(a) => {
            let shape = ShapeSpec::parse(&a.shape, &a.params)?;
            let o = oracle(&shape)?;
            let (cloud, _) = sample_from_oracle_stream(&o, a.n, a.seed, a.stream)?;
            match a.out {
                Some(p) => write_cloud(p, &cloud),
                None => emit(None, &crate::io::format_cloud(&cloud)),
            }
        }
        Command::EstimateMetric(a) => {
            let cloud = read_cloud(&a.input)?;
            let pm = PluginMetric::new(MetricEstimate::new(cloud, a.epsilon, a.cap)?)?;
            let text = match a.pairs {
                Some(p) => {
                    let pairs = read_pairs(p)?;
                    let n = pm.estimate().base_cloud.len();
                    let mut s = String::new();
                    for (i, j) in pairs {
                        if i >= n || j >= n {
                            return Err(Error::invalid(format!("pair ({i},{j}) out of range")));
                        }
                        let c = &pm.estimate().base_cloud;
                        s.push_str(&format!("{i},{j},{:?}\n", pm.distance(c.point(i), c.point(j))?));
                    }
                    s
                }
                None => {
                    let t = pm.table()?;
                    format_table(t.len(), t.table())
                }
            };
            emit(a.out.as_deref(), &text)
        }
        Command::Sdr(a) => {
            let cloud = read_cloud(&a.input)?;
            let res = match a.table {
                Some(p) => {
                    let (n, t) = read_table(p)?;
                    if n != cloud.len() {
                        return Err(Error::invalid(format!(
                            "table has {n} rows but the cloud has {} points",
                            cloud.len()
                        )));
                    }
                    sdr_delta(&FiniteMetricSpace::new(cloud, t, true)?, a.delta, a.dump)?
                }
                None => {
                    let params = a.model.params()?;
                    let eps = a
                        .epsilon
                        .unwrap_or_else(|| crate::reach::default_epsilon(&params, cloud.len()));
                    sdr_plugin_full(&cloud, &params, eps, a.delta)?
                }
            };
            emit(None, &json(&res)?)
        }
        Command::Curvature(a) => {
            let cloud = read_cloud(&a.input)?;
            let mut cfg = FitConfig::new(a.d, a.k, a.h);
            if let Some(t) = a.t {
                cfg.t = t;
            }
            cfg.restarts = a.restarts;
            let est = estimate_curvature_radius(&cloud, &cfg, a.grid)?;
            emit(None, &json(&est)?)
        }
        Command::Reach(a) => {
            let cloud = read_cloud(&a.input)?;
            let params = a.model.params()?;
            let cfg = ReachConfig {
                delta: a.delta,
                adaptive: a.adaptive,
                epsilon: a.epsilon,
                h: a.h,
                t: a.t,
                grid: a.grid,
            };
            emit(None, &json(&reach_estimate(&cloud, &params, &cfg)?)?)
        }
        Command::Bench(a) => {
            let cfg = ExperimentConfig {
                shape: ShapeSpec::parse(&a.shape, &a.params)?,
                estimator: Estimator::parse(&a.estimator)?,
                n_grid: a.n_grid,
                replicates: a.replicates,
                seed: a.seed,
                knobs: Knobs {
                    k: a.k,
                    epsilon: a.epsilon,
                    epsilon_scale: a.epsilon_scale,
                    delta: a.delta,
                    h: a.h,
                    sources: a.sources,
                    record_runtime: a.timing,
                },
                output: a.out.clone(),
            };
            let rows = run_experiment(&cfg)?;
            if a.out.is_none() {
                emit(None, &crate::bench::format_csv(&rows))?;
            }
            Ok(())
        }
        Command::FitRate(a) => {
            let fit = fit_rate(&read_csv(&a.input)?)?;
            if let Some(p) = a.svg {
                std::fs::write(p, rate_svg(&fit))?;
            }
            emit(None, &json(&fit)?)
        }
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code: 0 on success, 2 for invalid input, 3 for numeric failures.
pub fn run(args: Vec<String>) -> i32 {
    let args = match expand_config(args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_then_flags() {
        let toks = config_tokens("# comment\nn = 5\nseed=3\ntiming=true\ndump=false\n").unwrap();
        assert_eq!(toks, ["--n", "5", "--seed", "3", "--timing"]);
        assert!(config_tokens("oops").is_err());
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.txt");
        std::fs::write(&cfg, "shape=circle\nn=5\nseed=3\n").unwrap();
        let args: Vec<String> = ["reachkit", "sample", "--config", cfg.to_str().unwrap(), "--n", "7"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let expanded = expand_config(args).unwrap();
        let cli = Cli::try_parse_from(expanded).unwrap();
        match cli.command {
            Command::Sample(a) => {
                assert_eq!(a.n, 7);
                assert_eq!(a.seed, 3);
                assert_eq!(a.shape, "circle");
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn exit_codes() {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        assert_eq!(run(s(&["reachkit", "sample", "--shape", "hexagon", "--n", "3"])), 2);
        assert_eq!(run(s(&["reachkit", "nonsense"])), 2);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("x.csv");
        assert_eq!(
            run(s(&["reachkit", "sample", "--shape", "circle", "--n", "3", "--out", out.to_str().unwrap()])),
            0
        );
        // a single point cannot support a patch
        std::fs::write(&out, "# dim=2\n0.0,0.0\n").unwrap();
        assert_eq!(
            run(s(&["reachkit", "curvature", "--input", out.to_str().unwrap(), "--d", "1", "--h", "0.1"])),
            3
        );
    }
}
