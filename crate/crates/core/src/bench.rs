//! Convergence experiments: sweep sample sizes, score estimators against the
//! shape oracles, write versioned CSV and fit log-log rates.
//!
//! Replicate `r` at grid position `g` draws its sample from ChaCha8 stream
//! `(g << 32) | r` under the master seed; fresh test points use the same
//! stream number with the top bit set. The `seed` column holds that stream
//! number. Rows are sorted by `(n, seed)` before writing, so the output does
//! not depend on scheduling.
//!
//! Fitted slopes are empirical. The minimax exponents come with unknown
//! constants and the graph estimators carry their own slack, so a sweep is
//! only expected to show decreasing errors with a clearly negative slope, not
//! the exact exponent.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::Rng as _;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{d_max_bound, PointCloud};
use crate::localpoly::{bandwidth, estimate_curvature_radius, FitConfig, DEFAULT_BANDWIDTH_CONSTANT};
use crate::metric::{LossReport, MetricEstimate, PluginMetric};
use crate::reach::{default_epsilon, reach_estimate, sdr_plugin, ReachConfig};
use crate::rng::seeded;
use crate::synth::{oracle, OracleSet, ShapeSpec};

pub const CSV_VERSION_LINE: &str = "# reachkit-csv v1";
pub const CSV_COLUMNS: [&str; 9] = [
    "n",
    "seed",
    "estimator",
    "value",
    "truth",
    "abs_err",
    "rel_err",
    "runtime_ms",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    /// Sup-loss of the plug-in metric against oracle geodesics.
    Metric,
    Sdr,
    Curvature,
    Reach,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::Metric => "metric",
            Estimator::Sdr => "sdr",
            Estimator::Curvature => "curvature",
            Estimator::Reach => "reach",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "metric" => Ok(Estimator::Metric),
            "sdr" => Ok(Estimator::Sdr),
            "curvature" => Ok(Estimator::Curvature),
            "reach" => Ok(Estimator::Reach),
            other => Err(Error::invalid(format!("unknown estimator '{other}'"))),
        }
    }
}

/// Estimator settings shared by the sweep.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Knobs {
    /// Smoothness order used for model parameters and patch degree.
    pub k: usize,
    /// Fixed offset radius.
    pub epsilon: Option<f64>,
    /// `epsilon_n = scale * (log n / n)^{1/d}` when no fixed value is set.
    pub epsilon_scale: Option<f64>,
    pub delta: Option<f64>,
    pub h: Option<f64>,
    /// Metric loss over pairs with one end among the first `sources` sample
    /// points (and fresh pairs among `sources` fresh points). All pairs
    /// otherwise.
    pub sources: Option<usize>,
    /// Write wall-clock times; off keeps the output byte-reproducible.
    pub record_runtime: bool,
}

impl Default for Knobs {
    fn default() -> Self {
        Knobs {
            k: 3,
            epsilon: None,
            epsilon_scale: None,
            delta: None,
            h: None,
            sources: None,
            record_runtime: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ExperimentConfig {
    pub shape: ShapeSpec,
    pub estimator: Estimator,
    pub n_grid: Vec<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub knobs: Knobs,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.shape.validate()?;
        if self.replicates == 0 {
            return Err(Error::invalid("replicates must be >= 1"));
        }
        if self.n_grid.is_empty() || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::invalid("n grid must be non-empty and strictly increasing"));
        }
        if self.n_grid[0] < 2 {
            return Err(Error::invalid("sample sizes must be >= 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Row {
    pub n: usize,
    pub seed: u64,
    pub estimator: String,
    pub value: f64,
    pub truth: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub runtime_ms: f64,
    pub status: String,
}

impl Row {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

/// Stream number of replicate `rep` at grid position `g`.
pub fn replicate_stream(g: usize, rep: usize) -> u64 {
    ((g as u64) << 32) | rep as u64
}

const FRESH_BIT: u64 = 1 << 63;

/// Offset radius for a sample of size `n` under the knobs.
pub fn epsilon_for(knobs: &Knobs, o: &OracleSet, n: usize) -> Result<f64> {
    if let Some(e) = knobs.epsilon {
        return Ok(e);
    }
    let d = o.spec.intrinsic_dim() as f64;
    let nf = n as f64;
    if let Some(s) = knobs.epsilon_scale {
        return Ok(s * (nf.ln() / nf).powf(1.0 / d));
    }
    Ok(default_epsilon(&o.model_params(knobs.k)?, n))
}

/// Sup-loss of the plug-in metric on `cloud` against the oracle, over sample
/// pairs and pairs of fresh points drawn from `fresh_stream`.
pub fn plugin_metric_loss(
    o: &OracleSet,
    cloud: &PointCloud,
    params: &[Vec<f64>],
    epsilon: f64,
    cap: f64,
    sources: Option<usize>,
    seed: u64,
    fresh_stream: u64,
) -> Result<LossReport> {
    let n = cloud.len();
    let pm = PluginMetric::new(MetricEstimate::new(cloud.clone(), epsilon, cap)?)?;
    let s = sources.unwrap_or(n).min(n);
    let per_source: Vec<Result<(f64, Option<(usize, usize)>)>> = (0..s)
        .into_par_iter()
        .map(|i| {
            let field = pm.base_field(i, f64::INFINITY);
            let mut worst = (0.0f64, None);
            for j in 0..n {
                if j == i || (j < s && j < i) {
                    continue;
                }
                let t = o.geodesic(&params[i], &params[j])?;
                if !(t > 0.0) {
                    continue;
                }
                let l = (1.0 - field.to_base()[j].min(cap) / t).abs();
                if worst.1.is_none() || l > worst.0 {
                    worst = (l, Some((i, j)));
                }
            }
            Ok(worst)
        })
        .collect();
    let mut sample_worst = (0.0f64, None);
    for r in per_source {
        let (l, p) = r?;
        if p.is_some() && (sample_worst.1.is_none() || l > sample_worst.0) {
            sample_worst = (l, p);
        }
    }

    // at least 10 n fresh pairs in full mode, `sources` fresh points otherwise
    let m = match sources {
        Some(s) => s.max(2),
        None => ((20.0 * n as f64).sqrt().ceil() as usize + 1).max(2),
    };
    let (fresh, fparams) = crate::synth::sample_from_oracle_stream(o, m, seed, fresh_stream)?;
    let fresh_worst: Vec<Result<f64>> = (0..m)
        .into_par_iter()
        .map(|a| {
            let field = pm.field(fresh.point(a), f64::INFINITY)?;
            let mut w = 0.0f64;
            for b in a + 1..m {
                let t = o.geodesic(&fparams[a], &fparams[b])?;
                if !(t > 0.0) {
                    continue;
                }
                w = w.max((1.0 - pm.eval(&field, fresh.point(b)) / t).abs());
            }
            Ok(w)
        })
        .collect();
    let mut l_fresh = 0.0f64;
    for w in fresh_worst {
        l_fresh = l_fresh.max(w?);
    }
    Ok(LossReport {
        l_n: sample_worst.0,
        l_inf: sample_worst.0.max(l_fresh),
        worst_pair: sample_worst.1,
    })
}

fn truth_for(est: Estimator, o: &OracleSet, delta: f64) -> f64 {
    match est {
        Estimator::Metric => 0.0,
        Estimator::Sdr => o
            .sdr(delta)
            .or_else(|| (o.reach == o.wfs).then_some(o.reach))
            .unwrap_or(f64::NAN),
        Estimator::Curvature => o.r_ell,
        Estimator::Reach => o.reach,
    }
}

fn run_one(cfg: &ExperimentConfig, o: &OracleSet, g: usize, rep: usize) -> Row {
    let n = cfg.n_grid[g];
    let stream_id = replicate_stream(g, rep);
    let start = Instant::now();
    let result = (|| -> Result<(f64, f64)> {
        let params = o.model_params(cfg.knobs.k)?;
        let delta = cfg.knobs.delta.unwrap_or(params.rch_min / 2.0);
        let (cloud, sp) = crate::synth::sample_from_oracle_stream(o, n, cfg.seed, stream_id)?;
        let truth = truth_for(cfg.estimator, o, delta);
        let value = match cfg.estimator {
            Estimator::Metric => {
                let eps = epsilon_for(&cfg.knobs, o, n)?;
                plugin_metric_loss(
                    o,
                    &cloud,
                    &sp,
                    eps,
                    d_max_bound(&params),
                    cfg.knobs.sources,
                    cfg.seed,
                    stream_id | FRESH_BIT,
                )?
                .l_inf
            }
            Estimator::Sdr => {
                let eps = epsilon_for(&cfg.knobs, o, n)?;
                sdr_plugin(&cloud, &params, eps, delta)?
            }
            Estimator::Curvature => {
                let h = match cfg.knobs.h {
                    Some(h) => h,
                    None => bandwidth(&params, n as f64, DEFAULT_BANDWIDTH_CONSTANT)?,
                };
                let fit = FitConfig::new(params.d, cfg.knobs.k.max(3), h);
                estimate_curvature_radius(&cloud, &fit, 9)?.r_ell_hat
            }
            Estimator::Reach => {
                let rc = ReachConfig {
                    delta: cfg.knobs.delta,
                    epsilon: cfg.knobs.epsilon.map(Ok).or_else(|| {
                        cfg.knobs.epsilon_scale.map(|_| epsilon_for(&cfg.knobs, o, n))
                    }).transpose()?,
                    h: cfg.knobs.h,
                    ..ReachConfig::default()
                };
                reach_estimate(&cloud, &params, &rc)?.rch_hat
            }
        };
        Ok((value, truth))
    })();
    let runtime_ms = if cfg.knobs.record_runtime {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    let (value, truth, status) = match result {
        Ok((v, t)) => (v, t, "ok".to_string()),
        Err(e) => (f64::NAN, f64::NAN, status_of(&e).to_string()),
    };
    let abs_err = (value - truth).abs();
    let rel_err = if truth != 0.0 { abs_err / truth.abs() } else { abs_err };
    Row {
        n,
        seed: stream_id,
        estimator: cfg.estimator.name().to_string(),
        value,
        truth,
        abs_err,
        rel_err,
        runtime_ms,
        status,
    }
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::InsufficientData(_) => "insufficient-data",
        Error::IllConditioned(_) => "ill-conditioned",
        Error::Domain(_) => "domain",
        Error::Numeric(_) => "numeric",
        Error::Resolution(_) => "resolution",
        Error::Parse(_) => "parse",
        Error::Io(_) => "io",
    }
}

/// Runs the sweep. Estimator failures become rows with a non-`ok` status.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    cfg.validate()?;
    let o = oracle(&cfg.shape)?;
    let jobs: Vec<(usize, usize)> = (0..cfg.n_grid.len())
        .flat_map(|g| (0..cfg.replicates).map(move |r| (g, r)))
        .collect();
    let mut rows: Vec<Row> = jobs.into_par_iter().map(|(g, r)| run_one(cfg, &o, g, r)).collect();
    rows.sort_by(|a, b| (a.n, a.seed).cmp(&(b.n, b.seed)));
    if let Some(path) = &cfg.output {
        write_csv(path, &rows)?;
    }
    Ok(rows)
}

fn fmt_f(x: f64) -> String {
    format!("{x:?}")
}

pub fn format_csv(rows: &[Row]) -> String {
    let mut s = String::new();
    s.push_str(CSV_VERSION_LINE);
    s.push('\n');
    s.push_str(&CSV_COLUMNS.join(","));
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.seed,
            r.estimator,
            fmt_f(r.value),
            fmt_f(r.truth),
            fmt_f(r.abs_err),
            fmt_f(r.rel_err),
            fmt_f(r.runtime_ms),
            r.status
        );
    }
    s
}

pub fn write_csv(path: impl AsRef<Path>, rows: &[Row]) -> Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(format_csv(rows).as_bytes())?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<Row>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(l) if l.trim() == CSV_VERSION_LINE => {}
        other => {
            return Err(Error::Parse(format!(
                "expected '{CSV_VERSION_LINE}' on the first line, got {other:?}"
            )))
        }
    }
    let body: String = lines.collect::<Vec<_>>().join("\n");
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(body.as_bytes());
    let header = rdr.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_COLUMNS {
        return Err(Error::Parse(format!("unexpected columns {header:?}")));
    }
    let mut rows = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let num = |k: usize| -> Result<f64> {
            rec[k]
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("row {}: bad number '{}'", line + 1, &rec[k])))
        };
        let int = |k: usize| -> Result<u64> {
            rec[k]
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("row {}: bad integer '{}'", line + 1, &rec[k])))
        };
        rows.push(Row {
            n: int(0)? as usize,
            seed: int(1)?,
            estimator: rec[2].to_string(),
            value: num(3)?,
            truth: num(4)?,
            abs_err: num(5)?,
            rel_err: num(6)?,
            runtime_ms: num(7)?,
            status: rec[8].to_string(),
        });
    }
    Ok(rows)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<Row>> {
    parse_csv(&std::fs::read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GridStat {
    pub n: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub per_n: Vec<GridStat>,
    /// 95% percentile bootstrap interval for the slope.
    pub slope_ci: Option<(f64, f64)>,
    /// All medians were zero, so no slope could be fitted.
    pub flat: bool,
}

impl RateFit {
    pub fn medians_decreasing(&self) -> bool {
        self.per_n.windows(2).all(|w| w[1].median < w[0].median)
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

fn ols(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn grouped(rows: &[Row]) -> Vec<(usize, Vec<f64>)> {
    let mut groups: Vec<(usize, Vec<f64>)> = Vec::new();
    let mut ok: Vec<&Row> = rows.iter().filter(|r| r.ok() && r.abs_err.is_finite()).collect();
    ok.sort_by(|a, b| (a.n, a.seed).cmp(&(b.n, b.seed)));
    for r in ok {
        match groups.last_mut() {
            Some((n, v)) if *n == r.n => v.push(r.abs_err),
            _ => groups.push((r.n, vec![r.abs_err])),
        }
    }
    groups
}

fn medians_fit(groups: &[(usize, Vec<f64>)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = groups
        .iter()
        .filter_map(|(n, v)| {
            let mut s = v.clone();
            s.sort_by(f64::total_cmp);
            let m = quantile(&s, 0.5);
            (m > 0.0).then(|| ((*n as f64).ln(), m.ln()))
        })
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
    Some(ols(&x, &y))
}

/// Least squares of log median absolute error on log n, with a bootstrap
/// over replicates (200 resamples) when every n has at least 2 rows.
pub fn fit_rate(rows: &[Row]) -> Result<RateFit> {
    let groups = grouped(rows);
    if groups.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 sample sizes with successful rows, got {}",
            groups.len()
        )));
    }
    let per_n: Vec<GridStat> = groups
        .iter()
        .map(|(n, v)| {
            let mut s = v.clone();
            s.sort_by(f64::total_cmp);
            GridStat {
                n: *n,
                median: quantile(&s, 0.5),
                q1: quantile(&s, 0.25),
                q3: quantile(&s, 0.75),
                count: s.len(),
            }
        })
        .collect();
    let Some((slope, intercept)) = medians_fit(&groups) else {
        if per_n.iter().all(|g| g.median == 0.0) {
            return Ok(RateFit {
                slope: 0.0,
                intercept: f64::NEG_INFINITY,
                per_n,
                slope_ci: None,
                flat: true,
            });
        }
        return Err(Error::InsufficientData(
            "fewer than 3 sample sizes with positive median error".into(),
        ));
    };
    let slope_ci = if groups.iter().all(|(_, v)| v.len() >= 2) {
        let mut rng = seeded(0);
        let mut slopes = Vec::with_capacity(200);
        for _ in 0..200 {
            let res: Vec<(usize, Vec<f64>)> = groups
                .iter()
                .map(|(n, v)| (*n, (0..v.len()).map(|_| v[rng.gen_range(0..v.len())]).collect()))
                .collect();
            if let Some((s, _)) = medians_fit(&res) {
                slopes.push(s);
            }
        }
        slopes.sort_by(f64::total_cmp);
        (!slopes.is_empty()).then(|| (quantile(&slopes, 0.025), quantile(&slopes, 0.975)))
    } else {
        None
    };
    Ok(RateFit {
        slope,
        intercept,
        per_n,
        slope_ci,
        flat: false,
    })
}

/// Log-log plot of the per-n medians with the fitted line, as SVG text.
pub fn rate_svg(fit: &RateFit) -> String {
    let (w, h, pad) = (480.0, 320.0, 40.0);
    let pts: Vec<(f64, f64)> = fit
        .per_n
        .iter()
        .filter(|g| g.median > 0.0)
        .map(|g| ((g.n as f64).ln(), g.median.ln()))
        .collect();
    let mut s = format!("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n");
    if pts.len() >= 2 {
        let (x0, x1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
        let (y0, y1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.1), a.1.max(p.1)));
        let sx = |x: f64| pad + (x - x0) / (x1 - x0).max(1e-12) * (w - 2.0 * pad);
        let sy = |y: f64| h - pad - (y - y0) / (y1 - y0).max(1e-12) * (h - 2.0 * pad);
        let poly: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", sx(p.0), sy(p.1))).collect();
        let _ = writeln!(s, "<polyline fill=\"none\" stroke=\"black\" points=\"{}\"/>", poly.join(" "));
        if !fit.flat {
            let _ = writeln!(
                s,
                "<line stroke=\"red\" x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\"/>",
                sx(x0),
                sy(fit.intercept + fit.slope * x0),
                sx(x1),
                sy(fit.intercept + fit.slope * x1)
            );
        }
        let _ = writeln!(s, "<text x=\"{pad}\" y=\"20\">slope {:.3}</text>", fit.slope);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn planted(f: impl Fn(f64) -> f64) -> Vec<Row> {
        let mut rows = Vec::new();
        for (g, n) in [100usize, 200, 400, 800].into_iter().enumerate() {
            for r in 0..3 {
                let e = f(n as f64);
                rows.push(Row {
                    n,
                    seed: replicate_stream(g, r),
                    estimator: "metric".into(),
                    value: e,
                    truth: 0.0,
                    abs_err: e,
                    rel_err: e,
                    runtime_ms: 0.0,
                    status: "ok".into(),
                });
            }
        }
        rows
    }

    #[test]
    fn planted_power_law() {
        let fit = fit_rate(&planted(|n| n.powi(-2))).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-9);
        let fit = fit_rate(&planted(|_| 0.3)).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        let fit = fit_rate(&planted(|_| 0.0)).unwrap();
        assert!(fit.flat);
        assert!(fit_rate(&planted(|n| n.powi(-2))[..6]).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let mut rows = planted(|n| 1.0 / n);
        rows[0].status = "numeric".into();
        rows[0].value = f64::NAN;
        rows[1].truth = f64::INFINITY;
        let text = format_csv(&rows);
        assert!(text.starts_with("# reachkit-csv v1\n"));
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.len(), rows.len());
        assert!(back[0].value.is_nan());
        assert_eq!(back[1].truth, f64::INFINITY);
        assert_eq!(format_csv(&back), text);
        assert!(parse_csv("n,seed\n").is_err());
    }

    #[test]
    fn one_row_and_reproducible_bytes() {
        let cfg = ExperimentConfig {
            shape: ShapeSpec::Circle { r: 1.0 },
            estimator: Estimator::Metric,
            n_grid: vec![100],
            replicates: 1,
            seed: 3,
            knobs: Knobs {
                epsilon: Some(0.1),
                ..Knobs::default()
            },
            output: None,
        };
        let a = run_experiment(&cfg).unwrap();
        assert_eq!(a.len(), 1);
        assert!(a[0].ok(), "{:?}", a[0]);
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(format_csv(&a), format_csv(&b));
    }

    #[test]
    fn failures_become_rows() {
        let cfg = ExperimentConfig {
            shape: ShapeSpec::Circle { r: 1.0 },
            estimator: Estimator::Sdr,
            n_grid: vec![50, 60],
            replicates: 2,
            seed: 1,
            knobs: Knobs {
                epsilon: Some(0.1),
                delta: Some(5.0),
                ..Knobs::default()
            },
            output: None,
        };
        let rows = run_experiment(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.status == "invalid-input"));
    }

    #[test]
    fn streams_never_collide() {
        let mut seen = std::collections::HashSet::new();
        for g in 0..5 {
            for r in 0..50 {
                assert!(seen.insert(replicate_stream(g, r)));
                assert!(seen.insert(replicate_stream(g, r) | FRESH_BIT));
            }
        }
        let (mut ra, mut rb) = (stream(7, 1), stream(7, 2));
        let a: Vec<u64> = (0..4).map(|_| ra.gen()).collect();
        let b: Vec<u64> = (0..4).map(|_| rb.gen()).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn rejects_bad_grids() {
        let mut cfg = ExperimentConfig {
            shape: ShapeSpec::Circle { r: 1.0 },
            estimator: Estimator::Metric,
            n_grid: vec![100, 100],
            replicates: 1,
            seed: 0,
            knobs: Knobs::default(),
            output: None,
        };
        assert!(cfg.validate().is_err());
        cfg.n_grid = vec![100];
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());
    }
}
