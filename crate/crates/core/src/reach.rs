//! Reach estimation: the smaller of the curvature radius of local patches and
//! the plug-in spherical distortion radius.

use crate::error::{Error, Result};
use crate::geometry::{d_max_bound, dist, jung_bound, unit_ball_volume, ModelParams, PointCloud};
use crate::localpoly::{
    bandwidth, default_tensor_cap, estimate_curvature_radius, FitConfig, DEFAULT_BANDWIDTH_CONSTANT,
};
use crate::metric::{MetricEstimate, PluginMetric};
use crate::sdr::{sdr_delta_streamed, SdrResult};

/// `s_max`: Jung's bound applied to the geodesic diameter cap.
pub fn s_max(params: &ModelParams, ambient: usize) -> f64 {
    jung_bound(d_max_bound(params), ambient)
}

/// Offset radius used when none is given: twice the radius at which a ball
/// of the model's minimal density holds `log n` expected points.
pub fn default_epsilon(params: &ModelParams, n: usize) -> f64 {
    let n = n.max(2) as f64;
    2.0 * (n.ln() / (unit_ball_volume(params.d) * params.f_min * n)).powf(1.0 / params.d as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct AdaptiveTuning {
    pub epsilon_n: f64,
    pub delta_n: f64,
}

/// `delta_n = 1 / log n` and `epsilon_n = log n (log n / n)^{k/d}`.
pub fn adaptive_tuning(n: f64, d: usize, k: usize) -> Result<AdaptiveTuning> {
    if !(n > 1.0) || d == 0 {
        return Err(Error::invalid("adaptive tuning needs n > 1 and d >= 1"));
    }
    let l = n.ln();
    Ok(AdaptiveTuning {
        epsilon_n: l * (l / n).powf(k as f64 / d as f64),
        delta_n: 1.0 / l,
    })
}

/// Plug-in radius: capped offset-graph metric on the sample, then the
/// spherical distortion radius at `delta`, capped at `s_max`.
pub fn sdr_plugin_full(
    cloud: &PointCloud,
    params: &ModelParams,
    epsilon_n: f64,
    delta: f64,
) -> Result<SdrResult> {
    if !(delta > 0.0 && delta < params.rch_min) {
        return Err(Error::invalid(format!(
            "delta = {delta} must lie in (0, rch_min = {})",
            params.rch_min
        )));
    }
    let cap = d_max_bound(params);
    let pm = PluginMetric::new(MetricEstimate::new(cloud.clone(), epsilon_n, cap)?)?;
    let mut res = sdr_delta_streamed(cloud, delta, |i, cutoff| {
        let lim = cutoff.min(cap);
        pm.base_field(i, lim)
            .to_base()
            .iter()
            .map(|&d| {
                if d.is_finite() {
                    d.min(cap)
                } else if cap <= cutoff {
                    cap
                } else {
                    f64::INFINITY
                }
            })
            .collect()
    })?;
    res.value = res.value.min(s_max(params, cloud.dim()));
    Ok(res)
}

pub fn sdr_plugin(cloud: &PointCloud, params: &ModelParams, epsilon_n: f64, delta: f64) -> Result<f64> {
    Ok(sdr_plugin_full(cloud, params, epsilon_n, delta)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Local,
    Global,
    Tie,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Local => "local",
            Regime::Global => "global",
            Regime::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Tuning {
    pub epsilon_n: f64,
    pub delta: f64,
    pub h: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ReachReport {
    pub rch_hat: f64,
    pub r_ell_hat: f64,
    pub sdr_hat: f64,
    pub regime: Regime,
    pub tuning: Tuning,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReachConfig {
    pub delta: Option<f64>,
    /// Use the log-n schedule for `delta` and `epsilon`.
    pub adaptive: bool,
    pub epsilon: Option<f64>,
    pub h: Option<f64>,
    pub t: Option<f64>,
    /// Grid points per axis in the curvature search (default 9).
    pub grid: Option<usize>,
}

pub fn regime(r_ell: f64, sdr: f64) -> Regime {
    let rch = r_ell.min(sdr);
    if (r_ell - sdr).abs() < 1e-6 * rch || (r_ell.is_infinite() && sdr.is_infinite()) {
        Regime::Tie
    } else if r_ell < sdr {
        Regime::Local
    } else {
        Regime::Global
    }
}

pub fn reach_estimate(cloud: &PointCloud, params: &ModelParams, cfg: &ReachConfig) -> Result<ReachReport> {
    params.validate(cloud.dim())?;
    let n = cloud.len();
    let cover = default_epsilon(params, n);
    let (epsilon_n, delta) = if cfg.adaptive {
        let a = adaptive_tuning(n as f64, params.d, params.k)?;
        // the sample itself is the support estimate, so the offset cannot
        // go below its covering scale
        (cfg.epsilon.unwrap_or(a.epsilon_n.max(cover)), cfg.delta.unwrap_or(a.delta_n))
    } else {
        (cfg.epsilon.unwrap_or(cover), cfg.delta.unwrap_or(params.rch_min / 2.0))
    };
    let h = match cfg.h {
        Some(h) => h,
        None => bandwidth(params, n as f64, DEFAULT_BANDWIDTH_CONSTANT)?,
    };
    let t = cfg.t.unwrap_or_else(|| default_tensor_cap(h));
    let mut fit = FitConfig::new(params.d, params.k.max(3), h);
    fit.t = t;
    let curv = estimate_curvature_radius(cloud, &fit, cfg.grid.unwrap_or(9))?;
    let sdr = sdr_plugin(cloud, params, epsilon_n, delta)?;
    let r_ell = curv.r_ell_hat;
    Ok(ReachReport {
        rch_hat: r_ell.min(sdr),
        r_ell_hat: r_ell,
        sdr_hat: sdr,
        regime: regime(r_ell, sdr),
        tuning: Tuning {
            epsilon_n,
            delta,
            h,
            t,
        },
    })
}

/// `min ‖p - q‖^2 / (2 dist(q - p, T_p))` over sample pairs, with tangent
/// bases supplied by an oracle. Pairs with no normal offset are skipped, so
/// straight samples give `+inf`.
pub fn oracle_reach_federer(
    cloud: &PointCloud,
    tangent: impl Fn(usize) -> Vec<Vec<f64>>,
) -> Result<f64> {
    cloud.require_non_empty("cloud")?;
    let n = cloud.len();
    let bases: Vec<Vec<Vec<f64>>> = (0..n).map(&tangent).collect();
    let mut best = f64::INFINITY;
    for i in 0..n {
        let p = cloud.point(i);
        for j in 0..n {
            if j == i {
                continue;
            }
            let q = cloud.point(j);
            let diff: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
            let mut normal = diff.clone();
            for e in &bases[i] {
                let c: f64 = e.iter().zip(&diff).map(|(a, b)| a * b).sum();
                for (x, ea) in normal.iter_mut().zip(e) {
                    *x -= c * ea;
                }
            }
            let nd = crate::geometry::norm(&normal);
            let chord = dist(p, q);
            if nd <= 1e-14 * chord {
                continue;
            }
            best = best.min(chord * chord / (2.0 * nd));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn adaptive_values() {
        let e2 = std::f64::consts::E.powi(2);
        assert_relative_eq!(adaptive_tuning(e2, 1, 2).unwrap().delta_n, 0.5, max_relative = 1e-12);
        let a = adaptive_tuning(1e6, 1, 3).unwrap();
        let b = adaptive_tuning(1e9, 1, 3).unwrap();
        assert!(b.epsilon_n < a.epsilon_n);
        let c = adaptive_tuning(1e6, 1, 4).unwrap();
        assert!(c.epsilon_n < a.epsilon_n);
        assert!(adaptive_tuning(1.0, 1, 3).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(regime(1.0, 2.0), Regime::Local);
        assert_eq!(regime(2.0, 1.0), Regime::Global);
        assert_eq!(regime(1.0, 1.0 + 1e-9), Regime::Tie);
    }

    #[test]
    fn federer_on_line_and_circle() {
        let line = PointCloud::from_flat(2, (0..20).flat_map(|i| [i as f64, 0.0]).collect()).unwrap();
        assert!(oracle_reach_federer(&line, |_| vec![vec![1.0, 0.0]]).unwrap().is_infinite());
        let n = 200;
        let ts: Vec<f64> = (0..n).map(|i| 2.0 * std::f64::consts::PI * i as f64 / n as f64).collect();
        let c = PointCloud::from_flat(2, ts.iter().flat_map(|t| [3.0 * t.cos(), 3.0 * t.sin()]).collect())
            .unwrap();
        let r = oracle_reach_federer(&c, |i| vec![vec![-ts[i].sin(), ts[i].cos()]]).unwrap();
        assert_relative_eq!(r, 3.0, max_relative = 1e-9);
    }
}
