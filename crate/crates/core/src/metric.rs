//! Plug-in geodesic metric, sup-losses and mutual metric distortion.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{default_tie_tolerance, dist, nearest_points, FiniteMetricSpace, PointCloud};
use crate::graph::{build_graph, dijkstra_seeded, graph_geodesic, NeighborhoodGraph};

/// Support estimate, offset radius and cap defining the plug-in metric.
#[derive(Debug, Clone)]
pub struct MetricEstimate {
    pub base_cloud: PointCloud,
    pub epsilon: f64,
    pub cap: f64,
}

impl MetricEstimate {
    pub fn new(base_cloud: PointCloud, epsilon: f64, cap: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::invalid("epsilon must be positive and finite"));
        }
        if !(cap > 0.0) {
            return Err(Error::invalid("cap must be positive"));
        }
        base_cloud.require_non_empty("base cloud")?;
        Ok(MetricEstimate {
            base_cloud,
            epsilon,
            cap,
        })
    }
}

/// Reference evaluation: shortest path in the `2 epsilon` graph on
/// `base ∪ {x, y}`, capped. Rebuilds the graph on every call.
pub fn plugin_metric(est: &MetricEstimate, x: &[f64], y: &[f64]) -> Result<f64> {
    let dim = est.base_cloud.dim();
    if x.len() != dim || y.len() != dim {
        return Err(Error::invalid("dimension mismatch"));
    }
    if x == y {
        return Ok(0.0);
    }
    let mut c = est.base_cloud.clone();
    c.push(x)?;
    c.push(y)?;
    let n = c.len();
    let g = build_graph(&c, 2.0 * est.epsilon)?;
    Ok(graph_geodesic(&g, n - 2, n - 1)?.min(est.cap))
}

/// Plug-in metric with the base graph built once.
///
/// Distances from an arbitrary point are obtained by seeding Dijkstra with
/// its edges into the base graph, which gives the same value as
/// [`plugin_metric`] without rebuilding anything.
#[derive(Debug, Clone)]
pub struct PluginMetric {
    est: MetricEstimate,
    graph: NeighborhoodGraph,
}

/// Distances from one source point to every base point.
#[derive(Debug, Clone)]
pub struct SourceField {
    point: Vec<f64>,
    to_base: Vec<f64>,
}

impl SourceField {
    pub fn to_base(&self) -> &[f64] {
        &self.to_base
    }
}

impl PluginMetric {
    pub fn new(est: MetricEstimate) -> Result<Self> {
        let graph = build_graph(&est.base_cloud, 2.0 * est.epsilon)?;
        Ok(PluginMetric { est, graph })
    }

    pub fn estimate(&self) -> &MetricEstimate {
        &self.est
    }

    pub fn graph(&self) -> &NeighborhoodGraph {
        &self.graph
    }

    fn seeds(&self, x: &[f64]) -> Vec<(usize, f64)> {
        let r = 2.0 * self.est.epsilon;
        self.est
            .base_cloud
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let w = dist(x, p);
                (w <= r).then_some((i, w))
            })
            .collect()
    }

    /// Shortest path lengths from `x`, truncated at `cutoff`.
    pub fn field(&self, x: &[f64], cutoff: f64) -> Result<SourceField> {
        if x.len() != self.est.base_cloud.dim() {
            return Err(Error::invalid("dimension mismatch"));
        }
        let to_base = dijkstra_seeded(&self.graph, &self.seeds(x), cutoff, None);
        Ok(SourceField {
            point: x.to_vec(),
            to_base,
        })
    }

    /// Field of base point `i`.
    pub fn base_field(&self, i: usize, cutoff: f64) -> SourceField {
        SourceField {
            point: self.est.base_cloud.point(i).to_vec(),
            to_base: dijkstra_seeded(&self.graph, &[(i, 0.0)], cutoff, None),
        }
    }

    /// Uncapped graph distance from the field's source to `y`.
    pub fn raw_eval(&self, field: &SourceField, y: &[f64]) -> f64 {
        if field.point == y {
            return 0.0;
        }
        let direct = dist(&field.point, y);
        let mut best = if direct <= 2.0 * self.est.epsilon {
            direct
        } else {
            f64::INFINITY
        };
        for (b, w) in self.seeds(y) {
            best = best.min(field.to_base[b] + w);
        }
        best
    }

    pub fn eval(&self, field: &SourceField, y: &[f64]) -> f64 {
        self.raw_eval(field, y).min(self.est.cap)
    }

    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if y.len() != x.len() {
            return Err(Error::invalid("dimension mismatch"));
        }
        Ok(self.eval(&self.field(x, f64::INFINITY)?, y))
    }

    /// Capped distance table on the base cloud.
    pub fn table(&self) -> Result<FiniteMetricSpace> {
        let n = self.est.base_cloud.len();
        let cap = self.est.cap;
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                dijkstra_seeded(&self.graph, &[(i, 0.0)], f64::INFINITY, None)
                    .into_iter()
                    .map(|d| d.min(cap))
                    .collect()
            })
            .collect();
        let mut t: Vec<f64> = rows.into_iter().flatten().collect();
        for i in 0..n {
            for j in i + 1..n {
                let m = t[i * n + j].min(t[j * n + i]);
                t[i * n + j] = m;
                t[j * n + i] = m;
            }
        }
        FiniteMetricSpace::new(self.est.base_cloud.clone(), t, true)
    }
}

/// Sup-losses of an estimated metric.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct LossReport {
    /// Over sample pairs.
    pub l_n: f64,
    /// Over all test pairs.
    pub l_inf: f64,
    pub worst_pair: Option<(usize, usize)>,
}

/// `max |1 - d_hat / d_true|` over `pairs`, with the maximizing pair.
pub fn sup_loss(
    d_hat: impl Fn(usize, usize) -> f64,
    d_true: impl Fn(usize, usize) -> f64,
    pairs: &[(usize, usize)],
) -> Result<LossReport> {
    let mut worst = 0.0f64;
    let mut arg = None;
    for &(i, j) in pairs {
        let t = d_true(i, j);
        if !(t > 0.0) {
            return Err(Error::invalid(format!(
                "true distance of pair ({i},{j}) is {t}; the loss is relative"
            )));
        }
        let l = (1.0 - d_hat(i, j) / t).abs();
        if arg.is_none() || l > worst {
            worst = l;
            arg = Some((i, j));
        }
    }
    Ok(LossReport {
        l_n: worst,
        l_inf: worst,
        worst_pair: arg,
    })
}

impl LossReport {
    /// Merges the sample-pair report with a report over extra test pairs.
    pub fn with_test_pairs(self, extra: &LossReport) -> LossReport {
        let (l_inf, worst_pair) = if extra.l_inf > self.l_inf {
            (extra.l_inf, extra.worst_pair)
        } else {
            (self.l_inf, self.worst_pair)
        };
        LossReport {
            l_n: self.l_n,
            l_inf,
            worst_pair,
        }
    }
}

/// One direction `D_delta(d' | d)`, computed over pairs of `kp`.
pub fn directed_distortion(
    k: &FiniteMetricSpace,
    kp: &FiniteMetricSpace,
    delta: f64,
    tol: f64,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    k.cloud().require_non_empty("first space")?;
    kp.cloud().require_non_empty("second space")?;
    let proj: Vec<Vec<usize>> = kp
        .cloud()
        .iter()
        .map(|p| nearest_points(p, k.cloud(), tol))
        .collect::<Result<_>>()?;
    let m = kp.len();
    let mut sup = 0.0f64;
    for i in 0..m {
        for j in i + 1..m {
            if kp.chord(i, j) < delta {
                continue;
            }
            let num = kp.d(i, j);
            let mut den = f64::INFINITY;
            for &a in &proj[i] {
                for &b in &proj[j] {
                    den = den.min(k.d(a, b));
                }
            }
            let r = if den == 0.0 {
                if num > 0.0 {
                    f64::INFINITY
                } else {
                    continue;
                }
            } else {
                num / den
            };
            sup = sup.max(r);
        }
    }
    Ok(sup)
}

/// Symmetrized mutual distortion `max(D(d'|d), D(d|d'))` at scale `delta`.
///
/// `tol` is the nearest-point tie band; `None` uses `1e-9` times the
/// diameter of both clouds together.
pub fn mutual_distortion(
    k: &FiniteMetricSpace,
    kp: &FiniteMetricSpace,
    delta: f64,
    tol: Option<f64>,
) -> Result<f64> {
    let tol = match tol {
        Some(t) => t,
        None => {
            let mut all = k.cloud().clone();
            for p in kp.cloud().iter() {
                all.push(p)?;
            }
            default_tie_tolerance(all.diameter())
        }
    };
    Ok(directed_distortion(k, kp, delta, tol)?.max(directed_distortion(kp, k, delta, tol)?))
}

/// `(l_inf + 1, D_{0+}, 1 / (1 - l_inf)_+)` for two metrics on one cloud.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Bracket {
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
    pub l_inf: f64,
}

impl Bracket {
    /// Whether `lower <= value <= upper`, up to a few units of rounding in
    /// the ratios (the two sides divide in opposite orders).
    pub fn holds(&self) -> bool {
        let slack = 4.0 * f64::EPSILON;
        self.lower <= self.value * (1.0 + slack) && self.value <= self.upper * (1.0 + slack)
    }
}

pub fn distortion_sup_loss_bracket(
    space: &FiniteMetricSpace,
    d_hat: &FiniteMetricSpace,
    tol: f64,
) -> Result<Bracket> {
    if space.cloud() != d_hat.cloud() {
        return Err(Error::invalid("both metrics must live on the same cloud"));
    }
    let n = space.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if !(space.d(i, j) > 0.0 && d_hat.d(i, j) > 0.0) {
                return Err(Error::invalid(format!("pair ({i},{j}) has a zero distance")));
            }
            pairs.push((i, j));
        }
    }
    let loss = sup_loss(|i, j| d_hat.d(i, j), |i, j| space.d(i, j), &pairs)?;
    let delta = space
        .cloud()
        .min_separation()
        .ok_or_else(|| Error::invalid("cloud needs two distinct points"))?;
    let value = mutual_distortion(space, d_hat, delta, Some(tol))?;
    let l = loss.l_inf;
    let upper = if l >= 1.0 { f64::INFINITY } else { 1.0 / (1.0 - l) };
    Ok(Bracket {
        lower: l + 1.0,
        value,
        upper,
        l_inf: l,
    })
}
