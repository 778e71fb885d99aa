//! Synthetic shapes with known answers: samplers, exact (or flagged
//! approximate) intrinsic distances, tangent spaces, reach and curvature.

mod bump;
mod curves;
mod quad;
mod torus;
mod widget;

pub use bump::{bump_geodesic_gap, bump_kernel, bumped_cylinder_map, BumpGap, DEFAULT_ELL_RATIO};
pub use curves::{Dumbbell, Ellipse};
pub use quad::{adaptive_simpson, gauss_legendre8};
pub use torus::Torus;
pub use widget::{check_turn_widget, turn_widget, TurnWidget, WidgetChecks, WidgetCurve};

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use rand::Rng as _;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dot, norm, unit_ball_volume, FiniteMetricSpace, ModelParams, PointCloud};
use crate::rng::{stream, Rng};
use crate::sdr::wedge_sdr_oracle;

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum ShapeSpec {
    Circle { r: f64 },
    /// Round `d`-sphere of radius `r` in `R^{d+1}`.
    Sphere { d: usize, r: f64 },
    Ellipse { a: f64, b: f64 },
    Torus { rc: f64, r: f64 },
    /// Two segments of length `arm` from the origin at angle `alpha`.
    Wedge { alpha: f64, arm: f64 },
    TurnWidget { alpha: f64, r: f64 },
    /// Section of the cylinder of radius `r` over `w in [-ell, ell]^d`, with a
    /// bump of height `c eps^k e^{-1}` at the apex.
    BumpedCylinder { r: f64, ell: f64, c: f64, eps: f64, k: u32, d: usize },
    /// Planar dumbbell curve; see [`Dumbbell`].
    Dumbbell { neck: f64, fillet: f64, bulb: f64, length: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ShapeSpec {
    /// Bumped cylinder with endpoints at `DEFAULT_ELL_RATIO * eps`.
    pub fn bumped_cylinder(r: f64, c: f64, eps: f64, k: u32, d: usize) -> Self {
        ShapeSpec::BumpedCylinder {
            r,
            ell: DEFAULT_ELL_RATIO * eps,
            c,
            eps,
            k,
            d,
        }
    }

    /// The dumbbell used in the regime experiments: neck 0.2, fillets 0.4,
    /// bulbs 0.6, neck length 1.
    pub fn default_dumbbell() -> Self {
        ShapeSpec::Dumbbell {
            neck: 0.2,
            fillet: 0.4,
            bulb: 0.6,
            length: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ShapeSpec::Circle { r } => positive("R", r),
            ShapeSpec::Sphere { d, r } => {
                if d == 0 {
                    return Err(Error::invalid("sphere dimension must be >= 1"));
                }
                positive("R", r)
            }
            ShapeSpec::Ellipse { a, b } => positive("a", a).and(positive("b", b)),
            ShapeSpec::Torus { rc, r } => {
                positive("Rc", rc)?;
                positive("r", r)?;
                if rc <= r {
                    return Err(Error::invalid("torus needs Rc > r"));
                }
                Ok(())
            }
            ShapeSpec::Wedge { alpha, arm } => {
                positive("arm length", arm)?;
                if !(alpha > 0.0 && alpha < PI) {
                    return Err(Error::invalid("wedge angle must lie in (0, pi)"));
                }
                Ok(())
            }
            ShapeSpec::TurnWidget { alpha, r } => {
                positive("R", r)?;
                if !(alpha > 0.0 && alpha <= PI / 4.0 + 1e-15) {
                    return Err(Error::invalid("turn angle must lie in (0, pi/4]"));
                }
                Ok(())
            }
            ShapeSpec::BumpedCylinder { r, ell, c, eps, k, d } => {
                positive("R", r)?;
                positive("ell", ell)?;
                positive("c", c)?;
                if d == 0 || k < 2 {
                    return Err(Error::invalid("bumped cylinder needs d >= 1 and k >= 2"));
                }
                if !(eps >= 0.0 && eps <= c * r) {
                    return Err(Error::invalid("bump scale must satisfy 0 <= eps <= c R"));
                }
                if ell < eps || ell >= r {
                    return Err(Error::invalid("need eps <= ell < R"));
                }
                Ok(())
            }
            ShapeSpec::Dumbbell { neck, fillet, bulb, length } => {
                positive("neck", neck)?;
                positive("fillet", fillet)?;
                positive("bulb", bulb)?;
                positive("length", length)?;
                if Dumbbell::new(neck, fillet, bulb, length).is_none() {
                    return Err(Error::invalid(
                        "dumbbell needs fillet + bulb > neck + fillet and bulb > neck",
                    ));
                }
                Ok(())
            }
        }
    }

    pub fn intrinsic_dim(&self) -> usize {
        match *self {
            ShapeSpec::Sphere { d, .. } | ShapeSpec::BumpedCylinder { d, .. } => d,
            ShapeSpec::Torus { .. } => 2,
            _ => 1,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match *self {
            ShapeSpec::Sphere { d, .. } | ShapeSpec::BumpedCylinder { d, .. } => d + 1,
            ShapeSpec::Torus { .. } => 3,
            _ => 2,
        }
    }

    /// Builds a spec from a name and `key=value` pairs, as on the command line.
    pub fn parse(name: &str, params: &str) -> Result<Self> {
        let mut kv: HashMap<String, f64> = HashMap::new();
        for item in params.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("expected key=value, got '{item}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::invalid(format!("bad number in '{item}'")))?;
            kv.insert(k.trim().to_ascii_lowercase(), v);
        }
        let get = |k: &str, default: Option<f64>| -> Result<f64> {
            kv.get(k)
                .copied()
                .or(default)
                .ok_or_else(|| Error::invalid(format!("shape '{name}' needs parameter '{k}'")))
        };
        let int = |k: &str, default: Option<f64>| -> Result<usize> {
            let v = get(k, default)?;
            if v < 0.0 || v.fract() != 0.0 {
                return Err(Error::invalid(format!("parameter '{k}' must be a whole number")));
            }
            Ok(v as usize)
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "circle" => ShapeSpec::Circle { r: get("r", Some(1.0))? },
            "sphere" => ShapeSpec::Sphere {
                d: int("d", Some(2.0))?,
                r: get("r", Some(1.0))?,
            },
            "ellipse" => ShapeSpec::Ellipse {
                a: get("a", Some(2.0))?,
                b: get("b", Some(1.0))?,
            },
            "torus" => ShapeSpec::Torus {
                rc: get("rc", Some(3.0))?,
                r: get("r", Some(1.0))?,
            },
            "wedge" => ShapeSpec::Wedge {
                alpha: get("alpha", None)?,
                arm: get("arm", Some(1.0))?,
            },
            "turn-widget" | "widget" => ShapeSpec::TurnWidget {
                alpha: get("alpha", Some(PI / 4.0))?,
                r: get("r", Some(1.0))?,
            },
            "bumped-cylinder" | "bump" => {
                let eps = get("eps", Some(0.1))?;
                ShapeSpec::BumpedCylinder {
                    r: get("r", Some(1.0))?,
                    ell: get("ell", Some(DEFAULT_ELL_RATIO * eps))?,
                    c: get("c", Some(1.0))?,
                    eps,
                    k: int("k", Some(2.0))? as u32,
                    d: int("d", Some(1.0))?,
                }
            }
            "dumbbell" => ShapeSpec::Dumbbell {
                neck: get("neck", Some(0.2))?,
                fillet: get("fillet", Some(0.4))?,
                bulb: get("bulb", Some(0.6))?,
                length: get("length", Some(1.0))?,
            },
            other => return Err(Error::invalid(format!("unknown shape '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
enum Model {
    Circle { r: f64 },
    Sphere { r: f64 },
    Ellipse(Ellipse),
    Torus(Torus),
    Wedge { alpha: f64, arm: f64 },
    Widget { w: TurnWidget, scale: f64, arc: ArcTable },
    Bump { spec: ShapeSpec, arc: Option<ArcTable>, area_bound: f64 },
    Dumbbell(Dumbbell),
}

/// Known answers for a shape. Points are addressed by parameters as
/// returned by [`sample_with_params`].
#[derive(Debug, Clone)]
pub struct OracleSet {
    pub spec: ShapeSpec,
    pub reach: f64,
    pub wfs: f64,
    pub r_ell: f64,
    /// True when `reach`, `r_ell` or geodesics come from numerics rather than
    /// closed forms.
    pub approximate: bool,
    model: Model,
}

pub fn oracle(shape: &ShapeSpec) -> Result<OracleSet> {
    shape.validate()?;
    let (model, reach, wfs, r_ell, approximate) = match *shape {
        ShapeSpec::Circle { r } => (Model::Circle { r }, r, r, r, false),
        ShapeSpec::Sphere { r, .. } => (Model::Sphere { r }, r, r, r, false),
        ShapeSpec::Ellipse { a, b } => {
            let (big, small) = (a.max(b), a.min(b));
            let r_ell = small * small / big;
            (Model::Ellipse(Ellipse::new(a, b)), r_ell, small, r_ell, false)
        }
        ShapeSpec::Torus { rc, r } => {
            let reach = r.min(rc - r);
            (Model::Torus(Torus::new(rc, r)), reach, reach, r, true)
        }
        ShapeSpec::Wedge { alpha, arm } => (Model::Wedge { alpha, arm }, 0.0, f64::INFINITY, f64::INFINITY, false),
        ShapeSpec::TurnWidget { alpha, r } => {
            let w = TurnWidget::new(alpha)?;
            let scale = r / w.r_alpha;
            let arc = ArcTable::new(|t| (1.0 + w.g_prime(t).powi(2)).sqrt(), 0.0, 1.0, 2048);
            let mut r_ell = f64::INFINITY;
            for i in 0..=20_000 {
                let t = i as f64 / 20_000.0;
                let k2 = w.g_second(t);
                if k2 > 0.0 {
                    r_ell = r_ell.min((1.0 + w.g_prime(t).powi(2)).powf(1.5) / k2);
                }
            }
            let r_ell = scale * r_ell;
            (Model::Widget { w, scale, arc }, r_ell, f64::INFINITY, r_ell, true)
        }
        ShapeSpec::BumpedCylinder { r, ell, c, eps, k, d } => {
            let grad = |w1: f64| bump::graph_gradient(r, c, eps, k, &[w1]);
            let arc = if d == 1 {
                Some(ArcTable::new(|w1| (1.0 + grad(w1)[0].powi(2)).sqrt(), -ell, ell, 4096))
            } else {
                None
            };
            let mut area_bound: f64 = 1.0;
            let mut r_ell = r;
            let steps = 20_000;
            for i in 0..=steps {
                let w1 = -ell + 2.0 * ell * i as f64 / steps as f64;
                let g = grad(w1)[0];
                area_bound = area_bound.max((1.0 + g * g).sqrt());
                let k2 = bump::graph_second(r, c, eps, k, w1).abs();
                if k2 > 0.0 {
                    r_ell = r_ell.min((1.0 + g * g).powf(1.5) / k2);
                }
            }
            (
                Model::Bump {
                    spec: shape.clone(),
                    arc,
                    area_bound: area_bound * 1.01,
                },
                r_ell,
                f64::INFINITY,
                r_ell,
                true,
            )
        }
        ShapeSpec::Dumbbell { neck, fillet, bulb, length } => {
            let db = Dumbbell::new(neck, fillet, bulb, length).expect("validated");
            let r_ell = db.min_curvature_radius();
            (Model::Dumbbell(db), r_ell.min(neck), neck.min(bulb), r_ell, false)
        }
    };
    Ok(OracleSet {
        spec: shape.clone(),
        reach,
        wfs,
        r_ell,
        approximate,
        model,
    })
}

impl OracleSet {
    /// Embedding of a parameter vector.
    pub fn embed(&self, p: &[f64]) -> Vec<f64> {
        match &self.model {
            Model::Circle { r } => vec![r * p[0].cos(), r * p[0].sin()],
            Model::Sphere { r } => p.iter().map(|u| r * u).collect(),
            Model::Ellipse(e) => e.point(p[0]).to_vec(),
            Model::Torus(t) => t.point(p[0], p[1]).to_vec(),
            Model::Wedge { alpha, .. } => {
                if p[0] == 0.0 {
                    vec![p[1], 0.0]
                } else {
                    vec![p[1] * alpha.cos(), p[1] * alpha.sin()]
                }
            }
            Model::Widget { w, scale, .. } => vec![scale * p[0], scale * w.g(p[0])],
            Model::Bump { spec, .. } => bump::embed(spec, p),
            Model::Dumbbell(d) => d.point(p[0]).to_vec(),
        }
    }

    /// Intrinsic distance between two parameter points.
    pub fn geodesic(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        Ok(match &self.model {
            Model::Circle { r } => {
                let d = (p[0] - q[0]).rem_euclid(TAU);
                r * d.min(TAU - d)
            }
            Model::Sphere { r } => {
                // atan2 form keeps accuracy at small and near-antipodal angles
                let diff: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
                let sum: Vec<f64> = p.iter().zip(q).map(|(a, b)| a + b).collect();
                r * 2.0 * norm(&diff).atan2(norm(&sum))
            }
            Model::Ellipse(e) => e.geodesic(p[0], q[0]),
            Model::Torus(t) => t.geodesic((p[0], p[1]), (q[0], q[1])),
            Model::Wedge { .. } => {
                if p[0] == q[0] {
                    (p[1] - q[1]).abs()
                } else {
                    p[1] + q[1]
                }
            }
            Model::Widget { w, scale, arc } => {
                let f = |t: f64| (1.0 + w.g_prime(t).powi(2)).sqrt();
                scale * (arc.length_to(q[0], &f) - arc.length_to(p[0], &f)).abs()
            }
            Model::Bump { spec, arc, .. } => {
                let ShapeSpec::BumpedCylinder { r, c, eps, k, .. } = *spec else {
                    unreachable!()
                };
                let arc = arc.as_ref().ok_or_else(|| {
                    Error::invalid("bumped cylinder geodesics are only tabulated for d = 1")
                })?;
                let f = |w1: f64| (1.0 + bump::graph_gradient(r, c, eps, k, &[w1])[0].powi(2)).sqrt();
                (arc.length_to(q[0], &f) - arc.length_to(p[0], &f)).abs()
            }
            Model::Dumbbell(d) => d.geodesic(p[0], q[0]),
        })
    }

    /// Orthonormal tangent basis at a parameter point.
    pub fn tangent(&self, p: &[f64]) -> Vec<Vec<f64>> {
        match &self.model {
            Model::Circle { .. } => vec![vec![-p[0].sin(), p[0].cos()]],
            Model::Sphere { .. } => orthogonal_complement(p),
            Model::Ellipse(e) => vec![e.tangent(p[0]).to_vec()],
            Model::Torus(t) => t.tangent(p[0], p[1]).iter().map(|v| v.to_vec()).collect(),
            Model::Wedge { alpha, .. } => {
                if p[0] == 0.0 {
                    vec![vec![1.0, 0.0]]
                } else {
                    vec![vec![alpha.cos(), alpha.sin()]]
                }
            }
            Model::Widget { w, .. } => {
                let g = w.g_prime(p[0]);
                let s = (1.0 + g * g).sqrt();
                vec![vec![1.0 / s, g / s]]
            }
            Model::Bump { spec, .. } => bump::tangent(spec, p),
            Model::Dumbbell(d) => vec![d.tangent(p[0]).to_vec()],
        }
    }

    /// Reach of the wedge at tolerance `mu`; `None` for smooth shapes.
    pub fn mu_reach(&self, mu: f64) -> Option<f64> {
        match self.model {
            Model::Wedge { alpha, .. } => Some(if mu >= (alpha / 2.0).sin() { 0.0 } else { f64::INFINITY }),
            _ => None,
        }
    }

    /// Closed-form spherical distortion radius at `delta`, where one exists.
    pub fn sdr(&self, delta: f64) -> Option<f64> {
        match self.model {
            Model::Wedge { alpha, .. } => wedge_sdr_oracle(alpha, delta).ok(),
            Model::Circle { r } | Model::Sphere { r } if delta <= 2.0 * r => Some(r.max(delta / 2.0)),
            _ => None,
        }
    }

    /// `d`-volume of the shape (length for curves).
    pub fn volume(&self) -> Option<f64> {
        Some(match &self.model {
            Model::Circle { r } => TAU * r,
            Model::Sphere { r } => {
                let d = self.spec.intrinsic_dim();
                (d + 1) as f64 * unit_ball_volume(d + 1) * r.powi(d as i32)
            }
            Model::Ellipse(e) => e.perimeter(),
            Model::Torus(t) => 4.0 * PI * PI * t.rc * t.r,
            Model::Wedge { arm, .. } => 2.0 * arm,
            Model::Widget { w, scale, arc } => {
                scale * arc.length_to(1.0, &|t: f64| (1.0 + w.g_prime(t).powi(2)).sqrt())
            }
            Model::Bump { spec, arc, .. } => {
                let ShapeSpec::BumpedCylinder { r, c, eps, k, ell, .. } = *spec else {
                    unreachable!()
                };
                let f = |w1: f64| (1.0 + bump::graph_gradient(r, c, eps, k, &[w1])[0].powi(2)).sqrt();
                arc.as_ref()?.length_to(ell, &f)
            }
            Model::Dumbbell(d) => d.perimeter(),
        })
    }

    /// Model parameters with uniform density on the shape. No derivative
    /// bounds are asserted.
    pub fn model_params(&self, k: usize) -> Result<ModelParams> {
        let vol = self
            .volume()
            .ok_or_else(|| Error::invalid("shape volume is not tabulated"))?;
        if !(self.reach > 0.0) {
            return Err(Error::invalid("shape has zero reach"));
        }
        Ok(ModelParams {
            d: self.spec.intrinsic_dim(),
            k,
            rch_min: self.reach,
            l: Vec::new(),
            f_min: 1.0 / vol,
            f_max: 1.0 / vol,
        })
    }
}

fn orthogonal_complement(u: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let un = norm(u);
    let u: Vec<f64> = u.iter().map(|x| x / un).collect();
    let skip = (0..n)
        .max_by(|&a, &b| u[a].abs().total_cmp(&u[b].abs()))
        .unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = vec![u.clone()];
    for i in (0..n).filter(|&i| i != skip) {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for b in &basis {
            let c = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let nv = norm(&v);
        basis.push(v.into_iter().map(|x| x / nv).collect());
    }
    basis.remove(0);
    basis
}

/// Cumulative arc length of a parametrised curve on fixed panels.
#[derive(Debug, Clone)]
pub(crate) struct ArcTable {
    a: f64,
    width: f64,
    knots: Vec<f64>,
}

impl ArcTable {
    pub(crate) fn new(speed: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Self {
        let width = (b - a) / panels as f64;
        let mut knots = vec![0.0];
        let mut acc = 0.0;
        for p in 0..panels {
            acc += gauss_legendre8(&speed, a + p as f64 * width, a + (p + 1) as f64 * width);
            knots.push(acc);
        }
        ArcTable { a, width, knots }
    }

    pub(crate) fn length_to(&self, t: f64, speed: &impl Fn(f64) -> f64) -> f64 {
        let panels = self.knots.len() - 1;
        let k = (((t - self.a) / self.width).floor().max(0.0) as usize).min(panels - 1);
        let start = self.a + k as f64 * self.width;
        self.knots[k] + gauss_legendre8(speed, start, t)
    }
}

fn sample_params(oracle: &OracleSet, n: usize, rng: &mut Rng) -> Vec<Vec<f64>> {
    let unif = |rng: &mut Rng| rng.gen::<f64>();
    match &oracle.model {
        Model::Circle { .. } => (0..n).map(|_| vec![TAU * unif(rng)]).collect(),
        Model::Sphere { .. } => {
            let dim = oracle.spec.ambient_dim();
            (0..n)
                .map(|_| loop {
                    let g: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
                    let s = norm(&g);
                    if s > 1e-12 {
                        break g.into_iter().map(|x| x / s).collect();
                    }
                })
                .collect()
        }
        Model::Ellipse(e) => {
            let top = e.a.max(e.b);
            (0..n)
                .map(|_| loop {
                    let t = TAU * unif(rng);
                    if unif(rng) * top <= e.speed(t) {
                        break vec![t];
                    }
                })
                .collect()
        }
        Model::Torus(t) => (0..n)
            .map(|_| {
                let theta = loop {
                    let th = TAU * unif(rng);
                    if unif(rng) * (t.rc + t.r) <= t.rc + t.r * th.cos() {
                        break th;
                    }
                };
                vec![theta, TAU * unif(rng)]
            })
            .collect(),
        Model::Wedge { arm, .. } => {
            // stratified along each arm, first arm takes the odd point
            let m0 = n.div_ceil(2);
            let m1 = n - m0;
            let mut out = Vec::with_capacity(n);
            for (k, m) in [(0.0, m0), (1.0, m1)] {
                for i in 0..m {
                    out.push(vec![k, arm * (i as f64 + unif(rng)) / m as f64]);
                }
            }
            out
        }
        Model::Widget { w, .. } => {
            let top = (1.0 + w.arc_prime(1.0).powi(2)).sqrt();
            (0..n)
                .map(|_| loop {
                    let t = unif(rng);
                    if unif(rng) * top <= (1.0 + w.g_prime(t).powi(2)).sqrt() {
                        break vec![t];
                    }
                })
                .collect()
        }
        Model::Bump { spec, area_bound, .. } => {
            let ShapeSpec::BumpedCylinder { r, ell, c, eps, k, d } = *spec else {
                unreachable!()
            };
            (0..n)
                .map(|_| loop {
                    let w: Vec<f64> = (0..d).map(|_| ell * (2.0 * unif(rng) - 1.0)).collect();
                    let g = bump::graph_gradient(r, c, eps, k, &w);
                    if unif(rng) * area_bound <= (1.0 + dot(&g, &g)).sqrt() {
                        break w;
                    }
                })
                .collect()
        }
        Model::Dumbbell(d) => (0..n).map(|_| vec![d.perimeter() * unif(rng)]).collect(),
    }
}

/// Sample of `n` points, uniform with respect to the volume measure, and the
/// parameters that produced them. Deterministic in `seed`.
pub fn sample_with_params(shape: &ShapeSpec, n: usize, seed: u64) -> Result<(PointCloud, Vec<Vec<f64>>)> {
    let o = oracle(shape)?;
    sample_from_oracle(&o, n, seed)
}

pub fn sample_from_oracle(o: &OracleSet, n: usize, seed: u64) -> Result<(PointCloud, Vec<Vec<f64>>)> {
    sample_from_oracle_stream(o, n, seed, 0)
}

/// As [`sample_from_oracle`], on stream `stream_id` of the master seed.
pub fn sample_from_oracle_stream(
    o: &OracleSet,
    n: usize,
    seed: u64,
    stream_id: u64,
) -> Result<(PointCloud, Vec<Vec<f64>>)> {
    let mut rng = stream(seed, stream_id);
    let params = sample_params(o, n, &mut rng);
    let mut cloud = PointCloud::new(o.spec.ambient_dim());
    for p in &params {
        cloud.push(&o.embed(p))?;
    }
    Ok((cloud, params))
}

pub fn sample(shape: &ShapeSpec, n: usize, seed: u64) -> Result<PointCloud> {
    Ok(sample_with_params(shape, n, seed)?.0)
}

/// Oracle distance table for given parameters.
pub fn oracle_table(o: &OracleSet, cloud: PointCloud, params: &[Vec<f64>]) -> Result<FiniteMetricSpace> {
    let n = params.len();
    let rows: Vec<Result<Vec<f64>>> = match &o.model {
        Model::Torus(t) => (0..n)
            .into_par_iter()
            .map(|i| {
                let tree = t.grid_tree((params[i][0], params[i][1]));
                Ok((0..n)
                    .map(|j| {
                        if j <= i {
                            0.0
                        } else {
                            t.geodesic_with_tree(&tree, (params[i][0], params[i][1]), (params[j][0], params[j][1]))
                        }
                    })
                    .collect())
            })
            .collect(),
        _ => (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| if j <= i { Ok(0.0) } else { o.geodesic(&params[i], &params[j]) })
                    .collect()
            })
            .collect(),
    };
    let mut table = vec![0.0; n * n];
    for (i, row) in rows.into_iter().enumerate() {
        let row = row?;
        for j in i + 1..n {
            table[i * n + j] = row[j];
            table[j * n + i] = row[j];
        }
    }
    // curves are exact to rounding; the torus solver is not exact
    let intrinsic = !matches!(o.model, Model::Torus(_));
    FiniteMetricSpace::new(cloud, table, intrinsic)
}

/// Sample plus its oracle intrinsic distance table.
pub fn exact_metric_space(shape: &ShapeSpec, n: usize, seed: u64) -> Result<FiniteMetricSpace> {
    let o = oracle(shape)?;
    let (cloud, params) = sample_from_oracle(&o, n, seed)?;
    oracle_table(&o, cloud, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist;
    use proptest::prelude::*;

    fn all_shapes() -> Vec<ShapeSpec> {
        vec![
            ShapeSpec::Circle { r: 2.0 },
            ShapeSpec::Sphere { d: 2, r: 1.0 },
            ShapeSpec::Sphere { d: 3, r: 0.5 },
            ShapeSpec::Ellipse { a: 2.0, b: 1.0 },
            ShapeSpec::Torus { rc: 3.0, r: 1.0 },
            ShapeSpec::Wedge { alpha: PI / 2.0, arm: 1.0 },
            ShapeSpec::TurnWidget { alpha: PI / 6.0, r: 1.0 },
            ShapeSpec::bumped_cylinder(1.0, 1.0, 0.1, 2, 1),
            ShapeSpec::bumped_cylinder(1.0, 1.0, 0.1, 2, 2),
            ShapeSpec::default_dumbbell(),
        ]
    }

    #[test]
    fn deterministic_and_bitwise_reproducible() {
        for s in all_shapes() {
            let a = sample(&s, 4, 11).unwrap();
            let b = sample(&s, 4, 11).unwrap();
            assert_eq!(a.as_flat(), b.as_flat());
            let c = sample(&s, 4, 12).unwrap();
            assert_ne!(a.as_flat(), c.as_flat());
        }
    }

    #[test]
    fn points_lie_on_shapes() {
        let n = 500;
        let c = sample(&ShapeSpec::Circle { r: 2.0 }, n, 1).unwrap();
        for p in c.iter() {
            assert!((norm(p) - 2.0).abs() < 1e-12);
        }
        let s = sample(&ShapeSpec::Sphere { d: 3, r: 0.5 }, n, 1).unwrap();
        for p in s.iter() {
            assert!((norm(p) - 0.5).abs() < 1e-12);
        }
        let e = sample(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, n, 1).unwrap();
        for p in e.iter() {
            assert!((p[0] * p[0] / 4.0 + p[1] * p[1] - 1.0).abs() < 1e-12);
        }
        let t = sample(&ShapeSpec::Torus { rc: 3.0, r: 1.0 }, n, 1).unwrap();
        for p in t.iter() {
            let rho = (p[0] * p[0] + p[1] * p[1]).sqrt();
            assert!(((rho - 3.0).powi(2) + p[2] * p[2] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_mean_is_centred() {
        let n = 20_000;
        let s = sample(&ShapeSpec::Sphere { d: 2, r: 1.0 }, n, 5).unwrap();
        for k in 0..3 {
            let m: f64 = s.iter().map(|p| p[k]).sum::<f64>() / n as f64;
            assert!(m.abs() < 4.0 / (n as f64).sqrt(), "coordinate {k}: {m}");
        }
    }

    #[test]
    fn torus_band_density_ratio() {
        let n = 100_000;
        let (_, params) = sample_with_params(&ShapeSpec::Torus { rc: 3.0, r: 1.0 }, n, 3).unwrap();
        let band = 0.2;
        let inner = params.iter().filter(|p| (p[0] - PI).abs() < band).count() as f64;
        let outer = params
            .iter()
            .filter(|p| p[0] < band || p[0] > TAU - band)
            .count() as f64;
        // band averages of the area element, exact for cos over a symmetric window
        let w = band.sin() / band;
        let expected = (3.0 - w) / (3.0 + w);
        assert!((inner / outer / expected - 1.0).abs() < 0.1, "{}", inner / outer);
        assert!((expected - 0.5).abs() < 0.01);
    }

    #[test]
    fn closed_form_oracles() {
        let o = oracle(&ShapeSpec::Circle { r: 2.0 }).unwrap();
        assert_eq!(o.reach, 2.0);
        assert!((o.geodesic(&[0.0], &[1.0]).unwrap() - 2.0).abs() < 1e-15);
        let o = oracle(&ShapeSpec::Torus { rc: 3.0, r: 1.0 }).unwrap();
        assert_eq!(o.reach, 1.0);
        let o = oracle(&ShapeSpec::Wedge { alpha: PI / 2.0, arm: 1.0 }).unwrap();
        assert_eq!(o.mu_reach(0.8), Some(0.0));
        assert_eq!(o.mu_reach(0.7), Some(f64::INFINITY));
        assert_eq!(o.reach, 0.0);
        let o = oracle(&ShapeSpec::Ellipse { a: 2.0, b: 1.0 }).unwrap();
        assert_eq!(o.r_ell, 0.5);
        assert!(oracle(&ShapeSpec::Circle { r: 1.0 }).unwrap().mu_reach(0.5).is_none());
    }

    #[test]
    fn reach_below_wfs_and_diameter_bound() {
        for s in all_shapes() {
            let o = oracle(&s).unwrap();
            assert!(o.reach <= o.wfs, "{s:?}");
            if let Ok(params) = o.model_params(3) {
                let space = match exact_metric_space(&s, 40, 2) {
                    Ok(sp) => sp,
                    Err(_) => continue,
                };
                let diam = space.table().iter().cloned().fold(0.0, f64::max);
                assert!(diam <= crate::geometry::d_max_bound(&params), "{s:?}");
            }
        }
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(ShapeSpec::Torus { rc: 1.0, r: 1.0 }.validate().is_err());
        assert!(ShapeSpec::Wedge { alpha: PI, arm: 1.0 }.validate().is_err());
        assert!(ShapeSpec::Circle { r: -1.0 }.validate().is_err());
        assert!(ShapeSpec::bumped_cylinder(1.0, 0.05, 0.1, 2, 1).validate().is_err());
        assert!(ShapeSpec::parse("torus", "rc=3,r=1").is_ok());
        assert!(ShapeSpec::parse("hexagon", "").is_err());
        assert!(ShapeSpec::parse("circle", "r").is_err());
    }

    #[test]
    fn tangents_are_orthonormal() {
        for s in all_shapes() {
            let o = oracle(&s).unwrap();
            let (_, params) = sample_from_oracle(&o, 5, 9).unwrap();
            for p in &params {
                let t = o.tangent(p);
                assert_eq!(t.len(), s.intrinsic_dim());
                for (a, u) in t.iter().enumerate() {
                    for (b, v) in t.iter().enumerate() {
                        let want = if a == b { 1.0 } else { 0.0 };
                        assert!((dot(u, v) - want).abs() < 1e-10, "{s:?}");
                    }
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn geodesic_dominates_chord(seed in 0u64..1000, idx in 0usize..8) {
            let shapes: Vec<ShapeSpec> = all_shapes()
                .into_iter()
                .filter(|s| !matches!(s, ShapeSpec::BumpedCylinder { d: 2, .. } | ShapeSpec::Torus { .. }))
                .collect();
            let s = &shapes[idx % shapes.len()];
            let o = oracle(s).unwrap();
            let (cloud, params) = sample_from_oracle(&o, 6, seed).unwrap();
            for i in 0..6 {
                for j in 0..6 {
                    let g = o.geodesic(&params[i], &params[j]).unwrap();
                    prop_assert!(g >= dist(cloud.point(i), cloud.point(j)) * (1.0 - 1e-12) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn torus_geodesic_dominates_chord() {
        let o = oracle(&ShapeSpec::Torus { rc: 3.0, r: 1.0 }).unwrap();
        let (cloud, params) = sample_from_oracle(&o, 8, 4).unwrap();
        for i in 0..8 {
            for j in i + 1..8 {
                let g = o.geodesic(&params[i], &params[j]).unwrap();
                assert!(g >= dist(cloud.point(i), cloud.point(j)) - 1e-12);
            }
        }
    }
}
