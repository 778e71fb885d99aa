//! Local polynomial patches and the curvature radius they induce.
//!
//! A patch at `X_i` is `v -> X_i + E v + sum_j T_j(v, ..., v)` where `E` is an
//! orthonormal `D x d` frame and `v` lives in plane coordinates. The tensors
//! are Taylor coefficients, so the second fundamental form of a patch is twice
//! the normal part of its quadratic term.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::seq::index::sample;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, norm, ModelParams, PointCloud};
use crate::rng::seeded;
use crate::tensor::{golden_max, monomial_value, monomials, SymTensor};

/// `(C f_max^2 log n / (f_min^3 n))^{1/d}`.
pub fn bandwidth(params: &ModelParams, n: f64, c: f64) -> Result<f64> {
    if !(n >= 2.0) || !(c > 0.0) {
        return Err(Error::invalid("bandwidth needs n >= 2 and C > 0"));
    }
    Ok((c * params.f_max.powi(2) * n.ln() / (params.f_min.powi(3) * n)).powf(1.0 / params.d as f64))
}

/// Default constant for [`bandwidth`] when no other choice is given.
pub const DEFAULT_BANDWIDTH_CONSTANT: f64 = 4.0;

/// Default tensor cap: the largest `t` keeping `t h <= 1/4`.
pub fn default_tensor_cap(h: f64) -> f64 {
    0.25 / h
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FitConfig {
    pub d: usize,
    pub k: usize,
    pub h: f64,
    pub t: f64,
    pub max_iters: usize,
    pub tol: f64,
    /// Extra random restarts on top of the local PCA start.
    pub restarts: usize,
}

impl FitConfig {
    pub fn new(d: usize, k: usize, h: f64) -> Self {
        FitConfig {
            d,
            k,
            h,
            t: default_tensor_cap(h),
            max_iters: 20,
            tol: 1e-10,
            restarts: 0,
        }
    }

    fn validate(&self, ambient: usize) -> Result<()> {
        if self.d < 1 || self.d >= ambient {
            return Err(Error::invalid("need 1 <= d < D"));
        }
        if self.k < 3 {
            return Err(Error::invalid("patches need k >= 3 to carry curvature"));
        }
        if !(self.h > 0.0 && self.t > 0.0) {
            return Err(Error::invalid("h and t must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct LocalPatch {
    pub base_index: usize,
    pub base: Vec<f64>,
    /// `D x d` orthonormal columns spanning the fitted tangent plane.
    pub frame: DMatrix<f64>,
    /// Orders `2..k-1`.
    pub tensors: Vec<SymTensor>,
    pub bandwidth: f64,
    pub tensor_cap: f64,
    pub objective: f64,
    /// Objective after the first tensor solve on the PCA plane.
    pub init_objective: f64,
    pub window: usize,
    pub iterations: usize,
}

impl LocalPatch {
    pub fn d(&self) -> usize {
        self.frame.ncols()
    }

    pub fn ambient(&self) -> usize {
        self.frame.nrows()
    }

    pub fn projector(&self) -> DMatrix<f64> {
        &self.frame * self.frame.transpose()
    }

    fn tensor_sum(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.ambient()];
        for t in &self.tensors {
            for (o, x) in out.iter_mut().zip(t.apply_diag(v)) {
                *o += x;
            }
        }
        out
    }
}

/// Monomial design row for plane coordinates `c`: all degrees `2..k-1`.
fn design_row(c: &[f64], mons: &[Vec<Vec<usize>>]) -> Vec<f64> {
    mons.iter()
        .flat_map(|ms| ms.iter().map(|a| monomial_value(a, c)))
        .collect()
}

struct Window {
    /// Centered neighbors, one per row, `m x D`.
    x: DMatrix<f64>,
}

fn pca_frame(y: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    let cov = y.transpose() * y;
    let eig = SymmetricEigen::new(cov);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let cols: Vec<DVector<f64>> = idx[..d]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    DMatrix::from_columns(&cols)
}

struct Iterate {
    frame: DMatrix<f64>,
    tensors: Vec<SymTensor>,
    objective: f64,
}

fn solve_tensors(w: &Window, frame: &DMatrix<f64>, cfg: &FitConfig, norm_n: f64) -> Result<Iterate> {
    let (m, dd) = (w.x.nrows(), w.x.ncols());
    let d = cfg.d;
    let mons: Vec<Vec<Vec<usize>>> = (2..cfg.k).map(|j| monomials(d, j)).collect();
    let p: usize = mons.iter().map(Vec::len).sum();
    let coords = &w.x * frame; // m x d
    let normal = &w.x - &coords * frame.transpose(); // m x D
    let mut phi = DMatrix::zeros(m, p);
    for r in 0..m {
        let c: Vec<f64> = coords.row(r).iter().copied().collect();
        for (q, v) in design_row(&c, &mons).into_iter().enumerate() {
            phi[(r, q)] = v;
        }
    }
    let svd = phi.clone().svd(true, true);
    let b = svd
        .solve(&normal, 1e-12)
        .map_err(|e| Error::Numeric(format!("least squares failed: {e}")))?; // p x D
    let mut tensors = Vec::new();
    let mut q = 0;
    for (jj, ms) in mons.iter().enumerate() {
        let order = jj + 2;
        let coefs: Vec<Vec<f64>> = (0..ms.len())
            .map(|a| b.row(q + a).iter().copied().collect())
            .collect();
        q += ms.len();
        let mut t = SymTensor::from_monomials(order, d, dd, &coefs);
        let limit = cfg.t.powi(order as i32 - 1);
        let on = t.opnorm();
        if on > limit {
            t.scale(limit / on);
        }
        tensors.push(t);
    }
    let objective = objective(w, frame, &tensors, norm_n);
    Ok(Iterate {
        frame: frame.clone(),
        tensors,
        objective,
    })
}

fn objective(w: &Window, frame: &DMatrix<f64>, tensors: &[SymTensor], norm_n: f64) -> f64 {
    let coords = &w.x * frame;
    let mut total = 0.0;
    for r in 0..w.x.nrows() {
        let c: Vec<f64> = coords.row(r).iter().copied().collect();
        let proj = frame * DVector::from_column_slice(&c);
        let mut res: Vec<f64> = (0..w.x.ncols()).map(|a| w.x[(r, a)] - proj[a]).collect();
        for t in tensors {
            for (o, x) in res.iter_mut().zip(t.apply_diag(&c)) {
                *o -= x;
            }
        }
        total += res.iter().map(|x| x * x).sum::<f64>();
    }
    total / norm_n
}

fn alternate(w: &Window, start: DMatrix<f64>, cfg: &FitConfig, norm_n: f64) -> Result<(Iterate, f64, usize)> {
    let first = solve_tensors(w, &start, cfg, norm_n)?;
    let init = first.objective;
    let mut cur = first;
    let mut best: Option<Iterate> = None;
    let mut iters = 1;
    for _ in 1..cfg.max_iters {
        // residual-corrected points should lie on the linear part
        let coords = &w.x * &cur.frame;
        let mut y = w.x.clone();
        for r in 0..y.nrows() {
            let c: Vec<f64> = coords.row(r).iter().copied().collect();
            for t in &cur.tensors {
                for (a, x) in t.apply_diag(&c).into_iter().enumerate() {
                    y[(r, a)] -= x;
                }
            }
        }
        let next = solve_tensors(w, &pca_frame(&y, cfg.d), cfg, norm_n)?;
        iters += 1;
        let prev = cur.objective;
        let keep_prev = best.as_ref().map_or(true, |b| prev < b.objective);
        if keep_prev {
            best = Some(Iterate {
                frame: cur.frame.clone(),
                tensors: cur.tensors.clone(),
                objective: prev,
            });
        }
        let change = (prev - next.objective).abs() / prev.abs().max(1e-300);
        cur = next;
        if change < cfg.tol {
            break;
        }
    }
    let out = match best {
        Some(b) if b.objective <= cur.objective => b,
        _ => cur,
    };
    Ok((out, init, iters))
}

/// Fits the constrained polynomial patch at sample `i`.
pub fn fit_patch(cloud: &PointCloud, i: usize, cfg: &FitConfig) -> Result<LocalPatch> {
    cfg.validate(cloud.dim())?;
    if i >= cloud.len() {
        return Err(Error::invalid("base index out of range"));
    }
    let xi = cloud.point(i);
    let nb: Vec<usize> = (0..cloud.len())
        .filter(|&p| p != i && dist(cloud.point(p), xi) <= cfg.h)
        .collect();
    let p_mon: usize = (2..cfg.k).map(|j| monomials(cfg.d, j).len()).sum();
    if nb.len() < (cfg.d + 2).max(p_mon) {
        return Err(Error::InsufficientData(format!(
            "{} neighbors within h = {} of point {i}",
            nb.len(),
            cfg.h
        )));
    }
    let dd = cloud.dim();
    let x = DMatrix::from_fn(nb.len(), dd, |r, a| cloud.point(nb[r])[a] - xi[a]);
    let w = Window { x };
    let norm_n = (cloud.len() - 1) as f64;
    let (mut best, init, mut iterations) = alternate(&w, pca_frame(&w.x, cfg.d), cfg, norm_n)?;
    let mut rng = seeded(i as u64);
    for _ in 0..cfg.restarts {
        let take = (nb.len() / 2).max(cfg.d + 1).min(nb.len());
        let rows: Vec<usize> = sample(&mut rng, nb.len(), take).into_vec();
        let sub = DMatrix::from_fn(rows.len(), dd, |r, a| w.x[(rows[r], a)]);
        let (it, _, n_it) = alternate(&w, pca_frame(&sub, cfg.d), cfg, norm_n)?;
        iterations += n_it;
        if it.objective < best.objective {
            best = it;
        }
    }
    Ok(LocalPatch {
        base_index: i,
        base: xi.to_vec(),
        frame: best.frame,
        tensors: best.tensors,
        bandwidth: cfg.h,
        tensor_cap: cfg.t,
        objective: best.objective,
        init_objective: init,
        window: nb.len(),
        iterations,
    })
}

/// `X_i + E v + sum_j T_j(v^j)` for plane coordinates `v`.
pub fn patch_eval(patch: &LocalPatch, v: &[f64]) -> Result<Vec<f64>> {
    if v.len() != patch.d() {
        return Err(Error::invalid("v must have the patch's intrinsic dimension"));
    }
    if norm(v) > 7.0 * patch.bandwidth / 8.0 {
        return Err(Error::Domain(format!(
            "|v| = {} exceeds 7h/8 = {}",
            norm(v),
            7.0 * patch.bandwidth / 8.0
        )));
    }
    let lin = &patch.frame * DVector::from_column_slice(v);
    let ts = patch.tensor_sum(v);
    Ok((0..patch.ambient())
        .map(|a| patch.base[a] + lin[a] + ts[a])
        .collect())
}

/// Tangent plane and second fundamental form of a patch at offset `v`.
#[derive(Debug, Clone)]
pub struct RecenteredFrame {
    pub v: Vec<f64>,
    /// Differential of the patch at `v`, `D x d`.
    pub j: DMatrix<f64>,
    /// Orthonormal basis of the image of `j`, `D x d`.
    pub tangent: DMatrix<f64>,
    /// Quadratic Taylor term in the recentered chart, on tangent coordinates.
    pub t2: SymTensor,
    /// Second fundamental form on tangent coordinates.
    pub sff: SymTensor,
}

impl RecenteredFrame {
    pub fn projector(&self) -> DMatrix<f64> {
        &self.tangent * self.tangent.transpose()
    }
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

pub fn recentered_frame(patch: &LocalPatch, v: &[f64]) -> Result<RecenteredFrame> {
    let d = patch.d();
    let dd = patch.ambient();
    if v.len() != d {
        return Err(Error::invalid("v must have the patch's intrinsic dimension"));
    }
    let h = patch.bandwidth;
    if norm(v) > h / 4.0 * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("|v| = {} exceeds h/4", norm(v))));
    }
    if patch.tensor_cap * h > 0.25 * (1.0 + 1e-12) {
        return Err(Error::Domain(format!(
            "t h = {} exceeds 1/4",
            patch.tensor_cap * h
        )));
    }
    let unit = |a: usize| {
        let mut e = vec![0.0; d];
        e[a] = 1.0;
        e
    };
    // T_j(v^{r}, rest...)
    let apply_with = |t: &SymTensor, rest: &[&[f64]]| {
        let mut args: Vec<&[f64]> = vec![v; t.order() - rest.len()];
        args.extend_from_slice(rest);
        t.apply(&args)
    };
    let mut jm = patch.frame.clone();
    for a in 0..d {
        let e = unit(a);
        for t in &patch.tensors {
            let col = apply_with(t, &[&e]);
            for r in 0..dd {
                jm[(r, a)] += t.order() as f64 * col[r];
            }
        }
    }
    let svd = jm.clone().svd(true, false);
    let smin = svd.singular_values.iter().copied().fold(f64::INFINITY, f64::min);
    if !(smin > 1e-8) {
        return Err(Error::IllConditioned(format!(
            "patch differential has singular value {smin}"
        )));
    }
    let u = svd.u.ok_or_else(|| Error::Numeric("svd without U".into()))?;
    let tangent = u.columns(0, d).into_owned();
    // preimages of the tangent basis
    let jtj = jm.transpose() * &jm;
    let jtj_inv = jtj
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("J^T J not invertible".into()))?;
    let pre = &jtj_inv * jm.transpose() * &tangent; // d x d, column a = J^+ f_a
    let pre_cols: Vec<Vec<f64>> = (0..d).map(|a| pre.column(a).iter().copied().collect()).collect();
    let mut t2 = SymTensor::zeros(2, d, dd);
    for a in 0..d {
        for b in 0..d {
            let mut acc = vec![0.0; dd];
            for t in &patch.tensors {
                let c = binom(t.order(), 2);
                let val = apply_with(t, &[&pre_cols[a], &pre_cols[b]]);
                for r in 0..dd {
                    acc[r] += c * val[r];
                }
            }
            t2.column_mut(&[a, b]).copy_from_slice(&acc);
        }
    }
    let normal = DMatrix::identity(dd, dd) - &tangent * tangent.transpose();
    let m: Vec<f64> = (0..dd)
        .flat_map(|r| (0..dd).map(move |c| (r, c)))
        .map(|(r, c)| 2.0 * normal[(r, c)])
        .collect();
    let sff = t2.map_output(&m, dd);
    Ok(RecenteredFrame {
        v: v.to_vec(),
        j: jm,
        tangent,
        t2,
        sff,
    })
}

/// `max_{|u| = 1} |sff(u, u)|`.
pub fn tensor_opnorm(sff: &SymTensor) -> f64 {
    sff.opnorm()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PatchMinimum {
    pub index: usize,
    pub radius: f64,
    pub v: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct CurvatureEstimate {
    pub r_ell_hat: f64,
    pub flat: bool,
    pub arg: Option<(usize, Vec<f64>)>,
    pub per_patch_minima: Vec<PatchMinimum>,
}

fn grid_points(d: usize, g: usize, radius: f64) -> Vec<Vec<f64>> {
    let coord = |s: usize| -radius + 2.0 * radius * s as f64 / (g - 1) as f64;
    let mut out = Vec::new();
    let total = g.pow(d as u32);
    for mut idx in 0..total {
        let mut v = Vec::with_capacity(d);
        for _ in 0..d {
            v.push(coord(idx % g));
            idx /= g;
        }
        if norm(&v) <= radius * (1.0 + 1e-12) {
            out.push(v);
        }
    }
    out
}

fn curvature_at(patch: &LocalPatch, v: &[f64]) -> Result<f64> {
    Ok(tensor_opnorm(&recentered_frame(patch, v)?.sff))
}

/// Largest curvature of one patch over the ball of radius `h/4`.
fn patch_max_curvature(patch: &LocalPatch, g: usize) -> Result<(f64, Vec<f64>)> {
    let d = patch.d();
    let rad = patch.bandwidth / 4.0;
    let mut best = (f64::NEG_INFINITY, vec![0.0; d]);
    for v in grid_points(d, g, rad) {
        let c = curvature_at(patch, &v)?;
        if c > best.0 {
            best = (c, v);
        }
    }
    // golden refinement along each axis around the grid argmax
    let step = 2.0 * rad / (g - 1) as f64;
    let mut v = best.1.clone();
    let mut val = best.0;
    for a in 0..d {
        let f = |x: f64| {
            let mut w = v.clone();
            w[a] = x;
            if norm(&w) > rad {
                return f64::NEG_INFINITY;
            }
            curvature_at(patch, &w).unwrap_or(f64::NEG_INFINITY)
        };
        let (x, fx) = golden_max(f, v[a] - step, v[a] + step, step * 1e-6);
        if fx > val {
            val = fx;
            v[a] = x;
        }
    }
    Ok((val, v))
}

/// `1 / max` curvature over all patches; `+inf` with `flat` set when every
/// second fundamental form vanishes.
pub fn min_curvature_radius(patches: &[LocalPatch], g: usize) -> Result<CurvatureEstimate> {
    if patches.is_empty() {
        return Err(Error::invalid("no patches"));
    }
    if g < 5 {
        return Err(Error::invalid("grid needs at least 5 points per axis"));
    }
    let maxima: Vec<(f64, Vec<f64>)> = patches
        .par_iter()
        .map(|p| patch_max_curvature(p, g))
        .collect::<Result<_>>()?;
    let mut per = Vec::with_capacity(patches.len());
    let mut best: Option<(f64, usize)> = None;
    for (k, ((c, v), p)) in maxima.into_iter().zip(patches).enumerate() {
        let radius = if c > 0.0 { 1.0 / c } else { f64::INFINITY };
        if c > 0.0 && best.map_or(true, |(b, _)| c > b) {
            best = Some((c, k));
        }
        per.push(PatchMinimum {
            index: p.base_index,
            radius,
            v,
            objective: p.objective,
        });
    }
    Ok(match best {
        Some((c, k)) => CurvatureEstimate {
            r_ell_hat: 1.0 / c,
            flat: false,
            arg: Some((per[k].index, per[k].v.clone())),
            per_patch_minima: per,
        },
        None => CurvatureEstimate {
            r_ell_hat: f64::INFINITY,
            flat: true,
            arg: None,
            per_patch_minima: per,
        },
    })
}

/// Fits a patch at every sample point (points with too few neighbors are
/// skipped) and returns the curvature radius estimate.
pub fn estimate_curvature_radius(cloud: &PointCloud, cfg: &FitConfig, g: usize) -> Result<CurvatureEstimate> {
    let patches = fit_all(cloud, cfg)?;
    min_curvature_radius(&patches, g)
}

pub fn fit_all(cloud: &PointCloud, cfg: &FitConfig) -> Result<Vec<LocalPatch>> {
    cfg.validate(cloud.dim())?;
    let fits: Vec<Result<LocalPatch>> = (0..cloud.len())
        .into_par_iter()
        .map(|i| fit_patch(cloud, i, cfg))
        .collect();
    let mut patches = Vec::new();
    for f in fits {
        match f {
            Ok(p) => patches.push(p),
            Err(Error::InsufficientData(_)) => {}
            Err(e) => return Err(e),
        }
    }
    if patches.is_empty() {
        return Err(Error::InsufficientData(
            "no sample point has enough neighbors within h".into(),
        ));
    }
    Ok(patches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::Rng;
    use std::f64::consts::PI;

    fn circle(n: usize, r: f64, seed: u64) -> PointCloud {
        let mut rng = seeded(seed);
        let v = (0..n)
            .flat_map(|_| {
                let t = rng.gen_range(0.0..2.0 * PI);
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        PointCloud::from_flat(2, v).unwrap()
    }

    #[test]
    fn bandwidth_formula() {
        let p = ModelParams {
            d: 1,
            k: 3,
            rch_min: 1.0,
            l: vec![1.0],
            f_min: 1.0,
            f_max: 1.0,
        };
        let e = std::f64::consts::E;
        assert_relative_eq!(bandwidth(&p, e, 1.0).unwrap(), 1.0 / e, max_relative = 1e-12);
        assert!(bandwidth(&p, 100.0, 1.0).unwrap() < bandwidth(&p, 50.0, 1.0).unwrap());
        let mut q = p.clone();
        q.f_min = 0.5;
        q.f_max = 0.5;
        assert_relative_eq!(
            bandwidth(&q, 77.0, 2.0).unwrap(),
            2.0 * bandwidth(&p, 77.0, 2.0).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn flat_data_gives_zero_tensors() {
        let mut rng = seeded(1);
        let v: Vec<f64> = (0..200)
            .flat_map(|_| {
                let (a, b): (f64, f64) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                [a, b, 0.5 * a - 0.2 * b]
            })
            .collect();
        let c = PointCloud::from_flat(3, v).unwrap();
        let p = fit_patch(&c, 0, &FitConfig::new(2, 3, 0.5)).unwrap();
        assert!(p.tensors[0].opnorm() <= 1e-6);
        let n = [0.5, -0.2, -1.0];
        let nn = norm(&n);
        let proj = p.projector();
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { 1.0 } else { 0.0 } - n[a] * n[b] / nn / nn;
                assert!((proj[(a, b)] - expect).abs() < 1e-6);
            }
        }
        let est = estimate_curvature_radius(&c, &FitConfig::new(2, 3, 0.5), 5).unwrap();
        assert!(est.r_ell_hat > 1e5 || est.flat);
    }

    #[test]
    fn circle_patch_quadratic_term() {
        let r = 2.0;
        let c = circle(2000, r, 3);
        let cfg = FitConfig::new(1, 3, 0.4);
        let p = fit_patch(&c, 0, &cfg).unwrap();
        assert!(p.window >= 30);
        // Taylor coefficient of a circle is 1/(2R)
        assert_relative_eq!(p.tensors[0].opnorm(), 1.0 / (2.0 * r), max_relative = 0.05);
        assert!(p.objective <= p.init_objective);
        for v in [-0.1, 0.0, 0.05, 0.1] {
            let f = recentered_frame(&p, &[v]).unwrap();
            assert_relative_eq!(tensor_opnorm(&f.sff), 1.0 / r, max_relative = 0.05);
            // normal output
            let s = f.sff.apply_diag(&[1.0]);
            let along = f.tangent.column(0).iter().zip(&s).map(|(a, b)| a * b).sum::<f64>();
            assert!(along.abs() <= 1e-8 * norm(&s));
        }
    }

    #[test]
    fn patch_eval_cases() {
        let c = circle(500, 1.0, 4);
        let p = fit_patch(&c, 3, &FitConfig::new(1, 3, 0.3)).unwrap();
        assert_eq!(patch_eval(&p, &[0.0]).unwrap(), c.point(3).to_vec());
        assert!(patch_eval(&p, &[0.3]).is_err());
        let mut z = p.clone();
        z.tensors[0].scale(0.0);
        let e = patch_eval(&z, &[0.1]).unwrap();
        for a in 0..2 {
            assert_relative_eq!(e[a], c.point(3)[a] + 0.1 * z.frame[(a, 0)], epsilon = 1e-15);
        }
    }

    #[test]
    fn recentered_at_zero_and_zero_tensors() {
        let c = circle(500, 1.0, 5);
        let p = fit_patch(&c, 0, &FitConfig::new(1, 3, 0.3)).unwrap();
        let f = recentered_frame(&p, &[0.0]).unwrap();
        for a in 0..2 {
            assert_relative_eq!(f.j[(a, 0)], p.frame[(a, 0)], epsilon = 1e-15);
        }
        let e = f.tangent.column(0);
        let tn: Vec<f64> = p.tensors[0].apply_diag(&[1.0]);
        let sign = e.dot(&p.frame.column(0));
        let _ = sign;
        let dotn = e.iter().zip(&tn).map(|(a, b)| a * b).sum::<f64>();
        let expect: Vec<f64> = (0..2).map(|r| 2.0 * (tn[r] - e[r] * dotn)).collect();
        let got = f.sff.apply_diag(&[1.0]);
        for r in 0..2 {
            assert_relative_eq!(got[r], expect[r], epsilon = 1e-12);
        }
        let mut z = p.clone();
        z.tensors[0].scale(0.0);
        assert!(recentered_frame(&z, &[0.05]).unwrap().sff.is_zero());
        assert!(recentered_frame(&p, &[0.1]).is_err());
        let mut big = p.clone();
        big.tensor_cap = 10.0;
        assert!(recentered_frame(&big, &[0.0]).is_err());
    }

    #[test]
    fn circle_radius_estimate() {
        let c = circle(1000, 2.0, 6);
        let est = estimate_curvature_radius(&c, &FitConfig::new(1, 3, 0.3), 9).unwrap();
        assert!((est.r_ell_hat - 2.0).abs() < 0.2, "{}", est.r_ell_hat);
    }
}
