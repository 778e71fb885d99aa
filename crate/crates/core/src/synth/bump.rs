//! Cylinder section with a small smooth bump at the apex, and the growth of
//! the intrinsic distance across it.
//!
//! Coordinates are `x = (w, h)` with `w` in `R^d`. The base section is the
//! graph `h = sqrt(R^2 - w_1^2)` and the bump adds `c eps^k K(w / eps)` to `h`.

use super::ShapeSpec;
use crate::error::{Error, Result};
use crate::geometry::{dist, dot, norm};
use crate::graph::{graph_geodesic, NeighborhoodGraph};

/// Default `ell / eps`: endpoints sit well outside the bump support.
pub const DEFAULT_ELL_RATIO: f64 = 4.0;

/// `exp(-1 / (1 - |w|^2))` inside the unit ball, 0 outside.
pub fn bump_kernel(w: &[f64]) -> f64 {
    let s = dot(w, w);
    if s >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s)).exp()
    }
}

fn kernel_gradient(w: &[f64]) -> Vec<f64> {
    let s = dot(w, w);
    if s >= 1.0 {
        return vec![0.0; w.len()];
    }
    let q = 1.0 - s;
    let k = (-1.0 / q).exp();
    w.iter().map(|x| -2.0 * x / (q * q) * k).collect()
}

fn params(spec: &ShapeSpec) -> (f64, f64, f64, u32, usize) {
    match *spec {
        ShapeSpec::BumpedCylinder { r, c, eps, k, d, .. } => (r, c, eps, k, d),
        _ => panic!("not a bumped cylinder"),
    }
}

fn amplitude(c: f64, eps: f64, k: u32) -> f64 {
    c * eps.powi(k as i32)
}

fn height(r: f64, c: f64, eps: f64, k: u32, w: &[f64]) -> f64 {
    let base = (r * r - w[0] * w[0]).sqrt();
    if eps == 0.0 {
        return base;
    }
    let s: Vec<f64> = w.iter().map(|x| x / eps).collect();
    base + amplitude(c, eps, k) * bump_kernel(&s)
}

/// Gradient of the height function at `w`.
pub(crate) fn graph_gradient(r: f64, c: f64, eps: f64, k: u32, w: &[f64]) -> Vec<f64> {
    let mut g = vec![0.0; w.len()];
    g[0] = -w[0] / (r * r - w[0] * w[0]).sqrt();
    if eps > 0.0 {
        let s: Vec<f64> = w.iter().map(|x| x / eps).collect();
        let a = amplitude(c, eps, k) / eps;
        for (gi, ki) in g.iter_mut().zip(kernel_gradient(&s)) {
            *gi += a * ki;
        }
    }
    g
}

/// Second derivative of the height along the `w_1` axis.
pub(crate) fn graph_second(r: f64, c: f64, eps: f64, k: u32, w1: f64) -> f64 {
    let base = -r * r / (r * r - w1 * w1).powf(1.5);
    if eps == 0.0 {
        return base;
    }
    let s = w1 / eps;
    if s.abs() >= 1.0 {
        return base;
    }
    let q = 1.0 - s * s;
    let kv = (-1.0 / q).exp();
    let d1 = -2.0 * s / (q * q);
    let dd1 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
    base + amplitude(c, eps, k) / (eps * eps) * kv * (d1 * d1 + dd1)
}

pub(crate) fn embed(spec: &ShapeSpec, w: &[f64]) -> Vec<f64> {
    let (r, c, eps, k, _) = params(spec);
    let mut x = w.to_vec();
    x.push(height(r, c, eps, k, w));
    x
}

pub(crate) fn tangent(spec: &ShapeSpec, w: &[f64]) -> Vec<Vec<f64>> {
    let (r, c, eps, k, d) = params(spec);
    let g = graph_gradient(r, c, eps, k, w);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for a in 0..d {
        let mut v = vec![0.0; d + 1];
        v[a] = 1.0;
        v[d] = g[a];
        for b in &basis {
            let p = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let nv = norm(&v);
        basis.push(v.into_iter().map(|x| x / nv).collect());
    }
    basis
}

/// `x + c eps^k K(w / eps) e_{d+1}` for `x = (w, h)`.
pub fn bumped_cylinder_map(spec: &ShapeSpec, x: &[f64]) -> Result<Vec<f64>> {
    spec.validate()?;
    let (_, c, eps, k, d) = params(spec);
    if x.len() != d + 1 {
        return Err(Error::invalid(format!("expected a point of R^{}", d + 1)));
    }
    let mut y = x.to_vec();
    if eps > 0.0 {
        let s: Vec<f64> = x[..d].iter().map(|v| v / eps).collect();
        y[d] += amplitude(c, eps, k) * bump_kernel(&s);
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BumpGap {
    pub gap: f64,
    pub d0: f64,
    pub deps: f64,
    /// Connectivity radius of the fine graphs.
    pub radius: f64,
}

/// Graph geodesics between `(-ell e_1)` and `(ell e_1)` on fine samples of
/// the base and bumped sections (`d = 1`), using `n_graph` points each.
pub fn bump_geodesic_gap(spec: &ShapeSpec, n_graph: usize) -> Result<BumpGap> {
    spec.validate()?;
    let ShapeSpec::BumpedCylinder { r, ell, c, eps, k, d } = *spec else {
        return Err(Error::invalid("expected a bumped cylinder"));
    };
    if d != 1 {
        return Err(Error::invalid("the distance gap is computed for d = 1 only"));
    }
    if n_graph < 3 {
        return Err(Error::invalid("need at least 3 graph points"));
    }
    let ws: Vec<f64> = (0..n_graph)
        .map(|i| -ell + 2.0 * ell * i as f64 / (n_graph - 1) as f64)
        .collect();
    let base: Vec<[f64; 2]> = ws.iter().map(|&w| [w, height(r, c, 0.0, k, &[w])]).collect();
    let bumped: Vec<[f64; 2]> = ws.iter().map(|&w| [w, height(r, c, eps, k, &[w])]).collect();
    let mean_spacing = base.windows(2).map(|p| dist(&p[0], &p[1])).sum::<f64>() / (n_graph - 1) as f64;
    let radius = 3.0 * mean_spacing;
    if eps > 0.0 && radius > eps / 4.0 {
        return Err(Error::Resolution(format!(
            "graph radius {radius:.3e} exceeds eps/4 = {:.3e}; raise n_graph",
            eps / 4.0
        )));
    }
    let geodesic = |pts: &[[f64; 2]]| -> Result<f64> {
        // the parameter map is 1-Lipschitz from below, so only nearby indices can connect
        let reach = (radius / (2.0 * ell / (n_graph - 1) as f64)).ceil() as usize + 1;
        let rows: Vec<Vec<(usize, f64)>> = (0..pts.len())
            .map(|i| {
                let lo = i.saturating_sub(reach);
                let hi = (i + reach).min(pts.len() - 1);
                (lo..=hi)
                    .filter(|&j| j != i)
                    .filter_map(|j| {
                        let l = dist(&pts[i], &pts[j]);
                        (l <= radius).then_some((j, l))
                    })
                    .collect()
            })
            .collect();
        let g = NeighborhoodGraph::from_rows(radius, rows);
        graph_geodesic(&g, 0, pts.len() - 1)
    };
    let d0 = geodesic(&base)?;
    let deps = if eps == 0.0 { d0 } else { geodesic(&bumped)? };
    Ok(BumpGap {
        gap: deps - d0,
        d0,
        deps,
        radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_is_identity_off_support() {
        let s = ShapeSpec::bumped_cylinder(1.0, 1.0, 0.1, 2, 1);
        let x = [0.1, (1.0f64 - 0.01).sqrt()];
        assert_eq!(bumped_cylinder_map(&s, &x).unwrap(), x.to_vec());
        let top = bumped_cylinder_map(&s, &[0.0, 1.0]).unwrap();
        assert!((top[1] - 1.0 - 0.01 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_differences() {
        let (r, c, eps, k) = (1.0, 1.0, 0.2, 2);
        for &w in &[-0.15, -0.05, 0.0, 0.07, 0.3] {
            let h = 1e-5;
            let fd = (height(r, c, eps, k, &[w + h]) - height(r, c, eps, k, &[w - h])) / (2.0 * h);
            assert!((fd - graph_gradient(r, c, eps, k, &[w])[0]).abs() < 1e-7);
            let fd2 = (height(r, c, eps, k, &[w + h]) - 2.0 * height(r, c, eps, k, &[w])
                + height(r, c, eps, k, &[w - h]))
                / (h * h);
            assert!((fd2 - graph_second(r, c, eps, k, w)).abs() < 1e-3);
        }
    }

    #[test]
    fn scaled_derivatives_stay_bounded() {
        // derivatives of order <= k of the bump scale like eps^{k-j}
        let (c, k) = (1.0, 2);
        for &eps in &[0.2, 0.1, 0.05, 0.025] {
            let bump2 = graph_second(1.0, c, eps, k, 0.0) - graph_second(1.0, c, 0.0, k, 0.0);
            assert!(bump2.abs() < 5.0 * c, "eps {eps}: {bump2}");
        }
    }

    #[test]
    fn gap_is_zero_without_bump_and_positive_with() {
        let flat = ShapeSpec::BumpedCylinder {
            r: 1.0,
            ell: 0.4,
            c: 1.0,
            eps: 0.0,
            k: 2,
            d: 1,
        };
        assert_eq!(bump_geodesic_gap(&flat, 2001).unwrap().gap, 0.0);
        let s = ShapeSpec::bumped_cylinder(1.0, 1.0, 0.1, 2, 1);
        let g = bump_geodesic_gap(&s, 8001).unwrap();
        assert!(g.gap > 0.0);
        // the base geodesic is a circular arc
        assert!((g.d0 - 2.0 * (0.4f64).asin()).abs() < 1e-7, "{}", g.d0);
        assert!(matches!(bump_geodesic_gap(&s, 41), Err(Error::Resolution(_))));
    }
}
