//! Euclidean primitives shared by every estimator: point clouds, set
//! distances, the great-circle comparison metric and model constants.

use std::f64::consts::PI;

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Euclidean norm of `a - b`.
#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_finite(p: &[f64]) -> Result<()> {
    if p.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::invalid("non-finite coordinate"))
    }
}

/// Ordered points of a common ambient dimension, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn new(dim: usize) -> Self {
        PointCloud {
            dim,
            coords: Vec::new(),
        }
    }

    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        if coords.len() % dim != 0 {
            return Err(Error::invalid(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        check_finite(&coords)?;
        Ok(PointCloud { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points
            .first()
            .map(|p| p.as_ref().len())
            .ok_or_else(|| Error::invalid("empty point list"))?;
        let mut cloud = PointCloud::new(dim);
        for p in points {
            cloud.push(p.as_ref())?;
        }
        Ok(cloud)
    }

    pub fn push(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::invalid(format!(
                "point of dimension {} pushed into a cloud of dimension {}",
                p.len(),
                self.dim
            )));
        }
        check_finite(p)?;
        self.coords.extend_from_slice(p);
        Ok(())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    /// Applies `f` to every point, producing a new cloud of dimension `dim`.
    pub fn map_points(&self, dim: usize, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let mut out = PointCloud::new(dim);
        for p in self.iter() {
            out.push(&f(p))?;
        }
        Ok(out)
    }

    /// Largest pairwise Euclidean distance (exhaustive).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(dist(self.point(i), self.point(j)));
            }
        }
        best
    }

    /// Smallest positive pairwise distance, if any pair is separated.
    pub fn min_separation(&self) -> Option<f64> {
        let n = self.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            for j in i + 1..n {
                let d = dist(self.point(i), self.point(j));
                if d > 0.0 && d < best {
                    best = d;
                }
            }
        }
        best.is_finite().then_some(best)
    }

    pub(crate) fn require_non_empty(&self, what: &str) -> Result<()> {
        if self.is_empty() {
            Err(Error::invalid(format!("{what} is empty")))
        } else {
            Ok(())
        }
    }
}

/// Great-circle distance between `x` and `y` seen on a sphere of radius `r`;
/// `+inf` when the chord exceeds the diameter `2r`.
pub fn spherical_distance(r: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_finite(x)?;
    check_finite(y)?;
    if x.len() != y.len() {
        return Err(Error::invalid("dimension mismatch"));
    }
    if !(r > 0.0) {
        return Err(Error::invalid("radius must be positive"));
    }
    Ok(spherical_from_chord(r, dist(x, y)))
}

/// [`spherical_distance`] expressed on the chord length directly.
#[inline]
pub fn spherical_from_chord(r: f64, chord: f64) -> f64 {
    if chord > 2.0 * r {
        f64::INFINITY
    } else if r.is_infinite() {
        chord
    } else {
        // asin saturates at 1 for the antipodal case
        2.0 * r * (chord / (2.0 * r)).min(1.0).asin()
    }
}

/// Distance from `u` to the closest point of `cloud`.
pub fn distance_to_set(u: &[f64], cloud: &PointCloud) -> Result<f64> {
    cloud.require_non_empty("reference set")?;
    if u.len() != cloud.dim() {
        return Err(Error::invalid("dimension mismatch"));
    }
    Ok(cloud
        .iter()
        .map(|x| dist(u, x))
        .fold(f64::INFINITY, f64::min))
}

/// Directed Hausdorff distance `sup_{a in A} d(a, B)`.
pub fn directed_hausdorff(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    a.require_non_empty("first cloud")?;
    b.require_non_empty("second cloud")?;
    if a.dim() != b.dim() {
        return Err(Error::invalid("dimension mismatch"));
    }
    let mut worst = 0.0f64;
    for p in a.iter() {
        worst = worst.max(distance_to_set(p, b)?);
    }
    Ok(worst)
}

pub fn hausdorff_distance(a: &PointCloud, b: &PointCloud) -> Result<f64> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

/// Indices of all points within `tol` of the nearest distance from `u`.
///
/// Numerical stand-in for the multivalued closest-point projection; never
/// empty for a non-empty cloud.
pub fn nearest_points(u: &[f64], cloud: &PointCloud, tol: f64) -> Result<Vec<usize>> {
    if !(tol >= 0.0) {
        return Err(Error::invalid("tolerance must be nonnegative"));
    }
    let d0 = distance_to_set(u, cloud)?;
    Ok(cloud
        .iter()
        .enumerate()
        .filter(|(_, x)| dist(u, x) <= d0 + tol)
        .map(|(i, _)| i)
        .collect())
}

/// Default tie tolerance for [`nearest_points`]: `1e-9` times the scene diameter.
pub fn default_tie_tolerance(scene_diameter: f64) -> f64 {
    1e-9 * scene_diameter
}

/// Volume of the unit ball of dimension `d`, `pi^{d/2} / Gamma(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

/// Regularity model: intrinsic dimension, smoothness, minimal reach,
/// derivative bounds and density bounds.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ModelParams {
    pub d: usize,
    pub k: usize,
    pub rch_min: f64,
    pub l: Vec<f64>,
    pub f_min: f64,
    pub f_max: f64,
}

impl ModelParams {
    /// Checks the model invariants against ambient dimension `ambient`.
    pub fn validate(&self, ambient: usize) -> Result<()> {
        if self.d < 1 || self.d >= ambient {
            return Err(Error::invalid(format!(
                "intrinsic dimension {} must satisfy 1 <= d < D = {ambient}",
                self.d
            )));
        }
        if self.k < 2 {
            return Err(Error::invalid("smoothness order k must be >= 2"));
        }
        if !(self.rch_min > 0.0) {
            return Err(Error::invalid("rch_min must be positive"));
        }
        if self.l.iter().any(|&l| !(l > 0.0)) {
            return Err(Error::invalid("regularity bounds must be positive"));
        }
        if !(self.f_min > 0.0 && self.f_min <= self.f_max) {
            return Err(Error::invalid("density bounds need 0 < f_min <= f_max"));
        }
        Ok(())
    }
}

/// Upper bound on the geodesic diameter of any support in the model,
/// `5^d / (omega_d f_min rch_min^{d-1})`.
pub fn d_max_bound(params: &ModelParams) -> f64 {
    let d = params.d as f64;
    5f64.powf(d) / (unit_ball_volume(params.d) * params.f_min * params.rch_min.powf(d - 1.0))
}

/// Jung's bound `sqrt(D / (2(D+1))) * diam`.
pub fn jung_bound(diam: f64, ambient: usize) -> f64 {
    let dd = ambient as f64;
    (dd / (2.0 * (dd + 1.0))).sqrt() * diam
}

/// Point cloud paired with a symmetric table of (possibly infinite) distances.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    cloud: PointCloud,
    dist: Vec<f64>,
}

impl FiniteMetricSpace {
    /// Builds the space from a row-major `n x n` table.
    ///
    /// With `intrinsic` set, every entry must dominate the chord.
    pub fn new(cloud: PointCloud, dist: Vec<f64>, intrinsic: bool) -> Result<Self> {
        let n = cloud.len();
        if dist.len() != n * n {
            return Err(Error::invalid(format!(
                "distance table has {} entries, expected {}",
                dist.len(),
                n * n
            )));
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(Error::invalid(format!("nonzero diagonal at {i}")));
            }
            for j in i + 1..n {
                let (a, b) = (dist[i * n + j], dist[j * n + i]);
                if a.is_nan() || a < 0.0 || a != b {
                    return Err(Error::invalid(format!(
                        "table entry ({i},{j}) is negative, NaN or asymmetric"
                    )));
                }
                // relative slack absorbs rounding in otherwise exact geodesics
                if intrinsic {
                    let chord = crate::geometry::dist(cloud.point(i), cloud.point(j));
                    if a < chord * (1.0 - 1e-12) {
                        return Err(Error::invalid(format!(
                            "pair ({i},{j}) has distance {a} below its chord {chord}"
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { cloud, dist })
    }

    /// Euclidean metric on the cloud.
    pub fn euclidean(cloud: PointCloud) -> Self {
        let n = cloud.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = crate::geometry::dist(cloud.point(i), cloud.point(j));
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        FiniteMetricSpace { cloud, dist }
    }

    /// Tabulates `f(i, j)` for `i < j` and mirrors it.
    pub fn from_fn(
        cloud: PointCloud,
        intrinsic: bool,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let n = cloud.len();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = f(i, j);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::new(cloud, dist, intrinsic)
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn len(&self) -> usize {
        self.cloud.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.cloud.len() + j]
    }

    pub fn table(&self) -> &[f64] {
        &self.dist
    }

    #[inline]
    pub fn chord(&self, i: usize, j: usize) -> f64 {
        dist(self.cloud.point(i), self.cloud.point(j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(pts: &[[f64; 2]]) -> PointCloud {
        PointCloud::from_points(pts).unwrap()
    }

    #[test]
    fn spherical_examples() {
        let x = [0.0, 0.0];
        assert_relative_eq!(spherical_distance(1.0, &x, &[2.0, 0.0]).unwrap(), PI);
        assert!(spherical_distance(1.0, &x, &[2.0001, 0.0])
            .unwrap()
            .is_infinite());
        let far = spherical_distance(1e6, &x, &[1.0, 0.0]).unwrap();
        assert!((far - 1.0).abs() < 1e-9);
        let half = spherical_from_chord(0.5, 1.0);
        assert_relative_eq!(half, PI / 2.0, max_relative = 1e-12);
        assert!(spherical_distance(1.0, &[f64::NAN, 0.0], &x).is_err());
        assert!(spherical_distance(0.0, &x, &x).is_err());
    }

    #[test]
    fn hausdorff_examples() {
        let a = cloud(&[[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(
            hausdorff_distance(&cloud(&[[0.0, 0.0]]), &cloud(&[[3.0, 4.0]])).unwrap(),
            5.0
        );
        assert_eq!(hausdorff_distance(&a, &cloud(&[[0.0, 0.0]])).unwrap(), 1.0);
        assert!(hausdorff_distance(&a, &PointCloud::new(2)).is_err());
    }

    #[test]
    fn distance_to_set_matches_scan() {
        let k = cloud(&[[0.0, 0.0], [1.0, 0.0]]);
        assert_eq!(distance_to_set(&[2.0, 0.0], &k).unwrap(), 1.0);
        assert_eq!(distance_to_set(&[1.0, 0.0], &k).unwrap(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<[f64; 2]> = (0..100)
            .map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)])
            .collect();
        let k = cloud(&pts);
        let mut best = f64::INFINITY;
        for p in &pts {
            best = best.min((p[0] * p[0] + p[1] * p[1]).sqrt());
        }
        assert_eq!(distance_to_set(&[0.0, 0.0], &k).unwrap(), best);
        assert!(distance_to_set(&[0.0, 0.0], &PointCloud::new(2)).is_err());
    }

    #[test]
    fn nearest_points_ties_and_scan() {
        let k = cloud(&[[-1.0, 0.0], [1.0, 0.0], [0.0, 3.0]]);
        assert_eq!(nearest_points(&[0.0, 0.0], &k, 0.0).unwrap(), vec![0, 1]);
        let k = cloud(&[[0.5, 0.5], [1.0, 0.0], [0.5, 0.5]]);
        assert_eq!(nearest_points(&[0.5, 0.5], &k, 0.0).unwrap(), vec![0, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let pts: Vec<[f64; 2]> = (0..50).map(|_| [rng.gen(), rng.gen()]).collect();
        let k = cloud(&pts);
        for _ in 0..20 {
            let u = [rng.gen(), rng.gen()];
            let mut arg = 0;
            for i in 0..pts.len() {
                if dist(&u, &pts[i]) < dist(&u, &pts[arg]) {
                    arg = i;
                }
            }
            assert_eq!(nearest_points(&u, &k, 0.0).unwrap(), vec![arg]);
        }
    }

    #[test]
    fn ball_volume_and_bounds() {
        assert_relative_eq!(unit_ball_volume(1), 2.0, max_relative = 1e-12);
        assert_relative_eq!(unit_ball_volume(2), PI, max_relative = 1e-12);
        assert_relative_eq!(unit_ball_volume(3), 4.0 * PI / 3.0, max_relative = 1e-12);
        let mut p = ModelParams {
            d: 1,
            k: 2,
            rch_min: 1.0,
            l: vec![1.0],
            f_min: 1.0,
            f_max: 1.0,
        };
        assert_relative_eq!(d_max_bound(&p), 2.5, max_relative = 1e-12);
        p.d = 2;
        assert_relative_eq!(d_max_bound(&p), 25.0 / PI, max_relative = 1e-12);
        let before = d_max_bound(&p);
        p.f_min = 2.0;
        p.f_max = 2.0;
        assert_relative_eq!(d_max_bound(&p), before / 2.0, max_relative = 1e-12);
        assert_relative_eq!(jung_bound(2.0, 1), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            jung_bound(1.0, 1_000_000),
            0.5f64.sqrt(),
            max_relative = 1e-6
        );
        assert_eq!(jung_bound(0.0, 3), 0.0);
    }

    #[test]
    fn params_validation() {
        let p = ModelParams {
            d: 1,
            k: 3,
            rch_min: 1.0,
            l: vec![1.0, 1.0],
            f_min: 0.1,
            f_max: 0.2,
        };
        assert!(p.validate(2).is_ok());
        assert!(p.validate(1).is_err());
        let mut q = p.clone();
        q.f_min = 0.3;
        assert!(q.validate(2).is_err());
    }

    #[test]
    fn metric_space_rejects_bad_tables() {
        let c = cloud(&[[0.0, 0.0], [1.0, 0.0]]);
        assert!(FiniteMetricSpace::new(c.clone(), vec![0.0, 0.5, 0.5, 0.0], true).is_err());
        assert!(FiniteMetricSpace::new(c.clone(), vec![0.0, 0.5, 0.5, 0.0], false).is_ok());
        assert!(FiniteMetricSpace::new(c.clone(), vec![0.0, 1.0, 2.0, 0.0], false).is_err());
        let s = FiniteMetricSpace::new(c, vec![0.0, f64::INFINITY, f64::INFINITY, 0.0], true);
        assert!(s.is_ok());
    }

    fn arb_cloud(n: usize) -> impl Strategy<Value = PointCloud> {
        proptest::collection::vec(-5.0f64..5.0, 2 * n)
            .prop_map(|v| PointCloud::from_flat(2, v).unwrap())
    }

    proptest! {
        #[test]
        fn spherical_monotone_in_radius(
            x in proptest::array::uniform2(-3.0f64..3.0),
            y in proptest::array::uniform2(-3.0f64..3.0),
            s in 1.0f64..50.0,
            t in 1.0f64..50.0,
        ) {
            let c = dist(&x, &y);
            prop_assume!(c > 1e-9);
            let (r1, r2) = (s.min(t) * c / 2.0, s.max(t) * c / 2.0);
            let (a, b) = (spherical_from_chord(r1, c), spherical_from_chord(r2, c));
            prop_assert!(a >= b);
            prop_assert!(b >= c * (1.0 - 1e-15));
        }

        #[test]
        fn hausdorff_triangle(a in arb_cloud(6), b in arb_cloud(5), c in arb_cloud(7)) {
            let ab = hausdorff_distance(&a, &b).unwrap();
            let bc = hausdorff_distance(&b, &c).unwrap();
            let ac = hausdorff_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
            prop_assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
        }

        #[test]
        fn bounds_homogeneous(lambda in 0.1f64..10.0, d in 1usize..4) {
            let p = ModelParams { d, k: 2, rch_min: 1.3, l: vec![1.0], f_min: 0.7, f_max: 0.7 };
            let mut q = p.clone();
            q.rch_min *= lambda;
            q.f_min /= lambda.powi(d as i32);
            q.f_max = q.f_min;
            prop_assert!((d_max_bound(&q) / d_max_bound(&p) / lambda - 1.0).abs() < 1e-10);
            prop_assert!((jung_bound(lambda * 2.0, 3) / jung_bound(2.0, 3) / lambda - 1.0).abs() < 1e-12);
        }
    }
}
