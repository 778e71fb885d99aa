//! Spherical distortion radius of finite metric spaces.
//!
//! For a pair at chord `c` and intrinsic distance `g`, the radii `r` with
//! `g <= 2r asin(c / 2r)` form an interval `(0, r_pair]`, and radii up to
//! `delta / 2` constrain nothing. The radius at scale `delta` is therefore the
//! smallest `r_pair` over `delta`-separated pairs, floored at `delta / 2`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{dist, spherical_from_chord, FiniteMetricSpace, PointCloud};
use crate::rng::seeded;

/// Beyond this `phi_inverse` reports `+inf`.
pub const PHI_INV_CLAMP: f64 = 1e9;

/// `u asin(1/u)`, decreasing from `pi/2` at `u = 1` to `1` at infinity.
pub fn phi(u: f64) -> Result<f64> {
    if !(u >= 1.0) {
        return Err(Error::invalid(format!("phi needs u >= 1, got {u}")));
    }
    Ok(1.0 + phi_excess(u))
}

/// `phi(u) - 1`, accurate for large `u`.
pub fn phi_excess(u: f64) -> f64 {
    if u.is_infinite() {
        return 0.0;
    }
    let x = 1.0 / u;
    if x < 1e-2 {
        // asin(x)/x - 1 series; next term is below 1e-16 relative here
        let x2 = x * x;
        x2 * (1.0 / 6.0 + x2 * (3.0 / 40.0 + x2 * (5.0 / 112.0 + x2 * (35.0 / 1152.0))))
    } else {
        x.min(1.0).asin() / x - 1.0
    }
}

/// Solves `phi(u) = 1 + excess` by bisection.
///
/// Returns the end of the final bracket where `phi >= 1 + excess`, so the
/// answer never overshoots the feasible side.
pub fn phi_inverse_excess(excess: f64) -> Result<f64> {
    let top = FRAC_PI_2 - 1.0;
    if !(excess > 0.0 && excess <= top) {
        return Err(Error::invalid(format!(
            "phi_inverse needs c in (1, pi/2], got c - 1 = {excess}"
        )));
    }
    if excess == top {
        return Ok(1.0);
    }
    let mut lo = 1.0;
    let mut hi = (2.0f64).max(2.0 / excess);
    if hi > PHI_INV_CLAMP {
        if phi_excess(PHI_INV_CLAMP) > excess {
            return Ok(f64::INFINITY);
        }
        hi = PHI_INV_CLAMP;
    }
    while hi - lo > 1e-12 && hi - lo > 4.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        if phi_excess(mid) >= excess {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

pub fn phi_inverse(c: f64) -> Result<f64> {
    phi_inverse_excess(c - 1.0)
}

/// Largest radius `r` with `geo <= spherical distance at radius r`.
pub fn pair_radius(chord: f64, geo: f64) -> Result<f64> {
    if !(chord > 0.0) || geo.is_nan() {
        return Err(Error::invalid("pair radius needs a positive chord"));
    }
    if geo < chord {
        return Err(Error::invalid(format!(
            "distance {geo} below chord {chord}: table is not intrinsic"
        )));
    }
    Ok(pair_radius_unchecked(chord, geo))
}

fn pair_radius_unchecked(chord: f64, geo: f64) -> f64 {
    if geo <= chord {
        f64::INFINITY
    } else if geo >= FRAC_PI_2 * chord {
        chord / 2.0
    } else {
        let excess = (geo - chord) / chord;
        // excess is strictly inside (0, pi/2 - 1) here
        chord / 2.0 * phi_inverse_excess(excess).unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct PairRadius {
    pub i: usize,
    pub j: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SdrResult {
    pub value: f64,
    pub floor: f64,
    pub critical_pair: Option<(usize, usize)>,
    /// Filled only when requested; every `delta`-separated pair.
    pub pair_radii: Vec<PairRadius>,
}

#[derive(Debug, Clone, Copy)]
struct Best {
    r: f64,
    pair: Option<(usize, usize)>,
}

impl Best {
    const NONE: Best = Best {
        r: f64::INFINITY,
        pair: None,
    };

    fn better(self, other: Best) -> Best {
        match (self.pair, other.pair) {
            (_, None) => self,
            (None, _) => other,
            (Some(a), Some(b)) => {
                if other.r < self.r || (other.r == self.r && b < a) {
                    other
                } else {
                    self
                }
            }
        }
    }
}

/// Scans pairs `(i, j > i)` of one row, pruning pairs that cannot beat `bound`.
fn scan_row(
    cloud: &PointCloud,
    i: usize,
    row: &[f64],
    delta: f64,
    bound: f64,
    dump: Option<&mut Vec<PairRadius>>,
) -> Result<Best> {
    let mut best = Best::NONE;
    let mut dump = dump;
    let p = cloud.point(i);
    for (j, &geo) in row.iter().enumerate().skip(i + 1) {
        let chord = dist(p, cloud.point(j));
        if chord < delta {
            continue;
        }
        if geo < chord * (1.0 - 1e-12) {
            return Err(Error::invalid(format!(
                "pair ({i},{j}) has distance {geo} below its chord {chord}"
            )));
        }
        // the margin keeps pruning away from pairs whose computed radius
        // could still round below the current best
        let cut = best.r.min(bound) * (1.0 + 1e-9);
        if dump.is_none() && (chord >= 2.0 * cut || geo <= spherical_from_chord(cut, chord)) {
            continue;
        }
        let r = pair_radius_unchecked(chord, geo);
        if let Some(d) = dump.as_deref_mut() {
            d.push(PairRadius { i, j, radius: r });
        }
        if r.is_finite() {
            best = best.better(Best {
                r,
                pair: Some((i, j)),
            });
        }
    }
    Ok(best)
}

fn finish(best: Best, delta: f64, pair_radii: Vec<PairRadius>) -> SdrResult {
    let floor = delta / 2.0;
    SdrResult {
        value: if best.r.is_finite() { best.r.max(floor) } else { f64::INFINITY },
        floor,
        critical_pair: best.pair,
        pair_radii,
    }
}

/// Spherical distortion radius at scale `delta`.
///
/// `dump` keeps the radius of every `delta`-separated pair (disables pruning).
pub fn sdr_delta(space: &FiniteMetricSpace, delta: f64, dump: bool) -> Result<SdrResult> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let n = space.len();
    let cloud = space.cloud();
    let rows: Vec<(Best, Vec<PairRadius>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row = &space.table()[i * n..(i + 1) * n];
            let mut d = Vec::new();
            let b = scan_row(cloud, i, row, delta, f64::INFINITY, dump.then_some(&mut d))?;
            Ok((b, d))
        })
        .collect::<Result<_>>()?;
    let mut best = Best::NONE;
    let mut radii = Vec::new();
    for (b, d) in rows {
        best = best.better(b);
        radii.extend(d);
    }
    Ok(finish(best, delta, radii))
}

/// Same reduction over rows produced on demand, e.g. by truncated Dijkstra.
///
/// `row(i, cutoff)` must return exact distances from `i` for every entry at
/// most `cutoff` and anything above `cutoff` otherwise. A few probe rows give
/// an upper bound `b`; pairs farther than `pi b` apart then all have radius
/// at least `b`, so the remaining rows only need `cutoff = pi b`.
pub fn sdr_delta_streamed(
    cloud: &PointCloud,
    delta: f64,
    row: impl Fn(usize, f64) -> Vec<f64> + Sync,
) -> Result<SdrResult> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let n = cloud.len();
    if n == 0 {
        return Ok(finish(Best::NONE, delta, Vec::new()));
    }
    let probes: Vec<usize> = (0..8.min(n)).map(|k| k * n / 8.min(n)).collect();
    let mut best = Best::NONE;
    for &i in &probes {
        let r = row(i, f64::INFINITY);
        // probe rows scan every partner, not only j > i
        for (j, &geo) in r.iter().enumerate() {
            if j == i {
                continue;
            }
            let chord = dist(cloud.point(i), cloud.point(j));
            if chord < delta {
                continue;
            }
            if geo < chord * (1.0 - 1e-12) {
                return Err(Error::invalid("table is not intrinsic"));
            }
            let rad = pair_radius_unchecked(chord, geo);
            if rad.is_finite() {
                best = best.better(Best {
                    r: rad,
                    pair: Some((i.min(j), i.max(j))),
                });
            }
        }
    }
    let bound = best.r;
    let cutoff = if bound.is_finite() { PI * bound } else { f64::INFINITY };
    let rows: Vec<Best> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut r = row(i, cutoff);
            for v in r.iter_mut() {
                if *v > cutoff {
                    *v = f64::INFINITY;
                }
            }
            scan_row(cloud, i, &r, delta, bound, None)
        })
        .collect::<Result<_>>()?;
    for b in rows {
        best = best.better(b);
    }
    Ok(finish(best, delta, Vec::new()))
}

/// Closed form for the wedge of two half-lines meeting at angle `alpha`.
pub fn wedge_sdr_oracle(alpha: f64, delta: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < PI) || !(delta > 0.0) {
        return Err(Error::invalid("wedge needs 0 < alpha < pi and delta > 0"));
    }
    if alpha < wedge_critical_angle() {
        return Ok(delta / 2.0);
    }
    let s = (alpha / 2.0).sin();
    // 1/s - 1 without cancellation
    let excess = (1.0 - s) / s;
    if excess >= FRAC_PI_2 - 1.0 {
        return Ok(delta / 2.0);
    }
    Ok(delta / 2.0 * phi_inverse_excess(excess)?)
}

/// `2 asin(2 / pi)`, below which the wedge radius sits on its floor.
pub fn wedge_critical_angle() -> f64 {
    2.0 * (2.0 / PI).asin()
}

/// `384 (1 + pi) r^4 / delta0^4`.
pub fn xi_bound(r: f64, delta0: f64) -> f64 {
    384.0 * (1.0 + PI) * (r / delta0).powi(4)
}

/// Lipschitz constant of the radius in `delta` on `[delta0, delta1]`.
pub fn lip_constant(delta0: f64, delta1: f64, r1: f64, c0: f64, c1: f64) -> Result<f64> {
    if !(delta0 > 0.0 && delta0 < delta1) || !(r1 > 0.0 && c0 > 0.0 && c1 > 0.0) {
        return Err(Error::invalid(
            "lip_constant needs 0 < delta0 < delta1 and positive r1, C0, C1",
        ));
    }
    let q = r1 / delta0;
    Ok(192.0 * q.powi(3) / c0 * (c1 + PI * q))
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct StabilityBudget {
    pub delta0: f64,
    pub delta1: f64,
    pub epsilon: f64,
    pub nu: f64,
    pub upsilon: f64,
    pub xi0: f64,
    pub l0: f64,
    pub zeta0: f64,
    /// `xi0 * upsilon <= 2 sdr_{delta1}`.
    pub applicable: bool,
    /// `zeta0 * upsilon`.
    pub certified_deviation: f64,
}

/// Stability constants at scale `delta` for a Hausdorff budget `epsilon` and
/// distortion budget `nu`.
#[allow(clippy::too_many_arguments)]
pub fn stability_budget(
    delta: f64,
    delta0: f64,
    delta1: f64,
    epsilon: f64,
    nu: f64,
    sdr_at_delta1: f64,
    c0: f64,
    c1: f64,
) -> Result<StabilityBudget> {
    if !(epsilon >= 0.0 && nu >= 0.0 && delta > 0.0) {
        return Err(Error::invalid("budgets must be nonnegative"));
    }
    let upsilon = (delta * nu).max(epsilon);
    let xi0 = xi_bound(2.0 * sdr_at_delta1, delta0);
    let l0 = lip_constant(delta0, delta1, sdr_at_delta1, c0, c1)?;
    let zeta0 = xi0 + 2.0 * l0;
    Ok(StabilityBudget {
        delta0,
        delta1,
        epsilon,
        nu,
        upsilon,
        xi0,
        l0,
        zeta0,
        applicable: xi0 * upsilon <= 2.0 * sdr_at_delta1,
        certified_deviation: zeta0 * upsilon,
    })
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SpreadParams {
    pub delta0: f64,
    pub eps0: f64,
    pub c0: f64,
}

impl SpreadParams {
    /// Constants that hold for any submanifold of reach `rch`.
    pub fn for_manifold(rch: f64) -> Self {
        SpreadParams {
            delta0: rch,
            eps0: rch / 4.0,
            c0: 3.0 / 16.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub checked: usize,
    /// `(i, j, epsilon)` without a witness.
    pub counterexamples: Vec<(usize, usize, f64)>,
    pub worst_ratio: f64,
}

fn has_witness(cloud: &PointCloud, x: usize, y: usize, eps: f64, c0: f64) -> bool {
    let (px, py) = (cloud.point(x), cloud.point(y));
    let dxy = dist(px, py);
    let need = dxy + c0 * eps;
    cloud.iter().any(|a| {
        (dist(a, py) <= eps && dist(px, a) >= need) || (dist(a, px) <= eps && dist(py, a) >= need)
    })
}

/// Finite-sample check of the spreading property on `trials` random pairs
/// (including coincident ones) at `eps0`, `eps0/2` and `eps0/4`.
pub fn check_spreadable(
    cloud: &PointCloud,
    params: &SpreadParams,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    cloud.require_non_empty("cloud")?;
    let n = cloud.len();
    let mut rng = seeded(seed);
    let mut close = Vec::new();
    for i in 0..n {
        for j in i..n {
            if dist(cloud.point(i), cloud.point(j)) <= params.delta0 {
                close.push((i, j));
            }
        }
    }
    let picks: Vec<(usize, usize)> = if close.len() <= trials {
        close
    } else {
        let mut v: Vec<_> = (0..trials)
            .map(|_| close[rng.gen_range(0..close.len())])
            .collect();
        v.shuffle(&mut rng);
        v
    };
    let mut bad = Vec::new();
    let mut checked = 0;
    for &(i, j) in &picks {
        for eps in [params.eps0, params.eps0 / 2.0, params.eps0 / 4.0] {
            checked += 1;
            if !has_witness(cloud, i, j, eps, params.c0) {
                bad.push((i, j, eps));
            }
        }
    }
    Ok(Verdict {
        pass: bad.is_empty(),
        checked,
        counterexamples: bad,
        worst_ratio: f64::NAN,
    })
}

/// Checks `d(x, y) <= c1 |x - y|` on every pair with `|x - y| <= delta1`.
pub fn check_subeuclidean(space: &FiniteMetricSpace, delta1: f64, c1: f64) -> Verdict {
    let n = space.len();
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    let mut checked = 0;
    for i in 0..n {
        for j in i + 1..n {
            let c = space.chord(i, j);
            if c > delta1 || c == 0.0 {
                continue;
            }
            checked += 1;
            let ratio = space.d(i, j) / c;
            worst = worst.max(ratio);
            if ratio > c1 {
                bad.push((i, j, ratio));
            }
        }
    }
    Verdict {
        pass: bad.is_empty(),
        checked,
        counterexamples: bad,
        worst_ratio: worst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn circle_space(n: usize, r: f64, jitter: u64) -> FiniteMetricSpace {
        let mut rng = seeded(jitter);
        let mut ts: Vec<f64> = (0..n)
            .map(|i| 2.0 * PI * (i as f64 + 0.3 * rng.gen::<f64>()) / n as f64)
            .collect();
        ts.sort_by(f64::total_cmp);
        let c = PointCloud::from_flat(2, ts.iter().flat_map(|t| [r * t.cos(), r * t.sin()]).collect())
            .unwrap();
        FiniteMetricSpace::from_fn(c, true, |i, j| {
            let a = (ts[i] - ts[j]).abs();
            r * a.min(2.0 * PI - a)
        })
        .unwrap()
    }

    /// Independent root finder: plain interval halving on `phi`.
    fn halving(c: f64) -> f64 {
        let (mut lo, mut hi) = (1.0f64, 1e6f64);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if m * (1.0 / m).asin() > c {
                lo = m;
            } else {
                hi = m;
            }
        }
        lo
    }

    #[test]
    fn phi_values() {
        assert_relative_eq!(phi(1.0).unwrap(), FRAC_PI_2);
        assert!((phi(1e8).unwrap() - 1.0).abs() < 1e-15);
        assert!(phi(0.5).is_err());
        for u in [1.0, 1.5, 10.0, 99.0, 101.0, 1e4] {
            assert_relative_eq!(phi(u).unwrap(), u * (1.0 / u).asin(), max_relative = 1e-14);
        }
        assert_relative_eq!(phi_excess(200.0), 200.0 * (1.0f64 / 200.0).asin() - 1.0, max_relative = 1e-9);
    }

    #[test]
    fn phi_inverse_values() {
        assert_eq!(phi_inverse(FRAC_PI_2).unwrap(), 1.0);
        for c in [1.1, 1.2, 1.3, 1.5] {
            let u = phi_inverse(c).unwrap();
            assert!((phi(u).unwrap() - c).abs() < 1e-10);
            assert!((u - halving(c)).abs() < 1e-9);
        }
        assert!(phi_inverse(1.0).is_err());
        assert!(phi_inverse(1.6).is_err());
        assert!(phi_inverse_excess(1e-20).unwrap().is_infinite());
        assert!(phi_inverse(1.0 + 1e-10).unwrap() > 1e4);
    }

    #[test]
    fn pair_radius_cases() {
        assert!(pair_radius(1.0, 1.0).unwrap().is_infinite());
        assert_eq!(pair_radius(1.0, FRAC_PI_2).unwrap(), 0.5);
        assert_eq!(pair_radius(1.0, 3.0).unwrap(), 0.5);
        assert!(pair_radius(1.0, 0.9).is_err());
        for r in [0.5, 1.0, 3.0] {
            for theta in [0.1, 1.0, 2.0, 3.0] {
                let chord = 2.0 * r * (theta / 2.0f64).sin();
                assert_relative_eq!(pair_radius(chord, r * theta).unwrap(), r, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn circle_radius_is_exact() {
        let s = circle_space(150, 1.7, 2);
        for delta in [0.05, 0.5, 1.0, 2.0, 3.3] {
            let res = sdr_delta(&s, delta, false).unwrap();
            assert!((res.value - 1.7).abs() < 1e-9, "delta {delta}: {}", res.value);
        }
        assert!(sdr_delta(&s, 3.5, false).unwrap().value.is_infinite());
    }

    #[test]
    fn streamed_matches_table() {
        let s = circle_space(90, 1.0, 5);
        let n = s.len();
        for delta in [0.3, 1.0, 1.9] {
            let a = sdr_delta(&s, delta, false).unwrap();
            let b = sdr_delta_streamed(s.cloud(), delta, |i, _| s.table()[i * n..(i + 1) * n].to_vec())
                .unwrap();
            assert_eq!(a.value, b.value, "delta {delta}: {a:?} vs {b:?}");
        }
    }

    #[test]
    fn rejects_non_intrinsic() {
        let c = PointCloud::from_points(&[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let s = FiniteMetricSpace::new(c, vec![0.0, 0.5, 0.5, 0.0], false).unwrap();
        assert!(sdr_delta(&s, 0.1, false).is_err());
    }

    #[test]
    fn wedge_oracle_cases() {
        let a = wedge_critical_angle();
        assert_relative_eq!(wedge_sdr_oracle(a, 1.0).unwrap(), 0.5, max_relative = 1e-9);
        assert_eq!(wedge_sdr_oracle(PI / 3.0, 0.4).unwrap(), 0.2);
        assert!(wedge_sdr_oracle(PI - 1e-6, 1.0).unwrap() > 1e3);
        let v = wedge_sdr_oracle(2.5, 1.0).unwrap();
        assert_relative_eq!(v, 0.5 * halving(1.0 / (1.25f64).sin()), max_relative = 1e-9);
    }

    #[test]
    fn constants() {
        assert_relative_eq!(xi_bound(1.0, 1.0), 384.0 * (1.0 + PI));
        assert_relative_eq!(xi_bound(2.0, 1.0), 16.0 * xi_bound(1.0, 1.0));
        assert_eq!(xi_bound(0.0, 1.0), 0.0);
        assert_relative_eq!(lip_constant(1.0, 2.0, 1.0, 1.0, 1.0).unwrap(), 192.0 * (1.0 + PI));
        assert_relative_eq!(
            lip_constant(0.3, 0.6, 0.7, 0.5, 2.0).unwrap(),
            lip_constant(3.0, 6.0, 7.0, 0.5, 2.0).unwrap(),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            lip_constant(1.0, 2.0, 1.0, 2.0, 1.0).unwrap(),
            lip_constant(1.0, 2.0, 1.0, 1.0, 1.0).unwrap() / 2.0
        );
        let b = stability_budget(0.75, 0.5, 1.0, 0.0, 0.0, 1.0, 3.0 / 16.0, 2.0).unwrap();
        assert_eq!(b.upsilon, 0.0);
        assert_eq!(b.certified_deviation, 0.0);
        // unit circle arithmetic done by hand: xi(2) at 0.5 and L0 with r1 = 1
        let xi = 384.0 * (1.0 + PI) * 4f64.powi(4);
        let l0 = 192.0 * 8.0 / (3.0 / 16.0) * (2.0 + 2.0 * PI);
        assert_relative_eq!(b.zeta0, xi + 2.0 * l0, max_relative = 1e-12);
    }

    #[test]
    fn assumption_checks() {
        let s = circle_space(400, 1.0, 1);
        let v = check_spreadable(s.cloud(), &SpreadParams::for_manifold(1.0), 200, 3).unwrap();
        assert!(v.pass, "{:?}", &v.counterexamples[..v.counterexamples.len().min(5)]);
        let two = PointCloud::from_points(&[[0.0, 0.0], [5.0, 0.0]]).unwrap();
        assert!(!check_spreadable(&two, &SpreadParams::for_manifold(1.0), 10, 0).unwrap().pass);
        let v = check_subeuclidean(&s, 1.0, 2.0);
        assert!(v.pass && v.worst_ratio < 1.05);
        let e = FiniteMetricSpace::euclidean(s.cloud().clone());
        assert!(check_subeuclidean(&e, 10.0, 1.0).pass);
        let mut t = e.table().to_vec();
        let n = e.len();
        t[1] *= 3.0;
        t[n] *= 3.0;
        let bad = FiniteMetricSpace::new(e.cloud().clone(), t, true).unwrap();
        let v = check_subeuclidean(&bad, 1.0, 2.0);
        assert!(!v.pass);
        assert_eq!((v.counterexamples[0].0, v.counterexamples[0].1), (0, 1));
    }

    fn random_intrinsic(seed: u64) -> FiniteMetricSpace {
        let mut rng = seeded(seed);
        let c = PointCloud::from_flat(2, (0..30).map(|_| rng.gen::<f64>()).collect()).unwrap();
        let c2 = c.clone();
        FiniteMetricSpace::from_fn(c, true, |i, j| {
            dist(c2.point(i), c2.point(j)) * (1.0 + 0.8 * rng.gen::<f64>())
        })
        .unwrap()
    }

    proptest! {
        #[test]
        fn monotone_in_delta(seed in 0u64..5000, a in 0.01f64..1.0, b in 0.01f64..1.0) {
            let s = random_intrinsic(seed);
            let (lo, hi) = (a.min(b), a.max(b));
            let x = sdr_delta(&s, lo, false).unwrap().value;
            let y = sdr_delta(&s, hi, false).unwrap().value;
            prop_assert!(x <= y);
            prop_assert!(x >= lo / 2.0);
        }

        #[test]
        fn feasibility_interval(chord in 0.01f64..5.0, ratio in 1.0001f64..1.57) {
            let geo = chord * ratio;
            let r = pair_radius(chord, geo).unwrap();
            prop_assert!(spherical_from_chord(r, chord) >= geo * (1.0 - 1e-14));
            if r.is_finite() && r > chord / 2.0 {
                prop_assert!(spherical_from_chord(r * (1.0 + 1e-6), chord) < geo);
            }
        }

        #[test]
        fn pruning_is_invisible(seed in 0u64..2000, delta in 0.05f64..0.8) {
            let s = random_intrinsic(seed);
            let a = sdr_delta(&s, delta, false).unwrap();
            let b = sdr_delta(&s, delta, true).unwrap();
            prop_assert_eq!(a.value, b.value);
            prop_assert_eq!(a.critical_pair, b.critical_pair);
            let m = b.pair_radii.iter().map(|p| p.radius).fold(f64::INFINITY, f64::min);
            prop_assert_eq!(if m.is_finite() { m.max(delta / 2.0) } else { m }, b.value);
        }
    }
}
