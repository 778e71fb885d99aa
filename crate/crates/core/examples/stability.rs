//! Distortion between a sample and a slightly moved copy, and the stability
//! budget it implies for the spherical distortion radius.

use rand::Rng;
use reachkit::geometry::hausdorff_distance;
use reachkit::metric::mutual_distortion;
use reachkit::rng::seeded;
use reachkit::sdr::{sdr_delta, stability_budget};
use reachkit::synth::{exact_metric_space, ShapeSpec};
use reachkit::FiniteMetricSpace;

fn main() -> reachkit::Result<()> {
    let k = exact_metric_space(&ShapeSpec::Circle { r: 1.0 }, 150, 9)?;
    let eta = 1e-7;
    let mut rng = seeded(1);
    let moved = k
        .cloud()
        .map_points(2, |p| vec![p[0] + eta * rng.gen_range(-0.7..0.7), p[1] + eta * rng.gen_range(-0.7..0.7)])?;
    let kp = FiniteMetricSpace::from_fn(moved, true, |i, j| k.d(i, j) + 2.0 * eta)?;

    let delta = 0.75;
    let eps = hausdorff_distance(k.cloud(), kp.cloud())?;
    let nu = mutual_distortion(&k, &kp, delta, None)? - 1.0;
    let s1 = sdr_delta(&k, 1.0, false)?.value;
    let b = stability_budget(delta, 0.5, 1.0, eps, nu, s1, 3.0 / 16.0, 2.0)?;
    let a = sdr_delta(&k, delta, false)?.value;
    let c = sdr_delta(&kp, delta, false)?.value;
    println!("hausdorff {eps:.2e}, distortion excess {nu:.2e}");
    println!("zeta0 {:.4e}, applicable {}", b.zeta0, b.applicable);
    println!("|sdr - sdr'| = {:.3e} <= {:.3e}", (a - c).abs(), b.certified_deviation);
    Ok(())
}
