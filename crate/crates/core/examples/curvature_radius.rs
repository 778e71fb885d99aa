//! Minimal curvature radius from local polynomial patches.

use reachkit::localpoly::{estimate_curvature_radius, fit_patch, FitConfig};
use reachkit::synth::{oracle, sample, ShapeSpec};

fn main() -> reachkit::Result<()> {
    for (shape, n, h) in [
        (ShapeSpec::Circle { r: 2.0 }, 1000, 0.3),
        (ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 4000, 0.08),
        (ShapeSpec::Sphere { d: 2, r: 1.0 }, 3000, 0.35),
    ] {
        let o = oracle(&shape)?;
        let cloud = sample(&shape, n, 2)?;
        let cfg = FitConfig::new(o.spec.intrinsic_dim(), 3, h);
        let est = estimate_curvature_radius(&cloud, &cfg, 9)?;
        println!(
            "{shape:?}: r_ell_hat = {:.4}, oracle {:.4}, worst patch at {:?}",
            est.r_ell_hat,
            o.r_ell,
            est.arg.map(|a| a.0)
        );
    }

    let cloud = sample(&ShapeSpec::Circle { r: 1.0 }, 800, 4)?;
    let patch = fit_patch(&cloud, 0, &FitConfig::new(1, 3, 0.25))?;
    println!("\none patch: base {:?}, objective {:.3e}", patch.base_index, patch.objective);
    Ok(())
}
