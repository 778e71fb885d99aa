//! Reach estimates and which side of the minimum attains them: curvature for
//! the ellipse, the neck of the dumbbell.

use reachkit::reach::{oracle_reach_federer, reach_estimate, ReachConfig};
use reachkit::synth::{oracle, sample_from_oracle, ShapeSpec};

fn main() -> reachkit::Result<()> {
    for (shape, delta) in [
        (ShapeSpec::Ellipse { a: 2.0, b: 1.0 }, 0.25),
        (ShapeSpec::default_dumbbell(), 0.1),
    ] {
        let o = oracle(&shape)?;
        let params = o.model_params(3)?;
        let (cloud, p) = sample_from_oracle(&o, 2000, 8)?;
        let federer = oracle_reach_federer(&cloud, |i| o.tangent(&p[i]))?;
        let cfg = ReachConfig {
            delta: Some(delta),
            ..ReachConfig::default()
        };
        let r = reach_estimate(&cloud, &params, &cfg)?;
        println!("{shape:?}");
        println!(
            "  rch_hat {:.4} = min(r_ell_hat {:.4}, sdr_hat {:.4}), regime {}",
            r.rch_hat, r.r_ell_hat, r.sdr_hat, r.regime
        );
        println!("  oracle reach {:.4}, Federer formula on the sample {federer:.4}", o.reach);
    }
    Ok(())
}
