//! Spherical distortion radius of the two-segment wedge against its closed
//! form, on both sides of the critical opening angle.

use reachkit::sdr::{sdr_delta, wedge_critical_angle, wedge_sdr_oracle};
use reachkit::synth::{exact_metric_space, ShapeSpec};

fn main() -> reachkit::Result<()> {
    let a_star = wedge_critical_angle();
    println!("critical angle {a_star:.6}");
    println!("{:>8} {:>6} {:>10} {:>10}", "alpha", "delta", "sample", "oracle");
    for alpha in [0.6 * a_star, a_star, 1.2 * a_star, 2.5, 3.0] {
        let space = exact_metric_space(&ShapeSpec::Wedge { alpha, arm: 1.0 }, 400, 11)?;
        for delta in [0.2, 0.5] {
            let got = sdr_delta(&space, delta, false)?;
            println!(
                "{alpha:>8.4} {delta:>6} {:>10.5} {:>10.5}  pair {:?}",
                got.value,
                wedge_sdr_oracle(alpha, delta)?,
                got.critical_pair
            );
        }
    }

    let circle = exact_metric_space(&ShapeSpec::Circle { r: 2.0 }, 200, 5)?;
    println!("\ncircle R = 2: {:.12}", sdr_delta(&circle, 1.0, false)?.value);
    Ok(())
}
