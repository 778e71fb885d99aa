//! Seeded samples from each synthetic shape, with the closed-form answers the
//! estimators are checked against.

use reachkit::synth::{oracle, sample, ShapeSpec};

fn main() -> reachkit::Result<()> {
    let shapes = [
        ShapeSpec::Circle { r: 1.0 },
        ShapeSpec::Sphere { d: 2, r: 1.0 },
        ShapeSpec::Ellipse { a: 2.0, b: 1.0 },
        ShapeSpec::Torus { rc: 3.0, r: 1.0 },
        ShapeSpec::Wedge { alpha: 1.2, arm: 1.0 },
        ShapeSpec::default_dumbbell(),
    ];
    println!("{:<10} {:>4} {:>9} {:>9} {:>9}", "shape", "D", "reach", "wfs", "r_ell");
    for s in &shapes {
        let o = oracle(s)?;
        let cloud = sample(s, 500, 42)?;
        let name = serde_json::to_value(s).unwrap()["shape"].as_str().unwrap().to_string();
        println!(
            "{:<10} {:>4} {:>9.4} {:>9.4} {:>9.4}  diam {:.3}",
            name,
            cloud.dim(),
            o.reach,
            o.wfs,
            o.r_ell,
            cloud.diameter()
        );
    }

    // the same seed gives the same points
    let a = sample(&shapes[3], 50, 7)?;
    let b = sample(&shapes[3], 50, 7)?;
    assert_eq!(a, b);
    println!("\nfirst torus point: {:?}", a.point(0));
    Ok(())
}
