//! The turn widget curve and the bumped cylinder distance gap.

use reachkit::synth::{bump_geodesic_gap, check_turn_widget, turn_widget, ShapeSpec};

fn main() -> reachkit::Result<()> {
    let c = turn_widget(0.5, 1.0, 11)?;
    for (t, p) in c.t.iter().zip(c.points.iter()) {
        println!("t = {t:.1}: ({:.5}, {:.5})", p[0], p[1]);
    }
    let checks = check_turn_widget(0.5, 1001)?;
    println!("checks pass: {} ({checks:?})\n", checks.pass());

    let mut prev: Option<(f64, f64)> = None;
    for eps in [0.05, 0.1, 0.2] {
        let gap = bump_geodesic_gap(&ShapeSpec::bumped_cylinder(1.0, 1.0, eps, 2, 1), 8001)?;
        let slope = prev.map(|(e, g)| (gap.gap / g).ln() / (eps / e).ln());
        println!("eps {eps:<5} gap {:.4e}  local slope {slope:.3?}", gap.gap);
        prev = Some((eps, gap.gap));
    }
    Ok(())
}
