//! Plug-in geodesic metric on a noise-free circle sample, scored against the
//! exact arc length.

use reachkit::metric::{sup_loss, MetricEstimate, PluginMetric};
use reachkit::synth::{oracle, sample_from_oracle, ShapeSpec};

fn main() -> reachkit::Result<()> {
    let o = oracle(&ShapeSpec::Circle { r: 1.0 })?;
    for (n, eps) in [(250, 0.12), (1000, 0.04), (4000, 0.012)] {
        let (cloud, params) = sample_from_oracle(&o, n, 1)?;
        let pm = PluginMetric::new(MetricEstimate::new(cloud, eps, 10.0)?)?;
        let table = pm.table()?;
        let pairs: Vec<(usize, usize)> = (1..n).map(|j| (0, j)).collect();
        let loss = sup_loss(
            |i, j| table.d(i, j),
            |i, j| o.geodesic(&params[i], &params[j]).unwrap(),
            &pairs,
        )?;
        println!("n = {n:>5}, eps = {eps:<6} sup loss from point 0: {:.4}", loss.l_inf);
    }

    // off-sample points go through their offset neighbours
    let (cloud, _) = sample_from_oracle(&o, 2000, 3)?;
    let pm = PluginMetric::new(MetricEstimate::new(cloud, 0.02, 10.0)?)?;
    let d = pm.distance(&[1.0, 0.0], &[-1.0, 0.0])?;
    println!("half circle: {d:.5} (pi = {:.5})", std::f64::consts::PI);
    Ok(())
}
