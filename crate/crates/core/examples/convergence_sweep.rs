//! Sweep the plug-in metric over sample sizes, write the CSV and fit the
//! log-log rate.

use std::f64::consts::PI;

use reachkit::bench::{fit_rate, rate_svg, read_csv, run_experiment, Estimator, ExperimentConfig, Knobs};
use reachkit::synth::ShapeSpec;

fn main() -> reachkit::Result<()> {
    let dir = std::env::temp_dir().join("reachkit-sweep");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("metric.csv");
    let cfg = ExperimentConfig {
        shape: ShapeSpec::Circle { r: 1.0 },
        estimator: Estimator::Metric,
        n_grid: vec![250, 500, 1000, 2000],
        replicates: 8,
        seed: 1,
        knobs: Knobs {
            epsilon_scale: Some(3.0 * PI),
            sources: Some(32),
            ..Knobs::default()
        },
        output: Some(csv.clone()),
    };
    run_experiment(&cfg)?;
    let rows = read_csv(&csv)?;
    let fit = fit_rate(&rows)?;
    for g in &fit.per_n {
        println!("n = {:>5}: median {:.4e} (q1 {:.2e}, q3 {:.2e})", g.n, g.median, g.q1, g.q3);
    }
    println!("slope {:.3}, bootstrap 95% {:?}", fit.slope, fit.slope_ci);
    std::fs::write(dir.join("rate.svg"), rate_svg(&fit))?;
    println!("wrote {}", dir.display());
    Ok(())
}
