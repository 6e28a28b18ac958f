//! Adaptive refinement for a sharp Gaussian peak on the unit disk, compared
//! with uniform refinement at equal estimator level.

use hdgcurve::prelude::*;

fn main() -> hdgcurve::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let problem = presets::disk_peak();
    let config = AdaptConfig {
        k: 1,
        theta: 0.5,
        max_dofs: 30_000,
        initial_h: 0.25,
        ..AdaptConfig::default()
    };
    let out = adapt_loop(&problem, &config)?;
    println!("{:>5} {:>7} {:>10} {:>10} {:>6} {:>8}", "cycle", "dofs", "eta", "osc", "iters", "eff");
    for c in &out.cycles {
        println!(
            "{:>5} {:>7} {:>10.3e} {:>10.3e} {:>6} {:>8.3}",
            c.cycle,
            c.dofs,
            c.eta,
            c.osc,
            c.picard_iters,
            c.effectivity.unwrap_or(f64::NAN)
        );
    }

    println!("\nuniform refinement");
    let mut tri = build_interior_mesh(&problem, config.initial_h)?;
    let target = out.cycles.last().unwrap().eta;
    loop {
        let sol = hdgcurve::estimator::solve_and_estimate(&tri, &problem, config.k, config.tau, &config.picard)?;
        let dofs = tri.num_faces() * (config.k + 1);
        println!("{:>13} {:>10.3e}", dofs, sol.report.eta);
        if sol.report.eta <= target || dofs > 200_000 {
            break;
        }
        tri = refine_uniform(&tri, &problem)?;
    }
    Ok(())
}
