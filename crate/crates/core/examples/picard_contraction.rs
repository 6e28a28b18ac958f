//! Picard increments and contraction factors across mesh levels and source
//! scales.

use hdgcurve::prelude::*;

fn main() -> hdgcurve::Result<()> {
    for scale in [1.0, 0.5] {
        let problem = presets::disk_sine(scale);
        let mut tri = build_interior_mesh(&problem, 0.2)?;
        for level in 0..4 {
            if level > 0 {
                tri = refine_uniform(&tri, &problem)?;
            }
            let tmap = construct_transfer_map(&tri, &problem, 4)?;
            let disc = Discretization::new(&tri, &tmap, &problem, 1, 1.0)?;
            let (_, trace) = picard_solve(&disc, None, &PicardOptions::default())?;
            let ratios: Vec<String> = trace.factors.iter().map(|f| format!("{f:.3}")).collect();
            println!(
                "scale {scale} level {level}: {} iterations, factor {:.4}, ratios [{}]",
                trace.iterations(),
                trace.contraction_factor(),
                ratios.join(" ")
            );
        }
    }
    Ok(())
}
