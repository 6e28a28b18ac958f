//! Geometric assumptions under snapped and midpoint boundary refinement.

use hdgcurve::geometry::refine::refine_uniform_with;
use hdgcurve::prelude::*;

fn main() -> hdgcurve::Result<()> {
    let problem = presets::disk_sine(1.0);
    let base = build_interior_mesh(&problem, 0.25)?;
    for placement in [BoundaryPlacement::Snap, BoundaryPlacement::Midpoint] {
        println!("{placement:?}");
        println!("{:>6} {:>8} {:>10} {:>10} {:>10} {:>10}", "level", "h", "R", "max H", "S3 margin", "S4 margin");
        let mut tri = base.clone();
        for level in 0..5 {
            if level > 0 {
                tri = refine_uniform_with(&tri, &problem, placement)?;
            }
            let tmap = construct_transfer_map(&tri, &problem, 4)?;
            let report = audit_assumptions(&tri, &tmap, &problem, 1.0, 1)?;
            println!(
                "{:>6} {:>8.4} {:>10.4} {:>10.3e} {:>10.4} {:>10.4}",
                level,
                tri.h_max(),
                report.max_ratio,
                report.max_gap(),
                report.s3_margin(),
                report.s4_margin()
            );
        }
    }
    Ok(())
}
