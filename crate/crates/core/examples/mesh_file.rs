//! Round trip of a mesh through the text format, then a solve on the loaded
//! mesh.

use hdgcurve::geometry::meshio::{read_mesh, write_mesh};
use hdgcurve::prelude::*;

fn main() -> hdgcurve::Result<()> {
    let problem = presets::disk_sine(1.0);
    let tri = build_interior_mesh(&problem, 0.3)?;
    let text = write_mesh(&tri);
    println!("{}", text.lines().take(5).collect::<Vec<_>>().join("\n"));
    let loaded = read_mesh(&text)?;
    let tmap = construct_transfer_map(&loaded, &problem, 4)?;
    let disc = Discretization::new(&loaded, &tmap, &problem, 1, 1.0)?;
    let (mut state, trace) = picard_solve(&disc, None, &PicardOptions::default())?;
    postprocess_all(&loaded, &problem, &mut state)?;
    let errors = error_norms(&loaded, &tmap, &problem, &state, problem.exact.as_ref().unwrap());
    println!(
        "{} elements, {} iterations, ||u - u_h|| = {:.3e}, ||u - u*_h|| = {:.3e}",
        loaded.num_elements(),
        trace.iterations(),
        errors.u,
        errors.ustar
    );
    Ok(())
}
