//! Transfer segments from the mesh boundary to a Shafranov-type boundary.

use hdgcurve::prelude::*;

fn main() -> hdgcurve::Result<()> {
    let problem = presets::shafranov(1.0);
    let tri = build_interior_mesh(&problem, 0.2)?;
    let tmap = construct_transfer_map(&tri, &problem, 3)?;
    println!("{} boundary faces, R = {:.4}, max gap {:.3e}", tmap.faces.len(), tmap.max_ratio, tmap.max_gap());
    println!("{:>5} {:>10} {:>10} {:>10} {:>10} {:>10}", "face", "x", "y", "anchor x", "anchor y", "length");
    for face in tmap.faces.iter().take(8) {
        for node in &face.nodes {
            println!(
                "{:>5} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.3e}",
                face.face, node.x[0], node.x[1], node.anchor[0], node.anchor[1], node.length
            );
        }
    }
    Ok(())
}
