//! Legacy ASCII VTK export of discontinuous fields.
//!
//! Every element gets its own three points so that the piecewise polynomial
//! fields can jump across faces. Point data holds vertex values, cell data
//! holds values at the centroid.

use std::fmt::Write as _;

use crate::fe::basis::RefBasis;
use crate::fe::element::ElementBasis;
use crate::geometry::mesh::Triangulation;
use crate::hdg::state::HdgState;

/// Triangle cell type in the legacy format.
const VTK_TRIANGLE: u8 = 5;

struct Fields {
    u: Vec<f64>,
    ustar: Vec<f64>,
    qmag: Vec<f64>,
}

fn sample(tri: &Triangulation, state: &HdgState, at_vertices: bool) -> Fields {
    let low = RefBasis::new(state.k);
    let star = RefBasis::new(state.k + 1);
    let n = low.len();
    let mut f = Fields {
        u: Vec::new(),
        ustar: Vec::new(),
        qmag: Vec::new(),
    };
    for e in 0..tri.num_elements() {
        let geom = tri.element_geometry(e);
        let bl = ElementBasis::new(geom, &low);
        let bs = ElementBasis::new(geom, &star);
        let points = if at_vertices {
            geom.vertices.to_vec()
        } else {
            vec![geom.centroid()]
        };
        let q = state.q_elem(e);
        for x in points {
            f.u.push(bl.evaluate(state.u_elem(e), x));
            f.ustar.push(state.ustar_elem(e).map_or(0.0, |c| bs.evaluate(c, x)));
            f.qmag.push(bl.evaluate(&q[..n], x).hypot(bl.evaluate(&q[n..], x)));
        }
    }
    f
}

fn scalars(s: &mut String, name: &str, values: &[f64]) {
    let _ = writeln!(s, "SCALARS {name} double 1\nLOOKUP_TABLE default");
    for v in values {
        let _ = writeln!(s, "{v:e}");
    }
}

/// Writes `u_h`, `u*_h` and `|q_h|` as point and cell data. `extra` adds
/// further cell scalars such as the local estimator.
pub fn write_vtk(tri: &Triangulation, state: &HdgState, extra: &[(&str, &[f64])]) -> String {
    let ne = tri.num_elements();
    let mut s = String::from("# vtk DataFile Version 3.0\nhdgcurve fields\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(s, "POINTS {} double", 3 * ne);
    for t in &tri.triangles {
        for &v in t {
            let p = tri.vertices[v];
            let _ = writeln!(s, "{:e} {:e} 0", p[0], p[1]);
        }
    }
    let _ = writeln!(s, "CELLS {ne} {}", 4 * ne);
    for e in 0..ne {
        let _ = writeln!(s, "3 {} {} {}", 3 * e, 3 * e + 1, 3 * e + 2);
    }
    let _ = writeln!(s, "CELL_TYPES {ne}");
    for _ in 0..ne {
        let _ = writeln!(s, "{VTK_TRIANGLE}");
    }
    let pts = sample(tri, state, true);
    let _ = writeln!(s, "POINT_DATA {}", 3 * ne);
    scalars(&mut s, "u_h", &pts.u);
    scalars(&mut s, "ustar_h", &pts.ustar);
    scalars(&mut s, "q_h_magnitude", &pts.qmag);
    let cells = sample(tri, state, false);
    let _ = writeln!(s, "CELL_DATA {ne}");
    scalars(&mut s, "u_h", &cells.u);
    scalars(&mut s, "ustar_h", &cells.ustar);
    scalars(&mut s, "q_h_magnitude", &cells.qmag);
    for (name, values) in extra {
        scalars(&mut s, name, values);
    }
    s
}
