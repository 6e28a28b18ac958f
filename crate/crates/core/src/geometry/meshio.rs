//! ASCII mesh files.
//!
//! ```text
//! hdgmesh 1
//! <n_vertices>
//! x y            (n_vertices lines)
//! <n_triangles>
//! i j k          (n_triangles lines, 0-based)
//! <n_boundary_faces>
//! i j            (n_boundary_faces lines)
//! ```
//!
//! The boundary section is checked against the boundary computed from the
//! triangles.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HdgError, Result};
use crate::geometry::mesh::Triangulation;

pub fn write_mesh(tri: &Triangulation) -> String {
    let mut s = String::from("hdgmesh 1\n");
    let _ = writeln!(s, "{}", tri.vertices.len());
    for v in &tri.vertices {
        let _ = writeln!(s, "{:e} {:e}", v[0], v[1]);
    }
    let _ = writeln!(s, "{}", tri.triangles.len());
    for t in &tri.triangles {
        let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(s, "{}", tri.boundary_faces.len());
    for &f in &tri.boundary_faces {
        let [a, b] = tri.faces[f].vertices;
        let _ = writeln!(s, "{a} {b}");
    }
    s
}

fn numbers<T: std::str::FromStr>(line: Option<&str>, expected: usize, what: &str) -> Result<Vec<T>> {
    let line = line.ok_or_else(|| HdgError::MeshFormat(format!("missing {what}")))?;
    let vals: Vec<T> = line
        .split_whitespace()
        .map(|x| x.parse().map_err(|_| HdgError::MeshFormat(format!("{what}: bad number '{x}'"))))
        .collect::<Result<_>>()?;
    if vals.len() != expected {
        return Err(HdgError::MeshFormat(format!("{what}: expected {expected} values")));
    }
    Ok(vals)
}

pub fn read_mesh(text: &str) -> Result<Triangulation> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    if lines.next() != Some("hdgmesh 1") {
        return Err(HdgError::MeshFormat("expected header 'hdgmesh 1'".into()));
    }
    let nv = numbers::<usize>(lines.next(), 1, "vertex count")?[0];
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let v = numbers::<f64>(lines.next(), 2, &format!("vertex {i}"))?;
        vertices.push([v[0], v[1]]);
    }
    let nt = numbers::<usize>(lines.next(), 1, "triangle count")?[0];
    let mut triangles = Vec::with_capacity(nt);
    for i in 0..nt {
        let t = numbers::<usize>(lines.next(), 3, &format!("triangle {i}"))?;
        triangles.push([t[0], t[1], t[2]]);
    }
    let nb = numbers::<usize>(lines.next(), 1, "boundary face count")?[0];
    let mut listed = HashSet::new();
    for i in 0..nb {
        let e = numbers::<usize>(lines.next(), 2, &format!("boundary face {i}"))?;
        listed.insert((e[0].min(e[1]), e[0].max(e[1])));
    }
    let tri = Triangulation::new(vertices, triangles)?;
    let actual: HashSet<(usize, usize)> = tri
        .boundary_faces
        .iter()
        .map(|&f| {
            let [a, b] = tri.faces[f].vertices;
            (a.min(b), a.max(b))
        })
        .collect();
    if actual != listed {
        return Err(HdgError::MeshFormat("boundary faces do not match the triangulation".into()));
    }
    Ok(tri)
}

pub fn load_mesh(path: &Path) -> Result<Triangulation> {
    read_mesh(&std::fs::read_to_string(path)?)
}

pub fn save_mesh(tri: &Triangulation, path: &Path) -> Result<()> {
    std::fs::write(path, write_mesh(tri))?;
    Ok(())
}
