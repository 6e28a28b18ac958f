//! Conforming triangulations of the polygonal computational domain.
//!
//! Triangles are stored counterclockwise as `[a, b, c]`. The edge `(a, b)`
//! (local face 0) is the refinement edge and `c` is the newest vertex, as
//! required by newest-vertex bisection. Local face `i` joins `t[i]` and
//! `t[(i + 1) % 3]`.

use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{HdgError, Result};
use crate::fe::element::{dist, EdgeGeometry, ElementGeometry, Point};
use crate::geometry::problem::{CurvedProblem, Domain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    /// Endpoints, ordered counterclockwise with respect to `left`.
    pub vertices: [usize; 2],
    pub left: usize,
    pub left_local: usize,
    /// `None` on the boundary of the computational domain.
    pub right: Option<(usize, usize)>,
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        self.right.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub vertices: Vec<Point>,
    pub triangles: Vec<[usize; 3]>,
    pub faces: Vec<Face>,
    /// Face index of each local face.
    pub element_faces: Vec<[usize; 3]>,
    pub boundary_faces: Vec<usize>,
    /// Element of the previous mesh this element was bisected from.
    pub parent: Vec<Option<usize>>,
    /// Number of bisections since the initial mesh.
    pub generation: Vec<u32>,
}

impl Triangulation {
    /// Builds the face structure. Triangles with negative orientation are
    /// flipped (keeping the first edge as refinement edge).
    pub fn new(vertices: Vec<Point>, mut triangles: Vec<[usize; 3]>) -> Result<Self> {
        for t in triangles.iter_mut() {
            if t.iter().any(|&v| v >= vertices.len()) {
                return Err(HdgError::MeshFormat(format!("triangle {t:?} references a missing vertex")));
            }
            let a = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if a < 0.0 {
                t.swap(0, 1);
            }
        }
        let n = triangles.len();
        Self::with_genealogy(vertices, triangles, vec![None; n], vec![0; n])
    }

    pub(crate) fn with_genealogy(
        vertices: Vec<Point>,
        triangles: Vec<[usize; 3]>,
        parent: Vec<Option<usize>>,
        generation: Vec<u32>,
    ) -> Result<Self> {
        let mut faces: Vec<Face> = Vec::with_capacity(triangles.len() * 3 / 2 + 8);
        let mut element_faces = vec![[usize::MAX; 3]; triangles.len()];
        let mut lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(triangles.len() * 2);
        for (e, t) in triangles.iter().enumerate() {
            let area = signed_area(vertices[t[0]], vertices[t[1]], vertices[t[2]]);
            if area <= 0.0 {
                return Err(HdgError::InvertedElement { vertex: t[2] });
            }
            for i in 0..3 {
                let (a, b) = (t[i], t[(i + 1) % 3]);
                let key = (a.min(b), a.max(b));
                match lookup.get(&key) {
                    None => {
                        lookup.insert(key, faces.len());
                        element_faces[e][i] = faces.len();
                        faces.push(Face {
                            vertices: [a, b],
                            left: e,
                            left_local: i,
                            right: None,
                        });
                    }
                    Some(&f) => {
                        let face = &mut faces[f];
                        if face.right.is_some() {
                            return Err(HdgError::MeshFormat(format!(
                                "edge ({a}, {b}) is shared by more than two triangles"
                            )));
                        }
                        if face.vertices != [b, a] {
                            return Err(HdgError::MeshFormat(format!(
                                "inconsistent orientation across edge ({a}, {b})"
                            )));
                        }
                        face.right = Some((e, i));
                        element_faces[e][i] = f;
                    }
                }
            }
        }
        let boundary_faces = faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.is_boundary())
            .map(|(i, _)| i)
            .collect();
        Ok(Self {
            vertices,
            triangles,
            faces,
            element_faces,
            boundary_faces,
            parent,
            generation,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.triangles.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn element_geometry(&self, e: usize) -> ElementGeometry {
        let t = self.triangles[e];
        ElementGeometry::new([self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]])
    }

    pub fn face_geometry(&self, f: usize) -> EdgeGeometry {
        let [a, b] = self.faces[f].vertices;
        EdgeGeometry::new(self.vertices[a], self.vertices[b])
    }

    /// Outward normal sign of `face` seen from `element`.
    pub fn normal_sign(&self, face: usize, element: usize) -> f64 {
        if self.faces[face].left == element {
            1.0
        } else {
            -1.0
        }
    }

    /// Element diameters `h_T`.
    pub fn h_per_element(&self) -> Vec<f64> {
        (0..self.num_elements())
            .map(|e| self.element_geometry(e).diameter())
            .collect()
    }

    pub fn h_max(&self) -> f64 {
        self.h_per_element().into_iter().fold(0.0, f64::max)
    }

    /// Measured shape-regularity constant `max_T h_T / rho_T`.
    pub fn shape_regularity(&self) -> f64 {
        (0..self.num_elements())
            .map(|e| {
                let g = self.element_geometry(e);
                g.diameter() / g.inscribed_diameter()
            })
            .fold(0.0, f64::max)
    }

    pub fn boundary_vertices(&self) -> Vec<bool> {
        let mut flag = vec![false; self.vertices.len()];
        for &f in &self.boundary_faces {
            for v in self.faces[f].vertices {
                flag[v] = true;
            }
        }
        flag
    }

    /// Face-neighbors of every element.
    pub fn neighbors(&self, e: usize) -> Vec<usize> {
        self.element_faces[e]
            .iter()
            .filter_map(|&f| {
                let face = &self.faces[f];
                match face.right {
                    Some((r, _)) if face.left == e => Some(r),
                    Some(_) => Some(face.left),
                    None => None,
                }
            })
            .collect()
    }

    /// Exhaustive consistency scan: positive orientation, manifold faces,
    /// and no vertex lying in the interior of another element's edge.
    pub fn check_conformity(&self) -> std::result::Result<(), String> {
        for (e, t) in self.triangles.iter().enumerate() {
            let a = signed_area(self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]);
            if a <= 0.0 {
                return Err(format!("element {e} has non-positive area {a}"));
            }
        }
        let rebuilt = Self::with_genealogy(
            self.vertices.clone(),
            self.triangles.clone(),
            self.parent.clone(),
            self.generation.clone(),
        )
        .map_err(|e| e.to_string())?;
        // Hanging vertices sit on a boundary face of the face graph; on a
        // conforming mesh boundary faces only carry vertices at their ends.
        let used: Vec<bool> = {
            let mut u = vec![false; self.vertices.len()];
            for t in &self.triangles {
                for &v in t {
                    u[v] = true;
                }
            }
            u
        };
        for &f in &rebuilt.boundary_faces {
            let [a, b] = rebuilt.faces[f].vertices;
            let (pa, pb) = (self.vertices[a], self.vertices[b]);
            let len = dist(pa, pb);
            for (v, p) in self.vertices.iter().enumerate() {
                if !used[v] || v == a || v == b {
                    continue;
                }
                let cross = (pb[0] - pa[0]) * (p[1] - pa[1]) - (pb[1] - pa[1]) * (p[0] - pa[0]);
                if cross.abs() > 1e-12 * len * len {
                    continue;
                }
                let t = ((p[0] - pa[0]) * (pb[0] - pa[0]) + (p[1] - pa[1]) * (pb[1] - pa[1])) / (len * len);
                if t > 1e-12 && t < 1.0 - 1e-12 {
                    return Err(format!("hanging vertex {v} on edge ({a}, {b})"));
                }
            }
        }
        Ok(())
    }

    /// Total area of the computational domain.
    pub fn area(&self) -> f64 {
        (0..self.num_elements())
            .map(|e| self.element_geometry(e).area())
            .sum()
    }

    /// Rotates every triangle so that its longest edge is the refinement edge.
    pub fn label_longest_edges(&mut self) {
        let verts = &self.vertices;
        for t in self.triangles.iter_mut() {
            let len = |i: usize| dist(verts[t[i]], verts[t[(i + 1) % 3]]);
            let mut best = 0;
            for i in 1..3 {
                if len(i) > len(best) * (1.0 + 1e-12) {
                    best = i;
                }
            }
            t.rotate_left(best);
        }
        // face structure depends on local numbering
        let rebuilt = Self::with_genealogy(
            self.vertices.clone(),
            self.triangles.clone(),
            self.parent.clone(),
            self.generation.clone(),
        )
        .expect("relabeling keeps a valid mesh");
        *self = rebuilt;
    }
}

pub fn signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

/// First `s` in `(0, s_max]` where `levelset(x + s dir)` crosses from
/// non-positive to positive, refined by bisection to `tol`. Returns
/// `Some(0.0)` when `x` already lies on the zero set.
pub fn ray_crossing(
    levelset: &dyn Fn(Point) -> f64,
    x: Point,
    dir: [f64; 2],
    s_max: f64,
    tol: f64,
    samples: usize,
) -> Option<f64> {
    let at = |s: f64| levelset([x[0] + s * dir[0], x[1] + s * dir[1]]);
    let f0 = at(0.0);
    if f0.abs() <= tol {
        return Some(0.0);
    }
    if f0 > 0.0 {
        return None;
    }
    let mut lo = 0.0;
    let mut hi = None;
    for i in 1..=samples {
        let s = s_max * i as f64 / samples as f64;
        if at(s) > 0.0 {
            hi = Some(s);
            break;
        }
        lo = s;
    }
    let mut hi = hi?;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if at(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let (flo, fhi) = (at(lo).abs(), at(hi).abs());
    Some(if flo <= fhi { lo } else { hi })
}

/// Builds a conforming triangulation of a polygonal domain inside the
/// problem's curved domain with element diameters close to `target_h`.
pub fn build_interior_mesh(problem: &CurvedProblem, target_h: f64) -> Result<Triangulation> {
    if !(target_h > 0.0) || !target_h.is_finite() {
        return Err(HdgError::NonResolvableBoundary(format!("invalid target_h {target_h}")));
    }
    let mesh = match problem.domain {
        Domain::Square { min, max } => square_mesh(min, max, target_h)?,
        Domain::AnnulusSector {
            center,
            r_in,
            r_out,
            theta0,
            theta1,
        } => annulus_sector_mesh(center, r_in, r_out, theta0, theta1, target_h)?,
        Domain::Disk { center, .. } | Domain::Shafranov { center, .. } => {
            star_mesh(&problem.domain, center, target_h)?
        }
    };
    let tol = problem.domain.root_tolerance();
    for (i, v) in mesh.vertices.iter().enumerate() {
        let phi = problem.levelset(*v);
        if phi > tol {
            return Err(HdgError::NonResolvableBoundary(format!(
                "vertex {i} at ({:.6}, {:.6}) lies outside the domain (phi = {phi:.3e})",
                v[0], v[1]
            )));
        }
    }
    Ok(mesh)
}

/// Uniform grid of squares split along the `(0,0)-(1,1)` diagonal; the
/// diagonal is the refinement edge of both halves.
fn square_mesh(min: Point, max: Point, target_h: f64) -> Result<Triangulation> {
    let lx = max[0] - min[0];
    let ly = max[1] - min[1];
    if !(lx > 0.0 && ly > 0.0) {
        return Err(HdgError::NonResolvableBoundary("empty square".into()));
    }
    // the cell diagonal is the element diameter
    let cell = target_h / 2f64.sqrt();
    let nx = (lx / cell).ceil().max(1.0) as usize;
    let ny = (ly / cell).ceil().max(1.0) as usize;
    Ok(grid_mesh(nx, ny, |i, j| {
        [min[0] + lx * i as f64 / nx as f64, min[1] + ly * j as f64 / ny as f64]
    }))
}

pub(crate) fn grid_mesh(nx: usize, ny: usize, point: impl Fn(usize, usize) -> Point) -> Triangulation {
    let mut vertices = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            vertices.push(point(i, j));
        }
    }
    let id = |i: usize, j: usize| j * (nx + 1) + i;
    let mut triangles = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let p00 = id(i, j);
            let p10 = id(i + 1, j);
            let p11 = id(i + 1, j + 1);
            let p01 = id(i, j + 1);
            triangles.push([p00, p11, p01]);
            triangles.push([p11, p00, p10]);
        }
    }
    Triangulation::new(vertices, triangles).expect("structured grid is valid")
}

fn annulus_sector_mesh(
    center: Point,
    r_in: f64,
    r_out: f64,
    theta0: f64,
    theta1: f64,
    target_h: f64,
) -> Result<Triangulation> {
    if !(r_in > 0.0 && r_out > r_in && theta1 > theta0 && theta1 - theta0 < PI) {
        return Err(HdgError::NonResolvableBoundary("invalid annulus sector".into()));
    }
    let cell = target_h / 2f64.sqrt();
    let nr = ((r_out - r_in) / cell).ceil().max(1.0) as usize;
    let nt = ((theta1 - theta0) * r_out / cell).ceil().max(2.0) as usize;
    let dt = (theta1 - theta0) / nt as f64;
    // Inner-arc vertices are lifted so that each chord touches the arc at
    // its midpoint and stays inside the domain.
    let lifted = r_in / (0.5 * dt).cos();
    Ok(grid_mesh(nr, nt, |i, j| {
        let r = if i == 0 {
            lifted
        } else {
            r_in + (r_out - r_in) * i as f64 / nr as f64
        };
        let t = theta0 + dt * j as f64;
        [center[0] + r * t.cos(), center[1] + r * t.sin()]
    }))
}

/// Concentric-ring mesh of a domain that is star-shaped with respect to
/// `center`, obtained by radially stretching a hexagonal ring mesh of the
/// unit disk onto the zero level set.
/// Radial ring spacing relative to `target_h`; the ring layout produces
/// elements whose diameters are then close to `target_h`.
const RING_SPACING: f64 = 0.7;

fn star_mesh(domain: &Domain, center: Point, target_h: f64) -> Result<Triangulation> {
    let diam = domain.diameter();
    let tol = domain.root_tolerance();
    if domain.levelset(center) >= 0.0 {
        return Err(HdgError::NonResolvableBoundary("mesh center lies outside the domain".into()));
    }
    let phi = |x: Point| domain.levelset(x);
    let radius = |theta: f64| -> Result<f64> {
        let dir = [theta.cos(), theta.sin()];
        let samples = ((diam / target_h).ceil() as usize * 4).max(16);
        ray_crossing(&phi, center, dir, diam, tol, samples).ok_or_else(|| {
            HdgError::NonResolvableBoundary(format!("no boundary crossing along direction {theta:.4}"))
        })
    };
    let mut rmax: f64 = 0.0;
    for i in 0..64 {
        rmax = rmax.max(radius(2.0 * PI * i as f64 / 64.0)?);
    }
    let n = (rmax / (RING_SPACING * target_h)).ceil().max(1.0) as usize;
    let mut vertices = vec![center];
    let mut rings: Vec<Vec<usize>> = vec![vec![0]];
    for j in 1..=n {
        let m = 6 * j;
        let mut ring = Vec::with_capacity(m);
        for i in 0..m {
            let theta = 2.0 * PI * i as f64 / m as f64;
            let rb = radius(theta)?;
            let r = rb * j as f64 / n as f64;
            let p = if j == n {
                // land exactly on the zero set
                [center[0] + rb * theta.cos(), center[1] + rb * theta.sin()]
            } else {
                [center[0] + r * theta.cos(), center[1] + r * theta.sin()]
            };
            ring.push(vertices.len());
            vertices.push(p);
        }
        rings.push(ring);
    }
    let mut triangles = Vec::with_capacity(6 * n * n);
    for j in 0..n {
        let inner = &rings[j];
        let outer = &rings[j + 1];
        let (mi, mo) = (inner.len(), outer.len());
        if mi == 1 {
            for o in 0..mo {
                triangles.push([inner[0], outer[o], outer[(o + 1) % mo]]);
            }
            continue;
        }
        let (mut i, mut o) = (0, 0);
        while i < mi || o < mo {
            let next_in = (i + 1) as f64 / mi as f64;
            let next_out = (o + 1) as f64 / mo as f64;
            if o < mo && (i == mi || next_out <= next_in) {
                triangles.push([inner[i % mi], outer[o], outer[(o + 1) % mo]]);
                o += 1;
            } else {
                triangles.push([inner[i], outer[o % mo], inner[(i + 1) % mi]]);
                i += 1;
            }
        }
    }
    let mut tri = Triangulation::new(vertices, triangles)?;
    tri.label_longest_edges();
    Ok(tri)
}
