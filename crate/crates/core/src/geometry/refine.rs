//! Newest-vertex bisection with conformity closure.
//!
//! Refinement works on marked edges: the refinement edges of the marked
//! elements are marked, then every element carrying a marked edge also has
//! its refinement edge marked until nothing changes. Bisecting elements
//! whose refinement edge is marked (repeatedly, since children inherit the
//! parent's other two edges as refinement edges) splits every marked edge
//! on both sides and leaves a conforming mesh.

use std::collections::{HashMap, HashSet};

use crate::error::{HdgError, Result};
use crate::fe::element::{dist, Point};
use crate::geometry::mesh::{ray_crossing, signed_area, Triangulation};
use crate::geometry::problem::CurvedProblem;

/// How new vertices on boundary edges are placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPlacement {
    /// Move the midpoint along the outward face normal onto the curved
    /// boundary when the children stay valid.
    #[default]
    Snap,
    /// Keep the straight-edge midpoint.
    Midpoint,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Bisects the marked elements (plus whatever conformity requires).
pub fn refine(tri: &Triangulation, marked: &[usize], problem: &CurvedProblem) -> Result<Triangulation> {
    refine_with(tri, marked, problem, BoundaryPlacement::Snap)
}

pub fn refine_with(
    tri: &Triangulation,
    marked: &[usize],
    problem: &CurvedProblem,
    placement: BoundaryPlacement,
) -> Result<Triangulation> {
    let mut edges = HashSet::new();
    for &e in marked {
        let t = tri.triangles[e];
        edges.insert(key(t[0], t[1]));
    }
    refine_edges(tri, edges, problem, placement)
}

/// Splits every edge of the mesh: each element becomes four.
pub fn refine_uniform(tri: &Triangulation, problem: &CurvedProblem) -> Result<Triangulation> {
    refine_uniform_with(tri, problem, BoundaryPlacement::Snap)
}

pub fn refine_uniform_with(
    tri: &Triangulation,
    problem: &CurvedProblem,
    placement: BoundaryPlacement,
) -> Result<Triangulation> {
    let edges = tri
        .faces
        .iter()
        .map(|f| key(f.vertices[0], f.vertices[1]))
        .collect();
    refine_edges(tri, edges, problem, placement)
}

fn refine_edges(
    tri: &Triangulation,
    mut marked: HashSet<(usize, usize)>,
    problem: &CurvedProblem,
    placement: BoundaryPlacement,
) -> Result<Triangulation> {
    // closure
    loop {
        let mut changed = false;
        for t in &tri.triangles {
            let refinement_edge = key(t[0], t[1]);
            if marked.contains(&refinement_edge) {
                continue;
            }
            if marked.contains(&key(t[1], t[2])) || marked.contains(&key(t[2], t[0])) {
                marked.insert(refinement_edge);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let boundary: HashSet<(usize, usize)> = tri
        .boundary_faces
        .iter()
        .map(|&f| key(tri.faces[f].vertices[0], tri.faces[f].vertices[1]))
        .collect();

    let mut vertices = tri.vertices.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    // (triangle, origin element, bisections)
    let mut current: Vec<([usize; 3], usize, u32)> = tri
        .triangles
        .iter()
        .enumerate()
        .map(|(e, t)| (*t, e, tri.generation[e]))
        .collect();

    loop {
        let mut next = Vec::with_capacity(current.len() * 2);
        let mut any = false;
        for (t, origin, gen) in current {
            let [a, b, c] = t;
            let ek = key(a, b);
            if !marked.contains(&ek) {
                next.push((t, origin, gen));
                continue;
            }
            any = true;
            let m = match midpoints.get(&ek) {
                Some(&m) => m,
                None => {
                    let p = if boundary.contains(&ek) && placement == BoundaryPlacement::Snap {
                        snapped_midpoint(vertices[a], vertices[b], vertices[c], problem)
                    } else {
                        midpoint(vertices[a], vertices[b])
                    };
                    vertices.push(p);
                    midpoints.insert(ek, vertices.len() - 1);
                    vertices.len() - 1
                }
            };
            let c1 = [c, a, m];
            let c2 = [b, c, m];
            for child in [c1, c2] {
                if signed_area(vertices[child[0]], vertices[child[1]], vertices[child[2]]) <= 0.0 {
                    return Err(HdgError::InvertedElement { vertex: m });
                }
                next.push((child, origin, gen + 1));
            }
        }
        current = next;
        if !any {
            break;
        }
    }

    let triangles = current.iter().map(|c| c.0).collect();
    let parent = current.iter().map(|c| Some(c.1)).collect();
    let generation = current.iter().map(|c| c.2).collect();
    Triangulation::with_genealogy(vertices, triangles, parent, generation)
}

fn midpoint(a: Point, b: Point) -> Point {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Position of the new vertex on boundary edge `(a, b)` of the triangle
/// `(a, b, c)`: as far along the outward normal towards the curved boundary
/// as possible while both children stay positively oriented and both new
/// boundary chords stay inside the domain.
fn snapped_midpoint(a: Point, b: Point, c: Point, problem: &CurvedProblem) -> Point {
    let m = midpoint(a, b);
    let len = dist(a, b);
    let normal = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
    let tol = problem.domain.root_tolerance();
    let phi = |x: Point| problem.levelset(x);
    let Some(s_gamma) = ray_crossing(&phi, m, normal, 2.0 * len, tol, 64) else {
        return m;
    };
    let at = |s: f64| [m[0] + s * normal[0], m[1] + s * normal[1]];
    let admissible = |p: Point| -> bool {
        if signed_area(c, a, p) <= 0.0 || signed_area(b, c, p) <= 0.0 {
            return false;
        }
        for (u, v) in [(a, p), (p, b)] {
            for i in 1..16 {
                let t = i as f64 / 16.0;
                let x = [u[0] + t * (v[0] - u[0]), u[1] + t * (v[1] - u[1])];
                if phi(x) > tol {
                    return false;
                }
            }
        }
        true
    };
    if admissible(at(s_gamma)) {
        return at(s_gamma);
    }
    let (mut lo, mut hi) = (0.0, s_gamma);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if admissible(at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    at(lo)
}
