//! Transfer paths from the computational boundary to the curved boundary.
//!
//! Every boundary face `e` is paired with its unique element `T^e`; from
//! each boundary quadrature node `x` a segment is cast along the outward
//! face normal to the closest zero of the level set, giving the anchor
//! `xbar` and the length `l(x)`. The swept region is the extension patch of
//! the face.

use crate::error::{HdgError, Result};
use crate::fe::element::{EdgeGeometry, Point};
use crate::fe::quadrature::LineRule;
use crate::geometry::mesh::{ray_crossing, Triangulation};
use crate::geometry::problem::CurvedProblem;

/// Number of equispaced samples per face used for the sup defining `H_e`.
const PATCH_SAMPLES: usize = 33;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferNode {
    /// Parameter along the face, measured from `face.vertices[0]`.
    pub t: f64,
    pub x: Point,
    pub anchor: Point,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FaceTransfer {
    pub face: usize,
    pub element: usize,
    pub normal: [f64; 2],
    pub nodes: Vec<TransferNode>,
    /// Largest distance of a point of `T^e` to the face line.
    pub h_perp: f64,
    /// Largest distance of a point of the extension patch to the face line.
    pub big_h_perp: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone)]
pub struct TransferMap {
    pub faces: Vec<FaceTransfer>,
    /// Position in `faces` of each mesh face, if it is a boundary face.
    pub slot: Vec<Option<usize>>,
    pub rule: LineRule,
    /// `R = max_e r_e`.
    pub max_ratio: f64,
}

impl TransferMap {
    pub fn for_face(&self, face: usize) -> Option<&FaceTransfer> {
        self.slot[face].map(|i| &self.faces[i])
    }

    /// Largest `H_e` over all boundary faces.
    pub fn max_gap(&self) -> f64 {
        self.faces.iter().map(|f| f.big_h_perp).fold(0.0, f64::max)
    }
}

/// Transfer-path length from `x` along `normal`, with the search capped at
/// `s_max`.
pub fn path_length(problem: &CurvedProblem, x: Point, normal: [f64; 2], s_max: f64) -> Result<f64> {
    let tol = problem.domain.root_tolerance();
    let phi = |p: Point| problem.levelset(p);
    let f0 = phi(x);
    if f0 > tol {
        return Err(HdgError::PathNotFound {
            x: x[0],
            y: x[1],
            reason: format!("node lies outside the domain (phi = {f0:.3e})"),
        });
    }
    ray_crossing(&phi, x, normal, s_max, tol, 64).ok_or_else(|| HdgError::PathNotFound {
        x: x[0],
        y: x[1],
        reason: format!("no sign change within s_max = {s_max:.3e}"),
    })
}

/// Builds the transfer map with a Gauss rule of the given exactness on each
/// boundary face.
pub fn construct_transfer_map(
    tri: &Triangulation,
    problem: &CurvedProblem,
    boundary_quad_order: usize,
) -> Result<TransferMap> {
    let rule = LineRule::with_exactness(boundary_quad_order);
    let mut slot = vec![None; tri.num_faces()];
    let mut faces = Vec::with_capacity(tri.boundary_faces.len());
    for &f in &tri.boundary_faces {
        let face = tri.faces[f];
        let geom = tri.face_geometry(f);
        let s_max = 2.0 * geom.length;
        let mut nodes = Vec::with_capacity(rule.len());
        for &t in &rule.points {
            let x = geom.point(t);
            let l = path_length(problem, x, geom.normal, s_max)?;
            nodes.push(TransferNode {
                t,
                x,
                anchor: [x[0] + l * geom.normal[0], x[1] + l * geom.normal[1]],
                length: l,
            });
        }
        let mut big_h: f64 = nodes.iter().map(|n| n.length).fold(0.0, f64::max);
        for i in 0..PATCH_SAMPLES {
            let t = i as f64 / (PATCH_SAMPLES - 1) as f64;
            big_h = big_h.max(path_length(problem, geom.point(t), geom.normal, s_max)?);
        }
        let elem = tri.element_geometry(face.left);
        let h_perp = 2.0 * elem.area() / geom.length;
        slot[f] = Some(faces.len());
        faces.push(FaceTransfer {
            face: f,
            element: face.left,
            normal: geom.normal,
            nodes,
            h_perp,
            big_h_perp: big_h,
            ratio: big_h / h_perp,
        });
    }
    check_paths_outside(tri, &faces)?;
    let max_ratio = faces.iter().map(|f| f.ratio).fold(0.0, f64::max);
    Ok(TransferMap {
        faces,
        slot,
        rule,
        max_ratio,
    })
}

fn segments_cross(p: Point, q: Point, a: Point, b: Point) -> bool {
    let orient = |u: Point, v: Point, w: Point| (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0]);
    let d1 = orient(a, b, p);
    let d2 = orient(a, b, q);
    let d3 = orient(p, q, a);
    let d4 = orient(p, q, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Rejects transfer segments that cross another boundary face, i.e. paths
/// that re-enter the computational domain.
fn check_paths_outside(tri: &Triangulation, faces: &[FaceTransfer]) -> Result<()> {
    let segs: Vec<(usize, EdgeGeometry)> = faces.iter().map(|f| (f.face, tri.face_geometry(f.face))).collect();
    for ft in faces {
        for node in &ft.nodes {
            if node.length == 0.0 {
                continue;
            }
            let (lo, hi) = (
                [node.x[0].min(node.anchor[0]), node.x[1].min(node.anchor[1])],
                [node.x[0].max(node.anchor[0]), node.x[1].max(node.anchor[1])],
            );
            for (f, g) in &segs {
                if *f == ft.face {
                    continue;
                }
                if g.a[0].max(g.b[0]) < lo[0]
                    || g.a[0].min(g.b[0]) > hi[0]
                    || g.a[1].max(g.b[1]) < lo[1]
                    || g.a[1].min(g.b[1]) > hi[1]
                {
                    continue;
                }
                if segments_cross(node.x, node.anchor, g.a, g.b) {
                    return Err(HdgError::PathCrossesInterior { face: ft.face });
                }
            }
        }
    }
    Ok(())
}
