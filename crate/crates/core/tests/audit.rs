//! Geometric audit against brute-force geometry.

use hdgcurve::fe::element::Point;
use hdgcurve::geometry::audit::audit_assumptions;
use hdgcurve::geometry::mesh::build_interior_mesh;
use hdgcurve::geometry::refine::{refine_uniform_with, BoundaryPlacement};
use hdgcurve::geometry::transfer::construct_transfer_map;
use hdgcurve::presets;

/// Distance along `x + s n`, `s >= 0`, to the unit circle.
fn ray_circle(x: Point, n: [f64; 2]) -> f64 {
    let b = x[0] * n[0] + x[1] * n[1];
    let c = x[0] * x[0] + x[1] * x[1] - 1.0;
    -b + (b * b - c).sqrt()
}

#[test]
fn ratio_matches_dense_sampling() {
    let p = presets::disk_sine(1.0);
    let tri = build_interior_mesh(&p, 0.1).unwrap();
    let tmap = construct_transfer_map(&tri, &p, 4).unwrap();
    let report = audit_assumptions(&tri, &tmap, &p, 1.0, 1).unwrap();
    let mut brute: f64 = 0.0;
    for &f in &tri.boundary_faces {
        let [a, b] = tri.faces[f].vertices;
        let (xa, xb) = (tri.vertices[a], tri.vertices[b]);
        let len = (xb[0] - xa[0]).hypot(xb[1] - xa[1]);
        let n = [(xb[1] - xa[1]) / len, -(xb[0] - xa[0]) / len];
        let big_h = (0..=2000)
            .map(|i| {
                let t = i as f64 / 2000.0;
                ray_circle([xa[0] + t * (xb[0] - xa[0]), xa[1] + t * (xb[1] - xa[1])], n)
            })
            .fold(0.0, f64::max);
        let t = tri.triangles[tri.faces[f].left];
        let v = [tri.vertices[t[0]], tri.vertices[t[1]], tri.vertices[t[2]]];
        let area = 0.5 * ((v[1][0] - v[0][0]) * (v[2][1] - v[0][1]) - (v[2][0] - v[0][0]) * (v[1][1] - v[0][1]));
        brute = brute.max(big_h / (2.0 * area / len));
    }
    assert!((report.max_ratio - brute).abs() <= 0.05 * brute, "{} vs {brute}", report.max_ratio);
    assert!(report.max_ratio > 0.0 && report.recheck());
}

#[test]
fn midpoint_placement_degrades_the_geometry() {
    let p = presets::disk_sine(1.0);
    let base = build_interior_mesh(&p, 0.25).unwrap();
    let mut stats = Vec::new();
    for placement in [BoundaryPlacement::Snap, BoundaryPlacement::Midpoint] {
        let mut tri = base.clone();
        let mut rows = Vec::new();
        for level in 0..3 {
            if level > 0 {
                tri = refine_uniform_with(&tri, &p, placement).unwrap();
            }
            let tmap = construct_transfer_map(&tri, &p, 4).unwrap();
            let r = audit_assumptions(&tri, &tmap, &p, 1.0, 1).unwrap();
            rows.push((r.max_ratio, r.max_gap(), r.s3_margin()));
        }
        stats.push(rows);
    }
    let (snap, mid) = (&stats[0], &stats[1]);
    for l in 1..3 {
        // snapped: gap shrinks about fourfold, ratio does not grow
        assert!(snap[l].1 < 0.3 * snap[l - 1].1);
        assert!(snap[l].0 <= snap[l - 1].0 * 1.05);
        assert!(snap[l].2 > snap[l - 1].2);
        // chord midpoints: gap frozen, ratio grows, S3 margin does not improve
        assert!((mid[l].1 - mid[0].1).abs() < 1e-12);
        assert!(mid[l].0 > 1.5 * mid[l - 1].0);
        assert!(mid[l].2 <= mid[l - 1].2 + 1e-15);
    }
}
