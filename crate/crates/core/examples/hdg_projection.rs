//! Observed orders of the HDG projection of a smooth pair `(q, u)`.

use hdgcurve::fe::projection::hdg_project;
use hdgcurve::fe::quadrature::TriangleRule;
use hdgcurve::fe::basis::RefBasis;
use hdgcurve::fe::element::{ElementBasis, ElementGeometry, Point};

fn u(x: Point) -> f64 {
    (x[0] + 2.0 * x[1]).sin() * x[0].exp()
}

fn q(x: Point) -> [f64; 2] {
    let (s, c, e) = ((x[0] + 2.0 * x[1]).sin(), (x[0] + 2.0 * x[1]).cos(), x[0].exp());
    [-(c + s) * e, -2.0 * c * e]
}

fn main() -> hdgcurve::Result<()> {
    for k in 1..=3 {
        let reference = RefBasis::new(k);
        let rule = TriangleRule::with_exactness(2 * k + 8);
        let mut prev: Option<(f64, f64)> = None;
        println!("k = {k}");
        for cells in [4, 8, 16, 32] {
            let h = 1.0 / cells as f64;
            let mut err = 0.0;
            for i in 0..cells {
                for j in 0..cells {
                    let (x0, y0) = (i as f64 * h, j as f64 * h);
                    for v in [
                        [[x0, y0], [x0 + h, y0], [x0 + h, y0 + h]],
                        [[x0, y0], [x0 + h, y0 + h], [x0, y0 + h]],
                    ] {
                        let p = hdg_project(v, k, [1.0; 3], q, u, 0)?;
                        let b = ElementBasis::new(ElementGeometry::new(v), &reference);
                        for (x, w) in b.quadrature(&rule) {
                            err += w * (u(x) - b.evaluate(&p.u, x)).powi(2);
                        }
                    }
                }
            }
            let err = err.sqrt();
            let eoc = prev.map(|(he, ee)| (ee / err).ln() / (he / h).ln());
            println!("  h = {h:.4}  ||u - Pi u|| = {err:.3e}  eoc {}", eoc.map_or("-".into(), |r| format!("{r:.3}")));
            prev = Some((h, err));
        }
    }
    Ok(())
}
