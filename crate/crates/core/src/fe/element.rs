//! Affine triangle geometry and physical-space evaluation of the modal basis.

use super::basis::{dim_pk, legendre01, RefBasis};

pub type Point = [f64; 2];

/// Affine map `x = v0 + J (xi, eta)` of a counterclockwise triangle.
#[derive(Debug, Clone, Copy)]
pub struct ElementGeometry {
    pub vertices: [Point; 3],
    jac: [[f64; 2]; 2],
    inv: [[f64; 2]; 2],
    det: f64,
}

impl ElementGeometry {
    pub fn new(vertices: [Point; 3]) -> Self {
        let [a, b, c] = vertices;
        let jac = [[b[0] - a[0], c[0] - a[0]], [b[1] - a[1], c[1] - a[1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv = [
            [jac[1][1] / det, -jac[0][1] / det],
            [-jac[1][0] / det, jac[0][0] / det],
        ];
        Self {
            vertices,
            jac,
            inv,
            det,
        }
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn area(&self) -> f64 {
        0.5 * self.det
    }

    /// Diameter (longest edge).
    pub fn diameter(&self) -> f64 {
        let [a, b, c] = self.vertices;
        dist(a, b).max(dist(b, c)).max(dist(c, a))
    }

    /// Diameter of the inscribed circle.
    pub fn inscribed_diameter(&self) -> f64 {
        let [a, b, c] = self.vertices;
        let per = dist(a, b) + dist(b, c) + dist(c, a);
        4.0 * self.area() / per
    }

    pub fn centroid(&self) -> Point {
        let [a, b, c] = self.vertices;
        [(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0]
    }

    pub fn to_physical(&self, r: Point) -> Point {
        let a = self.vertices[0];
        [
            a[0] + self.jac[0][0] * r[0] + self.jac[0][1] * r[1],
            a[1] + self.jac[1][0] * r[0] + self.jac[1][1] * r[1],
        ]
    }

    pub fn to_reference(&self, x: Point) -> Point {
        let a = self.vertices[0];
        let d = [x[0] - a[0], x[1] - a[1]];
        [
            self.inv[0][0] * d[0] + self.inv[0][1] * d[1],
            self.inv[1][0] * d[0] + self.inv[1][1] * d[1],
        ]
    }

    /// Pushes a reference gradient forward: `J^{-T} g`.
    pub fn push_gradient(&self, g: [f64; 2]) -> [f64; 2] {
        [
            self.inv[0][0] * g[0] + self.inv[1][0] * g[1],
            self.inv[0][1] * g[0] + self.inv[1][1] * g[1],
        ]
    }
}

pub fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Element basis orthonormal in `L^2(T)` on a physical triangle. Evaluation
/// at any point of the plane is the polynomial extrapolation.
#[derive(Debug, Clone)]
pub struct ElementBasis<'a> {
    pub geom: ElementGeometry,
    reference: &'a RefBasis,
    scale: f64,
}

impl<'a> ElementBasis<'a> {
    pub fn new(geom: ElementGeometry, reference: &'a RefBasis) -> Self {
        let scale = 1.0 / geom.det().sqrt();
        Self {
            geom,
            reference,
            scale,
        }
    }

    pub fn len(&self) -> usize {
        self.reference.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reference.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.reference.degree()
    }

    pub fn eval(&self, x: Point, out: &mut [f64]) {
        let r = self.geom.to_reference(x);
        self.reference.eval_into(r[0], r[1], out);
        for v in out.iter_mut() {
            *v *= self.scale;
        }
    }

    pub fn eval_with_grad(&self, x: Point, vals: &mut [f64], grads: &mut [[f64; 2]]) {
        let r = self.geom.to_reference(x);
        self.reference.eval_with_grad(r[0], r[1], vals, grads);
        for (v, g) in vals.iter_mut().zip(grads.iter_mut()) {
            *v *= self.scale;
            let pg = self.geom.push_gradient(*g);
            *g = [pg[0] * self.scale, pg[1] * self.scale];
        }
    }

    /// Evaluates the expansion with coefficients `coef` (a prefix of the
    /// basis may be used, e.g. `P_k` coefficients in a `P_{k+1}` basis).
    pub fn evaluate(&self, coef: &[f64], x: Point) -> f64 {
        let mut v = vec![0.0; self.len()];
        self.eval(x, &mut v);
        coef.iter().zip(&v).map(|(c, b)| c * b).sum()
    }

    /// Value and gradient of an expansion.
    pub fn evaluate_with_grad(&self, coef: &[f64], x: Point) -> (f64, [f64; 2]) {
        let n = self.len();
        let (mut v, mut g) = (vec![0.0; n], vec![[0.0; 2]; n]);
        self.eval_with_grad(x, &mut v, &mut g);
        let mut val = 0.0;
        let mut grad = [0.0; 2];
        for (i, c) in coef.iter().enumerate() {
            val += c * v[i];
            grad[0] += c * g[i][0];
            grad[1] += c * g[i][1];
        }
        (val, grad)
    }

    /// Physical quadrature points and weights for the given reference rule.
    pub fn quadrature(&self, rule: &super::quadrature::TriangleRule) -> Vec<(Point, f64)> {
        rule.points
            .iter()
            .zip(&rule.weights)
            .map(|(p, w)| (self.geom.to_physical(*p), w * self.geom.det()))
            .collect()
    }

    /// L2 projection of a scalar function onto the first `n` basis functions.
    pub fn project(
        &self,
        n: usize,
        rule: &super::quadrature::TriangleRule,
        f: impl Fn(Point) -> f64,
    ) -> Vec<f64> {
        let mut coef = vec![0.0; n];
        let mut v = vec![0.0; self.len()];
        for (x, w) in self.quadrature(rule) {
            self.eval(x, &mut v);
            let fx = f(x);
            for i in 0..n {
                coef[i] += w * fx * v[i];
            }
        }
        coef
    }
}

/// Segment `a -> b` with an `L^2(e)`-orthonormal Legendre basis of `P_k(e)`,
/// parameterized by `t in [0, 1]` from `a`.
#[derive(Debug, Clone, Copy)]
pub struct EdgeGeometry {
    pub a: Point,
    pub b: Point,
    pub length: f64,
    /// Unit normal to the right of `a -> b` (outward for a counterclockwise
    /// triangle traversed in the same direction).
    pub normal: [f64; 2],
}

impl EdgeGeometry {
    pub fn new(a: Point, b: Point) -> Self {
        let length = dist(a, b);
        let normal = [(b[1] - a[1]) / length, -(b[0] - a[0]) / length];
        Self {
            a,
            b,
            length,
            normal,
        }
    }

    pub fn point(&self, t: f64) -> Point {
        [
            self.a[0] + t * (self.b[0] - self.a[0]),
            self.a[1] + t * (self.b[1] - self.a[1]),
        ]
    }

    pub fn basis(&self, k: usize, t: f64, out: &mut [f64]) {
        legendre01(k, t, out);
        let s = 1.0 / self.length.sqrt();
        for v in out.iter_mut().take(k + 1) {
            *v *= s;
        }
    }
}

pub fn dim_edge(k: usize) -> usize {
    k + 1
}

pub fn dim_elem(k: usize) -> usize {
    dim_pk(k)
}
