//! Polynomial extension of element data outside the element.

use super::element::{ElementBasis, Point};
use super::quadrature::LineRule;

/// Evaluates the element polynomial with coefficients `coef` at `point`,
/// which may lie anywhere (typically inside the extension patch of a
/// boundary face).
pub fn extrapolate(basis: &ElementBasis<'_>, coef: &[f64], point: Point) -> f64 {
    basis.evaluate(coef, point)
}

/// Componentwise extension of a vector polynomial stored as `[x | y]`
/// coefficient blocks of length `n`.
pub fn extrapolate_vector(basis: &ElementBasis<'_>, coef: &[f64], n: usize, point: Point) -> [f64; 2] {
    let mut v = vec![0.0; basis.len()];
    basis.eval(point, &mut v);
    let mut out = [0.0; 2];
    for i in 0..n {
        out[0] += coef[i] * v[i];
        out[1] += coef[n + i] * v[i];
    }
    out
}

/// `int_0^length kappa^-1 q(x + s normal).normal ds` for the extrapolated
/// flux `q` with `[x | y]` coefficient blocks, by the rule `rule` on `[0, 1]`.
pub fn segment_flux_integral(
    basis: &ElementBasis<'_>,
    qcoef: &[f64],
    x: Point,
    normal: [f64; 2],
    length: f64,
    kappa: impl Fn(Point) -> f64,
    rule: &LineRule,
) -> f64 {
    if length == 0.0 {
        return 0.0;
    }
    let n = qcoef.len() / 2;
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(&s, &w)| {
            let y = [x[0] + s * length * normal[0], x[1] + s * length * normal[1]];
            let q = extrapolate_vector(basis, qcoef, n, y);
            w * length * (q[0] * normal[0] + q[1] * normal[1]) / kappa(y)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fe::basis::RefBasis;
    use crate::fe::element::ElementGeometry;
    use crate::fe::quadrature::TriangleRule;
    use rand::{Rng, SeedableRng};

    fn reference_element(rb: &RefBasis) -> ElementBasis<'_> {
        ElementBasis::new(ElementGeometry::new([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]), rb)
    }

    #[test]
    fn constant_extends_to_constant() {
        let rb = RefBasis::new(2);
        let eb = reference_element(&rb);
        let c = eb.project(eb.len(), &TriangleRule::with_exactness(6), |_| 3.0);
        for p in [[2.0, 2.0], [-1.0, 0.5], [0.3, -4.0]] {
            assert!((extrapolate(&eb, &c, p) - 3.0).abs() < 1e-11, "{}", extrapolate(&eb, &c, p));
        }
    }

    #[test]
    fn linear_identity_extends() {
        let rb = RefBasis::new(1);
        let eb = reference_element(&rb);
        let c = eb.project(eb.len(), &TriangleRule::with_exactness(4), |x| x[0]);
        assert!((extrapolate(&eb, &c, [2.0, 0.0]) - 2.0).abs() < 1e-13);
    }

    #[test]
    fn random_cubic_matches_monomial_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let rb = RefBasis::new(3);
        let eb = reference_element(&rb);
        // monomial coefficients for x^a y^b, a + b <= 3
        let mut mono = Vec::new();
        for a in 0..=3 {
            for b in 0..=(3 - a) {
                mono.push((a, b, rng.gen_range(-1.0..1.0)));
            }
        }
        let f = |x: Point| -> f64 {
            mono.iter()
                .map(|(a, b, c)| c * x[0].powi(*a) * x[1].powi(*b))
                .sum()
        };
        let c = eb.project(eb.len(), &TriangleRule::with_exactness(8), f);
        for _ in 0..20 {
            let p = [rng.gen_range(1.0..2.0), rng.gen_range(-1.0..1.5)];
            let v = extrapolate(&eb, &c, p);
            assert!((v - f(p)).abs() < 1e-13 * (1.0 + f(p).abs()) * 10.0, "{v} {}", f(p));
        }
        let cv: Vec<f64> = c.iter().chain(c.iter()).copied().collect();
        let p = [1.5, 0.7];
        let v = extrapolate_vector(&eb, &cv, eb.len(), p);
        assert!((v[0] - f(p)).abs() < 1e-12 && (v[1] - f(p)).abs() < 1e-12);
    }

    #[test]
    fn constant_flux_integrates_to_length_times_normal_component() {
        let rb = RefBasis::new(2);
        let eb = reference_element(&rb);
        let rule = TriangleRule::with_exactness(6);
        let cx = eb.project(eb.len(), &rule, |_| 1.5);
        let cy = eb.project(eb.len(), &rule, |_| -0.5);
        let q: Vec<f64> = cx.into_iter().chain(cy).collect();
        let nrm = [0.6, -0.8];
        let l = 0.37;
        let v = segment_flux_integral(&eb, &q, [0.5, 0.0], nrm, l, |_| 1.0, &LineRule::gauss(3));
        assert!((v - l * (1.5 * 0.6 + 0.5 * 0.8)).abs() < 1e-13);
        let v = segment_flux_integral(&eb, &q, [0.5, 0.0], nrm, l, |_| 2.0, &LineRule::gauss(3));
        assert!((v - 0.5 * l * (1.5 * 0.6 + 0.5 * 0.8)).abs() < 1e-13);
    }
}
