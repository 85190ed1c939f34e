//! Dirichlet-space model of the symmetric subspace.
//!
//! With the inner product `<f, g>_D = sum_k (k + 1) f_k conj(g_k)` the map
//! `f -> sum_j z^j (T_w*)^j f` is an isometry onto the symmetric subspace;
//! its inverse is the `z = 0` slice.

use num_complex::Complex64;

use crate::bidisc::{
    reconstruction_series, BidiscPoly, CirclePoly, Direction, SymVector, Variable,
};

/// Polynomial `sum_k f_k w^k` carrying the Dirichlet inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPoly {
    coeffs: Vec<Complex64>,
}

impl DirichletPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            DirichletPoly {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            }
        } else {
            DirichletPoly { coeffs }
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = Complex64::new(1.0, 0.0);
        DirichletPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c)
    }

    /// `(w f(w))' = sum_k (k + 1) f_k w^k`.
    pub fn eval_derivative_of_wf(&self, w: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| {
                acc * w + c * (k + 1) as f64
            })
    }

    pub fn backward_shift(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).copied().collect())
    }

    pub fn norm_sqr(&self) -> f64 {
        dirichlet_inner(self, self).re
    }
}

impl From<CirclePoly> for DirichletPoly {
    fn from(p: CirclePoly) -> Self {
        DirichletPoly::new(p.coeffs().to_vec())
    }
}

impl From<&DirichletPoly> for CirclePoly {
    fn from(p: &DirichletPoly) -> Self {
        CirclePoly::new(p.coeffs.clone())
    }
}

pub fn dirichlet_inner(f: &DirichletPoly, g: &DirichletPoly) -> Complex64 {
    f.coeffs
        .iter()
        .zip(&g.coeffs)
        .enumerate()
        .map(|(k, (a, b))| a * b.conj() * (k + 1) as f64)
        .sum()
}

/// `f -> sum_j z^j (T_w*)^j f`.
pub fn embed(f: &DirichletPoly) -> SymVector {
    SymVector::reconstruct(&CirclePoly::from(f))
}

/// The left inverse of [`embed`].
pub fn unembed(v: &SymVector) -> DirichletPoly {
    v.slice_z0().into()
}

/// `|<embed f, T_w* embed g>_{H²(T²)} - <f, T_w* g>_D|`.
///
/// The backward shift on the left is applied in the ambient bidisc space,
/// before any projection back onto the symmetric subspace.
pub fn adjoint_relation_residual(f: &DirichletPoly, g: &DirichletPoly) -> f64 {
    let qf: BidiscPoly = reconstruction_series(&CirclePoly::from(f));
    let qg = reconstruction_series(&CirclePoly::from(g)).shift(Variable::W, Direction::Adjoint);
    let lhs = qf.inner(&qg);
    let rhs = dirichlet_inner(f, &g.backward_shift());
    (lhs - rhs).norm()
}

/// Area-integral form `(1/pi) ∬_D (w f)' conj((w g)') dA`, evaluated by
/// quadrature that never touches the coefficient formula.
pub mod quadrature {
    use super::DirichletPoly;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// Stop once successive refinements agree to this.
    pub const REFINE_TOL: f64 = 1e-10;
    const MAX_RADIAL_NODES: usize = 512;

    /// Gauss-Legendre nodes and weights on `[0, 1]`.
    pub fn gauss_legendre_unit(n: usize) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            let w = 2.0 / ((1.0 - x * x) * d * d);
            out.push(((1.0 - x) / 2.0, w / 2.0));
        }
        out
    }

    fn legendre(n: usize, x: f64) -> (f64, f64) {
        let mut p0 = 1.0;
        let mut p1 = x;
        if n == 0 {
            return (1.0, 0.0);
        }
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, d)
    }

    /// One quadrature pass: `radial` Gauss-Legendre nodes in `s = r^2`,
    /// `angular` equispaced nodes in angle.
    pub fn evaluate(
        f: &DirichletPoly,
        g: &DirichletPoly,
        radial: usize,
        angular: usize,
    ) -> Complex64 {
        // (1/pi) ∫∫ F conj(G) r dr dθ = (1/(2 pi)) ∫_0^1 ∫_0^{2pi} F conj(G) dθ ds
        let mut total = Complex64::new(0.0, 0.0);
        for (s, ws) in gauss_legendre_unit(radial) {
            let r = s.sqrt();
            let mut ring = Complex64::new(0.0, 0.0);
            for m in 0..angular {
                let w = Complex64::from_polar(r, 2.0 * PI * m as f64 / angular as f64);
                ring += f.eval_derivative_of_wf(w) * g.eval_derivative_of_wf(w).conj();
            }
            total += ring * (ws / angular as f64);
        }
        total
    }

    /// Refines by doubling the radial nodes until two passes agree to
    /// [`REFINE_TOL`]. Angular nodes are fixed at `4 deg + 8`, past the
    /// bandwidth of the integrand.
    pub fn dirichlet_inner_quadrature(f: &DirichletPoly, g: &DirichletPoly) -> Complex64 {
        let deg = f.deg().max(g.deg());
        let angular = 4 * deg + 8;
        let mut radial = 2;
        let mut prev = evaluate(f, g, radial, angular);
        loop {
            radial *= 2;
            let next = evaluate(f, g, radial, angular);
            if (next - prev).norm() < REFINE_TOL || radial >= MAX_RADIAL_NODES {
                return next;
            }
            prev = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::quadrature::*;
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn inner_product_examples() {
        let w = DirichletPoly::monomial(1);
        assert_eq!(dirichlet_inner(&w, &w), c(2.0));
        let one = DirichletPoly::monomial(0);
        assert_eq!(dirichlet_inner(&one, &one), c(1.0));
        assert_eq!(
            dirichlet_inner(&DirichletPoly::monomial(2), &DirichletPoly::monomial(3)),
            c(0.0)
        );
    }

    #[test]
    fn embed_examples() {
        assert_eq!(embed(&DirichletPoly::monomial(0)), SymVector::basis(0));
        let q = embed(&DirichletPoly::monomial(1));
        // p_1 = sqrt(2) e_1
        assert!((q.coord(1) - c(2f64.sqrt())).norm() < 1e-15);
        assert!((q.norm_sqr() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adjoint_relation_examples() {
        let one = DirichletPoly::monomial(0);
        assert_eq!(adjoint_relation_residual(&one, &one), 0.0);
        let w = DirichletPoly::monomial(1);
        let w2 = DirichletPoly::monomial(2);
        assert!(adjoint_relation_residual(&w, &w2) < 1e-15);
        // both sides equal <w, w>_D = 2
        assert_eq!(dirichlet_inner(&w, &w2.backward_shift()), c(2.0));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let nodes = gauss_legendre_unit(6);
        let sum: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((sum - 1.0).abs() < 1e-14);
        // ∫_0^1 s^11 ds = 1/12, exact for 6 nodes
        let m: f64 = nodes.iter().map(|(s, w)| w * s.powi(11)).sum();
        assert!((m - 1.0 / 12.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_on_monomials() {
        for k in 0..6 {
            let f = DirichletPoly::monomial(k);
            let q = dirichlet_inner_quadrature(&f, &f);
            assert!((q - c((k + 1) as f64)).norm() < 1e-9, "k = {k}: {q}");
        }
    }
}
