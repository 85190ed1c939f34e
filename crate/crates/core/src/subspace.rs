//! Finite-dimensional subspaces of the truncated symmetric space: orthonormal
//! frames, invariant subspaces generated by shifting, and extraction of the
//! wandering part `M ⊖ BM`.
//!
//! An [`InvariantModel`] is truncated at a degree cap. Inside it, the image
//! `BM` is taken over the vectors of `M` whose degree stays below the cap, so
//! every computed quantity is exact at degree `<= cap`. Generator sets that
//! are not unions of shift chains can leave spurious wandering directions
//! concentrated within [`TRUNCATION_GUARD`] degrees of the cap.

use num_complex::Complex64;

use crate::bidisc::{BergmanPoly, Direction, SymVector};
use crate::criteria::{cross_condition, is_wandering_vector};
use crate::error::{Error, Result};

/// Relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Degrees within this distance of the cap may carry truncation artifacts.
pub const TRUNCATION_GUARD: usize = 2;

/// Orthonormal list of symmetric vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    vectors: Vec<SymVector>,
    rank_tol: f64,
    source_count: usize,
}

impl Frame {
    /// A frame with no vectors.
    pub fn empty(rank_tol: f64) -> Self {
        Frame {
            vectors: Vec::new(),
            rank_tol,
            source_count: 0,
        }
    }

    pub fn vectors(&self) -> &[SymVector] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    /// Number of raw vectors this frame was built from.
    pub fn source_count(&self) -> usize {
        self.source_count
    }

    /// Largest stored degree among the vectors.
    pub fn max_degree(&self) -> usize {
        self.vectors.iter().map(SymVector::deg).max().unwrap_or(0)
    }

    /// Largest entry of `|G - I|` for the Gram matrix `G`.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - delta).norm());
            }
        }
        worst
    }

    /// Orthogonal projection onto the span, computed twice to tighten the
    /// result.
    pub fn project(&self, v: &SymVector) -> SymVector {
        let residual = self.residual(v);
        v.clone() - residual
    }

    /// `v - P v`.
    pub fn residual(&self, v: &SymVector) -> SymVector {
        let mut r = v.clone();
        for _ in 0..2 {
            for q in &self.vectors {
                let c = r.inner(q);
                r.axpy(-c, q);
            }
        }
        r
    }

    pub fn contains(&self, v: &SymVector, tol: f64) -> Containment {
        let residual = self.residual(v).norm();
        Containment {
            inside: residual <= tol * v.norm(),
            residual,
        }
    }

    /// Every vector multiplied by `c`; unimodular `c` keeps the frame
    /// orthonormal.
    pub fn scaled(&self, c: Complex64) -> Frame {
        Frame {
            vectors: self.vectors.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// Reorders the vectors: position `k` of the result holds `self[order[k]]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Frame> {
        let mut seen = vec![false; self.rank()];
        if order.len() != self.rank()
            || order
                .iter()
                .any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true))
        {
            return Err(Error::InvalidArgument(format!(
                "{order:?} is not a permutation of 0..{}",
                self.rank()
            )));
        }
        Ok(Frame {
            vectors: order.iter().map(|&i| self.vectors[i].clone()).collect(),
            ..self.clone()
        })
    }
}

/// Outcome of [`Frame::contains`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Containment {
    pub inside: bool,
    /// `||v - P v||`.
    pub residual: f64,
}

/// Ordered Gram-Schmidt with two orthogonalization passes per vector.
///
/// A direction is dropped when its residual falls below `rank_tol` times the
/// largest input norm. Deterministic in input order.
pub fn orthonormalize(raw: &[SymVector], rank_tol: f64) -> Result<Frame> {
    if !(rank_tol > 0.0 && rank_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance {rank_tol} outside (0, 1)"
        )));
    }
    let scale = raw.iter().map(SymVector::norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::EmptySpan);
    }
    let vectors = extend_orthonormal(&[], raw, rank_tol * scale);
    if vectors.is_empty() {
        return Err(Error::EmptySpan);
    }
    Ok(Frame {
        vectors,
        rank_tol,
        source_count: raw.len(),
    })
}

/// Orthonormal directions of `raw` that are new relative to `seed` (itself
/// orthonormal), dropping residuals with norm at most `threshold`.
fn extend_orthonormal(seed: &[SymVector], raw: &[SymVector], threshold: f64) -> Vec<SymVector> {
    let deg = seed
        .iter()
        .chain(raw)
        .map(SymVector::deg)
        .max()
        .unwrap_or(0);
    let mut basis: Vec<SymVector> = seed.iter().map(|v| v.with_degree(deg)).collect();
    let start = basis.len();
    for v in raw {
        let mut r = v.with_degree(deg);
        for _ in 0..2 {
            for q in &basis {
                let c = r.inner(q);
                r.axpy(-c, q);
            }
        }
        let norm = r.norm();
        if norm > threshold {
            basis.push(r * Complex64::new(1.0 / norm, 0.0));
        }
    }
    basis.split_off(start)
}

/// Truncation of the invariant subspace generated by a set of vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantModel {
    generators: Vec<SymVector>,
    cap: usize,
    basis: Frame,
}

impl InvariantModel {
    /// Span of `B^j g` over generators `g` and all `j` keeping the degree
    /// within `cap`.
    pub fn generated_by(generators: &[SymVector], cap: usize, rank_tol: f64) -> Result<Self> {
        let mut raw = Vec::new();
        for g in generators {
            let d = g.effective_degree();
            if d > cap {
                return Err(Error::CapExceeded { degree: d, cap });
            }
            let mut v = g.with_degree(d);
            for j in 0..=cap - d {
                if j > 0 {
                    v = v.bergman_shift(1, Direction::Forward);
                }
                raw.push(v.with_degree(cap));
            }
        }
        let basis = orthonormalize(&raw, rank_tol)?;
        Ok(InvariantModel {
            generators: generators.iter().map(|g| g.with_degree(cap)).collect(),
            cap,
            basis,
        })
    }

    /// Functions vanishing at the given points (with multiplicity), generated
    /// by `U(prod (z - a_i))`.
    pub fn zero_set(zeros: &[Complex64], cap: usize) -> Result<Self> {
        if let Some(a) = zeros.iter().find(|a| a.norm() >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "zero {a} is not inside the unit disc"
            )));
        }
        let g = BergmanPoly::from_zeros(zeros).to_sym();
        let g = g.normalized().expect("monic polynomial is nonzero");
        Self::generated_by(&[g], cap, DEFAULT_RANK_TOL)
    }

    pub fn generators(&self) -> &[SymVector] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn basis(&self) -> &Frame {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rank()
    }

    /// Orthonormal basis of the vectors in the model with degree `< cap`.
    pub fn below_cap(&self) -> Vec<SymVector> {
        let q = self.basis.vectors();
        let top: Vec<Complex64> = q.iter().map(|v| v.coord(self.cap)).collect();
        let top_norm = top.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let raw: Vec<SymVector> = if top_norm <= 1e-14 {
            q.to_vec()
        } else {
            // remove the single direction y = sum_l u_l q_l that reaches the cap
            let u: Vec<Complex64> = top.iter().map(|t| t.conj() / top_norm).collect();
            let mut y = SymVector::zeros(self.cap);
            for (ul, ql) in u.iter().zip(q) {
                y.axpy(*ul, ql);
            }
            q.iter()
                .zip(&u)
                .map(|(qi, ui)| {
                    let mut v = qi.clone();
                    v.axpy(-ui.conj(), &y);
                    v
                })
                .collect()
        };
        extend_orthonormal(&[], &raw, self.basis.rank_tol)
            .into_iter()
            .map(|v| {
                let mut coords = v.coords().to_vec();
                coords[self.cap] = Complex64::new(0.0, 0.0);
                SymVector::from_coords(coords)
            })
            .collect()
    }

    /// Largest distance from `B v` to the model over unit `v` of degree
    /// `< cap`.
    pub fn invariance_residual(&self) -> f64 {
        self.below_cap()
            .iter()
            .map(|v| {
                let bv = v.bergman_shift(1, Direction::Forward).with_degree(self.cap);
                self.basis.residual(&bv).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Largest residual of `other`'s basis against this model's span.
    pub fn containment_residual(&self, other: &InvariantModel) -> f64 {
        other
            .basis
            .vectors()
            .iter()
            .map(|v| self.basis.residual(v).norm())
            .fold(0.0, f64::max)
    }
}

/// Invariant subspace generated by a wandering frame, truncated at `cap`.
pub fn generate_invariant(wandering: &Frame, cap: usize) -> Result<InvariantModel> {
    InvariantModel::generated_by(wandering.vectors(), cap, wandering.rank_tol())
}

/// `M ⊖ BM` inside the truncated model. May be empty.
pub fn wandering_of(m: &InvariantModel) -> Frame {
    let shifted: Vec<SymVector> = m
        .below_cap()
        .iter()
        .map(|v| v.bergman_shift(1, Direction::Forward).with_degree(m.cap))
        .collect();
    let threshold = m.basis.rank_tol;
    let image = extend_orthonormal(&[], &shifted, threshold);
    let vectors = extend_orthonormal(&image, m.basis.vectors(), threshold);
    Frame {
        vectors,
        rank_tol: m.basis.rank_tol,
        source_count: m.dim(),
    }
}

/// How well `wandering_of(generate_invariant(W))` reproduces `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recovery {
    /// Largest residual of a vector of `W` against the recovered frame.
    pub residual: f64,
    /// Number of recovered directions orthogonal to `W`.
    pub surplus_rank: usize,
    /// Largest norm that any surplus direction carries in degrees
    /// `<= cap - guard`.
    pub surplus_low_mass: f64,
}

pub fn recover_wandering(w: &Frame, cap: usize, guard: usize) -> Result<Recovery> {
    let model = generate_invariant(w, cap)?;
    let found = wandering_of(&model);
    let residual = w
        .vectors()
        .iter()
        .map(|v| found.residual(v).norm())
        .fold(0.0, f64::max);
    let surplus: Vec<SymVector> = found.vectors().iter().map(|v| w.residual(v)).collect();
    let surplus = extend_orthonormal(&[], &surplus, w.rank_tol().max(1e-8));
    let limit = cap.saturating_sub(guard);
    let surplus_low_mass = surplus
        .iter()
        .map(|v| {
            v.coords()
                .iter()
                .take(limit + 1)
                .map(|c| c.norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok(Recovery {
        residual,
        surplus_rank: surplus.len(),
        surplus_low_mass,
    })
}

/// Tolerance for the orthogonality and norm premises of
/// [`construct_intermediate`].
pub const PREMISE_TOL: f64 = 1e-10;

/// Invariant subspace generated by a wandering basis of a smaller subspace
/// together with one extra unit wandering vector orthogonal to it.
///
/// Every premise is checked first; the first failure is reported by name.
pub fn construct_intermediate(
    wn_basis: &Frame,
    q_hat: &SymVector,
    cap: usize,
) -> Result<InvariantModel> {
    let norm = q_hat.norm();
    if (norm - 1.0).abs() > PREMISE_TOL {
        return Err(Error::premise("unit norm", format!("||q_hat|| = {norm}")));
    }
    for (i, q) in wn_basis.vectors().iter().enumerate() {
        let ip = q_hat.inner(q).norm();
        if ip > PREMISE_TOL {
            return Err(Error::premise(
                "orthogonality",
                format!("|<q_hat, q_{i}>| = {ip:e}"),
            ));
        }
    }
    let all: Vec<&SymVector> = wn_basis.vectors().iter().chain([q_hat]).collect();
    let last = all.len() - 1;
    let label = |i: usize| {
        if i == last {
            "q_hat".to_string()
        } else {
            format!("q_{i}")
        }
    };
    for (i, q) in all.iter().enumerate() {
        let r = is_wandering_vector(q);
        if !r.passed {
            return Err(Error::premise(
                "is_wandering_vector",
                format!(
                    "{} violates at k = {} by {:e}",
                    label(i),
                    r.worst_index,
                    r.worst_value
                ),
            ));
        }
    }
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i == j {
                continue;
            }
            let r = cross_condition(all[i], all[j]);
            if !r.passed {
                return Err(Error::premise(
                    "cross_condition",
                    format!(
                        "({}, {}) violates at k = {} by {:e}",
                        label(i),
                        label(j),
                        r.worst_index,
                        r.worst_value
                    ),
                ));
            }
        }
    }
    let generators: Vec<SymVector> = all.into_iter().cloned().collect();
    InvariantModel::generated_by(&generators, cap, wn_basis.rank_tol())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn frame(vs: &[SymVector]) -> Frame {
        orthonormalize(vs, DEFAULT_RANK_TOL).unwrap()
    }

    #[test]
    fn orthonormalize_examples() {
        let f = frame(&[SymVector::basis(0), SymVector::basis(0)]);
        assert_eq!(f.rank(), 1);
        assert_eq!(f.source_count(), 2);
        assert_eq!(f.vectors()[0], SymVector::basis(0));

        let a = SymVector::from_real(&[1.0, 1.0]);
        let b = SymVector::from_real(&[1.0, -1.0]);
        let f = frame(&[a, b]);
        assert_eq!(f.rank(), 2);
        assert!(f.gram_defect() < 1e-15);

        let p1 = SymVector::from_real(&[0.0, 2f64.sqrt()]);
        let f = frame(&[p1]);
        assert!((f.vectors()[0].clone() - SymVector::basis(1)).norm() < 1e-15);
    }

    #[test]
    fn orthonormalize_errors() {
        assert_eq!(
            orthonormalize(&[SymVector::zeros(3)], DEFAULT_RANK_TOL),
            Err(Error::EmptySpan)
        );
        assert_eq!(orthonormalize(&[], DEFAULT_RANK_TOL), Err(Error::EmptySpan));
        assert!(matches!(
            orthonormalize(&[SymVector::basis(0)], 1.5),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn contains_examples() {
        let f = frame(&[SymVector::basis(0)]);
        let r = f.contains(&SymVector::basis(0), 1e-12);
        assert!(r.inside);
        assert_eq!(r.residual, 0.0);
        let r = f.contains(&SymVector::basis(1), 1e-12);
        assert!(!r.inside);
        assert!((r.residual - 1.0).abs() < 1e-15);

        let f = frame(&[SymVector::from_real(&[1.0, 1.0])]);
        let r = f.contains(&SymVector::basis(0), 1e-12);
        assert!(!r.inside);
        assert!((r.residual - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn generate_examples() {
        let m = generate_invariant(&frame(&[SymVector::basis(1)]), 5).unwrap();
        assert_eq!(m.dim(), 5);
        for n in 1..=5 {
            assert!(m.basis().contains(&SymVector::basis(n), 1e-12).inside);
        }
        assert!(!m.basis().contains(&SymVector::basis(0), 1e-12).inside);

        let m = generate_invariant(&frame(&[SymVector::basis(0)]), 7).unwrap();
        assert_eq!(m.dim(), 8);

        let m = generate_invariant(&frame(&[SymVector::basis(2)]), 4).unwrap();
        assert_eq!(m.dim(), 3);
    }

    #[test]
    fn generate_rejects_generators_above_cap() {
        assert_eq!(
            generate_invariant(&frame(&[SymVector::basis(6)]), 4),
            Err(Error::CapExceeded { degree: 6, cap: 4 })
        );
    }

    #[test]
    fn wandering_examples() {
        let m = generate_invariant(&frame(&[SymVector::basis(1)]), 10).unwrap();
        let w = wandering_of(&m);
        assert_eq!(w.rank(), 1);
        assert!((w.vectors()[0].coord(1).norm() - 1.0).abs() < 1e-14);

        let m = generate_invariant(&frame(&[SymVector::basis(0)]), 10).unwrap();
        let w = wandering_of(&m);
        assert_eq!(w.rank(), 1);
        assert!((w.vectors()[0].coord(0).norm() - 1.0).abs() < 1e-14);

        let m = InvariantModel::zero_set(&[c(0.5)], 20).unwrap();
        assert_eq!(m.dim(), 20);
        let w = wandering_of(&m);
        assert_eq!(w.rank(), 1);
        // it vanishes at the zero
        let g = BergmanPoly::from_sym(&w.vectors()[0]);
        assert!(g.eval(c(0.5)).norm() < 1e-12);
    }

    #[test]
    fn models_are_invariant() {
        for m in [
            generate_invariant(&frame(&[SymVector::basis(2)]), 12).unwrap(),
            InvariantModel::zero_set(&[c(0.5), c(-1.0 / 3.0)], 25).unwrap(),
            InvariantModel::generated_by(
                &[SymVector::from_real(&[0.3, -1.0, 0.0, 2.0])],
                15,
                DEFAULT_RANK_TOL,
            )
            .unwrap(),
        ] {
            assert!(m.invariance_residual() < 1e-10);
            for g in m.generators() {
                assert!(m.basis().contains(g, 1e-10).inside);
            }
        }
    }

    #[test]
    fn zero_set_rejects_boundary_points() {
        assert!(InvariantModel::zero_set(&[c(1.0)], 10).is_err());
    }

    #[test]
    fn intermediate_premises() {
        let wn = frame(&[SymVector::basis(1)]);
        match construct_intermediate(&wn, &SymVector::basis(0), 10) {
            Err(Error::PremiseViolated { check, .. }) => assert_eq!(check, "cross_condition"),
            other => panic!("unexpected {other:?}"),
        }
        match construct_intermediate(&wn, &SymVector::basis(1), 10) {
            Err(Error::PremiseViolated { check, .. }) => assert_eq!(check, "orthogonality"),
            other => panic!("unexpected {other:?}"),
        }
        let half = SymVector::basis(3) * c(0.5);
        match construct_intermediate(&wn, &half, 10) {
            Err(Error::PremiseViolated { check, .. }) => assert_eq!(check, "unit norm"),
            other => panic!("unexpected {other:?}"),
        }
        let mix = SymVector::from_real(&[0.0, 0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        match construct_intermediate(&wn, &mix, 10) {
            Err(Error::PremiseViolated { check, .. }) => assert_eq!(check, "is_wandering_vector"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn permuted_rejects_non_permutations() {
        let f = frame(&[SymVector::basis(0), SymVector::basis(1)]);
        assert!(f.permuted(&[0, 0]).is_err());
        assert!(f.permuted(&[0]).is_err());
        assert_eq!(f.permuted(&[1, 0]).unwrap().vectors()[0], f.vectors()[1]);
    }
}
