//! Characterizations of wandering vectors and wandering subspaces.
//!
//! For `q` in the symmetric subspace with slice `q(0, w) = sum_k q_k w^k`,
//! the following are equivalent, coefficient by coefficient in `k >= 1`:
//!
//! * the `k`-th Laurent coefficient of `sum_j |(T_w*)^j q(0, w)|^2` vanishes;
//! * `s_k = sum_j (j + 1) q_j conj(q_(j+k))` vanishes;
//! * `<T_z^k q, q>` vanishes in H²(T²).
//!
//! Precisely, `conj(c_k) = s_k = <T_z^k q, q>`. Each quantity is computed here
//! by its own route (row convolution, weighted coefficient sum, ambient
//! shift) so the three can be checked against one another.

use num_complex::Complex64;

use crate::bidisc::{CirclePoly, Direction, SymVector, Variable};
use crate::error::{Error, Result};
use crate::subspace::{orthonormalize, Frame, DEFAULT_RANK_TOL};

/// Relative tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Laurent polynomial `sum_{k=-N}^{N} c_k e^{ik theta}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    half: usize,
    coeffs: Vec<Complex64>,
}

impl TrigPoly {
    pub fn zeros(half: usize) -> Self {
        TrigPoly {
            half,
            coeffs: vec![ZERO; 2 * half + 1],
        }
    }

    /// Largest `N` with storage for `c_{-N}..c_N`.
    pub fn half_width(&self) -> usize {
        self.half
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.half {
            ZERO
        } else {
            self.coeffs[(k + self.half as i64) as usize]
        }
    }

    fn coeff_mut(&mut self, k: i64) -> &mut Complex64 {
        &mut self.coeffs[(k + self.half as i64) as usize]
    }

    /// `(k, c_k)` from `-N` to `N`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i as i64 - self.half as i64, c))
    }

    /// Value at the unit-circle point `w`.
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.iter().map(|(k, c)| c * w.powi(k as i32)).sum()
    }

    pub fn eval_angle(&self, theta: f64) -> Complex64 {
        self.eval(Complex64::from_polar(1.0, theta))
    }

    /// Largest `|c_k|` over `k != 0`, with its index.
    pub fn nonconstant_part(&self) -> (i64, f64) {
        worst(self.iter().filter(|&(k, _)| k != 0))
    }

    /// Largest `|c_k|` over `k < 0`, with its index.
    pub fn antiholomorphic_part(&self) -> (i64, f64) {
        worst(self.iter().filter(|&(k, _)| k < 0))
    }
}

fn worst(it: impl Iterator<Item = (i64, Complex64)>) -> (i64, f64) {
    it.fold((0, 0.0), |(bk, bv), (k, c)| {
        let v = c.norm();
        if v > bv {
            (k, v)
        } else {
            (bk, bv)
        }
    })
}

/// Outcome of a criterion: the largest violation and where it occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub passed: bool,
    pub worst_index: i64,
    pub worst_value: f64,
    pub tol: f64,
    /// For multi-vector checks, the pair of input positions blamed for the
    /// worst violation.
    pub pair: Option<(usize, usize)>,
}

impl CriterionReport {
    pub fn new(worst_index: i64, worst_value: f64, tol: f64) -> Self {
        CriterionReport {
            passed: worst_value <= tol,
            worst_index,
            worst_value,
            tol,
            pair: None,
        }
    }

    fn with_pair(mut self, pair: (usize, usize)) -> Self {
        self.pair = Some(pair);
        self
    }

    /// Keeps whichever of the two reports has the larger violation.
    fn merge(self, other: CriterionReport) -> CriterionReport {
        let tol = self.tol.min(other.tol);
        let mut best = if other.worst_value > self.worst_value {
            other
        } else {
            self
        };
        best.tol = tol;
        best.passed = best.passed && best.worst_value <= tol;
        best
    }
}

/// `sum_j (T_w*)^j a · conj((T_w*)^j b)` as exact Laurent coefficients,
/// accumulated row by row from the backward-shift sequences.
pub fn cross_sum(a: &CirclePoly, b: &CirclePoly) -> TrigPoly {
    let half = a.deg().max(b.deg());
    let mut out = TrigPoly::zeros(half);
    let mut ra = a.clone();
    let mut rb = b.clone();
    for _ in 0..=half {
        for (p, &x) in ra.coeffs().iter().enumerate() {
            if x == ZERO {
                continue;
            }
            for (q, &y) in rb.coeffs().iter().enumerate() {
                *out.coeff_mut(p as i64 - q as i64) += x * y.conj();
            }
        }
        ra = ra.backward_shift();
        rb = rb.backward_shift();
    }
    out
}

/// `sum_j |(T_w*)^j q(0, w)|^2` as a Laurent polynomial; constant exactly
/// when `q` is a wandering vector, with `c_0 = ||q||^2`.
pub fn radial_sum(q: &SymVector) -> TrigPoly {
    let s = q.slice_z0();
    cross_sum(&s, &s)
}

/// Relative constancy check on [`radial_sum`].
pub fn radial_constancy(q: &SymVector) -> CriterionReport {
    radial_constancy_with_tol(q, DEFAULT_TOL * q.norm_sqr())
}

pub fn radial_constancy_with_tol(q: &SymVector, tol: f64) -> CriterionReport {
    let (k, v) = radial_sum(q).nonconstant_part();
    CriterionReport::new(k, v, tol)
}

/// Weight attached to `q_j conj(q_(j+k))` in the coefficient criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weight {
    /// `j + 1`: the number of backward-shift rows that carry the product.
    /// This is the weight equivalent to constancy of the radial sum.
    #[default]
    Shifted,
    /// Bare `j`. It drops the `j = 0` term, so it does not detect, for
    /// example, the non-wandering vector `(e_0 + e_1)/sqrt(2)`; kept for
    /// comparison only.
    Unshifted,
}

impl Weight {
    fn at(self, j: usize) -> f64 {
        match self {
            Weight::Shifted => (j + 1) as f64,
            Weight::Unshifted => j as f64,
        }
    }
}

/// `s_k = sum_j weight(j) q_j conj(q_(j+k))` for `k = 1..=deg`.
pub fn coefficient_sums(q: &SymVector, weight: Weight) -> Vec<Complex64> {
    let s = q.slice_z0();
    let coeffs = s.coeffs();
    let deg = s.deg();
    (1..=deg)
        .map(|k| {
            (0..=deg - k)
                .map(|j| coeffs[j] * coeffs[j + k].conj() * weight.at(j))
                .sum()
        })
        .collect()
}

pub fn coeff_criterion(q: &SymVector, weight: Weight) -> CriterionReport {
    coeff_criterion_with_tol(q, weight, DEFAULT_TOL * q.norm_sqr())
}

pub fn coeff_criterion_with_tol(q: &SymVector, weight: Weight, tol: f64) -> CriterionReport {
    let (k, v) = worst(
        coefficient_sums(q, weight)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i as i64 + 1, s)),
    );
    CriterionReport::new(k, v, tol)
}

/// A single vector is wandering iff the shifted-weight coefficient criterion
/// passes.
pub fn is_wandering_vector(q: &SymVector) -> CriterionReport {
    coeff_criterion(q, Weight::Shifted)
}

/// `g_k = <T_z^k q1, q2>` in H²(T²) for `k = 1..=kmax`, computed in the
/// ambient bidisc space without projecting.
pub fn shift_gram(
    q1: &SymVector,
    q2: &SymVector,
    kmax: usize,
    cap: usize,
) -> Result<Vec<Complex64>> {
    let deg = q1.effective_degree();
    if deg + kmax > cap {
        return Err(Error::CapExceeded {
            degree: deg + kmax,
            cap,
        });
    }
    let target = q2.to_bidisc();
    let mut moving = q1.with_degree(deg).to_bidisc();
    let mut out = Vec::with_capacity(kmax);
    for _ in 0..kmax {
        moving = moving.shift(Variable::Z, Direction::Forward);
        out.push(moving.inner(&target));
    }
    Ok(out)
}

/// Holomorphy of `sum_j (T_w*)^j q1(0,w) conj((T_w*)^j q2(0,w))`: every
/// strictly negative Laurent coefficient must vanish.
pub fn cross_condition(q1: &SymVector, q2: &SymVector) -> CriterionReport {
    cross_condition_with_tol(q1, q2, DEFAULT_TOL * q1.norm() * q2.norm())
}

pub fn cross_condition_with_tol(q1: &SymVector, q2: &SymVector, tol: f64) -> CriterionReport {
    let (k, v) = cross_sum(&q1.slice_z0(), &q2.slice_z0()).antiholomorphic_part();
    CriterionReport::new(k, v, tol)
}

/// Certifies that every vector in the span of `basis` is wandering: each
/// vector passes the coefficient criterion and every pair passes the cross
/// condition in both orders, which makes the cross term constant.
pub fn is_wandering_span(basis: &[SymVector]) -> Result<CriterionReport> {
    is_wandering_span_with_tol(basis, DEFAULT_TOL)
}

/// [`is_wandering_span`] with a caller-chosen relative tolerance.
pub fn is_wandering_span_with_tol(basis: &[SymVector], rel_tol: f64) -> Result<CriterionReport> {
    if basis.is_empty() {
        return Err(Error::EmptySpan);
    }
    let frame = orthonormalize(basis, DEFAULT_RANK_TOL)?;
    if frame.rank() < basis.len() {
        return Err(Error::RankDeficient {
            rank: frame.rank(),
            count: basis.len(),
        });
    }
    let mut report: Option<CriterionReport> = None;
    let mut fold = |r: CriterionReport| {
        report = Some(match report.take() {
            None => r,
            Some(prev) => prev.merge(r),
        });
    };
    for (i, q) in basis.iter().enumerate() {
        let tol = rel_tol * q.norm_sqr();
        fold(coeff_criterion_with_tol(q, Weight::Shifted, tol).with_pair((i, i)));
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let tol = rel_tol * basis[i].norm() * basis[j].norm();
            fold(cross_condition_with_tol(&basis[i], &basis[j], tol).with_pair((i, j)));
            fold(cross_condition_with_tol(&basis[j], &basis[i], tol).with_pair((j, i)));
        }
    }
    Ok(report.expect("basis is non-empty"))
}

/// Pointwise orthonormality of the backward-shift sequences of an
/// orthonormal wandering basis: for every pair the cross sum must be the
/// constant `delta_{kk'}`.
pub fn orthonormal_system_check(basis: &Frame) -> CriterionReport {
    orthonormal_system_check_with_tol(basis, DEFAULT_TOL)
}

pub fn orthonormal_system_check_with_tol(basis: &Frame, tol: f64) -> CriterionReport {
    let slices: Vec<CirclePoly> = basis.vectors().iter().map(|v| v.slice_z0()).collect();
    let mut report = CriterionReport::new(0, 0.0, tol);
    for i in 0..slices.len() {
        for j in i..slices.len() {
            let trig = cross_sum(&slices[i], &slices[j]);
            let delta = if i == j { 1.0 } else { 0.0 };
            let (mut k, mut v) = trig.nonconstant_part();
            let dc = (trig.coeff(0) - delta).norm();
            if dc > v {
                k = 0;
                v = dc;
            }
            report = report.merge(CriterionReport::new(k, v, tol).with_pair((i, j)));
        }
    }
    report
}
