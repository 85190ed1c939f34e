//! Truncated model of the Hardy space of the bidisc and its symmetric
//! subspace.
//!
//! Every space here is graded by total degree. A [`BidiscPoly`] stores the
//! amplitudes of `z^m w^n` for all `m + n <= deg`; a [`SymVector`] stores
//! coordinates against the orthonormal basis `e_n = p_n / sqrt(n + 1)` of the
//! symmetric subspace, where `p_n = sum_i z^i w^(n-i)`. The compression
//! `B = P_H T_z |_H` maps `e_n` to a multiple of `e_(n+1)`, so truncation at a
//! degree cap is exact for every vector whose shifts stay below the cap.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coefficients smaller than this fraction of the largest one are ignored
/// by [`SymVector::effective_degree`].
pub const DEGREE_EPS: f64 = 1e-14;

/// Symmetric-structure tolerance used when certifying reconstructed vectors.
pub const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    Z,
    W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Adjoint,
}

#[inline]
fn tri_index(m: usize, n: usize) -> usize {
    let d = m + n;
    d * (d + 1) / 2 + m
}

#[inline]
fn tri_len(deg: usize) -> usize {
    (deg + 1) * (deg + 2) / 2
}

/// Analytic polynomial on the bidisc with total degree at most `deg`.
///
/// Amplitudes are laid out antidiagonal by antidiagonal, so the degree-`d`
/// block `a_{0,d}, a_{1,d-1}, ..., a_{d,0}` is contiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiscPoly {
    deg: usize,
    coeffs: Vec<Complex64>,
}

impl BidiscPoly {
    pub fn zeros(deg: usize) -> Self {
        BidiscPoly {
            deg,
            coeffs: vec![ZERO; tri_len(deg)],
        }
    }

    /// The single monomial `c z^m w^n`.
    pub fn monomial(m: usize, n: usize, c: Complex64) -> Self {
        let mut p = Self::zeros(m + n);
        p.set(m, n, c);
        p
    }

    /// Builds a polynomial from `(m, n, amplitude)` triples; repeated
    /// monomials accumulate.
    pub fn from_terms(terms: &[(usize, usize, Complex64)]) -> Self {
        let deg = terms.iter().map(|&(m, n, _)| m + n).max().unwrap_or(0);
        let mut p = Self::zeros(deg);
        for &(m, n, c) in terms {
            p.coeffs[tri_index(m, n)] += c;
        }
        p
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    /// Amplitude of `z^m w^n`; zero outside the stored triangle.
    pub fn coeff(&self, m: usize, n: usize) -> Complex64 {
        if m + n > self.deg {
            ZERO
        } else {
            self.coeffs[tri_index(m, n)]
        }
    }

    /// Sets the amplitude of `z^m w^n`.
    ///
    /// Panics if `m + n` exceeds the stored degree.
    pub fn set(&mut self, m: usize, n: usize, c: Complex64) {
        assert!(m + n <= self.deg, "monomial outside the degree triangle");
        self.coeffs[tri_index(m, n)] = c;
    }

    /// The degree-`d` antidiagonal, ordered by increasing power of `z`.
    pub fn antidiagonal(&self, d: usize) -> &[Complex64] {
        let start = d * (d + 1) / 2;
        &self.coeffs[start..start + d + 1]
    }

    /// Iterator over `(m, n, amplitude)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.deg).flat_map(move |d| {
            self.antidiagonal(d)
                .iter()
                .enumerate()
                .map(move |(m, &c)| (m, d - m, c))
        })
    }

    /// `<f, g>` in H²(T²): monomials are orthonormal, conjugate-linear in `g`.
    pub fn inner(&self, other: &BidiscPoly) -> Complex64 {
        let len = self.coeffs.len().min(other.coeffs.len());
        self.coeffs[..len]
            .iter()
            .zip(&other.coeffs[..len])
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Re-stores the polynomial at degree `deg`, dropping anything above it.
    pub fn with_degree(&self, deg: usize) -> Self {
        let mut out = Self::zeros(deg);
        let len = tri_len(deg.min(self.deg));
        out.coeffs[..len].copy_from_slice(&self.coeffs[..len]);
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        BidiscPoly {
            deg: self.deg,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let deg = self.deg.max(other.deg);
        let a = self.with_degree(deg);
        let b = other.with_degree(deg);
        BidiscPoly {
            deg,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }

    /// Toeplitz shift by one power of `var`.
    ///
    /// `Forward` multiplies by the variable and raises the stored degree by
    /// one; `Adjoint` is the backward shift, which drops the slice where the
    /// variable has exponent zero.
    pub fn shift(&self, var: Variable, dir: Direction) -> Self {
        match dir {
            Direction::Forward => {
                let mut out = Self::zeros(self.deg + 1);
                for (m, n, c) in self.terms() {
                    match var {
                        Variable::Z => out.coeffs[tri_index(m + 1, n)] = c,
                        Variable::W => out.coeffs[tri_index(m, n + 1)] = c,
                    }
                }
                out
            }
            Direction::Adjoint => {
                let deg = self.deg.saturating_sub(1);
                let mut out = Self::zeros(deg);
                for (m, n, c) in self.terms() {
                    match var {
                        Variable::Z if m > 0 => out.coeffs[tri_index(m - 1, n)] = c,
                        Variable::W if n > 0 => out.coeffs[tri_index(m, n - 1)] = c,
                        _ => {}
                    }
                }
                out
            }
        }
    }

    /// [`shift`](Self::shift) that refuses to grow past `cap`.
    pub fn try_shift(&self, var: Variable, dir: Direction, cap: usize) -> Result<Self> {
        if dir == Direction::Forward && self.deg + 1 > cap {
            return Err(Error::CapExceeded {
                degree: self.deg + 1,
                cap,
            });
        }
        Ok(self.shift(var, dir))
    }

    /// Orthogonal projection onto the symmetric subspace: each antidiagonal
    /// is replaced by its average.
    pub fn project_sym(&self) -> SymVector {
        let coords = (0..=self.deg)
            .map(|d| {
                let s: Complex64 = self.antidiagonal(d).iter().sum();
                s / ((d + 1) as f64).sqrt()
            })
            .collect();
        SymVector { coords }
    }

    /// Largest deviation of any amplitude from its antidiagonal mean.
    pub fn symmetry_defect(&self) -> f64 {
        (0..=self.deg)
            .map(|d| {
                let diag = self.antidiagonal(d);
                let mean = diag.iter().sum::<Complex64>() / (d + 1) as f64;
                diag.iter().map(|c| (c - mean).norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Reads the polynomial as a [`SymVector`], failing if its antidiagonals
    /// are not constant to `tol` (relative to the largest amplitude).
    pub fn to_sym(&self, tol: f64) -> Result<SymVector> {
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let spread = self.symmetry_defect();
        if spread > tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotSymmetric { spread });
        }
        Ok(self.project_sym())
    }
}

impl Add for &BidiscPoly {
    type Output = BidiscPoly;
    fn add(self, rhs: Self) -> BidiscPoly {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BidiscPoly {
    type Output = BidiscPoly;
    fn sub(self, rhs: Self) -> BidiscPoly {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// The `n`-th symmetric polynomial `p_n = z^n + z^(n-1) w + ... + w^n`.
pub fn p_n(n: usize) -> BidiscPoly {
    let mut p = BidiscPoly::zeros(n);
    for i in 0..=n {
        p.set(i, n - i, Complex64::new(1.0, 0.0));
    }
    p
}

/// A vector of the symmetric subspace in the basis `e_n = p_n / sqrt(n + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymVector {
    coords: Vec<Complex64>,
}

impl SymVector {
    pub fn zeros(deg: usize) -> Self {
        SymVector {
            coords: vec![ZERO; deg + 1],
        }
    }

    /// The basis vector `e_n`.
    pub fn basis(n: usize) -> Self {
        let mut v = Self::zeros(n);
        v.coords[n] = Complex64::new(1.0, 0.0);
        v
    }

    /// Coordinates `b_0, ..., b_N`; an empty slice is read as the zero vector
    /// of degree 0.
    pub fn from_coords(coords: Vec<Complex64>) -> Self {
        if coords.is_empty() {
            Self::zeros(0)
        } else {
            SymVector { coords }
        }
    }

    pub fn from_real(coords: &[f64]) -> Self {
        Self::from_coords(coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Stored degree.
    pub fn deg(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coord(&self, n: usize) -> Complex64 {
        self.coords.get(n).copied().unwrap_or(ZERO)
    }

    /// Highest index whose coordinate is not negligible next to the largest
    /// one; zero for the zero vector.
    pub fn effective_degree(&self) -> usize {
        let scale = self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0;
        }
        self.coords
            .iter()
            .rposition(|c| c.norm() > DEGREE_EPS * scale)
            .unwrap_or(0)
    }

    /// Pads with zeros or truncates to the given stored degree.
    pub fn with_degree(&self, deg: usize) -> Self {
        let mut coords = self.coords.clone();
        coords.resize(deg + 1, ZERO);
        SymVector { coords }
    }

    pub fn inner(&self, other: &SymVector) -> Complex64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns `self / ||self||`, or `None` for the zero vector.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0).then(|| self * Complex64::new(1.0 / n, 0.0))
    }

    /// `self += c * other`, growing the stored degree if needed.
    pub fn axpy(&mut self, c: Complex64, other: &SymVector) {
        if other.coords.len() > self.coords.len() {
            self.coords.resize(other.coords.len(), ZERO);
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            *a += c * b;
        }
    }

    /// Expansion into monomials: `a_{i, n-i} = b_n / sqrt(n + 1)`.
    pub fn to_bidisc(&self) -> BidiscPoly {
        let mut p = BidiscPoly::zeros(self.deg());
        for (n, &b) in self.coords.iter().enumerate() {
            let a = b / ((n + 1) as f64).sqrt();
            for i in 0..=n {
                p.set(i, n - i, a);
            }
        }
        p
    }

    /// `B^power` or `(B*)^power` on the symmetric subspace.
    ///
    /// `B e_n = sqrt((n+1)/(n+2)) e_(n+1)`, `B* e_0 = 0`. A forward shift
    /// raises the stored degree by `power`.
    pub fn bergman_shift(&self, power: usize, dir: Direction) -> Self {
        let mut v = self.clone();
        for _ in 0..power {
            v = match dir {
                Direction::Forward => {
                    let mut out = Self::zeros(v.deg() + 1);
                    for (n, &b) in v.coords.iter().enumerate() {
                        out.coords[n + 1] = b * weight(n);
                    }
                    out
                }
                Direction::Adjoint => {
                    let mut out = Self::zeros(v.deg().saturating_sub(1));
                    for (n, &b) in v.coords.iter().enumerate().skip(1) {
                        out.coords[n - 1] = b * weight(n - 1);
                    }
                    out
                }
            };
        }
        v
    }

    /// [`bergman_shift`](Self::bergman_shift) that refuses to grow past `cap`.
    pub fn try_bergman_shift(&self, power: usize, dir: Direction, cap: usize) -> Result<Self> {
        if dir == Direction::Forward && self.deg() + power > cap {
            return Err(Error::CapExceeded {
                degree: self.deg() + power,
                cap,
            });
        }
        Ok(self.bergman_shift(power, dir))
    }

    /// The slice `q(0, w)`: since `p_k(0, w) = w^k`, `q_k = b_k / sqrt(k + 1)`.
    pub fn slice_z0(&self) -> CirclePoly {
        CirclePoly::new(
            self.coords
                .iter()
                .enumerate()
                .map(|(k, &b)| b / ((k + 1) as f64).sqrt())
                .collect(),
        )
    }

    /// Rebuilds a symmetric vector from its `z = 0` slice via
    /// `q(z, w) = sum_j z^j (T_w*)^j q(0, w)`.
    ///
    /// The series is assembled as a bidisc polynomial and then certified
    /// symmetric; certification cannot fail for a well-formed slice.
    pub fn reconstruct(q0: &CirclePoly) -> Self {
        let series = reconstruction_series(q0);
        series
            .to_sym(SYMMETRY_TOL)
            .expect("series representation is symmetric by construction")
    }
}

/// `sum_j z^j (T_w*)^j q0` as a bidisc polynomial.
pub fn reconstruction_series(q0: &CirclePoly) -> BidiscPoly {
    let deg = q0.deg();
    let mut out = BidiscPoly::zeros(deg);
    let mut row = q0.clone();
    for j in 0..=deg {
        for (k, &c) in row.coeffs().iter().enumerate() {
            out.set(j, k, c);
        }
        row = row.backward_shift();
    }
    out
}

#[inline]
fn weight(n: usize) -> f64 {
    ((n + 1) as f64 / (n + 2) as f64).sqrt()
}

impl Add for SymVector {
    type Output = SymVector;
    fn add(mut self, rhs: SymVector) -> SymVector {
        self.axpy(Complex64::new(1.0, 0.0), &rhs);
        self
    }
}

impl Sub for SymVector {
    type Output = SymVector;
    fn sub(mut self, rhs: SymVector) -> SymVector {
        self.axpy(Complex64::new(-1.0, 0.0), &rhs);
        self
    }
}

impl Neg for SymVector {
    type Output = SymVector;
    fn neg(self) -> SymVector {
        SymVector {
            coords: self.coords.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul<Complex64> for &SymVector {
    type Output = SymVector;
    fn mul(self, c: Complex64) -> SymVector {
        SymVector {
            coords: self.coords.iter().map(|b| b * c).collect(),
        }
    }
}

impl Mul<Complex64> for SymVector {
    type Output = SymVector;
    fn mul(self, c: Complex64) -> SymVector {
        &self * c
    }
}

/// Polynomial `sum_n c_n z^n` in the Bergman space with normalized area
/// measure, where `||z^n||^2 = 1 / (n + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BergmanPoly {
    coeffs: Vec<Complex64>,
}

impl BergmanPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            BergmanPoly { coeffs: vec![ZERO] }
        } else {
            BergmanPoly { coeffs }
        }
    }

    /// Monic polynomial with the given zeros.
    pub fn from_zeros(zeros: &[Complex64]) -> Self {
        let mut p = BergmanPoly::new(vec![Complex64::new(1.0, 0.0)]);
        for &a in zeros {
            p = p.mul_linear(a);
        }
        p
    }

    /// Multiplies by `(z - a)`.
    pub fn mul_linear(&self, a: Complex64) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + 1];
        for (n, &c) in self.coeffs.iter().enumerate() {
            out[n + 1] += c;
            out[n] -= a * c;
        }
        BergmanPoly { coeffs: out }
    }

    /// Multiplication by `z`.
    pub fn mul_z(&self) -> Self {
        let mut out = vec![ZERO];
        out.extend_from_slice(&self.coeffs);
        BergmanPoly { coeffs: out }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c.norm_sqr() / (n + 1) as f64)
            .sum()
    }

    /// The unitary `U z^n = p_n / (n + 1) = e_n / sqrt(n + 1)`.
    pub fn to_sym(&self) -> SymVector {
        SymVector::from_coords(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| c / ((n + 1) as f64).sqrt())
                .collect(),
        )
    }

    /// Inverse of [`to_sym`](Self::to_sym).
    pub fn from_sym(v: &SymVector) -> Self {
        BergmanPoly::new(
            v.coords()
                .iter()
                .enumerate()
                .map(|(n, &b)| b * ((n + 1) as f64).sqrt())
                .collect(),
        )
    }
}

/// One-variable analytic polynomial in `w`, viewed in H²(T).
#[derive(Debug, Clone, PartialEq)]
pub struct CirclePoly {
    coeffs: Vec<Complex64>,
}

impl CirclePoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            CirclePoly { coeffs: vec![ZERO] }
        } else {
            CirclePoly { coeffs }
        }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `T_w*`: drops the constant term and lowers every exponent by one.
    pub fn backward_shift(&self) -> Self {
        Self::new(self.coeffs.iter().skip(1).copied().collect())
    }

    /// Multiplication by `w`.
    pub fn forward_shift(&self) -> Self {
        let mut coeffs = vec![ZERO];
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }

    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * w + c)
    }

    pub fn inner(&self, other: &CirclePoly) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn inner_product_examples() {
        assert!(close(p_n(1).inner(&p_n(1)), c(2.0)));
        let zw = BidiscPoly::monomial(1, 1, c(1.0));
        assert!(close(zw.inner(&zw), c(1.0)));
        let z2 = BidiscPoly::monomial(2, 0, c(1.0));
        assert!(close(p_n(2).inner(&z2), c(1.0)));
        // conjugate-linear in the second slot
        let i = Complex64::new(0.0, 1.0);
        assert!(close(z2.inner(&z2.scale(i)), -i));
    }

    #[test]
    fn shift_examples() {
        let one = BidiscPoly::monomial(0, 0, c(1.0));
        let z = BidiscPoly::monomial(1, 0, c(1.0));
        assert_eq!(one.shift(Variable::Z, Direction::Forward), z.with_degree(1));
        let z2 = BidiscPoly::monomial(2, 0, c(1.0));
        assert_eq!(z2.shift(Variable::Z, Direction::Adjoint), z);
        let w3 = BidiscPoly::monomial(0, 3, c(1.0));
        assert_eq!(w3.shift(Variable::Z, Direction::Adjoint).norm(), 0.0);
    }

    #[test]
    fn shift_cap_is_enforced() {
        let p = p_n(3);
        assert_eq!(
            p.try_shift(Variable::W, Direction::Forward, 3),
            Err(Error::CapExceeded { degree: 4, cap: 3 })
        );
        assert!(p.try_shift(Variable::W, Direction::Forward, 4).is_ok());
        assert!(p.try_shift(Variable::W, Direction::Adjoint, 3).is_ok());
    }

    #[test]
    fn adjoint_undoes_forward() {
        let f = BidiscPoly::from_terms(&[(0, 0, c(1.0)), (2, 1, c(-3.0)), (0, 4, c(0.5))]);
        for var in [Variable::Z, Variable::W] {
            let back = f
                .shift(var, Direction::Forward)
                .shift(var, Direction::Adjoint);
            assert!((&back - &f).norm() < 1e-15);
        }
    }

    #[test]
    fn projection_examples() {
        let z = BidiscPoly::monomial(1, 0, c(1.0));
        let pz = z.project_sym();
        // oracle: <z, p_1> / ||p_1||^2 = 1/2, so P z = p_1 / 2 = e_1 / sqrt(2)
        let expected = z.inner(&p_n(1)) / p_n(1).norm_sqr();
        assert!(close(pz.coord(1), expected * 2f64.sqrt()));
        assert!(close(pz.coord(1), c(std::f64::consts::FRAC_1_SQRT_2)));

        for n in 0..6 {
            let sym = p_n(n).project_sym().to_bidisc();
            assert!((&sym - &p_n(n)).norm() < 1e-14);
        }

        let zw = &z - &BidiscPoly::monomial(0, 1, c(1.0));
        assert!(zw.project_sym().norm() < 1e-15);
    }

    #[test]
    fn bergman_shift_examples() {
        // oracle: expand z * p_n, then project
        for n in 0..4 {
            let via_ambient = SymVector::basis(n)
                .to_bidisc()
                .shift(Variable::Z, Direction::Forward)
                .project_sym();
            let direct = SymVector::basis(n).bergman_shift(1, Direction::Forward);
            assert!((via_ambient - direct.clone()).norm() < 1e-15);
            let w = ((n + 1) as f64 / (n + 2) as f64).sqrt();
            assert!(close(direct.coord(n + 1), c(w)));
        }
        assert!(close(
            SymVector::basis(0)
                .bergman_shift(1, Direction::Forward)
                .coord(1),
            c(std::f64::consts::FRAC_1_SQRT_2)
        ));
        assert!(close(
            SymVector::basis(1)
                .bergman_shift(1, Direction::Forward)
                .coord(2),
            c((2.0f64 / 3.0).sqrt())
        ));
        assert_eq!(
            SymVector::basis(0)
                .bergman_shift(1, Direction::Adjoint)
                .norm(),
            0.0
        );
    }

    #[test]
    fn bergman_shift_adjoint_pairing() {
        let u = SymVector::from_coords(vec![c(1.0), Complex64::new(0.2, -1.0), c(0.3)]);
        let v = SymVector::from_coords(vec![c(-0.5), c(2.0), Complex64::new(0.0, 1.0), c(1.0)]);
        let lhs = u.bergman_shift(1, Direction::Forward).inner(&v);
        let rhs = u.inner(&v.bergman_shift(1, Direction::Adjoint));
        assert!(close(lhs, rhs));
    }

    #[test]
    fn bergman_shift_cap() {
        let v = SymVector::basis(4);
        assert!(matches!(
            v.try_bergman_shift(2, Direction::Forward, 5),
            Err(Error::CapExceeded { degree: 6, cap: 5 })
        ));
        assert_eq!(
            v.try_bergman_shift(1, Direction::Forward, 5).unwrap().deg(),
            5
        );
    }

    #[test]
    fn bergman_unitary_examples() {
        let one = BergmanPoly::new(vec![c(1.0)]);
        assert_eq!(one.to_sym(), SymVector::basis(0));

        // U(z) = p_1 / 2
        let z = BergmanPoly::new(vec![c(0.0), c(1.0)]);
        let uz = z.to_sym().to_bidisc();
        assert!((&uz - &p_n(1).scale(c(0.5))).norm() < 1e-15);

        let z_unit = BergmanPoly::new(vec![c(0.0), c(2f64.sqrt())]);
        assert!((z_unit.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((z_unit.to_sym() - SymVector::basis(1)).norm() < 1e-15);
    }

    #[test]
    fn bergman_unitary_intertwines_multiplication() {
        let f = BergmanPoly::from_zeros(&[c(0.5), Complex64::new(-0.2, 0.4)]);
        let lhs = f.mul_z().to_sym();
        let rhs = f.to_sym().bergman_shift(1, Direction::Forward);
        assert!((lhs - rhs).norm() < 1e-15);
        assert!((f.norm_sqr() - f.to_sym().norm_sqr()).abs() < 1e-14);
        assert_eq!(BergmanPoly::from_sym(&f.to_sym()).coeffs().len(), 3);
    }

    #[test]
    fn slice_examples() {
        assert_eq!(
            SymVector::basis(0).slice_z0(),
            CirclePoly::from_real(&[1.0])
        );
        let s1 = SymVector::basis(1).slice_z0();
        assert!(close(s1.coeff(1), c(std::f64::consts::FRAC_1_SQRT_2)));
        for n in 0..8 {
            let s = SymVector::basis(n).slice_z0();
            assert!(close(s.coeff(n), c(1.0 / ((n + 1) as f64).sqrt())));
            assert!(s.coeffs()[..n].iter().all(|x| x.norm() == 0.0));
        }
    }

    #[test]
    fn reconstruct_examples() {
        let w = CirclePoly::from_real(&[0.0, 1.0]);
        let series = reconstruction_series(&w);
        assert!((&series - &p_n(1)).norm() < 1e-15);
        assert_eq!(
            SymVector::reconstruct(&CirclePoly::from_real(&[1.0])),
            SymVector::basis(0)
        );
        let e2 = SymVector::basis(2);
        assert!((SymVector::reconstruct(&e2.slice_z0()) - e2).norm() < 1e-15);
    }

    #[test]
    fn to_sym_rejects_asymmetric_input() {
        let z = BidiscPoly::monomial(1, 0, c(1.0));
        assert!(matches!(z.to_sym(1e-12), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn effective_degree_ignores_padding() {
        let v = SymVector::basis(3).with_degree(10);
        assert_eq!(v.deg(), 10);
        assert_eq!(v.effective_degree(), 3);
        assert_eq!(SymVector::zeros(4).effective_degree(), 0);
    }
}
