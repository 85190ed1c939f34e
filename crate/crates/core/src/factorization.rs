//! Sequence-space picture of wandering subspaces.
//!
//! [`lw_map`] sends `q` to the finite sequence of backward shifts of its slice
//! `q(0, w)`. For an orthonormal wandering basis these sequences are
//! orthonormal at every point of the circle, so pairing two bases index by
//! index defines a pointwise isometry between the spans of their images.
//! Everything here is evaluated on circle samples.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bidisc::{CirclePoly, SymVector};
use crate::criteria::orthonormal_system_check_with_tol;
use crate::error::{Error, Result};
use crate::subspace::{wandering_of, Frame, InvariantModel};

/// Frames must pass the pointwise orthonormality check to this before an
/// isometry is built from them.
pub const PREMISE_TOL: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `n` equispaced points `e^{2 pi i m / n}` on the unit circle.
pub fn circle_samples(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|m| Complex64::from_polar(1.0, 2.0 * PI * m as f64 / n as f64))
        .collect()
}

/// Sample count that resolves trig polynomials built from degree-`deg` data.
pub fn default_sample_count(deg: usize) -> usize {
    4 * deg + 1
}

/// Rows `(T_w*)^j q(0, ·)` for `j = 0..depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct LwImage {
    rows: Vec<CirclePoly>,
}

impl LwImage {
    pub fn rows(&self) -> &[CirclePoly] {
        &self.rows
    }

    /// Number of stored rows; rows past this are zero.
    pub fn depth(&self) -> usize {
        self.rows.len()
    }

    /// The sequence `(row_0(w), row_1(w), ...)` padded with zeros to `len`.
    pub fn eval(&self, w: Complex64, len: usize) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self.rows.iter().map(|r| r.eval(w)).collect();
        out.resize(len.max(out.len()), ZERO);
        out
    }
}

pub fn lw_map(q: &SymVector) -> LwImage {
    let mut row = q.slice_z0();
    let mut rows = Vec::with_capacity(row.deg() + 1);
    for _ in 0..=q.deg() {
        let next = row.backward_shift();
        rows.push(row);
        row = next;
    }
    while rows.len() > 1 && rows.last().is_some_and(|r| r.norm_sqr() == 0.0) {
        rows.pop();
    }
    LwImage { rows }
}

fn seq_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn seq_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// The map sending the `L_w` image of the `k`-th source vector to the `L_w`
/// image of the `pairing[k]`-th target vector, extended linearly.
#[derive(Debug, Clone)]
pub struct PairedIsometry {
    source: Frame,
    target: Frame,
    pairing: Vec<usize>,
    source_images: Vec<LwImage>,
    target_images: Vec<LwImage>,
}

impl PairedIsometry {
    /// Index-by-index pairing.
    pub fn new(source: Frame, target: Frame) -> Result<Self> {
        let pairing = (0..source.rank()).collect();
        Self::with_pairing(source, target, pairing)
    }

    pub fn with_pairing(source: Frame, target: Frame, pairing: Vec<usize>) -> Result<Self> {
        if source.rank() != target.rank() {
            return Err(Error::RankMismatch {
                source_rank: source.rank(),
                target_rank: target.rank(),
            });
        }
        // validates the permutation
        target.permuted(&pairing)?;
        let source_images = source.vectors().iter().map(lw_map).collect();
        let target_images = target.vectors().iter().map(lw_map).collect();
        Ok(PairedIsometry {
            source,
            target,
            pairing,
            source_images,
            target_images,
        })
    }

    pub fn source(&self) -> &Frame {
        &self.source
    }

    pub fn target(&self) -> &Frame {
        &self.target
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn rank(&self) -> usize {
        self.source.rank()
    }

    fn depth(&self) -> usize {
        self.source_images
            .iter()
            .chain(&self.target_images)
            .map(LwImage::depth)
            .max()
            .unwrap_or(1)
    }

    fn check_len(&self, coeffs: &[Complex64]) -> Result<()> {
        if coeffs.len() != self.rank() {
            return Err(Error::RankMismatch {
                source_rank: self.rank(),
                target_rank: coeffs.len(),
            });
        }
        Ok(())
    }

    /// `sum_k x_k L_w(source_k)(w)`.
    pub fn source_at(&self, coeffs: &[Complex64], w: Complex64, len: usize) -> Vec<Complex64> {
        combine(&self.source_images, coeffs, w, len)
    }

    /// `sum_k x_k L_w(target_(pairing k))(w)`: the image of
    /// [`source_at`](Self::source_at) under the isometry.
    pub fn image_at(&self, coeffs: &[Complex64], w: Complex64, len: usize) -> Vec<Complex64> {
        let mut out = vec![ZERO; len];
        for (k, &x) in coeffs.iter().enumerate() {
            let row = self.target_images[self.pairing[k]].eval(w, len);
            for (o, r) in out.iter_mut().zip(row) {
                *o += x * r;
            }
        }
        out
    }

    /// Applies the isometry to an arbitrary sequence at `w` by first reading
    /// off its coordinates against the pointwise-orthonormal source images.
    pub fn apply_sequence(&self, seq: &[Complex64], w: Complex64) -> Vec<Complex64> {
        let len = seq.len();
        let coords: Vec<Complex64> = self
            .source_images
            .iter()
            .map(|img| seq_inner(seq, &img.eval(w, len)))
            .collect();
        self.image_at(&coords, w, len)
    }

    fn premises(&self) -> Result<()> {
        for (name, frame) in [("source", &self.source), ("target", &self.target)] {
            let r = orthonormal_system_check_with_tol(frame, PREMISE_TOL);
            if !r.passed {
                return Err(Error::premise(
                    "orthonormal_system_check",
                    format!(
                        "{name} frame violates at pair {:?}, k = {} by {:e}",
                        r.pair, r.worst_index, r.worst_value
                    ),
                ));
            }
        }
        Ok(())
    }
}

fn combine(images: &[LwImage], coeffs: &[Complex64], w: Complex64, len: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; len];
    for (img, &x) in images.iter().zip(coeffs) {
        for (o, r) in out.iter_mut().zip(img.eval(w, len)) {
            *o += x * r;
        }
    }
    out
}

/// Image sequences of `sum_k coeffs_k L_w(source_k)` at each sample.
pub fn apply_paired(
    iso: &PairedIsometry,
    coeffs: &[Complex64],
    w_samples: &[Complex64],
) -> Result<Vec<Vec<Complex64>>> {
    iso.check_len(coeffs)?;
    let len = iso.depth();
    Ok(w_samples
        .iter()
        .map(|&w| iso.image_at(coeffs, w, len))
        .collect())
}

/// Deterministic probe coefficient vectors: the standard basis, the uniform
/// vector and a rotating-phase vector, all of unit length.
pub fn probe_set(rank: usize) -> Vec<Vec<Complex64>> {
    let mut probes = Vec::new();
    for k in 0..rank {
        let mut e = vec![ZERO; rank];
        e[k] = Complex64::new(1.0, 0.0);
        probes.push(e);
    }
    if rank > 1 {
        let s = 1.0 / (rank as f64).sqrt();
        probes.push(vec![Complex64::new(s, 0.0); rank]);
        probes.push(
            (0..rank)
                .map(|k| Complex64::from_polar(s, PI * k as f64 / 2.0 + 0.3))
                .collect(),
        );
    }
    probes
}

/// Max over samples and probes of `| ||T_w x||^2 - ||x||^2 |`.
pub fn isometry_residual(iso: &PairedIsometry, w_samples: &[Complex64]) -> Result<f64> {
    iso.premises()?;
    let len = iso.depth();
    let mut worst: f64 = 0.0;
    for x in probe_set(iso.rank()) {
        for &w in w_samples {
            let before = seq_norm(&iso.source_at(&x, w, len)).powi(2);
            let after = seq_norm(&iso.image_at(&x, w, len)).powi(2);
            worst = worst.max((after - before).abs());
        }
    }
    Ok(worst)
}

/// Builds, at each sample, `V = Q U Q^H + (I - Q Q^H)` on the finite section
/// of sequence space, where the columns of `Q` are the target images, and
/// returns the largest `||T_w(U x) - V(T_w x)||` over probes and samples.
///
/// `u_matrix` is row-major: `u_matrix[i][j]` is the `(i, j)` entry.
pub fn intertwiner_check(
    iso: &PairedIsometry,
    u_matrix: &[Vec<Complex64>],
    w_samples: &[Complex64],
) -> Result<f64> {
    let r = iso.rank();
    if u_matrix.len() != r || u_matrix.iter().any(|row| row.len() != r) {
        return Err(Error::RankMismatch {
            source_rank: r,
            target_rank: u_matrix.len(),
        });
    }
    let defect = unitarity_defect(u_matrix);
    if defect > 1e-10 {
        return Err(Error::premise(
            "unitary",
            format!("||U^H U - I|| = {defect:e}"),
        ));
    }
    iso.premises()?;
    let len = iso.depth();
    let mut worst: f64 = 0.0;
    for &w in w_samples {
        let q: Vec<Vec<Complex64>> = (0..r)
            .map(|k| iso.target_images[iso.pairing[k]].eval(w, len))
            .collect();
        let apply_v = |y: &[Complex64]| -> Vec<Complex64> {
            // Q^H y
            let c: Vec<Complex64> = q.iter().map(|col| seq_inner(y, col)).collect();
            let uc = mat_vec(u_matrix, &c);
            let mut out = y.to_vec();
            for k in 0..r {
                let d = uc[k] - c[k];
                for (o, x) in out.iter_mut().zip(&q[k]) {
                    *o += d * x;
                }
            }
            out
        };
        for x in probe_set(r) {
            let ux = mat_vec(u_matrix, &x);
            let lhs = iso.image_at(&ux, w, len);
            let rhs = apply_v(&iso.image_at(&x, w, len));
            let diff: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
            worst = worst.max(seq_norm(&diff));
        }
    }
    Ok(worst)
}

fn mat_vec(m: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Largest entry of `|U^H U - I|`.
pub fn unitarity_defect(u: &[Vec<Complex64>]) -> f64 {
    let r = u.len();
    let mut worst: f64 = 0.0;
    for i in 0..r {
        for j in 0..r {
            let g: Complex64 = (0..r).map(|k| u[k][i].conj() * u[k][j]).sum();
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - delta).norm());
        }
    }
    worst
}

/// Max over samples and probes of `|| T^(M,N) x - T^(L,N) T^(M,L) x ||`.
///
/// The composite is evaluated honestly: the intermediate sequence is
/// decomposed against the pointwise-orthonormal images of the middle frame
/// before the second leg is applied.
pub fn factorization_residual_paired(
    mn: &PairedIsometry,
    ml: &PairedIsometry,
    ln: &PairedIsometry,
    w_samples: &[Complex64],
) -> Result<f64> {
    let r = mn.rank();
    if ml.rank() != r || ln.rank() != r {
        return Err(Error::RankMismatch {
            source_rank: r,
            target_rank: ml.rank().max(ln.rank()),
        });
    }
    for iso in [mn, ml, ln] {
        iso.premises()?;
    }
    let len = mn.depth().max(ml.depth()).max(ln.depth());
    let mut worst: f64 = 0.0;
    for x in probe_set(r) {
        for &w in w_samples {
            let direct = mn.image_at(&x, w, len);
            let middle = ml.image_at(&x, w, len);
            let composed = ln.apply_sequence(&middle, w);
            let diff: Vec<Complex64> = direct.iter().zip(&composed).map(|(a, b)| a - b).collect();
            worst = worst.max(seq_norm(&diff));
        }
    }
    Ok(worst)
}

/// [`factorization_residual_paired`] with index-by-index pairings between
/// the three frames.
pub fn factorization_residual(
    m_frame: &Frame,
    l_frame: &Frame,
    n_frame: &Frame,
    w_samples: &[Complex64],
) -> Result<f64> {
    let mn = PairedIsometry::new(m_frame.clone(), n_frame.clone())?;
    let ml = PairedIsometry::new(m_frame.clone(), l_frame.clone())?;
    let ln = PairedIsometry::new(l_frame.clone(), n_frame.clone())?;
    factorization_residual_paired(&mn, &ml, &ln, w_samples)
}

/// Three nested invariant subspaces `M ⊇ L ⊇ N` with their wandering frames.
#[derive(Debug, Clone)]
pub struct Chain {
    pub frames: [Frame; 3],
    pub containment: [f64; 2],
}

impl Chain {
    /// Verifies `outer ⊇ middle ⊇ inner` to `tol` and extracts the wandering
    /// frames.
    pub fn new(
        outer: &InvariantModel,
        middle: &InvariantModel,
        inner: &InvariantModel,
        tol: f64,
    ) -> Result<Self> {
        let c0 = outer.containment_residual(middle);
        if c0 > tol {
            return Err(Error::ChainBroken {
                outer: "M".into(),
                inner: "L".into(),
                residual: c0,
            });
        }
        let c1 = middle.containment_residual(inner);
        if c1 > tol {
            return Err(Error::ChainBroken {
                outer: "L".into(),
                inner: "N".into(),
                residual: c1,
            });
        }
        Ok(Chain {
            frames: [
                wandering_of(outer),
                wandering_of(middle),
                wandering_of(inner),
            ],
            containment: [c0, c1],
        })
    }

    pub fn factorization_residual(&self, w_samples: &[Complex64]) -> Result<f64> {
        let [m, l, n] = &self.frames;
        factorization_residual(m, l, n, w_samples)
    }
}
