//! A workbench for the Bergman shift modelled inside the Hardy space of the
//! bidisc.
//!
//! The Bergman shift is realized as the compression `B = P_H T_z |_H` to the
//! symmetric subspace `H` spanned by `p_n(z, w) = sum_i z^i w^(n-i)`. This
//! crate works with that model at a finite degree cap and provides:
//!
//! * [`bidisc`]: coefficient arithmetic, Toeplitz shifts, the projection onto
//!   `H`, the unitary to Bergman coordinates, and the series representation
//!   `q(z, w) = sum_j z^j (T_w*)^j q(0, w)`;
//! * [`dirichlet`]: the Dirichlet-space model of `H`;
//! * [`subspace`]: frames, invariant subspaces and their wandering parts;
//! * [`criteria`]: the criteria characterizing wandering vectors and
//!   wandering subspaces;
//! * [`factorization`]: the pointwise sequence-space isometries between
//!   wandering subspaces and their factorization along a chain.
//!
//! ```
//! use wandering_core::{criteria, SymVector, Weight};
//!
//! // e_1 is wandering; (e_0 + e_1)/sqrt(2) is not.
//! assert!(criteria::coeff_criterion(&SymVector::basis(1), Weight::Shifted).passed);
//! let q = SymVector::from_real(&[1.0, 1.0]).normalized().unwrap();
//! let report = criteria::coeff_criterion(&q, Weight::Shifted);
//! assert!(!report.passed);
//! assert_eq!(report.worst_index, 1);
//! ```
//!
//! The `book/` directory holds a longer guide; its code listings are compiled
//! and run as doctests of this crate.

pub mod bidisc;
pub mod criteria;
pub mod dirichlet;
pub mod error;
pub mod factorization;
pub mod subspace;

pub use bidisc::{BergmanPoly, BidiscPoly, CirclePoly, Direction, SymVector, Variable};
pub use criteria::{CriterionReport, TrigPoly, Weight};
pub use dirichlet::DirichletPoly;
pub use error::{Error, Result};
pub use factorization::{LwImage, PairedIsometry};
pub use subspace::{Frame, InvariantModel};

pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/model.md")]
    mod model {}
    #[doc = include_str!("../../../book/src/criteria.md")]
    mod criteria {}
    #[doc = include_str!("../../../book/src/dirichlet.md")]
    mod dirichlet {}
    #[doc = include_str!("../../../book/src/subspaces.md")]
    mod subspaces {}
    #[doc = include_str!("../../../book/src/sequence_space.md")]
    mod sequence_space {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
