//! Exact dynamical invariants of rational self-maps of the projective plane
//! and of `P1 x P1`.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is computed over the
//! rationals: polynomial arithmetic, resultants and gcds live in [`poly`],
//! the Néron–Severi layer in [`surface`], maps in [`ratmap`], exact spectral
//! data of pullback matrices in [`spectral`], and the aggregated invariants
//! (degree sequences, dynamical and topological degree, regularity and
//! entropy reports) in [`dynamics`].
#![cfg_attr(not(test), no_std)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod dynamics;
pub mod error;
pub mod number;
pub mod poly;
pub mod ratmap;
pub mod spectral;
pub mod surface;
pub mod upoly;

pub use error::{Error, Result};
pub use number::{Integer, Rational};
pub use poly::{Grading, SparsePoly, Variables};
pub use ratmap::{MoebiusInvolution, RationalSelfMap, Surface};
pub use surface::{DivisorClass, NSLattice};
