//! Explicit Ozawa kernels on finitely generated groups.
//!
//! Two kernel families are provided:
//!
//! * [`tree::TreeKernel`]: on a free group, the overlap of the length-`n`
//!   geodesic rays pointing toward a fixed end of the Cayley tree, scaled by
//!   `n + 1`.
//! * [`folner::FolnerProvider`]: on an amenable group, the normalized size of
//!   the intersection of two left translates `xG_n ∩ yG_n` of a Følner set.
//!
//! Both are sums of squares of 0/1 feature vectors, so [`verifier`] can
//! certify positive semidefiniteness of any finite Gram sample exactly, then
//! check the finite-support and approximation conditions and emit a
//! [`verifier::PropertyOCertificate`].
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod folner;
pub mod group;
mod rational;
pub mod tree;
pub mod verifier;

pub use error::{Error, Result};
pub use group::{Element, Group, GroupKind, Letter, Word, DEFAULT_ELEMENT_BUDGET};
pub use rational::ExactRational;
