//! Exact computations with modules over triangular matrix algebras
//! `T = [[R, 0], [U, S]]`, realized as comma categories over prime fields.
//!
//! Everything here is `no_std` with `alloc`. File formats and the command
//! line front end live in the companion `commacat` crate.

#![cfg_attr(not(test), no_std)]
// Structure constants and action matrices read best with explicit indices.
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod algebra;
pub mod comma;
pub mod error;
pub mod family;
pub mod fixtures;
pub mod linalg;
pub mod module;
pub mod presentation;
pub mod tensor;
pub mod torsion;
pub mod universe;
pub mod verdict;
pub mod verify;

pub use algebra::{dual_module, regular_module, triangular_algebra, Bimodule, FDAlgebra};
pub use comma::{CommaMap, CommaObject, RightTModule, TriangularRing};
pub use error::{Error, Result};
pub use family::{CommaKind, Membership, ModuleFamily};
pub use linalg::FpMatrix;
pub use module::{ModuleMap, ModuleRep, Side};
pub use presentation::Presentation;
pub use verdict::{Certificate, Fact, Outcome, Verdict};

/// Bounds on every exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest total dimension of a module produced by the universe builders
    /// or by closure checks.
    pub max_dim: usize,
    /// Largest Hom-space dimension searched exhaustively for an isomorphism.
    pub iso_cap: usize,
    /// Largest number of extension classes enumerated per pair.
    pub ext_cap: usize,
    /// Largest number of vectors, maps or submodules visited by one enumeration.
    pub enumeration_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_dim: 4,
            iso_cap: 16,
            ext_cap: 64,
            enumeration_cap: 1 << 16,
        }
    }
}
