//! Exact combinatorics of vertex lattices, Coxeter data and Deligne-Lusztig
//! strata attached to basic loci of GSpin Rapoport-Zink spaces.

pub mod coxeter_weyl;
pub mod error;
pub mod finite_orthogonal;
pub mod padic_quadratic;
pub mod special_lattices;

pub use error::{Error, Result};
pub use padic_quadratic::{
    hilbert_symbol, jordan_profile, legendre, phi_twist, sharp_dual, space_invariants,
    vertex_extremes, witt_decompose, JordanProfile, PAdicForm, SpaceInvariants, SquareClass,
    VertexExtremes, WittDecomposition,
};
