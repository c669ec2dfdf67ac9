//! Weyl groups of types A/B/D, the elements indexing Deligne-Lusztig strata,
//! and the affine Weyl group apparatus for admissible sets.

pub mod elements;
pub mod finite;

pub use elements::{LinearSetup, OrthoSetup};
pub use finite::{
    conjugate_intersection, dl_dimension, generators, is_minimal_rep, length, longest_element,
    longest_parabolic_formula, longest_parabolic_length, simple, word, Kind, ParabolicSet,
    SignedPerm,
};
pub mod affine;

pub use affine::{
    kr_computed, kr_tables, lattice_exponents, relative_position_dim, theta, theta_conjugate,
    AdmissibleSet, AffineElt, AffineSetup, ApartmentPoint, CaseTag, CosetKey,
};
