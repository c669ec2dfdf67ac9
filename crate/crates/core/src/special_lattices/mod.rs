//! Lattices over truncated Witt vectors, special lattices and their chains,
//! and point-level checks of the Bruhat–Tits decomposition.

pub mod lattice;
pub mod specials;
pub mod sweep;
pub mod witt;

pub use lattice::{howell_contains, howell_form, AmbientWindow, WVec, WindowFrame, WittLattice};
pub use specials::{
    crucial_dichotomy, is_special, kr_case, phi_sum_chain, s_chain, sharp_transport, vertex_seed,
    DichotomyVerdict, KrCase, ResidueQuotient, ResidueSide, SChain, Seed, SpecialCertificate,
};
pub use sweep::{
    case_list, family_lattices, star_seeds, sweep_case, window_for, CaseSpec, FamilySide,
    SweepConfig, SweepReport,
};
pub use witt::{WittRing, MAX_DEGREE, W};
