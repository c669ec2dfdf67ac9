//! Quadratic spaces over finite fields with Frobenius, the varieties S_Λ and
//! R_Λ, and their stratifications.

pub mod field;
pub mod linalg;
pub mod space;
pub mod strata;

pub use field::{is_irreducible, least_irreducible, Fq, FqContext};
pub use linalg::Subspace;
pub use space::{build_omega, FqQuadSpace, Side};
pub use strata::{
    dimension_estimate, duality_check, duality_map, point_count_series, standard_key,
    substrata_report, substratum_membership, theorem_labels, Coarse, DegreeEstimate, DlKey,
    DualityReport, GrowthVariety, StrataCounts, StratumLabel, SubstrataReport, DEGREE_TOLERANCE,
};
