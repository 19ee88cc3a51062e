//! Finite diversities and their embedding into L1.
//!
//! A diversity assigns a value to every finite subset of a ground set, vanishing on
//! sets of size at most one and satisfying `δ(A∪B) + δ(B∪C) >= δ(A∪C)` whenever `B`
//! is non-empty. This crate represents finite diversities, checks the axioms, and
//! embeds symmetric diversities (values depending only on `|A|`) into L1 as
//! non-negative combinations of split diversities with bounded distortion. A linear
//! program computes the optimal split-embedding distortion for small inputs.

pub mod binomial;
pub mod diversity;
pub mod embed;
pub mod error;
pub mod generators;
#[doc(hidden)]
pub mod harness;
pub mod io;
pub mod lp;
pub mod metric;
pub mod oracle;
pub mod phi;
pub mod points;
pub mod profile;
pub mod split;
pub mod subset;

pub use diversity::{AxiomVerdict, FiniteDiversity, SetFunction, Violation};
pub use embed::{
    build_symmetric_embedding, coordinates_from_weights, distortion, embed_symmetric, phi_decomposition,
    profile_distortion, EmbeddingMethod, EmbeddingReport, SymmetricEmbedding, CERTIFIED_DISTORTION,
};
pub use error::{Error, Result};
pub use metric::Metric;
pub use oracle::{optimal_split_distortion, optimal_symmetric_split_distortion, OptimalSplit};
pub use phi::{capped_psi, choose_ell, phi, verify_pesky_bound, x_of_ell, PhiTable};
pub use points::{PointConfiguration, PointSet};
pub use profile::{
    basis_coefficients, concave_majorant, psi, reconstruct_from_basis, validate_profile, BasisCoefficients,
    ConcaveProfile, SymmetricProfile,
};
pub use split::{split_diversity_eval, split_weights_from_diversity, MobiusMode, SplitWeighting};
