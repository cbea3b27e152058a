//! Galois connections between ω-operations and finitary or ω-relations.

mod ideal;
mod inclusion;
mod poly;

pub use ideal::{agree_on, cl_membership, IdealKind, IdealSpec, TestSet, MAX_IDEAL_TESTS};
pub use inclusion::{theorem_clone_inclusion_check, ArityRow, InclusionCaps, InclusionReport};
pub use poly::{
    duedue2_condition4_check, g_polymorphism_fin_failure, inv_finitary,
    is_bot_polymorphism, is_g_polymorphism_decseq, is_g_polymorphism_fin, matrical_polymorphism, pol_omega, r_mc,
    MatricalTarget, OmegaRelation, PolVerdict, SearchBounds,
};
