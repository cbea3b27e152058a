//! Finitary operations and relations on a finite domain, clone
//! saturation and the `Pol`/`Inv` Galois connection.

mod clone;
mod galois;
mod graded;
mod op;
mod rel;

pub use clone::{generate_clone, is_closed_under, is_composition_closed, op_space, rel_space, CloneCaps};
pub use galois::{
    cut_of_intersection, geiger_roundtrip, geiger_roundtrip_via, inv, is_polymorphism, pol,
    pol_inv_via_matrices, preservation_failure, relation_clone_generate, GeigerReport, GeigerRoute,
    EXPLICIT_RELATION_LIMIT,
};
pub(crate) use galois::invariants_of_tables;
pub use graded::ByArity;
pub use op::FinOp;
pub use rel::{finrel_transform, FinRel, RelTransform};
