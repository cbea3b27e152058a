//! Representable ω-operations and their superpositions.

mod axioms;
mod rop;
mod superposition;

pub use axioms::{axiom_suite, AxiomKind, AxiomReport, SampleSpec};
pub use rop::{parse_rop, rop_equal, OpSeq, ROp};
pub use superposition::{finitary_approximation, fin_of, generate_omega_clone, q_inf, q_n};
