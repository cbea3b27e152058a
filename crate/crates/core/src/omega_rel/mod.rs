//! ω-relations as sets of eventually-constant threads and as decreasing
//! sequences of finitary relations.

mod decseq;
mod evset;

pub use decseq::{
    cut, dec_exists, dec_intersect, dec_join, dec_permute, diagonal, from_finitary, lim_membership,
    local_closure, DecKind, DecSeq, FinitePermutation, Verdict,
};
pub use evset::{EvSet, Pattern};
