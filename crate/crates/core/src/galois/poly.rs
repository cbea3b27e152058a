use std::fmt;

use rayon::prelude::*;

use crate::domain::{advance_indices, Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::finite::{invariants_of_tables, rel_space, ByArity, FinRel};
use crate::matrices::{apply_rop, Alpha, enumerate_matrices, substitute_columns, Column, ColumnPool, EvMatrix, MatrixShape};
use crate::omega_ops::{generate_omega_clone, ROp};
use crate::omega_rel::{local_closure, DecKind, DecSeq, EvSet, Verdict};
use crate::threads::{threads_up_to, EvThread};

/// Outcome of a polymorphism check over infinitely many matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolVerdict {
    Holds,
    FailsWith(EvMatrix),
    /// No failure among the matrices within the search bounds.
    HoldsUpToBounds(SearchBounds),
}

impl PolVerdict {
    pub fn fails(&self) -> bool {
        matches!(self, PolVerdict::FailsWith(_))
    }
}

impl fmt::Display for PolVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolVerdict::Holds => write!(f, "holds"),
            PolVerdict::FailsWith(_) => write!(f, "fails_with"),
            PolVerdict::HoldsUpToBounds(_) => write!(f, "holds_up_to_bounds"),
        }
    }
}

/// Search bounds for the bounded polymorphism checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    /// Cut depth for limit membership.
    pub depth: usize,
    /// Prefix length of candidate threads, and repetitions of pattern blocks.
    pub prefix: usize,
    /// Explicit columns of enumerated matrices (or substituted columns).
    pub columns: usize,
    /// Rows of enumerated finite matrices.
    pub alpha: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self { depth: 8, prefix: 3, columns: 1, alpha: 3 }
    }
}

/// Columns `(c_0, .., c_{w-1}, t) ∈ S^(w+1)` on which `φ` leaves `S`, as the
/// matrix with those explicit columns and `t` repeated.
///
/// Every matrix with eventually-constant columns from `S` presents `φ`
/// with exactly such a choice, so this is exact.
pub fn g_polymorphism_fin_failure(phi: &ROp, s: &FinRel) -> Option<EvMatrix> {
    assert_eq!(phi.domain(), s.domain(), "operation and relation over different domains");
    let phi = phi.canonical();
    if s.len() == rel_space(s.domain(), s.arity()).unwrap_or(0) as usize {
        return None;
    }
    let tuples: Vec<Vec<Elem>> = s.tuples().collect();
    if tuples.is_empty() {
        return None;
    }
    let (w, n) = (phi.width(), s.arity());
    let domain = s.domain();
    let mut idx = vec![0usize; w + 1];
    let mut x = vec![0; w];
    loop {
        let image = (0..n).fold(0usize, |acc, i| {
            for (slot, &j) in x.iter_mut().zip(&idx) {
                *slot = tuples[j][i];
            }
            acc * domain.size() + phi.head_at(&x, tuples[idx[w]][i]) as usize
        });
        if !s.contains_rank(image) {
            let cols: Vec<&[Elem]> = idx[..w].iter().map(|&j| tuples[j].as_slice()).collect();
            return Some(EvMatrix::from_finite_columns(n, &cols, &tuples[idx[w]]).expect("columns have the arity"));
        }
        if !advance_indices(&mut idx, tuples.len()) {
            return None;
        }
    }
}

/// `φ ∈ Pol^ω(S^⊤)`, i.e. `φ` is a G-polymorphism of the finitary `S`.
pub fn is_g_polymorphism_fin(phi: &ROp, s: &FinRel) -> bool {
    g_polymorphism_fin_failure(phi, s).is_none()
}

/// An ω-relation given either as a thread set or as a decreasing sequence.
#[derive(Debug, Clone, Copy)]
pub enum OmegaRelation<'a> {
    Set(&'a EvSet),
    Seq(&'a DecSeq),
}

fn structurally_holds(phi: &ROp, r: OmegaRelation<'_>) -> bool {
    phi.as_projection().is_some()
        || phi.is_tail_op()
        || matches!(r, OmegaRelation::Seq(d) if *d.kind() == DecKind::Diagonal)
}

/// `φ ∈ Pol^ω_G(R)`, searching matrices whose columns are members of `R`.
///
/// Projections, the tail operation and the diagonal are settled exactly.
pub fn is_g_polymorphism_decseq(phi: &ROp, r: OmegaRelation<'_>, bounds: SearchBounds) -> Result<PolVerdict> {
    let domain = phi.domain();
    if structurally_holds(phi, r) {
        return Ok(PolVerdict::Holds);
    }
    let pool: Vec<EvThread> = match r {
        OmegaRelation::Set(e) => {
            e.check_domain(domain)?;
            e.members(bounds.prefix)
        }
        OmegaRelation::Seq(d) => {
            domain.same_as(d.domain())?;
            let mut pool = Vec::new();
            for s in threads_up_to(domain, bounds.prefix) {
                if !matches!(d.lim_membership(&s, bounds.depth)?, Verdict::CertifiedOut(_)) {
                    pool.push(s);
                }
            }
            pool
        }
    };
    let shape = MatrixShape { prefix_columns: bounds.columns, distinct: None };
    for m in enumerate_matrices(ColumnPool::Threads(&pool), shape) {
        let Column::Omega(image) = apply_rop(phi, &m) else {
            unreachable!("thread columns give ω rows")
        };
        let member = match r {
            OmegaRelation::Set(e) => e.contains(&image),
            OmegaRelation::Seq(d) => !matches!(d.lim_membership(&image, bounds.depth)?, Verdict::CertifiedOut(_)),
        };
        if !member {
            return Ok(PolVerdict::FailsWith(m));
        }
    }
    Ok(PolVerdict::HoldsUpToBounds(bounds))
}

/// `φ ∈ Pol_⊥(R) = Pol^ω_G(R̄)`.
pub fn is_bot_polymorphism(phi: &ROp, r: &EvSet, bounds: SearchBounds) -> Result<PolVerdict> {
    let closure = local_closure(phi.domain(), r)?;
    is_g_polymorphism_decseq(phi, OmegaRelation::Seq(&closure), bounds)
}

fn check_rels(domain: FiniteDomain, rels: &[FinRel]) -> Result<()> {
    rels.iter().try_for_each(|s| domain.same_as(s.domain()))
}

/// Every operation of width `<= width_cap` preserving each `S^⊤`, canonical and sorted.
pub fn pol_omega(domain: FiniteDomain, relations: &[FinRel], width_cap: usize) -> Result<Vec<ROp>> {
    check_rels(domain, relations)?;
    let cells = domain.power(width_cap + 1).filter(|&c| c <= 32).ok_or_else(|| {
        Error::Invalid(format!("width {width_cap} is too large to enumerate"))
    })?;
    let space = (domain.size() as u64).checked_pow(cells as u32).filter(|&s| s <= 1 << 32).ok_or_else(|| {
        Error::Invalid(format!("width {width_cap} is too large to enumerate"))
    })?;
    let mut out: Vec<ROp> = (0..space)
        .into_par_iter()
        .filter_map(|r| {
            let head = domain.unrank(r as usize, cells);
            let phi = ROp::new(domain, width_cap, head).expect("enumerated heads are valid");
            relations.iter().all(|s| is_g_polymorphism_fin(&phi, s)).then(|| phi.canonical())
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `Inv^<ω(C)`: finitary relations of arity `<= cap` whose top extension
/// every member of `C` preserves.
pub fn inv_finitary(domain: FiniteDomain, clone: &[ROp], cap: usize) -> Result<ByArity<FinRel>> {
    for phi in clone {
        domain.same_as(phi.domain())?;
    }
    let canonical: Vec<ROp> = clone.iter().map(ROp::canonical).collect();
    let tables: Vec<(usize, &[Elem])> = canonical.iter().map(|phi| (phi.width() + 1, phi.head())).collect();
    let slices = (0..=cap).map(|n| invariants_of_tables(domain, &tables, n)).collect::<Result<Vec<_>>>()?;
    Ok(ByArity::from_slices(slices))
}

/// `R_{m,C} = {φ[m] : φ ∈ C}` for a finite matrix.
pub fn r_mc(domain: FiniteDomain, m: &EvMatrix, clone: &[ROp]) -> Result<FinRel> {
    let Alpha::Finite(alpha) = m.alpha() else {
        return Err(Error::ShapeMismatch("R_{m,C} needs finitely many rows".into()));
    };
    m.check_domain(domain)?;
    for phi in clone {
        domain.same_as(phi.domain())?;
    }
    FinRel::from_tuples(domain, alpha, clone.iter().map(|phi| finite_image(phi, m)))
}

fn finite_image(phi: &ROp, m: &EvMatrix) -> Vec<Elem> {
    match apply_rop(phi, m) {
        Column::Finite(v) => v,
        Column::Omega(_) => unreachable!("finite matrix"),
    }
}

/// `φ[m] ∈ R_{m,C}` for every row-injective matrix with at most
/// `bounds.alpha` rows, drawn from threads with prefix length `<= bounds.prefix`.
///
/// `C` is the clone generated by `generators` at width
/// `max(bounds.prefix + 1, width of φ, widths of the generators)`.
/// Rows are taken as sets, since reordering rows permutes both sides alike.
pub fn duedue2_condition4_check(phi: &ROp, generators: &[ROp], bounds: SearchBounds) -> Result<PolVerdict> {
    let domain = phi.domain();
    let cap = generators
        .iter()
        .map(|g| g.canonical().width())
        .fold(phi.canonical().width().max(bounds.prefix + 1), usize::max);
    let clone = generate_omega_clone(domain, generators, cap)?;
    if clone.contains(&phi.canonical()) {
        return Ok(PolVerdict::Holds);
    }
    let universe = threads_up_to(domain, bounds.prefix);
    for a in 0..=bounds.alpha.min(universe.len()) {
        let mut idx: Vec<usize> = (0..a).collect();
        loop {
            let m = EvMatrix::finite(idx.iter().map(|&i| universe[i].clone()).collect());
            if !r_mc(domain, &m, &clone)?.contains(&finite_image(phi, &m)) {
                return Ok(PolVerdict::FailsWith(m));
            }
            if !next_combination(&mut idx, universe.len()) {
                break;
            }
        }
    }
    Ok(PolVerdict::HoldsUpToBounds(bounds))
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// The relation a matrical check runs against.
#[derive(Debug, Clone, Copy)]
pub enum MatricalTarget<'a> {
    Finite(&'a FinRel),
    Set(&'a EvSet),
}

/// `φ[m[r⃗]]` lies in the local closure of `R` for every `r⃗` of at most
/// `bounds.columns` columns drawn from `R`; `m` must have all its columns in `R`.
///
/// For a finitary `R` with `bounds.columns` at least the width of `φ`
/// the search is exhaustive.
pub fn matrical_polymorphism(
    phi: &ROp,
    target: MatricalTarget<'_>,
    m: &EvMatrix,
    bounds: SearchBounds,
) -> Result<PolVerdict> {
    let domain = phi.domain();
    m.check_domain(domain)?;
    let columns = m.columns();
    let (pool, closure): (Vec<Column>, Option<DecSeq>) = match target {
        MatricalTarget::Finite(s) => {
            domain.same_as(s.domain())?;
            if m.alpha() != Alpha::Finite(s.arity()) {
                return Err(Error::ShapeMismatch(format!("matrix rows do not match arity {}", s.arity())));
            }
            if let Some(j) = columns.iter().position(|c| !matches!(c, Column::Finite(v) if s.contains(v))) {
                return Err(Error::ColumnNotInRelation { column: j });
            }
            (s.tuples().map(Column::Finite).collect(), None)
        }
        MatricalTarget::Set(r) => {
            if m.alpha() != Alpha::Omega {
                return Err(Error::ShapeMismatch("matrix needs ω rows for an ω-relation".into()));
            }
            if let Some(j) = columns.iter().position(|c| !matches!(c, Column::Omega(s) if r.contains(s))) {
                return Err(Error::ColumnNotInRelation { column: j });
            }
            (r.members(bounds.prefix).into_iter().map(Column::Omega).collect(), Some(local_closure(domain, r)?))
        }
    };
    let in_closure = |c: &Column| -> Result<bool> {
        Ok(match (c, &target, &closure) {
            (Column::Finite(v), MatricalTarget::Finite(s), _) => s.contains(v),
            (Column::Omega(t), _, Some(cl)) => !matches!(cl.lim_membership(t, bounds.depth)?, Verdict::CertifiedOut(_)),
            _ => unreachable!("shape checked above"),
        })
    };
    for n in 0..=bounds.columns {
        if n > 0 && pool.is_empty() {
            break;
        }
        let mut idx = vec![0usize; n];
        loop {
            let sub: Vec<Column> = idx.iter().map(|&i| pool[i].clone()).collect();
            let mr = substitute_columns(m, &sub)?;
            if !in_closure(&apply_rop(phi, &mr))? {
                return Ok(PolVerdict::FailsWith(mr));
            }
            if !advance_indices(&mut idx, pool.len()) {
                break;
            }
        }
    }
    let exhaustive = matches!(target, MatricalTarget::Finite(_)) && bounds.columns >= phi.canonical().width();
    Ok(if exhaustive || phi.as_projection().is_some() {
        PolVerdict::Holds
    } else {
        PolVerdict::HoldsUpToBounds(bounds)
    })
}
