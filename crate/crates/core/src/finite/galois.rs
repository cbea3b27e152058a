use std::collections::{BTreeSet, VecDeque};

use rayon::prelude::*;

use super::clone::{generate_clone, op_space, rel_space, CloneCaps};
use super::graded::ByArity;
use super::op::FinOp;
use super::rel::FinRel;
use crate::bitset::BitSet;
use crate::domain::{advance_indices, Elem, FiniteDomain};
use crate::error::{Error, Result};

/// Columns `c_1, .., c_k ∈ S` with `f(c_1, .., c_k) ∉ S`, if any.
pub fn preservation_failure(f: &FinOp, s: &FinRel) -> Option<Vec<Vec<Elem>>> {
    assert_eq!(f.domain(), s.domain(), "operation and relation over different domains");
    let (k, n) = (f.arity(), s.arity());
    let tuples: Vec<Vec<Elem>> = s.tuples().collect();
    if k > 0 && tuples.is_empty() {
        return None;
    }
    let domain = f.domain();
    let mut idx = vec![0usize; k];
    let mut args = vec![0; k];
    loop {
        let image = (0..n).fold(0usize, |acc, i| {
            for (a, &j) in args.iter_mut().zip(&idx) {
                *a = tuples[j][i];
            }
            acc * domain.size() + f.eval(&args) as usize
        });
        if !s.contains_rank(image) {
            return Some(idx.iter().map(|&j| tuples[j].clone()).collect());
        }
        if !advance_indices(&mut idx, tuples.len()) {
            return None;
        }
    }
}

/// `f ∈ Pol S`.
pub fn is_polymorphism(f: &FinOp, s: &FinRel) -> bool {
    preservation_failure(f, s).is_none()
}

fn space_usize(space: Option<u128>, what: &str) -> Result<usize> {
    space
        .and_then(|n| usize::try_from(n).ok())
        .filter(|&n| n <= 1 << 32)
        .ok_or_else(|| Error::Invalid(format!("{what} space too large to enumerate")))
}

/// All operations of arity `<= cap` preserving every relation.
pub fn pol(domain: FiniteDomain, relations: &[FinRel], cap: usize) -> Result<ByArity<FinOp>> {
    for s in relations {
        domain.same_as(s.domain())?;
    }
    let slices = (0..=cap)
        .map(|k| {
            let cells = domain.power(k).expect("bounded by space check");
            let space = space_usize(op_space(domain, k), "operation")?;
            Ok((0..space)
                .into_par_iter()
                .filter_map(|r| {
                    let f = FinOp::from_table_unchecked(domain, k, domain.unrank(r, cells));
                    relations.iter().all(|s| is_polymorphism(&f, s)).then_some(f)
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ByArity::from_slices(slices))
}

/// All relations of arity `<= cap` preserved by every operation.
pub fn inv(domain: FiniteDomain, ops: &[FinOp], cap: usize) -> Result<ByArity<FinRel>> {
    for f in ops {
        domain.same_as(f.domain())?;
    }
    let tables: Vec<(usize, &[Elem])> = ops.iter().map(|f| (f.arity(), f.table())).collect();
    let slices = (0..=cap).map(|n| invariants_of_tables(domain, &tables, n)).collect::<Result<Vec<_>>>()?;
    Ok(ByArity::from_slices(slices))
}

/// Above this many `n × k` matrices a table group is checked directly.
const IMAGE_TABLE_LIMIT: usize = 1 << 22;

enum TableGroup<'a> {
    /// `images[m]` is `{g[m] : g}` for the matrix with row ranks `m`.
    Images { k: usize, rows: usize, images: Vec<BitSet> },
    Direct { k: usize, tables: Vec<&'a [Elem]> },
}

fn table_preserves(domain: FiniteDomain, k: usize, table: &[Elem], s: &FinRel, tuples: &[Vec<Elem>]) -> bool {
    if k > 0 && tuples.is_empty() {
        return true;
    }
    let mut idx = vec![0usize; k];
    loop {
        let image = (0..s.arity()).fold(0usize, |acc, i| {
            let r = idx.iter().fold(0usize, |r, &j| r * domain.size() + tuples[j][i] as usize);
            acc * domain.size() + table[r] as usize
        });
        if !s.contains_rank(image) {
            return false;
        }
        if !advance_indices(&mut idx, tuples.len()) {
            return true;
        }
    }
}

impl TableGroup<'_> {
    fn preserves(&self, domain: FiniteDomain, s: &FinRel, tuples: &[Vec<Elem>]) -> bool {
        match self {
            TableGroup::Direct { k, tables } => tables.iter().all(|t| table_preserves(domain, *k, t, s, tuples)),
            TableGroup::Images { k, rows, images } => {
                if *k > 0 && tuples.is_empty() {
                    return true;
                }
                let mut idx = vec![0usize; *k];
                loop {
                    let m = (0..s.arity()).fold(0usize, |acc, i| {
                        acc * rows + idx.iter().fold(0usize, |r, &j| r * domain.size() + tuples[j][i] as usize)
                    });
                    if !images[m].is_subset(s.bits()) {
                        return false;
                    }
                    if !advance_indices(&mut idx, tuples.len()) {
                        return true;
                    }
                }
            }
        }
    }
}

/// The `n`-ary relations preserved by every table, a table of arity `k`
/// listing values in rank order.
pub(crate) fn invariants_of_tables(domain: FiniteDomain, tables: &[(usize, &[Elem])], n: usize) -> Result<Vec<FinRel>> {
    let cells = domain.power(n).ok_or_else(|| Error::Invalid(format!("arity {n} too large")))?;
    let space = space_usize(rel_space(domain, n), "relation")?;
    let arities: BTreeSet<usize> = tables.iter().map(|t| t.0).collect();
    let mut groups = Vec::new();
    for k in arities {
        let members: Vec<&[Elem]> = tables.iter().filter(|t| t.0 == k).map(|t| t.1).collect();
        let rows = domain.power(k).ok_or_else(|| Error::Invalid(format!("arity {k} too large")))?;
        match rows.checked_pow(n as u32).filter(|&c| c <= IMAGE_TABLE_LIMIT) {
            Some(count) => {
                let images = (0..count)
                    .into_par_iter()
                    .map(|mut mr| {
                        let mut m = vec![0usize; n];
                        for slot in m.iter_mut().rev() {
                            *slot = mr % rows;
                            mr /= rows;
                        }
                        let mut generated = BitSet::new(cells);
                        for t in &members {
                            generated.insert(m.iter().fold(0, |acc, &r| acc * domain.size() + t[r] as usize));
                        }
                        generated
                    })
                    .collect();
                groups.push(TableGroup::Images { k, rows, images });
            }
            None => groups.push(TableGroup::Direct { k, tables: members }),
        }
    }
    Ok((0..space)
        .into_par_iter()
        .filter_map(|mask| {
            let mut bits = BitSet::new(cells);
            (0..cells).filter(|i| mask >> i & 1 == 1).for_each(|i| {
                bits.insert(i);
            });
            let s = FinRel::from_bits(domain, n, bits);
            let tuples: Vec<Vec<Elem>> = s.tuples().collect();
            groups.iter().all(|g| g.preserves(domain, &s, &tuples)).then_some(s)
        })
        .collect())
}

/// The relation clone generated by `generators` within arities `0..=cap`:
/// diagonals, closed under products, reindexing and intersection as long
/// as every intermediate relation stays within the cap.
pub fn relation_clone_generate(
    domain: FiniteDomain,
    generators: &[FinRel],
    cap: usize,
) -> Result<ByArity<FinRel>> {
    let mut known: Vec<BTreeSet<FinRel>> = vec![BTreeSet::new(); cap + 1];
    let mut queue = VecDeque::new();
    let add = |r: FinRel, known: &mut Vec<BTreeSet<FinRel>>, queue: &mut VecDeque<FinRel>| {
        if known[r.arity()].insert(r.clone()) {
            queue.push_back(r);
        }
    };
    for n in 1..=cap {
        add(FinRel::diagonal(domain, n)?, &mut known, &mut queue);
    }
    for g in generators {
        domain.same_as(g.domain())?;
        if g.arity() > cap {
            return Err(Error::ArityMismatch { expected: cap, found: g.arity() });
        }
        add(g.clone(), &mut known, &mut queue);
    }
    while let Some(r) = queue.pop_front() {
        let n = r.arity();
        for m in 0..=cap {
            if n == 0 && m > 0 {
                continue;
            }
            let mut map = vec![0usize; m];
            loop {
                add(r.reindex(&map)?, &mut known, &mut queue);
                if !advance_indices(&mut map, n) {
                    break;
                }
            }
        }
        let partners: Vec<FinRel> = known[..=cap - n].iter().flatten().cloned().collect();
        for t in &partners {
            add(r.product(t)?, &mut known, &mut queue);
            add(t.product(&r)?, &mut known, &mut queue);
        }
        let same: Vec<FinRel> = known[n].iter().cloned().collect();
        for t in &same {
            add(r.intersect(t)?, &mut known, &mut queue);
        }
    }
    Ok(ByArity::from_slices(known.into_iter().map(|s| s.into_iter().collect()).collect()))
}

/// `(⋂ S_i^⊤)[n]`: the `n`-cut of the intersection of the top extensions.
///
/// Every member is padded to a common arity before intersecting, so
/// the result can be strictly smaller than the intersection of the cuts.
pub fn cut_of_intersection(domain: FiniteDomain, family: &[FinRel], n: usize) -> Result<FinRel> {
    let j = family.iter().map(FinRel::arity).fold(n, usize::max);
    let mut acc = FinRel::full(domain, j)?;
    for s in family {
        domain.same_as(s.domain())?;
        acc = acc.intersect(&s.pad(j)?)?;
    }
    acc.project_prefix(n)
}

/// How `Pol(Inv F)` was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeigerRoute {
    /// Enumerate `Inv_{<=cap} F`, then `Pol` of that.
    Explicit,
    /// For each `n × k` matrix `m`, `f ∈ Pol(Inv F)` iff `f[m] ∈ {g[m] : g ∈ F^(k)}`.
    Matrices,
}

#[derive(Debug, Clone)]
pub struct GeigerReport {
    pub caps: CloneCaps,
    pub route: GeigerRoute,
    pub clone: ByArity<FinOp>,
    /// Invariant counts per arity (explicit route only).
    pub invariants: Option<Vec<usize>>,
    pub pol_of_inv: ByArity<FinOp>,
    pub equal: bool,
    /// First operation of `Pol(Inv F)` outside `F`.
    pub witness: Option<FinOp>,
}

/// Above this many candidate invariants the matrix route is used.
pub const EXPLICIT_RELATION_LIMIT: u128 = 1 << 16;

/// Computes `F = <generators>` and `Pol(Inv_{<=relcap} F)` up to the op cap.
pub fn geiger_roundtrip(domain: FiniteDomain, generators: &[FinOp], caps: CloneCaps) -> Result<GeigerReport> {
    let explicit = (0..=caps.relation_arity)
        .map(|n| rel_space(domain, n))
        .try_fold(0u128, |acc, s| acc.checked_add(s?))
        .is_some_and(|total| total <= EXPLICIT_RELATION_LIMIT);
    let route = if explicit { GeigerRoute::Explicit } else { GeigerRoute::Matrices };
    geiger_roundtrip_via(domain, generators, caps, route)
}

pub fn geiger_roundtrip_via(
    domain: FiniteDomain,
    generators: &[FinOp],
    caps: CloneCaps,
    route: GeigerRoute,
) -> Result<GeigerReport> {
    let clone = generate_clone(domain, generators, caps.op_arity)?;
    let (pol_of_inv, invariants) = match route {
        GeigerRoute::Explicit => {
            let members: Vec<FinOp> = clone.iter().cloned().collect();
            let invs = inv(domain, &members, caps.relation_arity)?;
            let all: Vec<FinRel> = invs.iter().cloned().collect();
            (pol(domain, &all, caps.op_arity)?, Some(invs.counts()))
        }
        GeigerRoute::Matrices => (pol_inv_via_matrices(domain, &clone, caps)?, None),
    };
    let witness = pol_of_inv.missing_from(&clone).next().cloned();
    Ok(GeigerReport {
        caps,
        route,
        equal: witness.is_none() && clone.missing_from(&pol_of_inv).next().is_none(),
        clone,
        invariants,
        pol_of_inv,
        witness,
    })
}

/// `Pol(Inv_{<=relcap} F)` for a clone given by its slices, through the
/// relations `{g[m] : g ∈ F^(k)}` generated by matrix columns.
pub fn pol_inv_via_matrices(
    domain: FiniteDomain,
    clone: &ByArity<FinOp>,
    caps: CloneCaps,
) -> Result<ByArity<FinOp>> {
    let n = caps.relation_arity;
    let slices = (0..=caps.op_arity)
        .map(|k| {
            let rows = domain.power(k).expect("op arity already saturated");
            let members = clone.slice(k);
            // row ranks of m, one entry per row of the matrix
            let mut matrices = Vec::new();
            let mut m = vec![0usize; n];
            loop {
                let mut generated = BitSet::new(domain.power(n).expect("relation cap fits"));
                for g in members {
                    generated.insert(m.iter().fold(0, |acc, &r| acc * domain.size() + g.at_rank(r) as usize));
                }
                matrices.push((m.clone(), generated));
                if !advance_indices(&mut m, rows) {
                    break;
                }
            }
            let space = space_usize(op_space(domain, k), "operation")?;
            Ok((0..space)
                .into_par_iter()
                .filter_map(|r| {
                    let f = FinOp::from_table_unchecked(domain, k, domain.unrank(r, rows));
                    matrices
                        .iter()
                        .all(|(m, gen)| {
                            gen.contains(m.iter().fold(0, |acc, &row| acc * domain.size() + f.at_rank(row) as usize))
                        })
                        .then_some(f)
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ByArity::from_slices(slices))
}
