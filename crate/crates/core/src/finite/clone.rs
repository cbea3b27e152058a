use std::collections::HashSet;

use rayon::prelude::*;

use super::graded::ByArity;
use super::op::{compose_into, FinOp};
use crate::bitset::BitSet;
use crate::domain::{advance_indices, Elem, FiniteDomain};
use crate::error::{Error, Result};

/// Arity caps for finitary saturation and Galois round trips.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CloneCaps {
    pub op_arity: usize,
    pub relation_arity: usize,
}

impl CloneCaps {
    pub fn new(op_arity: usize, relation_arity: usize) -> Self {
        Self { op_arity, relation_arity }
    }
}

/// Number of operations of the given arity, if it fits in `u128`.
pub fn op_space(domain: FiniteDomain, arity: usize) -> Option<u128> {
    let cells = u32::try_from(domain.power(arity)?).ok()?;
    (domain.size() as u128).checked_pow(cells)
}

/// Number of relations of the given arity, if it fits in `u128`.
pub fn rel_space(domain: FiniteDomain, arity: usize) -> Option<u128> {
    let cells = u32::try_from(domain.power(arity)?).ok()?;
    2u128.checked_pow(cells)
}

/// Tables already reached; dense when the operation space is small.
enum Seen {
    Dense(BitSet),
    Sparse(HashSet<Vec<Elem>>),
}

impl Seen {
    fn new(domain: FiniteDomain, arity: usize) -> Self {
        match op_space(domain, arity) {
            Some(n) if n <= 1 << 26 => Seen::Dense(BitSet::new(n as usize)),
            _ => Seen::Sparse(HashSet::new()),
        }
    }

    fn contains(&self, domain: FiniteDomain, t: &[Elem]) -> bool {
        match self {
            Seen::Dense(b) => b.contains(domain.rank(t)),
            Seen::Sparse(h) => h.contains(t),
        }
    }

    fn insert(&mut self, domain: FiniteDomain, t: &[Elem]) -> bool {
        match self {
            Seen::Dense(b) => b.insert(domain.rank(t)),
            Seen::Sparse(h) => h.insert(t.to_vec()),
        }
    }
}

/// The clone generated by `generators`, truncated to arities `0..=cap`.
///
/// Slice `k` is the set of `k`-ary term operations: it is saturated
/// breadth-first from the `k`-ary projections under every generator.
/// Generators of arity above `cap` still act as outer functions, so each
/// reported slice is exact.
pub fn generate_clone(domain: FiniteDomain, generators: &[FinOp], cap: usize) -> Result<ByArity<FinOp>> {
    for g in generators {
        domain.same_as(g.domain())?;
    }
    let slices = (0..=cap)
        .map(|k| saturate_slice(domain, generators, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(ByArity::from_slices(slices))
}

fn saturate_slice(domain: FiniteDomain, generators: &[FinOp], k: usize) -> Result<Vec<FinOp>> {
    let cells = domain
        .power(k)
        .ok_or_else(|| Error::Invalid(format!("arity {k} too large")))?;
    let space = op_space(domain, k);
    let mut seen = Seen::new(domain, k);
    let mut elems: Vec<Vec<Elem>> = Vec::new();
    let push = |t: Vec<Elem>, seen: &mut Seen, elems: &mut Vec<Vec<Elem>>| {
        if seen.insert(domain, &t) {
            elems.push(t);
        }
    };
    for i in 0..k {
        push(FinOp::projection(domain, k, i)?.table().to_vec(), &mut seen, &mut elems);
    }
    for g in generators.iter().filter(|g| g.arity() == 0) {
        push(vec![g.table()[0]; cells], &mut seen, &mut elems);
    }
    let outer: Vec<&FinOp> = generators.iter().filter(|g| g.arity() > 0).collect();
    let mut start = 0;
    while start < elems.len() {
        if space == Some(elems.len() as u128) {
            break;
        }
        let end = elems.len();
        let mut fresh: Vec<Vec<Elem>> = Vec::new();
        for g in &outer {
            fresh.extend(round(domain, g, &elems, start, end, k, &seen));
        }
        fresh.sort();
        fresh.dedup();
        for t in fresh {
            push(t, &mut seen, &mut elems);
        }
        start = end;
    }
    Ok(elems
        .into_iter()
        .map(|t| FinOp::from_table_unchecked(domain, k, t))
        .collect())
}

/// All compositions `g(t_1, .., t_n)` with some `t_p` drawn from
/// `elems[start..end]`, that are not yet seen.
fn round(
    domain: FiniteDomain,
    g: &FinOp,
    elems: &[Vec<Elem>],
    start: usize,
    end: usize,
    k: usize,
    seen: &Seen,
) -> Vec<Vec<Elem>> {
    let n = g.arity();
    let cells = domain.power(k).expect("arity already validated");
    (0..n)
        .flat_map(|p| (start..end).map(move |fresh| (p, fresh)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .flat_map_iter(|(p, fresh)| {
            // position p is the first one holding a new element
            let bounds: Vec<usize> = (0..n)
                .map(|q| match q.cmp(&p) {
                    std::cmp::Ordering::Less => start,
                    std::cmp::Ordering::Equal => 1,
                    std::cmp::Ordering::Greater => end,
                })
                .collect();
            let mut out = Vec::new();
            if bounds.contains(&0) {
                return out;
            }
            let mut idx = vec![0usize; n];
            let mut local = HashSet::new();
            let mut inner: Vec<&[Elem]> = vec![&[]; n];
            let mut buf = vec![0; cells];
            loop {
                for (q, slot) in inner.iter_mut().enumerate() {
                    *slot = if q == p { &elems[fresh] } else { &elems[idx[q]] };
                }
                compose_into(domain, g.table(), &inner, &mut buf);
                if !seen.contains(domain, &buf) && !local.contains(&buf) {
                    local.insert(buf.clone());
                    out.push(buf.clone());
                }
                if !advance_bounded(&mut idx, &bounds) {
                    break;
                }
            }
            out
        })
        .collect()
}

fn advance_bounded(idx: &mut [usize], bounds: &[usize]) -> bool {
    for (d, &b) in idx.iter_mut().zip(bounds).rev() {
        if *d + 1 < b {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Checks that every slice is closed under composition with every
/// member (of any arity in the family) as the outer function.
pub fn is_composition_closed(family: &ByArity<FinOp>) -> bool {
    let cap = family.cap();
    family.iter().all(|f| {
        (0..=cap).all(|k| {
            let inner = family.slice(k);
            if f.arity() > 0 && inner.is_empty() {
                return true;
            }
            let mut idx = vec![0usize; f.arity()];
            loop {
                let args: Vec<FinOp> = idx.iter().map(|&i| inner[i].clone()).collect();
                let h = f.compose(&args, k).expect("shapes agree");
                if !family.contains(k, &h) {
                    return false;
                }
                if !advance_indices(&mut idx, inner.len()) {
                    return true;
                }
            }
        })
    })
}

/// Checks closure of every slice under the given generators.
pub fn is_closed_under(family: &ByArity<FinOp>, generators: &[FinOp]) -> bool {
    let domain = match family.iter().next() {
        Some(f) => f.domain(),
        None => return generators.is_empty(),
    };
    (0..=family.cap()).all(|k| {
        let slice = family.slice(k);
        if op_space(domain, k) == Some(slice.len() as u128) {
            return true;
        }
        let tables: Vec<Vec<Elem>> = slice.iter().map(|f| f.table().to_vec()).collect();
        let mut seen = Seen::new(domain, k);
        for t in &tables {
            seen.insert(domain, t);
        }
        generators.iter().all(|g| {
            g.arity() == 0 && seen.contains(domain, &vec![g.table()[0]; domain.power(k).unwrap()])
                || g.arity() > 0 && round(domain, g, &tables, 0, tables.len(), k, &seen).is_empty()
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> FiniteDomain {
        FiniteDomain::new(n).unwrap()
    }

    fn op(n: usize, arity: usize, t: &[Elem]) -> FinOp {
        FinOp::new(d(n), arity, t.to_vec()).unwrap()
    }

    #[test]
    fn no_generators_gives_projections() {
        let c = generate_clone(d(2), &[], 2).unwrap();
        assert_eq!(c.counts(), vec![0, 1, 2]);
        assert!(c.slice(1)[0].is_projection());
    }

    #[test]
    fn and_clone_binary_slice() {
        let and = op(2, 2, &[0, 0, 0, 1]);
        let c = generate_clone(d(2), &[and.clone()], 2).unwrap();
        assert_eq!(c.counts(), vec![0, 1, 3]);
        assert!(c.contains(2, &and));
        assert!(is_composition_closed(&c));
        assert!(is_closed_under(&c, &[and]));
    }

    #[test]
    fn not_clone() {
        let not = op(2, 1, &[1, 0]);
        let c = generate_clone(d(2), &[not], 2).unwrap();
        assert_eq!(c.counts(), vec![0, 2, 4]);
    }

    #[test]
    fn majority_above_cap_still_acts() {
        let maj = FinOp::from_fn(d(2), 3, |t| u8::from(t.iter().sum::<u8>() >= 2)).unwrap();
        let c = generate_clone(d(2), &[maj], 2).unwrap();
        assert_eq!(c.counts(), vec![0, 1, 2]);
        let d3 = d(3);
        let m3 = FinOp::from_fn(d3, 3, |t| t[0].max(t[1])).unwrap();
        let c3 = generate_clone(d3, &[m3], 2).unwrap();
        assert_eq!(c3.counts()[2], 3);
    }

    #[test]
    fn nullary_generator_spreads_constants() {
        let one = op(2, 0, &[1]);
        let c = generate_clone(d(2), &[one], 2).unwrap();
        assert_eq!(c.counts(), vec![1, 2, 3]);
    }

    #[test]
    fn sheffer_stroke_generates_everything() {
        let nand = op(2, 2, &[1, 1, 1, 0]);
        let c = generate_clone(d(2), &[nand], 2).unwrap();
        assert_eq!(c.counts(), vec![0, 4, 16]);
    }

    #[test]
    fn domain_mismatch_is_reported() {
        let g = op(3, 1, &[0, 1, 2]);
        assert!(matches!(generate_clone(d(2), &[g], 1), Err(Error::DomainMismatch { .. })));
    }
}
