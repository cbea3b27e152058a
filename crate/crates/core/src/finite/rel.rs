use std::fmt;

use crate::bitset::BitSet;
use crate::domain::{digits, Elem, FiniteDomain};
use crate::error::{Error, Result};

/// A finitary relation `S ⊆ A^n`, stored as a bitset over tuple ranks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinRel {
    arity: usize,
    domain: FiniteDomain,
    bits: BitSet,
}

fn cells(domain: FiniteDomain, arity: usize) -> Result<usize> {
    domain
        .power(arity)
        .filter(|&c| c <= 1 << 30)
        .ok_or_else(|| Error::Invalid(format!("relation arity {arity} too large")))
}

impl FinRel {
    pub fn empty(domain: FiniteDomain, arity: usize) -> Result<Self> {
        Ok(Self { arity, domain, bits: BitSet::new(cells(domain, arity)?) })
    }

    /// `A^n`.
    pub fn full(domain: FiniteDomain, arity: usize) -> Result<Self> {
        Ok(Self { arity, domain, bits: BitSet::full(cells(domain, arity)?) })
    }

    pub fn from_tuples<I, T>(domain: FiniteDomain, arity: usize, tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[Elem]>,
    {
        let mut rel = Self::empty(domain, arity)?;
        for t in tuples {
            rel.insert(t.as_ref())?;
        }
        Ok(rel)
    }

    pub(crate) fn from_bits(domain: FiniteDomain, arity: usize, bits: BitSet) -> Self {
        debug_assert_eq!(Some(bits.len()), domain.power(arity));
        Self { arity, domain, bits }
    }

    /// `Δ^(n) = {(a, .., a)}`.
    pub fn diagonal(domain: FiniteDomain, arity: usize) -> Result<Self> {
        Self::from_tuples(domain, arity, domain.elements().map(|a| vec![a; arity]))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> FiniteDomain {
        self.domain
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn insert(&mut self, tuple: &[Elem]) -> Result<bool> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: tuple.len() });
        }
        self.domain.check_all(tuple)?;
        Ok(self.bits.insert(self.domain.rank(tuple)))
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        tuple.len() == self.arity
            && tuple.iter().all(|&a| self.domain.contains(a))
            && self.bits.contains(self.domain.rank(tuple))
    }

    #[inline]
    pub fn contains_rank(&self, rank: usize) -> bool {
        self.bits.contains(rank)
    }

    /// Member tuples in rank order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        self.bits.iter().map(|r| self.domain.unrank(r, self.arity))
    }

    pub fn is_subset(&self, other: &FinRel) -> bool {
        self.arity == other.arity && self.domain == other.domain && self.bits.is_subset(&other.bits)
    }

    fn same_shape(&self, other: &FinRel) -> Result<()> {
        self.domain.same_as(other.domain)?;
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &FinRel) -> Result<FinRel> {
        self.same_shape(other)?;
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Ok(Self::from_bits(self.domain, self.arity, bits))
    }

    pub fn union(&self, other: &FinRel) -> Result<FinRel> {
        self.same_shape(other)?;
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Ok(Self::from_bits(self.domain, self.arity, bits))
    }

    /// `S × U`.
    pub fn product(&self, other: &FinRel) -> Result<FinRel> {
        self.domain.same_as(other.domain)?;
        let arity = self.arity + other.arity;
        let mut out = Self::empty(self.domain, arity)?;
        let stride = cells(self.domain, other.arity)?;
        for a in self.bits.iter() {
            for b in other.bits.iter() {
                out.bits.insert(a * stride + b);
            }
        }
        Ok(out)
    }

    /// `π_f(S) = {s ∘ f : s ∈ S}` for `f : m -> n` given as its image list.
    pub fn reindex(&self, map: &[usize]) -> Result<FinRel> {
        if let Some(&bad) = map.iter().find(|&&i| i >= self.arity) {
            return Err(Error::IndexOutOfRange { index: bad, len: self.arity });
        }
        let mut out = Self::empty(self.domain, map.len())?;
        let mut image = vec![0; map.len()];
        for t in self.tuples() {
            for (slot, &i) in image.iter_mut().zip(map) {
                *slot = t[i];
            }
            out.bits.insert(self.domain.rank(&image));
        }
        Ok(out)
    }

    /// Projection onto the first `k` coordinates (`k <= arity`).
    pub fn project_prefix(&self, k: usize) -> Result<FinRel> {
        if k > self.arity {
            return Err(Error::IndexOutOfRange { index: k, len: self.arity });
        }
        let drop = cells(self.domain, self.arity - k)?;
        let mut out = Self::empty(self.domain, k)?;
        for r in self.bits.iter() {
            out.bits.insert(r / drop);
        }
        Ok(out)
    }

    /// `S × A^(k-n)` for `k >= arity`.
    pub fn pad(&self, k: usize) -> Result<FinRel> {
        if k < self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: k });
        }
        self.product(&Self::full(self.domain, k - self.arity)?)
    }

    /// The `k`-cut of the top extension `S^⊤ = S × A^ω`.
    pub fn top_cut(&self, k: usize) -> Result<FinRel> {
        if k >= self.arity {
            self.pad(k)
        } else {
            self.project_prefix(k)
        }
    }
}

impl fmt::Display for FinRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} =", self.arity)?;
        for t in self.tuples() {
            if t.is_empty() {
                write!(f, " ()")?;
            } else {
                write!(f, " {}", digits(&t))?;
            }
        }
        Ok(())
    }
}

/// One of the relation-clone constructors.
#[derive(Debug, Clone)]
pub enum RelTransform<'a> {
    Diagonal(usize),
    Product(&'a FinRel, &'a FinRel),
    Reindex(&'a FinRel, &'a [usize]),
    /// Intersection of a family of relations of the given arity.
    Intersect(usize, &'a [FinRel]),
    Union(usize, &'a [FinRel]),
}

pub fn finrel_transform(domain: FiniteDomain, t: RelTransform<'_>) -> Result<FinRel> {
    match t {
        RelTransform::Diagonal(n) => FinRel::diagonal(domain, n),
        RelTransform::Product(s, u) => s.product(u),
        RelTransform::Reindex(s, map) => s.reindex(map),
        RelTransform::Intersect(n, family) => family
            .iter()
            .try_fold(FinRel::full(domain, n)?, |acc, s| acc.intersect(s)),
        RelTransform::Union(n, family) => family
            .iter()
            .try_fold(FinRel::empty(domain, n)?, |acc, s| acc.union(s)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize) -> FiniteDomain {
        FiniteDomain::new(n).unwrap()
    }

    #[test]
    fn reindex_swap_of_leq_is_geq() {
        let leq = FinRel::from_tuples(d(2), 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
        let geq = FinRel::from_tuples(d(2), 2, [[0, 0], [1, 0], [1, 1]]).unwrap();
        assert_eq!(leq.reindex(&[1, 0]).unwrap(), geq);
    }

    #[test]
    fn reindex_rejects_bad_index() {
        let leq = FinRel::from_tuples(d(2), 2, [[0, 0]]).unwrap();
        assert_eq!(leq.reindex(&[2]), Err(Error::IndexOutOfRange { index: 2, len: 2 }));
    }

    #[test]
    fn empty_family_intersection_is_full() {
        let s = finrel_transform(d(3), RelTransform::Intersect(2, &[])).unwrap();
        assert_eq!(s.len(), 9);
    }

    #[test]
    fn product_and_projection() {
        let s = FinRel::from_tuples(d(3), 1, [[2]]).unwrap();
        let p = s.pad(3).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p.project_prefix(1).unwrap(), s);
        assert_eq!(p.top_cut(0).unwrap().len(), 1);
    }

    #[test]
    fn nullary_relations() {
        let unit = FinRel::full(d(2), 0).unwrap();
        assert!(unit.contains(&[]));
        assert!(FinRel::empty(d(2), 0).unwrap().is_empty());
        let s = FinRel::from_tuples(d(2), 1, [[1]]).unwrap();
        assert_eq!(s.reindex(&[]).unwrap(), unit);
    }
}
