use std::fmt;

use crate::domain::{digits, Elem, FiniteDomain};
use crate::error::{Error, Result};

/// A finitary operation `A^k -> A` stored as its value table.
///
/// Entry `r` of the table is the value at the tuple of rank `r`
/// (leftmost argument most significant).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinOp {
    arity: usize,
    domain: FiniteDomain,
    table: Vec<Elem>,
}

impl FinOp {
    pub fn new(domain: FiniteDomain, arity: usize, table: Vec<Elem>) -> Result<Self> {
        let cells = domain
            .power(arity)
            .ok_or_else(|| Error::Invalid(format!("arity {arity} too large")))?;
        if table.len() != cells {
            return Err(Error::ShapeMismatch(format!(
                "table of arity {arity} needs {cells} entries, got {}",
                table.len()
            )));
        }
        domain.check_all(&table)?;
        Ok(Self { arity, domain, table })
    }

    pub(crate) fn from_table_unchecked(domain: FiniteDomain, arity: usize, table: Vec<Elem>) -> Self {
        Self { arity, domain, table }
    }

    pub fn from_fn(domain: FiniteDomain, arity: usize, f: impl Fn(&[Elem]) -> Elem) -> Result<Self> {
        let table = domain.tuples(arity).map(|t| f(&t)).collect();
        Self::new(domain, arity, table)
    }

    pub fn projection(domain: FiniteDomain, arity: usize, index: usize) -> Result<Self> {
        if index >= arity {
            return Err(Error::IndexOutOfRange { index, len: arity });
        }
        Self::from_fn(domain, arity, |t| t[index])
    }

    pub fn constant(domain: FiniteDomain, arity: usize, value: Elem) -> Result<Self> {
        domain.check(value)?;
        Self::from_fn(domain, arity, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn domain(&self) -> FiniteDomain {
        self.domain
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    pub fn eval(&self, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity);
        self.table[self.domain.rank(args)]
    }

    /// Value at the argument tuple of the given rank.
    #[inline]
    pub fn at_rank(&self, rank: usize) -> Elem {
        self.table[rank]
    }

    /// `f(g_1, .., g_n)` where every `g_i` has the given arity.
    ///
    /// The arity is explicit so that nullary `f` composes into any arity.
    pub fn compose(&self, args: &[FinOp], arity: usize) -> Result<FinOp> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        for g in args {
            self.domain.same_as(g.domain)?;
            if g.arity != arity {
                return Err(Error::ArityMismatch { expected: arity, found: g.arity });
            }
        }
        let tables: Vec<&[Elem]> = args.iter().map(|g| g.table.as_slice()).collect();
        Ok(Self::from_table_unchecked(
            self.domain,
            arity,
            compose_tables(self.domain, &self.table, &tables, arity),
        ))
    }

    pub fn is_projection(&self) -> bool {
        (0..self.arity).any(|i| {
            self.domain.tuples(self.arity).zip(&self.table).all(|(t, &v)| t[i] == v)
        })
    }
}

/// Table-level composition shared by saturation loops.
pub(crate) fn compose_tables(
    domain: FiniteDomain,
    outer: &[Elem],
    inner: &[&[Elem]],
    arity: usize,
) -> Vec<Elem> {
    let mut out = vec![0; domain.power(arity).expect("arity already validated")];
    compose_into(domain, outer, inner, &mut out);
    out
}

/// `compose_tables` into a buffer of the right length.
pub(crate) fn compose_into(domain: FiniteDomain, outer: &[Elem], inner: &[&[Elem]], out: &mut [Elem]) {
    let size = domain.size();
    for (r, slot) in out.iter_mut().enumerate() {
        *slot = outer[inner.iter().fold(0usize, |acc, g| acc * size + g[r] as usize)];
    }
}

impl fmt::Display for FinOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.arity, digits(&self.table))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bool2() -> FiniteDomain {
        FiniteDomain::new(2).unwrap()
    }

    #[test]
    fn compose_and_with_projections_swapped() {
        let d = bool2();
        let and = FinOp::new(d, 2, vec![0, 0, 0, 1]).unwrap();
        let p0 = FinOp::projection(d, 2, 0).unwrap();
        let p1 = FinOp::projection(d, 2, 1).unwrap();
        assert_eq!(and.compose(&[p1, p0], 2).unwrap(), and);
    }

    #[test]
    fn nullary_outer_gives_constant() {
        let d = bool2();
        let one = FinOp::new(d, 0, vec![1]).unwrap();
        assert_eq!(one.compose(&[], 3).unwrap(), FinOp::constant(d, 3, 1).unwrap());
    }

    #[test]
    fn compose_arity_mismatch() {
        let d = bool2();
        let and = FinOp::new(d, 2, vec![0, 0, 0, 1]).unwrap();
        let p0 = FinOp::projection(d, 1, 0).unwrap();
        assert_eq!(
            and.compose(&[p0], 1),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn projection_out_of_range() {
        assert_eq!(
            FinOp::projection(bool2(), 2, 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
    }

    #[test]
    fn table_is_lexicographic_leftmost_major() {
        let d = FiniteDomain::new(3).unwrap();
        let f = FinOp::from_fn(d, 2, |t| t[0]).unwrap();
        assert_eq!(f.table(), &[0, 0, 0, 1, 1, 1, 2, 2, 2]);
    }
}
