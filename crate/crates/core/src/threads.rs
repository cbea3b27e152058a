//! Eventually-constant threads `s ∈ A^ω` and trace descriptors.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::domain::{digit, parse_digit, Elem, FiniteDomain};
use crate::error::{Error, Result};

/// A thread `(p_0, .., p_{m-1}, t, t, ..)`.
///
/// Always canonical: the prefix never ends with the tail value, so two
/// threads are equal as sequences iff they are structurally equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvThread {
    prefix: Vec<Elem>,
    tail: Elem,
}

impl EvThread {
    pub fn new(mut prefix: Vec<Elem>, tail: Elem) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        Self { prefix, tail }
    }

    /// `a^ω`.
    pub fn constant(a: Elem) -> Self {
        Self { prefix: Vec::new(), tail: a }
    }

    pub fn prefix(&self) -> &[Elem] {
        &self.prefix
    }

    pub fn tail(&self) -> Elem {
        self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_constant(&self) -> bool {
        self.prefix.is_empty()
    }

    #[inline]
    pub fn at(&self, i: usize) -> Elem {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    /// `s|n`.
    pub fn first(&self, n: usize) -> Vec<Elem> {
        (0..n).map(|i| self.at(i)).collect()
    }

    /// `s[a_0, .., a_{k-1}]`: overwrite the first `k` coordinates.
    pub fn substitute(&self, head: &[Elem]) -> Self {
        let len = self.prefix.len().max(head.len());
        let prefix = (0..len).map(|i| head.get(i).copied().unwrap_or_else(|| self.at(i))).collect();
        Self::new(prefix, self.tail)
    }

    /// `s =_ω u`: the threads agree from some index on.
    pub fn eq_omega(&self, other: &EvThread) -> bool {
        self.tail == other.tail
    }

    /// `s|D` for a finite index set, as `(index, value)` pairs.
    pub fn restrict(&self, indices: &[usize]) -> Vec<(usize, Elem)> {
        indices.iter().map(|&i| (i, self.at(i))).collect()
    }

    /// The set of values taken.
    pub fn values(&self) -> BTreeSet<Elem> {
        self.prefix.iter().copied().chain([self.tail]).collect()
    }

    pub fn in_trace(&self, trace: &TraceDescriptor) -> bool {
        trace.contains(self)
    }

    pub fn check_domain(&self, domain: FiniteDomain) -> Result<()> {
        domain.check_all(&self.prefix)?;
        domain.check(self.tail).map(drop)
    }
}

/// Every canonical thread with prefix length `<= max_prefix`, ordered by
/// prefix length, then prefix, then tail.
pub fn threads_up_to(domain: FiniteDomain, max_prefix: usize) -> Vec<EvThread> {
    let mut out = Vec::new();
    for len in 0..=max_prefix {
        for p in domain.tuples(len) {
            for t in domain.elements() {
                if p.last() != Some(&t) {
                    out.push(EvThread { prefix: p.clone(), tail: t });
                }
            }
        }
    }
    out
}

impl fmt::Display for EvThread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.prefix {
            write!(f, "{} ", digit(*a))?;
        }
        write!(f, "| {}", digit(self.tail))
    }
}

impl FromStr for EvThread {
    type Err = Error;

    /// `"0 1 | 1"`; whitespace is optional, `"|a"` is `a^ω`.
    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once('|')
            .ok_or_else(|| Error::Invalid(format!("thread literal `{s}` lacks `|`")))?;
        let prefix = parse_digits(head)?;
        let tail = match parse_digits(tail)?.as_slice() {
            [t] => *t,
            _ => return Err(Error::Invalid(format!("thread literal `{s}` needs one tail value"))),
        };
        Ok(Self::new(prefix, tail))
    }
}

/// Reads every non-whitespace character as a base-36 element.
pub fn parse_digits(s: &str) -> Result<Vec<Elem>> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| parse_digit(c).ok_or_else(|| Error::Invalid(format!("bad element `{c}`"))))
        .collect()
}

/// A compact trace `[c_1^ω] ∪ .. ∪ [c_k^ω]`, given by its tail values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceDescriptor {
    tails: BTreeSet<Elem>,
}

impl TraceDescriptor {
    pub fn new(tails: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let tails: BTreeSet<Elem> = tails.into_iter().collect();
        if tails.is_empty() {
            return Err(Error::Invalid("trace descriptor needs at least one tail".into()));
        }
        Ok(Self { tails })
    }

    /// The basic trace `[a^ω]`.
    pub fn basic(a: Elem) -> Self {
        Self { tails: BTreeSet::from([a]) }
    }

    pub fn tails(&self) -> &BTreeSet<Elem> {
        &self.tails
    }

    pub fn contains(&self, s: &EvThread) -> bool {
        self.tails.contains(&s.tail)
    }

    pub fn union(&self, other: &TraceDescriptor) -> Self {
        Self { tails: self.tails.union(&other.tails).copied().collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> EvThread {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form_strips_tail_values() {
        assert_eq!(EvThread::new(vec![0, 1, 1], 1), EvThread::new(vec![0], 1));
        assert_eq!(t("0 1 1 | 1").prefix(), &[0]);
    }

    #[test]
    fn substitute_examples() {
        assert_eq!(t("0 1 | 1").substitute(&[1]), EvThread::constant(1));
        assert_eq!(EvThread::constant(0).substitute(&[1, 1]), t("1 1 | 0"));
    }

    #[test]
    fn eq_omega_examples() {
        assert!(t("0 0 | 1").eq_omega(&t("1 | 1")));
        assert!(!EvThread::constant(0).eq_omega(&EvThread::constant(1)));
    }

    #[test]
    fn literal_roundtrip_and_errors() {
        assert_eq!(t("0 1 | 1").to_string(), "0 | 1");
        assert_eq!(t("|0").to_string(), "| 0");
        assert!("0 1".parse::<EvThread>().is_err());
        assert!("0 | 1 0".parse::<EvThread>().is_err());
    }

    #[test]
    fn enumeration_counts() {
        let d = FiniteDomain::new(2).unwrap();
        // per tail: 1 + 1 + 2 + 4 prefixes not ending in the tail
        assert_eq!(threads_up_to(d, 3).len(), 16);
    }

    #[test]
    fn trace_membership() {
        let tr = TraceDescriptor::new([1]).unwrap();
        assert!(t("0 0 | 1").in_trace(&tr));
        assert!(!t("1 | 0").in_trace(&tr));
        assert!(TraceDescriptor::new([]).is_err());
    }

    fn thread() -> impl Strategy<Value = EvThread> {
        (prop::collection::vec(0u8..3, 0..6), 0u8..3).prop_map(|(p, t)| EvThread::new(p, t))
    }

    proptest! {
        #[test]
        fn canonical_equality_matches_pointwise(a in thread(), b in thread()) {
            let n = a.prefix_len().max(b.prefix_len()) + 1;
            prop_assert_eq!(a == b, a.first(n) == b.first(n));
        }

        #[test]
        fn eq_omega_is_equivalence(a in thread(), b in thread(), c in thread()) {
            prop_assert!(a.eq_omega(&a));
            prop_assert_eq!(a.eq_omega(&b), b.eq_omega(&a));
            if a.eq_omega(&b) && b.eq_omega(&c) {
                prop_assert!(a.eq_omega(&c));
            }
        }

        #[test]
        fn substitution_law(s in thread(), x in prop::collection::vec(0u8..3, 0..4),
                            y in prop::collection::vec(0u8..3, 0..4)) {
            let (short, long) = if x.len() <= y.len() { (x, y) } else { (y, x) };
            prop_assert_eq!(s.substitute(&short).substitute(&long), s.substitute(&long));
        }

        #[test]
        fn trace_closed_under_eq_omega(a in thread(), b in thread(), tails in prop::collection::btree_set(0u8..3, 1..3)) {
            let tr = TraceDescriptor::new(tails).unwrap();
            if a.in_trace(&tr) && a.eq_omega(&b) {
                prop_assert!(b.in_trace(&tr));
            }
        }

        #[test]
        fn literal_roundtrip(a in thread()) {
            prop_assert_eq!(a.to_string().parse::<EvThread>().unwrap(), a);
        }
    }
}
