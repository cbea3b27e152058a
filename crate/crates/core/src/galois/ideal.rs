use std::collections::BTreeSet;

use crate::domain::{Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::omega_ops::ROp;
use crate::threads::{threads_up_to, EvThread};

/// A test set for local agreement: finitely many threads together with
/// the basic traces `[c^ω]` for the listed tails.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TestSet {
    pub threads: BTreeSet<EvThread>,
    pub tails: BTreeSet<Elem>,
}

impl TestSet {
    pub fn threads(threads: impl IntoIterator<Item = EvThread>) -> Self {
        Self { threads: threads.into_iter().collect(), tails: BTreeSet::new() }
    }

    pub fn traces(tails: impl IntoIterator<Item = Elem>) -> Self {
        Self { threads: BTreeSet::new(), tails: tails.into_iter().collect() }
    }

    pub fn union(&self, other: &TestSet) -> TestSet {
        TestSet {
            threads: self.threads.union(&other.threads).cloned().collect(),
            tails: self.tails.union(&other.tails).copied().collect(),
        }
    }
}

/// `φ|d = ψ|d`.
pub fn agree_on(phi: &ROp, psi: &ROp, d: &TestSet) -> bool {
    if !d.threads.iter().all(|s| phi.eval(s) == psi.eval(s)) {
        return false;
    }
    if d.tails.is_empty() {
        return true;
    }
    let w = phi.width().max(psi.width());
    let (a, b) = (phi.pad(w), psi.pad(w));
    let size = phi.domain().size();
    a.head()
        .chunks(size)
        .zip(b.head().chunks(size))
        .all(|(x, y)| d.tails.iter().all(|&c| x[c as usize] == y[c as usize]))
}

/// The standard ideals of test sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdealKind {
    Local,
    Uniform,
    Trace,
    Global,
}

/// A union-closed family of test sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    tests: Vec<TestSet>,
}

/// Largest union closure [`IdealSpec::new`] will build.
pub const MAX_IDEAL_TESTS: usize = 4096;

impl IdealSpec {
    /// Closes `tests` under finite unions.
    pub fn new(tests: Vec<TestSet>) -> Result<Self> {
        if tests.is_empty() {
            return Err(Error::Invalid("an ideal needs at least one test set".into()));
        }
        let mut closed: BTreeSet<TestSet> = tests.into_iter().collect();
        loop {
            let current: Vec<TestSet> = closed.iter().cloned().collect();
            let mut grew = false;
            for (i, a) in current.iter().enumerate() {
                for b in &current[i + 1..] {
                    grew |= closed.insert(a.union(b));
                }
            }
            if closed.len() > MAX_IDEAL_TESTS {
                return Err(Error::Invalid(format!("union closure exceeds {MAX_IDEAL_TESTS} test sets")));
            }
            if !grew {
                break;
            }
        }
        Ok(Self { tests: closed.into_iter().collect() })
    }

    /// The ideal of the given kind, restricted to threads with prefix
    /// length `<= prefix_bound`.
    ///
    /// On eventually-constant threads `Uniform` coincides with `Local` and
    /// `Global` with `Trace`.
    pub fn canonical(kind: IdealKind, domain: FiniteDomain, prefix_bound: usize) -> Self {
        let test = match kind {
            IdealKind::Local | IdealKind::Uniform => TestSet::threads(threads_up_to(domain, prefix_bound)),
            IdealKind::Trace | IdealKind::Global => TestSet::traces(domain.elements()),
        };
        Self { tests: vec![test] }
    }

    pub fn tests(&self) -> &[TestSet] {
        &self.tests
    }
}

/// `φ ∈ Cl_X(C)`: on every test set some member of `C` agrees with `φ`.
pub fn cl_membership(phi: &ROp, clone: &[ROp], ideal: &IdealSpec) -> bool {
    ideal.tests.iter().all(|d| clone.iter().any(|psi| agree_on(phi, psi, d)))
}
