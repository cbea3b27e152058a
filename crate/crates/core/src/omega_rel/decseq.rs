use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use super::evset::EvSet;
use crate::domain::{Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::finite::FinRel;
use crate::threads::EvThread;

type Producer = dyn Fn(usize) -> Result<FinRel> + Send + Sync;
/// `None` for members, `Some(i)` with `s|i ∉ S_i` otherwise.
type Exact = dyn Fn(&EvThread) -> Option<usize> + Send + Sync;

/// How a sequence was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecKind {
    TopExt,
    Closure,
    Diagonal,
    Intersect,
    Join,
    Exists,
    Permute,
    Custom,
}

/// A decreasing sequence `S_0, S_1, ..` with `S_{i+1} ⊆ S_i × A`,
/// standing for the ω-relation `Lim S = ⋂ S_i^⊤`.
///
/// Cuts are produced on demand, cached, and checked against their
/// neighbours before being handed out.
#[derive(Clone)]
pub struct DecSeq {
    inner: Arc<Inner>,
}

struct Inner {
    domain: FiniteDomain,
    kind: DecKind,
    label: String,
    producer: Box<Producer>,
    cache: Mutex<BTreeMap<usize, FinRel>>,
    stabilization: Option<usize>,
    exact: Option<Box<Exact>>,
}

impl fmt::Debug for DecSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecSeq")
            .field("label", &self.inner.label)
            .field("stabilization", &self.inner.stabilization)
            .finish()
    }
}

/// Outcome of a limit-membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    CertifiedIn,
    /// `s|i ∉ S_i` at the given cut index.
    CertifiedOut(usize),
    /// Every cut up to the given depth contains the thread.
    InUpToDepth(usize),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedIn => write!(f, "certified_in"),
            Verdict::CertifiedOut(i) => write!(f, "certified_out({i})"),
            Verdict::InUpToDepth(d) => write!(f, "in_up_to_depth({d})"),
        }
    }
}

impl DecSeq {
    fn build(
        domain: FiniteDomain,
        kind: DecKind,
        label: String,
        producer: Box<Producer>,
        stabilization: Option<usize>,
        exact: Option<Box<Exact>>,
    ) -> Self {
        Self {
            inner: Arc::new(Inner {
                domain,
                kind,
                label,
                producer,
                cache: Mutex::new(BTreeMap::new()),
                stabilization,
                exact,
            }),
        }
    }

    /// A sequence from an arbitrary producer, validated as cuts are requested.
    pub fn custom(
        domain: FiniteDomain,
        label: impl Into<String>,
        producer: impl Fn(usize) -> Result<FinRel> + Send + Sync + 'static,
    ) -> Self {
        Self::build(domain, DecKind::Custom, label.into(), Box::new(producer), None, None)
    }

    pub fn domain(&self) -> FiniteDomain {
        self.inner.domain
    }

    pub fn kind(&self) -> &DecKind {
        &self.inner.kind
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    /// `k` such that `S_i = S_k × A^(i-k)` for every `i >= k`.
    pub fn stabilization(&self) -> Option<usize> {
        self.inner.stabilization
    }

    fn raw(&self, k: usize) -> Result<FinRel> {
        if let Some(r) = self.inner.cache.lock().expect("cache lock").get(&k) {
            return Ok(r.clone());
        }
        let r = (self.inner.producer)(k)?;
        self.inner.domain.same_as(r.domain())?;
        if r.arity() != k {
            return Err(Error::ArityMismatch { expected: k, found: r.arity() });
        }
        self.inner.cache.lock().expect("cache lock").insert(k, r.clone());
        Ok(r)
    }

    /// `S_k`, checked against `S_{k-1}` and `S_{k+1}`.
    pub fn cut(&self, k: usize) -> Result<FinRel> {
        let here = self.raw(k)?;
        if k > 0 && !here.project_prefix(k - 1)?.is_subset(&self.raw(k - 1)?) {
            return Err(Error::DecreasingViolation { index: k });
        }
        if !self.raw(k + 1)?.project_prefix(k)?.is_subset(&here) {
            return Err(Error::DecreasingViolation { index: k + 1 });
        }
        Ok(here)
    }

    /// Membership of `s` in `Lim S`.
    pub fn lim_membership(&self, s: &EvThread, depth: usize) -> Result<Verdict> {
        s.check_domain(self.domain())?;
        let mut checked = 0;
        let fails_at = |i: usize| -> Result<bool> { Ok(!self.cut(i)?.contains(&s.first(i))) };
        for i in 0..=depth {
            if fails_at(i)? {
                return Ok(Verdict::CertifiedOut(i));
            }
            checked = i;
        }
        if let Some(b) = self.inner.stabilization {
            for i in checked + 1..=b {
                if fails_at(i)? {
                    return Ok(Verdict::CertifiedOut(i));
                }
            }
            return Ok(Verdict::CertifiedIn);
        }
        if let Some(exact) = &self.inner.exact {
            return Ok(match exact(s) {
                None => Verdict::CertifiedIn,
                Some(i) => {
                    debug_assert!(fails_at(i)?, "exact witness {i} must be a failing cut");
                    Verdict::CertifiedOut(i)
                }
            });
        }
        Ok(Verdict::InUpToDepth(depth))
    }
}

/// `S^⊤` as the sequence of its cuts.
pub fn from_finitary(s: &FinRel) -> DecSeq {
    let rel = s.clone();
    DecSeq::build(
        s.domain(),
        DecKind::TopExt,
        format!("top({s})"),
        Box::new(move |k| rel.top_cut(k)),
        Some(s.arity()),
        None,
    )
}

/// `R̄` as the sequence of cuts `R[i]`.
pub fn local_closure(domain: FiniteDomain, r: &EvSet) -> Result<DecSeq> {
    r.check_domain(domain)?;
    let exact: Option<Box<Exact>> = match r {
        EvSet::Explicit(ts) => {
            let ts = ts.clone();
            Some(Box::new(move |s: &EvThread| EvSet::explicit_witness(&ts, s)))
        }
        EvSet::Patterns(_) => None,
    };
    let set = r.clone();
    Ok(DecSeq::build(
        domain,
        DecKind::Closure,
        format!("closure({r})"),
        Box::new(move |k| set.cut(domain, k)),
        None,
        exact,
    ))
}

/// `Δ_A`: the constant threads.
pub fn diagonal(domain: FiniteDomain) -> DecSeq {
    DecSeq::build(
        domain,
        DecKind::Diagonal,
        "diagonal".into(),
        Box::new(move |k| FinRel::diagonal(domain, k)),
        None,
        Some(Box::new(|s: &EvThread| {
            let n = s.prefix_len() + 1;
            (1..n).find(|&i| s.at(i) != s.at(0)).map(|i| i + 1)
        })),
    )
}

/// `S_i` for a plain index.
pub fn cut(r: &DecSeq, i: usize) -> Result<FinRel> {
    r.cut(i)
}

pub fn lim_membership(s: &EvThread, r: &DecSeq, depth: usize) -> Result<Verdict> {
    r.lim_membership(s, depth)
}

fn both<T: Copy>(a: Option<T>, b: Option<T>) -> Option<(T, T)> {
    a.zip(b)
}

/// `Lim R ∩ Lim T`.
///
/// When both inputs stabilise, cut `i` is the projection of the
/// intersection at the common stabilisation index, which is the exact
/// `i`-cut of the intersection; otherwise it is `R_i ∩ T_i`.
pub fn dec_intersect(r: &DecSeq, t: &DecSeq) -> Result<DecSeq> {
    r.domain().same_as(t.domain())?;
    let bound = both(r.stabilization(), t.stabilization()).map(|(a, b)| a.max(b));
    let exact: Option<Box<Exact>> = if r.inner.exact.is_some() && t.inner.exact.is_some() {
        let (r2, t2) = (r.clone(), t.clone());
        Some(Box::new(move |s: &EvThread| {
            let e = |x: &DecSeq| (x.inner.exact.as_ref().expect("checked above"))(s);
            e(&r2).or_else(|| e(&t2))
        }))
    } else {
        None
    };
    let (r2, t2) = (r.clone(), t.clone());
    Ok(DecSeq::build(
        r.domain(),
        DecKind::Intersect,
        format!("({} ∧ {})", r.label(), t.label()),
        Box::new(move |i| match bound {
            Some(b) => {
                let j = i.max(b);
                r2.cut(j)?.intersect(&t2.cut(j)?)?.project_prefix(i)
            }
            None => r2.cut(i)?.intersect(&t2.cut(i)?),
        }),
        bound,
        exact,
    ))
}

/// `Lim R ∪ Lim T`.
pub fn dec_join(r: &DecSeq, t: &DecSeq) -> Result<DecSeq> {
    r.domain().same_as(t.domain())?;
    let bound = both(r.stabilization(), t.stabilization()).map(|(a, b)| a.max(b));
    let exact: Option<Box<Exact>> = if r.inner.exact.is_some() && t.inner.exact.is_some() {
        let (r2, t2) = (r.clone(), t.clone());
        Some(Box::new(move |s: &EvThread| {
            let e = |x: &DecSeq| (x.inner.exact.as_ref().expect("checked above"))(s);
            Some(e(&r2)?.max(e(&t2)?))
        }))
    } else {
        None
    };
    let (r2, t2) = (r.clone(), t.clone());
    Ok(DecSeq::build(
        r.domain(),
        DecKind::Join,
        format!("({} ∨ {})", r.label(), t.label()),
        Box::new(move |i| r2.cut(i)?.union(&t2.cut(i)?)),
        bound,
        exact,
    ))
}

/// `∃_Γ R`, where `Γ` is co-finite and given by its complement `kept`:
/// cut `n` keeps the coordinates in `kept ∩ n` and frees the rest.
pub fn dec_exists(r: &DecSeq, kept: &BTreeSet<usize>) -> DecSeq {
    let domain = r.domain();
    let bound = r.stabilization().map(|b| b.max(kept.iter().next_back().map_or(0, |&m| m + 1)));
    let (r2, kept2) = (r.clone(), kept.clone());
    DecSeq::build(
        domain,
        DecKind::Exists,
        format!("∃[keep {:?}]({})", kept.iter().collect::<Vec<_>>(), r.label()),
        Box::new(move |n| {
            let positions: Vec<usize> = kept2.range(..n).copied().collect();
            let keys: HashSet<Vec<Elem>> = r2
                .cut(n)?
                .tuples()
                .map(|t| positions.iter().map(|&i| t[i]).collect())
                .collect();
            FinRel::from_tuples(
                domain,
                n,
                domain
                    .tuples(n)
                    .filter(|t| keys.contains(&positions.iter().map(|&i| t[i]).collect::<Vec<_>>())),
            )
        }),
        bound,
        None,
    )
}

/// A permutation of `ω` fixing every index from `len()` on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePermutation {
    images: Vec<usize>,
}

impl FinitePermutation {
    /// `images[i] = σ(i)`; must permute `0..images.len()`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::NotFiniteSupport { len: images.len() });
        }
        Ok(Self { images })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images.get(i).copied().unwrap_or(i)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    /// `σ(s)_i = s_{σ(i)}`.
    pub fn act(&self, s: &EvThread) -> EvThread {
        let n = s.prefix_len().max(self.images.len());
        EvThread::new((0..n).map(|i| s.at(self.apply(i))).collect(), s.tail())
    }
}

/// `R(σ) = {r : σ(r) ∈ R}`.
///
/// With `τ = σ⁻¹` and `f(k) = 1 + max τ(0..k)`, cut `k` is
/// `{(s_{τ(0)}, .., s_{τ(k-1)}) : s ∈ S_{f(k)}}`.
pub fn dec_permute(r: &DecSeq, sigma: &FinitePermutation) -> DecSeq {
    let tau = sigma.inverse();
    let bound = r.stabilization().map(|b| b.max(sigma.len()));
    let exact: Option<Box<Exact>> = r.inner.exact.as_ref().map(|_| {
        let (r2, sigma2) = (r.clone(), sigma.clone());
        Box::new(move |s: &EvThread| {
            let e = r2.inner.exact.as_ref().expect("checked above");
            e(&sigma2.act(s)).map(|i| i.max(sigma2.len()))
        }) as Box<Exact>
    });
    let r2 = r.clone();
    DecSeq::build(
        r.domain(),
        DecKind::Permute,
        format!("permute({})", r.label()),
        Box::new(move |k| {
            let map: Vec<usize> = (0..k).map(|i| tau.apply(i)).collect();
            let f = map.iter().max().map_or(0, |&m| m + 1);
            r2.cut(f)?.reindex(&map)
        }),
        bound,
        exact,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> FiniteDomain {
        FiniteDomain::new(2).unwrap()
    }

    fn t(s: &str) -> EvThread {
        s.parse().unwrap()
    }

    fn rel(arity: usize, tuples: &[&[Elem]]) -> FinRel {
        FinRel::from_tuples(d2(), arity, tuples.iter().copied()).unwrap()
    }

    #[test]
    fn finitary_top_extension_membership() {
        let r = from_finitary(&rel(1, &[&[0]]));
        assert_eq!(r.lim_membership(&t("0 1 1 | 0"), 4).unwrap(), Verdict::CertifiedIn);
        assert_eq!(r.lim_membership(&EvThread::constant(1), 4).unwrap(), Verdict::CertifiedOut(1));
        assert_eq!(r.cut(0).unwrap(), FinRel::full(d2(), 0).unwrap());
        assert_eq!(r.cut(3).unwrap().len(), 4);
    }

    #[test]
    fn diagonal_membership() {
        let r = diagonal(d2());
        assert_eq!(r.lim_membership(&EvThread::constant(1), 0).unwrap(), Verdict::CertifiedIn);
        assert_eq!(r.lim_membership(&t("0 1 | 1"), 0).unwrap(), Verdict::CertifiedOut(2));
        assert_eq!(r.lim_membership(&t("0 1 | 1"), 5).unwrap(), Verdict::CertifiedOut(2));
    }

    #[test]
    fn pattern_closure_stays_open() {
        let r = local_closure(d2(), &"0* | 1".parse().unwrap()).unwrap();
        for depth in [2, 5, 8] {
            assert_eq!(r.lim_membership(&EvThread::constant(0), depth).unwrap(), Verdict::InUpToDepth(depth));
        }
        assert_eq!(r.lim_membership(&t("1 0 | 0"), 3).unwrap(), Verdict::CertifiedOut(2));
    }

    #[test]
    fn explicit_closure_is_exact() {
        let e: EvSet = "{ 0 1 | 1 ; | 0 }".parse().unwrap();
        let r = local_closure(d2(), &e).unwrap();
        assert_eq!(r.lim_membership(&t("0 1 | 1"), 0).unwrap(), Verdict::CertifiedIn);
        assert!(matches!(r.lim_membership(&t("0 1 0 | 1"), 0).unwrap(), Verdict::CertifiedOut(_)));
    }

    #[test]
    fn intersect_with_self() {
        let r = from_finitary(&rel(2, &[&[0, 1], &[1, 1]]));
        let rr = dec_intersect(&r, &r).unwrap();
        for k in 0..5 {
            assert_eq!(rr.cut(k).unwrap(), r.cut(k).unwrap());
        }
    }

    #[test]
    fn intersect_cuts_are_exact_for_stabilised_inputs() {
        let d3 = FiniteDomain::new(3).unwrap();
        let a = from_finitary(&FinRel::from_tuples(d3, 2, [[0, 1]]).unwrap());
        let b = from_finitary(&FinRel::from_tuples(d3, 2, [[0, 2]]).unwrap());
        let ab = dec_intersect(&a, &b).unwrap();
        assert!(ab.cut(1).unwrap().is_empty());
    }

    #[test]
    fn exists_frees_all_but_kept() {
        let r = from_finitary(&rel(2, &[&[0, 1]]));
        let e = dec_exists(&r, &BTreeSet::from([1]));
        assert_eq!(e.cut(2).unwrap(), rel(2, &[&[0, 1], &[1, 1]]));
        let all = dec_exists(&r, &BTreeSet::new());
        assert_eq!(all.cut(3).unwrap().len(), 8);
    }

    #[test]
    fn permute_transposition() {
        let r = from_finitary(&rel(2, &[&[0, 1]]));
        let sigma = FinitePermutation::new(vec![1, 0]).unwrap();
        let p = dec_permute(&r, &sigma);
        assert_eq!(p.cut(2).unwrap(), rel(2, &[&[1, 0]]));
        assert_eq!(p.cut(1).unwrap(), rel(1, &[&[1]]));
        assert_eq!(p.lim_membership(&t("1 0 | 0"), 0).unwrap(), Verdict::CertifiedIn);
    }

    #[test]
    fn permutation_must_have_finite_support() {
        assert_eq!(FinitePermutation::new(vec![1, 2]), Err(Error::NotFiniteSupport { len: 2 }));
    }

    #[test]
    fn join_membership() {
        let a = from_finitary(&rel(1, &[&[0]]));
        let b = from_finitary(&rel(1, &[&[1]]));
        let j = dec_join(&a, &b).unwrap();
        assert_eq!(j.lim_membership(&t("1 | 0"), 3).unwrap(), Verdict::CertifiedIn);
    }

    #[test]
    fn bad_producer_is_rejected() {
        let bad = DecSeq::custom(d2(), "growing", |k| {
            if k < 2 {
                FinRel::empty(FiniteDomain::new(2).unwrap(), k)
            } else {
                FinRel::full(FiniteDomain::new(2).unwrap(), k)
            }
        });
        assert_eq!(bad.cut(1), Err(Error::DecreasingViolation { index: 2 }));
        assert_eq!(bad.cut(2), Err(Error::DecreasingViolation { index: 2 }));
    }
}
