//! Brute-force oracles shared by the integration tests. They work from the
//! set-theoretic definitions over explicitly enumerated threads and tuples
//! and use the library only for its value types.
#![allow(dead_code)]

use std::collections::BTreeSet;

use omegaclone::finite::FinRel;
use omegaclone::omega_rel::{
    dec_exists, dec_intersect, dec_join, dec_permute, from_finitary, local_closure, DecSeq, EvSet, FinitePermutation,
    Verdict,
};
use omegaclone::threads::EvThread;
use omegaclone::{Elem, FiniteDomain};

pub fn dom(n: usize) -> FiniteDomain {
    FiniteDomain::new(n).unwrap()
}

pub fn leq() -> FinRel {
    FinRel::from_tuples(dom(2), 2, [[0, 0], [0, 1], [1, 1]]).unwrap()
}

/// Every tuple over `0..size` of length `n`, leftmost coordinate slowest.
pub fn all_tuples(size: usize, n: usize) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size as Elem).map(move |a| {
                    let mut u = t.clone();
                    u.push(a);
                    u
                })
            })
            .collect();
    }
    out
}

/// All eventually-constant threads whose value is constant from
/// position `len` on, deduplicated as values.
pub fn thread_universe(size: usize, len: usize) -> Vec<EvThread> {
    let mut seen = BTreeSet::new();
    for n in 0..=len {
        for p in all_tuples(size, n) {
            for c in 0..size as Elem {
                seen.insert(EvThread::new(p.clone(), c));
            }
        }
    }
    seen.into_iter().collect()
}

/// The first `k` values of a thread, read pointwise.
pub fn first(s: &EvThread, k: usize) -> Vec<Elem> {
    (0..k).map(|i| s.at(i)).collect()
}

/// `{s|k : s ∈ universe, member(s)}`.
pub fn cut_of(universe: &[EvThread], k: usize, member: impl Fn(&EvThread) -> bool) -> BTreeSet<Vec<Elem>> {
    universe.iter().filter(|s| member(s)).map(|s| first(s, k)).collect()
}

pub fn tuples_of(r: &FinRel) -> BTreeSet<Vec<Elem>> {
    r.tuples().collect()
}

/// `s ∈ S^⊤`.
pub fn in_top(s: &FinRel, t: &EvThread) -> bool {
    s.contains(&first(t, s.arity()))
}

/// `u ∈ ∃_Γ R` with `Γ` the complement of `kept`: some member agrees with
/// `u` on the kept coordinates.
pub fn in_exists(universe: &[EvThread], kept: &[usize], u: &EvThread, member: impl Fn(&EvThread) -> bool) -> bool {
    universe.iter().any(|r| member(r) && kept.iter().all(|&i| r.at(i) == u.at(i)))
}

/// `t ∈ R(σ)` iff `(t_{σ(0)}, t_{σ(1)}, ..) ∈ R`, with `σ` fixing indices past `images`.
pub fn in_permuted(images: &[usize], t: &EvThread, member: impl Fn(&EvThread) -> bool) -> bool {
    let n = images.len().max(t.prefix_len());
    let moved: Vec<Elem> = (0..n).map(|i| t.at(images.get(i).copied().unwrap_or(i))).collect();
    member(&EvThread::new(moved, t.tail()))
}

/// `f ∈ Pol S` straight from the definition: every choice of `k` rows of
/// `S` is mapped into `S`.
pub fn preserves(size: usize, arity: usize, table: &[Elem], s: &FinRel) -> bool {
    let rows: Vec<Vec<Elem>> = s.tuples().collect();
    let mut choice = vec![0usize; arity];
    if arity > 0 && rows.is_empty() {
        return true;
    }
    loop {
        let image: Vec<Elem> = (0..s.arity())
            .map(|i| {
                let r = choice.iter().fold(0usize, |acc, &j| acc * size + rows[j][i] as usize);
                table[r]
            })
            .collect();
        if !s.contains(&image) {
            return false;
        }
        let mut pos = arity;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < rows.len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Every relation of arity `n` over `0..size`.
pub fn all_relations(size: usize, n: usize) -> Vec<FinRel> {
    let tuples = all_tuples(size, n);
    (0u64..1 << tuples.len())
        .map(|mask| {
            FinRel::from_tuples(
                dom(size),
                n,
                tuples.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone()),
            )
            .unwrap()
        })
        .collect()
}

/// An input ω-relation together with its direct membership test.
#[derive(Debug, Clone)]
pub enum Input {
    Top(FinRel),
    Explicit(Vec<EvThread>),
}

impl Input {
    pub fn member(&self, s: &EvThread) -> bool {
        match self {
            Input::Top(r) => in_top(r, s),
            Input::Explicit(ts) => ts.iter().any(|t| (0..=t.prefix_len().max(s.prefix_len())).all(|i| t.at(i) == s.at(i))),
        }
    }

    pub fn seq(&self) -> DecSeq {
        match self {
            Input::Top(r) => from_finitary(r),
            Input::Explicit(ts) => local_closure(dom(2), &EvSet::explicit(ts.clone())).unwrap(),
        }
    }

    fn stabilizes(&self) -> bool {
        matches!(self, Input::Top(_))
    }
}

/// Compares the four sequence constructions on `(r, t)` with the
/// set-theoretic definitions, over threads constant from `depth` on and
/// cuts `0..=depth`. Returns the number of comparisons, or the first mismatch.
pub fn decseq_constructions_agree(
    r: &Input,
    t: &Input,
    kept: &[usize],
    images: &[usize],
    depth: usize,
) -> Result<usize, String> {
    let universe = thread_universe(2, depth);
    let (rs, ts) = (r.seq(), t.seq());
    let kept_set: BTreeSet<usize> = kept.iter().copied().collect();
    let sigma = FinitePermutation::new(images.to_vec()).unwrap();
    let mut checked = 0;

    type Member<'a> = Box<dyn Fn(&EvThread) -> bool + 'a>;
    let cases: Vec<(&str, DecSeq, Member<'_>, Box<dyn Fn(usize) -> BTreeSet<Vec<Elem>> + '_>)> = vec![
        (
            "intersect",
            dec_intersect(&rs, &ts).unwrap(),
            Box::new(|s: &EvThread| r.member(s) && t.member(s)),
            Box::new(|k| {
                if r.stabilizes() && t.stabilizes() {
                    cut_of(&universe, k, |s| r.member(s) && t.member(s))
                } else {
                    let a = cut_of(&universe, k, |s| r.member(s));
                    let b = cut_of(&universe, k, |s| t.member(s));
                    a.intersection(&b).cloned().collect()
                }
            }),
        ),
        (
            "join",
            dec_join(&rs, &ts).unwrap(),
            Box::new(|s: &EvThread| r.member(s) || t.member(s)),
            Box::new(|k| cut_of(&universe, k, |s| r.member(s) || t.member(s))),
        ),
        (
            "exists",
            dec_exists(&rs, &kept_set),
            Box::new(|s: &EvThread| in_exists(&universe, kept, s, |x| r.member(x))),
            Box::new(|k| cut_of(&universe, k, |s| in_exists(&universe, kept, s, |x| r.member(x)))),
        ),
        (
            "permute",
            dec_permute(&rs, &sigma),
            Box::new(|s: &EvThread| in_permuted(images, s, |x| r.member(x))),
            Box::new(|k| cut_of(&universe, k, |s| in_permuted(images, s, |x| r.member(x)))),
        ),
    ];
    for (name, seq, member, expected_cut) in &cases {
        for k in 0..=depth {
            let got = tuples_of(&seq.cut(k).map_err(|e| format!("{name}: cut {k}: {e}"))?);
            let want = expected_cut(k);
            if got != want {
                return Err(format!("{name}: cut {k} is {got:?}, expected {want:?} (r={r:?}, t={t:?}, kept={kept:?}, sigma={images:?})"));
            }
            checked += 1;
        }
        for s in &universe {
            let verdict = seq.lim_membership(s, depth + 2).map_err(|e| e.to_string())?;
            let out = matches!(verdict, Verdict::CertifiedOut(_));
            if member(s) == out {
                return Err(format!("{name}: {s} got {verdict}, member={} (r={r:?}, t={t:?}, kept={kept:?}, sigma={images:?})", member(s)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
