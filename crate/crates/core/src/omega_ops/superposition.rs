use std::collections::HashSet;

use rayon::prelude::*;

use super::rop::{OpSeq, ROp};
use crate::bitset::BitSet;
use crate::domain::{Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::finite::{ByArity, FinOp};
use crate::threads::EvThread;

fn same_domain(phi: &ROp, rest: &[&ROp]) -> Result<()> {
    rest.iter().try_for_each(|r| phi.domain().same_as(r.domain()))
}

/// `q_n(φ, ψ_0, .., ψ_{n-1})(s) = φ(s[ψ_0(s), .., ψ_{n-1}(s)])`, with `n = ψs.len()`.
pub fn q_n(phi: &ROp, psis: &[ROp]) -> Result<ROp> {
    same_domain(phi, &psis.iter().collect::<Vec<_>>())?;
    let domain = phi.domain();
    let n = psis.len();
    let width = psis.iter().map(ROp::width).fold(phi.width().max(n), usize::max);
    let mut s = vec![0; width];
    let head = domain
        .tuples(width + 1)
        .map(|t| {
            let (x, c) = (&t[..width], t[width]);
            s.copy_from_slice(x);
            for (slot, psi) in s.iter_mut().zip(psis) {
                *slot = psi.head_at(x, c);
            }
            phi.head_at(&s, c)
        })
        .collect();
    Ok(ROp::from_head_unchecked(domain, width, head))
}

/// `q(φ, ψ_0, ψ_1, ..)(s) = φ(ψ_0(s), ψ_1(s), ..)` for an eventually-constant sequence.
pub fn q_inf(phi: &ROp, seq: &OpSeq) -> Result<ROp> {
    let mut all: Vec<&ROp> = seq.prefix.iter().collect();
    all.push(&seq.tail_op);
    same_domain(phi, &all)?;
    let domain = phi.domain();
    let width = all.iter().map(|r| r.width()).max().unwrap_or(0);
    let mut u = vec![0; phi.width()];
    let head = domain
        .tuples(width + 1)
        .map(|t| {
            let (x, c) = (&t[..width], t[width]);
            let tail = seq.tail_op.head_at(x, c);
            for (j, slot) in u.iter_mut().enumerate() {
                *slot = seq.prefix.get(j).map_or(tail, |psi| psi.head_at(x, c));
            }
            phi.head_at(&u, tail)
        })
        .collect();
    Ok(ROp::from_head_unchecked(domain, width, head))
}

/// The ω-clone generated by `generators` and the projections
/// `e_0, .., e_{cap-1}`, closed under every `q_n` with `n <= cap` whose
/// result stays within width `cap`. Returned canonical and sorted.
///
/// Saturates under `q_cap` alone, which subsumes the smaller `q_n` once the
/// projections are present.
pub fn generate_omega_clone(domain: FiniteDomain, generators: &[ROp], cap: usize) -> Result<Vec<ROp>> {
    for g in generators {
        domain.same_as(g.domain())?;
        if g.canonical().width() > cap {
            return Err(Error::ArityMismatch { expected: cap, found: g.canonical().width() });
        }
    }
    let cells = domain
        .power(cap + 1)
        .filter(|&c| c <= 1 << 16)
        .ok_or_else(|| Error::Invalid(format!("width cap {cap} too large")))?;
    let space = u32::try_from(cells).ok().and_then(|c| (domain.size() as u128).checked_pow(c));
    let dense = space.filter(|&s| s <= 1 << 26).map(|s| BitSet::new(s as usize));
    let mut seen = Seen { domain, dense, sparse: HashSet::new() };
    let mut elems: Vec<Vec<Elem>> = Vec::new();
    let seeds = (0..cap)
        .map(|n| ROp::proj(domain, n))
        .chain(generators.iter().cloned().map(Ok))
        .collect::<Result<Vec<_>>>()?;
    for r in seeds {
        let head = r.canonical().pad(cap).head().to_vec();
        if seen.insert(&head) {
            elems.push(head);
        }
    }
    let arity = cap + 1;
    let mut start = 0;
    while start < elems.len() && space != Some(elems.len() as u128) {
        let end = elems.len();
        let mut fresh: Vec<Vec<Elem>> = (0..arity)
            .flat_map(|p| (start..end).map(move |f| (p, f)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .flat_map_iter(|(p, f)| {
                let bounds: Vec<usize> = (0..arity)
                    .map(|q| if q < p { start } else if q == p { 1 } else { end })
                    .collect();
                let mut out = Vec::new();
                if bounds.contains(&0) {
                    return out;
                }
                let mut idx = vec![0usize; arity];
                let mut local = HashSet::new();
                loop {
                    let pick = |q: usize| if q == p { &elems[f] } else { &elems[idx[q]] };
                    let phi = ROp::from_head_unchecked(domain, cap, pick(0).clone());
                    let psis: Vec<ROp> =
                        (1..arity).map(|q| ROp::from_head_unchecked(domain, cap, pick(q).clone())).collect();
                    let h = q_n(&phi, &psis).expect("same domain").head().to_vec();
                    if !seen.contains(&h) && local.insert(h.clone()) {
                        out.push(h);
                    }
                    if !step(&mut idx, &bounds) {
                        break;
                    }
                }
                out
            })
            .collect();
        fresh.sort();
        fresh.dedup();
        for h in fresh {
            if seen.insert(&h) {
                elems.push(h);
            }
        }
        start = end;
    }
    let mut out: Vec<ROp> = elems
        .into_iter()
        .map(|h| ROp::from_head_unchecked(domain, cap, h).canonical())
        .collect();
    out.sort();
    Ok(out)
}

struct Seen {
    domain: FiniteDomain,
    dense: Option<BitSet>,
    sparse: HashSet<Vec<Elem>>,
}

impl Seen {
    fn contains(&self, h: &[Elem]) -> bool {
        match &self.dense {
            Some(b) => b.contains(self.domain.rank(h)),
            None => self.sparse.contains(h),
        }
    }

    fn insert(&mut self, h: &[Elem]) -> bool {
        match &mut self.dense {
            Some(b) => b.insert(self.domain.rank(h)),
            None => self.sparse.insert(h.to_vec()),
        }
    }
}

fn step(idx: &mut [usize], bounds: &[usize]) -> bool {
    for (d, &b) in idx.iter_mut().zip(bounds).rev() {
        if *d + 1 < b {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// `C_fin`: the finitary operations of arity `<= cap` whose top extension
/// lies in `clone`.
pub fn fin_of(domain: FiniteDomain, clone: &[ROp], cap: usize) -> Result<ByArity<FinOp>> {
    let mut slices: Vec<Vec<FinOp>> = vec![Vec::new(); cap + 1];
    for psi in clone {
        domain.same_as(psi.domain())?;
        let c = psi.canonical();
        if !c.is_tail_independent() {
            continue;
        }
        for (k, slice) in slices.iter_mut().enumerate().skip(c.width()) {
            slice.push(FinOp::from_fn(domain, k, |x| c.head_at(x, 0))?);
        }
    }
    Ok(ByArity::from_slices(slices))
}

/// A finitary operation agreeing with `φ` on the finite set `threads`.
///
/// Uses the least `n` for which the threads have distinct `n`-prefixes and
/// maps every other `n`-tuple to `fallback`.
pub fn finitary_approximation(phi: &ROp, threads: &[EvThread], fallback: Elem) -> Result<FinOp> {
    let domain = phi.domain();
    domain.check(fallback)?;
    for s in threads {
        s.check_domain(domain)?;
    }
    let mut distinct: Vec<&EvThread> = threads.iter().collect();
    distinct.sort();
    distinct.dedup();
    let longest = distinct.iter().map(|s| s.prefix_len()).max().unwrap_or(0);
    let n = (0..=longest + 1)
        .find(|&n| {
            let mut cuts: Vec<Vec<Elem>> = distinct.iter().map(|s| s.first(n)).collect();
            cuts.sort();
            cuts.dedup();
            cuts.len() == distinct.len()
        })
        .expect("distinct threads differ before their longest prefix ends");
    let mut table = vec![fallback; domain.power(n).expect("n is small")];
    for s in distinct {
        table[domain.rank(&s.first(n))] = phi.eval(s);
    }
    FinOp::new(domain, n, table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> FiniteDomain {
        FiniteDomain::new(2).unwrap()
    }

    fn fin(arity: usize, t: &[Elem]) -> FinOp {
        FinOp::new(d2(), arity, t.to_vec()).unwrap()
    }

    #[test]
    fn q2_substitutes_not_into_first_projection() {
        let not = ROp::top_ext(&fin(1, &[1, 0]));
        let id = ROp::top_ext(&fin(1, &[0, 1]));
        let e0 = ROp::proj(d2(), 0).unwrap();
        assert_eq!(q_n(&e0, &[not.clone(), id]).unwrap(), not);
    }

    #[test]
    fn q_inf_projection_picks_tail_member() {
        let c0 = ROp::constant(d2(), 0).unwrap();
        let c1 = ROp::constant(d2(), 1).unwrap();
        let e0 = ROp::proj(d2(), 0).unwrap();
        let seq = OpSeq::new(vec![c0, c1], e0.clone());
        assert_eq!(q_inf(&ROp::proj(d2(), 3).unwrap(), &seq).unwrap(), e0);
    }

    #[test]
    fn q_inf_reads_tail_of_substituted_thread() {
        // tail(ψ_0(s), τ(s), τ(s), ..) = τ(s)
        let tail = ROp::tail_op(d2());
        let not = ROp::top_ext(&fin(1, &[1, 0]));
        let seq = OpSeq::new(vec![ROp::constant(d2(), 1).unwrap()], not.clone());
        assert_eq!(q_inf(&tail, &seq).unwrap(), not);
    }

    #[test]
    fn projection_clone_stays_projections() {
        let c = generate_omega_clone(d2(), &[], 3).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|r| r.as_projection().is_some()));
    }

    #[test]
    fn top_ext_and_clone() {
        let and = fin(2, &[0, 0, 0, 1]);
        let c = generate_omega_clone(d2(), &[ROp::top_ext(&and)], 2).unwrap();
        let f = fin_of(d2(), &c, 2).unwrap();
        assert_eq!(f, crate::finite::generate_clone(d2(), &[and], 2).unwrap());
    }

    #[test]
    fn tail_op_generates_tail_dependence() {
        let c = generate_omega_clone(d2(), &[ROp::tail_op(d2())], 1).unwrap();
        assert_eq!(c.len(), 2);
        assert!(fin_of(d2(), &c, 1).unwrap().counts() == vec![0, 1]);
    }

    #[test]
    fn fin_of_projections() {
        let c = vec![ROp::proj(d2(), 0).unwrap()];
        assert_eq!(fin_of(d2(), &c, 2).unwrap().counts(), vec![0, 1, 1]);
    }

    #[test]
    fn approximation_separates_constants() {
        let phi = ROp::tail_op(d2());
        let ds = vec![EvThread::constant(0), EvThread::constant(1)];
        let f = finitary_approximation(&phi, &ds, 0).unwrap();
        assert_eq!(f.arity(), 1);
        assert_eq!(f.table(), &[0, 1]);
    }

    #[test]
    fn approximation_single_thread_is_nullary() {
        let phi = ROp::constant(d2(), 1).unwrap();
        let f = finitary_approximation(&phi, &[EvThread::constant(0)], 0).unwrap();
        assert_eq!(f.arity(), 0);
        assert_eq!(f.table(), &[1]);
    }
}
