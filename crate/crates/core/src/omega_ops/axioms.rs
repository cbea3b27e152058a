use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::rop::{OpSeq, ROp};
use super::superposition::{q_inf, q_n};
use crate::domain::FiniteDomain;
use crate::error::{Error, Result};

/// The clone axioms checked by [`axiom_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomKind {
    C1,
    C2,
    C3,
    C4,
    C5,
    N1,
    /// Needs the non-eventually-constant sequence `(e_0, e_1, ..)`; checked
    /// through its finite counterpart C3.
    N2,
    N3,
}

impl AxiomKind {
    pub const ALL: [AxiomKind; 8] = [
        AxiomKind::C1,
        AxiomKind::C2,
        AxiomKind::C3,
        AxiomKind::C4,
        AxiomKind::C5,
        AxiomKind::N1,
        AxiomKind::N2,
        AxiomKind::N3,
    ];

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Invalid(format!("unknown axiom `{s}`")))
    }
}

impl fmt::Display for AxiomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Which operand tuples an axiom check covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSpec {
    /// Every operand tuple of width `<= width`, for `n <= max_n`; sequences
    /// have one explicit member, which also covers the constant ones.
    Exhaustive { width: usize, max_n: usize },
    /// Random operands of width `<= width`.
    Sampled { width: usize, max_n: usize, samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub kind: AxiomKind,
    pub checked: u64,
    pub exhaustive: bool,
    /// Which identity was actually evaluated (differs from `kind` for N2).
    pub checked_as: AxiomKind,
    pub counterexample: Option<String>,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn describe(ops: &[&ROp]) -> String {
    ops.iter().map(|r| format!("[{r}]")).collect::<Vec<_>>().join(" ")
}

fn check(lhs: Result<ROp>, rhs: Result<ROp>, operands: &[&ROp]) -> Result<Option<String>> {
    Ok((lhs? != rhs?).then(|| describe(operands)))
}

/// One axiom instance for `n` and operand list `ops` (interpreted per kind).
fn instance(domain: FiniteDomain, kind: AxiomKind, n: usize, ops: &[ROp]) -> Result<Option<String>> {
    let e = |i: usize| ROp::proj(domain, i);
    let refs: Vec<&ROp> = ops.iter().collect();
    match kind {
        // ops = ȳ
        AxiomKind::C1 => {
            for i in 0..n {
                if let Some(c) = check(q_n(&e(i)?, ops), Ok(ops[i].clone()), &refs)? {
                    return Ok(Some(format!("i={i} {c}")));
                }
            }
            Ok(None)
        }
        AxiomKind::C2 => {
            for i in n..n + 2 {
                if let Some(c) = check(q_n(&e(i)?, ops), e(i), &refs)? {
                    return Ok(Some(format!("i={i} {c}")));
                }
            }
            Ok(None)
        }
        // ops = [x]
        AxiomKind::C3 | AxiomKind::N2 => {
            let ps = (0..n).map(e).collect::<Result<Vec<_>>>()?;
            check(q_n(&ops[0], &ps), Ok(ops[0].clone()), &refs)
        }
        // ops = [x, ȳ], checked against every k in n..=n+2
        AxiomKind::C4 => {
            let (x, ys) = (&ops[0], &ops[1..]);
            for k in n..=n + 2 {
                let mut padded = ys.to_vec();
                padded.extend((n..k).map(e).collect::<Result<Vec<_>>>()?);
                if let Some(c) = check(q_n(x, ys), q_n(x, &padded), &refs)? {
                    return Ok(Some(format!("k={k} {c}")));
                }
            }
            Ok(None)
        }
        // ops = [x, ȳ, z̄]
        AxiomKind::C5 => {
            let (x, ys, zs) = (&ops[0], &ops[1..=n], &ops[n + 1..]);
            let inner = ys.iter().map(|y| q_n(y, zs)).collect::<Result<Vec<_>>>()?;
            check(q_n(&q_n(x, ys)?, zs), q_n(x, &inner), &refs)
        }
        // ops = ȳ prefix + tail; n is the projection index
        AxiomKind::N1 => {
            let seq = OpSeq::new(ops[..ops.len() - 1].to_vec(), ops[ops.len() - 1].clone());
            check(q_inf(&e(n)?, &seq), Ok(seq.member(n).clone()), &refs)
        }
        // ops = [x, ȳ (m + 1), z̄ (m + 1)] with m = n
        AxiomKind::N3 => {
            let x = &ops[0];
            let ys = OpSeq::new(ops[1..=n].to_vec(), ops[n + 1].clone());
            let zs = OpSeq::new(ops[n + 2..2 * n + 2].to_vec(), ops[2 * n + 2].clone());
            let inner = ys.map(|y| q_inf(y, &zs))?;
            check(q_inf(&q_inf(x, &ys)?, &zs), q_inf(x, &inner), &refs)
        }
    }
}

/// Number of operands an instance of `kind` at `n` consumes.
fn operand_count(kind: AxiomKind, n: usize) -> usize {
    match kind {
        AxiomKind::C1 | AxiomKind::C2 => n,
        AxiomKind::C3 | AxiomKind::N2 => 1,
        AxiomKind::C4 => 1 + n,
        AxiomKind::C5 => 1 + 2 * n,
        AxiomKind::N1 => 2,
        AxiomKind::N3 => 2 * n + 3,
    }
}

/// Checks one axiom over the operand tuples described by `spec`.
pub fn axiom_suite(domain: FiniteDomain, kind: AxiomKind, spec: SampleSpec) -> Result<AxiomReport> {
    let checked_as = if kind == AxiomKind::N2 { AxiomKind::C3 } else { kind };
    let mut report = AxiomReport { kind, checked: 0, exhaustive: false, checked_as, counterexample: None };
    match spec {
        SampleSpec::Exhaustive { width, max_n } => {
            report.exhaustive = true;
            let pool: Vec<ROp> = ROp::all(domain, width).collect();
            let ns: Vec<usize> = match kind {
                AxiomKind::N3 => vec![1],
                AxiomKind::N1 => (0..=max_n + 1).collect(),
                _ => (0..=max_n).collect(),
            };
            for n in ns {
                let count = operand_count(kind, if kind == AxiomKind::N1 { 0 } else { n });
                let total = (pool.len() as u64).checked_pow(count as u32).unwrap_or(u64::MAX);
                if total > 1 << 24 {
                    return Err(Error::Invalid(format!(
                        "{kind} at n={n} needs {total} exhaustive instances"
                    )));
                }
                let found = (0..total)
                    .into_par_iter()
                    .map(|mut r| {
                        let ops: Vec<ROp> = (0..count)
                            .map(|_| {
                                let op = pool[(r % pool.len() as u64) as usize].clone();
                                r /= pool.len() as u64;
                                op
                            })
                            .collect();
                        instance(domain, kind, n, &ops)
                    })
                    .find_first(|res| !matches!(res, Ok(None)));
                report.checked += total;
                match found {
                    Some(Err(e)) => return Err(e),
                    Some(Ok(c)) => {
                        report.counterexample = c.map(|c| format!("n={n} {c}"));
                        return Ok(report);
                    }
                    None => {}
                }
            }
        }
        SampleSpec::Sampled { width, max_n, samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let n = rng.gen_range(0..=max_n);
                let count = match kind {
                    AxiomKind::N1 => n + 1 + rng.gen_range(0..2),
                    _ => operand_count(kind, n),
                };
                let ops: Vec<ROp> = (0..count)
                    .map(|_| {
                        let w = rng.gen_range(0..=width);
                        ROp::random(domain, w, &mut rng)
                    })
                    .collect();
                report.checked += 1;
                if let Some(c) = instance(domain, kind, n, &ops)? {
                    report.counterexample = Some(format!("n={n} {c}"));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2() -> FiniteDomain {
        FiniteDomain::new(2).unwrap()
    }

    #[test]
    fn small_exhaustive_runs() {
        for kind in [AxiomKind::C1, AxiomKind::C2, AxiomKind::C3, AxiomKind::C4] {
            let r = axiom_suite(d2(), kind, SampleSpec::Exhaustive { width: 1, max_n: 2 }).unwrap();
            assert!(r.holds(), "{kind}: {:?}", r.counterexample);
        }
    }

    #[test]
    fn n2_reports_c3_surrogate() {
        let r = axiom_suite(d2(), AxiomKind::N2, SampleSpec::Exhaustive { width: 1, max_n: 2 }).unwrap();
        assert_eq!(r.checked_as, AxiomKind::C3);
        assert!(r.holds());
    }

    #[test]
    fn sampled_n1_n3() {
        let spec = SampleSpec::Sampled { width: 1, max_n: 2, samples: 200, seed: 7 };
        for kind in [AxiomKind::N1, AxiomKind::N3] {
            let r = axiom_suite(d2(), kind, spec).unwrap();
            assert!(r.holds(), "{kind}: {:?}", r.counterexample);
            assert_eq!(r.checked, 200);
        }
    }

    #[test]
    fn parse_kind() {
        assert_eq!(AxiomKind::parse("c5").unwrap(), AxiomKind::C5);
        assert!(AxiomKind::parse("C9").is_err());
    }
}
