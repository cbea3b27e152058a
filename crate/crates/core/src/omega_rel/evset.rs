use std::fmt;
use std::str::FromStr;

use crate::domain::{digit, parse_digit, Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::finite::FinRel;
use crate::threads::EvThread;

/// The threads `head · block^n · rest · tail^ω` for `n >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern {
    pub head: Vec<Elem>,
    pub block: Vec<Elem>,
    pub rest: Vec<Elem>,
    pub tail: Elem,
}

impl Pattern {
    pub fn member(&self, n: usize) -> EvThread {
        let mut p = self.head.clone();
        for _ in 0..n {
            p.extend_from_slice(&self.block);
        }
        p.extend_from_slice(&self.rest);
        EvThread::new(p, self.tail)
    }

    /// Repetition counts whose members are all distinct and cover the
    /// family as far as the first `len` coordinates can tell.
    fn repetitions(&self, len: usize) -> usize {
        if self.block.is_empty() {
            0
        } else {
            len + 1
        }
    }

    pub fn contains(&self, s: &EvThread) -> bool {
        (0..=self.repetitions(s.prefix_len())).any(|n| &self.member(n) == s)
    }

    fn check_domain(&self, domain: FiniteDomain) -> Result<()> {
        domain.check_all(&self.head)?;
        domain.check_all(&self.block)?;
        domain.check_all(&self.rest)?;
        domain.check(self.tail).map(drop)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.head.iter().map(|&a| digit(a).to_string()).collect();
        match self.block.as_slice() {
            [] => {}
            [a] => parts.push(format!("{}*", digit(*a))),
            b => parts.push(format!("({})*", b.iter().map(|&a| digit(a).to_string()).collect::<Vec<_>>().join(" "))),
        }
        parts.extend(self.rest.iter().map(|&a| digit(a).to_string()));
        parts.push(format!("| {}", digit(self.tail)));
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// `"0 (1 0)* 1 | 1"`, `"0* | 1"`: at most one starred block.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Invalid(format!("pattern `{s}`: {msg}"));
        let (body, tail) = s.split_once('|').ok_or_else(|| bad("missing `|`"))?;
        let tail = match tail.trim().chars().collect::<Vec<_>>().as_slice() {
            [c] => parse_digit(*c).ok_or_else(|| bad("bad tail"))?,
            _ => return Err(bad("needs one tail value")),
        };
        let chars: Vec<char> = body.chars().filter(|c| !c.is_whitespace()).collect();
        let (mut head, mut block, mut rest) = (Vec::new(), None, Vec::new());
        let mut i = 0;
        while i < chars.len() {
            let group = if chars[i] == '(' {
                let close = chars[i..].iter().position(|&c| c == ')').ok_or_else(|| bad("unclosed `(`"))? + i;
                let g = chars[i + 1..close]
                    .iter()
                    .map(|&c| parse_digit(c).ok_or_else(|| bad("bad element")))
                    .collect::<Result<Vec<_>>>()?;
                i = close + 1;
                if chars.get(i) != Some(&'*') {
                    return Err(bad("group without `*`"));
                }
                g
            } else {
                let a = parse_digit(chars[i]).ok_or_else(|| bad("bad element"))?;
                i += 1;
                vec![a]
            };
            if chars.get(i) == Some(&'*') {
                i += 1;
                if block.replace(group).is_some() {
                    return Err(bad("more than one repeated block"));
                }
            } else if block.is_some() {
                rest.extend(group);
            } else {
                head.extend(group);
            }
        }
        Ok(Pattern { head, block: block.unwrap_or_default(), rest, tail })
    }
}

/// A set of eventually-constant threads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EvSet {
    /// A finite list, kept sorted and duplicate-free.
    Explicit(Vec<EvThread>),
    /// A union of pattern families.
    Patterns(Vec<Pattern>),
}

impl EvSet {
    pub fn explicit(mut threads: Vec<EvThread>) -> Self {
        threads.sort();
        threads.dedup();
        EvSet::Explicit(threads)
    }

    pub fn check_domain(&self, domain: FiniteDomain) -> Result<()> {
        match self {
            EvSet::Explicit(ts) => ts.iter().try_for_each(|t| t.check_domain(domain)),
            EvSet::Patterns(ps) => ps.iter().try_for_each(|p| p.check_domain(domain)),
        }
    }

    pub fn contains(&self, s: &EvThread) -> bool {
        match self {
            EvSet::Explicit(ts) => ts.binary_search(s).is_ok(),
            EvSet::Patterns(ps) => ps.iter().any(|p| p.contains(s)),
        }
    }

    /// `R[k]`: the `k`-prefixes of members.
    pub fn cut(&self, domain: FiniteDomain, k: usize) -> Result<FinRel> {
        let members: Vec<EvThread> = match self {
            EvSet::Explicit(ts) => ts.clone(),
            EvSet::Patterns(ps) => {
                ps.iter().flat_map(|p| (0..=p.repetitions(k)).map(|n| p.member(n))).collect()
            }
        };
        FinRel::from_tuples(domain, k, members.iter().map(|s| s.first(k)))
    }

    /// Members in a fixed order, patterns unrolled up to `repetitions`.
    pub fn members(&self, repetitions: usize) -> Vec<EvThread> {
        let mut out: Vec<EvThread> = Vec::new();
        let mut push = |t: EvThread| {
            if !out.contains(&t) {
                out.push(t);
            }
        };
        match self {
            EvSet::Explicit(ts) => ts.iter().cloned().for_each(&mut push),
            EvSet::Patterns(ps) => {
                for n in 0..=repetitions {
                    for p in ps {
                        if n == 0 || !p.block.is_empty() {
                            push(p.member(n));
                        }
                    }
                }
            }
        }
        out
    }

    /// For a thread outside a finite set, a cut index at which it leaves
    /// every member.
    pub(crate) fn explicit_witness(threads: &[EvThread], s: &EvThread) -> Option<usize> {
        if threads.contains(s) {
            return None;
        }
        Some(
            threads
                .iter()
                .map(|m| {
                    let n = m.prefix_len().max(s.prefix_len()) + 1;
                    (0..n).find(|&i| m.at(i) != s.at(i)).expect("distinct threads differ") + 1
                })
                .max()
                .unwrap_or(0),
        )
    }
}

impl fmt::Display for EvSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvSet::Explicit(ts) => {
                let items: Vec<String> = ts.iter().map(ToString::to_string).collect();
                write!(f, "{{ {} }}", items.join(" ; "))
            }
            EvSet::Patterns(ps) => {
                let items: Vec<String> = ps.iter().map(ToString::to_string).collect();
                write!(f, "{}", items.join(", "))
            }
        }
    }
}

impl FromStr for EvSet {
    type Err = Error;

    /// `{ t ; t ; .. }` for an explicit set, else comma-separated patterns.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| Error::Invalid(format!("unclosed `{{` in `{s}`")))?;
            let threads = inner
                .split(';')
                .map(str::trim)
                .filter(|p| !p.is_empty())
                .map(str::parse)
                .collect::<Result<Vec<_>>>()?;
            Ok(EvSet::explicit(threads))
        } else {
            Ok(EvSet::Patterns(s.split(',').map(str::parse).collect::<Result<Vec<_>>>()?))
        }
    }
}
