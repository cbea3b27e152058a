use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;

use crate::domain::{digit, digits, Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::finite::FinOp;
use crate::threads::{parse_digits, EvThread};

/// A representable ω-operation `φ(s) = head(s_0, .., s_{w-1}, tail(s))`.
///
/// The head table is indexed by the rank of `(x_0, .., x_{w-1}, c)`,
/// with the tail value `c` least significant. Equality, hashing and
/// ordering are semantic: tables are compared after padding to a common
/// width.
#[derive(Debug, Clone)]
pub struct ROp {
    domain: FiniteDomain,
    width: usize,
    head: Vec<Elem>,
}

impl ROp {
    pub fn new(domain: FiniteDomain, width: usize, head: Vec<Elem>) -> Result<Self> {
        let cells = domain
            .power(width + 1)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::Invalid(format!("width {width} too large")))?;
        if head.len() != cells {
            return Err(Error::ShapeMismatch(format!(
                "head of width {width} needs {cells} entries, got {}",
                head.len()
            )));
        }
        domain.check_all(&head)?;
        Ok(Self { domain, width, head })
    }

    pub(crate) fn from_head_unchecked(domain: FiniteDomain, width: usize, head: Vec<Elem>) -> Self {
        Self { domain, width, head }
    }

    pub fn from_fn(domain: FiniteDomain, width: usize, f: impl Fn(&[Elem], Elem) -> Elem) -> Result<Self> {
        let head = domain.tuples(width + 1).map(|t| f(&t[..width], t[width])).collect();
        Self::new(domain, width, head)
    }

    /// `f^⊤(s) = f(s_0, .., s_{k-1})`, of width `k`.
    pub fn top_ext(f: &FinOp) -> Self {
        let size = f.domain().size();
        let head = f.table().iter().flat_map(|&v| std::iter::repeat(v).take(size)).collect();
        Self::from_head_unchecked(f.domain(), f.arity(), head)
    }

    /// The projection `e_n(s) = s_n`, of width `n + 1`.
    pub fn proj(domain: FiniteDomain, n: usize) -> Result<Self> {
        Self::from_fn(domain, n + 1, |x, _| x[n])
    }

    /// `s ↦ tail(s)`, of width 0.
    pub fn tail_op(domain: FiniteDomain) -> Self {
        Self::from_head_unchecked(domain, 0, domain.elements().collect())
    }

    pub fn constant(domain: FiniteDomain, value: Elem) -> Result<Self> {
        domain.check(value)?;
        Ok(Self::from_head_unchecked(domain, 0, vec![value; domain.size()]))
    }

    /// Every operation of width `<= width`, each once, as width-`width` tables.
    pub fn all(domain: FiniteDomain, width: usize) -> impl Iterator<Item = ROp> {
        let cells = domain.power(width + 1).expect("small width");
        domain
            .tuples(cells)
            .map(move |head| Self::from_head_unchecked(domain, width, head))
    }

    pub fn random<R: Rng>(domain: FiniteDomain, width: usize, rng: &mut R) -> Self {
        let cells = domain.power(width + 1).expect("small width");
        let head = (0..cells).map(|_| rng.gen_range(0..domain.size()) as Elem).collect();
        Self::from_head_unchecked(domain, width, head)
    }

    pub fn domain(&self) -> FiniteDomain {
        self.domain
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn head(&self) -> &[Elem] {
        &self.head
    }

    /// `head(x_0, .., x_{w-1}, c)`, reading only the first `w` entries of `x`.
    #[inline]
    pub fn head_at(&self, x: &[Elem], c: Elem) -> Elem {
        let size = self.domain.size();
        let r = x[..self.width].iter().fold(0usize, |acc, &a| acc * size + a as usize);
        self.head[r * size + c as usize]
    }

    pub fn eval(&self, s: &EvThread) -> Elem {
        let x = s.first(self.width);
        self.head_at(&x, s.tail())
    }

    /// The same operation described at a larger width.
    pub fn pad(&self, width: usize) -> ROp {
        assert!(width >= self.width, "cannot pad width {} down to {width}", self.width);
        let size = self.domain.size();
        let stride = self.domain.power(width - self.width).expect("small width");
        let mut head = Vec::with_capacity(self.head.len() * stride);
        for block in self.head.chunks(size) {
            for _ in 0..stride {
                head.extend_from_slice(block);
            }
        }
        Self::from_head_unchecked(self.domain, width, head)
    }

    fn ignores_last_prefix_position(&self) -> bool {
        if self.width == 0 {
            return false;
        }
        let size = self.domain.size();
        self.head
            .chunks(size * size)
            .all(|group| group.chunks(size).all(|b| b == &group[..size]))
    }

    /// The minimal-width description of the same operation.
    pub fn canonical(&self) -> ROp {
        let mut op = self.clone();
        while op.ignores_last_prefix_position() {
            let size = op.domain.size();
            let head = op.head.chunks(size * size).flat_map(|g| g[..size].to_vec()).collect();
            op = Self::from_head_unchecked(op.domain, op.width - 1, head);
        }
        op
    }

    pub fn is_tail_independent(&self) -> bool {
        let size = self.domain.size();
        self.head.chunks(size).all(|b| b.iter().all(|&v| v == b[0]))
    }

    /// `Some(n)` when this is the projection `e_n`.
    pub fn as_projection(&self) -> Option<usize> {
        (0..self.width).find(|&n| {
            self.domain
                .tuples(self.width + 1)
                .zip(&self.head)
                .all(|(t, &v)| t[n] == v)
        })
    }

    pub fn is_tail_op(&self) -> bool {
        self.domain
            .tuples(self.width + 1)
            .zip(&self.head)
            .all(|(t, &v)| t[self.width] == v)
    }

    fn key(&self) -> (FiniteDomain, usize, Vec<Elem>) {
        let c = self.canonical();
        (c.domain, c.width, c.head)
    }
}

/// Semantic equality: equal heads after padding to a common width.
pub fn rop_equal(a: &ROp, b: &ROp) -> bool {
    if a.domain != b.domain {
        return false;
    }
    let w = a.width.max(b.width);
    a.pad(w).head == b.pad(w).head
}

impl PartialEq for ROp {
    fn eq(&self, other: &Self) -> bool {
        rop_equal(self, other)
    }
}

impl Eq for ROp {}

impl Hash for ROp {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for ROp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ROp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for ROp {
    /// `w=1 : 00->0 01->1 10->1 11->1`, keys listing prefix then tail.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w={} :", self.width)?;
        for (t, &v) in self.domain.tuples(self.width + 1).zip(&self.head) {
            write!(f, " {}->{}", digits(&t), digit(v))?;
        }
        Ok(())
    }
}

/// Parses `w=W : key->v ..` over a known domain; a leading `rop` is allowed.
pub fn parse_rop(domain: FiniteDomain, s: &str) -> Result<ROp> {
    let s = s.trim();
    let s = s.strip_prefix("rop").map_or(s, str::trim_start);
    let (lhs, body) = s
        .split_once(':')
        .ok_or_else(|| Error::Invalid(format!("operation literal `{s}` lacks `:`")))?;
    let width: usize = lhs
        .trim()
        .strip_prefix("w=")
        .and_then(|w| w.trim().parse().ok())
        .ok_or_else(|| Error::Invalid(format!("bad width in `{lhs}`")))?;
    let cells = domain
        .power(width + 1)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| Error::Invalid(format!("width {width} too large")))?;
    let mut head: Vec<Option<Elem>> = vec![None; cells];
    for entry in body.split_whitespace() {
        let (key, value) = entry
            .split_once("->")
            .ok_or_else(|| Error::Invalid(format!("bad table entry `{entry}`")))?;
        let key = parse_digits(key)?;
        if key.len() != width + 1 {
            return Err(Error::ArityMismatch { expected: width + 1, found: key.len() });
        }
        domain.check_all(&key)?;
        let value = match parse_digits(value)?.as_slice() {
            [v] => domain.check(*v)?,
            _ => return Err(Error::Invalid(format!("bad value in `{entry}`"))),
        };
        head[domain.rank(&key)] = Some(value);
    }
    let head = head
        .into_iter()
        .enumerate()
        .map(|(r, v)| {
            v.ok_or_else(|| Error::Invalid(format!("missing entry {}", digits(&domain.unrank(r, width + 1)))))
        })
        .collect::<Result<Vec<_>>>()?;
    ROp::new(domain, width, head)
}

/// An eventually-constant sequence of operations `(ψ_0, .., ψ_{m-1}, τ, τ, ..)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpSeq {
    pub prefix: Vec<ROp>,
    pub tail_op: ROp,
}

impl OpSeq {
    pub fn new(prefix: Vec<ROp>, tail_op: ROp) -> Self {
        Self { prefix, tail_op }
    }

    pub fn member(&self, n: usize) -> &ROp {
        self.prefix.get(n).unwrap_or(&self.tail_op)
    }

    pub fn map(&self, f: impl Fn(&ROp) -> Result<ROp>) -> Result<OpSeq> {
        Ok(OpSeq {
            prefix: self.prefix.iter().map(&f).collect::<Result<_>>()?,
            tail_op: f(&self.tail_op)?,
        })
    }
}
