//! Finite domains and the lexicographic ranking of tuples over them.

use crate::error::{Error, Result};

/// Element of a finite domain.
pub type Elem = u8;

/// Largest supported domain size.
pub const MAX_DOMAIN: usize = 36;

/// The carrier `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteDomain {
    size: usize,
}

impl FiniteDomain {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > MAX_DOMAIN {
            return Err(Error::Invalid(format!(
                "domain size must be in 1..={MAX_DOMAIN}, got {size}"
            )));
        }
        Ok(Self { size })
    }

    pub fn size(self) -> usize {
        self.size
    }

    pub fn elements(self) -> impl Iterator<Item = Elem> {
        (0..self.size).map(|a| a as Elem)
    }

    pub fn contains(self, a: Elem) -> bool {
        (a as usize) < self.size
    }

    pub fn check(self, a: Elem) -> Result<Elem> {
        if self.contains(a) {
            Ok(a)
        } else {
            Err(Error::ValueOutOfRange { value: a as usize, size: self.size })
        }
    }

    pub fn check_all(self, xs: &[Elem]) -> Result<()> {
        xs.iter().try_for_each(|&a| self.check(a).map(drop))
    }

    pub fn same_as(self, other: FiniteDomain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch { left: self.size, right: other.size })
        }
    }

    /// `size^n`, or `None` on overflow.
    pub fn power(self, n: usize) -> Option<usize> {
        self.size.checked_pow(u32::try_from(n).ok()?)
    }

    /// Rank of a tuple, leftmost coordinate most significant.
    pub fn rank(self, tuple: &[Elem]) -> usize {
        tuple.iter().fold(0, |r, &a| r * self.size + a as usize)
    }

    pub fn unrank(self, mut rank: usize, arity: usize) -> Vec<Elem> {
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = (rank % self.size) as Elem;
            rank /= self.size;
        }
        out
    }

    /// All tuples of the given arity in rank order.
    pub fn tuples(self, arity: usize) -> Tuples {
        Tuples::new(self.size, arity)
    }
}

/// Odometer over `A^n` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Tuples {
    size: usize,
    current: Vec<Elem>,
    done: bool,
}

impl Tuples {
    fn new(size: usize, arity: usize) -> Self {
        Self { size, current: vec![0; arity], done: size == 0 && arity > 0 }
    }
}

impl Iterator for Tuples {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        self.done = !advance(&mut self.current, self.size);
        Some(out)
    }
}

/// Steps `digits` to the next tuple; false once it wraps around.
pub fn advance(digits: &mut [Elem], size: usize) -> bool {
    for d in digits.iter_mut().rev() {
        if (*d as usize) + 1 < size {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Steps an index vector over `0..bound` per position; false on wrap.
pub fn advance_indices(idx: &mut [usize], bound: usize) -> bool {
    for d in idx.iter_mut().rev() {
        if *d + 1 < bound {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

/// Formats an element as a single base-36 digit.
pub fn digit(a: Elem) -> char {
    std::char::from_digit(a as u32, 36).expect("element below 36")
}

pub fn parse_digit(c: char) -> Option<Elem> {
    c.to_digit(36).map(|d| d as Elem)
}

pub fn digits(xs: &[Elem]) -> String {
    xs.iter().map(|&a| digit(a)).collect()
}
