//! Matrices whose rows are eventually-constant threads.

use std::fmt;
use std::str::FromStr;

use crate::domain::{advance_indices, Elem, FiniteDomain};
use crate::error::{Error, Result};
use crate::finite::FinRel;
use crate::omega_ops::ROp;
use crate::threads::EvThread;

/// Number of rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alpha {
    Finite(usize),
    Omega,
}

/// An `α × ω` matrix. Row `i` is `rows[i]`, or `tail_row` for every
/// `i >= rows.len()` when `α = ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EvMatrix {
    rows: Vec<EvThread>,
    tail_row: Option<EvThread>,
}

/// A column of a matrix: an `α`-tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    Finite(Vec<Elem>),
    Omega(EvThread),
}

impl Column {
    pub fn at(&self, i: usize) -> Elem {
        match self {
            Column::Finite(v) => v[i],
            Column::Omega(s) => s.at(i),
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Finite(v) => write!(f, "({})", crate::domain::digits(v)),
            Column::Omega(s) => write!(f, "{s}"),
        }
    }
}

impl EvMatrix {
    pub fn finite(rows: Vec<EvThread>) -> Self {
        Self { rows, tail_row: None }
    }

    pub fn omega(mut rows: Vec<EvThread>, tail_row: EvThread) -> Self {
        while rows.last() == Some(&tail_row) {
            rows.pop();
        }
        Self { rows, tail_row: Some(tail_row) }
    }

    /// The finite matrix with columns `c_0, .., c_{L-1}` followed by `tail` repeated.
    pub fn from_finite_columns(alpha: usize, columns: &[&[Elem]], tail: &[Elem]) -> Result<Self> {
        for c in columns.iter().chain([&tail]) {
            if c.len() != alpha {
                return Err(Error::ShapeMismatch(format!("column of length {} in a {alpha}-row matrix", c.len())));
            }
        }
        Ok(Self::finite(
            (0..alpha)
                .map(|i| EvThread::new(columns.iter().map(|c| c[i]).collect(), tail[i]))
                .collect(),
        ))
    }

    /// The `ω × ω` matrix with columns `c_0, .., c_{L-1}` followed by `tail` repeated.
    pub fn from_omega_columns(columns: &[&EvThread], tail: &EvThread) -> Self {
        let n = columns.iter().chain([&tail]).map(|c| c.prefix_len()).max().unwrap_or(0);
        let row = |i: usize| EvThread::new(columns.iter().map(|c| c.at(i)).collect(), tail.at(i));
        let tail_row = EvThread::new(columns.iter().map(|c| c.tail()).collect(), tail.tail());
        Self::omega((0..n).map(row).collect(), tail_row)
    }

    pub fn alpha(&self) -> Alpha {
        match self.tail_row {
            Some(_) => Alpha::Omega,
            None => Alpha::Finite(self.rows.len()),
        }
    }

    pub fn rows(&self) -> &[EvThread] {
        &self.rows
    }

    pub fn tail_row(&self) -> Option<&EvThread> {
        self.tail_row.as_ref()
    }

    pub fn row(&self, i: usize) -> Option<&EvThread> {
        self.rows.get(i).or(self.tail_row.as_ref())
    }

    fn all_rows(&self) -> impl Iterator<Item = &EvThread> {
        self.rows.iter().chain(self.tail_row.as_ref())
    }

    /// Columns `j >= explicit_columns()` all equal [`Self::tail_column`].
    pub fn explicit_columns(&self) -> usize {
        self.all_rows().map(EvThread::prefix_len).max().unwrap_or(0)
    }

    pub fn column(&self, j: usize) -> Column {
        match &self.tail_row {
            None => Column::Finite(self.rows.iter().map(|r| r.at(j)).collect()),
            Some(t) => Column::Omega(EvThread::new(self.rows.iter().map(|r| r.at(j)).collect(), t.at(j))),
        }
    }

    pub fn tail_column(&self) -> Column {
        self.column(self.explicit_columns())
    }

    /// The distinct columns: explicit ones followed by the tail column.
    pub fn columns(&self) -> Vec<Column> {
        (0..=self.explicit_columns()).map(|j| self.column(j)).collect()
    }

    pub fn check_domain(&self, domain: FiniteDomain) -> Result<()> {
        self.all_rows().try_for_each(|r| r.check_domain(domain))
    }

    /// Pairwise distinct rows; never for `α = ω`.
    pub fn row_injective(&self) -> bool {
        if self.tail_row.is_some() {
            return false;
        }
        let mut rows = self.rows.clone();
        rows.sort();
        rows.dedup();
        rows.len() == self.rows.len()
    }
}

/// `φ[m]`: `φ` applied to every row.
pub fn apply_rop(phi: &ROp, m: &EvMatrix) -> Column {
    let image: Vec<Elem> = m.rows.iter().map(|r| phi.eval(r)).collect();
    match &m.tail_row {
        None => Column::Finite(image),
        Some(t) => Column::Omega(EvThread::new(image, phi.eval(t))),
    }
}

/// `m[c_0, .., c_{k-1}]`: replace the first `k` columns.
pub fn substitute_columns(m: &EvMatrix, columns: &[Column]) -> Result<EvMatrix> {
    match &m.tail_row {
        None => {
            let alpha = m.rows.len();
            let mut cols = Vec::with_capacity(columns.len());
            for c in columns {
                match c {
                    Column::Finite(v) if v.len() == alpha => cols.push(v),
                    _ => return Err(Error::ShapeMismatch(format!("column {c} does not have {alpha} rows"))),
                }
            }
            Ok(EvMatrix::finite(
                m.rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| r.substitute(&cols.iter().map(|c| c[i]).collect::<Vec<_>>()))
                    .collect(),
            ))
        }
        Some(tail) => {
            let mut cols = Vec::with_capacity(columns.len());
            for c in columns {
                match c {
                    Column::Omega(s) => cols.push(s),
                    _ => return Err(Error::ShapeMismatch(format!("column {c} is finite in an ω-row matrix"))),
                }
            }
            let n = cols.iter().map(|c| c.prefix_len()).fold(m.rows.len(), usize::max);
            let rows = (0..n)
                .map(|i| {
                    let base = m.rows.get(i).unwrap_or(tail);
                    base.substitute(&cols.iter().map(|c| c.at(i)).collect::<Vec<_>>())
                })
                .collect();
            let tail_row = tail.substitute(&cols.iter().map(|c| c.tail()).collect::<Vec<_>>());
            Ok(EvMatrix::omega(rows, tail_row))
        }
    }
}

/// Where matrix columns are drawn from.
#[derive(Debug, Clone, Copy)]
pub enum ColumnPool<'a> {
    /// Tuples of a finitary relation: `α` is its arity.
    Relation(&'a FinRel),
    /// Threads: `α = ω`.
    Threads(&'a [EvThread]),
}

/// Matrices with at most `prefix_columns` explicit columns, all columns
/// drawn from the pool and at most `distinct` distinct ones.
#[derive(Debug, Clone, Copy)]
pub struct MatrixShape {
    pub prefix_columns: usize,
    pub distinct: Option<usize>,
}

/// Each matrix once: `(c_0, .., c_{L-1}, t)` ranges over `pool^(L+1)` for
/// `L = prefix_columns`, shorter matrices being those with trailing `c_j = t`.
pub fn enumerate_matrices<'a>(pool: ColumnPool<'a>, shape: MatrixShape) -> impl Iterator<Item = EvMatrix> + 'a {
    let finite: Vec<Vec<Elem>> = match pool {
        ColumnPool::Relation(s) => s.tuples().collect(),
        ColumnPool::Threads(_) => Vec::new(),
    };
    let size = match pool {
        ColumnPool::Relation(_) => finite.len(),
        ColumnPool::Threads(ts) => ts.len(),
    };
    let len = shape.prefix_columns + 1;
    let mut idx = vec![0usize; len];
    let mut done = size == 0;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let current = idx.clone();
        done = !advance_indices(&mut idx, size);
        if let Some(limit) = shape.distinct {
            let mut d = current.clone();
            d.sort_unstable();
            d.dedup();
            if d.len() > limit {
                continue;
            }
        }
        let (last, prefix) = current.split_last().expect("at least the tail column");
        return Some(match pool {
            ColumnPool::Relation(s) => {
                let cols: Vec<&[Elem]> = prefix.iter().map(|&j| finite[j].as_slice()).collect();
                EvMatrix::from_finite_columns(s.arity(), &cols, &finite[*last]).expect("pool tuples have the arity")
            }
            ColumnPool::Threads(ts) => {
                let cols: Vec<&EvThread> = prefix.iter().map(|&j| &ts[j]).collect();
                EvMatrix::from_omega_columns(&cols, &ts[*last])
            }
        });
    })
}

impl fmt::Display for EvMatrix {
    /// Rows separated by `;`, the repeated row marked `tailrow:`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.rows.iter().map(ToString::to_string).collect();
        if let Some(t) = &self.tail_row {
            parts.push(format!("tailrow: {t}"));
        }
        write!(f, "{}", parts.join(" ; "))
    }
}

impl FromStr for EvMatrix {
    type Err = Error;

    /// Rows separated by `;` or newlines; a final `tailrow:` row makes `α = ω`.
    fn from_str(s: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut tail = None;
        for part in s.split([';', '\n']).map(str::trim).filter(|p| !p.is_empty()) {
            if tail.is_some() {
                return Err(Error::Invalid("rows after `tailrow:`".into()));
            }
            match part.strip_prefix("tailrow:") {
                Some(t) => tail = Some(t.parse::<EvThread>()?),
                None => rows.push(part.parse::<EvThread>()?),
            }
        }
        Ok(match tail {
            Some(t) => EvMatrix::omega(rows, t),
            None => EvMatrix::finite(rows),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::FinOp;

    fn d2() -> FiniteDomain {
        FiniteDomain::new(2).unwrap()
    }

    fn t(s: &str) -> EvThread {
        s.parse().unwrap()
    }

    #[test]
    fn duality_of_rows_and_columns() {
        let m: EvMatrix = "0 1 | 1 ; 1 0 | 1 ; tailrow: | 0".parse().unwrap();
        assert_eq!(m.alpha(), Alpha::Omega);
        assert_eq!(m.column(0), Column::Omega(t("0 1 | 0")));
        assert_eq!(m.column(1), Column::Omega(t("1 0 | 0")));
        assert_eq!(m.tail_column(), Column::Omega(t("1 1 | 0")));
        let rebuilt = EvMatrix::from_omega_columns(&[&t("0 1 | 0"), &t("1 0 | 0")], &t("1 1 | 0"));
        assert_eq!(rebuilt, m);
    }

    #[test]
    fn substituted_column_is_read_back_by_projection() {
        let m: EvMatrix = "0 | 0 ; 1 | 1".parse().unwrap();
        let c = Column::Finite(vec![1, 0]);
        let sub = substitute_columns(&m, &[c.clone()]).unwrap();
        assert_eq!(apply_rop(&ROp::proj(d2(), 0).unwrap(), &sub), c);
    }

    #[test]
    fn substitution_shape_errors() {
        let m: EvMatrix = "0 | 0".parse().unwrap();
        assert!(substitute_columns(&m, &[Column::Finite(vec![1, 0])]).is_err());
        assert!(substitute_columns(&m, &[Column::Omega(EvThread::constant(0))]).is_err());
    }

    #[test]
    fn omega_substitution_extends_rows() {
        let m: EvMatrix = "tailrow: | 0".parse().unwrap();
        let sub = substitute_columns(&m, &[Column::Omega(t("1 1 1 | 0"))]).unwrap();
        assert_eq!(sub.rows().len(), 3);
        assert_eq!(sub.column(0), Column::Omega(t("1 1 1 | 0")));
    }

    #[test]
    fn apply_top_ext_is_rowwise() {
        let and = ROp::top_ext(&FinOp::new(d2(), 2, vec![0, 0, 0, 1]).unwrap());
        let m: EvMatrix = "1 1 | 0 ; 1 0 | 0".parse().unwrap();
        assert_eq!(apply_rop(&and, &m), Column::Finite(vec![1, 0]));
    }

    #[test]
    fn row_injectivity() {
        assert!("0 | 0 ; 1 | 0".parse::<EvMatrix>().unwrap().row_injective());
        assert!(!"0 | 0 ; 0 | 0".parse::<EvMatrix>().unwrap().row_injective());
        assert!(!"0 | 0 ; tailrow: | 1".parse::<EvMatrix>().unwrap().row_injective());
    }

    #[test]
    fn enumeration_counts() {
        let leq = FinRel::from_tuples(d2(), 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
        let shape = MatrixShape { prefix_columns: 1, distinct: Some(2) };
        let ms: Vec<_> = enumerate_matrices(ColumnPool::Relation(&leq), shape).collect();
        assert_eq!(ms.len(), 9);
        let mut dedup = ms.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 9);

        let unary = FinRel::from_tuples(d2(), 1, [[0], [1]]).unwrap();
        let shape = MatrixShape { prefix_columns: 0, distinct: Some(1) };
        assert_eq!(enumerate_matrices(ColumnPool::Relation(&unary), shape).count(), 2);
    }

    #[test]
    fn literal_roundtrip() {
        for s in ["0 1 | 1 ; 1 0 | 1 ; tailrow: | 1", "| 0", ""] {
            let m: EvMatrix = s.parse().unwrap();
            assert_eq!(m.to_string().parse::<EvMatrix>().unwrap(), m);
        }
        assert!("tailrow: | 0 ; | 1".parse::<EvMatrix>().is_err());
    }
}
