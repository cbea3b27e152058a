/// A family split by arity; slice `k` holds the members of arity `k`,
/// sorted and without duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByArity<T> {
    slices: Vec<Vec<T>>,
}

impl<T: Ord> ByArity<T> {
    pub fn from_slices(mut slices: Vec<Vec<T>>) -> Self {
        for s in &mut slices {
            s.sort();
            s.dedup();
        }
        Self { slices }
    }

    /// Arities `0..=cap`.
    pub fn cap(&self) -> usize {
        self.slices.len().saturating_sub(1)
    }

    pub fn slice(&self, arity: usize) -> &[T] {
        self.slices.get(arity).map_or(&[], Vec::as_slice)
    }

    pub fn contains(&self, arity: usize, item: &T) -> bool {
        self.slice(arity).binary_search(item).is_ok()
    }

    pub fn total(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.slices.iter().map(Vec::len).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.slices.iter().flatten()
    }

    pub fn slices(&self) -> &[Vec<T>] {
        &self.slices
    }

    /// Members of `self` missing from `other`, arity by arity.
    pub fn missing_from<'a>(&'a self, other: &'a ByArity<T>) -> impl Iterator<Item = &'a T> + 'a {
        self.slices
            .iter()
            .enumerate()
            .flat_map(move |(k, s)| s.iter().filter(move |x| !other.contains(k, x)))
    }
}
