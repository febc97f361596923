use std::cmp::Ordering;
use std::fmt;

/// A base direction `1..=n`.
pub type Dir = u8;

/// Symmetric multi-index over the base directions.
///
/// Entries are kept sorted, so two multi-indices built from the same multiset
/// compare equal regardless of the order they were written in.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(Vec<Dir>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = Dir>>(dirs: I) -> Self {
        let mut v: Vec<Dir> = dirs.into_iter().collect();
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Dir] {
        &self.0
    }

    /// `λ + Λ`.
    pub fn append(&self, dir: Dir) -> Self {
        let pos = self.0.partition_point(|&d| d <= dir);
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0[..pos]);
        v.push(dir);
        v.extend_from_slice(&self.0[pos..]);
        MultiIndex(v)
    }

    pub fn concat(&self, other: &MultiIndex) -> Self {
        MultiIndex::new(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `Λ - λ`, if `λ` occurs in `Λ`.
    pub fn remove(&self, dir: Dir) -> Option<Self> {
        let pos = self.0.iter().position(|&d| d == dir)?;
        let mut v = self.0.clone();
        v.remove(pos);
        Some(MultiIndex(v))
    }

    pub fn count(&self, dir: Dir) -> usize {
        self.0.iter().filter(|&&d| d == dir).count()
    }

    /// Number of distinct orderings of the entries, `|Λ|! / ∏ mᵢ!`.
    pub fn orderings(&self) -> u64 {
        let mut result: u64 = 1;
        let mut k: u64 = 0;
        let mut run: u64 = 0;
        let mut prev: Option<Dir> = None;
        for &d in &self.0 {
            k += 1;
            if prev == Some(d) {
                run += 1;
            } else {
                run = 1;
                prev = Some(d);
            }
            // multinomial built incrementally: C(k, run) contributions
            result = result * k / run;
        }
        result
    }

    /// All multi-indices over `n` directions with length at most `max_len`,
    /// ordered by length and then lexicographically.
    pub fn all_up_to(n: Dir, max_len: usize) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex::empty()];
        let mut layer = vec![MultiIndex::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for mi in &layer {
                let start = mi.0.last().copied().unwrap_or(1);
                for d in start..=n {
                    let mut v = mi.0.clone();
                    v.push(d);
                    next.push(MultiIndex(v));
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", d)?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        assert_eq!(MultiIndex::new([2, 1]), MultiIndex::new([1, 2]));
        assert_eq!(MultiIndex::new([2, 1]).entries(), &[1, 2]);
    }

    #[test]
    fn append_grows_length_by_one() {
        let mi = MultiIndex::new([1, 3]);
        let grown = mi.append(2);
        assert_eq!(grown.len(), mi.len() + 1);
        assert_eq!(grown, MultiIndex::new([1, 2, 3]));
        assert_eq!(grown.remove(2), Some(mi));
        assert_eq!(MultiIndex::empty().remove(1), None);
    }

    #[test]
    fn orderings_count() {
        assert_eq!(MultiIndex::empty().orderings(), 1);
        assert_eq!(MultiIndex::new([1, 1]).orderings(), 1);
        assert_eq!(MultiIndex::new([1, 2]).orderings(), 2);
        assert_eq!(MultiIndex::new([1, 1, 2]).orderings(), 3);
        assert_eq!(MultiIndex::new([1, 2, 3]).orderings(), 6);
        assert_eq!(MultiIndex::new([1, 1, 2, 2]).orderings(), 6);
    }

    #[test]
    fn enumeration_sizes() {
        // 1 + 3 + 6 + 10
        assert_eq!(MultiIndex::all_up_to(3, 3).len(), 20);
        assert_eq!(MultiIndex::all_up_to(1, 4).len(), 5);
    }
}
