use std::fmt;

/// Most defaults a [`DefaultSet`] can index.
pub const MAX_DEFAULTS: usize = 64;

/// A set of default indices (0-based positions in the knowledge base).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct DefaultSet(u64);

impl DefaultSet {
    pub const EMPTY: DefaultSet = DefaultSet(0);

    pub fn from_bits(bits: u64) -> Self {
        DefaultSet(bits)
    }

    /// The first `n` indices.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_DEFAULTS);
        if n == 64 {
            DefaultSet(u64::MAX)
        } else {
            DefaultSet((1u64 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Self) -> Self {
        DefaultSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        DefaultSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        DefaultSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset(self, other: Self) -> bool {
        self.is_subset(other) && self != other
    }

    /// Members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Every subset of `self`, starting from the empty set.
    pub fn subsets(self) -> impl Iterator<Item = DefaultSet> {
        let universe = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == universe {
                None
            } else {
                Some((cur.wrapping_sub(universe)) & universe)
            };
            Some(DefaultSet(cur))
        })
    }
}

impl FromIterator<usize> for DefaultSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(DefaultSet::EMPTY, DefaultSet::with)
    }
}

/// Renders as `{0,2,3}` with 0-based indices.
impl fmt::Display for DefaultSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
