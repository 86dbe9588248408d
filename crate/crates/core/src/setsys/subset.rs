use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Sub};

use crate::error::{Error, Result};

/// Largest ground set a [`Subset`] mask can address.
pub const MAX_GROUND: usize = 64;

/// Default cap on the ground size of explicitly stored set systems.
pub const DEFAULT_EXPLICIT_CAP: usize = 22;

/// Hard ceiling for the explicit cap; a 2^30-bit bitmap is 128 MiB.
pub const EXPLICIT_CAP_CEILING: usize = 30;

/// Environment variable overriding [`DEFAULT_EXPLICIT_CAP`].
pub const EXPLICIT_CAP_ENV: &str = "MONOSET_EXPLICIT_CAP";

/// Ground-size cap for explicit set systems, honouring `MONOSET_EXPLICIT_CAP`.
pub fn explicit_cap() -> usize {
    std::env::var(EXPLICIT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.clamp(1, EXPLICIT_CAP_CEILING))
        .unwrap_or(DEFAULT_EXPLICIT_CAP)
}

/// The ground set `{0, .., n-1}` (rendered 1-based externally).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: usize,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize { n, max: MAX_GROUND });
        }
        Ok(Self { n })
    }

    /// A ground set small enough to back an explicit [`SetSystem`](super::SetSystem).
    pub fn explicit(n: usize) -> Result<Self> {
        let cap = explicit_cap();
        if n == 0 || n > cap {
            return Err(Error::GroundSize { n, max: cap });
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn full(&self) -> Subset {
        if self.n == 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << self.n) - 1)
        }
    }

    pub fn contains(&self, s: Subset) -> bool {
        s.0 & !self.full().0 == 0
    }

    pub fn check(&self, s: Subset) -> Result<Subset> {
        if self.contains(s) {
            Ok(s)
        } else {
            let index = 63 - (s.0 & !self.full().0).leading_zeros() as usize;
            Err(Error::ElementOutOfRange { index, n: self.n })
        }
    }

    /// Complement of `s` within this ground set.
    pub fn complement(&self, s: Subset) -> Subset {
        Subset(self.full().0 & !s.0)
    }

    /// Iterates every subset of the ground set in mask order. Only sensible for small `n`.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        let count = 1u64 << self.n.min(63);
        (0..count).map(Subset)
    }
}

/// A subset of the ground set stored as a bitmask; bit `i` is element `i` (0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(&self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < MAX_GROUND);
        Subset(1u64 << i)
    }

    /// Builds a subset from 0-based element indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices.into_iter().fold(Subset::EMPTY, |s, i| s.with(i))
    }

    /// Parses 1-based element labels, validating them against `ground`.
    pub fn from_one_based(labels: &[usize], ground: GroundSet) -> Result<Self> {
        let mut s = Subset::EMPTY;
        for &label in labels {
            if label == 0 || label > ground.n() {
                return Err(Error::ElementOutOfRange {
                    index: label,
                    n: ground.n(),
                });
            }
            s = s.with(label - 1);
        }
        Ok(s)
    }

    pub fn indices(self) -> SubsetIter {
        SubsetIter(self.0)
    }

    /// Sorted 1-based labels.
    pub fn to_one_based(self) -> Vec<usize> {
        self.indices().map(|i| i + 1).collect()
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_GROUND && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1u64 << i))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    /// Index into a `2^n` membership bitmap.
    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

impl BitOr for Subset {
    type Output = Subset;
    fn bitor(self, rhs: Subset) -> Subset {
        Subset(self.0 | rhs.0)
    }
}

impl BitAnd for Subset {
    type Output = Subset;
    fn bitand(self, rhs: Subset) -> Subset {
        Subset(self.0 & rhs.0)
    }
}

impl BitXor for Subset {
    type Output = Subset;
    fn bitxor(self, rhs: Subset) -> Subset {
        Subset(self.0 ^ rhs.0)
    }
}

impl Sub for Subset {
    type Output = Subset;
    fn sub(self, rhs: Subset) -> Subset {
        Subset(self.0 & !rhs.0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.indices().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Ascending iterator over the 0-based elements of a [`Subset`].
#[derive(Clone, Debug)]
pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for SubsetIter {}

/// Coordinate flip on the index set `flipped`: `T ↦ (T \ I) ∪ (I \ T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FlipMask {
    ground: GroundSet,
    flipped: Subset,
}

impl FlipMask {
    pub fn new(ground: GroundSet, flipped: Subset) -> Result<Self> {
        ground.check(flipped)?;
        Ok(Self { ground, flipped })
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn flipped(&self) -> Subset {
        self.flipped
    }

    pub fn apply(&self, t: Subset) -> Subset {
        t ^ self.flipped
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_based_round_trip() {
        let g = GroundSet::new(5).unwrap();
        let s = Subset::from_one_based(&[1, 3, 5], g).unwrap();
        assert_eq!(s.bits(), 0b10101);
        assert_eq!(s.to_one_based(), vec![1, 3, 5]);
        assert!(Subset::from_one_based(&[0], g).is_err());
        assert!(Subset::from_one_based(&[6], g).is_err());
    }

    #[test]
    fn ground_bounds() {
        assert!(GroundSet::new(0).is_err());
        assert!(GroundSet::new(65).is_err());
        let g = GroundSet::new(64).unwrap();
        assert_eq!(g.full().bits(), u64::MAX);
        let g3 = GroundSet::new(3).unwrap();
        assert!(g3.check(Subset::from_bits(0b1000)).is_err());
        assert_eq!(g3.complement(Subset::from_bits(0b001)).bits(), 0b110);
    }

    #[test]
    fn flip_is_involution() {
        let g = GroundSet::new(4).unwrap();
        let f = FlipMask::new(g, Subset::from_bits(0b0110)).unwrap();
        for t in g.subsets() {
            assert_eq!(f.apply(f.apply(t)), t);
        }
    }

    #[test]
    fn display_is_one_based() {
        assert_eq!(Subset::from_bits(0b101).to_string(), "{1,3}");
        assert_eq!(Subset::EMPTY.to_string(), "{}");
    }
}
