use std::fmt;

use rand::Rng;

use super::bitmap::{self, Sweep};
use super::subset::{explicit_cap, FlipMask, GroundSet, Subset};
use crate::error::{Error, Result};

/// Monotonicity class of a set system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    /// Both upper- and lower-closed (only `∅` and `𝒫(Δ)`).
    Both,
    Upper,
    Lower,
    Neither,
}

impl Monotonicity {
    pub fn is_upper(self) -> bool {
        matches!(self, Monotonicity::Both | Monotonicity::Upper)
    }

    pub fn is_lower(self) -> bool {
        matches!(self, Monotonicity::Both | Monotonicity::Lower)
    }

    pub fn name(self) -> &'static str {
        match self {
            Monotonicity::Both => "upper+lower",
            Monotonicity::Upper => "upper",
            Monotonicity::Lower => "lower",
            Monotonicity::Neither => "neither",
        }
    }
}

/// An explicit family of subsets of a small ground set, stored as a `2^n`-bit
/// membership bitmap. Equality is extensional.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetSystem {
    ground: GroundSet,
    words: Vec<u64>,
}

impl SetSystem {
    fn check_ground(ground: GroundSet) -> Result<()> {
        let cap = explicit_cap();
        if ground.n() > cap {
            return Err(Error::GroundSize {
                n: ground.n(),
                max: cap,
            });
        }
        Ok(())
    }

    fn raw(ground: GroundSet, fill: u64) -> Self {
        let n = ground.n();
        let words = vec![fill & bitmap::valid_mask(n); bitmap::word_count(n)];
        SetSystem { ground, words }
    }

    fn same(&self, words: Vec<u64>) -> Self {
        SetSystem {
            ground: self.ground,
            words,
        }
    }

    pub fn empty(ground: GroundSet) -> Result<Self> {
        Self::check_ground(ground)?;
        Ok(Self::raw(ground, 0))
    }

    /// The power set `𝒫(Δ)`.
    pub fn power_set(ground: GroundSet) -> Result<Self> {
        Self::check_ground(ground)?;
        Ok(Self::raw(ground, u64::MAX))
    }

    pub fn from_members<I: IntoIterator<Item = Subset>>(ground: GroundSet, members: I) -> Result<Self> {
        let mut s = Self::empty(ground)?;
        for t in members {
            ground.check(t)?;
            s.insert(t);
        }
        Ok(s)
    }

    /// Builds a system from 1-based label lists, e.g. `&[&[1, 2], &[2, 3]]`.
    pub fn from_labels(ground: GroundSet, members: &[&[usize]]) -> Result<Self> {
        let mut s = Self::empty(ground)?;
        for labels in members {
            s.insert(Subset::from_one_based(labels, ground)?);
        }
        Ok(s)
    }

    pub fn from_predicate<F: FnMut(Subset) -> bool>(ground: GroundSet, mut pred: F) -> Result<Self> {
        let mut s = Self::empty(ground)?;
        for t in ground.subsets() {
            if pred(t) {
                s.insert(t);
            }
        }
        Ok(s)
    }

    /// Each subset is included independently with probability `density`.
    pub fn random<R: Rng + ?Sized>(ground: GroundSet, density: f64, rng: &mut R) -> Result<Self> {
        let density = density.clamp(0.0, 1.0);
        Self::from_predicate(ground, |_| rng.gen_bool(density))
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn contains(&self, t: Subset) -> bool {
        if !self.ground.contains(t) {
            return false;
        }
        let i = t.index();
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, t: Subset) {
        debug_assert!(self.ground.contains(t));
        let i = t.index();
        self.words[i / 64] |= 1u64 << (i % 64);
    }

    pub fn remove(&mut self, t: Subset) {
        if self.ground.contains(t) {
            let i = t.index();
            self.words[i / 64] &= !(1u64 << (i % 64));
        }
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_power_set(&self) -> bool {
        let valid = bitmap::valid_mask(self.n());
        self.words.iter().all(|&w| w == valid)
    }

    /// Members in ascending mask order.
    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            Subset::from_bits(w)
                .indices()
                .map(move |b| Subset::from_bits((wi * 64 + b) as u64))
        })
    }

    /// Members ordered by cardinality, then lexicographically by sorted labels.
    pub fn canonical_members(&self) -> Vec<Subset> {
        let mut out: Vec<Subset> = self.members().collect();
        out.sort_by_cached_key(|t| (t.len(), t.to_one_based()));
        out
    }

    fn check_same_ground(&self, other: &SetSystem) -> Result<()> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &SetSystem, f: impl Fn(u64, u64) -> u64) -> Result<SetSystem> {
        self.check_same_ground(other)?;
        let words = self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect();
        Ok(self.same(words))
    }

    pub fn union(&self, other: &SetSystem) -> Result<SetSystem> {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &SetSystem) -> Result<SetSystem> {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &SetSystem) -> Result<SetSystem> {
        self.zip_with(other, |a, b| a & !b)
    }

    /// `self ⊆ other`; systems on different ground sets are never comparable.
    pub fn is_subset_of(&self, other: &SetSystem) -> bool {
        self.ground == other.ground && self.words.iter().zip(&other.words).all(|(&a, &b)| a & !b == 0)
    }

    fn swept(&self, dims: impl Iterator<Item = usize>, op: Sweep) -> SetSystem {
        let mut words = self.words.clone();
        for d in dims {
            bitmap::sweep(&mut words, d, op);
        }
        self.same(words)
    }

    /// `↑Ω`: all supersets of members.
    pub fn up_closure(&self) -> SetSystem {
        self.swept(0..self.n(), Sweep::UpOr)
    }

    /// `↓Ω`: all subsets of members.
    pub fn down_closure(&self) -> SetSystem {
        self.swept(0..self.n(), Sweep::DownOr)
    }

    /// Closure under adding elements of `add` and removing elements of `drop`.
    pub(crate) fn mixed_closure(&self, add: Subset, drop: Subset) -> SetSystem {
        let mut words = self.words.clone();
        for d in add.indices() {
            bitmap::sweep(&mut words, d, Sweep::UpOr);
        }
        for d in drop.indices() {
            bitmap::sweep(&mut words, d, Sweep::DownOr);
        }
        self.same(words)
    }

    /// Union over `d ∈ dims` of the one-step shifts of `self` along `d`.
    fn shifted_union(&self, dims: Subset, op: Sweep) -> Vec<u64> {
        let mut acc = vec![0u64; self.words.len()];
        for d in dims.indices() {
            let mut w = self.words.clone();
            bitmap::sweep(&mut w, d, op);
            for (a, b) in acc.iter_mut().zip(w) {
                *a |= b;
            }
        }
        acc
    }

    /// `m(Ω)`: inclusion-minimal members.
    pub fn minimal(&self) -> SetSystem {
        let above = self.up_closure().shifted_union(self.ground.full(), Sweep::ShiftUp);
        let words = self.words.iter().zip(above).map(|(&w, a)| w & !a).collect();
        self.same(words)
    }

    /// `M(Ω)`: inclusion-maximal members.
    pub fn maximal(&self) -> SetSystem {
        let below = self.down_closure().shifted_union(self.ground.full(), Sweep::ShiftDown);
        let words = self.words.iter().zip(below).map(|(&w, b)| w & !b).collect();
        self.same(words)
    }

    /// Members `T` such that removing any element of `T ∩ shrink` or adding any
    /// element of `grow \ T` leaves the system.
    pub(crate) fn extremal(&self, shrink: Subset, grow: Subset) -> SetSystem {
        let below = self.shifted_union(shrink, Sweep::ShiftUp);
        let above = self.shifted_union(grow, Sweep::ShiftDown);
        let words = self
            .words
            .iter()
            .zip(below.iter().zip(above))
            .map(|(&w, (&b, a))| w & !b & !a)
            .collect();
        self.same(words)
    }

    /// `overline Ω = 𝒫(Δ) \ Ω`.
    pub fn complement(&self) -> SetSystem {
        let valid = bitmap::valid_mask(self.n());
        self.same(self.words.iter().map(|&w| !w & valid).collect())
    }

    /// `hat Ω = {Δ \ T : T ∈ Ω}`.
    pub fn element_complement(&self) -> SetSystem {
        let mut words = self.words.clone();
        bitmap::reverse(&mut words, self.n());
        self.same(words)
    }

    /// `𝒞(Ω)`: sets meeting every member. Equals `overline hat ↑Ω`.
    pub fn cut(&self) -> SetSystem {
        self.up_closure().element_complement().complement()
    }

    /// `𝒢(Ω)`: sets `S` with `S ∪ T ≠ Δ` for every member `T`. Equals `overline hat ↓Ω`.
    pub fn cocut(&self) -> SetSystem {
        self.down_closure().element_complement().complement()
    }

    /// `θ_I(Ω)`: every member XOR-ed with the flip mask.
    pub fn apply_flip(&self, mask: &FlipMask) -> Result<SetSystem> {
        if mask.ground() != self.ground {
            return Err(Error::GroundMismatch {
                left: self.n(),
                right: mask.ground().n(),
            });
        }
        Ok(self.swept(mask.flipped().indices(), Sweep::Swap))
    }

    pub fn is_upper(&self) -> bool {
        (0..self.n()).all(|d| {
            let mut w = self.words.clone();
            bitmap::sweep(&mut w, d, Sweep::ShiftUp);
            w.iter().zip(&self.words).all(|(&s, &o)| s & !o == 0)
        })
    }

    pub fn is_lower(&self) -> bool {
        (0..self.n()).all(|d| {
            let mut w = self.words.clone();
            bitmap::sweep(&mut w, d, Sweep::ShiftDown);
            w.iter().zip(&self.words).all(|(&s, &o)| s & !o == 0)
        })
    }

    pub fn classification(&self) -> Monotonicity {
        match (self.is_upper(), self.is_lower()) {
            (true, true) => Monotonicity::Both,
            (true, false) => Monotonicity::Upper,
            (false, true) => Monotonicity::Lower,
            (false, false) => Monotonicity::Neither,
        }
    }

    /// True iff no two distinct members are comparable.
    pub fn is_antichain(&self) -> bool {
        self.minimal() == *self
    }
}

impl fmt::Display for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, t) in self.canonical_members().into_iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SetSystem(n={}, {})", self.n(), self)
    }
}
