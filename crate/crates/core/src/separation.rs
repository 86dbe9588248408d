//! Membership oracles for large systems and separation of infeasible points by
//! extremal infeasible structures.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::approx::Bipartition;
use crate::cuts::LinearCut;
use crate::error::{Error, Result};
use crate::rational::{common_denominator, scaled, Q};
use crate::setsys::{GroundSet, Monotonicity, SetSystem, Subset};

/// Declared closure property of an oracle's system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Upper,
    Lower,
    Bimonotone(Bipartition),
    Interval,
    General,
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::Upper => "upper",
            Shape::Lower => "lower",
            Shape::Bimonotone(_) => "bimonotone",
            Shape::Interval => "interval",
            Shape::General => "general",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Bimonotone(split) => write!(f, "bimonotone(I={})", split.part_i()),
            other => f.write_str(other.name()),
        }
    }
}

type Predicate = dyn Fn(Subset) -> bool + Send + Sync;

/// A membership predicate with a declared shape and a shared call counter.
#[derive(Clone)]
pub struct MembershipOracle {
    ground: GroundSet,
    shape: Shape,
    predicate: Arc<Predicate>,
    calls: Arc<AtomicU64>,
}

impl fmt::Debug for MembershipOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MembershipOracle")
            .field("n", &self.ground.n())
            .field("shape", &self.shape)
            .field("calls", &self.calls())
            .finish()
    }
}

impl MembershipOracle {
    pub fn new<F>(ground: GroundSet, shape: Shape, predicate: F) -> Result<Self>
    where
        F: Fn(Subset) -> bool + Send + Sync + 'static,
    {
        if let Shape::Bimonotone(split) = shape {
            if split.ground() != ground {
                return Err(Error::GroundMismatch {
                    left: ground.n(),
                    right: split.ground().n(),
                });
            }
        }
        Ok(MembershipOracle {
            ground,
            shape,
            predicate: Arc::new(predicate),
            calls: Arc::new(AtomicU64::new(0)),
        })
    }

    /// Wraps an explicit system under a caller-chosen shape.
    pub fn from_system(s: SetSystem, shape: Shape) -> Result<Self> {
        let ground = s.ground();
        Self::new(ground, shape, move |t| s.contains(t))
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.n()
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Same predicate under another declared shape; the counter is shared.
    pub fn with_shape(&self, shape: Shape) -> Self {
        MembershipOracle { shape, ..self.clone() }
    }

    /// Evaluates membership and counts the call.
    pub fn call(&self, t: Subset) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed);
        (self.predicate)(t)
    }

    pub fn calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn reset_calls(&self) {
        self.calls.store(0, Ordering::Relaxed);
    }

    /// Materializes the system (`n` within the explicit cap). Not counted.
    pub fn to_system(&self) -> Result<SetSystem> {
        let ground = GroundSet::explicit(self.n())?;
        SetSystem::from_predicate(ground, |t| (self.predicate)(t))
    }
}

/// Wraps an explicit system; the shape is upper, lower, interval or general,
/// in that order of preference.
pub fn explicit_oracle(s: &SetSystem) -> MembershipOracle {
    let shape = match s.classification() {
        Monotonicity::Both | Monotonicity::Upper => Shape::Upper,
        Monotonicity::Lower => Shape::Lower,
        Monotonicity::Neither if crate::approx::is_interval(s) => Shape::Interval,
        Monotonicity::Neither => Shape::General,
    };
    MembershipOracle::from_system(s.clone(), shape).expect("shape matches ground")
}

/// How extremal the returned witness is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Binary search along the ascending element chain only.
    Chain,
    /// Chain search followed by a greedy pass to a truly extremal witness.
    #[default]
    Extremal,
}

/// Largest `t` with `probe(t)` false, given `probe(0)` false; `probe` is
/// monotone false-then-true on `0..=len`.
fn last_false(len: usize, mut probe: impl FnMut(usize) -> bool) -> usize {
    if !probe(len) {
        return len;
    }
    let (mut lo, mut hi) = (0, len);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if probe(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    lo
}

/// Infeasible superset of `seed`, maximal along the chain (and in every
/// direction in extremal mode) for an upper oracle.
fn grow(o: &MembershipOracle, seed: Subset, mode: SearchMode) -> Subset {
    let outside: Vec<usize> = o.ground.complement(seed).indices().collect();
    let chain = |t: usize| Subset::from_indices(outside[..t].iter().copied()) | seed;
    let t = last_false(outside.len(), |t| o.call(chain(t)));
    let mut w = chain(t);
    if mode == SearchMode::Extremal {
        for &e in outside.iter().skip(t + 1) {
            if !o.call(w.with(e)) {
                w = w.with(e);
            }
        }
    }
    w
}

/// Infeasible subset of `seed` for a lower oracle, mirror of [`grow`].
fn shrink(o: &MembershipOracle, seed: Subset, mode: SearchMode) -> Subset {
    let inside: Vec<usize> = seed.indices().collect();
    let chain = |t: usize| seed - Subset::from_indices(inside[..t].iter().copied());
    let t = last_false(inside.len(), |t| o.call(chain(t)));
    let mut w = chain(t);
    if mode == SearchMode::Extremal {
        for &e in inside.iter().skip(t + 1) {
            if !o.call(w.without(e)) {
                w = w.without(e);
            }
        }
    }
    w
}

fn require_infeasible(o: &MembershipOracle, seed: Subset) -> Result<()> {
    o.ground.check(seed)?;
    if o.call(seed) {
        return Err(Error::Precondition(format!("seed {seed} is feasible")));
    }
    Ok(())
}

/// Maximal infeasible superset of `seed` in an upper system.
pub fn grow_maximal_infeasible(o: &MembershipOracle, seed: Subset) -> Result<Subset> {
    grow_infeasible(o, seed, SearchMode::Extremal)
}

pub fn grow_infeasible(o: &MembershipOracle, seed: Subset, mode: SearchMode) -> Result<Subset> {
    require_infeasible(o, seed)?;
    Ok(grow(o, seed, mode))
}

/// Minimal infeasible subset of `seed` in a lower system.
pub fn shrink_minimal_infeasible(o: &MembershipOracle, seed: Subset) -> Result<Subset> {
    shrink_infeasible(o, seed, SearchMode::Extremal)
}

pub fn shrink_infeasible(o: &MembershipOracle, seed: Subset, mode: SearchMode) -> Result<Subset> {
    require_infeasible(o, seed)?;
    Ok(shrink(o, seed, mode))
}

/// Oracle calls allowed for one grow or shrink search after the seed check.
pub fn search_call_budget(n: usize) -> u64 {
    let log = usize::BITS - n.saturating_sub(1).leading_zeros();
    (n + log as usize * n) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationStatus {
    Feasible,
    CutFound,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationResult {
    pub status: SeparationStatus,
    pub cut: Option<LinearCut>,
    pub witness: Option<Subset>,
    pub oracle_calls: u64,
}

pub fn separate(o: &MembershipOracle, point: Subset) -> Result<SeparationResult> {
    separate_with(o, point, SearchMode::Extremal)
}

/// Separates an integer point from the oracle's system by a cut over an
/// extremal infeasible structure containing (or contained in) the point.
pub fn separate_with(o: &MembershipOracle, point: Subset, mode: SearchMode) -> Result<SeparationResult> {
    o.ground.check(point)?;
    if let Shape::Interval | Shape::General = o.shape {
        return Err(Error::UnsupportedShape {
            shape: o.shape.to_string(),
            reason: "separation needs an upper, lower or bimonotone system".into(),
        });
    }
    let start = o.calls();
    if o.call(point) {
        return Ok(SeparationResult {
            status: SeparationStatus::Feasible,
            cut: None,
            witness: None,
            oracle_calls: o.calls() - start,
        });
    }
    let ground = o.ground;
    let (witness, cut) = match o.shape {
        Shape::Upper => {
            let w = grow(o, point, mode);
            (w, LinearCut::covering(ground, ground.complement(w)))
        }
        Shape::Lower => {
            let w = shrink(o, point, mode);
            (w, LinearCut::elimination(ground, w))
        }
        Shape::Bimonotone(split) => {
            let (part_i, part_j) = (split.part_i(), split.part_j());
            let inner = o.clone();
            let flipped = MembershipOracle {
                shape: Shape::Upper,
                predicate: Arc::new(move |t: Subset| (inner.predicate)(t ^ part_j)),
                ..o.clone()
            };
            let w = grow(&flipped, point ^ part_j, mode) ^ part_j;
            let cut = LinearCut::new(ground, part_i - w, w & part_j, 1).expect("disjoint parts");
            (w, cut)
        }
        Shape::Interval | Shape::General => unreachable!(),
    };
    Ok(SeparationResult {
        status: SeparationStatus::CutFound,
        cut: Some(cut),
        witness: Some(witness),
        oracle_calls: o.calls() - start,
    })
}

/// Upper oracle over rows then columns of `r`: `(I, J)` is a member iff the
/// entries of `r` in `I × J` sum to at least `alpha`.
pub fn bilinear_constraint_oracle(r: &[Vec<Q>], alpha: Q) -> Result<MembershipOracle> {
    let rows = r.len();
    let cols = r.first().map_or(0, Vec::len);
    if r.iter().any(|row| row.len() != cols) {
        return Err(Error::Input("matrix rows have different lengths".into()));
    }
    if let Some(q) = r.iter().flatten().find(|q| **q < Q::from_integer(0)) {
        return Err(Error::Input(format!("negative entry {q} breaks monotonicity")));
    }
    let ground = GroundSet::new(rows + cols)?;
    let scale = common_denominator(r.iter().flatten().chain(std::iter::once(&alpha)))?;
    let m: Vec<Vec<i128>> = r
        .iter()
        .map(|row| row.iter().map(|q| scaled(q, scale)).collect())
        .collect();
    let level = scaled(&alpha, scale);
    MembershipOracle::new(ground, Shape::Upper, move |t| {
        let mut sum = 0i128;
        for i in (0..rows).filter(|&i| t.contains(i)) {
            for j in (0..cols).filter(|&j| t.contains(rows + j)) {
                sum += m[i][j];
            }
        }
        sum >= level
    })
}

/// A pair of sets witnessing a broken closure property: `inside` is a member,
/// `outside` is not, although the declared shape requires it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeWitness {
    pub inside: Subset,
    pub outside: Subset,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeAudit {
    pub shape: String,
    pub trials: usize,
    pub violations: Vec<ShapeWitness>,
}

impl ShapeAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// The first violation as an error.
    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(w) => Err(Error::ShapeViolation {
                shape: self.shape,
                inside: w.inside.to_one_based(),
                outside: w.outside.to_one_based(),
            }),
        }
    }
}

/// Random single-element probes of the declared shape. Calls are counted.
pub fn audit_shape(o: &MembershipOracle, trials: usize, seed: u64) -> ShapeAudit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = o.ground.full().bits();
    let n = o.n();
    let mut violations = Vec::new();
    if o.shape != Shape::General {
        for _ in 0..trials {
            let t = Subset::from_bits(rng.gen::<u64>() & full);
            let e = rng.gen_range(0..n);
            let (lo, hi) = (t.without(e), t.with(e));
            let upward = match o.shape {
                Shape::Upper => Some(true),
                Shape::Lower => Some(false),
                Shape::Bimonotone(split) => Some(split.part_i().contains(e)),
                _ => None,
            };
            match upward {
                Some(true) => {
                    if o.call(lo) && !o.call(hi) {
                        violations.push(ShapeWitness {
                            inside: lo,
                            outside: hi,
                        });
                    }
                }
                Some(false) => {
                    if o.call(hi) && !o.call(lo) {
                        violations.push(ShapeWitness {
                            inside: hi,
                            outside: lo,
                        });
                    }
                }
                None => {
                    // sandwich probe: lo ⊆ t ⊆ top with both ends members
                    let top = t | Subset::from_bits(rng.gen::<u64>() & full);
                    let bottom = lo & Subset::from_bits(rng.gen::<u64>());
                    if o.call(bottom) && o.call(top) && !o.call(t) {
                        violations.push(ShapeWitness {
                            inside: bottom,
                            outside: t,
                        });
                    }
                }
            }
        }
    }
    ShapeAudit {
        shape: o.shape.to_string(),
        trials,
        violations,
    }
}
