//! Tightest monotone inner/outer approximations, interval systems and
//! bimonotone closures.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::setsys::{GroundSet, SetSystem, Subset};

/// Inner and outer approximations of a system by upper and by lower systems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneApprox {
    pub inner_upper: SetSystem,
    pub outer_upper: SetSystem,
    pub inner_lower: SetSystem,
    pub outer_lower: SetSystem,
    pub exact_upper: bool,
    pub exact_lower: bool,
}

/// `(𝒞(hat overline Ω), 𝒞(hat overline ↑Ω))`.
pub fn upper_approx(s: &SetSystem) -> (SetSystem, SetSystem) {
    let inner = s.complement().element_complement().cut();
    let outer = s.up_closure().complement().element_complement().cut();
    (inner, outer)
}

/// `(𝒢(hat overline Ω), 𝒢(hat overline ↓Ω))`.
pub fn lower_approx(s: &SetSystem) -> (SetSystem, SetSystem) {
    let inner = s.complement().element_complement().cocut();
    let outer = s.down_closure().complement().element_complement().cocut();
    (inner, outer)
}

pub fn monotone_approx(s: &SetSystem) -> MonotoneApprox {
    let (inner_upper, outer_upper) = upper_approx(s);
    let (inner_lower, outer_lower) = lower_approx(s);
    let exact_upper = inner_upper == *s && outer_upper == *s;
    let exact_lower = inner_lower == *s && outer_lower == *s;
    MonotoneApprox {
        inner_upper,
        outer_upper,
        inner_lower,
        outer_lower,
        exact_upper,
        exact_lower,
    }
}

/// One inclusion `inner ⊆ target` from the embedding corollary.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingVariant {
    pub name: &'static str,
    pub inner: SetSystem,
    pub target: SetSystem,
    /// `inner ⊆ target`.
    pub holds: bool,
    /// `inner = target`.
    pub exact: bool,
    /// The monotonicity condition under which equality is predicted.
    pub predicted_exact: bool,
}

/// The six inner approximations of `overline Ω`, `hat Ω` and `hat overline Ω`
/// by upper (`𝒞`) and lower (`𝒢`) systems.
pub fn embedding_variants(s: &SetSystem) -> Vec<EmbeddingVariant> {
    let comp = s.complement();
    let hat = s.element_complement();
    let hat_comp = comp.element_complement();
    let upper = s.is_upper();
    let lower = s.is_lower();
    let make = |name, inner: SetSystem, target: &SetSystem, predicted_exact| EmbeddingVariant {
        name,
        holds: inner.is_subset_of(target),
        exact: inner == *target,
        inner,
        target: target.clone(),
        predicted_exact,
    };
    vec![
        make("C(hat Ω) ⊆ overline Ω", hat.cut(), &comp, lower),
        make("C(overline Ω) ⊆ hat Ω", comp.cut(), &hat, lower),
        make("C(Ω) ⊆ hat overline Ω", s.cut(), &hat_comp, upper),
        make("G(hat Ω) ⊆ overline Ω", hat.cocut(), &comp, upper),
        make("G(overline Ω) ⊆ hat Ω", comp.cocut(), &hat, upper),
        make("G(Ω) ⊆ hat overline Ω", s.cocut(), &hat_comp, lower),
    ]
}

/// `↑Ω ∩ ↓Ω`, the smallest interval system containing `s`.
pub fn interval_closure(s: &SetSystem) -> SetSystem {
    s.up_closure().intersection(&s.down_closure()).expect("same ground set")
}

pub fn is_interval(s: &SetSystem) -> bool {
    interval_closure(s) == *s
}

/// A bipartition `(I, J)` of the ground set; either part may be empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    ground: GroundSet,
    part_i: Subset,
    part_j: Subset,
}

impl Bipartition {
    /// `(I, Δ \ I)`.
    pub fn from_i(ground: GroundSet, part_i: Subset) -> Result<Self> {
        ground.check(part_i).map_err(|_| {
            Error::Bipartition(format!(
                "part I = {part_i} leaves the ground set of size {}",
                ground.n()
            ))
        })?;
        Ok(Bipartition {
            ground,
            part_i,
            part_j: ground.complement(part_i),
        })
    }

    pub fn new(ground: GroundSet, part_i: Subset, part_j: Subset) -> Result<Self> {
        if part_i.intersects(part_j) {
            return Err(Error::Bipartition(format!("parts overlap in {}", part_i & part_j)));
        }
        if part_i | part_j != ground.full() {
            return Err(Error::Bipartition(format!(
                "parts {part_i} and {part_j} do not cover the ground set of size {}",
                ground.n()
            )));
        }
        Ok(Bipartition { ground, part_i, part_j })
    }

    /// Parses 1-based labels of `I`.
    pub fn from_one_based(ground: GroundSet, labels_i: &[usize]) -> Result<Self> {
        let part_i = Subset::from_one_based(labels_i, ground).map_err(|e| Error::Bipartition(e.to_string()))?;
        Self::from_i(ground, part_i)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn part_i(&self) -> Subset {
        self.part_i
    }

    pub fn part_j(&self) -> Subset {
        self.part_j
    }

    pub fn is_trivial(&self) -> bool {
        self.part_i.is_empty() || self.part_j.is_empty()
    }
}

/// `↑_I↓_J` closure of a source system together with its extremal members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimonotoneSystem {
    pub split: Bipartition,
    pub closure: SetSystem,
    pub extremals: SetSystem,
}

/// Members `T` of `s` such that removing any `i ∈ T_I` or adding any `j ∈ J \ T_J`
/// leaves `s`.
pub fn extremals(s: &SetSystem, split: &Bipartition) -> SetSystem {
    s.extremal(split.part_i(), split.part_j())
}

pub fn bimonotone_closure(s: &SetSystem, split: &Bipartition) -> Result<BimonotoneSystem> {
    if split.ground() != s.ground() {
        return Err(Error::Bipartition(format!(
            "split is over {} elements but the system over {}",
            split.ground().n(),
            s.n()
        )));
    }
    let closure = s.mixed_closure(split.part_i(), split.part_j());
    let extremals = extremals(&closure, split);
    Ok(BimonotoneSystem {
        split: *split,
        closure,
        extremals,
    })
}

impl BimonotoneSystem {
    /// Whether `t` lies in the closure.
    pub fn contains(&self, t: Subset) -> bool {
        self.closure.contains(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DecomposeStrategy {
    /// One block `{T}` per member.
    Singletons,
    /// Grows a block `[A, B]` around each uncovered member, widening `B`
    /// upward and then `A` downward while the block stays inside the system.
    #[default]
    Greedy,
}

/// `{T : lo ⊆ T ⊆ hi}` is contained in `s`.
fn block_inside(s: &SetSystem, lo: Subset, hi: Subset) -> bool {
    let free = (hi - lo).bits();
    let mut sub = free;
    loop {
        if !s.contains(Subset::from_bits(lo.bits() | sub)) {
            return false;
        }
        if sub == 0 {
            return true;
        }
        sub = (sub - 1) & free;
    }
}

fn block(ground: GroundSet, lo: Subset, hi: Subset) -> SetSystem {
    let up = SetSystem::from_members(ground, [lo])
        .expect("ground validated")
        .up_closure();
    let down = SetSystem::from_members(ground, [hi])
        .expect("ground validated")
        .down_closure();
    up.intersection(&down).expect("same ground set")
}

/// Splits `s` into interval systems whose union is `s`. An interval input is
/// returned unchanged as a single component (an empty input included).
pub fn interval_decompose(s: &SetSystem, strategy: DecomposeStrategy) -> Vec<SetSystem> {
    if is_interval(s) {
        return vec![s.clone()];
    }
    let ground = s.ground();
    match strategy {
        DecomposeStrategy::Singletons => s
            .members()
            .map(|t| SetSystem::from_members(ground, [t]).expect("ground validated"))
            .collect(),
        DecomposeStrategy::Greedy => {
            let mut uncovered = s.clone();
            let mut out = Vec::new();
            loop {
                let Some(t) = uncovered.members().next() else { break };
                let (mut lo, mut hi) = (t, t);
                for e in ground.complement(t).indices() {
                    if block_inside(s, lo, hi.with(e)) {
                        hi = hi.with(e);
                    }
                }
                for e in t.indices() {
                    if block_inside(s, lo.without(e), hi) {
                        lo = lo.without(e);
                    }
                }
                let b = block(ground, lo, hi);
                uncovered = uncovered.difference(&b).expect("same ground set");
                out.push(b);
            }
            out
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApproxMode {
    Upper,
    Lower,
    Interval,
    Bimonotone(Bipartition),
}

/// Inner/outer approximations with exactness flags. Interval and bimonotone
/// modes have only an outer system (the closure); the interval report lists
/// a decomposition and the bimonotone one the extremal members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApproxReport {
    pub mode: &'static str,
    pub input: SetSystem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<Subset>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner: Option<SetSystem>,
    pub outer: SetSystem,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_inner: Option<bool>,
    pub exact_outer: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<SetSystem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extremals: Option<SetSystem>,
}

impl ApproxReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn approx_report(s: &SetSystem, mode: ApproxMode) -> Result<ApproxReport> {
    let base = |mode, outer: SetSystem| ApproxReport {
        mode,
        input: s.clone(),
        split: None,
        inner: None,
        exact_inner: None,
        exact_outer: outer == *s,
        outer,
        components: None,
        extremals: None,
    };
    let with_inner = |mode, (inner, outer): (SetSystem, SetSystem)| ApproxReport {
        exact_inner: Some(inner == *s),
        inner: Some(inner),
        ..base(mode, outer)
    };
    Ok(match mode {
        ApproxMode::Upper => with_inner("upper", upper_approx(s)),
        ApproxMode::Lower => with_inner("lower", lower_approx(s)),
        ApproxMode::Interval => ApproxReport {
            components: Some(interval_decompose(s, DecomposeStrategy::Greedy)),
            ..base("interval", interval_closure(s))
        },
        ApproxMode::Bimonotone(split) => {
            let b = bimonotone_closure(s, &split)?;
            ApproxReport {
                split: Some(split.part_i()),
                extremals: Some(b.extremals),
                ..base("bimonotone", b.closure)
            }
        }
    })
}
