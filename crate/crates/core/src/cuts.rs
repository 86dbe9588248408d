//! Covering, elimination, bimonotone and no-good inequalities, their generation
//! from set systems, quasi-feasibility and facet certification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::approx::BimonotoneSystem;
use crate::error::{Error, Result};
use crate::setsys::{FlipMask, GroundSet, SetSystem, Subset};

/// `Σ_{i∈pos} x_i + Σ_{j∈neg} (1 − x_j) ≥ rhs` over binary `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinearCut {
    ground: GroundSet,
    pos: Subset,
    neg: Subset,
    rhs: i64,
}

impl LinearCut {
    pub fn new(ground: GroundSet, pos: Subset, neg: Subset, rhs: i64) -> Result<Self> {
        ground.check(pos)?;
        ground.check(neg)?;
        if pos.intersects(neg) {
            return Err(Error::Input(format!("cut uses {} both as x and as 1-x", pos & neg)));
        }
        Ok(LinearCut { ground, pos, neg, rhs })
    }

    /// `Σ_{i∈T} x_i ≥ 1`.
    pub fn covering(ground: GroundSet, t: Subset) -> Self {
        LinearCut {
            ground,
            pos: t,
            neg: Subset::EMPTY,
            rhs: 1,
        }
    }

    /// `Σ_{i∈T} (1 − x_i) ≥ 1`, i.e. `Σ_{i∈T} x_i ≤ |T| − 1`.
    pub fn elimination(ground: GroundSet, t: Subset) -> Self {
        LinearCut {
            ground,
            pos: Subset::EMPTY,
            neg: t,
            rhs: 1,
        }
    }

    /// Excludes exactly the point `t`.
    pub fn no_good(ground: GroundSet, t: Subset) -> Self {
        LinearCut {
            ground,
            pos: ground.complement(t),
            neg: t,
            rhs: 1,
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn pos(&self) -> Subset {
        self.pos
    }

    pub fn neg(&self) -> Subset {
        self.neg
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    /// Left-hand side at the point `x`.
    pub fn lhs(&self, x: Subset) -> i64 {
        ((self.pos & x).len() + (self.neg - x).len()) as i64
    }

    pub fn is_satisfied(&self, x: Subset) -> bool {
        self.lhs(x) >= self.rhs
    }

    pub fn is_tight(&self, x: Subset) -> bool {
        self.lhs(x) == self.rhs
    }

    /// The same inequality written in the variables `x' = θ(x)`.
    pub fn flipped(&self, mask: &FlipMask) -> Self {
        let f = mask.flipped();
        LinearCut {
            ground: self.ground,
            pos: (self.pos - f) | (self.neg & f),
            neg: (self.neg - f) | (self.pos & f),
            rhs: self.rhs,
        }
    }

    /// Integer row form `Σ coef_i x_i ≥ rhs'` with `coef ∈ {−1, 0, 1}`.
    pub fn row(&self) -> (Vec<(usize, i64)>, i64) {
        let mut terms: Vec<(usize, i64)> = self
            .pos
            .indices()
            .map(|i| (i, 1))
            .chain(self.neg.indices().map(|j| (j, -1)))
            .collect();
        terms.sort_unstable();
        (terms, self.rhs - self.neg.len() as i64)
    }

    pub fn to_doc(&self) -> CutDoc {
        CutDoc {
            pos: self.pos.to_one_based(),
            neg: self.neg.to_one_based(),
            rhs: self.rhs,
        }
    }
}

impl fmt::Display for LinearCut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, String)> = self.pos.indices().map(|i| (i, format!("x{}", i + 1))).collect();
        terms.extend(self.neg.indices().map(|j| (j, format!("(1 - x{})", j + 1))));
        terms.sort();
        if terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, (_, t)) in terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, " >= {}", self.rhs)
    }
}

/// External form of a cut with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutDoc {
    pub pos: Vec<usize>,
    pub neg: Vec<usize>,
    pub rhs: i64,
}

impl CutDoc {
    pub fn to_cut(&self, ground: GroundSet) -> Result<LinearCut> {
        LinearCut::new(
            ground,
            Subset::from_one_based(&self.pos, ground)?,
            Subset::from_one_based(&self.neg, ground)?,
            self.rhs,
        )
    }
}

impl Serialize for LinearCut {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_doc().serialize(serializer)
    }
}

/// One covering cut per member of `m(hat overline Ω)`.
pub fn covering_cuts(s: &SetSystem) -> Vec<LinearCut> {
    let ground = s.ground();
    s.complement()
        .element_complement()
        .minimal()
        .canonical_members()
        .into_iter()
        .map(|t| LinearCut::covering(ground, t))
        .collect()
}

/// One elimination cut per member of `m(overline Ω)`.
pub fn elimination_cuts(s: &SetSystem) -> Vec<LinearCut> {
    let ground = s.ground();
    s.complement()
        .minimal()
        .canonical_members()
        .into_iter()
        .map(|t| LinearCut::elimination(ground, t))
        .collect()
}

/// One cut per extremal `(T_I, T_J)` of `hat overline(↑_I↓_J Ω)`, with
/// `pos = T_I` and `neg = J \ T_J`.
pub fn bimonotone_cuts(b: &BimonotoneSystem) -> Vec<LinearCut> {
    let ground = b.closure.ground();
    let (part_i, part_j) = (b.split.part_i(), b.split.part_j());
    crate::approx::extremals(&b.closure.complement().element_complement(), &b.split)
        .canonical_members()
        .into_iter()
        .map(|t| LinearCut {
            ground,
            pos: t & part_i,
            neg: part_j - t,
            rhs: 1,
        })
        .collect()
}

/// Whether every element of the infeasible set `t` can be swapped for an
/// outside element so that the result is feasible.
pub fn is_quasi_feasible(s: &SetSystem, t: Subset) -> Result<bool> {
    s.ground().check(t)?;
    if s.contains(t) {
        return Err(Error::Precondition(format!(
            "{t} is feasible; quasi-feasibility applies to infeasible sets"
        )));
    }
    let outside = s.ground().complement(t);
    Ok(t.indices().all(|a| {
        let base = t.without(a);
        outside.indices().any(|b| s.contains(base.with(b)))
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FacetVerdict {
    Facet,
    NotFacet,
    PreconditionFailed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetReport {
    pub cut: LinearCut,
    pub quasi_feasible: bool,
    pub size_condition: bool,
    pub verdict: FacetVerdict,
}

/// Facet verdict for the covering cut over `cut_index` of an upper system.
pub fn facet_check(s: &SetSystem, cut_index: Subset) -> Result<FacetReport> {
    if !s.is_upper() {
        return Err(Error::Precondition("facet check needs an upper system".into()));
    }
    let family = s.complement().element_complement().minimal();
    if !family.contains(cut_index) {
        return Err(Error::Precondition(format!(
            "{cut_index} is not a minimal covering index of the system"
        )));
    }
    let size_condition = family.members().all(|t| t.len() >= 2);
    let quasi_feasible = is_quasi_feasible(s, s.ground().complement(cut_index))?;
    let verdict = match (size_condition, quasi_feasible) {
        (false, _) => FacetVerdict::PreconditionFailed,
        (true, true) => FacetVerdict::Facet,
        (true, false) => FacetVerdict::NotFacet,
    };
    Ok(FacetReport {
        cut: LinearCut::covering(s.ground(), cut_index),
        quasi_feasible,
        size_condition,
        verdict,
    })
}

/// Largest ground size accepted by [`face_rank_oracle`].
pub const RANK_ORACLE_MAX_N: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FaceRank {
    /// The cut holds at every member point.
    pub valid: bool,
    /// Affine dimension of the tight member points, −1 if there are none.
    pub face_dim: i64,
    /// Affine dimension of all member points, −1 for the empty system.
    pub hull_dim: i64,
}

impl FaceRank {
    pub fn is_facet(&self) -> bool {
        self.valid && self.hull_dim >= 0 && self.face_dim == self.hull_dim - 1
    }
}

/// Exact face and hull dimensions by enumeration of member points.
pub fn face_rank_oracle(s: &SetSystem, cut: &LinearCut) -> Result<FaceRank> {
    if s.n() > RANK_ORACLE_MAX_N {
        return Err(Error::Precondition(format!(
            "rank oracle enumerates points and accepts n <= {RANK_ORACLE_MAX_N}, got {}",
            s.n()
        )));
    }
    if cut.ground() != s.ground() {
        return Err(Error::GroundMismatch {
            left: s.n(),
            right: cut.ground().n(),
        });
    }
    let points: Vec<Subset> = s.members().collect();
    let valid = points.iter().all(|&x| cut.is_satisfied(x));
    let tight: Vec<Subset> = points.iter().copied().filter(|&x| cut.is_tight(x)).collect();
    Ok(FaceRank {
        valid,
        face_dim: affine_dim(&tight, s.n()),
        hull_dim: affine_dim(&points, s.n()),
    })
}

/// Affine dimension of a set of binary points, −1 if empty.
pub fn affine_dim(points: &[Subset], n: usize) -> i64 {
    let Some((&first, rest)) = points.split_first() else {
        return -1;
    };
    let rows: Vec<Vec<i128>> = rest
        .iter()
        .map(|p| {
            (0..n)
                .map(|i| p.contains(i) as i128 - first.contains(i) as i128)
                .collect()
        })
        .collect();
    integer_rank(rows, n) as i64
}

/// Fraction-free Gaussian elimination.
fn integer_rank(mut rows: Vec<Vec<i128>>, cols: usize) -> usize {
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in rank + 1..rows.len() {
            for k in c + 1..cols {
                rows[r][k] = (rows[rank][c] * rows[r][k] - rows[r][c] * rows[rank][k]) / prev;
            }
            rows[r][c] = 0;
        }
        prev = rows[rank][c];
        rank += 1;
    }
    rank
}
