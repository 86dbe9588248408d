//! Bilinear terms `⟨x, R y⟩` with nonnegative `R`, either as a constraint
//! `⟨x, R y⟩ ≥ α` or as the objective.

use std::sync::Mutex;

use serde::Serialize;

use super::{
    build_upper_model, BipModel, ObjectiveValue, OracleSeparator, Row, Sense, Separator, SolveLimits, SolveReport,
    SolveStatus,
};
use crate::cuts::LinearCut;
use crate::error::{Error, Result};
use crate::rational::{serde_q, Q};
use crate::separation::{bilinear_constraint_oracle, shrink_minimal_infeasible, MembershipOracle, Shape};
use crate::setsys::{GroundSet, Subset};

fn dims(r: &[Vec<Q>]) -> Result<(usize, usize)> {
    let rows = r.len();
    let cols = r.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(Error::Input("empty matrix".into()));
    }
    if r.iter().any(|row| row.len() != cols) {
        return Err(Error::Input("matrix rows have different lengths".into()));
    }
    if let Some(q) = r.iter().flatten().find(|q| **q < Q::from_integer(0)) {
        return Err(Error::Input(format!("negative entry {q} breaks monotonicity")));
    }
    Ok((rows, cols))
}

/// `⟨x, R y⟩` for the point whose first `rows` elements are `x`.
fn bilinear_value(r: &[Vec<Q>], rows: usize, t: Subset) -> Q {
    let mut v = Q::from_integer(0);
    for (_, row) in r.iter().enumerate().filter(|(i, _)| t.contains(*i)) {
        for (j, q) in row.iter().enumerate() {
            if t.contains(rows + j) {
                v += q;
            }
        }
    }
    v
}

/// Minimizes `⟨costs_x, x⟩ + ⟨costs_y, y⟩` subject to `⟨x, R y⟩ ≥ α` (as
/// lazily separated covering cuts) and the given static cuts over `(x, y)`.
pub fn solve_bilinear_constrained(
    r: &[Vec<Q>],
    alpha: Q,
    costs_x: &[Q],
    costs_y: &[Q],
    extra_cuts: &[LinearCut],
    limits: SolveLimits,
) -> Result<SolveReport> {
    let (rows, cols) = dims(r)?;
    if costs_x.len() != rows || costs_y.len() != cols {
        return Err(Error::Model(format!(
            "costs of lengths {} and {} for a {rows}x{cols} matrix",
            costs_x.len(),
            costs_y.len()
        )));
    }
    let o = bilinear_constraint_oracle(r, alpha)?;
    let costs: Vec<Q> = costs_x.iter().chain(costs_y).copied().collect();
    let mut m = build_upper_model(&o, &costs)?;
    for c in extra_cuts {
        m.add_cut(c)?;
    }
    super::solve(&m, limits)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Incumbent {
    pub point: Subset,
    #[serde(with = "serde_q")]
    pub value: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BilinearObjectiveReport {
    /// Final report with the best incumbent filled in.
    pub report: SolveReport,
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    /// Whether the result is provably optimal rather than within `epsilon`.
    pub exact: bool,
    /// Improving incumbents in the order found.
    pub incumbents: Vec<Incumbent>,
}

/// Rejects every point reaching it: records the point as an incumbent if it
/// improves, then cuts off everything with value above `z̄ − ε`.
struct LevelSeparator {
    r: Vec<Vec<Q>>,
    rows: usize,
    ground: GroundSet,
    epsilon: Q,
    incumbents: Mutex<Vec<Incumbent>>,
}

impl Separator for LevelSeparator {
    fn name(&self) -> &str {
        "level"
    }

    fn separate(&self, point: &[bool]) -> Result<Vec<Row>> {
        let n = self.ground.n();
        let t = Subset::from_indices((0..n).filter(|&i| point[i]));
        let value = bilinear_value(&self.r, self.rows, t);
        let mut inc = self.incumbents.lock().expect("incumbent lock");
        if inc.last().is_none_or(|b| value <= b.value - self.epsilon) {
            inc.push(Incumbent { point: t, value });
        }
        let level = inc.last().expect("an incumbent exists").value - self.epsilon;
        drop(inc);
        let r = self.r.clone();
        let rows = self.rows;
        let below = MembershipOracle::new(self.ground, Shape::Lower, move |s| bilinear_value(&r, rows, s) <= level)?;
        let w = shrink_minimal_infeasible(&below, t)?;
        let vars: Vec<usize> = (0..n).collect();
        Ok(vec![Row::from_cut(&LinearCut::elimination(self.ground, w), &vars)])
    }
}

/// Minimizes `⟨x, R y⟩` over the feasibility oracle (any point if `None`)
/// by repeatedly solving a master problem with the surrogate costs
/// `⟨R·1, x⟩ + ⟨Rᵀ·1, y⟩` and cutting off the level set above the incumbent.
/// The search ends when the master becomes infeasible.
pub fn solve_bilinear_objective(
    r: &[Vec<Q>],
    feasibility: Option<&MembershipOracle>,
    epsilon: Option<Q>,
    limits: SolveLimits,
) -> Result<BilinearObjectiveReport> {
    let (rows, cols) = dims(r)?;
    let ground = GroundSet::new(rows + cols)?;
    let integral = r.iter().flatten().all(|q| q.is_integer());
    let epsilon = epsilon.unwrap_or(if integral {
        Q::from_integer(1)
    } else {
        Q::new(1, 1_000_000)
    });
    if epsilon <= Q::from_integer(0) {
        return Err(Error::Input(format!("epsilon must be positive, got {epsilon}")));
    }
    let mut costs: Vec<Q> = r.iter().map(|row| row.iter().sum()).collect();
    costs.extend((0..cols).map(|j| r.iter().map(|row| row[j]).sum::<Q>()));
    let mut m = BipModel::new(rows + cols, rows + cols)?.with_costs(Sense::Min, &costs)?;
    if let Some(o) = feasibility {
        if o.n() != rows + cols {
            return Err(Error::GroundMismatch {
                left: o.n(),
                right: rows + cols,
            });
        }
        m.add_separator(OracleSeparator::new(
            "feasibility",
            o.clone(),
            (0..rows + cols).collect(),
            None,
        )?);
    }
    let level = std::sync::Arc::new(LevelSeparator {
        r: r.to_vec(),
        rows,
        ground,
        epsilon,
        incumbents: Mutex::new(Vec::new()),
    });
    m.separators.push(level.clone());
    let mut report = super::solve(&m, limits)?;
    let incumbents = level.incumbents.lock().expect("incumbent lock").clone();
    if let Some(best) = incumbents.last() {
        report.best_point = Some(best.point);
        report.assignment = Some((0..rows + cols).map(|i| best.point.contains(i)).collect());
        report.objective_value = ObjectiveValue::Finite(best.value);
        if report.status == SolveStatus::Infeasible {
            report.status = SolveStatus::Optimal;
        }
    }
    Ok(BilinearObjectiveReport {
        report,
        epsilon,
        exact: integral && epsilon <= Q::from_integer(1),
        incumbents,
    })
}
