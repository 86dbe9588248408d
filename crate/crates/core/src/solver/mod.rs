//! A 0/1 branch and bound with propagation over integer rows and lazy cut
//! generation, plus formulation builders.

mod bilinear;
mod builders;
mod search;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cuts::{CutDoc, LinearCut};
use crate::error::{Error, Result};
use crate::rational::{format_q, Q};
use crate::setsys::{GroundSet, SetSystemDoc, Subset};

pub use bilinear::{solve_bilinear_constrained, solve_bilinear_objective, BilinearObjectiveReport, Incumbent};
pub use builders::{
    bimonotone_oracle, build_bimonotone_model, build_interval_model, build_lower_model, build_piecewise_model,
    build_upper_model, default_big_m, solve_piecewise, Direction, IntervalComponent, OracleSeparator, PiecewiseRegion,
};

/// `Σ coef·x_var ≥ rhs` over binary variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Row {
    pub terms: Vec<(usize, i64)>,
    pub rhs: i64,
}

impl Row {
    /// Merges repeated variables, drops zero coefficients and sorts by variable.
    pub fn new(mut terms: Vec<(usize, i64)>, rhs: i64) -> Self {
        terms.sort_unstable_by_key(|t| t.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for (v, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += c,
                _ => merged.push((v, c)),
            }
        }
        merged.retain(|t| t.1 != 0);
        Row { terms: merged, rhs }
    }

    /// A cut over ground elements mapped to model variables by `vars`.
    pub fn from_cut(cut: &LinearCut, vars: &[usize]) -> Self {
        let (terms, rhs) = cut.row();
        Row::new(terms.into_iter().map(|(i, c)| (vars[i], c)).collect(), rhs)
    }

    /// The cut with `(1 − x_guard)` added as an extra satisfying literal, so it
    /// only binds when `x_guard = 1`. Meant for cuts with right-hand side 1.
    pub fn guarded(mut self, guard: usize) -> Self {
        self.terms.push((guard, -1));
        Row::new(self.terms, self.rhs - 1)
    }

    pub fn activity(&self, x: &[bool]) -> i64 {
        self.terms.iter().filter(|t| x[t.0]).map(|t| t.1).sum()
    }

    pub fn is_satisfied(&self, x: &[bool]) -> bool {
        self.activity(x) >= self.rhs
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.0).max()
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (k, &(v, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            let gap = if k > 0 { " " } else { "" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{gap}{sign}{gap}v{}", v + 1)?;
            } else {
                write!(f, "{gap}{sign}{gap}{mag} v{}", v + 1)?;
            }
        }
        write!(f, " >= {}", self.rhs)
    }
}

/// `constant + Σ coef·x_var`, one piece of the epigraph objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineRow {
    pub terms: Vec<(usize, Q)>,
    pub constant: Q,
}

/// Lazy constraint generator called at integer points.
pub trait Separator: Send + Sync {
    fn name(&self) -> &str;

    /// Rows violated by `point` (a full assignment), or nothing if the point
    /// is accepted. Every returned row must be valid for the target set.
    fn separate(&self, point: &[bool]) -> Result<Vec<Row>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Min,
    Max,
}

/// Binary program: linear costs (plus an optional max-of-affine epigraph
/// term), static rows, lazy separators and exactly-one selector groups.
#[derive(Clone)]
pub struct BipModel {
    n_vars: usize,
    /// Number of leading variables reported as the solution point.
    primary: usize,
    pub sense: Sense,
    pub costs: Vec<Q>,
    pub constant: Q,
    pub rows: Vec<Row>,
    pub separators: Vec<Arc<dyn Separator>>,
    pub selector_groups: Vec<Vec<usize>>,
    pub epigraph: Vec<AffineRow>,
}

impl fmt::Debug for BipModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipModel")
            .field("n_vars", &self.n_vars)
            .field("primary", &self.primary)
            .field("sense", &self.sense)
            .field("rows", &self.rows.len())
            .field(
                "separators",
                &self.separators.iter().map(|s| s.name().to_owned()).collect::<Vec<_>>(),
            )
            .field("selector_groups", &self.selector_groups)
            .field("epigraph", &self.epigraph.len())
            .finish()
    }
}

impl BipModel {
    /// `primary` leading variables form the reported point; the remaining
    /// `n_vars − primary` are auxiliary.
    pub fn new(primary: usize, n_vars: usize) -> Result<Self> {
        if primary > crate::setsys::MAX_GROUND || primary > n_vars {
            return Err(Error::Model(format!(
                "{primary} primary variables over {n_vars} total; at most {} primary",
                crate::setsys::MAX_GROUND
            )));
        }
        Ok(BipModel {
            n_vars,
            primary,
            sense: Sense::Min,
            costs: vec![Q::from_integer(0); n_vars],
            constant: Q::from_integer(0),
            rows: Vec::new(),
            separators: Vec::new(),
            selector_groups: Vec::new(),
            epigraph: Vec::new(),
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn primary(&self) -> usize {
        self.primary
    }

    pub fn with_costs(mut self, sense: Sense, costs: &[Q]) -> Result<Self> {
        if costs.len() > self.n_vars {
            return Err(Error::Model(format!(
                "{} costs for {} variables",
                costs.len(),
                self.n_vars
            )));
        }
        self.sense = sense;
        self.costs[..costs.len()].copy_from_slice(costs);
        Ok(self)
    }

    /// Adds a cut over the primary variables.
    pub fn add_cut(&mut self, cut: &LinearCut) -> Result<()> {
        if cut.ground().n() > self.primary {
            return Err(Error::Model(format!(
                "cut over {} elements but only {} primary variables",
                cut.ground().n(),
                self.primary
            )));
        }
        let vars: Vec<usize> = (0..cut.ground().n()).collect();
        self.rows.push(Row::from_cut(cut, &vars));
        Ok(())
    }

    pub fn add_row(&mut self, row: Row) {
        self.rows.push(row);
    }

    pub fn add_separator<S: Separator + 'static>(&mut self, sep: S) {
        self.separators.push(Arc::new(sep));
    }

    /// Exactly one variable of `group` is 1.
    pub fn add_selector_group(&mut self, group: Vec<usize>) {
        self.selector_groups.push(group);
    }

    /// The objective at a full assignment, without epigraph terms if there
    /// are none.
    pub fn evaluate(&self, x: &[bool]) -> Q {
        let lin: Q = self
            .costs
            .iter()
            .zip(x)
            .filter(|(_, &b)| b)
            .map(|(c, _)| *c)
            .fold(self.constant, |a, b| a + b);
        let epi = self
            .epigraph
            .iter()
            .map(|r| r.terms.iter().filter(|t| x[t.0]).fold(r.constant, |a, t| a + t.1))
            .max();
        lin + epi.unwrap_or(Q::from_integer(0))
    }

    /// Static feasibility of a full assignment (rows and selector groups).
    pub fn satisfies_static(&self, x: &[bool]) -> bool {
        self.rows.iter().all(|r| r.is_satisfied(x))
            && self
                .selector_groups
                .iter()
                .all(|g| g.iter().filter(|&&v| x[v]).count() == 1)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let bad_var = |v: usize| v >= self.n_vars;
        if self.costs.len() != self.n_vars {
            return Err(Error::Model("cost vector length differs from variable count".into()));
        }
        for r in &self.rows {
            if r.terms.iter().any(|t| bad_var(t.0)) {
                return Err(Error::Model(format!(
                    "row {r} references a variable beyond {}",
                    self.n_vars
                )));
            }
        }
        let mut seen = vec![false; self.n_vars];
        for g in &self.selector_groups {
            for &v in g {
                if bad_var(v) {
                    return Err(Error::Model(format!("selector variable {} out of range", v + 1)));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Model(format!(
                        "variable {} appears in two selector groups",
                        v + 1
                    )));
                }
            }
        }
        for e in &self.epigraph {
            if e.terms.iter().any(|t| bad_var(t.0)) {
                return Err(Error::Model("epigraph row references an unknown variable".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveLimits {
    /// Stop after this many search nodes.
    pub node_limit: Option<u64>,
    /// Refuse models with more variables than this.
    pub max_vars: usize,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            node_limit: None,
            max_vars: 4096,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    NodeLimit,
}

/// Objective value with the `+∞` (infeasible minimization) and `−∞`
/// (infeasible maximization) conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveValue {
    Finite(Q),
    PosInf,
    NegInf,
}

impl ObjectiveValue {
    pub fn infeasible(sense: Sense) -> Self {
        match sense {
            Sense::Min => ObjectiveValue::PosInf,
            Sense::Max => ObjectiveValue::NegInf,
        }
    }

    pub fn finite(&self) -> Option<Q> {
        match self {
            ObjectiveValue::Finite(q) => Some(*q),
            _ => None,
        }
    }
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveValue::Finite(q) => f.write_str(&format_q(q)),
            ObjectiveValue::PosInf => f.write_str("+inf"),
            ObjectiveValue::NegInf => f.write_str("-inf"),
        }
    }
}

impl Serialize for ObjectiveValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ObjectiveValue::Finite(q) => crate::rational::serde_q::serialize(q, s),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    /// The primary part of the best assignment.
    pub best_point: Option<Subset>,
    /// The full best assignment including auxiliary variables; omitted from
    /// JSON.
    #[serde(skip)]
    pub assignment: Option<Vec<bool>>,
    pub objective_value: ObjectiveValue,
    pub nodes: u64,
    pub cuts_added: u64,
    pub separator_calls: u64,
    /// Cuts added per separator name.
    pub cuts_by_separator: BTreeMap<String, u64>,
    /// Every lazily added row, in order.
    #[serde(skip)]
    pub lazy_rows: Vec<Row>,
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

pub fn solve(model: &BipModel, limits: SolveLimits) -> Result<SolveReport> {
    search::run(model, limits)
}

/// External model form over at most 64 variables with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub n: usize,
    #[serde(default)]
    pub sense: Sense,
    #[serde(with = "crate::rational::serde_q_vec")]
    pub costs: Vec<Q>,
    #[serde(default = "zero_q", with = "crate::rational::serde_q")]
    pub constant: Q,
    #[serde(default)]
    pub cuts: Vec<CutDoc>,
    #[serde(default)]
    pub lazy: Vec<LazyDoc>,
}

fn zero_q() -> Q {
    Q::from_integer(0)
}

/// A lazily separated explicit system over the model's variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LazyDoc {
    pub system: SetSystemDoc,
    /// `upper`, `lower` or `bimonotone`.
    pub shape: String,
    /// Part `I` of the split (1-based) for the bimonotone shape.
    #[serde(default)]
    pub split: Vec<usize>,
}

impl ModelDoc {
    pub fn to_model(&self) -> Result<BipModel> {
        use crate::separation::{MembershipOracle, Shape};
        let ground = GroundSet::new(self.n)?;
        if self.costs.len() != self.n {
            return Err(Error::Model(format!(
                "{} costs for {} variables",
                self.costs.len(),
                self.n
            )));
        }
        let mut m = BipModel::new(self.n, self.n)?.with_costs(self.sense, &self.costs)?;
        m.constant = self.constant;
        for c in &self.cuts {
            m.add_cut(&c.to_cut(ground)?)?;
        }
        for (k, lazy) in self.lazy.iter().enumerate() {
            let s = lazy.system.to_system()?;
            if s.n() != self.n {
                return Err(Error::Model(format!(
                    "lazy system {} is over {} elements, model over {}",
                    k + 1,
                    s.n(),
                    self.n
                )));
            }
            let shape = match lazy.shape.as_str() {
                "upper" => Shape::Upper,
                "lower" => Shape::Lower,
                "bimonotone" => Shape::Bimonotone(crate::approx::Bipartition::from_one_based(ground, &lazy.split)?),
                other => return Err(Error::Model(format!("unknown lazy shape {other:?}"))),
            };
            let closed = match shape {
                Shape::Upper => s.is_upper(),
                Shape::Lower => s.is_lower(),
                Shape::Bimonotone(split) => crate::approx::bimonotone_closure(&s, &split)?.closure == s,
                _ => false,
            };
            if !closed {
                return Err(Error::Model(format!(
                    "lazy system {} is not {} closed",
                    k + 1,
                    lazy.shape
                )));
            }
            let o = MembershipOracle::from_system(s, shape)?;
            m.add_separator(OracleSeparator::new(
                format!("lazy-{}", k + 1),
                o,
                (0..self.n).collect(),
                None,
            )?);
        }
        Ok(m)
    }
}
