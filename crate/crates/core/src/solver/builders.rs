//! Formulation builders: upper, lower, bimonotone, interval and piecewise.

use num_traits::Signed;

use super::{AffineRow, BipModel, Row, Separator, SolveLimits, SolveReport};
use crate::approx::BimonotoneSystem;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::separation::{separate_with, MembershipOracle, SearchMode, Shape};
use crate::setsys::{GroundSet, SetSystem, Subset};

/// Lazy separator backed by a membership oracle whose ground elements map to
/// model variables `vars[i]`. With a guard variable the cuts only bind when
/// the guard is 1.
#[derive(Clone, Debug)]
pub struct OracleSeparator {
    name: String,
    oracle: MembershipOracle,
    vars: Vec<usize>,
    guard: Option<usize>,
    mode: SearchMode,
}

impl OracleSeparator {
    pub fn new(
        name: impl Into<String>,
        oracle: MembershipOracle,
        vars: Vec<usize>,
        guard: Option<usize>,
    ) -> Result<Self> {
        if vars.len() != oracle.n() {
            return Err(Error::Model(format!(
                "oracle over {} elements mapped to {} variables",
                oracle.n(),
                vars.len()
            )));
        }
        if let Shape::Interval | Shape::General = oracle.shape() {
            return Err(Error::UnsupportedShape {
                shape: oracle.shape().to_string(),
                reason: "lazy separation needs an upper, lower or bimonotone oracle".into(),
            });
        }
        Ok(OracleSeparator {
            name: name.into(),
            oracle,
            vars,
            guard,
            mode: SearchMode::Extremal,
        })
    }

    pub fn with_mode(mut self, mode: SearchMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn oracle(&self) -> &MembershipOracle {
        &self.oracle
    }
}

impl Separator for OracleSeparator {
    fn name(&self) -> &str {
        &self.name
    }

    fn separate(&self, point: &[bool]) -> Result<Vec<Row>> {
        if self.guard.is_some_and(|g| !point[g]) {
            return Ok(Vec::new());
        }
        let t = Subset::from_indices((0..self.vars.len()).filter(|&i| point[self.vars[i]]));
        let res = separate_with(&self.oracle, t, self.mode)?;
        Ok(res
            .cut
            .map(|cut| {
                let row = Row::from_cut(&cut, &self.vars);
                match self.guard {
                    Some(g) => row.guarded(g),
                    None => row,
                }
            })
            .into_iter()
            .collect())
    }
}

fn check_costs(n: usize, costs: &[Q]) -> Result<()> {
    if costs.len() != n {
        return Err(Error::Model(format!("{} costs for {n} variables", costs.len())));
    }
    Ok(())
}

fn single_oracle_model(o: &MembershipOracle, costs: &[Q], want: &str) -> Result<BipModel> {
    if o.shape().name() != want {
        return Err(Error::UnsupportedShape {
            shape: o.shape().to_string(),
            reason: format!("this builder needs a {want} oracle"),
        });
    }
    check_costs(o.n(), costs)?;
    let mut m = BipModel::new(o.n(), o.n())?.with_costs(super::Sense::Min, costs)?;
    m.add_separator(OracleSeparator::new(want, o.clone(), (0..o.n()).collect(), None)?);
    Ok(m)
}

/// Minimizes over an upper system with lazily separated covering cuts.
pub fn build_upper_model(o: &MembershipOracle, costs: &[Q]) -> Result<BipModel> {
    single_oracle_model(o, costs, "upper")
}

/// Minimizes over a lower system with lazily separated elimination cuts.
pub fn build_lower_model(o: &MembershipOracle, costs: &[Q]) -> Result<BipModel> {
    single_oracle_model(o, costs, "lower")
}

/// Minimizes over a bimonotone system with lazily separated bimonotone cuts.
pub fn build_bimonotone_model(o: &MembershipOracle, costs: &[Q]) -> Result<BipModel> {
    single_oracle_model(o, costs, "bimonotone")
}

/// Oracle over the closure of `b`, declared bimonotone under its split.
pub fn bimonotone_oracle(b: &BimonotoneSystem) -> MembershipOracle {
    MembershipOracle::from_system(b.closure.clone(), Shape::Bimonotone(b.split)).expect("split matches closure")
}

/// One interval system given by its upper and lower closures.
#[derive(Clone, Debug)]
pub struct IntervalComponent {
    pub upper: MembershipOracle,
    pub lower: MembershipOracle,
}

impl IntervalComponent {
    pub fn new(upper: MembershipOracle, lower: MembershipOracle) -> Result<Self> {
        if upper.shape() != Shape::Upper || lower.shape() != Shape::Lower {
            return Err(Error::Model(
                "interval components need an upper and a lower oracle".into(),
            ));
        }
        if upper.ground() != lower.ground() {
            return Err(Error::GroundMismatch {
                left: upper.n(),
                right: lower.n(),
            });
        }
        Ok(IntervalComponent { upper, lower })
    }

    pub fn from_system(s: &SetSystem) -> Result<Self> {
        Self::new(
            MembershipOracle::from_system(s.up_closure(), Shape::Upper)?,
            MembershipOracle::from_system(s.down_closure(), Shape::Lower)?,
        )
    }

    pub fn n(&self) -> usize {
        self.upper.n()
    }
}

/// Minimizes over a union of interval systems: selectors `z_k` (variables
/// `n..n+K`) pick the component, whose guarded covering and elimination cuts
/// are separated lazily.
pub fn build_interval_model(components: &[IntervalComponent], costs: &[Q]) -> Result<BipModel> {
    let n = costs.len();
    if let Some(c) = components.iter().find(|c| c.n() != n) {
        return Err(Error::Model(format!(
            "component over {} elements, costs over {n}",
            c.n()
        )));
    }
    let k = components.len();
    let mut m = BipModel::new(n, n + k)?.with_costs(super::Sense::Min, costs)?;
    let vars: Vec<usize> = (0..n).collect();
    for (i, c) in components.iter().enumerate() {
        let z = n + i;
        m.add_separator(OracleSeparator::new(
            format!("upper-{}", i + 1),
            c.upper.clone(),
            vars.clone(),
            Some(z),
        )?);
        m.add_separator(OracleSeparator::new(
            format!("lower-{}", i + 1),
            c.lower.clone(),
            vars.clone(),
            Some(z),
        )?);
    }
    m.add_selector_group((n..n + k).collect());
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// One affine piece `⟨coefs, x⟩ + constant` valid on the region's points.
#[derive(Clone, Debug)]
pub struct PiecewiseRegion {
    pub region: MembershipOracle,
    pub coefs: Vec<Q>,
    pub constant: Q,
    pub direction: Direction,
}

impl PiecewiseRegion {
    pub fn value(&self, t: Subset) -> Q {
        t.indices().fold(self.constant, |a, i| a + self.coefs[i])
    }

    fn max_value(&self) -> Q {
        self.coefs
            .iter()
            .filter(|c| **c > Q::from_integer(0))
            .fold(self.constant, |a, c| a + c)
    }

    fn min_value(&self) -> Q {
        self.coefs
            .iter()
            .filter(|c| **c < Q::from_integer(0))
            .fold(self.constant, |a, c| a + c)
    }
}

/// `1 + Σ_k (Σ_i |c^k_i| + |c^k_0|)`.
pub fn default_big_m(regions: &[PiecewiseRegion]) -> Q {
    regions.iter().fold(Q::from_integer(1), |a, r| {
        r.coefs.iter().fold(a + r.constant.abs(), |a, c| a + c.abs())
    })
}

/// Smallest `M` for which every inactive piece stays below the active one.
fn required_big_m(regions: &[PiecewiseRegion]) -> Q {
    let mut need = Q::from_integer(0);
    for (a, ra) in regions.iter().enumerate() {
        for (b, rb) in regions.iter().enumerate() {
            if a != b {
                need = need.max(ra.max_value() - rb.min_value());
            }
        }
    }
    need
}

fn region_systems(regions: &[PiecewiseRegion], base: &MembershipOracle) -> Result<Vec<SetSystem>> {
    let n = base.n();
    let ground = GroundSet::explicit(n)?;
    for (k, r) in regions.iter().enumerate() {
        if r.region.n() != n || r.coefs.len() != n {
            return Err(Error::Model(format!(
                "region {} does not match the {n} base variables",
                k + 1
            )));
        }
        let zero = Q::from_integer(0);
        let uniform = match r.direction {
            Direction::Increasing => r.coefs.iter().all(|c| *c >= zero),
            Direction::Decreasing => r.coefs.iter().all(|c| *c <= zero),
        };
        if !uniform {
            return Err(Error::Model(format!(
                "region {} coefficients are not sign-uniform for its direction",
                k + 1
            )));
        }
    }
    let mut systems = vec![SetSystem::empty(ground)?; regions.len()];
    for t in ground.subsets() {
        let inside: Vec<usize> = (0..regions.len()).filter(|&k| regions[k].region.call(t)).collect();
        if inside.len() != 1 {
            return Err(Error::Model(format!(
                "regions do not partition the points: {t} lies in {} regions",
                inside.len()
            )));
        }
        if base.call(t) {
            systems[inside[0]].insert(t);
        }
    }
    Ok(systems)
}

/// Minimizes a piecewise monotone objective over `base`: selectors `z_k`
/// (variables `n..n+K`), big-M epigraph rows and guarded cuts over
/// `↑(Ω ∩ X_k)` for increasing pieces or `↓(Ω ∩ X_k)` for decreasing ones.
pub fn build_piecewise_model(
    regions: &[PiecewiseRegion],
    base: &MembershipOracle,
    big_m: Option<Q>,
) -> Result<BipModel> {
    let systems = region_systems(regions, base)?;
    let need = required_big_m(regions);
    let m_val = match big_m {
        Some(m) if m <= need || m <= Q::from_integer(0) => {
            return Err(Error::Model(format!("big-M {m} is too small; need more than {need}")));
        }
        Some(m) => m,
        None => default_big_m(regions),
    };
    let n = base.n();
    let k = regions.len();
    let mut m = BipModel::new(n, n + k)?;
    let vars: Vec<usize> = (0..n).collect();
    for (i, (r, s)) in regions.iter().zip(&systems).enumerate() {
        let z = n + i;
        let mut terms: Vec<(usize, Q)> = r.coefs.iter().copied().enumerate().collect();
        terms.push((z, m_val));
        m.epigraph.push(AffineRow {
            terms,
            constant: r.constant - m_val,
        });
        let (closed, shape) = match r.direction {
            Direction::Increasing => (s.up_closure(), Shape::Upper),
            Direction::Decreasing => (s.down_closure(), Shape::Lower),
        };
        let o = MembershipOracle::from_system(closed, shape)?;
        m.add_separator(OracleSeparator::new(
            format!("piece-{}", i + 1),
            o,
            vars.clone(),
            Some(z),
        )?);
    }
    m.add_selector_group((n..n + k).collect());
    Ok(m)
}

/// Builds and solves the piecewise model, then replaces the reported point
/// by a member of `Ω ∩ X_k` of the same value (the closures may return a
/// point outside `Ω`).
pub fn solve_piecewise(
    regions: &[PiecewiseRegion],
    base: &MembershipOracle,
    big_m: Option<Q>,
    limits: SolveLimits,
) -> Result<SolveReport> {
    let model = build_piecewise_model(regions, base, big_m)?;
    let mut report = super::solve(&model, limits)?;
    let n = base.n();
    if let (Some(x), Some(assign)) = (report.best_point, report.assignment.as_mut()) {
        let systems = region_systems(regions, base)?;
        let k = (0..regions.len())
            .find(|&k| assign[n + k])
            .expect("one selector is active");
        let r = &regions[k];
        let candidates = systems[k].members().filter(|&t| match r.direction {
            Direction::Increasing => t.is_subset_of(x),
            Direction::Decreasing => x.is_subset_of(t),
        });
        let repaired = candidates
            .min_by_key(|&t| (r.value(t), t != x, t.bits()))
            .expect("the closure point dominates a member");
        for (i, slot) in assign.iter_mut().enumerate().take(n) {
            *slot = repaired.contains(i);
        }
        report.best_point = Some(repaired);
    }
    Ok(report)
}
