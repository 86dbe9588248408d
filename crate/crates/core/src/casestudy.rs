//! Site selection under scenario chance constraints: choose an independent
//! set of sites maximizing total benefit such that every vertex is supplied
//! in enough sampled scenarios.
//!
//! Scenario data is stored in integer micro-units (`value · 10^6`), so every
//! model the solver sees is exact.

use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{find_violated_cliques, Graph, GraphDoc};
use crate::rational::{format_q, serde_q, Q};
use crate::separation::{separate, MembershipOracle, Shape};
use crate::setsys::{GroundSet, Subset};
use crate::solver::{solve, BipModel, Row, Sense, Separator, SolveLimits, SolveReport, SolveStatus};

pub const SCALE: i64 = 1_000_000;
pub const MAX_SITES: usize = 16;
pub const MAX_SCENARIOS: usize = 200;
/// Demands are drawn from `0..=DEMAND_MAX` micro-units.
pub const DEMAND_MAX: i64 = SCALE / 10;
pub const BENEFIT_RANGE: i64 = 20;
const GRAPH_RETRIES: usize = 10_000;

/// Sampled data for one vertex `j`: `a[k][p]` is the supply from
/// `support[p]` in scenario `k`, `b[k]` the demand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexScenarios {
    /// The closed neighbourhood of `j`, ascending, 1-based.
    pub support: Vec<usize>,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub seed: u64,
    pub density: f64,
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    pub k: usize,
    pub graph: GraphDoc,
    pub benefits: Vec<i64>,
    pub scenarios: Vec<VertexScenarios>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Strategy {
    NoCut,
    ClqCut,
    SatCut,
    AllCut,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [Strategy::NoCut, Strategy::ClqCut, Strategy::SatCut, Strategy::AllCut];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::NoCut => "NoCut",
            Strategy::ClqCut => "ClqCut",
            Strategy::SatCut => "SatCut",
            Strategy::AllCut => "AllCut",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Input(format!("unknown strategy {s:?}")))
    }
}

/// Inverse-transform Beta(2,2) draw in micro-units: the smallest `v` with
/// `F(v / 10^6) ≥ u / 2^32`, where `F(x) = 3x² − 2x³`, found by integer
/// bisection.
pub fn beta22_micro(u: u32) -> i64 {
    let d = SCALE as i128;
    let target = (u as i128) * d * d * d;
    let cdf_ge = |v: i128| (3 * v * v * d - 2 * v * v * v) << 32 >= target;
    let (mut lo, mut hi) = (0i128, d);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if cdf_ge(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo as i64
}

fn connected_random_graph(n: usize, density: f64, rng: &mut ChaCha8Rng) -> Result<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let m = (density * pairs.len() as f64).round() as usize;
    if n > 1 && m + 1 < n {
        return Err(Error::Input(format!(
            "{m} edges cannot connect {n} vertices; raise the density"
        )));
    }
    for _ in 0..GRAPH_RETRIES {
        let mut idx = sample(rng, pairs.len(), m).into_vec();
        idx.sort_unstable();
        let g = Graph::new(n, idx.into_iter().map(|e| pairs[e]).collect())?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::Input(format!(
        "no connected graph found for n={n}, density={density}"
    )))
}

/// Draws a seeded instance: a connected `G(n, m)` graph with
/// `m = round(density · n(n−1)/2)`, benefits uniform on `{−20, …, 20}`,
/// Beta(2,2) supplies over closed neighbourhoods and demands uniform on
/// `[0, 0.1]`.
pub fn generate_instance(n: usize, density: f64, epsilon: Q, k: usize, seed: u64) -> Result<Instance> {
    if n == 0 || n > MAX_SITES {
        return Err(Error::Input(format!("site count {n} outside 1..={MAX_SITES}")));
    }
    if k == 0 || k > MAX_SCENARIOS {
        return Err(Error::Input(format!("scenario count {k} outside 1..={MAX_SCENARIOS}")));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Input(format!("density {density} outside [0, 1]")));
    }
    if epsilon < Q::from_integer(0) || epsilon >= Q::from_integer(1) {
        return Err(Error::Input(format!("epsilon {} outside [0, 1)", format_q(&epsilon))));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = connected_random_graph(n, density, &mut rng)?;
    let benefits: Vec<i64> = (0..n).map(|_| rng.gen_range(-BENEFIT_RANGE..=BENEFIT_RANGE)).collect();
    let scenarios = (0..n)
        .map(|j| {
            let support = graph.closed_neighborhood(j);
            let mut a = Vec::with_capacity(k);
            let mut b = Vec::with_capacity(k);
            for _ in 0..k {
                a.push(support.indices().map(|_| beta22_micro(rng.next_u32())).collect());
                b.push(rng.gen_range(0..=DEMAND_MAX));
            }
            VertexScenarios {
                support: support.to_one_based(),
                a,
                b,
            }
        })
        .collect();
    Ok(Instance {
        seed,
        density,
        epsilon,
        k,
        graph: graph.to_doc(),
        benefits,
        scenarios,
    })
}

impl Instance {
    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn to_graph(&self) -> Result<Graph> {
        self.graph.to_graph()
    }

    /// Scenarios that must be satisfied at each vertex: `⌈(1−ε)K⌉`.
    pub fn need(&self) -> usize {
        let q = (Q::from_integer(1) - self.epsilon) * Q::from_integer(self.k as i64);
        q.ceil().to_integer().max(0) as usize
    }

    /// Structural checks on a deserialized instance.
    pub fn validate(&self) -> Result<()> {
        let g = self.to_graph()?;
        let n = g.n();
        if self.benefits.len() != n || self.scenarios.len() != n {
            return Err(Error::Input(
                "benefit or scenario list does not match the vertex count".into(),
            ));
        }
        for (j, sc) in self.scenarios.iter().enumerate() {
            if sc.support != g.closed_neighborhood(j).to_one_based() {
                return Err(Error::Input(format!(
                    "support of vertex {} is not its closed neighbourhood",
                    j + 1
                )));
            }
            if sc.a.len() != self.k || sc.b.len() != self.k {
                return Err(Error::Input(format!(
                    "vertex {} does not have {} scenarios",
                    j + 1,
                    self.k
                )));
            }
            let bad_a =
                sc.a.iter()
                    .any(|row| row.len() != sc.support.len() || row.iter().any(|&v| !(0..=SCALE).contains(&v)));
            let bad_b = sc.b.iter().any(|&v| !(0..=DEMAND_MAX).contains(&v));
            if bad_a || bad_b {
                return Err(Error::Input(format!("scenario data of vertex {} out of range", j + 1)));
            }
        }
        Ok(())
    }

    /// Scenarios of vertex `j` whose demand the open sites `t` meet.
    pub fn satisfied_count(&self, j: usize, t: Subset) -> usize {
        let sc = &self.scenarios[j];
        (0..self.k)
            .filter(|&k| {
                let supply: i64 = sc
                    .support
                    .iter()
                    .zip(&sc.a[k])
                    .filter(|(&i, _)| t.contains(i - 1))
                    .map(|(_, &a)| a)
                    .sum();
                supply >= sc.b[k]
            })
            .count()
    }

    pub fn vertex_satisfied(&self, j: usize, t: Subset) -> bool {
        self.satisfied_count(j, t) >= self.need()
    }

    pub fn benefit(&self, t: Subset) -> i64 {
        t.indices().map(|i| self.benefits[i]).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instances always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Instance = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }
}

/// Upper oracle for vertex `j` alone.
fn vertex_oracle(inst: &Instance, j: usize) -> Result<MembershipOracle> {
    let owned = inst.clone();
    MembershipOracle::new(GroundSet::new(inst.n())?, Shape::Upper, move |t| {
        owned.vertex_satisfied(j, t)
    })
}

/// Site sets meeting every vertex's chance constraint.
pub fn satisfaction_oracle(inst: &Instance) -> Result<MembershipOracle> {
    let owned = inst.clone();
    MembershipOracle::new(GroundSet::new(inst.n())?, Shape::Upper, move |t| {
        (0..owned.n()).all(|j| owned.vertex_satisfied(j, t))
    })
}

/// One covering cut per vertex whose constraint the point violates.
struct SatSeparator {
    oracles: Vec<MembershipOracle>,
}

impl Separator for SatSeparator {
    fn name(&self) -> &str {
        "sat"
    }

    fn separate(&self, point: &[bool]) -> Result<Vec<Row>> {
        let n = self.oracles.len();
        let t = Subset::from_indices((0..n).filter(|&i| point[i]));
        let vars: Vec<usize> = (0..n).collect();
        let mut rows = Vec::new();
        for o in &self.oracles {
            if let Some(cut) = separate(o, t)?.cut {
                rows.push(Row::from_cut(&cut, &vars));
            }
        }
        Ok(rows)
    }
}

/// Up to three clique cuts `Σ_{i∈C} x_i ≤ 1` inside the chosen sites.
struct CliqueSeparator {
    graph: Graph,
}

impl Separator for CliqueSeparator {
    fn name(&self) -> &str {
        "clique"
    }

    fn separate(&self, point: &[bool]) -> Result<Vec<Row>> {
        let t = Subset::from_indices((0..self.graph.n()).filter(|&i| point[i]));
        Ok(find_violated_cliques(&self.graph, t, 3)
            .into_iter()
            .map(|c| Row::new(c.indices().map(|i| (i, -1)).collect(), -1))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub report: SolveReport,
    pub sat_cuts: u64,
    pub clique_cuts: u64,
    pub millis: u128,
}

/// The model each strategy solves; variables `0..n` are the sites.
pub fn build_strategy_model(inst: &Instance, strategy: Strategy) -> Result<BipModel> {
    let g = inst.to_graph()?;
    let n = g.n();
    let scenario_rows = matches!(strategy, Strategy::NoCut | Strategy::ClqCut);
    let n_vars = if scenario_rows { n + n * inst.k } else { n };
    let benefits: Vec<Q> = inst.benefits.iter().map(|&r| Q::from_integer(r)).collect();
    let mut m = BipModel::new(n, n_vars)?.with_costs(Sense::Max, &benefits)?;
    if scenario_rows {
        let need = inst.need() as i64;
        for (j, sc) in inst.scenarios.iter().enumerate() {
            let z0 = n + j * inst.k;
            for k in 0..inst.k {
                let mut terms: Vec<(usize, i64)> =
                    sc.support.iter().map(|&i| i - 1).zip(sc.a[k].iter().copied()).collect();
                terms.push((z0 + k, -sc.b[k]));
                m.add_row(Row::new(terms, 0));
            }
            m.add_row(Row::new((z0..z0 + inst.k).map(|z| (z, 1)).collect(), need));
        }
    }
    if matches!(strategy, Strategy::NoCut | Strategy::SatCut) {
        for &(u, v) in g.edges() {
            m.add_row(Row::new(vec![(u, -1), (v, -1)], -1));
        }
    }
    if matches!(strategy, Strategy::ClqCut | Strategy::AllCut) {
        m.add_separator(CliqueSeparator { graph: g.clone() });
    }
    if matches!(strategy, Strategy::SatCut | Strategy::AllCut) {
        let oracles = (0..n).map(|j| vertex_oracle(inst, j)).collect::<Result<_>>()?;
        m.add_separator(SatSeparator { oracles });
    }
    Ok(m)
}

pub fn run_strategy(inst: &Instance, strategy: Strategy, limits: SolveLimits) -> Result<StrategyRun> {
    let model = build_strategy_model(inst, strategy)?;
    let start = Instant::now();
    let report = solve(&model, limits)?;
    let millis = start.elapsed().as_millis();
    let count = |name: &str| report.cuts_by_separator.get(name).copied().unwrap_or(0);
    Ok(StrategyRun {
        strategy,
        sat_cuts: count("sat"),
        clique_cuts: count("clique"),
        report,
        millis,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub n: usize,
    pub density: f64,
    #[serde(with = "serde_q")]
    pub epsilon: Q,
    pub k: usize,
}

impl CampaignConfig {
    pub fn label(&self) -> String {
        format!(
            "n={} d={} eps={} K={}",
            self.n,
            self.density,
            format_q(&self.epsilon),
            self.k
        )
    }
}

/// One CSV line of a campaign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignRow {
    pub config: String,
    pub seed: u64,
    pub strategy: String,
    pub status: String,
    pub value: String,
    pub nodes: u64,
    pub cuts: u64,
    pub millis: u128,
    /// Whether this run's value equals every other unlimited run on the
    /// same instance; empty for node-limited runs.
    pub agrees: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub rows: Vec<CampaignRow>,
    /// Instances whose unlimited strategies disagree, as `(config, seed)`.
    pub disagreements: Vec<(String, u64)>,
}

impl CampaignReport {
    pub fn all_agree(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Runs every strategy on every seeded instance of every configuration,
/// instances in parallel.
pub fn campaign(
    configs: &[CampaignConfig],
    seeds: &[u64],
    strategies: &[Strategy],
    limits: SolveLimits,
) -> Result<CampaignReport> {
    let jobs: Vec<(&CampaignConfig, u64)> = configs
        .iter()
        .flat_map(|c| seeds.iter().map(move |&s| (c, s)))
        .collect();
    let results: Vec<Vec<CampaignRow>> = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let inst = generate_instance(c.n, c.density, c.epsilon, c.k, seed)?;
            let runs = strategies
                .iter()
                .map(|&s| run_strategy(&inst, s, limits))
                .collect::<Result<Vec<_>>>()?;
            let values: Vec<Option<String>> = runs
                .iter()
                .map(|r| (r.report.status != SolveStatus::NodeLimit).then(|| r.report.objective_value.to_string()))
                .collect();
            let reference = values.iter().flatten().next().cloned();
            Ok(runs
                .iter()
                .zip(&values)
                .map(|(r, v)| CampaignRow {
                    config: c.label(),
                    seed,
                    strategy: r.strategy.name().to_owned(),
                    status: serde_json::to_value(r.report.status)
                        .expect("status")
                        .as_str()
                        .unwrap_or("")
                        .to_owned(),
                    value: r.report.objective_value.to_string(),
                    nodes: r.report.nodes,
                    cuts: r.report.cuts_added,
                    millis: r.millis,
                    agrees: match v {
                        Some(v) => (Some(v) == reference.as_ref()).to_string(),
                        None => String::new(),
                    },
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let rows: Vec<CampaignRow> = results.into_iter().flatten().collect();
    let mut disagreements: Vec<(String, u64)> = rows
        .iter()
        .filter(|r| r.agrees == "false")
        .map(|r| (r.config.clone(), r.seed))
        .collect();
    disagreements.dedup();
    Ok(CampaignReport { rows, disagreements })
}
