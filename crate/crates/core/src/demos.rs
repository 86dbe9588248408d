//! Worked structural correspondences on small graphs. Each demo computes a
//! structural counterpart with the set-system operators and compares it with
//! a direct enumeration of the classical structure.

use std::fmt;

use serde::Serialize;

use crate::approx::bimonotone_closure;
use crate::error::{Error, Result};
use crate::graphs::{
    sign_split, signed_mincut_oracle, structural_counterpart, system_dominating, system_edge_cuts,
    system_spanning_trees, system_st_paths, Graph, Objective,
};
use crate::rational::{format_q, Q};
use crate::separation::bilinear_constraint_oracle;
use crate::setsys::{GroundSet, SetSystem, Subset};
use crate::solver::{build_bimonotone_model, solve, SolveLimits};

pub const DEMO_NAMES: [&str; 6] = [
    "shortest-path",
    "max-cut",
    "dominating",
    "spanning",
    "signed-mincut",
    "bilinear",
];

/// How ground elements are printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Labels {
    Edges,
    Vertices,
    /// `x1..x{rows}` then `y1..`.
    Bilinear {
        rows: usize,
    },
}

impl Labels {
    pub fn label(&self, i: usize) -> String {
        match *self {
            Labels::Edges => format!("e{}", i + 1),
            Labels::Vertices => (i + 1).to_string(),
            Labels::Bilinear { rows } if i < rows => format!("x{}", i + 1),
            Labels::Bilinear { rows } => format!("y{}", i - rows + 1),
        }
    }

    pub fn subset(&self, t: Subset) -> String {
        let parts: Vec<String> = t.indices().map(|i| self.label(i)).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn system(&self, s: &SetSystem) -> String {
        let parts: Vec<String> = s.canonical_members().into_iter().map(|t| self.subset(t)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// One computed-versus-enumerated comparison.
#[derive(Clone, Debug)]
pub struct DemoCase {
    pub title: String,
    pub labels: Labels,
    pub feasible: SetSystem,
    /// What the operators produce.
    pub counterpart: SetSystem,
    /// What the direct enumeration produces.
    pub enumerated: SetSystem,
    /// Optional optimum check: (solver value, brute-force value).
    pub optimum: Option<(Q, Q)>,
}

impl DemoCase {
    pub fn equal(&self) -> bool {
        self.counterpart == self.enumerated && self.optimum.is_none_or(|(a, b)| a == b)
    }

    pub fn verdict(&self) -> &'static str {
        if self.equal() {
            "EQUAL"
        } else {
            "DIFFER"
        }
    }
}

#[derive(Clone, Debug)]
pub struct DemoReport {
    pub name: String,
    pub cases: Vec<DemoCase>,
}

impl DemoReport {
    pub fn all_equal(&self) -> bool {
        self.cases.iter().all(DemoCase::equal)
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "demo: {}", self.name)?;
        for c in &self.cases {
            writeln!(f, "  {}", c.title)?;
            writeln!(f, "    feasible     {}", c.labels.system(&c.feasible))?;
            writeln!(f, "    counterpart  {}", c.labels.system(&c.counterpart))?;
            writeln!(f, "    enumerated   {}", c.labels.system(&c.enumerated))?;
            if let Some((a, b)) = c.optimum {
                writeln!(
                    f,
                    "    optimum      solver {} / enumeration {}",
                    format_q(&a),
                    format_q(&b)
                )?;
            }
            writeln!(f, "    verdict      {}", c.verdict())?;
        }
        Ok(())
    }
}

/// Minimal edge sets whose removal separates `s` from `t`.
pub fn enumerate_st_edge_cuts(g: &Graph, s: usize, t: usize) -> Result<SetSystem> {
    let ground = GroundSet::explicit(g.m())?;
    let full = ground.full();
    Ok(SetSystem::from_predicate(ground, |c| !g.connects(full - c, s, t))?.minimal())
}

/// Minimal edge sets whose removal disconnects the graph.
pub fn enumerate_global_edge_cuts(g: &Graph) -> Result<SetSystem> {
    let ground = GroundSet::explicit(g.m())?;
    let full = ground.full();
    Ok(SetSystem::from_predicate(ground, |c| {
        let comps = g.components(full - c);
        comps.iter().any(|&r| r != comps[0])
    })?
    .minimal())
}

/// Edge sets of simple cycles, by walking from each cycle's smallest vertex.
pub fn enumerate_cycles(g: &Graph, odd_only: bool) -> Result<SetSystem> {
    let ground = GroundSet::explicit(g.m())?;
    let mut out = SetSystem::empty(ground)?;
    let mut incident = vec![Vec::new(); g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((e, v));
        incident[v].push((e, u));
    }
    fn walk(
        inc: &[Vec<(usize, usize)>],
        root: usize,
        at: usize,
        visited: Subset,
        used: Subset,
        odd_only: bool,
        out: &mut SetSystem,
    ) {
        for &(e, w) in &inc[at] {
            if used.contains(e) {
                continue;
            }
            if w == root && used.len() >= 2 {
                let cycle = used.with(e);
                if !odd_only || cycle.len() % 2 == 1 {
                    out.insert(cycle);
                }
            } else if w > root && !visited.contains(w) {
                walk(inc, root, w, visited.with(w), used.with(e), odd_only, out);
            }
        }
    }
    for root in 0..g.n() {
        walk(
            &incident,
            root,
            root,
            Subset::singleton(root),
            Subset::EMPTY,
            odd_only,
            &mut out,
        );
    }
    Ok(out)
}

/// The closed neighbourhoods, keeping only the inclusion-minimal ones.
pub fn enumerate_closed_neighborhoods(g: &Graph) -> Result<SetSystem> {
    Ok(SetSystem::from_members(
        GroundSet::explicit(g.n())?,
        (0..g.n()).map(|v| g.closed_neighborhood(v)),
    )?
    .minimal())
}

/// Minimum signed cut weight over all vertex bipartitions.
pub fn brute_signed_mincut(g: &Graph) -> Q {
    let w = g.weights();
    (0..1u64 << (g.n() - 1))
        .map(|side| g.cut_of(Subset::from_bits(side)).indices().map(|e| w[e]).sum::<Q>())
        .min()
        .expect("at least the trivial partition")
}

fn shortest_path(g: &Graph) -> Result<Vec<DemoCase>> {
    let (s, t) = (0, g.n() - 1);
    let paths = system_st_paths(g, s, t)?;
    Ok(vec![DemoCase {
        title: format!("shortest path 1 -> {}: minimal s-t edge cuts", t + 1),
        labels: Labels::Edges,
        counterpart: structural_counterpart(&paths, Objective::Min),
        enumerated: enumerate_st_edge_cuts(g, s, t)?,
        feasible: paths,
        optimum: None,
    }])
}

fn max_cut(g: &Graph) -> Result<Vec<DemoCase>> {
    let cuts = system_edge_cuts(g)?;
    Ok(vec![DemoCase {
        title: "max-cut: odd simple cycles".into(),
        labels: Labels::Edges,
        counterpart: structural_counterpart(&cuts, Objective::Max),
        enumerated: enumerate_cycles(g, true)?,
        feasible: cuts,
        optimum: None,
    }])
}

fn dominating(g: &Graph) -> Result<Vec<DemoCase>> {
    let dom = system_dominating(g)?;
    let ground = GroundSet::explicit(g.n())?;
    let feasible = SetSystem::from_predicate(ground, |t| dom.call(t))?;
    Ok(vec![DemoCase {
        title: "min dominating set: minimal closed neighbourhoods".into(),
        labels: Labels::Vertices,
        counterpart: structural_counterpart(&feasible, Objective::Min),
        enumerated: enumerate_closed_neighborhoods(g)?,
        feasible,
        optimum: None,
    }])
}

fn spanning(g: &Graph) -> Result<Vec<DemoCase>> {
    let trees = system_spanning_trees(g)?;
    Ok(vec![
        DemoCase {
            title: "min spanning tree: global edge cuts".into(),
            labels: Labels::Edges,
            counterpart: structural_counterpart(&trees, Objective::Min),
            enumerated: enumerate_global_edge_cuts(g)?,
            feasible: trees.clone(),
            optimum: None,
        },
        DemoCase {
            title: "max spanning tree: simple cycles".into(),
            labels: Labels::Edges,
            counterpart: structural_counterpart(&trees, Objective::Max),
            enumerated: enumerate_cycles(g, false)?,
            feasible: trees,
            optimum: None,
        },
    ])
}

fn signed_mincut(g: &Graph) -> Result<Vec<DemoCase>> {
    let split = sign_split(g)?;
    let cuts = system_edge_cuts(g)?;
    let oracle = signed_mincut_oracle(g, split)?;
    let report = solve(&build_bimonotone_model(&oracle, &g.weights())?, SolveLimits::default())?;
    let value = report
        .objective_value
        .finite()
        .ok_or_else(|| Error::Model("signed min-cut model reported no optimum".into()))?;
    Ok(vec![DemoCase {
        title: "signed min-cut: contraction oracle vs bimonotone closure of the cuts".into(),
        labels: Labels::Edges,
        counterpart: oracle.to_system()?,
        enumerated: bimonotone_closure(&cuts, &split)?.closure,
        feasible: cuts,
        optimum: Some((value, brute_signed_mincut(g))),
    }])
}

/// `R` is the adjacency matrix of `g` and `α = 1`: `(I, J)` is feasible when
/// some edge joins a vertex of `I` to a vertex of `J`.
fn bilinear(g: &Graph) -> Result<Vec<DemoCase>> {
    let n = g.n();
    let adj = g.adjacency();
    let r: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| Q::from_integer(adj[i].contains(j) as i64)).collect())
        .collect();
    let o = bilinear_constraint_oracle(&r, Q::from_integer(1))?;
    let ground = GroundSet::explicit(2 * n)?;
    let feasible = SetSystem::from_predicate(ground, |t| o.call(t))?;
    // Removing `T` must leave no edge between the remaining rows and columns.
    let enumerated = SetSystem::from_predicate(ground, |t| {
        let rest = ground.full() - t;
        !(0..n).any(|i| rest.contains(i) && adj[i].indices().any(|j| rest.contains(n + j)))
    })?
    .minimal();
    Ok(vec![DemoCase {
        title: "bilinear <x, A y> >= 1: structures whose removal leaves no edge".into(),
        labels: Labels::Bilinear { rows: n },
        counterpart: structural_counterpart(&feasible, Objective::Min),
        enumerated,
        feasible,
        optimum: None,
    }])
}

/// Runs a named demo on `g`.
pub fn run_demo(name: &str, g: &Graph) -> Result<DemoReport> {
    let cases = match name {
        "shortest-path" => shortest_path(g)?,
        "max-cut" => max_cut(g)?,
        "dominating" => dominating(g)?,
        "spanning" => spanning(g)?,
        "signed-mincut" => signed_mincut(g)?,
        "bilinear" => bilinear(g)?,
        other => {
            return Err(Error::Input(format!(
                "unknown demo {other:?}; expected one of {}",
                DEMO_NAMES.join(", ")
            )))
        }
    };
    Ok(DemoReport {
        name: name.to_owned(),
        cases,
    })
}

/// The default graph of each demo: the triangle, with weights `(1, −2, −2)`
/// for the signed min-cut.
pub fn default_graph(name: &str) -> Graph {
    let tri = crate::graphs::fixtures::triangle();
    match name {
        "signed-mincut" => tri
            .with_weights(vec![Q::from_integer(1), Q::from_integer(-2), Q::from_integer(-2)])
            .expect("three weights"),
        _ => tri,
    }
}
