//! Graphs, the classic set systems over their edges or vertices, and the
//! signed min-cut membership oracle.

use serde::{Deserialize, Serialize};

use crate::approx::Bipartition;
use crate::error::{Error, Result};
use crate::rational::Q;
use crate::separation::{MembershipOracle, Shape};
use crate::setsys::{GroundSet, SetSystem, Subset, MAX_GROUND};

/// Undirected graph on vertices `0..n` with stable edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Option<Vec<Q>>,
    vertex_weights: Option<Vec<Q>>,
}

/// `{"n": 3, "edges": [[1,2],[2,3]], "weights": ["1","-2"]}` with 1-based
/// vertices; edge `k` is the `k`-th pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_q_vec_opt"
    )]
    pub weights: Option<Vec<Q>>,
    #[serde(
        default,
        skip_serializing_if = "Option::is_none",
        with = "crate::rational::serde_q_vec_opt"
    )]
    pub vertex_weights: Option<Vec<Q>>,
}

impl Graph {
    /// A simple graph; vertices are 0-based here.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 || n > MAX_GROUND {
            return Err(Error::GroundSize { n, max: MAX_GROUND });
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::ElementOutOfRange { index: u.max(v) + 1, n });
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {}", u + 1)));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Input(format!("parallel edge {}-{}", u + 1, v + 1)));
            }
        }
        Ok(Graph {
            n,
            edges,
            weights: None,
            vertex_weights: None,
        })
    }

    /// Builds from 1-based vertex pairs.
    pub fn from_one_based(n: usize, edges: &[[usize; 2]]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(edges.len());
        for &[u, v] in edges {
            if u == 0 || v == 0 {
                return Err(Error::Input("vertices are numbered from 1".into()));
            }
            pairs.push((u - 1, v - 1));
        }
        Graph::new(n, pairs)
    }

    pub fn with_weights(mut self, w: Vec<Q>) -> Result<Self> {
        if w.len() != self.edges.len() {
            return Err(Error::Input(format!(
                "{} weights for {} edges",
                w.len(),
                self.edges.len()
            )));
        }
        self.weights = Some(w);
        Ok(self)
    }

    pub fn with_vertex_weights(mut self, w: Vec<Q>) -> Result<Self> {
        if w.len() != self.n {
            return Err(Error::Input(format!(
                "{} vertex weights for {} vertices",
                w.len(),
                self.n
            )));
        }
        self.vertex_weights = Some(w);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge weights, 1 for every edge when none were given.
    pub fn weights(&self) -> Vec<Q> {
        self.weights
            .clone()
            .unwrap_or_else(|| vec![Q::from_integer(1); self.m()])
    }

    /// Vertex weights, 1 for every vertex when none were given.
    pub fn vertex_weights(&self) -> Vec<Q> {
        self.vertex_weights
            .clone()
            .unwrap_or_else(|| vec![Q::from_integer(1); self.n])
    }

    /// Fails for graphs with no edges or more than 64 of them.
    pub fn edge_ground(&self) -> Result<GroundSet> {
        GroundSet::new(self.m())
    }

    pub fn vertex_ground(&self) -> Result<GroundSet> {
        GroundSet::new(self.n)
    }

    /// Neighbour masks per vertex.
    pub fn adjacency(&self) -> Vec<Subset> {
        let mut adj = vec![Subset::EMPTY; self.n];
        for &(u, v) in &self.edges {
            adj[u] = adj[u].with(v);
            adj[v] = adj[v].with(u);
        }
        adj
    }

    /// `N[v]`, the closed neighbourhood.
    pub fn closed_neighborhood(&self, v: usize) -> Subset {
        self.adjacency()[v].with(v)
    }

    /// Connected-component label per vertex using only the edges in `t`.
    pub fn components(&self, t: Subset) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for e in t.indices() {
            let (u, v) = self.edges[e];
            uf.union(u, v);
        }
        (0..self.n).map(|v| uf.find(v)).collect()
    }

    /// Whether the whole graph is connected.
    pub fn is_connected(&self) -> bool {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        (0..self.n).all(|v| uf.find(v) == uf.find(0))
    }

    pub fn connects(&self, t: Subset, s: usize, u: usize) -> bool {
        let c = self.components(t);
        c[s] == c[u]
    }

    /// Edges with exactly one endpoint in the vertex set `side`.
    pub fn cut_of(&self, side: Subset) -> Subset {
        Subset::from_indices(
            self.edges
                .iter()
                .enumerate()
                .filter(|(_, &(u, v))| side.contains(u) != side.contains(v))
                .map(|(e, _)| e),
        )
    }

    /// Whether the edges in `t` form a bipartite subgraph.
    pub fn is_bipartite(&self, t: Subset) -> bool {
        two_colorable(self.n, t.indices().map(|e| self.edges[e]))
    }

    pub fn is_forest(&self, t: Subset) -> bool {
        let mut uf = UnionFind::new(self.n);
        t.indices().all(|e| {
            let (u, v) = self.edges[e];
            uf.union(u, v)
        })
    }

    pub fn is_dominating(&self, vs: Subset) -> bool {
        let adj = self.adjacency();
        (0..self.n).all(|v| vs.contains(v) || adj[v].intersects(vs))
    }

    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u + 1, v + 1]).collect(),
            weights: self.weights.clone(),
            vertex_weights: self.vertex_weights.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("graphs always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_str(text)?;
        doc.to_graph()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            return Err(Error::ElementOutOfRange {
                index: v + 1,
                n: self.n,
            });
        }
        Ok(())
    }
}

impl GraphDoc {
    pub fn to_graph(&self) -> Result<Graph> {
        let mut g = Graph::from_one_based(self.n, &self.edges)?;
        if let Some(w) = &self.weights {
            g = g.with_weights(w.clone())?;
        }
        if let Some(w) = &self.vertex_weights {
            g = g.with_vertex_weights(w.clone())?;
        }
        Ok(g)
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// False when `u` and `v` were already joined.
    fn union(&mut self, u: usize, v: usize) -> bool {
        let (a, b) = (self.find(u), self.find(v));
        if a == b {
            return false;
        }
        self.parent[a.max(b)] = a.min(b);
        true
    }
}

/// BFS 2-colouring over vertices `0..n`; a self-loop is never colourable.
fn two_colorable(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> bool {
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        if u == v {
            return false;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut color = vec![u8::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for start in 0..n {
        if color[start] != u8::MAX {
            continue;
        }
        color[start] = 0;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if color[v] == u8::MAX {
                    color[v] = 1 - color[u];
                    queue.push_back(v);
                } else if color[v] == color[u] {
                    return false;
                }
            }
        }
    }
    true
}

/// Edge sets of the simple `s`-`t` paths.
pub fn system_st_paths(g: &Graph, s: usize, t: usize) -> Result<SetSystem> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let ground = GroundSet::explicit(g.m())?;
    let mut out = SetSystem::empty(ground)?;
    let mut incident = vec![Vec::new(); g.n()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((e, v));
        incident[v].push((e, u));
    }
    fn walk(inc: &[Vec<(usize, usize)>], at: usize, t: usize, visited: Subset, used: Subset, out: &mut SetSystem) {
        if at == t {
            out.insert(used);
            return;
        }
        for &(e, w) in &inc[at] {
            if !visited.contains(w) {
                walk(inc, w, t, visited.with(w), used.with(e), out);
            }
        }
    }
    walk(&incident, s, t, Subset::singleton(s), Subset::EMPTY, &mut out);
    Ok(out)
}

/// Edge sets in which `s` and `t` are connected.
pub fn system_st_connected(g: &Graph, s: usize, t: usize) -> Result<MembershipOracle> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let h = g.clone();
    MembershipOracle::new(g.edge_ground()?, Shape::Upper, move |x| h.connects(x, s, t))
}

/// Edge cuts `δ(S)` over all vertex sets `S`, the empty cut included.
pub fn system_edge_cuts(g: &Graph) -> Result<SetSystem> {
    let ground = GroundSet::explicit(g.m())?;
    if g.n() > 30 {
        return Err(Error::GroundSize { n: g.n(), max: 30 });
    }
    let mut out = SetSystem::empty(ground)?;
    // Fixing the last vertex outside `S` visits each cut once.
    for side in 0..(1u64 << (g.n() - 1)) {
        out.insert(g.cut_of(Subset::from_bits(side)));
    }
    Ok(out)
}

/// Edge sets forming a bipartite subgraph.
pub fn system_bipartite_subgraphs(g: &Graph) -> Result<MembershipOracle> {
    let h = g.clone();
    MembershipOracle::new(g.edge_ground()?, Shape::Lower, move |x| h.is_bipartite(x))
}

/// Dominating vertex sets.
pub fn system_dominating(g: &Graph) -> Result<MembershipOracle> {
    let h = g.clone();
    MembershipOracle::new(g.vertex_ground()?, Shape::Upper, move |x| h.is_dominating(x))
}

/// Acyclic edge sets.
pub fn system_forests(g: &Graph) -> Result<MembershipOracle> {
    let h = g.clone();
    MembershipOracle::new(g.edge_ground()?, Shape::Lower, move |x| h.is_forest(x))
}

/// Edge sets connecting every vertex.
pub fn system_spanning_connected(g: &Graph) -> Result<MembershipOracle> {
    let h = g.clone();
    MembershipOracle::new(g.edge_ground()?, Shape::Upper, move |x| {
        let c = h.components(x);
        c.iter().all(|&r| r == c[0])
    })
}

/// Edge sets of spanning trees.
pub fn system_spanning_trees(g: &Graph) -> Result<SetSystem> {
    let ground = GroundSet::explicit(g.m())?;
    SetSystem::from_predicate(ground, |x| x.len() + 1 == g.n() && g.is_forest(x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Min,
    Max,
}

/// `m(hat overline ↑Ω)` for minimization, `m(overline ↓Ω)` for maximization.
pub fn structural_counterpart(s: &SetSystem, mode: Objective) -> SetSystem {
    match mode {
        Objective::Min => s.up_closure().complement().element_complement().minimal(),
        Objective::Max => s.down_closure().complement().minimal(),
    }
}

/// Membership of `t` in the bimonotone closure of the edge cuts under
/// `split`: contract the edges of `I \ t`, keep the edges of `t ∩ J`, and
/// test the quotient for bipartiteness. A kept edge inside one contracted
/// class is a self-loop and makes the answer false.
pub fn signed_mincut_membership(g: &Graph, split: &Bipartition, t: Subset) -> bool {
    let mut uf = UnionFind::new(g.n());
    for e in (split.part_i() - t).indices() {
        let (u, v) = g.edges()[e];
        uf.union(u, v);
    }
    let kept: Vec<(usize, usize)> = (t & split.part_j())
        .indices()
        .map(|e| {
            let (u, v) = g.edges()[e];
            (uf.find(u), uf.find(v))
        })
        .collect();
    two_colorable(g.n(), kept.into_iter())
}

/// [`signed_mincut_membership`] as a bimonotone oracle.
pub fn signed_mincut_oracle(g: &Graph, split: Bipartition) -> Result<MembershipOracle> {
    if split.ground() != g.edge_ground()? {
        return Err(Error::GroundMismatch {
            left: split.ground().n(),
            right: g.m(),
        });
    }
    let h = g.clone();
    MembershipOracle::new(split.ground(), Shape::Bimonotone(split), move |t| {
        signed_mincut_membership(&h, &split, t)
    })
}

/// Split of the edges into nonnegative (`I`) and negative (`J`) weights.
pub fn sign_split(g: &Graph) -> Result<Bipartition> {
    let w = g.weights();
    let zero = Q::from_integer(0);
    Bipartition::from_i(
        g.edge_ground()?,
        Subset::from_indices((0..g.m()).filter(|&e| w[e] >= zero)),
    )
}

/// Up to `limit` distinct cliques of size at least 2 inside `G[t]`. Each is
/// grown greedily from a seed, scanning vertices by ascending degree in
/// `G[t]` and then by index.
pub fn find_violated_cliques(g: &Graph, t: Subset, limit: usize) -> Vec<Subset> {
    let adj: Vec<Subset> = g.adjacency().into_iter().map(|a| a & t).collect();
    let mut order: Vec<usize> = t.indices().filter(|&v| !adj[v].is_empty()).collect();
    order.sort_by_key(|&v| (adj[v].len(), v));
    let mut out: Vec<Subset> = Vec::new();
    for &seed in &order {
        if out.len() >= limit {
            break;
        }
        let mut clique = Subset::singleton(seed);
        let mut cand = adj[seed];
        for &v in &order {
            if cand.contains(v) {
                clique = clique.with(v);
                cand = cand & adj[v];
            }
        }
        if !out.contains(&clique) {
            out.push(clique);
        }
    }
    out
}

/// Reasons an edge set cannot lie on any simple `s`-`t` path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathObstruction {
    /// A vertex of degree at least 3.
    Claw,
    Cycle,
    /// More than one edge at `s` or at `t`.
    EndpointDegree,
}

/// Every listed obstruction present in `t`; a nonempty answer certifies that
/// `t` extends to no simple `s`-`t` path. The list is not complete.
pub fn path_obstructions(g: &Graph, s: usize, t_vertex: usize, t: Subset) -> Vec<PathObstruction> {
    let mut deg = vec![0usize; g.n()];
    for e in t.indices() {
        let (u, v) = g.edges()[e];
        deg[u] += 1;
        deg[v] += 1;
    }
    let mut out = Vec::new();
    if deg.iter().any(|&d| d >= 3) {
        out.push(PathObstruction::Claw);
    }
    if !g.is_forest(t) {
        out.push(PathObstruction::Cycle);
    }
    if deg[s] > 1 || deg[t_vertex] > 1 {
        out.push(PathObstruction::EndpointDegree);
    }
    out
}

/// Small named graphs used by the demos and tests.
pub mod fixtures {
    use super::Graph;

    fn build(n: usize, edges: &[[usize; 2]]) -> Graph {
        Graph::from_one_based(n, edges).expect("fixture graphs are simple")
    }

    /// Edges `e1 = {1,2}`, `e2 = {2,3}`, `e3 = {1,3}`.
    pub fn triangle() -> Graph {
        build(3, &[[1, 2], [2, 3], [1, 3]])
    }

    /// The path `1 - 2 - 3`.
    pub fn path3() -> Graph {
        build(3, &[[1, 2], [2, 3]])
    }

    pub fn cycle(n: usize) -> Graph {
        let edges: Vec<[usize; 2]> = (1..=n).map(|i| [i, i % n + 1]).collect();
        build(n, &edges)
    }

    pub fn complete(n: usize) -> Graph {
        let edges: Vec<[usize; 2]> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| [i, j])).collect();
        build(n, &edges)
    }

    /// Centre 1 joined to leaves 2, 3, 4.
    pub fn star3() -> Graph {
        build(4, &[[1, 2], [1, 3], [1, 4]])
    }
}
