//! Depth-first search with incremental row activities.

use std::collections::{BTreeMap, HashSet};

use num_integer::Integer;

use super::{BipModel, ObjectiveValue, Row, Sense, SolveLimits, SolveReport, SolveStatus};
use crate::error::{Error, Result};
use crate::rational::{common_denominator, scaled, Q};
use crate::setsys::Subset;

const FREE: i8 = -1;

struct Decision {
    var: usize,
    trail_len: usize,
    flipped: bool,
}

struct State<'m> {
    model: &'m BipModel,
    rhs: Vec<i64>,
    /// Row entries sorted by decreasing coefficient magnitude.
    order: Vec<Vec<(usize, i64)>>,
    max_act: Vec<i64>,
    occ: Vec<Vec<(usize, i64)>>,
    queued: Vec<bool>,
    queue: Vec<usize>,
    seen_rows: HashSet<Row>,
    /// Lazily added rows still to be re-propagated after backtracking, with
    /// the shortest decision prefix they were checked under.
    pending: Vec<(usize, usize)>,
    val: Vec<i8>,
    trail: Vec<usize>,
    decisions: Vec<Decision>,
    cost: Vec<i128>,
    lin_lb: i128,
    epi_lb: Vec<i128>,
    epi_occ: Vec<Vec<(usize, i128)>>,
    best: Option<(i128, Vec<bool>)>,
    nodes: u64,
    cuts_added: u64,
    separator_calls: u64,
    cuts_by_separator: BTreeMap<String, u64>,
    lazy_rows: Vec<Row>,
}

impl<'m> State<'m> {
    fn new(model: &'m BipModel) -> Result<(Self, i128)> {
        let n = model.n_vars();
        if !model.epigraph.is_empty() && model.sense == Sense::Max {
            return Err(Error::Model(
                "epigraph objectives are only supported for minimization".into(),
            ));
        }
        let all_q = model.costs.iter().chain(std::iter::once(&model.constant)).chain(
            model
                .epigraph
                .iter()
                .flat_map(|e| e.terms.iter().map(|t| &t.1).chain(std::iter::once(&e.constant))),
        );
        let scale = common_denominator(all_q)?;
        let sign: i128 = if model.sense == Sense::Max { -1 } else { 1 };
        let cost: Vec<i128> = model.costs.iter().map(|c| sign * scaled(c, scale)).collect();
        let lin_lb = sign * scaled(&model.constant, scale) + cost.iter().map(|&c| c.min(0)).sum::<i128>();
        let mut epi_occ = vec![Vec::new(); n];
        let mut epi_lb = Vec::with_capacity(model.epigraph.len());
        for (k, e) in model.epigraph.iter().enumerate() {
            let mut lb = scaled(&e.constant, scale);
            for (v, q) in &e.terms {
                let c = scaled(q, scale);
                lb += c.min(0);
                epi_occ[*v].push((k, c));
            }
            epi_lb.push(lb);
        }
        let mut st = State {
            model,
            rhs: Vec::new(),
            order: Vec::new(),
            max_act: Vec::new(),
            occ: vec![Vec::new(); n],
            queued: Vec::new(),
            queue: Vec::new(),
            seen_rows: HashSet::new(),
            pending: Vec::new(),
            val: vec![FREE; n],
            trail: Vec::with_capacity(n),
            decisions: Vec::new(),
            cost,
            lin_lb,
            epi_lb,
            epi_occ,
            best: None,
            nodes: 1,
            cuts_added: 0,
            separator_calls: 0,
            cuts_by_separator: BTreeMap::new(),
            lazy_rows: Vec::new(),
        };
        for r in &model.rows {
            st.add_row(r.clone());
        }
        for g in &model.selector_groups {
            st.add_row(Row::new(g.iter().map(|&v| (v, 1)).collect(), 1));
            st.add_row(Row::new(g.iter().map(|&v| (v, -1)).collect(), -1));
        }
        Ok((st, scale))
    }

    /// Registers a row against the current assignment; returns its id, or
    /// `None` for a duplicate.
    fn add_row(&mut self, row: Row) -> Option<usize> {
        if !self.seen_rows.insert(row.clone()) {
            return None;
        }
        let id = self.rhs.len();
        let mut act = 0i64;
        for &(v, c) in &row.terms {
            act += match self.val[v] {
                FREE => c.max(0),
                1 => c,
                _ => 0,
            };
            self.occ[v].push((id, c));
        }
        let mut order = row.terms.clone();
        order.sort_by_key(|t| std::cmp::Reverse(t.1.unsigned_abs()));
        self.rhs.push(row.rhs);
        self.order.push(order);
        self.max_act.push(act);
        self.queued.push(false);
        self.enqueue(id);
        Some(id)
    }

    fn enqueue(&mut self, r: usize) {
        if !self.queued[r] {
            self.queued[r] = true;
            self.queue.push(r);
        }
    }

    fn assign(&mut self, v: usize, b: bool) {
        debug_assert_eq!(self.val[v], FREE);
        self.val[v] = b as i8;
        self.trail.push(v);
        for k in 0..self.occ[v].len() {
            let (r, c) = self.occ[v][k];
            let delta = if b { c } else { 0 } - c.max(0);
            if delta != 0 {
                self.max_act[r] += delta;
                self.enqueue(r);
            }
        }
        let c = self.cost[v];
        self.lin_lb += if b { c } else { 0 } - c.min(0);
        for &(k, c) in &self.epi_occ[v] {
            self.epi_lb[k] += if b { c } else { 0 } - c.min(0);
        }
    }

    fn unassign(&mut self, v: usize) {
        let b = self.val[v] == 1;
        self.val[v] = FREE;
        for &(r, c) in &self.occ[v] {
            self.max_act[r] -= if b { c } else { 0 } - c.max(0);
        }
        let c = self.cost[v];
        self.lin_lb -= if b { c } else { 0 } - c.min(0);
        for &(k, c) in &self.epi_occ[v] {
            self.epi_lb[k] -= if b { c } else { 0 } - c.min(0);
        }
    }

    fn bound(&self) -> i128 {
        self.lin_lb + self.epi_lb.iter().copied().max().unwrap_or(0)
    }

    fn clear_queue(&mut self) {
        for r in self.queue.drain(..) {
            self.queued[r] = false;
        }
    }

    /// Row propagation plus bound-based fixing; false on conflict or when
    /// the node cannot improve on the incumbent.
    fn propagate(&mut self) -> bool {
        loop {
            while let Some(r) = self.queue.pop() {
                self.queued[r] = false;
                let slack = self.max_act[r] - self.rhs[r];
                if slack < 0 {
                    self.clear_queue();
                    return false;
                }
                for k in 0..self.order[r].len() {
                    let (v, c) = self.order[r][k];
                    if c.unsigned_abs() as i64 <= slack {
                        break;
                    }
                    if self.val[v] == FREE {
                        self.assign(v, c > 0);
                    }
                }
            }
            let Some(best) = self.best.as_ref().map(|b| b.0) else {
                return true;
            };
            let lb = self.bound();
            if lb >= best {
                return false;
            }
            let mut forced = false;
            for v in 0..self.val.len() {
                if self.val[v] != FREE {
                    continue;
                }
                let c = self.cost[v];
                if c > 0 && lb + c >= best {
                    self.assign(v, false);
                    forced = true;
                } else if c < 0 && lb - c >= best {
                    self.assign(v, true);
                    forced = true;
                }
            }
            if !forced {
                return true;
            }
        }
    }

    fn first_free(&self) -> Option<usize> {
        let start = self.decisions.last().map_or(0, |d| d.var + 1);
        (start..self.val.len()).find(|&v| self.val[v] == FREE)
    }

    fn backtrack(&mut self) -> bool {
        while let Some(d) = self.decisions.pop() {
            while self.trail.len() > d.trail_len {
                let v = self.trail.pop().expect("trail entry");
                self.unassign(v);
            }
            if !d.flipped {
                let k = self.decisions.len();
                self.decisions.push(Decision { flipped: true, ..d });
                self.assign(d.var, true);
                self.nodes += 1;
                let mut i = 0;
                while i < self.pending.len() {
                    let (r, checked) = self.pending[i];
                    if checked > k {
                        self.enqueue(r);
                        self.pending[i].1 = k;
                    }
                    if self.pending[i].1 == 0 {
                        self.pending.swap_remove(i);
                    } else {
                        i += 1;
                    }
                }
                return true;
            }
        }
        false
    }

    /// Handles a full assignment; always ends in a backtrack. Separators run in
    /// order and the first one that rejects the point ends the round.
    fn leaf(&mut self) -> Result<()> {
        let point: Vec<bool> = self.val.iter().map(|&b| b == 1).collect();
        let model = self.model;
        let mut rejected = false;
        for sep in &model.separators {
            self.separator_calls += 1;
            let rows = sep.separate(&point)?;
            if rows.is_empty() {
                continue;
            }
            let mut violated_new = false;
            for row in rows {
                if row.terms.iter().any(|t| t.0 >= point.len()) {
                    return Err(Error::Model(format!(
                        "separator `{}` emitted a row over unknown variables",
                        sep.name()
                    )));
                }
                let violated = !row.is_satisfied(&point);
                if let Some(id) = self.add_row(row.clone()) {
                    violated_new |= violated;
                    self.pending.push((id, self.decisions.len()));
                    self.cuts_added += 1;
                    *self.cuts_by_separator.entry(sep.name().to_owned()).or_default() += 1;
                    self.lazy_rows.push(row);
                }
            }
            if !violated_new {
                return Err(Error::SeparatorStalled(sep.name().to_owned()));
            }
            rejected = true;
            break;
        }
        self.clear_queue();
        if !rejected {
            let value = self.bound();
            if self.best.as_ref().is_none_or(|b| value < b.0) {
                self.best = Some((value, point));
            }
        }
        Ok(())
    }
}

pub(super) fn run(model: &BipModel, limits: SolveLimits) -> Result<SolveReport> {
    if model.n_vars() > limits.max_vars {
        return Err(Error::Model(format!(
            "{} variables exceed the limit of {}",
            model.n_vars(),
            limits.max_vars
        )));
    }
    model.validate()?;
    let (mut st, scale) = State::new(model)?;
    let mut hit_limit = false;
    let mut alive = st.propagate();
    loop {
        if alive {
            if limits.node_limit.is_some_and(|l| st.nodes >= l) {
                hit_limit = true;
                break;
            }
            if let Some(v) = st.first_free() {
                st.decisions.push(Decision {
                    var: v,
                    trail_len: st.trail.len(),
                    flipped: false,
                });
                st.assign(v, false);
                st.nodes += 1;
                alive = st.propagate();
                continue;
            }
            st.leaf()?;
        }
        if !st.backtrack() {
            break;
        }
        alive = st.propagate();
    }
    let status = match (&st.best, hit_limit) {
        (_, true) => SolveStatus::NodeLimit,
        (Some(_), false) => SolveStatus::Optimal,
        (None, false) => SolveStatus::Infeasible,
    };
    let objective_value = match &st.best {
        Some((v, _)) => ObjectiveValue::Finite(to_q(if model.sense == Sense::Max { -v } else { *v }, scale)?),
        None => ObjectiveValue::infeasible(model.sense),
    };
    let assignment = st.best.map(|b| b.1);
    let best_point = assignment
        .as_ref()
        .map(|x| Subset::from_indices((0..model.primary()).filter(|&i| x[i])));
    Ok(SolveReport {
        status,
        best_point,
        assignment,
        objective_value,
        nodes: st.nodes,
        cuts_added: st.cuts_added,
        separator_calls: st.separator_calls,
        cuts_by_separator: st.cuts_by_separator,
        lazy_rows: st.lazy_rows,
    })
}

fn to_q(num: i128, den: i128) -> Result<Q> {
    let g = num.gcd(&den).max(1);
    let n = i64::try_from(num / g).map_err(|_| Error::Overflow("objective value"))?;
    let d = i64::try_from(den / g).map_err(|_| Error::Overflow("objective value"))?;
    Ok(Q::new(n, d))
}
