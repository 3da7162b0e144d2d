//! The recursive integrality-gap instance family for the minimum-cost
//! strongly connected subgraph problem (k = 1), its level cost function, an
//! exact branch-and-bound optimum at desk scale, and gap reporting.
//!
//! The family `G(d, s, t)` has depth `d` and `r` columns. The base graph
//! `G(1, s, t)` is the bidirected chain `s, w_1, ..., w_r, t`; for deeper
//! levels the graph consists of the forward chain `s → u_1 → ... → u_r → t`,
//! the backward chain `t → v_r → ... → v_1 → s`, and `r` recursive copies
//! with source `u_i` and sink `v_i`. Every vertex has in-degree and
//! out-degree exactly 2, so the all-halves vector balances at every cut. The
//! reported instance is `G(d, s, s)` with source and sink unified. Costs are
//! set so the arcs of each level sum to exactly 1, making the total cost `d`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{min_violated_cut, CapacityVector};
use crate::graph::{Arc, ArcSet, Instance};
use crate::lpacss::{cut_row, solve_lp_acss};
use crate::rational::{format_rat, rat, rat_to_f64, rat_usize, Rat};
use crate::simplex::{
    solve_with, LinearProgram, Relation, Sense, SimplexOptions, StartPolicy, Status,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GapParams {
    pub depth: usize,
    pub columns: usize,
}

impl GapParams {
    pub fn new(depth: usize, columns: usize) -> Result<Self> {
        if depth == 0 || columns == 0 {
            return Err(Error::InvalidInput(
                "gap family needs depth >= 1 and columns >= 1".into(),
            ));
        }
        Ok(GapParams { depth, columns })
    }

    /// The asymptotic gap guarantee assumes at least as many columns as the
    /// depth; the construction itself is defined for all parameters.
    pub fn columns_cover_depth(&self) -> bool {
        self.columns >= self.depth
    }
}

/// Cost of each arc at `level`: the reciprocal of the number of arcs at that
/// level, `1 / (2(r+1) r^(d-l))`.
pub fn level_cost(params: &GapParams, level: usize) -> Result<Rat> {
    if level == 0 || level > params.depth {
        return Err(Error::InvalidInput(format!(
            "level {level} outside 1..={}",
            params.depth
        )));
    }
    Ok(rat_usize(arcs_at_level(params, level)).recip())
}

/// Number of arcs at `level`: `2(r+1) r^(d-l)`.
fn arcs_at_level(params: &GapParams, level: usize) -> usize {
    2 * (params.columns + 1) * params.columns.pow((params.depth - level) as u32)
}

#[derive(Clone, Debug)]
pub struct GapInstance {
    pub instance: Instance,
    /// Construction level of each arc, `1..=depth`.
    pub levels: Vec<usize>,
    /// The unified source/sink vertex (always 0).
    pub source: usize,
    pub params: GapParams,
}

/// Builds `G(d, s, s)` with deterministic preorder vertex numbering.
pub fn build_gap_instance(params: &GapParams) -> GapInstance {
    let mut builder = Builder {
        r: params.columns,
        next_vertex: 1, // 0 is the unified source/sink
        arcs: Vec::new(),
        levels: Vec::new(),
    };
    builder.recurse(params.depth, 0, 0);

    let arcs: Vec<Arc> = builder
        .arcs
        .iter()
        .zip(&builder.levels)
        .map(|(&(tail, head), &level)| Arc {
            tail,
            head,
            cost: level_cost(params, level).expect("level in range"),
        })
        .collect();
    let instance = Instance::new(builder.next_vertex, arcs, 1).expect("construction is valid");
    let gap = GapInstance {
        instance,
        levels: builder.levels,
        source: 0,
        params: *params,
    };
    debug_assert!(gap.self_check().is_ok());
    gap
}

struct Builder {
    r: usize,
    next_vertex: usize,
    arcs: Vec<(usize, usize)>,
    levels: Vec<usize>,
}

impl Builder {
    fn alloc(&mut self) -> usize {
        let v = self.next_vertex;
        self.next_vertex += 1;
        v
    }

    fn arc(&mut self, tail: usize, head: usize, level: usize) {
        self.arcs.push((tail, head));
        self.levels.push(level);
    }

    fn recurse(&mut self, depth: usize, source: usize, sink: usize) {
        let r = self.r;
        if depth == 1 {
            let mut chain = Vec::with_capacity(r + 2);
            chain.push(source);
            for _ in 0..r {
                chain.push(self.alloc());
            }
            chain.push(sink);
            for i in 1..=r + 1 {
                self.arc(chain[i - 1], chain[i], 1);
                self.arc(chain[i], chain[i - 1], 1);
            }
            return;
        }

        // u-chain runs source → u_1 → ... → u_r → sink,
        // v-chain runs sink → v_r → ... → v_1 → source; every vertex ends
        // up with in-degree 2 and out-degree 2.
        let mut u = Vec::with_capacity(r + 2);
        u.push(source);
        for _ in 0..r {
            u.push(self.alloc());
        }
        u.push(sink);
        let mut v = Vec::with_capacity(r + 2);
        v.push(source);
        for _ in 0..r {
            v.push(self.alloc());
        }
        v.push(sink);

        for i in 1..=r + 1 {
            self.arc(u[i - 1], u[i], depth);
        }
        for i in 1..=r + 1 {
            self.arc(v[i], v[i - 1], depth);
        }
        for i in 1..=r {
            self.recurse(depth - 1, u[i], v[i]);
        }
    }
}

impl GapInstance {
    /// Structural sanity: per-level arc counts and costs, total cost, and
    /// strong connectivity of the whole construction.
    pub fn self_check(&self) -> Result<()> {
        let params = &self.params;
        let fail = |msg: String| Err(Error::Internal(format!("gap builder self-check: {msg}")));
        for level in 1..=params.depth {
            let expected = arcs_at_level(params, level);
            let count = self.levels.iter().filter(|&&l| l == level).count();
            if count != expected {
                return fail(format!(
                    "level {level} has {count} arcs, expected {expected}"
                ));
            }
            let cost: Rat = self
                .instance
                .arcs()
                .iter()
                .zip(&self.levels)
                .filter(|(_, &l)| l == level)
                .map(|(a, _)| &a.cost)
                .sum();
            if !cost.is_one() {
                return fail(format!("level {level} cost {} != 1", format_rat(&cost)));
            }
        }
        if self.instance.total_cost() != rat_usize(params.depth) {
            return fail("total cost differs from the depth".into());
        }
        let mut outdeg = vec![0usize; self.instance.n()];
        let mut indeg = vec![0usize; self.instance.n()];
        for arc in self.instance.arcs() {
            outdeg[arc.tail] += 1;
            indeg[arc.head] += 1;
        }
        for v in 0..self.instance.n() {
            if outdeg[v] != 2 || indeg[v] != 2 {
                return fail(format!(
                    "vertex {v} has degrees ({}, {}) instead of (2, 2)",
                    indeg[v], outdeg[v]
                ));
            }
        }
        let all: Vec<(usize, usize)> = self
            .instance
            .arcs()
            .iter()
            .map(|a| (a.tail, a.head))
            .collect();
        if !strongly_connected(self.instance.n(), &all) {
            return fail("construction is not strongly connected".into());
        }
        Ok(())
    }

    /// Sidecar JSON: per-arc levels plus the parameters.
    pub fn levels_json(&self) -> String {
        #[derive(Serialize)]
        struct LevelsJson<'a> {
            depth: usize,
            columns: usize,
            source: usize,
            levels: &'a [usize],
        }
        serde_json::to_string_pretty(&LevelsJson {
            depth: self.params.depth,
            columns: self.params.columns,
            source: self.source,
            levels: &self.levels,
        })
        .expect("levels serialize")
    }
}

/// Reachability in both directions from vertex 0 over the given arcs.
pub fn strongly_connected(n: usize, arcs: &[(usize, usize)]) -> bool {
    if n <= 1 {
        return true;
    }
    let mut forward = vec![Vec::new(); n];
    let mut backward = vec![Vec::new(); n];
    for &(t, h) in arcs {
        forward[t].push(h);
        backward[h].push(t);
    }
    reaches_all(&forward) && reaches_all(&backward)
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

#[derive(Clone, Debug)]
pub struct ExactOptions {
    pub max_nodes: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            max_nodes: 2_000_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExactOpt {
    pub value: Rat,
    pub arcs: ArcSet,
    pub nodes: usize,
}

/// Exact minimum cost of a spanning strongly connected arc subset, by
/// branch-and-bound on arc inclusion.
///
/// Lower bounds come from the cut LP on the residual decision (with a
/// shared, growing cut pool) and from per-vertex out/in degree cost bounds.
/// `upper_hint`, when given, must be a genuine upper bound on the optimum;
/// it tightens pruning but never replaces the found incumbent.
pub fn exact_opt(inst: &Instance, upper_hint: Option<&Rat>) -> Result<ExactOpt> {
    exact_opt_with(inst, upper_hint, &ExactOptions::default())
}

pub fn exact_opt_with(
    inst: &Instance,
    upper_hint: Option<&Rat>,
    options: &ExactOptions,
) -> Result<ExactOpt> {
    if inst.n() == 1 {
        return Ok(ExactOpt {
            value: Rat::zero(),
            arcs: ArcSet::new(),
            nodes: 0,
        });
    }
    let all: Vec<(usize, usize)> = inst.arcs().iter().map(|a| (a.tail, a.head)).collect();
    if !strongly_connected(inst.n(), &all) {
        return Err(Error::InvalidInput(
            "exact optimum needs a strongly connected instance".into(),
        ));
    }

    let mut search = Search {
        inst,
        pool: seed_singleton_cuts(inst.n()),
        incumbent_value: inst.total_cost(),
        incumbent_arcs: ArcSet::full(inst.num_arcs()),
        hint: upper_hint.cloned(),
        nodes: 0,
        max_nodes: options.max_nodes,
        lp_options: SimplexOptions {
            start: StartPolicy::UpperFirst,
            ..Default::default()
        },
    };
    let mut fix = vec![Fix::Free; inst.num_arcs()];
    search.node(&mut fix)?;
    Ok(ExactOpt {
        value: search.incumbent_value,
        arcs: search.incumbent_arcs,
        nodes: search.nodes,
    })
}

fn seed_singleton_cuts(n: usize) -> Vec<BTreeSet<usize>> {
    let mut rows: Vec<BTreeSet<usize>> = Vec::new();
    for v in 0..n {
        let singleton: BTreeSet<usize> = [v].into();
        let complement: BTreeSet<usize> = (0..n).filter(|&u| u != v).collect();
        for cut in [singleton, complement] {
            if !cut.is_empty() && cut.len() < n && !rows.contains(&cut) {
                rows.push(cut);
            }
        }
    }
    rows
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Fix {
    Free,
    In,
    Out,
}

struct Search<'a> {
    inst: &'a Instance,
    pool: Vec<BTreeSet<usize>>,
    incumbent_value: Rat,
    incumbent_arcs: ArcSet,
    hint: Option<Rat>,
    nodes: usize,
    max_nodes: usize,
    lp_options: SimplexOptions,
}

impl<'a> Search<'a> {
    fn node(&mut self, fix: &mut Vec<Fix>) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::BudgetExceeded {
                incumbent: self.incumbent_value.clone(),
            });
        }

        // The undecided-plus-forced arcs must still span a strongly
        // connected graph.
        let support: Vec<(usize, usize)> = self
            .inst
            .arcs()
            .iter()
            .enumerate()
            .filter(|(a, _)| fix[*a] != Fix::Out)
            .map(|(_, arc)| (arc.tail, arc.head))
            .collect();
        if !strongly_connected(self.inst.n(), &support) {
            return Ok(());
        }

        match self.degree_bound(fix) {
            None => return Ok(()),
            Some(bound) if self.pruned(&bound) => return Ok(()),
            Some(_) => {}
        }

        // Cut LP with separation; pool rows are valid at every node.
        let solution = loop {
            let sol = self.solve_node_lp(fix)?;
            if sol.is_none() {
                return Ok(());
            }
            let sol = sol.unwrap();
            if self.pruned(&sol.1) {
                return Ok(());
            }
            let caps = CapacityVector::new(sol.0.clone())?;
            match min_violated_cut(self.inst, &caps, 0, 1) {
                Some(cut) => {
                    if self.pool.contains(&cut.cut_set) {
                        return Err(Error::Internal(
                            "separation returned an existing cut row".into(),
                        ));
                    }
                    self.pool.push(cut.cut_set);
                }
                None => break sol,
            }
        };
        let (x, value) = solution;

        if let Some(branch_arc) = (0..x.len()).find(|&a| !x[a].is_zero() && !x[a].is_one()) {
            fix[branch_arc] = Fix::In;
            self.node(fix)?;
            fix[branch_arc] = Fix::Out;
            self.node(fix)?;
            fix[branch_arc] = Fix::Free;
            return Ok(());
        }

        // Integral and separation-clean: a strongly connected subgraph
        // strictly better than the incumbent.
        self.incumbent_value = value;
        self.incumbent_arcs = x
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_one())
            .map(|(a, _)| a)
            .collect();
        Ok(())
    }

    fn pruned(&self, bound: &Rat) -> bool {
        if bound >= &self.incumbent_value {
            return true;
        }
        match &self.hint {
            Some(hint) => bound > hint,
            None => false,
        }
    }

    fn solve_node_lp(&self, fix: &[Fix]) -> Result<Option<(Vec<Rat>, Rat)>> {
        let m = self.inst.num_arcs();
        let mut lp = LinearProgram::new(m, Sense::Minimize);
        for (a, arc) in self.inst.arcs().iter().enumerate() {
            lp.set_objective(a, arc.cost.clone());
            let (lo, up) = match fix[a] {
                Fix::Free => (Rat::zero(), Rat::one()),
                Fix::In => (Rat::one(), Rat::one()),
                Fix::Out => (Rat::zero(), Rat::zero()),
            };
            lp.set_bounds(a, Some(lo), Some(up));
        }
        for cut in &self.pool {
            lp.add_row(cut_row(self.inst, cut), Relation::Ge, Rat::one());
        }
        let sol = solve_with(&lp, &self.lp_options)?;
        match sol.status {
            Status::Optimal => Ok(Some((sol.primal, sol.value))),
            Status::Infeasible => Ok(None),
            Status::Unbounded => Err(Error::Internal("bounded node LP reported unbounded".into())),
        }
    }

    /// Every vertex needs at least one leaving and one entering arc; sums of
    /// the cheapest candidates bound the cost from below. `None` means some
    /// vertex cannot be covered at all.
    fn degree_bound(&self, fix: &[Fix]) -> Option<Rat> {
        let n = self.inst.n();
        let mut fixed_cost = Rat::zero();
        let mut out_covered = vec![false; n];
        let mut in_covered = vec![false; n];
        for (a, arc) in self.inst.arcs().iter().enumerate() {
            if fix[a] == Fix::In {
                fixed_cost += &arc.cost;
                out_covered[arc.tail] = true;
                in_covered[arc.head] = true;
            }
        }
        let mut out_extra = Rat::zero();
        let mut in_extra = Rat::zero();
        for v in 0..n {
            if !out_covered[v] {
                let best = self
                    .inst
                    .arcs()
                    .iter()
                    .enumerate()
                    .filter(|(a, arc)| fix[*a] == Fix::Free && arc.tail == v)
                    .map(|(_, arc)| &arc.cost)
                    .min()?;
                out_extra += best;
            }
            if !in_covered[v] {
                let best = self
                    .inst
                    .arcs()
                    .iter()
                    .enumerate()
                    .filter(|(a, arc)| fix[*a] == Fix::Free && arc.head == v)
                    .map(|(_, arc)| &arc.cost)
                    .min()?;
                in_extra += best;
            }
        }
        let extra = if out_extra > in_extra {
            out_extra
        } else {
            in_extra
        };
        Some(fixed_cost + extra)
    }
}

#[derive(Clone, Debug)]
pub enum ExactStatus {
    NotComputed,
    Proven(ExactOpt),
    Budget { incumbent: Rat },
}

#[derive(Clone, Debug)]
pub struct GapReport {
    pub params: GapParams,
    pub lp_value: Rat,
    pub exact: ExactStatus,
    /// `exact / lp_value` when the optimum was proven.
    pub ratio: Option<Rat>,
    /// Proven lower bound on the optimum of this family: `(3d-1)/4 - 3d/r`.
    pub opt_lower_bound: Rat,
    /// Guaranteed asymptotic gap of the family: `3/2 - 8/d`.
    pub gap_lower_bound: Rat,
    pub columns_cover_depth: bool,
}

impl GapReport {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct ReportJson {
            depth: usize,
            columns: usize,
            lp_value: String,
            exact_opt: Option<String>,
            exact_opt_is_proven: bool,
            ratio: Option<String>,
            ratio_float: Option<f64>,
            opt_lower_bound: String,
            gap_lower_bound: String,
            columns_cover_depth: bool,
        }
        let (exact_opt, proven) = match &self.exact {
            ExactStatus::NotComputed => (None, false),
            ExactStatus::Proven(opt) => (Some(format_rat(&opt.value)), true),
            ExactStatus::Budget { incumbent } => (Some(format_rat(incumbent)), false),
        };
        let dto = ReportJson {
            depth: self.params.depth,
            columns: self.params.columns,
            lp_value: format_rat(&self.lp_value),
            exact_opt,
            exact_opt_is_proven: proven,
            ratio: self.ratio.as_ref().map(format_rat),
            ratio_float: self.ratio.as_ref().map(rat_to_f64),
            opt_lower_bound: format_rat(&self.opt_lower_bound),
            gap_lower_bound: format_rat(&self.gap_lower_bound),
            columns_cover_depth: self.columns_cover_depth,
        };
        serde_json::to_string_pretty(&dto).expect("report serializes")
    }
}

/// Builds the instance, solves the LP, checks the structural guarantees
/// (LP value at most d/2; the all-halves vector separates clean), and
/// optionally computes the exact optimum.
///
/// A branch-and-bound budget failure degrades to a partial report carrying
/// the incumbent.
pub fn gap_report(params: &GapParams, compute_exact: bool) -> Result<GapReport> {
    let gap = build_gap_instance(params);
    gap.self_check()?;
    let inst = &gap.instance;

    let lp = solve_lp_acss(inst, gap.source)?;
    let half_of_total = rat_usize(params.depth) / rat_usize(2);
    if lp.value > half_of_total {
        return Err(Error::Internal(format!(
            "LP value {} exceeds d/2 = {}",
            format_rat(&lp.value),
            format_rat(&half_of_total)
        )));
    }
    let halves =
        CapacityVector::new(vec![rat(1, 2); inst.num_arcs()]).expect("halves are nonnegative");
    if let Some(cut) = min_violated_cut(inst, &halves, gap.source, 1) {
        return Err(Error::Internal(format!(
            "all-halves vector violates the cut {{{:?}}}",
            cut.cut_set
        )));
    }

    let d = params.depth as i64;
    let r = params.columns as i64;
    let opt_lower_bound = rat(3 * d - 1, 4) - rat(3 * d, r);
    let gap_lower_bound = rat(3, 2) - rat(8, d);

    let (exact, ratio) = if compute_exact {
        match exact_opt(inst, None) {
            Ok(opt) => {
                if opt.value < lp.value {
                    return Err(Error::Internal(
                        "exact optimum below the LP relaxation".into(),
                    ));
                }
                if opt.value < opt_lower_bound {
                    return Err(Error::Internal(
                        "exact optimum below the proven family lower bound".into(),
                    ));
                }
                let ratio = &opt.value / &lp.value;
                (ExactStatus::Proven(opt), Some(ratio))
            }
            Err(Error::BudgetExceeded { incumbent }) => (ExactStatus::Budget { incumbent }, None),
            Err(other) => return Err(other),
        }
    } else {
        (ExactStatus::NotComputed, None)
    };

    Ok(GapReport {
        params: *params,
        lp_value: lp.value,
        exact,
        ratio,
        opt_lower_bound,
        gap_lower_bound,
        columns_cover_depth: params.columns_cover_depth(),
    })
}
