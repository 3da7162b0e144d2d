//! k-arborescence machinery: validity checking, minimal-set pruning,
//! minimum-weight k-arborescence sets via integral vertices of the
//! arborescence cut polytope, and convex decomposition of LP solutions by
//! column generation.
//!
//! The out-direction polytope used throughout is
//!
//! ```text
//! { y : y(δ⁻(U)) ≥ k  for all nonempty U ⊆ V \ {root},  0 ≤ y ≤ 1 }
//! ```
//!
//! whose integral members are exactly the arc sets containing k arc-disjoint
//! spanning out-arborescences rooted at `root` (each vertex set that avoids
//! the root must be entered at least k times). Every vertex of this polytope
//! is 0/1, which the solver asserts on every pricing solve. The in-direction
//! mirrors all arcs and reuses the out-direction code path; arc indices are
//! unchanged by the mirroring.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{max_flow, CapacityVector};
use crate::graph::{ArcSet, Instance};
use crate::lpacss::FractionalSolution;
use crate::rational::{format_rat, rat_usize, Rat};
use crate::simplex::{
    solve_with, LinearProgram, Relation, Sense, SimplexOptions, StartPolicy, Status,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Out => "out",
            Direction::In => "in",
        }
    }
}

/// An arc set containing k arc-disjoint arborescences with a common root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArborescenceSet {
    pub arcs: ArcSet,
    pub root: usize,
    pub k: usize,
    pub direction: Direction,
}

/// True iff `arcs` contains k arc-disjoint spanning root-out (root-in)
/// arborescences, decided by n-1 unit-capacity max-flow checks.
pub fn is_k_arborescence(
    inst: &Instance,
    arcs: &ArcSet,
    root: usize,
    k: usize,
    direction: Direction,
) -> bool {
    if inst.n() == 1 {
        return true;
    }
    let cap = CapacityVector::indicator(arcs, inst.num_arcs());
    let need = rat_usize(k);
    for v in 0..inst.n() {
        if v == root {
            continue;
        }
        let (s, t) = match direction {
            Direction::Out => (root, v),
            Direction::In => (v, root),
        };
        if max_flow(inst, &cap, s, t).0 < need {
            return false;
        }
    }
    true
}

/// Greedily removes arcs in descending index order while the set still
/// contains a k-arborescence; the result is inclusion-minimal.
///
/// Expects `arcs` to pass [`is_k_arborescence`] already.
pub fn prune_to_minimal(
    inst: &Instance,
    arcs: &ArcSet,
    root: usize,
    k: usize,
    direction: Direction,
) -> ArcSet {
    debug_assert!(is_k_arborescence(inst, arcs, root, k, direction));
    let mut current = arcs.clone();
    // Each non-root vertex needs k entering (out) or leaving (in) arcs, so
    // a set of size exactly k(n-1) is already minimal.
    if current.len() == k * (inst.n() - 1) {
        return current;
    }
    let mut degree = vec![0usize; inst.n()];
    for a in current.iter() {
        let arc = inst.arc(a);
        match direction {
            Direction::Out => degree[arc.head] += 1,
            Direction::In => degree[arc.tail] += 1,
        }
    }
    let candidates: Vec<usize> = current.iter().collect();
    for &a in candidates.iter().rev() {
        let arc = inst.arc(a);
        let pivot_vertex = match direction {
            Direction::Out => arc.head,
            Direction::In => arc.tail,
        };
        if pivot_vertex != root && degree[pivot_vertex] <= k {
            continue; // removal would starve the vertex
        }
        current.remove(a);
        if is_k_arborescence(inst, &current, root, k, direction) {
            degree[pivot_vertex] -= 1;
        } else {
            current.insert(a);
        }
    }
    current
}

/// Cutting-plane solver for the out-arborescence polytope of one instance,
/// reusable across objectives so generated cut rows are shared.
struct OutPolytopeSolver<'a> {
    inst: &'a Instance,
    root: usize,
    k: usize,
    /// Arcs the polytope may use (the rest are implicitly zero); position in
    /// `cols` is the LP variable index.
    cols: Vec<usize>,
    /// Cut sets W (containing the root) whose leaving arcs must sum to >= k.
    pool: Vec<BTreeSet<usize>>,
}

impl<'a> OutPolytopeSolver<'a> {
    fn new(inst: &'a Instance, root: usize, k: usize, allowed: ArcSet) -> Result<Self> {
        if root >= inst.n() {
            return Err(Error::InvalidInput(format!(
                "root {root} out of range (n = {})",
                inst.n()
            )));
        }
        if !is_k_arborescence(inst, &allowed, root, k, Direction::Out) {
            return Err(Error::ArborescenceInfeasible {
                root,
                k,
                direction: "out",
            });
        }
        // Seed with the in-cut of every non-root vertex, i.e. W = V \ {v}.
        let pool = (0..inst.n())
            .filter(|&v| v != root)
            .map(|v| (0..inst.n()).filter(|&u| u != v).collect())
            .collect();
        let cols = allowed.iter().collect();
        Ok(OutPolytopeSolver {
            inst,
            root,
            k,
            cols,
            pool,
        })
    }

    fn cut_row(&self, cut_set: &BTreeSet<usize>) -> Vec<(usize, Rat)> {
        self.cols
            .iter()
            .enumerate()
            .filter(|(_, &a)| {
                let arc = self.inst.arc(a);
                cut_set.contains(&arc.tail) && !cut_set.contains(&arc.head)
            })
            .map(|(col, _)| (col, Rat::one()))
            .collect()
    }

    /// Minimum of `w·y` over the polytope. Returns the (pruned) integral
    /// minimizer and its weight under `w`.
    fn min_weight(&mut self, weights: &[Rat]) -> Result<(ArcSet, Rat)> {
        // Shortcut: if the zero-weight arcs already carry a k-arborescence,
        // weight zero is optimal and no LP is needed.
        let zero_arcs: ArcSet = self
            .cols
            .iter()
            .copied()
            .filter(|&a| weights[a].is_zero())
            .collect();
        if is_k_arborescence(self.inst, &zero_arcs, self.root, self.k, Direction::Out) {
            let pruned = prune_to_minimal(self.inst, &zero_arcs, self.root, self.k, Direction::Out);
            return Ok((pruned, Rat::zero()));
        }

        let options = SimplexOptions {
            start: StartPolicy::UpperFirst,
            ..Default::default()
        };
        let need = rat_usize(self.k);
        loop {
            let mut lp = LinearProgram::new(self.cols.len(), Sense::Minimize);
            for (col, &a) in self.cols.iter().enumerate() {
                lp.set_objective(col, weights[a].clone());
                lp.set_bounds(col, Some(Rat::zero()), Some(Rat::one()));
            }
            for cut_set in &self.pool {
                lp.add_row(self.cut_row(cut_set), Relation::Ge, need.clone());
            }
            let sol = solve_with(&lp, &options)?;
            if sol.status != Status::Optimal {
                return Err(Error::Internal(format!(
                    "arborescence LP ended {:?} on a feasible instance",
                    sol.status
                )));
            }

            let mut caps = vec![Rat::zero(); self.inst.num_arcs()];
            for (col, &a) in self.cols.iter().enumerate() {
                caps[a] = sol.primal[col].clone();
            }
            let caps = CapacityVector::new(caps)?;
            match self.separate(&caps) {
                Some(cut_set) => {
                    if self.pool.contains(&cut_set) {
                        return Err(Error::Internal(
                            "separation returned an existing cut row".into(),
                        ));
                    }
                    self.pool.push(cut_set);
                }
                None => {
                    let mut set = ArcSet::new();
                    for (col, &a) in self.cols.iter().enumerate() {
                        let y = &sol.primal[col];
                        if y.is_one() {
                            set.insert(a);
                        } else if !y.is_zero() {
                            return Err(Error::Internal(format!(
                                "non-integral arborescence polytope vertex: y[{a}] = {}",
                                format_rat(y)
                            )));
                        }
                    }
                    let pruned =
                        prune_to_minimal(self.inst, &set, self.root, self.k, Direction::Out);
                    let weight: Rat = pruned.iter().map(|a| &weights[a]).sum();
                    debug_assert_eq!(weight, sol.value);
                    return Ok((pruned, weight));
                }
            }
        }
    }

    /// Most violated cut `y(δ⁺(W)) < k` with `root ∈ W`, via n-1 max-flows
    /// from the root; ties keep the first cut found in ascending vertex
    /// order.
    fn separate(&self, caps: &CapacityVector) -> Option<BTreeSet<usize>> {
        let need = rat_usize(self.k);
        let mut best: Option<(Rat, BTreeSet<usize>)> = None;
        for v in 0..self.inst.n() {
            if v == self.root {
                continue;
            }
            let (value, cut) = max_flow(self.inst, caps, self.root, v);
            if value < need && best.as_ref().is_none_or(|(b, _)| value < *b) {
                best = Some((value, cut.cut_set));
            }
        }
        best.map(|(_, cut_set)| cut_set)
    }
}

/// Minimum-weight arc set containing a k-arborescence, found as an integral
/// vertex of the arborescence cut polytope and pruned to an inclusion-minimal
/// set. Weights must be nonnegative.
pub fn min_weight_k_arborescence(
    inst: &Instance,
    weights: &[Rat],
    root: usize,
    k: usize,
    direction: Direction,
) -> Result<ArborescenceSet> {
    if weights.len() != inst.num_arcs() {
        return Err(Error::InvalidInput("weight vector length mismatch".into()));
    }
    if weights.iter().any(|w| w.is_negative()) {
        return Err(Error::InvalidInput("weights must be nonnegative".into()));
    }
    let work;
    let oriented = match direction {
        Direction::Out => inst,
        Direction::In => {
            work = inst.reversed();
            &work
        }
    };
    let allowed = ArcSet::full(inst.num_arcs());
    let mut solver = OutPolytopeSolver::new(oriented, root, k, allowed).map_err(|e| match e {
        Error::ArborescenceInfeasible { root, k, .. } => Error::ArborescenceInfeasible {
            root,
            k,
            direction: direction.as_str(),
        },
        other => other,
    })?;
    let (arcs, _) = solver.min_weight(weights)?;
    Ok(ArborescenceSet {
        arcs,
        root,
        k,
        direction,
    })
}

/// A convex combination of k-arborescence sets whose per-arc marginals are
/// dominated by the fractional vector it was built from.
#[derive(Clone, Debug)]
pub struct ConvexCombination {
    pub terms: Vec<(Rat, ArborescenceSet)>,
    pub root: usize,
    pub k: usize,
    pub direction: Direction,
    pub num_arcs: usize,
}

impl ConvexCombination {
    pub fn marginal(&self, arc: usize) -> Rat {
        self.terms
            .iter()
            .filter(|(_, term)| term.arcs.contains(arc))
            .map(|(lambda, _)| lambda)
            .sum()
    }

    pub fn marginals(&self) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.num_arcs];
        for (lambda, term) in &self.terms {
            for a in term.arcs.iter() {
                out[a] += lambda;
            }
        }
        out
    }

    pub fn total_weight(&self) -> Rat {
        self.terms.iter().map(|(lambda, _)| lambda).sum()
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct TermJson {
            lambda: String,
            arcs: Vec<usize>,
        }
        #[derive(Serialize)]
        struct CombJson {
            direction: &'static str,
            root: usize,
            k: usize,
            terms: Vec<TermJson>,
        }
        let dto = CombJson {
            direction: self.direction.as_str(),
            root: self.root,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(lambda, term)| TermJson {
                    lambda: format_rat(lambda),
                    arcs: term.arcs.iter().collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("combination serializes")
    }
}

/// Writes `x` as a convex combination of k-arborescence sets with marginals
/// at most `x`, by Dantzig-Wolfe column generation.
///
/// The master maximizes the total weight of the generated terms subject to
/// the per-arc marginal caps; pricing asks for a minimum-weight set under the
/// master's row duals and stops once no set weighs less than one. The final
/// master value is at least one, and the combination is rescaled so the
/// weights sum to one exactly.
pub fn decompose(
    inst: &Instance,
    x: &FractionalSolution,
    root: usize,
    k: usize,
    direction: Direction,
) -> Result<ConvexCombination> {
    if x.x.len() != inst.num_arcs() {
        return Err(Error::InvalidInput(
            "solution vector length mismatch".into(),
        ));
    }
    if x.x.iter().any(|v| v.is_negative() || v > &Rat::one()) {
        return Err(Error::InvalidInput(
            "solution vector outside the unit box".into(),
        ));
    }
    if inst.n() == 1 {
        // The empty set spans a single vertex; the master below would have
        // no marginal row to cap an empty term.
        return Ok(ConvexCombination {
            terms: vec![(
                Rat::one(),
                ArborescenceSet {
                    arcs: ArcSet::new(),
                    root,
                    k,
                    direction,
                },
            )],
            root,
            k,
            direction,
            num_arcs: inst.num_arcs(),
        });
    }

    let work;
    let oriented = match direction {
        Direction::Out => inst,
        Direction::In => {
            work = inst.reversed();
            &work
        }
    };

    // Membership check: x restricted to its support must cover every cut
    // separating the root, in the oriented sense.
    let caps = CapacityVector::new(x.x.clone())?;
    let need = rat_usize(k);
    for v in 0..oriented.n() {
        if v == root {
            continue;
        }
        let (value, cut) = max_flow(oriented, &caps, root, v);
        if value < need {
            return Err(Error::NotInPolytope {
                root,
                direction: direction.as_str(),
                cut,
            });
        }
    }

    let support: ArcSet = (0..inst.num_arcs())
        .filter(|&a| !x.x[a].is_zero())
        .collect();
    let support_cols: Vec<usize> = support.iter().collect();
    let mut solver = OutPolytopeSolver::new(oriented, root, k, support)?;

    let mut columns: Vec<ArcSet> = Vec::new();
    let master_sol = loop {
        // Master: maximize total term weight under the marginal caps.
        let mut master = LinearProgram::new(columns.len(), Sense::Maximize);
        for j in 0..columns.len() {
            master.set_objective(j, Rat::one());
            master.set_bounds(j, Some(Rat::zero()), None);
        }
        for &a in &support_cols {
            let coeffs: Vec<(usize, Rat)> = columns
                .iter()
                .enumerate()
                .filter(|(_, set)| set.contains(a))
                .map(|(j, _)| (j, Rat::one()))
                .collect();
            master.add_row(coeffs, Relation::Le, x.x[a].clone());
        }
        let sol = crate::simplex::solve(&master)?;
        if sol.status != Status::Optimal {
            return Err(Error::Internal(format!(
                "decomposition master LP ended {:?}",
                sol.status
            )));
        }

        let mut weights = vec![Rat::zero(); inst.num_arcs()];
        for (row, &a) in support_cols.iter().enumerate() {
            debug_assert!(!sol.duals[row].is_negative());
            weights[a] = sol.duals[row].clone();
        }
        let (term, weight) = solver.min_weight(&weights)?;
        if weight < Rat::one() {
            if columns.contains(&term) {
                return Err(Error::Internal(
                    "pricing returned a duplicate improving column".into(),
                ));
            }
            columns.push(term);
        } else {
            break sol;
        }
    };

    if master_sol.value < Rat::one() {
        return Err(Error::Internal(format!(
            "decomposition master value {} is below one",
            format_rat(&master_sol.value)
        )));
    }

    let scale = master_sol.value.clone().recip();
    let terms: Vec<(Rat, ArborescenceSet)> = columns
        .into_iter()
        .zip(&master_sol.primal)
        .filter(|(_, lambda)| !lambda.is_zero())
        .map(|(arcs, lambda)| {
            (
                lambda * &scale,
                ArborescenceSet {
                    arcs,
                    root,
                    k,
                    direction,
                },
            )
        })
        .collect();

    let combination = ConvexCombination {
        terms,
        root,
        k,
        direction,
        num_arcs: inst.num_arcs(),
    };
    debug_assert!(combination.total_weight().is_one());
    Ok(combination)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_instance;
    use crate::rational::{rat, rat_int};

    fn path4() -> Instance {
        parse_instance("p kacss 4 3 1\na 0 1 1/1\na 1 2 1/1\na 2 3 1/1").unwrap()
    }

    fn cycle(n: usize) -> Instance {
        let text = (0..n)
            .map(|i| format!("a {} {} 1/1", i, (i + 1) % n))
            .collect::<Vec<_>>()
            .join("\n");
        parse_instance(&format!("p kacss {n} {n} 1\n{text}")).unwrap()
    }

    /// Bidirected triangle: arcs 0..3 are 0→1,1→2,2→0; arcs 3..6 reversed.
    fn bitriangle() -> Instance {
        parse_instance(
            "p kacss 3 6 1\na 0 1 1/1\na 1 2 1/1\na 2 0 1/1\na 1 0 1/1\na 2 1 1/1\na 0 2 1/1",
        )
        .unwrap()
    }

    #[test]
    fn path_is_an_out_arborescence() {
        let inst = path4();
        let all = ArcSet::full(3);
        assert!(is_k_arborescence(&inst, &all, 0, 1, Direction::Out));
        assert!(!is_k_arborescence(&inst, &all, 0, 1, Direction::In));
        assert!(is_k_arborescence(&inst, &all, 3, 1, Direction::In));
    }

    #[test]
    fn cycle_spans_every_root_but_only_once() {
        let inst = cycle(5);
        let all = ArcSet::full(5);
        for root in 0..5 {
            assert!(is_k_arborescence(&inst, &all, root, 1, Direction::Out));
            assert!(is_k_arborescence(&inst, &all, root, 1, Direction::In));
        }
        assert!(!is_k_arborescence(&inst, &all, 0, 2, Direction::Out));
    }

    #[test]
    fn min_weight_on_cycle_drops_the_return_arc() {
        let inst = cycle(4);
        let w = vec![Rat::one(); 4];
        let arb = min_weight_k_arborescence(&inst, &w, 0, 1, Direction::Out).unwrap();
        assert_eq!(arb.arcs.len(), 3);
        assert!(!arb.arcs.contains(3), "arc 3 re-enters the root");
        let weight: Rat = arb.arcs.iter().map(|a| &w[a]).sum();
        assert_eq!(weight, rat_int(3));
    }

    #[test]
    fn min_weight_prefers_the_free_orientation() {
        let inst = bitriangle();
        let mut w = vec![Rat::zero(); 6];
        for cost in w.iter_mut().skip(3) {
            *cost = Rat::one();
        }
        let arb = min_weight_k_arborescence(&inst, &w, 0, 1, Direction::Out).unwrap();
        let weight: Rat = arb.arcs.iter().map(|a| &w[a]).sum();
        assert_eq!(weight, Rat::zero());
        assert!(arb.arcs.iter().all(|a| a < 3));
    }

    #[test]
    fn union_of_in_and_out_sets_is_k_arc_connected() {
        use crate::flow::is_k_arc_connected;
        for seed in 0..4 {
            let inst = crate::graph::random_k_connected(7, 2, 5, seed).unwrap();
            let w = vec![Rat::one(); inst.num_arcs()];
            let t_in = min_weight_k_arborescence(&inst, &w, 0, 2, Direction::In).unwrap();
            let t_out = min_weight_k_arborescence(&inst, &w, 0, 2, Direction::Out).unwrap();
            let union = t_in.arcs.union(&t_out.arcs);
            assert!(is_k_arc_connected(&inst, &union, 2), "seed {seed}");
        }
    }

    #[test]
    fn infeasible_direction_is_reported() {
        let inst = path4();
        let w = vec![Rat::one(); 3];
        let err = min_weight_k_arborescence(&inst, &w, 0, 1, Direction::In).unwrap_err();
        assert!(matches!(err, Error::ArborescenceInfeasible { .. }), "{err}");
    }

    #[test]
    fn prune_removes_redundant_chord() {
        // 4-cycle plus a chord 0→2 (arc 4).
        let inst =
            parse_instance("p kacss 4 5 1\na 0 1 1/1\na 1 2 1/1\na 2 3 1/1\na 3 0 1/1\na 0 2 1/1")
                .unwrap();
        let mut arcs = ArcSet::full(5);
        arcs.remove(3);
        let pruned = prune_to_minimal(&inst, &arcs, 0, 1, Direction::Out);
        assert_eq!(pruned, [0usize, 1, 2].into_iter().collect());
    }

    #[test]
    fn prune_keeps_minimal_sets_fixed() {
        let inst = path4();
        let all = ArcSet::full(3);
        assert_eq!(prune_to_minimal(&inst, &all, 0, 1, Direction::Out), all);
    }

    #[test]
    fn pruned_size_respects_degree_bound() {
        let inst = crate::graph::random_k_connected(6, 2, 6, 5).unwrap();
        let all = ArcSet::full(inst.num_arcs());
        let pruned = prune_to_minimal(&inst, &all, 0, 2, Direction::Out);
        assert!(pruned.len() >= 2 * (inst.n() - 1));
        assert!(is_k_arborescence(&inst, &pruned, 0, 2, Direction::Out));
    }

    fn frac(inst: &Instance, x: Vec<Rat>) -> FractionalSolution {
        let value = inst.arcs().iter().zip(&x).map(|(a, v)| &a.cost * v).sum();
        FractionalSolution {
            x,
            value,
            cuts: Vec::new(),
            root: 0,
            iterations: Vec::new(),
        }
    }

    #[test]
    fn indicator_vector_decomposes_to_itself() {
        let inst = cycle(4);
        let mut x = vec![Rat::one(); 4];
        x[3] = Rat::zero(); // path 0→1→2→3 = an out-arborescence from 0
        let sol = frac(&inst, x);
        let comb = decompose(&inst, &sol, 0, 1, Direction::Out).unwrap();
        assert_eq!(comb.terms.len(), 1);
        assert_eq!(comb.terms[0].0, rat_int(1));
        assert_eq!(comb.terms[0].1.arcs, [0usize, 1, 2].into_iter().collect());
    }

    #[test]
    fn half_triangle_decomposition_dominates_marginals() {
        let inst = bitriangle();
        let sol = frac(&inst, vec![rat(1, 2); 6]);
        for direction in [Direction::Out, Direction::In] {
            let comb = decompose(&inst, &sol, 0, 1, direction).unwrap();
            assert!(comb.terms.len() >= 2);
            assert!(comb.total_weight().is_one());
            for a in 0..6 {
                assert!(comb.marginal(a) <= rat(1, 2), "arc {a} oversampled");
            }
            for (_, term) in &comb.terms {
                assert!(is_k_arborescence(&inst, &term.arcs, 0, 1, direction));
            }
        }
    }

    #[test]
    fn vector_outside_polytope_is_rejected() {
        let inst = cycle(4);
        let mut x = vec![Rat::one(); 4];
        x[1] = Rat::zero(); // vertex 2 unreachable from 0 on the support
        let sol = frac(&inst, x);
        let err = decompose(&inst, &sol, 0, 1, Direction::Out).unwrap_err();
        assert!(matches!(err, Error::NotInPolytope { .. }), "{err}");
    }

    #[test]
    fn single_vertex_decomposes_to_the_empty_set() {
        let inst = crate::graph::Instance::new(1, vec![], 1).unwrap();
        let sol = frac(&inst, vec![]);
        for direction in [Direction::Out, Direction::In] {
            let comb = decompose(&inst, &sol, 0, 1, direction).unwrap();
            assert_eq!(comb.terms.len(), 1);
            assert!(comb.terms[0].1.arcs.is_empty());
            assert!(comb.total_weight().is_one());
        }
    }

    #[test]
    fn combination_json_shape() {
        let inst = cycle(3);
        let sol = frac(&inst, vec![Rat::one(); 3]);
        let comb = decompose(&inst, &sol, 0, 1, Direction::Out).unwrap();
        let json: serde_json::Value = serde_json::from_str(&comb.to_json()).unwrap();
        assert_eq!(json["direction"], "out");
        assert_eq!(json["root"], 0);
        assert_eq!(json["k"], 1);
        assert!(json["terms"].as_array().unwrap().len() == 1);
        assert_eq!(json["terms"][0]["lambda"], "1/1");
    }
}
