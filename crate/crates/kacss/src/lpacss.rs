//! Cutting-plane driver for the cut-covering LP: minimize total cost subject
//! to `x(δ⁺(U)) ≥ k` for every nonempty proper vertex set and `0 ≤ x ≤ 1`.
//!
//! The row-restricted LP starts from the singleton cuts (out- and in-degree
//! of every vertex) and then alternates an exact simplex solve with the
//! max-flow separation oracle, adding the single most violated cut per round.
//! On return the point is feasible for the full exponential family (the loop
//! exits on a clean separation pass) and optimal for a restriction of it, so
//! it is an optimal extreme point of the full polytope.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{is_k_arc_connected, min_violated_cut, CapacityVector, CutCertificate};
use crate::graph::{ArcSet, Instance};
use crate::rational::{format_rat, rat_usize, Rat};
use crate::simplex::{
    solve_with, LinearProgram, Relation, Sense, SimplexOptions, StartPolicy, Status,
};

/// An optimal extreme point of the cut-covering LP, together with the cut
/// rows the separation loop generated and a per-iteration transcript.
#[derive(Clone, Debug)]
pub struct FractionalSolution {
    /// Per-arc value in `[0, 1]`.
    pub x: Vec<Rat>,
    /// Objective value `Σ c_a x_a`.
    pub value: Rat,
    /// Cuts added by separation, with their violated values at the time.
    pub cuts: Vec<CutCertificate>,
    /// Root vertex used by the separation reduction.
    pub root: usize,
    pub iterations: Vec<IterationRecord>,
}

#[derive(Clone, Debug)]
pub struct IterationRecord {
    pub objective: Rat,
    /// Vertex list of the cut added after this solve; `None` on the final,
    /// clean separation pass.
    pub added_cut: Option<Vec<usize>>,
}

impl FractionalSolution {
    /// `x(A)`: the sum of all coordinates.
    pub fn x_total(&self) -> Rat {
        self.x.iter().sum()
    }

    /// `x(F)` for an arbitrary arc set `F`.
    pub fn x_of(&self, arcs: &ArcSet) -> Rat {
        arcs.iter().map(|a| &self.x[a]).sum()
    }

    /// JSON transcript: iterations, cut vertex lists, objective trajectory.
    pub fn transcript_json(&self) -> String {
        #[derive(Serialize)]
        struct IterationJson {
            objective: String,
            added_cut: Option<Vec<usize>>,
        }
        #[derive(Serialize)]
        struct TranscriptJson {
            root: usize,
            iterations: Vec<IterationJson>,
        }
        let dto = TranscriptJson {
            root: self.root,
            iterations: self
                .iterations
                .iter()
                .map(|it| IterationJson {
                    objective: format_rat(&it.objective),
                    added_cut: it.added_cut.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dto).expect("transcript serializes")
    }
}

/// The arcs with strictly fractional value, `{a : 0 < x_a < 1}`.
pub fn fractional_support(sol: &FractionalSolution) -> ArcSet {
    sol.x
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero() && !v.is_one())
        .map(|(a, _)| a)
        .collect()
}

/// Solves the cut-covering LP for `inst` to an optimal extreme point.
///
/// Reports [`Error::NotKArcConnected`] with a witnessing cut when the full
/// arc set itself is infeasible.
pub fn solve_lp_acss(inst: &Instance, root: usize) -> Result<FractionalSolution> {
    if root >= inst.n() {
        return Err(Error::InvalidInput(format!(
            "root {root} out of range (n = {})",
            inst.n()
        )));
    }
    let k = inst.k();
    let m = inst.num_arcs();

    // Infeasibility has a combinatorial witness: the all-ones vector
    // already misses some cut.
    let ones = CapacityVector::ones(m);
    if let Some(cut) = min_violated_cut(inst, &ones, root, k) {
        return Err(Error::NotKArcConnected { k, cut });
    }
    debug_assert!(is_k_arc_connected(inst, &ArcSet::full(m), k));

    // Seed the restricted LP with the singleton cuts; dedupe handles n = 2
    // where out- and in-cuts coincide.
    let mut rows: Vec<BTreeSet<usize>> = Vec::new();
    for v in 0..inst.n() {
        let singleton: BTreeSet<usize> = [v].into();
        let complement: BTreeSet<usize> = (0..inst.n()).filter(|&u| u != v).collect();
        for cut in [singleton, complement] {
            if !cut.is_empty() && cut.len() < inst.n() && !rows.contains(&cut) {
                rows.push(cut);
            }
        }
    }

    let options = SimplexOptions {
        start: StartPolicy::UpperFirst,
        ..Default::default()
    };
    let need = rat_usize(k);
    let mut cuts: Vec<CutCertificate> = Vec::new();
    let mut iterations: Vec<IterationRecord> = Vec::new();

    loop {
        let mut lp = LinearProgram::new(m, Sense::Minimize);
        for (a, arc) in inst.arcs().iter().enumerate() {
            lp.set_objective(a, arc.cost.clone());
            lp.set_bounds(a, Some(Rat::zero()), Some(Rat::one()));
        }
        for cut_set in &rows {
            lp.add_row(cut_row(inst, cut_set), Relation::Ge, need.clone());
        }
        let sol = solve_with(&lp, &options)?;
        if sol.status != Status::Optimal {
            return Err(Error::Internal(format!(
                "restricted cut LP ended {:?} on a feasible instance",
                sol.status
            )));
        }

        let caps = CapacityVector::new(sol.primal.clone())?;
        match min_violated_cut(inst, &caps, root, k) {
            Some(cut) => {
                if rows.contains(&cut.cut_set) {
                    return Err(Error::Internal(
                        "separation returned an existing cut row".into(),
                    ));
                }
                iterations.push(IterationRecord {
                    objective: sol.value.clone(),
                    added_cut: Some(cut.cut_set.iter().copied().collect()),
                });
                rows.push(cut.cut_set.clone());
                cuts.push(cut);
            }
            None => {
                iterations.push(IterationRecord {
                    objective: sol.value.clone(),
                    added_cut: None,
                });
                return Ok(FractionalSolution {
                    x: sol.primal,
                    value: sol.value,
                    cuts,
                    root,
                    iterations,
                });
            }
        }
    }
}

/// Coefficient row of the cut constraint for `cut_set`: one per arc leaving
/// the set (parallel arcs count separately).
pub fn cut_row(inst: &Instance, cut_set: &BTreeSet<usize>) -> Vec<(usize, Rat)> {
    inst.arcs()
        .iter()
        .enumerate()
        .filter(|(_, arc)| cut_set.contains(&arc.tail) && !cut_set.contains(&arc.head))
        .map(|(a, _)| (a, Rat::one()))
        .collect()
}
