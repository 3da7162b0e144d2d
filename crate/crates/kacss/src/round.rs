//! Rounding by sampling: pick an in-k-arborescence and an out-k-arborescence
//! from their convex decompositions and return the union, either by
//! independent sampling from the two distributions or by enumerating the
//! support cross product and keeping the cheapest pair.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arb::{ConvexCombination, Direction};
use crate::error::{Error, Result};
use crate::flow::is_k_arc_connected;
use crate::graph::{ArcSet, Instance};
use crate::lpacss::FractionalSolution;
use crate::rational::{format_rat, rat, rat_to_f64, rat_usize, Rat};

/// PRNG stream labels deriving the two independent draws from one seed.
const STREAM_SINGLE: u64 = 0;
const STREAM_IN: u64 = 1;
const STREAM_OUT: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundMode {
    Sampled { seed: u64 },
    Derandomized,
}

/// The rounded subgraph plus the accounting used by the ratio guarantee.
#[derive(Clone, Debug)]
pub struct RoundingReport {
    pub arcs: ArcSet,
    /// Total cost of the output; the arc count on unit-cost instances.
    pub size: Rat,
    /// LP objective value the pipeline rounded.
    pub lp_value: Rat,
    /// `size / lp_value`; absent for the degenerate zero-value LP.
    pub ratio: Option<Rat>,
    /// `min{7/4, 1 + 1/k}`.
    pub bound: Rat,
    /// The bound is only claimed on unit-cost instances.
    pub bound_applies: bool,
    pub mode: RoundMode,
    /// Indices of the chosen terms in the in- and out-combination.
    pub pair: (usize, usize),
}

impl RoundingReport {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct ReportJson {
            mode: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            seed: Option<u64>,
            size: String,
            lp_value: String,
            ratio: Option<String>,
            ratio_float: Option<f64>,
            bound: String,
            bound_applies: bool,
            pair: [usize; 2],
            arcs: Vec<usize>,
        }
        let (mode, seed) = match self.mode {
            RoundMode::Sampled { seed } => ("sampled", Some(seed)),
            RoundMode::Derandomized => ("derandomized", None),
        };
        let dto = ReportJson {
            mode,
            seed,
            size: format_rat(&self.size),
            lp_value: format_rat(&self.lp_value),
            ratio: self.ratio.as_ref().map(format_rat),
            ratio_float: self.ratio.as_ref().map(rat_to_f64),
            bound: format_rat(&self.bound),
            bound_applies: self.bound_applies,
            pair: [self.pair.0, self.pair.1],
            arcs: self.arcs.iter().collect(),
        };
        serde_json::to_string_pretty(&dto).expect("report serializes")
    }
}

fn sample_index(comb: &ConvexCombination, seed: u64, stream: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let draw = rng.next_u64();
    // Uniform point of [0, 1) with denominator 2^64, compared exactly
    // against the cumulative weights.
    let u = Rat::new(BigInt::from(draw), BigInt::one() << 64);
    let mut cumulative = Rat::zero();
    for (i, (lambda, _)) in comb.terms.iter().enumerate() {
        cumulative += lambda;
        if u < cumulative {
            return i;
        }
    }
    comb.terms.len() - 1
}

/// Draws one term with probability proportional to its weight, by
/// cumulative-weight inversion of a single 64-bit draw.
pub fn sample_term(comb: &ConvexCombination, seed: u64) -> &crate::arb::ArborescenceSet {
    &comb.terms[sample_index(comb, seed, STREAM_SINGLE)].1
}

/// Exact expected size of the union of independent draws from the two
/// combinations: `Σ_a m_in(a) + m_out(a) − m_in(a)·m_out(a)`.
pub fn expected_union_size(comb_in: &ConvexCombination, comb_out: &ConvexCombination) -> Rat {
    assert_eq!(comb_in.num_arcs, comb_out.num_arcs);
    let m_in = comb_in.marginals();
    let m_out = comb_out.marginals();
    let mut total = Rat::zero();
    for (p, q) in m_in.iter().zip(&m_out) {
        total += p + q - p * q;
    }
    total
}

/// Unions the chosen in/out pair and verifies the result, reporting the
/// exact accounting against the LP value.
///
/// Sampled mode draws the two terms independently from two PRNG streams of
/// one seed. Derandomized mode scans the full support cross product for the
/// cheapest union, ties broken by the lexicographically smallest index pair.
pub fn round_union(
    inst: &Instance,
    lp: &FractionalSolution,
    comb_in: &ConvexCombination,
    comb_out: &ConvexCombination,
    mode: RoundMode,
) -> Result<RoundingReport> {
    if comb_in.direction != Direction::In || comb_out.direction != Direction::Out {
        return Err(Error::InvalidInput(
            "round_union needs one in-combination and one out-combination".into(),
        ));
    }
    if comb_in.root != comb_out.root || comb_in.k != comb_out.k {
        return Err(Error::InvalidInput(
            "combinations disagree on root or k".into(),
        ));
    }
    if comb_in.num_arcs != inst.num_arcs() || comb_out.num_arcs != inst.num_arcs() {
        return Err(Error::InvalidInput(
            "combinations built for a different instance".into(),
        ));
    }

    let pair = match mode {
        RoundMode::Sampled { seed } => (
            sample_index(comb_in, seed, STREAM_IN),
            sample_index(comb_out, seed, STREAM_OUT),
        ),
        RoundMode::Derandomized => {
            let mut best: Option<(Rat, (usize, usize))> = None;
            for (i, (_, term_in)) in comb_in.terms.iter().enumerate() {
                for (j, (_, term_out)) in comb_out.terms.iter().enumerate() {
                    let cost = union_cost(inst, &term_in.arcs, &term_out.arcs);
                    if best.as_ref().is_none_or(|(b, _)| cost < *b) {
                        best = Some((cost, (i, j)));
                    }
                }
            }
            best.expect("combinations are nonempty").1
        }
    };

    let union = comb_in.terms[pair.0]
        .1
        .arcs
        .union(&comb_out.terms[pair.1].1.arcs);
    let k = comb_in.k;
    if !is_k_arc_connected(inst, &union, k) {
        return Err(Error::Internal(
            "rounded union is not k-arc-connected".into(),
        ));
    }

    let size: Rat = union.iter().map(|a| &inst.arc(a).cost).sum();
    let ratio = if lp.value.is_zero() {
        None
    } else {
        Some(&size / &lp.value)
    };
    let bound = {
        let seven_fourths = rat(7, 4);
        let one_plus = Rat::one() + rat_usize(k).recip();
        if seven_fourths < one_plus {
            seven_fourths
        } else {
            one_plus
        }
    };

    Ok(RoundingReport {
        arcs: union,
        size,
        lp_value: lp.value.clone(),
        ratio,
        bound,
        bound_applies: inst.is_unit_cost(),
        mode,
        pair,
    })
}

fn union_cost(inst: &Instance, a: &ArcSet, b: &ArcSet) -> Rat {
    let mut total = Rat::zero();
    for arc in a.iter() {
        total += &inst.arc(arc).cost;
    }
    for arc in b.iter() {
        if !a.contains(arc) {
            total += &inst.arc(arc).cost;
        }
    }
    total
}
