//! Brute-force oracles for the arborescence machinery on small instances:
//! validity is decided by enumerating all vertex sets avoiding the root and
//! counting entering (leaving) arcs, and minimum weights by enumerating all
//! arc subsets. Nothing here touches the flow or LP code paths.

use kacss::arb::{decompose, is_k_arborescence, min_weight_k_arborescence, Direction};
use kacss::graph::{ArcSet, Instance};
use kacss::lpacss::FractionalSolution;
use kacss::rational::{rat, rat_int, Rat};
use kacss::Error;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cut characterization, enumerated: a set contains k arc-disjoint spanning
/// out-arborescences iff every nonempty vertex set avoiding the root is
/// entered by at least k chosen arcs (mirrored for the in direction).
fn valid_by_cut_enumeration(
    inst: &Instance,
    arcs: &[usize],
    root: usize,
    k: usize,
    direction: Direction,
) -> bool {
    let n = inst.n();
    for mask in 1u32..(1 << n) {
        if mask & (1 << root) != 0 {
            continue;
        }
        let mut crossing = 0usize;
        for &a in arcs {
            let arc = inst.arc(a);
            let enters = match direction {
                Direction::Out => mask & (1 << arc.head) != 0 && mask & (1 << arc.tail) == 0,
                Direction::In => mask & (1 << arc.tail) != 0 && mask & (1 << arc.head) == 0,
            };
            if enters {
                crossing += 1;
            }
        }
        if crossing < k {
            return false;
        }
    }
    true
}

fn brute_min_weight(
    inst: &Instance,
    weights: &[Rat],
    root: usize,
    k: usize,
    direction: Direction,
) -> Option<Rat> {
    let m = inst.num_arcs();
    let mut best: Option<Rat> = None;
    for mask in 0u32..(1 << m) {
        let arcs: Vec<usize> = (0..m).filter(|a| mask & (1 << a) != 0).collect();
        if !valid_by_cut_enumeration(inst, &arcs, root, k, direction) {
            continue;
        }
        let weight: Rat = arcs.iter().map(|&a| &weights[a]).sum();
        if best.as_ref().is_none_or(|b| &weight < b) {
            best = Some(weight);
        }
    }
    best
}

fn random_instance(rng: &mut ChaCha8Rng) -> Instance {
    let n = rng.gen_range(2..=5);
    let m = rng.gen_range(2..=10);
    let arcs = (0..m)
        .map(|_| {
            let t = rng.gen_range(0..n);
            let h = (t + rng.gen_range(1..n)) % n;
            kacss::graph::Arc {
                tail: t,
                head: h,
                cost: rat_int(1),
            }
        })
        .collect();
    Instance::new(n, arcs, 1).unwrap()
}

#[test]
fn min_weight_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut feasible_cases = 0usize;
    for case in 0..120 {
        let inst = random_instance(&mut rng);
        let m = inst.num_arcs();
        let weights: Vec<Rat> = (0..m).map(|_| rat(rng.gen_range(0..5), 2)).collect();
        let root = rng.gen_range(0..inst.n());
        let k = rng.gen_range(1..=2);
        let direction = if rng.gen_bool(0.5) {
            Direction::Out
        } else {
            Direction::In
        };
        let brute = brute_min_weight(&inst, &weights, root, k, direction);
        match min_weight_k_arborescence(&inst, &weights, root, k, direction) {
            Ok(arb) => {
                let brute = brute
                    .unwrap_or_else(|| panic!("case {case}: solver found a set but none exists"));
                let chosen: Vec<usize> = arb.arcs.iter().collect();
                assert!(
                    valid_by_cut_enumeration(&inst, &chosen, root, k, direction),
                    "case {case}: returned set invalid"
                );
                let weight: Rat = chosen.iter().map(|&a| &weights[a]).sum();
                assert_eq!(weight, brute, "case {case}: weight mismatch");
                feasible_cases += 1;
            }
            Err(Error::ArborescenceInfeasible { .. }) => {
                assert!(brute.is_none(), "case {case}: solver missed a feasible set");
            }
            Err(other) => panic!("case {case}: {other}"),
        }
    }
    assert!(feasible_cases >= 30, "only {feasible_cases} feasible cases");
}

#[test]
fn validity_check_matches_cut_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for _ in 0..150 {
        let inst = random_instance(&mut rng);
        let m = inst.num_arcs();
        let subset: Vec<usize> = (0..m).filter(|_| rng.gen_bool(0.7)).collect();
        let set: ArcSet = subset.iter().copied().collect();
        let root = rng.gen_range(0..inst.n());
        let k = rng.gen_range(1..=2);
        for direction in [Direction::Out, Direction::In] {
            assert_eq!(
                is_k_arborescence(&inst, &set, root, k, direction),
                valid_by_cut_enumeration(&inst, &subset, root, k, direction),
            );
        }
    }
}

/// Decompositions of LP-feasible vectors on random instances: weights sum to
/// one, marginals stay below x, terms are valid, and the support stays small.
#[test]
fn decomposition_invariants_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let mut decomposed = 0usize;
    for _ in 0..80 {
        let inst = random_instance(&mut rng);
        let m = inst.num_arcs();
        // Random vector in [0,1]^m rounded to quarters; keep it only if it
        // lies in the polytope (the library rejects it otherwise).
        let x: Vec<Rat> = (0..m).map(|_| rat(rng.gen_range(0..=4), 4)).collect();
        let value: Rat = x.iter().sum();
        let sol = FractionalSolution {
            x,
            value,
            cuts: Vec::new(),
            root: 0,
            iterations: Vec::new(),
        };
        let root = rng.gen_range(0..inst.n());
        let k = 1;
        for direction in [Direction::Out, Direction::In] {
            match decompose(&inst, &sol, root, k, direction) {
                Ok(comb) => {
                    decomposed += 1;
                    assert!(comb.total_weight() == rat_int(1));
                    assert!(comb.terms.len() <= m + 1);
                    for a in 0..m {
                        assert!(comb.marginal(a) <= sol.x[a], "marginal above x");
                    }
                    for (lambda, term) in &comb.terms {
                        assert!(lambda > &Rat::zero());
                        let arcs: Vec<usize> = term.arcs.iter().collect();
                        assert!(valid_by_cut_enumeration(&inst, &arcs, root, k, direction));
                    }
                }
                Err(Error::NotInPolytope { .. }) => {}
                Err(Error::ArborescenceInfeasible { .. }) => {}
                Err(other) => panic!("unexpected decomposition error {other}"),
            }
        }
    }
    assert!(decomposed >= 15, "only {decomposed} decomposable cases");
}
