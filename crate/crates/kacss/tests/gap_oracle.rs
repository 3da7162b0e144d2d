//! Cross-check for the exact branch-and-bound: an independent exhaustive
//! search over arc subsets that prunes only with per-vertex degree bounds
//! and reachability of the remaining support. No LP code is involved.

use kacss::gap::{build_gap_instance, exact_opt, GapParams};
use kacss::graph::{parse_instance, Arc, Instance};
use kacss::rational::{rat, rat_int, Rat};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Exhaustive<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    best: Rat,
}

impl<'a> Exhaustive<'a> {
    /// Decide arcs in descending cost order, include-first.
    fn run(inst: &'a Instance) -> Rat {
        let mut order: Vec<usize> = (0..inst.num_arcs()).collect();
        order.sort_by(|&a, &b| inst.arc(b).cost.cmp(&inst.arc(a).cost).then(a.cmp(&b)));
        let mut search = Exhaustive {
            inst,
            order,
            best: inst.total_cost(),
        };
        let mut chosen = vec![false; inst.num_arcs()];
        let mut excluded = vec![false; inst.num_arcs()];
        search.step(0, &mut chosen, &mut excluded, Rat::zero());
        search.best
    }

    fn step(&mut self, depth: usize, chosen: &mut Vec<bool>, excluded: &mut Vec<bool>, cost: Rat) {
        match self.degree_bound(chosen, excluded) {
            None => return,
            Some(extra) => {
                if cost.clone() + extra >= self.best {
                    return;
                }
            }
        }
        if !self.support_connected(excluded) {
            return;
        }
        if depth == self.order.len() {
            // All arcs decided and the chosen set alone must span.
            if self.chosen_connected(chosen) && cost < self.best {
                self.best = cost;
            }
            return;
        }
        let a = self.order[depth];
        chosen[a] = true;
        let with = cost.clone() + &self.inst.arc(a).cost;
        self.step(depth + 1, chosen, excluded, with);
        chosen[a] = false;
        excluded[a] = true;
        self.step(depth + 1, chosen, excluded, cost);
        excluded[a] = false;
    }

    /// Sum of cheapest undecided arcs for vertices still missing out/in
    /// coverage; `None` when a vertex cannot be covered at all.
    fn degree_bound(&self, chosen: &[bool], excluded: &[bool]) -> Option<Rat> {
        let n = self.inst.n();
        let mut out_cheapest: Vec<Option<&Rat>> = vec![None; n];
        let mut in_cheapest: Vec<Option<&Rat>> = vec![None; n];
        let mut out_done = vec![false; n];
        let mut in_done = vec![false; n];
        for (a, arc) in self.inst.arcs().iter().enumerate() {
            if chosen[a] {
                out_done[arc.tail] = true;
                in_done[arc.head] = true;
            } else if !excluded[a] {
                if out_cheapest[arc.tail].is_none_or(|c| &arc.cost < c) {
                    out_cheapest[arc.tail] = Some(&arc.cost);
                }
                if in_cheapest[arc.head].is_none_or(|c| &arc.cost < c) {
                    in_cheapest[arc.head] = Some(&arc.cost);
                }
            }
        }
        let mut out_extra = Rat::zero();
        let mut in_extra = Rat::zero();
        for v in 0..n {
            if !out_done[v] {
                out_extra += out_cheapest[v]?;
            }
            if !in_done[v] {
                in_extra += in_cheapest[v]?;
            }
        }
        Some(if out_extra > in_extra {
            out_extra
        } else {
            in_extra
        })
    }

    fn support_connected(&self, excluded: &[bool]) -> bool {
        let arcs: Vec<(usize, usize)> = self
            .inst
            .arcs()
            .iter()
            .enumerate()
            .filter(|(a, _)| !excluded[*a])
            .map(|(_, arc)| (arc.tail, arc.head))
            .collect();
        reach_both_ways(self.inst.n(), &arcs)
    }

    fn chosen_connected(&self, chosen: &[bool]) -> bool {
        let arcs: Vec<(usize, usize)> = self
            .inst
            .arcs()
            .iter()
            .enumerate()
            .filter(|(a, _)| chosen[*a])
            .map(|(_, arc)| (arc.tail, arc.head))
            .collect();
        reach_both_ways(self.inst.n(), &arcs)
    }
}

/// Strong connectivity by plain DFS from vertex 0, both arc orientations.
fn reach_both_ways(n: usize, arcs: &[(usize, usize)]) -> bool {
    let dfs = |flip: bool| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            for &(t, h) in arcs {
                let (t, h) = if flip { (h, t) } else { (t, h) };
                if t == v && !seen[h] {
                    seen[h] = true;
                    stack.push(h);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    dfs(false) && dfs(true)
}

#[test]
fn base_family_and_cycles() {
    for r in [2usize, 3, 4] {
        let gap = build_gap_instance(&GapParams::new(1, r).unwrap());
        let brute = Exhaustive::run(&gap.instance);
        let opt = exact_opt(&gap.instance, None).unwrap();
        assert_eq!(opt.value, brute, "depth 1, columns {r}");
        assert_eq!(opt.value, rat(1, 2));
    }
    for n in [3usize, 5, 6] {
        let text = (0..n)
            .map(|i| format!("a {} {} 1/1", i, (i + 1) % n))
            .collect::<Vec<_>>()
            .join("\n");
        let inst = parse_instance(&format!("p kacss {n} {n} 1\n{text}")).unwrap();
        assert_eq!(exact_opt(&inst, None).unwrap().value, rat_int(n as i64));
        assert_eq!(Exhaustive::run(&inst), rat_int(n as i64));
    }
}

#[test]
fn random_small_instances_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut cases = 0usize;
    while cases < 40 {
        let n = rng.gen_range(3..=6);
        // Cycle plus random chords with random small costs keeps the
        // instance strongly connected by construction.
        let mut arcs: Vec<Arc> = (0..n)
            .map(|i| Arc {
                tail: i,
                head: (i + 1) % n,
                cost: rat(rng.gen_range(1..=4), 2),
            })
            .collect();
        for _ in 0..rng.gen_range(0..=6) {
            let t = rng.gen_range(0..n);
            let h = (t + rng.gen_range(1..n)) % n;
            arcs.push(Arc {
                tail: t,
                head: h,
                cost: rat(rng.gen_range(0..=4), 2),
            });
        }
        let inst = Instance::new(n, arcs, 1).unwrap();
        let brute = Exhaustive::run(&inst);
        let opt = exact_opt(&inst, None).unwrap();
        assert_eq!(opt.value, brute, "n={n} case {cases}");
        let chosen: Vec<(usize, usize)> = opt
            .arcs
            .iter()
            .map(|a| (inst.arc(a).tail, inst.arc(a).head))
            .collect();
        assert!(reach_both_ways(n, &chosen));
        let witness_cost: Rat = opt.arcs.iter().map(|a| &inst.arc(a).cost).sum();
        assert_eq!(witness_cost, opt.value);
        cases += 1;
    }
}

/// The full cross-check on the depth-2 instance: branch-and-bound against
/// the LP-free exhaustive search.
#[test]
fn depth_two_family_agrees_with_exhaustive_search() {
    let gap = build_gap_instance(&GapParams::new(2, 3).unwrap());
    let brute = Exhaustive::run(&gap.instance);
    let opt = exact_opt(&gap.instance, None).unwrap();
    assert_eq!(opt.value, brute);
    assert_eq!(opt.value, rat(5, 4));
}
