//! Max-flow/min-cut over exact rational capacities.
//!
//! This is the workhorse behind all connectivity questions in the crate: the
//! separation oracle for the cut LP, the k-arc-connectivity verifier, and the
//! k-arborescence validity check. The algorithm is a blocking-flow (Dinic)
//! scheme; with rational arithmetic the returned flow value and the returned
//! cut value agree exactly, so callers can rely on max-flow = min-cut as an
//! identity rather than a tolerance.

use std::collections::BTreeSet;
use std::collections::VecDeque;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{ArcSet, Instance};
use crate::rational::{rat_usize, Rat};

/// Per-arc nonnegative capacities, indexed like the instance arc list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityVector(Vec<Rat>);

impl CapacityVector {
    pub fn new(capacities: Vec<Rat>) -> Result<Self> {
        if capacities.iter().any(|c| c < &Rat::zero()) {
            return Err(Error::InvalidInput("capacities must be nonnegative".into()));
        }
        Ok(CapacityVector(capacities))
    }

    pub fn ones(num_arcs: usize) -> Self {
        CapacityVector(vec![Rat::from_integer(1.into()); num_arcs])
    }

    /// Unit capacity on the members of `arcs`, zero elsewhere.
    pub fn indicator(arcs: &ArcSet, num_arcs: usize) -> Self {
        let mut caps = vec![Rat::zero(); num_arcs];
        for a in arcs.iter() {
            caps[a] = Rat::from_integer(1.into());
        }
        CapacityVector(caps)
    }

    pub fn get(&self, arc: usize) -> &Rat {
        &self.0[arc]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rat] {
        &self.0
    }
}

/// A vertex set `U` together with the capacity of `δ⁺(U)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    /// The cut's source side: arcs counted are those with tail in `cut_set`
    /// and head outside it.
    pub cut_set: BTreeSet<usize>,
    pub value: Rat,
}

impl CutCertificate {
    /// Recomputes the out-capacity of `cut_set` from scratch.
    pub fn value_under(&self, inst: &Instance, cap: &CapacityVector) -> Rat {
        cut_capacity(inst, cap, &self.cut_set)
    }
}

pub fn cut_capacity(inst: &Instance, cap: &CapacityVector, cut_set: &BTreeSet<usize>) -> Rat {
    let mut total = Rat::zero();
    for (i, a) in inst.arcs().iter().enumerate() {
        if cut_set.contains(&a.tail) && !cut_set.contains(&a.head) {
            total += cap.get(i);
        }
    }
    total
}

struct ResidualEdge {
    to: usize,
    cap: Rat,
    rev: usize,
}

struct Dinic {
    graph: Vec<Vec<ResidualEdge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: (0..n).map(|_| Vec::new()).collect(),
            level: vec![-1; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: Rat) {
        let rev_from = self.graph[to].len();
        let rev_to = self.graph[from].len();
        self.graph[from].push(ResidualEdge {
            to,
            cap,
            rev: rev_from,
        });
        self.graph[to].push(ResidualEdge {
            to: from,
            cap: Rat::zero(),
            rev: rev_to,
        });
    }

    fn bfs(&mut self, s: usize) {
        self.level.fill(-1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if !e.cap.is_zero() && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, limit: Option<Rat>) -> Rat {
        if v == t {
            // `limit` is None only at the source before any bottleneck is
            // known; the source never equals the sink.
            return limit.expect("source equals sink");
        }
        while self.iter[v] < self.graph[v].len() {
            let i = self.iter[v];
            let (to, cap) = {
                let e = &self.graph[v][i];
                (e.to, e.cap.clone())
            };
            if !cap.is_zero() && self.level[v] < self.level[to] {
                let pushed = match &limit {
                    None => self.dfs(to, t, Some(cap.clone())),
                    Some(f) => {
                        let next = if *f < cap { f.clone() } else { cap.clone() };
                        self.dfs(to, t, Some(next))
                    }
                };
                if !pushed.is_zero() {
                    let rev = self.graph[v][i].rev;
                    self.graph[v][i].cap -= &pushed;
                    self.graph[to][rev].cap += &pushed;
                    return pushed;
                }
            }
            self.iter[v] += 1;
        }
        Rat::zero()
    }

    fn max_flow(&mut self, s: usize, t: usize) -> Rat {
        let mut total = Rat::zero();
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.fill(0);
            loop {
                let f = self.dfs(s, t, None);
                if f.is_zero() {
                    break;
                }
                total += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual graph; the canonical
    /// minimum cut after a max-flow run.
    fn residual_reachable(&self, s: usize) -> BTreeSet<usize> {
        let mut seen = vec![false; self.graph.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for e in &self.graph[v] {
                if !e.cap.is_zero() && !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(v, &r)| r.then_some(v))
            .collect()
    }
}

/// Maximum s-t flow and a minimum s-t cut certifying it.
///
/// The cut is the set of vertices reachable from `s` in the final residual
/// graph, and its capacity equals the flow value exactly.
pub fn max_flow(
    inst: &Instance,
    cap: &CapacityVector,
    s: usize,
    t: usize,
) -> (Rat, CutCertificate) {
    assert_ne!(s, t, "max_flow needs distinct endpoints");
    assert_eq!(
        cap.len(),
        inst.num_arcs(),
        "capacity vector length mismatch"
    );
    let mut dinic = Dinic::new(inst.n());
    for (i, a) in inst.arcs().iter().enumerate() {
        if !cap.get(i).is_zero() {
            dinic.add_edge(a.tail, a.head, cap.get(i).clone());
        }
    }
    let value = dinic.max_flow(s, t);
    let cut_set = dinic.residual_reachable(s);
    debug_assert!(cut_set.contains(&s) && !cut_set.contains(&t));
    debug_assert_eq!(cut_capacity(inst, cap, &cut_set), value);
    let cut = CutCertificate {
        cut_set,
        value: value.clone(),
    };
    (value, cut)
}

/// True iff every nonempty proper vertex set has at least `k` leaving arcs
/// of `arcs`. Decided by `2(n-1)` unit-capacity max-flows against vertex 0:
/// a violated cut separates vertex 0 from some vertex in one direction.
pub fn is_k_arc_connected(inst: &Instance, arcs: &ArcSet, k: usize) -> bool {
    if inst.n() == 1 || k == 0 {
        return true;
    }
    let cap = CapacityVector::indicator(arcs, inst.num_arcs());
    let need = rat_usize(k);
    for v in 1..inst.n() {
        if max_flow(inst, &cap, 0, v).0 < need {
            return false;
        }
        if max_flow(inst, &cap, v, 0).0 < need {
            return false;
        }
    }
    true
}

/// Separation oracle for the cut constraints `x(δ⁺(U)) ≥ k`.
///
/// Runs `2(n-1)` max-flows between `root` and every other vertex and returns
/// the minimum cut found whenever its value is below `k`, else `None`. The
/// returned cut is the globally minimum one; ties keep the first cut found
/// in the fixed scan order (ascending vertex, root→v before v→root).
pub fn min_violated_cut(
    inst: &Instance,
    x: &CapacityVector,
    root: usize,
    k: usize,
) -> Option<CutCertificate> {
    let need = rat_usize(k);
    let mut best: Option<CutCertificate> = None;
    for v in 0..inst.n() {
        if v == root {
            continue;
        }
        for (s, t) in [(root, v), (v, root)] {
            let (value, cut) = max_flow(inst, x, s, t);
            if value < need && best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(cut);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_instance;
    use crate::rational::{rat, rat_int};

    fn cycle(n: usize) -> Instance {
        let text = (0..n)
            .map(|i| format!("a {} {} 1/1", i, (i + 1) % n))
            .collect::<Vec<_>>()
            .join("\n");
        parse_instance(&format!("p kacss {n} {n} 1\n{text}")).unwrap()
    }

    #[test]
    fn single_path_on_cycle() {
        let inst = cycle(4);
        let cap = CapacityVector::ones(4);
        let (value, cut) = max_flow(&inst, &cap, 0, 2);
        assert_eq!(value, rat_int(1));
        assert_eq!(cut.value, value);
        let zero: BTreeSet<usize> = [0].into();
        let zero_one: BTreeSet<usize> = [0, 1].into();
        assert!(cut.cut_set == zero || cut.cut_set == zero_one);
        assert_eq!(cut.value_under(&inst, &cap), value);
    }

    #[test]
    fn two_disjoint_paths() {
        // 0→1→3 and 0→2→3.
        let inst =
            parse_instance("p kacss 4 4 1\na 0 1 1/1\na 1 3 1/1\na 0 2 1/1\na 2 3 1/1").unwrap();
        let (value, _) = max_flow(&inst, &CapacityVector::ones(4), 0, 3);
        assert_eq!(value, rat_int(2));
    }

    #[test]
    fn fractional_capacities_stay_exact() {
        let inst = parse_instance("p kacss 3 3 1\na 0 1 1/1\na 1 2 1/1\na 0 2 1/1").unwrap();
        let cap = CapacityVector::new(vec![rat(1, 3), rat(1, 2), rat(1, 7)]).unwrap();
        let (value, cut) = max_flow(&inst, &cap, 0, 2);
        // min(1/3, 1/2) + 1/7 = 1/3 + 1/7 = 10/21.
        assert_eq!(value, rat(10, 21));
        assert_eq!(cut.value_under(&inst, &cap), value);
    }

    #[test]
    fn connectivity_on_bidirected_complete_graph() {
        let mut arcs = Vec::new();
        for i in 0..4usize {
            for j in 0..4usize {
                if i != j {
                    arcs.push(format!("a {i} {j} 1/1"));
                }
            }
        }
        let inst = parse_instance(&format!("p kacss 4 12 3\n{}", arcs.join("\n"))).unwrap();
        let all = ArcSet::full(12);
        assert!(is_k_arc_connected(&inst, &all, 3));
        assert!(!is_k_arc_connected(&inst, &all, 4));
    }

    #[test]
    fn cycle_is_one_but_not_two_connected() {
        let inst = cycle(5);
        let all = ArcSet::full(5);
        assert!(is_k_arc_connected(&inst, &all, 1));
        assert!(!is_k_arc_connected(&inst, &all, 2));
    }

    #[test]
    fn connectivity_monotone_in_k() {
        let inst = crate::graph::random_k_connected(6, 3, 3, 11).unwrap();
        let all = ArcSet::full(inst.num_arcs());
        let mut prev = true;
        for k in 1..=4 {
            let now = is_k_arc_connected(&inst, &all, k);
            assert!(prev || !now, "connectivity not monotone at k={k}");
            prev = now;
        }
    }

    #[test]
    fn no_violated_cut_on_covered_cycle() {
        let inst = cycle(5);
        assert!(min_violated_cut(&inst, &CapacityVector::ones(5), 0, 1).is_none());
    }

    #[test]
    fn zero_capacities_expose_a_cut() {
        let inst = cycle(3);
        let zero = CapacityVector::new(vec![Rat::zero(); 3]).unwrap();
        let cut = min_violated_cut(&inst, &zero, 0, 1).expect("some cut is violated");
        assert_eq!(cut.value, Rat::zero());
        assert!(!cut.cut_set.is_empty() && cut.cut_set.len() < 3);
    }

    /// Oracle completeness: agree with exhaustive enumeration of all cuts on
    /// random instances with n ≤ 5.
    #[test]
    fn matches_exhaustive_cut_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for case in 0..60 {
            let n = rng.gen_range(2..=5);
            let m = rng.gen_range(1..=12);
            let mut arcs = Vec::new();
            for _ in 0..m {
                let t = rng.gen_range(0..n);
                let mut h = rng.gen_range(0..n);
                if t == h {
                    h = (h + 1) % n;
                }
                arcs.push(format!("a {t} {h} 1/1"));
            }
            let inst = parse_instance(&format!("p kacss {n} {m} 1\n{}", arcs.join("\n"))).unwrap();
            let caps =
                CapacityVector::new((0..m).map(|_| rat(rng.gen_range(0..4), 2)).collect()).unwrap();
            let s = 0;
            for t in 1..n {
                let (value, cut) = max_flow(&inst, &caps, s, t);
                // Minimum over all cuts separating s from t.
                let mut best = None::<Rat>;
                for mask in 1u32..(1 << n) {
                    if mask & 1 == 0 || mask & (1 << t) != 0 {
                        continue;
                    }
                    let set: BTreeSet<usize> = (0..n).filter(|v| mask & (1 << v) != 0).collect();
                    let c = cut_capacity(&inst, &caps, &set);
                    if best.as_ref().is_none_or(|b| &c < b) {
                        best = Some(c);
                    }
                }
                assert_eq!(value, best.unwrap(), "case {case} t={t}");
                assert_eq!(cut.value_under(&inst, &caps), value);
            }
        }
    }
}
