//! Directed multigraph instances, the `kacss` file format, and the random
//! k-arc-connected test-instance generator.
//!
//! Arc identity is the position in the arc list, so parallel arcs are
//! first-class and every downstream vector (LP solutions, marginals,
//! capacities) is indexed by arc index.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat, Rat};

/// One directed arc with an exact nonnegative cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub cost: Rat,
}

/// A directed multigraph with a connectivity requirement `k`.
///
/// Vertices are `0..n`. Self-loops are rejected; parallel arcs are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    arcs: Vec<Arc>,
    k: usize,
}

impl Instance {
    pub fn new(n: usize, arcs: Vec<Arc>, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("vertex count must be positive".into()));
        }
        if k == 0 {
            return Err(Error::InvalidInput(
                "connectivity requirement k must be positive".into(),
            ));
        }
        for (i, a) in arcs.iter().enumerate() {
            if a.tail >= n || a.head >= n {
                return Err(Error::InvalidInput(format!(
                    "arc {i} endpoint out of range (n = {n})"
                )));
            }
            if a.tail == a.head {
                return Err(Error::InvalidInput(format!("arc {i} is a self-loop")));
            }
            if a.cost.is_negative() {
                return Err(Error::InvalidInput(format!("arc {i} has negative cost")));
            }
        }
        Ok(Self { n, arcs, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc(&self, i: usize) -> &Arc {
        &self.arcs[i]
    }

    pub fn is_unit_cost(&self) -> bool {
        self.arcs.iter().all(|a| a.cost.is_one())
    }

    pub fn total_cost(&self) -> Rat {
        self.arcs.iter().map(|a| &a.cost).sum()
    }

    /// Same arc indices with every arc reversed; used to run the in-direction
    /// arborescence machinery through the out-direction code path.
    pub fn reversed(&self) -> Instance {
        Instance {
            n: self.n,
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    tail: a.head,
                    head: a.tail,
                    cost: a.cost.clone(),
                })
                .collect(),
            k: self.k,
        }
    }
}

/// A set of arc indices into an [`Instance`]'s arc list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArcSet(BTreeSet<usize>);

impl ArcSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn full(num_arcs: usize) -> Self {
        ArcSet((0..num_arcs).collect())
    }

    pub fn insert(&mut self, arc: usize) -> bool {
        self.0.insert(arc)
    }

    pub fn remove(&mut self, arc: usize) -> bool {
        self.0.remove(&arc)
    }

    pub fn contains(&self, arc: usize) -> bool {
        self.0.contains(&arc)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Ascending iteration; file and JSON output rely on this order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        ArcSet(self.0.union(&other.0).copied().collect())
    }
}

impl FromIterator<usize> for ArcSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        ArcSet(iter.into_iter().collect())
    }
}

/// Parses the line-oriented instance format:
///
/// ```text
/// # comment
/// p kacss <n> <m> <k>
/// a <tail> <head> <num>/<den>
/// ```
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut arcs: Vec<Arc> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "duplicate header line".into(),
                    });
                }
                if fields.len() != 5 || fields[1] != "kacss" {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "header must be 'p kacss <n> <m> <k>'".into(),
                    });
                }
                let n = parse_count(fields[2], "n", lineno)?;
                let m = parse_count(fields[3], "m", lineno)?;
                let k = parse_count(fields[4], "k", lineno)?;
                if n == 0 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "vertex count must be positive".into(),
                    });
                }
                if k == 0 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "k must be at least 1".into(),
                    });
                }
                header = Some((n, m, k));
            }
            "a" => {
                let (n, m, _) = header.ok_or(Error::Parse {
                    line: lineno,
                    msg: "arc line before header".into(),
                })?;
                if fields.len() != 4 {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "arc line must be 'a <tail> <head> <num>/<den>'".into(),
                    });
                }
                let tail = parse_count(fields[1], "tail", lineno)?;
                let head = parse_count(fields[2], "head", lineno)?;
                if tail >= n || head >= n {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("vertex id out of range (n = {n})"),
                    });
                }
                if tail == head {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "self-loops are not allowed".into(),
                    });
                }
                let cost =
                    parse_rat(fields[3]).map_err(|msg| Error::Parse { line: lineno, msg })?;
                if cost.is_negative() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "arc cost must be nonnegative".into(),
                    });
                }
                if arcs.len() == m {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("more than the declared {m} arcs"),
                    });
                }
                arcs.push(Arc { tail, head, cost });
            }
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("unknown line type '{other}'"),
                });
            }
        }
    }

    let (n, m, k) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing header line".into(),
    })?;
    if arcs.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} arcs but {} were given", arcs.len()),
        });
    }
    Instance::new(n, arcs, k)
}

fn parse_count(s: &str, what: &str, lineno: usize) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        line: lineno,
        msg: format!("bad {what} '{s}'"),
    })
}

/// Inverse of [`parse_instance`]; output re-parses to an equal instance.
pub fn write_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p kacss {} {} {}", inst.n(), inst.num_arcs(), inst.k());
    for a in inst.arcs() {
        let _ = writeln!(out, "a {} {} {}", a.tail, a.head, format_rat(&a.cost));
    }
    out
}

/// Parses a subgraph file: one arc index per line, `#` comments allowed.
pub fn parse_arc_set(text: &str, num_arcs: usize) -> Result<ArcSet> {
    let mut set = ArcSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let arc = parse_count(line, "arc index", idx + 1)?;
        if arc >= num_arcs {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("arc index {arc} out of range (m = {num_arcs})"),
            });
        }
        set.insert(arc);
    }
    Ok(set)
}

/// Writes a subgraph file: ascending arc indices, one per line.
pub fn write_arc_set(set: &ArcSet) -> String {
    let mut out = String::new();
    for arc in set.iter() {
        let _ = writeln!(out, "{arc}");
    }
    out
}

const CYCLE_PACK_ATTEMPTS: usize = 1000;

/// Builds a k-arc-connected unit-cost instance as the union of `k` pairwise
/// arc-disjoint uniformly random directed Hamiltonian cycles plus `extra`
/// further distinct arcs. Deterministic in `seed`.
///
/// For `n == 2` the only Hamiltonian cycle is the 2-cycle, so `k >= 2` emits
/// parallel copies of it.
pub fn random_k_connected(n: usize, k: usize, extra: usize, seed: u64) -> Result<Instance> {
    if n < 2 {
        return Err(Error::InvalidInput("generator needs n >= 2".into()));
    }
    if k == 0 {
        return Err(Error::InvalidInput("generator needs k >= 1".into()));
    }
    if n > 2 && k > n - 1 {
        return Err(Error::InvalidInput(format!(
            "cannot pack {k} arc-disjoint Hamiltonian cycles on {n} vertices"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs: Vec<Arc> = Vec::new();
    let mut used: HashSet<(usize, usize)> = HashSet::new();

    if n == 2 {
        for _ in 0..k {
            arcs.push(unit_arc(0, 1));
            arcs.push(unit_arc(1, 0));
        }
        used.insert((0, 1));
        used.insert((1, 0));
    } else {
        for _ in 0..k {
            let mut packed = false;
            for _ in 0..CYCLE_PACK_ATTEMPTS {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                let cycle: Vec<(usize, usize)> =
                    (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
                if cycle.iter().any(|e| used.contains(e)) {
                    continue;
                }
                for &(t, h) in &cycle {
                    used.insert((t, h));
                    arcs.push(unit_arc(t, h));
                }
                packed = true;
                break;
            }
            if !packed {
                return Err(Error::Generator(format!(
                    "could not pack {k} arc-disjoint Hamiltonian cycles on {n} vertices \
                     after {CYCLE_PACK_ATTEMPTS} attempts"
                )));
            }
        }
    }

    for _ in 0..extra {
        let free: Vec<(usize, usize)> = (0..n)
            .flat_map(|t| (0..n).map(move |h| (t, h)))
            .filter(|&(t, h)| t != h && !used.contains(&(t, h)))
            .collect();
        if free.is_empty() {
            return Err(Error::Generator(
                "no distinct arcs left for the requested extras".into(),
            ));
        }
        let (t, h) = free[rng.gen_range(0..free.len())];
        used.insert((t, h));
        arcs.push(unit_arc(t, h));
    }

    Instance::new(n, arcs, k)
}

fn unit_arc(tail: usize, head: usize) -> Arc {
    Arc {
        tail,
        head,
        cost: Rat::one(),
    }
}
