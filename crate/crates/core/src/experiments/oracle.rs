use super::ser_display;
use crate::budget::{Budget, Meter};
use crate::counting::{automorphism_count, divide_by_automorphisms, CopyCounter};
use crate::error::{invalid, Error, Result};
use crate::graph::{bit, bits, to_graph6, Graph};
use crate::par;
use crate::BigCount;
use serde::Serialize;
use std::collections::BTreeSet;

/// Hard ceiling on the oracle's vertex count.
const ORACLE_CEILING: usize = 8;
/// Vertices whose pairs are fixed before the search is split across workers.
const PREFIX_VERTICES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest accepted `n`; 8 is honoured only for triangle-free searches.
    pub max_n: usize,
    pub budget: Budget,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_n: 7,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleResult {
    pub n: usize,
    /// `ex(n, H, F)`: most unlabeled copies of `H` in an `F`-free graph.
    #[serde(serialize_with = "ser_display")]
    pub max: BigCount,
    /// graph6 of every extremal graph, up to isomorphism, sorted.
    pub extremal: Vec<String>,
    /// Labeled `F`-free graphs visited.
    pub graphs: u64,
}

/// Exhaustive `ex(n, H, F)` over all labeled graphs on `n` vertices, adding
/// edges pair by pair and cutting every branch that creates `F`.
pub fn oracle_ex(n: usize, h: &Graph, f: &Graph, config: OracleConfig) -> Result<OracleResult> {
    if f.size() == 0 {
        return invalid("F must have at least one edge");
    }
    let triangle = f.order() == 3 && f.size() == 3;
    let limit = if triangle {
        config.max_n.min(ORACLE_CEILING)
    } else {
        config.max_n.min(ORACLE_CEILING - 1)
    };
    if n > limit {
        return invalid(format!(
            "oracle limited to n <= {limit} for this F (n = {n} requested)"
        ));
    }
    let search = Search::new(n, h, f);
    let meter = Meter::new(config.budget);
    let split = n.min(PREFIX_VERTICES);
    let head = split * split.saturating_sub(1) / 2;
    let mut prefixes = Vec::new();
    search.prefixes(0, [0; ORACLE_CEILING], head, &mut prefixes);
    let parts = par::map_collect(prefixes, |adj| {
        let mut best = Best::default();
        search.dfs(head, adj, &mut best, &meter).map(|_| best)
    });
    let mut best = Best::default();
    for part in parts {
        best.merge(part?);
    }
    let aut = automorphism_count(h);
    let max = divide_by_automorphisms(best.count.clone(), &aut)?;
    let extremal = best
        .forms
        .iter()
        .map(|&code| to_graph6(&decode(n, code)))
        .collect();
    Ok(OracleResult {
        n,
        max,
        extremal,
        graphs: best.graphs,
    })
}

#[derive(Default)]
struct Best {
    count: BigCount,
    forms: BTreeSet<u64>,
    graphs: u64,
    seen: bool,
}

impl Best {
    fn offer(&mut self, count: BigCount, form: impl FnOnce() -> u64) {
        if !self.seen || count > self.count {
            self.seen = true;
            self.count = count;
            self.forms.clear();
            self.forms.insert(form());
        } else if count == self.count {
            self.forms.insert(form());
        }
    }

    fn merge(&mut self, other: Best) {
        self.graphs += other.graphs;
        if !other.seen {
            return;
        }
        if !self.seen || other.count > self.count {
            self.seen = true;
            self.count = other.count;
            self.forms = other.forms;
        } else if other.count == self.count {
            self.forms.extend(other.forms);
        }
    }
}

enum Forbidden {
    /// `K_r`: a new edge `ij` is rejected when the common neighbourhood of
    /// `i` and `j` holds a `K_{r-2}`.
    Clique(usize),
    Other(CopyCounter),
}

struct Search {
    n: usize,
    pairs: Vec<(usize, usize)>,
    forbidden: Forbidden,
    counter: CopyCounter,
}

impl Search {
    fn new(n: usize, h: &Graph, f: &Graph) -> Self {
        let complete = f.size() == f.order() * (f.order() - 1) / 2;
        let forbidden = if complete {
            Forbidden::Clique(f.order())
        } else {
            Forbidden::Other(CopyCounter::new(f))
        };
        let pairs = (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        Search {
            n,
            pairs,
            forbidden,
            counter: CopyCounter::new(h),
        }
    }

    fn allows(&self, adj: &[u64; ORACLE_CEILING], i: usize, j: usize) -> bool {
        match &self.forbidden {
            Forbidden::Clique(r) => !has_clique(adj, adj[i] & adj[j], r - 2),
            Forbidden::Other(c) => {
                let mut next = *adj;
                next[i] |= bit(j);
                next[j] |= bit(i);
                !c.is_contained_in(&self.graph(&next))
            }
        }
    }

    fn graph(&self, adj: &[u64; ORACLE_CEILING]) -> Graph {
        Graph::from_adjacency(adj[..self.n].to_vec()).expect("adjacency stays symmetric")
    }

    fn prefixes(
        &self,
        k: usize,
        adj: [u64; ORACLE_CEILING],
        head: usize,
        out: &mut Vec<[u64; ORACLE_CEILING]>,
    ) {
        if k == head {
            out.push(adj);
            return;
        }
        self.prefixes(k + 1, adj, head, out);
        let (i, j) = self.pairs[k];
        if self.allows(&adj, i, j) {
            let mut next = adj;
            next[i] |= bit(j);
            next[j] |= bit(i);
            self.prefixes(k + 1, next, head, out);
        }
    }

    fn dfs(
        &self,
        k: usize,
        adj: [u64; ORACLE_CEILING],
        best: &mut Best,
        meter: &Meter,
    ) -> Result<()> {
        meter.tick()?;
        if k == self.pairs.len() {
            best.graphs += 1;
            let g = self.graph(&adj);
            let count = self.counter.count(&g);
            best.offer(count, || canonical_code(&g));
            return Ok(());
        }
        self.dfs(k + 1, adj, best, meter)?;
        let (i, j) = self.pairs[k];
        if self.allows(&adj, i, j) {
            let mut next = adj;
            next[i] |= bit(j);
            next[j] |= bit(i);
            self.dfs(k + 1, next, best, meter)?;
        }
        Ok(())
    }
}

fn has_clique(adj: &[u64], cand: u64, k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if (cand.count_ones() as usize) < k {
        return false;
    }
    bits(cand).any(|v| has_clique(adj, cand & adj[v] & !((bit(v) << 1) - 1), k - 1))
}

/// Upper-triangle bits in graph6 order: pair `(i, j)` with `i < j` sits at
/// position `j (j - 1) / 2 + i`, most significant first.
fn encode(g: &Graph, perm: &[usize]) -> u64 {
    let n = g.order();
    let total = n * n.saturating_sub(1) / 2;
    let mut code = 0u64;
    for (u, v) in g.edges() {
        let (i, j) = {
            let (a, b) = (perm[u], perm[v]);
            (a.min(b), a.max(b))
        };
        let pos = j * (j - 1) / 2 + i;
        code |= 1u64 << (total - 1 - pos);
    }
    code
}

fn decode(n: usize, code: u64) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    let mut g = Graph::empty(n).expect("n is small");
    for j in 1..n {
        for i in 0..j {
            let pos = j * (j - 1) / 2 + i;
            if code >> (total - 1 - pos) & 1 == 1 {
                g.add_edge(i, j).expect("valid pair");
            }
        }
    }
    g
}

/// Largest code over relabelings that keep vertices sorted by a
/// refinement invariant (degree, then sorted neighbour degrees). Taking the
/// maximum puts high-degree vertices first; any fixed choice is canonical
/// because the invariant classes are isomorphism-invariant.
fn canonical_code(g: &Graph) -> u64 {
    let n = g.order();
    let deg = g.degrees();
    let key = |v: usize| {
        let mut nd: Vec<usize> = bits(g.neighbors(v)).map(|u| deg[u]).collect();
        nd.sort_unstable();
        (deg[v], nd)
    };
    let keys: Vec<_> = (0..n).map(key).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    // Classes of equal keys, as ranges of positions in `order`.
    let mut classes = Vec::new();
    let mut start = 0;
    for p in 1..=n {
        if p == n || keys[order[p]] != keys[order[start]] {
            classes.push(start..p);
            start = p;
        }
    }
    let mut perm = vec![0usize; n];
    let mut best = None;
    permute_classes(&classes, 0, &mut order, &mut |ord| {
        for (pos, &v) in ord.iter().enumerate() {
            perm[v] = pos;
        }
        let c = encode(g, &perm);
        if best.is_none_or(|b| c > b) {
            best = Some(c);
        }
    });
    best.unwrap_or(0)
}

fn permute_classes(
    classes: &[std::ops::Range<usize>],
    c: usize,
    order: &mut [usize],
    visit: &mut impl FnMut(&[usize]),
) {
    if c == classes.len() {
        visit(order);
        return;
    }
    let range = classes[c].clone();
    heap_permutations(order, range.start, range.end - range.start, &mut |ord| {
        let mut copy = ord.to_vec();
        permute_classes(classes, c + 1, &mut copy, visit);
    });
}

/// Heap's algorithm over `v[start..start + k]`.
fn heap_permutations(v: &mut [usize], start: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(v);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(v, start, k - 1, visit);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        v.swap(start + j, start + k - 1);
    }
    heap_permutations(v, start, k - 1, visit);
}

/// Canonical representative of the isomorphism class of `g` (order at most 11).
pub fn canonical_form(g: &Graph) -> Result<Graph> {
    if g.order() > 11 {
        return Err(Error::TooManyVertices {
            n: g.order(),
            limit: 11,
        });
    }
    Ok(decode(g.order(), canonical_code(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::unlabeled_copies;
    use rand::{seq::SliceRandom, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> OracleConfig {
        OracleConfig {
            max_n: 8,
            budget: Budget::unlimited(),
        }
    }

    #[test]
    fn mantel_five() {
        let k2 = Graph::complete(2).unwrap();
        let k3 = Graph::complete(3).unwrap();
        let r = oracle_ex(5, &k2, &k3, cfg()).unwrap();
        assert_eq!(r.max, 6u32.into());
        let k23 = Graph::turan(5, 2).unwrap();
        assert_eq!(r.extremal, vec![to_graph6(&canonical_form(&k23).unwrap())]);
    }

    #[test]
    fn pentagon_in_triangle_free() {
        let c5 = Graph::cycle(5).unwrap();
        let r = oracle_ex(5, &c5, &Graph::complete(3).unwrap(), cfg()).unwrap();
        assert_eq!(r.max, 1u32.into());
        assert_eq!(r.extremal, vec![to_graph6(&canonical_form(&c5).unwrap())]);
    }

    #[test]
    fn general_forbidden_graph() {
        // ex(5, C_4) = 6.
        let c4 = Graph::cycle(4).unwrap();
        let k2 = Graph::complete(2).unwrap();
        let r = oracle_ex(5, &k2, &c4, cfg()).unwrap();
        assert_eq!(r.max, 6u32.into());
        for g6 in &r.extremal {
            let g = crate::graph::parse_graph6(g6).unwrap();
            assert!(!crate::counting::contains_copy(&c4, &g));
            assert_eq!(unlabeled_copies(&k2, &g).unwrap(), 6u32.into());
        }
    }

    #[test]
    fn labeled_graph_totals() {
        // Every graph is K_{n+1}-free: 2^{C(n,2)} labeled graphs.
        let k5 = Graph::complete(5).unwrap();
        let r = oracle_ex(4, &Graph::complete(2).unwrap(), &k5, cfg()).unwrap();
        assert_eq!(r.graphs, 64);
        let r = oracle_ex(
            5,
            &Graph::complete(2).unwrap(),
            &Graph::complete(3).unwrap(),
            cfg(),
        )
        .unwrap();
        assert_eq!(r.graphs, 388);
    }

    #[test]
    fn limits() {
        let k2 = Graph::complete(2).unwrap();
        let k4 = Graph::complete(4).unwrap();
        assert!(oracle_ex(8, &k2, &k4, cfg()).is_err());
        assert!(oracle_ex(
            8,
            &k2,
            &Graph::complete(3).unwrap(),
            OracleConfig::default()
        )
        .is_err());
        let tiny = OracleConfig {
            max_n: 7,
            budget: Budget(10),
        };
        assert!(matches!(
            oracle_ex(6, &k2, &k4, tiny),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn canonical_form_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let n = rng.random_range(1..=8);
            let mut g = Graph::empty(n).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.5) {
                        g.add_edge(u, v).unwrap();
                    }
                }
            }
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let h = g.relabel(&perm).unwrap();
            assert_eq!(canonical_form(&g).unwrap(), canonical_form(&h).unwrap());
            assert_eq!(
                crate::counting::labeled_copies(&canonical_form(&g).unwrap(), &g),
                automorphism_count(&g)
            );
        }
    }
}
