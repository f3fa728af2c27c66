//! Small simple undirected graphs stored as one adjacency word per vertex.

mod graph6;
mod metrics;

pub use graph6::{parse_graph6, to_graph6};
pub use metrics::{
    chromatic_number, clique_number, diameter, distances_from, eccentricity, is_bipartite,
    is_connected, is_triangle_free, proper_colorings, radius, Distance,
};

use crate::error::{invalid, Error, Result};
use serde::{Deserialize, Serialize};

/// Largest supported vertex count: one `u64` adjacency row per vertex.
pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates over the indices of set bits, lowest first.
#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

/// A simple undirected graph on vertices `0..n`.
///
/// Adjacency is symmetric and loop-free; every constructor enforces this.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices {
                n,
                limit: MAX_VERTICES,
            });
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, checking symmetry and loops.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        let g = Graph::empty(n)?;
        let mask = low_mask(n);
        for (v, &row) in adj.iter().enumerate() {
            if row & !mask != 0 {
                return invalid(format!("row {v} has bits beyond vertex {n}"));
            }
            if row & bit(v) != 0 {
                return invalid(format!("self-loop at vertex {v}"));
            }
            for u in bits(row) {
                if adj[u] & bit(v) == 0 {
                    return invalid(format!("adjacency not symmetric at ({v},{u})"));
                }
            }
        }
        Ok(Graph { adj, ..g })
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return invalid(format!("edge ({u},{v}) out of range for n = {}", self.n));
        }
        if u == v {
            return invalid(format!("self-loop at vertex {u}"));
        }
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
        Ok(())
    }

    /// Number of vertices, `v(G)`.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges, `e(G)`.
    pub fn size(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    /// Neighbourhood of `v` as a bitset.
    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    /// Bitset of all vertices.
    #[inline]
    pub fn vertex_mask(&self) -> u64 {
        low_mask(self.n)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return invalid("permutation length differs from vertex count");
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen & bit(p) != 0 {
                return invalid("not a permutation");
            }
            seen |= bit(p);
        }
        let mut g = Graph::empty(self.n)?;
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v])?;
        }
        Ok(g)
    }

    /// True when `other` is a spanning subgraph of `self` on the same vertex set.
    pub fn contains_edges_of(&self, other: &Graph) -> bool {
        self.n == other.n && self.adj.iter().zip(&other.adj).all(|(a, b)| b & !a == 0)
    }

    /// True if no two distinct vertices have the same (open) neighbourhood.
    pub fn is_twin_free(&self) -> bool {
        let mut rows = self.adj.clone();
        rows.sort_unstable();
        rows.windows(2).all(|w| w[0] != w[1])
    }

    /// The path `P_r` on vertices `0..r`.
    pub fn path(r: usize) -> Result<Self> {
        if r == 0 {
            return invalid("path needs at least one vertex");
        }
        let mut g = Graph::empty(r)?;
        for v in 1..r {
            g.add_edge(v - 1, v)?;
        }
        Ok(g)
    }

    /// The cycle `C_r`, `r >= 3`.
    pub fn cycle(r: usize) -> Result<Self> {
        if r < 3 {
            return invalid("cycle needs at least three vertices");
        }
        let mut g = Graph::path(r)?;
        g.add_edge(r - 1, 0)?;
        Ok(g)
    }

    /// The complete graph `K_r`.
    pub fn complete(r: usize) -> Result<Self> {
        if r == 0 {
            return invalid("complete graph needs at least one vertex");
        }
        let g = Graph::empty(r)?;
        let all = low_mask(r);
        let adj = (0..r).map(|v| all & !bit(v)).collect();
        Ok(Graph { adj, ..g })
    }

    /// Complete multipartite graph with the given part sizes; parts are
    /// consecutive vertex ranges.
    pub fn complete_multipartite(sizes: &PartSizes) -> Result<Self> {
        Graph::complete(sizes.len())?.blowup(sizes)
    }

    /// Turán graph `T_r(n)`: `r` parts, sizes differing by at most one,
    /// larger parts first. For `r >= n` this is `K_n`.
    pub fn turan(n: usize, r: usize) -> Result<Self> {
        if r == 0 {
            return invalid("Turan graph needs r >= 1");
        }
        if n == 0 {
            return Graph::empty(0);
        }
        Graph::complete_multipartite(&PartSizes::balanced(n, r.min(n))?)
    }

    /// The Petersen graph (outer 5-cycle `0..5`, inner pentagram `5..10`).
    pub fn petersen() -> Self {
        let mut g = Graph::empty(10).expect("10 vertices");
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
        }
        g
    }

    /// `k`-th power: `u ~ v` iff `0 < dist(u, v) <= k`.
    pub fn power(&self, k: usize) -> Graph {
        let mut adj = vec![0u64; self.n];
        for (v, row) in adj.iter_mut().enumerate() {
            // BFS frontier expansion for k rounds.
            let mut reached = bit(v);
            let mut frontier = bit(v);
            for _ in 0..k {
                let mut next = 0u64;
                for u in bits(frontier) {
                    next |= self.adj[u];
                }
                next &= !reached;
                if next == 0 {
                    break;
                }
                reached |= next;
                frontier = next;
            }
            *row = reached & !bit(v);
        }
        Graph { n: self.n, adj }
    }

    /// Replaces vertex `v` by an independent set of `sizes[v]` vertices,
    /// joining two new vertices iff their originals are adjacent.
    ///
    /// Fibers are consecutive ranges in vertex order.
    pub fn blowup(&self, sizes: &PartSizes) -> Result<Graph> {
        if sizes.len() != self.n {
            return invalid(format!(
                "blow-up needs {} part sizes, got {}",
                self.n,
                sizes.len()
            ));
        }
        let total = sizes.total();
        let mut g = Graph::empty(total)?;
        let offsets = sizes.offsets();
        let fiber = |v: usize| low_mask(offsets[v] + sizes[v]) & !low_mask(offsets[v]);
        for v in 0..self.n {
            let mut row = 0u64;
            for u in bits(self.adj[v]) {
                row |= fiber(u);
            }
            for x in offsets[v]..offsets[v] + sizes[v] {
                g.adj[x] = row;
            }
        }
        Ok(g)
    }

    /// Disjoint union, `other` placed after `self`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph> {
        let mut g = Graph::empty(self.n + other.n)?;
        for (u, v) in self.edges() {
            g.add_edge(u, v)?;
        }
        for (u, v) in other.edges() {
            g.add_edge(self.n + u, self.n + v)?;
        }
        Ok(g)
    }
}

/// Ordered list of positive part sizes `(n_1, ..., n_k)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct PartSizes(Vec<usize>);

impl PartSizes {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return invalid("part sizes must be nonempty");
        }
        if sizes.contains(&0) {
            return invalid("part sizes must be positive");
        }
        Ok(PartSizes(sizes))
    }

    /// `r` parts summing to `n` that differ by at most one, larger first.
    pub fn balanced(n: usize, r: usize) -> Result<Self> {
        if r == 0 || r > n {
            return invalid(format!(
                "balanced partition needs 1 <= r <= n, got r={r}, n={n}"
            ));
        }
        let (q, rem) = (n / r, n % r);
        PartSizes::new((0..r).map(|i| q + usize::from(i < rem)).collect())
    }

    pub fn ones(k: usize) -> Result<Self> {
        PartSizes::new(vec![1; k])
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn offsets(&self) -> Vec<usize> {
        self.0
            .iter()
            .scan(0, |acc, &s| {
                let o = *acc;
                *acc += s;
                Some(o)
            })
            .collect()
    }
}

impl std::ops::Index<usize> for PartSizes {
    type Output = usize;
    fn index(&self, i: usize) -> &usize {
        &self.0[i]
    }
}

impl TryFrom<Vec<usize>> for PartSizes {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        PartSizes::new(v)
    }
}

impl From<PartSizes> for Vec<usize> {
    fn from(p: PartSizes) -> Vec<usize> {
        p.0
    }
}
