//! Exact structural metrics: cliques, colourings, distances.

use super::{bit, bits, Graph};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A graph distance that may be infinite (disconnected pairs).
///
/// Serialized as a plain number, or the string `"inf"`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "DistanceJson", try_from = "DistanceJson")]
pub enum Distance {
    Finite(usize),
    Infinite,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DistanceJson {
    Finite(usize),
    Text(String),
}

impl From<Distance> for DistanceJson {
    fn from(d: Distance) -> Self {
        match d {
            Distance::Finite(x) => DistanceJson::Finite(x),
            Distance::Infinite => DistanceJson::Text("inf".into()),
        }
    }
}

impl TryFrom<DistanceJson> for Distance {
    type Error = String;

    fn try_from(d: DistanceJson) -> Result<Self, String> {
        match d {
            DistanceJson::Finite(x) => Ok(Distance::Finite(x)),
            DistanceJson::Text(s) if s == "inf" => Ok(Distance::Infinite),
            DistanceJson::Text(s) => Err(format!("bad distance {s:?}")),
        }
    }
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Infinite => None,
        }
    }

    pub fn at_most(self, bound: usize) -> bool {
        matches!(self, Distance::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

pub fn is_triangle_free(g: &Graph) -> bool {
    g.edges().all(|(u, v)| g.neighbors(u) & g.neighbors(v) == 0)
}

pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.order();
    let mut side = vec![None::<bool>; n];
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(false);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            let sv = side[v].unwrap();
            for u in bits(g.neighbors(v)) {
                match side[u] {
                    None => {
                        side[u] = Some(!sv);
                        stack.push(u);
                    }
                    Some(su) if su == sv => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Size of a largest clique (0 for the empty graph).
pub fn clique_number(g: &Graph) -> usize {
    fn expand(g: &Graph, size: usize, mut cand: u64, best: &mut usize) {
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        while cand != 0 {
            if size + cand.count_ones() as usize <= *best {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            expand(g, size + 1, cand & g.neighbors(v), best);
        }
    }
    let mut best = 0;
    expand(g, 0, g.vertex_mask(), &mut best);
    best
}

/// Exact chromatic number by branch and bound, seeded with the clique number
/// as lower bound.
pub fn chromatic_number(g: &Graph) -> usize {
    let n = g.order();
    if n == 0 {
        return 0;
    }
    // Highest degree first colours the constrained vertices early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let mut k = clique_number(g).max(1);
    loop {
        let mut classes = vec![0u64; k];
        if color_with(g, &order, 0, &mut classes, 0) {
            return k;
        }
        k += 1;
    }
}

fn color_with(g: &Graph, order: &[usize], i: usize, classes: &mut [u64], used: usize) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    let nb = g.neighbors(v);
    // Only one fresh colour is tried: colours are interchangeable.
    let limit = (used + 1).min(classes.len());
    for c in 0..limit {
        if classes[c] & nb == 0 {
            classes[c] |= bit(v);
            let ok = color_with(g, order, i + 1, classes, used.max(c + 1));
            classes[c] &= !bit(v);
            if ok {
                return true;
            }
        }
    }
    false
}

/// All proper colourings with at most `k` colours, as colour-per-vertex
/// vectors. Colour names are not canonicalized, so each partition appears
/// once per injective naming of its classes.
pub fn proper_colorings(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    fn go(g: &Graph, v: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == g.order() {
            out.push(cur.clone());
            return;
        }
        for c in 0..k {
            if bits(g.neighbors(v) & super::low_mask(v)).all(|u| cur[u] != c) {
                cur.push(c);
                go(g, v + 1, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, 0, k, &mut Vec::with_capacity(g.order()), &mut out);
    out
}

/// BFS distances from `s`; `None` marks unreachable vertices.
pub fn distances_from(g: &Graph, s: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[s] = Some(0);
    let mut seen = bit(s);
    let mut frontier = bit(s);
    let mut d = 0;
    while frontier != 0 {
        d += 1;
        let mut next = 0;
        for v in bits(frontier) {
            next |= g.neighbors(v);
        }
        next &= !seen;
        for v in bits(next) {
            dist[v] = Some(d);
        }
        seen |= next;
        frontier = next;
    }
    dist
}

pub fn eccentricity(g: &Graph, v: usize) -> Distance {
    let dist = distances_from(g, v);
    if dist.iter().any(Option::is_none) {
        Distance::Infinite
    } else {
        Distance::Finite(dist.into_iter().flatten().max().unwrap_or(0))
    }
}

pub fn is_connected(g: &Graph) -> bool {
    g.order() == 0 || distances_from(g, 0).iter().all(Option::is_some)
}

/// Largest eccentricity; `Infinite` for disconnected graphs.
pub fn diameter(g: &Graph) -> Distance {
    (0..g.order())
        .map(|v| eccentricity(g, v))
        .max()
        .unwrap_or(Distance::Finite(0))
}

/// Smallest eccentricity; `Infinite` for disconnected graphs.
pub fn radius(g: &Graph) -> Distance {
    if !is_connected(g) {
        return Distance::Infinite;
    }
    (0..g.order())
        .map(|v| eccentricity(g, v))
        .min()
        .unwrap_or(Distance::Finite(0))
}
