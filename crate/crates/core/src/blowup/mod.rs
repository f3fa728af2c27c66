//! Weighted patterns and exact copy counts in blow-ups.

mod fibers;
mod poly;

pub(crate) use fibers::FiberPlan;
pub(crate) use poly::round_to_sum;
pub use poly::{copies_in_blowup_poly, maximize_over_parts, BlowupPolynomial, PartMaximum};

use crate::budget::{Budget, Meter};
use crate::counting::{factorial, CopyCounter};
use crate::error::{invalid, Error, Result};
use crate::graph::{bit, bits, parse_graph6, to_graph6, Graph, PartSizes};
use crate::BigCount;
use serde::{Deserialize, Serialize};

/// A pattern graph with a positive multiplicity per vertex, standing for the
/// blow-up in which vertex `p` becomes an independent set of `weights[p]`
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PatternJson", into = "PatternJson")]
pub struct WeightedPattern {
    pattern: Graph,
    weights: Vec<u32>,
}

impl WeightedPattern {
    pub fn new(pattern: Graph, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != pattern.order() {
            return invalid(format!(
                "{} weights given for a pattern on {} vertices",
                weights.len(),
                pattern.order()
            ));
        }
        if weights.contains(&0) {
            return invalid("pattern weights must be positive");
        }
        Ok(WeightedPattern { pattern, weights })
    }

    pub fn unit(pattern: Graph) -> Self {
        let weights = vec![1; pattern.order()];
        WeightedPattern { pattern, weights }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of vertices of the represented blow-up.
    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }

    /// Twin-free patterns are the ones [`aut_count_blowup`] accepts.
    pub fn is_reduced(&self) -> bool {
        self.pattern.is_twin_free()
    }

    pub fn part_sizes(&self) -> PartSizes {
        PartSizes::new(self.weights.iter().map(|&w| w as usize).collect())
            .expect("weights are positive")
    }

    /// The blow-up as an explicit graph (fails beyond the vertex bound).
    pub fn explicit(&self) -> Result<Graph> {
        self.pattern.blowup(&self.part_sizes())
    }
}

#[derive(Serialize, Deserialize)]
struct PatternJson {
    pattern: String,
    weights: Vec<u32>,
}

impl TryFrom<PatternJson> for WeightedPattern {
    type Error = Error;
    fn try_from(j: PatternJson) -> Result<Self> {
        WeightedPattern::new(parse_graph6(&j.pattern)?, j.weights)
    }
}

impl From<WeightedPattern> for PatternJson {
    fn from(p: WeightedPattern) -> Self {
        PatternJson {
            pattern: to_graph6(&p.pattern),
            weights: p.weights,
        }
    }
}

/// All homomorphisms `V(pattern) -> V(host)` (edges to edges; the host has no
/// loops, so adjacent vertices never share an image).
pub fn hom_enumerate(pattern: &Graph, host: &Graph, budget: Budget) -> Result<Vec<Vec<usize>>> {
    let n = pattern.order();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let v = bits(pattern.vertex_mask() & !placed)
            .max_by_key(|&v| {
                (
                    (pattern.neighbors(v) & placed).count_ones(),
                    pattern.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        order.push(v);
        placed |= bit(v);
    }
    let meter = Meter::new(budget);
    let mut out = Vec::new();
    let mut images = vec![usize::MAX; n];

    fn go(
        i: usize,
        order: &[usize],
        pattern: &Graph,
        host: &Graph,
        images: &mut [usize],
        meter: &Meter,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        meter.tick()?;
        if i == order.len() {
            out.push(images.to_vec());
            return Ok(());
        }
        let v = order[i];
        let cand = bits(pattern.neighbors(v))
            .filter(|&u| images[u] != usize::MAX)
            .fold(host.vertex_mask(), |m, u| m & host.neighbors(images[u]));
        for x in bits(cand) {
            images[v] = x;
            go(i + 1, order, pattern, host, images, meter, out)?;
        }
        images[v] = usize::MAX;
        Ok(())
    }

    go(0, &order, pattern, host, &mut images, &meter, &mut out)?;
    out.sort();
    Ok(out)
}

/// `|Aut(blowup(H, w))|` for a twin-free pattern: the weight-preserving
/// automorphisms of the pattern, each extended by `prod_p w_p!` permutations
/// inside the fibers.
pub fn aut_count_blowup(h: &WeightedPattern) -> Result<BigCount> {
    if !h.is_reduced() {
        return Err(Error::NotReduced);
    }
    let g = h.pattern();
    let w = h.weights();
    let allowed: Vec<u64> = (0..g.order())
        .map(|p| {
            (0..g.order())
                .filter(|&q| w[q] == w[p])
                .fold(0u64, |m, q| m | bit(q))
        })
        .collect();
    let pattern_auts = CopyCounter::new(g).count_restricted(g, &allowed);
    Ok(w.iter()
        .fold(pattern_auts, |acc, &x| acc * factorial(u64::from(x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::automorphism_count;

    fn n(x: u64) -> BigCount {
        BigCount::from(x)
    }

    #[test]
    fn hom_counts() {
        let k2 = Graph::complete(2).unwrap();
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(
            hom_enumerate(&k2, &k2, Budget::unlimited()).unwrap().len(),
            2
        );
        assert_eq!(
            hom_enumerate(&c5, &c5, Budget::unlimited()).unwrap().len(),
            10
        );
        assert!(hom_enumerate(&c5, &k2, Budget::unlimited())
            .unwrap()
            .is_empty());
    }

    /// Every map `V(H) -> V(F)`, kept when it sends edges to edges.
    fn brute_homs(h: &Graph, f: &Graph) -> usize {
        let (k, m) = (h.order(), f.order());
        (0..m.pow(k as u32))
            .filter(|&code| {
                let img: Vec<usize> = (0..k).map(|i| code / m.pow(i as u32) % m).collect();
                h.edges().all(|(u, v)| f.has_edge(img[u], img[v]))
            })
            .count()
    }

    #[test]
    fn hom_enumeration_matches_brute_force() {
        let hosts = [
            Graph::cycle(5).unwrap(),
            Graph::complete(3).unwrap(),
            Graph::path(4).unwrap(),
        ];
        let pats = [
            Graph::path(3).unwrap(),
            Graph::cycle(4).unwrap(),
            Graph::empty(2).unwrap(),
        ];
        for h in &pats {
            for f in &hosts {
                assert_eq!(
                    hom_enumerate(h, f, Budget::unlimited()).unwrap().len(),
                    brute_homs(h, f)
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = hom_enumerate(
            &Graph::path(8).unwrap(),
            &Graph::complete(8).unwrap(),
            Budget(100),
        );
        assert!(matches!(err, Err(Error::BudgetExceeded { budget: 100 })));
    }

    #[test]
    fn blowup_automorphisms() {
        let c5 = WeightedPattern::unit(Graph::cycle(5).unwrap());
        assert_eq!(aut_count_blowup(&c5).unwrap(), n(10));
        let broom = WeightedPattern::new(Graph::path(6).unwrap(), vec![2, 1, 1, 1, 1, 2]).unwrap();
        assert_eq!(aut_count_blowup(&broom).unwrap(), n(8));
        assert_eq!(automorphism_count(&broom.explicit().unwrap()), n(8));
        let big = WeightedPattern::new(Graph::path(6).unwrap(), vec![13, 1, 1, 1, 1, 13]).unwrap();
        assert_eq!(
            aut_count_blowup(&big).unwrap(),
            n(2) * factorial(13) * factorial(13)
        );
        // Asymmetric weights kill the reflection.
        let lop = WeightedPattern::new(Graph::path(6).unwrap(), vec![2, 1, 1, 1, 1, 3]).unwrap();
        assert_eq!(aut_count_blowup(&lop).unwrap(), n(2 * 6));
        assert_eq!(automorphism_count(&lop.explicit().unwrap()), n(12));
    }

    #[test]
    fn non_reduced_patterns_rejected() {
        let p3 = WeightedPattern::unit(Graph::path(3).unwrap());
        assert_eq!(aut_count_blowup(&p3), Err(Error::NotReduced));
    }

    #[test]
    fn pattern_validation_and_json() {
        assert!(WeightedPattern::new(Graph::path(2).unwrap(), vec![1]).is_err());
        assert!(WeightedPattern::new(Graph::path(2).unwrap(), vec![1, 0]).is_err());
        let p = WeightedPattern::new(Graph::path(2).unwrap(), vec![1, 2]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"pattern":"A_","weights":[1,2]}"#);
        assert_eq!(serde_json::from_str::<WeightedPattern>(&json).unwrap(), p);
        assert!(
            serde_json::from_str::<WeightedPattern>(r#"{"pattern":"A_","weights":[1]}"#).is_err()
        );
    }
}
