//! Labeled and unlabeled copy counting.
//!
//! A labeled copy of `H` in `G` is an injective map `V(H) -> V(G)` sending
//! edges to edges (copies, not induced copies). Unlabeled copies are obtained
//! by dividing by `|Aut(H)|`, which itself is the number of labeled copies of
//! `H` in `H`.

use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph};
use crate::par;
use crate::BigCount;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Falling factorial `(n)_k = n (n-1) ... (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    (n - k + 1..=n).fold(BigCount::one(), |acc, x| acc * x)
}

pub fn factorial(n: u64) -> BigCount {
    falling_factorial(n, n)
}

/// Reusable embedding search for a fixed pattern.
///
/// Pattern vertices are mapped in a connectivity-first order so that every
/// vertex after the first of its component has an already-mapped neighbour,
/// and candidates are the intersection of the mapped neighbours' rows.
#[derive(Clone, Debug)]
pub struct CopyCounter {
    pattern: Graph,
    order: Vec<usize>,
    /// For each position, the earlier positions adjacent to it.
    back: Vec<Vec<usize>>,
    isolated: Vec<usize>,
}

impl CopyCounter {
    pub fn new(pattern: &Graph) -> Self {
        let n = pattern.order();
        let isolated: Vec<usize> = (0..n).filter(|&v| pattern.degree(v) == 0).collect();
        let mut placed = 0u64;
        let mut order = Vec::with_capacity(n);
        let active: Vec<usize> = (0..n).filter(|&v| pattern.degree(v) > 0).collect();
        while order.len() < active.len() {
            let next = active
                .iter()
                .copied()
                .filter(|&v| placed & bit(v) == 0)
                .max_by_key(|&v| {
                    (
                        (pattern.neighbors(v) & placed).count_ones(),
                        pattern.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("unplaced vertex exists");
            order.push(next);
            placed |= bit(next);
        }
        let back = Self::back_edges(pattern, &order);
        CopyCounter {
            pattern: pattern.clone(),
            order,
            back,
            isolated,
        }
    }

    fn back_edges(pattern: &Graph, order: &[usize]) -> Vec<Vec<usize>> {
        (0..order.len())
            .map(|i| {
                (0..i)
                    .filter(|&j| pattern.has_edge(order[i], order[j]))
                    .collect()
            })
            .collect()
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    /// Number of labeled copies of the pattern in `host`.
    pub fn count(&self, host: &Graph) -> BigCount {
        let k = self.pattern.order();
        if k > host.order() {
            return BigCount::zero();
        }
        let search = Search::new(self, &self.order, &self.back, host, None);
        let core = search.run_parallel();
        let free = (host.order() - self.order.len()) as u64;
        BigCount::from(core) * falling_factorial(free, self.isolated.len() as u64)
    }

    /// Labeled copies where pattern vertex `v` may only map into `allowed[v]`.
    pub fn count_restricted(&self, host: &Graph, allowed: &[u64]) -> BigCount {
        assert_eq!(allowed.len(), self.pattern.order());
        if self.pattern.order() > host.order() {
            return BigCount::zero();
        }
        // Isolated vertices are constrained too, so they join the search.
        let mut order = self.order.clone();
        order.extend(&self.isolated);
        let back = Self::back_edges(&self.pattern, &order);
        let search = Search::new(self, &order, &back, host, Some(allowed));
        BigCount::from(search.run_parallel())
    }

    /// Whether at least one copy exists.
    pub fn is_contained_in(&self, host: &Graph) -> bool {
        if self.pattern.order() > host.order() {
            return false;
        }
        let search = Search::new(self, &self.order, &self.back, host, None);
        let mut images = vec![0usize; self.order.len()];
        self.order.is_empty() || search.exists(0, &mut images, 0)
    }
}

struct Search<'a> {
    order: &'a [usize],
    back: &'a [Vec<usize>],
    host: &'a Graph,
    /// Per position: host vertices allowed by degree and restriction.
    static_mask: Vec<u64>,
}

impl<'a> Search<'a> {
    fn new(
        counter: &'a CopyCounter,
        order: &'a [usize],
        back: &'a [Vec<usize>],
        host: &'a Graph,
        allowed: Option<&[u64]>,
    ) -> Self {
        let static_mask = order
            .iter()
            .map(|&v| {
                let need = counter.pattern.degree(v);
                let mut m = 0u64;
                for x in 0..host.order() {
                    if host.degree(x) >= need {
                        m |= bit(x);
                    }
                }
                allowed.map_or(m, |a| m & a[v])
            })
            .collect();
        Search {
            order,
            back,
            host,
            static_mask,
        }
    }

    #[inline]
    fn candidates(&self, pos: usize, images: &[usize], used: u64) -> u64 {
        let mut c = self.static_mask[pos] & !used;
        for &p in &self.back[pos] {
            c &= self.host.neighbors(images[p]);
        }
        c
    }

    fn count_from(&self, pos: usize, images: &mut [usize], used: u64) -> u128 {
        let cand = self.candidates(pos, images, used);
        if pos + 1 == self.order.len() {
            return u128::from(cand.count_ones());
        }
        let mut total = 0u128;
        for x in bits(cand) {
            images[pos] = x;
            total += self.count_from(pos + 1, images, used | bit(x));
        }
        total
    }

    fn run_parallel(&self) -> u128 {
        if self.order.is_empty() {
            return 1;
        }
        let first: Vec<usize> = bits(self.candidates(0, &[], 0)).collect();
        if self.order.len() == 1 {
            return first.len() as u128;
        }
        par::map_collect(first, |x| {
            let mut images = vec![0usize; self.order.len()];
            images[0] = x;
            self.count_from(1, &mut images, bit(x))
        })
        .into_iter()
        .sum()
    }

    fn exists(&self, pos: usize, images: &mut [usize], used: u64) -> bool {
        let cand = self.candidates(pos, images, used);
        if pos + 1 == self.order.len() {
            return cand != 0;
        }
        bits(cand).any(|x| {
            images[pos] = x;
            self.exists(pos + 1, images, used | bit(x))
        })
    }
}

/// `H*(G)`: labeled copies of `h` in `g`.
pub fn labeled_copies(h: &Graph, g: &Graph) -> BigCount {
    CopyCounter::new(h).count(g)
}

/// `|Aut(H)|`, computed as the number of labeled copies of `h` in itself.
pub fn automorphism_count(h: &Graph) -> BigCount {
    labeled_copies(h, h)
}

/// `H(G) = H*(G) / |Aut(H)|`; inexact division is reported as an internal error.
pub fn unlabeled_copies(h: &Graph, g: &Graph) -> Result<BigCount> {
    divide_by_automorphisms(labeled_copies(h, g), &automorphism_count(h))
}

pub(crate) fn divide_by_automorphisms(labeled: BigCount, aut: &BigCount) -> Result<BigCount> {
    let (q, r) = labeled.div_rem(aut);
    if !r.is_zero() {
        return Err(Error::Internal(format!(
            "labeled count {labeled} not divisible by |Aut| = {aut}"
        )));
    }
    Ok(q)
}

/// Whether `g` contains a (not necessarily induced) copy of `h`.
pub fn contains_copy(h: &Graph, g: &Graph) -> bool {
    CopyCounter::new(h).is_contained_in(g)
}
