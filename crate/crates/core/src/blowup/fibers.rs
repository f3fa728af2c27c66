//! Enumeration of homomorphisms of a blown-up pattern, grouped by fibers.
//!
//! A labeled copy of `blowup(H, w)` in `blowup(F, s)` projects to a
//! homomorphism `psi` of the *explicit* blow-up of `H` into `F`, and each such
//! `psi` lifts to exactly `prod_u (s_u)_{|psi^-1(u)|}` injective copies. The
//! `w_p` twins of a pattern vertex `p` choose their images independently
//! inside a common candidate set, so instead of enumerating them one by one we
//! choose a support `S_p` and a composition of `w_p` over `S_p`, weighted by
//! the multinomial coefficient.
//!
//! Pattern vertices are split into a connected-first *core*, enumerated
//! explicitly, and an independent set of *deferred* vertices (leaves and heavy
//! vertices) whose candidate sets are fixed once the core is placed. Callers
//! either expand the deferred compositions (exact polynomial) or keep them as
//! powers of linear forms (density forms).

use super::WeightedPattern;
use crate::budget::Meter;
use crate::counting::factorial;
use crate::error::Result;
use crate::graph::{bit, bits, Graph};
use crate::par;
use crate::BigCount;
use num_traits::One;

/// One placement of the core vertices.
pub(crate) struct CoreRecord<'s> {
    /// Fiber multiplicities contributed by core vertices, indexed by host vertex.
    pub fiber: &'s [u32],
    pub coeff: &'s BigCount,
    /// `(candidate mask, weight)` for every deferred pattern vertex.
    pub deferred: &'s [(u64, u32)],
}

struct Choice {
    support: u64,
    counts: Vec<(usize, u32)>,
    coeff: BigCount,
}

pub(crate) struct FiberPlan<'a> {
    weights: &'a [u32],
    host: &'a Graph,
    core: Vec<usize>,
    core_back: Vec<Vec<usize>>,
    deferred: Vec<usize>,
    deferred_nbrs: Vec<Vec<usize>>,
}

impl<'a> FiberPlan<'a> {
    pub(crate) fn new(h: &'a WeightedPattern, host: &'a Graph) -> Self {
        let g = h.pattern();
        let w = h.weights();
        let n = g.order();

        let mut by_priority: Vec<usize> = (0..n).collect();
        by_priority.sort_by_key(|&v| (std::cmp::Reverse(w[v]), g.degree(v), v));
        let mut deferred_mask = 0u64;
        for v in by_priority {
            if (w[v] > 1 || g.degree(v) <= 1) && g.neighbors(v) & deferred_mask == 0 {
                deferred_mask |= bit(v);
            }
        }

        let mut placed = 0u64;
        let mut core = Vec::new();
        let core_mask = g.vertex_mask() & !deferred_mask;
        while placed != core_mask {
            let v = bits(core_mask & !placed)
                .max_by_key(|&v| {
                    (
                        (g.neighbors(v) & placed).count_ones(),
                        g.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .unwrap();
            core.push(v);
            placed |= bit(v);
        }
        let pos_of = |v: usize| core.iter().position(|&c| c == v);
        let core_back = (0..core.len())
            .map(|i| (0..i).filter(|&j| g.has_edge(core[i], core[j])).collect())
            .collect();
        let deferred: Vec<usize> = bits(deferred_mask).collect();
        let deferred_nbrs = deferred
            .iter()
            .map(|&d| bits(g.neighbors(d)).map(|u| pos_of(u).unwrap()).collect())
            .collect();
        FiberPlan {
            weights: w,
            host,
            core,
            core_back,
            deferred,
            deferred_nbrs,
        }
    }

    fn choices(&self, weight: u32, cand: u64) -> Vec<Choice> {
        if weight == 1 {
            return bits(cand)
                .map(|u| Choice {
                    support: bit(u),
                    counts: vec![(u, 1)],
                    coeff: BigCount::one(),
                })
                .collect();
        }
        let mut out = Vec::new();
        // Every nonempty submask of `cand` with at most `weight` elements.
        let mut sub = cand;
        while sub != 0 {
            let k = sub.count_ones();
            if k <= weight {
                let verts: Vec<usize> = bits(sub).collect();
                for comp in compositions(weight, k as usize, true) {
                    out.push(Choice {
                        support: sub,
                        counts: verts.iter().copied().zip(comp.iter().copied()).collect(),
                        coeff: multinomial(weight, &comp),
                    });
                }
            }
            sub = (sub - 1) & cand;
        }
        out
    }

    fn candidates(&self, pos: usize, common: &[u64]) -> u64 {
        self.core_back[pos]
            .iter()
            .fold(self.host.vertex_mask(), |m, &q| m & common[q])
    }

    fn common_neighbors(&self, support: u64) -> u64 {
        bits(support).fold(self.host.vertex_mask(), |m, u| m & self.host.neighbors(u))
    }

    /// Runs the enumeration, splitting on the first core vertex across
    /// threads. Each worker folds into its own accumulator; accumulators are
    /// merged in a fixed order.
    pub(crate) fn fold<A, M, V, G>(&self, meter: &Meter, make: M, visit: V, merge: G) -> Result<A>
    where
        A: Send,
        M: Fn() -> A + Sync + Send,
        V: Fn(&mut A, &CoreRecord<'_>) -> Result<()> + Sync + Send,
        G: Fn(&mut A, A),
    {
        let k = self.host.order();
        let mut state = State {
            fiber: vec![0u32; k],
            coeff: BigCount::one(),
            common: vec![0u64; self.core.len()],
            deferred: vec![(0, 0); self.deferred.len()],
        };
        if self.core.is_empty() {
            let mut acc = make();
            self.descend(0, &mut state, meter, &mut |r| visit(&mut acc, r))?;
            return Ok(acc);
        }
        let first = self.choices(self.weights[self.core[0]], self.host.vertex_mask());
        let parts = par::map_collect(first, |choice| -> Result<A> {
            let mut acc = make();
            let mut st = state.clone();
            st.apply(&choice, self.common_neighbors(choice.support), 0);
            self.descend(1, &mut st, meter, &mut |r| visit(&mut acc, r))?;
            Ok(acc)
        });
        let mut total = make();
        for part in parts {
            merge(&mut total, part?);
        }
        Ok(total)
    }

    fn descend(
        &self,
        pos: usize,
        st: &mut State,
        meter: &Meter,
        visit: &mut dyn FnMut(&CoreRecord<'_>) -> Result<()>,
    ) -> Result<()> {
        meter.tick()?;
        if pos == self.core.len() {
            for (i, nbrs) in self.deferred_nbrs.iter().enumerate() {
                let mask = nbrs
                    .iter()
                    .fold(self.host.vertex_mask(), |m, &q| m & st.common[q]);
                if mask == 0 {
                    return Ok(());
                }
                st.deferred[i] = (mask, self.weights[self.deferred[i]]);
            }
            return visit(&CoreRecord {
                fiber: &st.fiber,
                coeff: &st.coeff,
                deferred: &st.deferred,
            });
        }
        let cand = self.candidates(pos, &st.common);
        for choice in self.choices(self.weights[self.core[pos]], cand) {
            let saved = st.coeff.clone();
            st.apply(&choice, self.common_neighbors(choice.support), pos);
            self.descend(pos + 1, st, meter, visit)?;
            for &(u, c) in &choice.counts {
                st.fiber[u] -= c;
            }
            st.coeff = saved;
        }
        Ok(())
    }
}

#[derive(Clone)]
struct State {
    fiber: Vec<u32>,
    coeff: BigCount,
    common: Vec<u64>,
    deferred: Vec<(u64, u32)>,
}

impl State {
    fn apply(&mut self, choice: &Choice, common: u64, pos: usize) {
        for &(u, c) in &choice.counts {
            self.fiber[u] += c;
        }
        if !choice.coeff.is_one() {
            self.coeff *= &choice.coeff;
        }
        self.common[pos] = common;
    }
}

/// Compositions of `total` into `parts` ordered parts; parts are `>= 1` when
/// `positive`, `>= 0` otherwise.
pub(crate) fn compositions(total: u32, parts: usize, positive: bool) -> Vec<Vec<u32>> {
    fn go(rem: u32, left: usize, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 1 {
            if rem >= min {
                cur.push(rem);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let reserve = min * (left as u32 - 1);
        if rem < reserve {
            return;
        }
        for x in min..=rem - reserve {
            cur.push(x);
            go(rem - x, left - 1, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(total, parts, u32::from(positive), &mut Vec::new(), &mut out);
    out
}

pub(crate) fn multinomial(total: u32, parts: &[u32]) -> BigCount {
    let den = parts
        .iter()
        .fold(BigCount::one(), |acc, &c| acc * factorial(u64::from(c)));
    factorial(u64::from(total)) / den
}
