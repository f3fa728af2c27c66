//! The copy polynomial `P(s) = sum_m c_m prod_u (s_u)_{m_u}`.

use super::fibers::{compositions, multinomial, FiberPlan};
use super::WeightedPattern;
use crate::budget::{Budget, Meter};
use crate::error::{invalid, Result};
use crate::graph::{bits, Graph};
use crate::optimizer::{maximize_density, DensityForm};
use crate::par;
use crate::BigCount;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// Exact copy counts in blow-ups of a fixed host pattern.
///
/// Each term maps a fiber-size vector `m` (one entry per host pattern vertex)
/// to a coefficient; evaluation at part sizes `s` is
/// `sum_m coeff_m * prod_u s_u (s_u - 1) ... (s_u - m_u + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct BlowupPolynomial {
    order: usize,
    terms: BTreeMap<Vec<u32>, BigCount>,
}

impl BlowupPolynomial {
    pub fn zero(order: usize) -> Self {
        BlowupPolynomial {
            order,
            terms: BTreeMap::new(),
        }
    }

    /// Number of host pattern vertices (variables).
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigCount)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, fibers: Vec<u32>, coeff: BigCount) -> Result<()> {
        if fibers.len() != self.order {
            return invalid("fiber vector length differs from polynomial order");
        }
        if coeff != BigCount::default() {
            *self.terms.entry(fibers).or_default() += coeff;
        }
        Ok(())
    }

    /// Total fiber mass of each term; a single value for polynomials built
    /// from one pattern.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|m| m.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Exact evaluation. Sizes may be zero.
    pub fn evaluate(&self, sizes: &[u64]) -> Result<BigCount> {
        if sizes.len() != self.order {
            return invalid(format!(
                "polynomial has {} variables, got {} sizes",
                self.order,
                sizes.len()
            ));
        }
        let mut max_m = vec![0u32; self.order];
        for m in self.terms.keys() {
            for (mx, &x) in max_m.iter_mut().zip(m) {
                *mx = (*mx).max(x);
            }
        }
        // table[u][j] = (s_u)_j
        let table: Vec<Vec<BigCount>> = (0..self.order)
            .map(|u| {
                let mut row = Vec::with_capacity(max_m[u] as usize + 1);
                let mut acc = BigCount::from(1u32);
                row.push(acc.clone());
                for j in 0..u64::from(max_m[u]) {
                    acc *= sizes[u].saturating_sub(j);
                    row.push(acc.clone());
                }
                row
            })
            .collect();
        let mut total = BigCount::default();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (u, &mu) in m.iter().enumerate() {
                if mu > 0 {
                    t *= &table[u][mu as usize];
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Polynomial with host variables renamed by `perm` (variable `u` becomes `perm[u]`).
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.order {
            return invalid("permutation length differs from polynomial order");
        }
        let mut out = BlowupPolynomial::zero(self.order);
        for (m, c) in &self.terms {
            let mut p = vec![0; self.order];
            for (u, &x) in m.iter().enumerate() {
                p[perm[u]] = x;
            }
            out.add_term(p, c.clone())?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    order: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    fibers: Vec<u32>,
    coefficient: String,
}

impl TryFrom<PolyJson> for BlowupPolynomial {
    type Error = crate::Error;
    fn try_from(j: PolyJson) -> Result<Self> {
        let mut p = BlowupPolynomial::zero(j.order);
        for t in j.terms {
            let c: BigCount = t.coefficient.parse().map_err(|_| {
                crate::Error::InvalidArgument(format!("bad coefficient {:?}", t.coefficient))
            })?;
            p.add_term(t.fibers, c)?;
        }
        Ok(p)
    }
}

impl From<BlowupPolynomial> for PolyJson {
    fn from(p: BlowupPolynomial) -> Self {
        PolyJson {
            order: p.order,
            terms: p
                .terms
                .into_iter()
                .map(|(fibers, c)| TermJson {
                    fibers,
                    coefficient: c.to_string(),
                })
                .collect(),
        }
    }
}

/// Builds `P` with `P(s)` = labeled copies of `blowup(h)` in `blowup(host, s)`
/// for every size vector `s`.
pub fn copies_in_blowup_poly(
    h: &WeightedPattern,
    host: &Graph,
    budget: Budget,
) -> Result<BlowupPolynomial> {
    let plan = FiberPlan::new(h, host);
    let meter = Meter::new(budget);
    let k = host.order();
    let acc = plan.fold(
        &meter,
        HashMap::<Vec<u32>, BigCount>::new,
        |acc, rec| {
            // Expand each deferred vertex over weak compositions of its
            // weight across its candidate set.
            let options: Vec<_> = rec
                .deferred
                .iter()
                .map(|&(mask, w)| {
                    let verts: Vec<usize> = bits(mask).collect();
                    compositions(w, verts.len(), false)
                        .into_iter()
                        .map(|c| {
                            let coeff = multinomial(w, &c);
                            let spread = verts
                                .iter()
                                .copied()
                                .zip(c)
                                .filter(|&(_, x)| x > 0)
                                .collect();
                            (spread, coeff)
                        })
                        .collect()
                })
                .collect();
            let mut fiber = rec.fiber.to_vec();
            expand(&options, 0, &mut fiber, rec.coeff.clone(), acc, &meter)
        },
        |total, part| {
            for (m, c) in part {
                *total.entry(m).or_default() += c;
            }
        },
    )?;
    Ok(BlowupPolynomial {
        order: k,
        terms: acc.into_iter().collect(),
    })
}

type Options = [Vec<(Vec<(usize, u32)>, BigCount)>];

fn expand(
    options: &Options,
    i: usize,
    fiber: &mut Vec<u32>,
    coeff: BigCount,
    acc: &mut HashMap<Vec<u32>, BigCount>,
    meter: &Meter,
) -> Result<()> {
    if i == options.len() {
        meter.tick()?;
        match acc.get_mut(fiber.as_slice()) {
            Some(c) => *c += coeff,
            None => {
                acc.insert(fiber.clone(), coeff);
            }
        }
        return Ok(());
    }
    for (spread, c) in &options[i] {
        for &(u, x) in spread {
            fiber[u] += x;
        }
        expand(options, i + 1, fiber, &coeff * c, acc, meter)?;
        for &(u, x) in spread {
            fiber[u] -= x;
        }
    }
    Ok(())
}

/// Best part sizes for a copy polynomial under a total-size constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartMaximum {
    pub sizes: Vec<u64>,
    /// Labeled count at `sizes`.
    #[serde(serialize_with = "crate::experiments::ser_display")]
    pub count: BigCount,
    /// True when every admissible size vector was examined.
    pub exact: bool,
}

/// Above this many compositions the search falls back to local search.
pub const EXHAUSTIVE_LIMIT: u64 = 200_000;

/// Maximizes `P(n_1, ..., n_k)` over positive integers summing to `n`.
///
/// Two variables, or any instance with at most [`EXHAUSTIVE_LIMIT`]
/// compositions, is scanned exhaustively. Otherwise the best of a rounded
/// continuous optimum and the balanced split is improved by steepest
/// single-unit transfers until no transfer helps; such results are flagged
/// `exact = false`.
pub fn maximize_over_parts(p: &BlowupPolynomial, n: u64) -> Result<PartMaximum> {
    let k = p.order();
    if k == 0 {
        return invalid("polynomial has no variables");
    }
    if n < k as u64 {
        return invalid(format!("n = {n} is smaller than the {k} parts"));
    }
    if k == 1 {
        return Ok(PartMaximum {
            sizes: vec![n],
            count: p.evaluate(&[n])?,
            exact: true,
        });
    }
    let count = binomial_u64(n - 1, k as u64 - 1);
    if k == 2 || count.is_some_and(|c| c <= EXHAUSTIVE_LIMIT) {
        let all = positive_compositions(n, k);
        let (sizes, value) = best_of(p, all)?;
        return Ok(PartMaximum {
            sizes,
            count: value,
            exact: true,
        });
    }

    let mut seeds = vec![balanced(n, k)];
    let form = DensityForm::from_polynomial(p);
    if !form.is_zero() {
        let relaxed = maximize_density(&form, 8, 0);
        seeds.push(round_to_sum(&relaxed.weights, n));
    }
    let mut best: Option<(Vec<u64>, BigCount)> = None;
    for seed in seeds {
        let (s, v) = local_search(p, seed)?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((s, v));
        }
    }
    let (sizes, count) = best.expect("at least one seed");
    Ok(PartMaximum {
        sizes,
        count,
        exact: false,
    })
}

fn best_of(p: &BlowupPolynomial, candidates: Vec<Vec<u64>>) -> Result<(Vec<u64>, BigCount)> {
    let values = par::map_collect(candidates, |s| p.evaluate(&s).map(|v| (s, v)));
    let mut best: Option<(Vec<u64>, BigCount)> = None;
    for r in values {
        let (s, v) = r?;
        // Strict comparison keeps the first maximizer in enumeration order.
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((s, v));
        }
    }
    Ok(best.expect("nonempty candidate list"))
}

fn local_search(p: &BlowupPolynomial, mut cur: Vec<u64>) -> Result<(Vec<u64>, BigCount)> {
    let k = cur.len();
    let mut val = p.evaluate(&cur)?;
    loop {
        let mut moves = Vec::new();
        for from in 0..k {
            if cur[from] <= 1 {
                continue;
            }
            for to in 0..k {
                if to != from {
                    let mut s = cur.clone();
                    s[from] -= 1;
                    s[to] += 1;
                    moves.push(s);
                }
            }
        }
        if moves.is_empty() {
            return Ok((cur, val));
        }
        let (s, v) = best_of(p, moves)?;
        if v > val {
            cur = s;
            val = v;
        } else {
            return Ok((cur, val));
        }
    }
}

fn balanced(n: u64, k: usize) -> Vec<u64> {
    let (q, r) = (n / k as u64, n % k as u64);
    (0..k as u64).map(|i| q + u64::from(i < r)).collect()
}

/// Largest-remainder rounding of simplex weights to positive integers summing to `n`.
pub(crate) fn round_to_sum(weights: &[f64], n: u64) -> Vec<u64> {
    let k = weights.len() as u64;
    let spare = (n - k) as f64;
    let raw: Vec<f64> = weights.iter().map(|w| w.max(0.0) * spare).collect();
    let mut out: Vec<u64> = raw.iter().map(|x| 1 + x.floor() as u64).collect();
    let mut left = n.saturating_sub(out.iter().sum());
    let mut idx: Vec<usize> = (0..weights.len()).collect();
    idx.sort_by(|&a, &b| {
        let fa = raw[a] - raw[a].floor();
        let fb = raw[b] - raw[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    for &i in idx.iter().cycle() {
        if left == 0 {
            break;
        }
        out[i] += 1;
        left -= 1;
    }
    // Floating error can overshoot by a unit; trim from the largest part.
    while out.iter().sum::<u64>() > n {
        let i = (0..out.len()).max_by_key(|&i| out[i]).unwrap();
        out[i] -= 1;
    }
    out
}

fn positive_compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
    fn go(rem: u64, left: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 1..=rem - (left as u64 - 1) {
            cur.push(x);
            go(rem - x, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    u64::try_from(acc).ok()
}
