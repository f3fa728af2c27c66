use super::{best_bipartite_split, ser_display, Relation, Verdict};
use crate::blowup::{copies_in_blowup_poly, WeightedPattern};
use crate::budget::Budget;
use crate::counting::{automorphism_count, divide_by_automorphisms, factorial, falling_factorial};
use crate::error::{invalid, Result};
use crate::graph::{bit, bits, to_graph6, Graph, MAX_VERTICES};
use crate::rational::from_count;
use crate::BigCount;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};

/// `K_{s,t}` with `a[i]` pendant leaves on the `i`-th vertex of the
/// `s`-side and `b[j]` on the `j`-th vertex of the `t`-side.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ProfileJson")]
pub struct PendantProfile {
    a: Vec<u32>,
    b: Vec<u32>,
}

#[derive(Deserialize)]
struct ProfileJson {
    s: Option<usize>,
    t: Option<usize>,
    a: Vec<u32>,
    b: Vec<u32>,
}

impl TryFrom<ProfileJson> for PendantProfile {
    type Error = crate::Error;

    fn try_from(j: ProfileJson) -> Result<Self> {
        if j.s.is_some_and(|s| s != j.a.len()) || j.t.is_some_and(|t| t != j.b.len()) {
            return invalid("s and t must match the lengths of a and b");
        }
        PendantProfile::new(j.a, j.b)
    }
}

impl PendantProfile {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return invalid("s and t must be at least 1");
        }
        Ok(PendantProfile { a, b })
    }

    pub fn s(&self) -> usize {
        self.a.len()
    }

    pub fn t(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn b(&self) -> &[u32] {
        &self.b
    }

    pub fn a_sum(&self) -> u64 {
        self.a.iter().map(|&x| u64::from(x)).sum()
    }

    pub fn b_sum(&self) -> u64 {
        self.b.iter().map(|&x| u64::from(x)).sum()
    }

    /// Order of [`build_pendant_h`].
    pub fn order(&self) -> u64 {
        (self.s() + self.t()) as u64 + self.a_sum() + self.b_sum()
    }

    /// Leaves on the two centers of [`double_star`].
    pub fn double_star_leaves(&self) -> (u64, u64) {
        (
            self.a_sum() + self.t() as u64 - 1,
            self.b_sum() + self.s() as u64 - 1,
        )
    }
}

fn check_order(n: u64) -> Result<usize> {
    if n > MAX_VERTICES as u64 {
        return Err(crate::Error::TooManyVertices {
            n: n as usize,
            limit: MAX_VERTICES,
        });
    }
    Ok(n as usize)
}

/// Vertices `0..s` form the `s`-side, `s..s+t` the `t`-side, then the
/// leaves in profile order.
pub fn build_pendant_h(p: &PendantProfile) -> Result<Graph> {
    let n = check_order(p.order())?;
    let (s, t) = (p.s(), p.t());
    let mut g = Graph::empty(n)?;
    for i in 0..s {
        for j in 0..t {
            g.add_edge(i, s + j)?;
        }
    }
    let mut next = s + t;
    for (center, &k) in p.a.iter().chain(&p.b).enumerate() {
        for _ in 0..k {
            g.add_edge(center, next)?;
            next += 1;
        }
    }
    Ok(g)
}

/// Two adjacent centers `0` and `1`; center `0` carries `sum(a) + t - 1`
/// leaves and center `1` carries `sum(b) + s - 1`.
pub fn double_star(p: &PendantProfile) -> Result<Graph> {
    let (lv, lu) = p.double_star_leaves();
    let n = check_order(2 + lv + lu)?;
    let mut g = Graph::empty(n)?;
    g.add_edge(0, 1)?;
    for i in 0..lv as usize {
        g.add_edge(0, 2 + i)?;
    }
    for i in 0..lu as usize {
        g.add_edge(1, 2 + lv as usize + i)?;
    }
    Ok(g)
}

fn check_degrees(degrees: &[u64]) -> Result<()> {
    if degrees.contains(&0) {
        return invalid("degrees must be positive");
    }
    Ok(())
}

fn power_sum(degrees: &[u64], k: u64) -> BigCount {
    degrees
        .iter()
        .map(|&d| BigCount::from(d).pow(k as u32))
        .sum()
}

/// Sum over injective maps `j -> y_j` of `prod_j d(y_j)^{e_j}`.
fn injective_sum(degrees: &[u64], exps: &[u32]) -> BigCount {
    fn go(degrees: &[u64], exps: &[u32], used: u64, acc: &BigCount, out: &mut BigCount) {
        let Some((&e, rest)) = exps.split_first() else {
            *out += acc;
            return;
        };
        for (y, &d) in degrees.iter().enumerate() {
            if used & bit(y) == 0 {
                let next = acc * BigCount::from(d).pow(e);
                go(degrees, rest, used | bit(y), &next, out);
            }
        }
    }
    let mut out = BigCount::zero();
    go(degrees, exps, 0, &BigCount::from(1u32), &mut out);
    out
}

/// At most one nonzero exponent: both sides of the Muirhead step coincide
/// for every degree sequence.
fn degenerate(exps: &[u32]) -> bool {
    exps.iter().filter(|&&e| e > 0).count() <= 1
}

/// `sum_sigma prod_i d(x_sigma(i))^{a_i} <= (s-1)! sum_x d(x)^{sum a}` over
/// the degrees of an `s`-set.
pub fn muirhead_check_s(degrees: &[u64], a: &[u32]) -> Result<Verdict> {
    let s = degrees.len();
    if s == 0 || s != a.len() || s > MAX_VERTICES {
        return invalid("need one positive degree per exponent, at most 64");
    }
    check_degrees(degrees)?;
    let total: u64 = a.iter().map(|&x| u64::from(x)).sum();
    let lhs = injective_sum(degrees, a);
    let rhs = factorial(s as u64 - 1) * power_sum(degrees, total);
    Ok(muirhead_verdict(
        "muirhead over the s-set",
        degrees,
        a,
        lhs,
        rhs,
    ))
}

/// `sum over distinct y_1..y_t in X of prod_j d(y_j)^{b_j} <=
/// (|X|-1)!/(|X|-t)! sum_y d(y)^{sum b}`.
pub fn muirhead_check_x(degrees: &[u64], b: &[u32], t: usize) -> Result<Verdict> {
    let x = degrees.len();
    if b.len() != t || t == 0 {
        return invalid("b must have exactly t >= 1 entries");
    }
    if x < t {
        return invalid(format!("|X| = {x} is smaller than t = {t}"));
    }
    if x > MAX_VERTICES {
        return invalid("at most 64 degrees");
    }
    check_degrees(degrees)?;
    let total: u64 = b.iter().map(|&v| u64::from(v)).sum();
    let lhs = injective_sum(degrees, b);
    let rhs = falling_factorial(x as u64 - 1, t as u64 - 1) * power_sum(degrees, total);
    Ok(muirhead_verdict(
        "muirhead over the common neighbourhood",
        degrees,
        b,
        lhs,
        rhs,
    ))
}

fn muirhead_verdict(
    claim: &str,
    degrees: &[u64],
    exps: &[u32],
    lhs: BigCount,
    rhs: BigCount,
) -> Verdict {
    let constant = degrees.windows(2).all(|w| w[0] == w[1]);
    let v = Verdict::new(claim, Relation::AtMost, from_count(&lhs), from_count(&rhs))
        .param("degrees", format!("{degrees:?}"))
        .param("exponents", format!("{exps:?}"));
    if constant {
        v.note("constant degree sequence: equality expected")
    } else if degenerate(exps) {
        v.note("at most one nonzero exponent: equality for every sequence")
    } else {
        v.note("non-constant sequence with spread exponents: strict inequality expected")
    }
}

/// Whether the Muirhead step for `exps` must be strict on `degrees`.
pub fn muirhead_strict_expected(degrees: &[u64], exps: &[u32]) -> bool {
    !degenerate(exps) && degrees.windows(2).any(|w| w[0] != w[1])
}

/// Calls `f(set)` for every `k`-subset of the vertices in `mask`.
fn for_each_subset(mask: u64, k: usize, f: &mut impl FnMut(u64)) {
    fn go(rest: u64, k: usize, chosen: u64, f: &mut impl FnMut(u64)) {
        if k == 0 {
            f(chosen);
            return;
        }
        if (rest.count_ones() as usize) < k {
            return;
        }
        let v = rest.trailing_zeros() as usize;
        let rest = rest & !bit(v);
        go(rest, k - 1, chosen | bit(v), f);
        go(rest, k, chosen, f);
    }
    go(mask, k, 0, f)
}

/// Degree-sum bookkeeping for labeled copies of the double star: over
/// `s`-sets `{x_1..x_s}` with common neighbourhood `X`, each `x` in the set
/// and each `y` in `X`, add `(s-1)! (d(x)-1)_{sum a + t - 1} (d(y)-s)_{sum b}`.
///
/// Equals `labeled_copies(double_star(p), g)` whenever `g` is triangle-free.
pub fn double_star_bookkeeping(g: &Graph, p: &PendantProfile) -> BigCount {
    let (lv, _) = p.double_star_leaves();
    let s = p.s() as u64;
    let b = p.b_sum();
    star_sum(g, p, |dx, dy| {
        falling_factorial(dx - 1, lv) * falling_factorial(dy - s, b)
    })
}

/// The same sum with powers `d(x)^{sum a + t - 1} d(y)^{sum b}`: an upper
/// bound on labeled copies of the pendant graph on every host.
pub fn double_star_power_bound(g: &Graph, p: &PendantProfile) -> BigCount {
    let (lv, _) = p.double_star_leaves();
    let b = p.b_sum();
    star_sum(g, p, |dx, dy| {
        BigCount::from(dx).pow(lv as u32) * BigCount::from(dy).pow(b as u32)
    })
}

fn star_sum(g: &Graph, p: &PendantProfile, term: impl Fn(u64, u64) -> BigCount) -> BigCount {
    let s = p.s();
    let deg: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
    let mut total = BigCount::zero();
    for_each_subset(g.vertex_mask(), s, &mut |set| {
        let common = bits(set).fold(g.vertex_mask(), |m, x| m & g.neighbors(x));
        if common == 0 {
            return;
        }
        for x in bits(set) {
            for y in bits(common) {
                total += term(deg[x], deg[y]);
            }
        }
    });
    total * factorial(s as u64 - 1)
}

/// Best complete bipartite host for `h` on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteBest {
    /// Smallest maximizing size of the first side.
    pub m: u64,
    /// Unlabeled copies of `h` in `K_{m, n-m}`.
    #[serde(serialize_with = "ser_display")]
    pub count: BigCount,
    #[serde(serialize_with = "ser_display")]
    pub labeled: BigCount,
}

/// Exact maximum over `m in 1..n` of copies of `h` in `K_{m, n-m}`.
pub fn best_complete_bipartite(h: &Graph, n: u64) -> Result<BipartiteBest> {
    let poly = copies_in_blowup_poly(
        &WeightedPattern::unit(h.clone()),
        &Graph::complete(2)?,
        Budget::default(),
    )?;
    let best = best_bipartite_split(&poly, n)?;
    let count = divide_by_automorphisms(best.count.clone(), &automorphism_count(h))?;
    Ok(BipartiteBest {
        m: best.sizes[0],
        count,
        labeled: best.count,
    })
}

/// Complete bipartite optima for the pendant graph and its double star,
/// with the exact chain `H*(K) <= power bound(K)` at the optimum for `H`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub profile: PendantProfile,
    pub n: u64,
    pub h: String,
    pub f: String,
    pub h_best: BipartiteBest,
    pub f_best: BipartiteBest,
    pub chain: Verdict,
}

pub fn theorem2_report(p: &PendantProfile, n: u64) -> Result<Theorem2Report> {
    let h = build_pendant_h(p)?;
    let f = double_star(p)?;
    let h_best = best_complete_bipartite(&h, n)?;
    let f_best = best_complete_bipartite(&f, n)?;
    let host = Graph::complete_multipartite(&crate::graph::PartSizes::new(vec![
        h_best.m as usize,
        (n - h_best.m) as usize,
    ])?)?;
    let bound = double_star_power_bound(&host, p);
    let chain = Verdict::new(
        "labeled copies of H are at most the double-star degree sum",
        Relation::AtMost,
        from_count(&h_best.labeled),
        from_count(&bound),
    )
    .param("n", n)
    .param("m", h_best.m);
    Ok(Theorem2Report {
        profile: p.clone(),
        n,
        h: to_graph6(&h),
        f: to_graph6(&f),
        h_best,
        f_best,
        chain,
    })
}
