//! Explicit graphs of the multipartite counterexample and the ten-vertex
//! path family.
//!
//! For `r >= 3` the pattern graph `H` is the `(r-2)`-th power of `P_{2r}` with
//! both endpoints (the only vertices of degree `r-2`) blown up into `a`
//! twins. The host `G` blows up the `(r-2)`-th power of `C_{2r-1}`: every
//! vertex gets `floor(eps n)` twins except vertex 0, which takes the rest.

use crate::blowup::WeightedPattern;
use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::rational::{floor_u64, format_rational, from_u64, Rational};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

/// `r`, `eps`, `a` and `n` for one instance of the counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterexampleParams {
    pub r: usize,
    pub epsilon: Rational,
    pub a: u32,
    pub n: u64,
}

impl CounterexampleParams {
    /// Checks `r >= 3`, `0 < eps < 1/(4r)`, the constant condition for `a`,
    /// and that both part sizes of the host are positive.
    pub fn new(r: usize, epsilon: Rational, a: u32, n: u64) -> Result<Self> {
        check_epsilon(r, &epsilon)?;
        if a == 0 {
            return invalid("a must be positive");
        }
        if !constant_condition_holds(r, &epsilon, a) {
            return invalid(format!(
                "2 eps^{} (1 - {} eps)^{} > 2^-{} fails for eps = {}, a = {a}",
                2 * r - 2,
                2 * r - 2,
                2 * a,
                2 * a,
                format_rational(&epsilon)
            ));
        }
        host_part_sizes(r, &epsilon, n)?;
        Ok(CounterexampleParams { r, epsilon, a, n })
    }

    pub fn with_n(&self, n: u64) -> Result<Self> {
        host_part_sizes(self.r, &self.epsilon, n)?;
        Ok(CounterexampleParams { n, ..self.clone() })
    }
}

fn check_epsilon(r: usize, eps: &Rational) -> Result<()> {
    if r < 3 {
        return invalid("r must be at least 3");
    }
    let limit = Rational::new(BigInt::one(), BigInt::from(4 * r));
    if *eps <= Rational::zero() || *eps >= limit {
        return invalid(format!(
            "eps = {} must lie strictly between 0 and 1/{}",
            format_rational(eps),
            4 * r
        ));
    }
    Ok(())
}

/// `2 eps^{2r-2} (1 - (2r-2) eps)^{2a} > 2^{-2a}`, decided exactly.
pub fn constant_condition_holds(r: usize, eps: &Rational, a: u32) -> bool {
    let k = (2 * r - 2) as u32;
    let two = from_u64(2);
    let lhs =
        &two * Pow::pow(eps, k) * Pow::pow(Rational::one() - from_u64(u64::from(k)) * eps, 2 * a);
    let rhs = Rational::one() / Pow::pow(two, 2 * a);
    lhs > rhs
}

/// Smallest `a >= 1` satisfying the constant condition.
pub fn choose_a(r: usize, eps: &Rational) -> Result<u32> {
    check_epsilon(r, eps)?;
    // 2(1 - (2r-2)eps) > 1 whenever eps < 1/(4r), so the loop terminates.
    Ok((1..)
        .find(|&a| constant_condition_holds(r, eps, a))
        .expect("condition holds for large a"))
}

/// `(floor(eps n), n - (2r-2) floor(eps n))`, both required positive.
pub fn host_part_sizes(r: usize, eps: &Rational, n: u64) -> Result<(u64, u64)> {
    let small = floor_u64(&(eps * from_u64(n)))
        .ok_or_else(|| Error::InvalidArgument("eps n out of range".into()))?;
    let used = (2 * r as u64 - 2) * small;
    if small == 0 || used >= n {
        return invalid(format!(
            "degenerate host sizes for n = {n}: floor(eps n) = {small}"
        ));
    }
    Ok((small, n - used))
}

/// The weighted pattern `H` for given `r` and `a`.
pub fn counterexample_h(r: usize, a: u32) -> Result<WeightedPattern> {
    if r < 3 || a == 0 {
        return invalid("need r >= 3 and a >= 1");
    }
    let pattern = Graph::path(2 * r)?.power(r - 2);
    let low: Vec<usize> = (0..pattern.order())
        .filter(|&v| pattern.degree(v) == r - 2)
        .collect();
    if low != [0, 2 * r - 1] {
        return Err(Error::Internal(format!(
            "expected exactly the two path endpoints to have degree {}, found {low:?}",
            r - 2
        )));
    }
    let mut weights = vec![1; 2 * r];
    weights[0] = a;
    weights[2 * r - 1] = a;
    WeightedPattern::new(pattern, weights)
}

/// The weighted host `G` on `n` vertices; the large part sits on pattern vertex 0.
pub fn counterexample_g(r: usize, eps: &Rational, n: u64) -> Result<WeightedPattern> {
    check_epsilon(r, eps)?;
    let (small, big) = host_part_sizes(r, eps, n)?;
    let pattern = Graph::cycle(2 * r - 1)?.power(r - 2);
    let to_u32 = |x: u64| {
        u32::try_from(x).map_err(|_| Error::InvalidArgument(format!("part size {x} too large")))
    };
    let mut weights = vec![to_u32(small)?; 2 * r - 1];
    weights[0] = to_u32(big)?;
    WeightedPattern::new(pattern, weights)
}

/// `n^{2r-2} (n/2)^{2a}`, the bound on copies of `H` in any complete
/// `(r-1)`-partite graph on `n` vertices. Kept rational for odd `n`.
pub fn multipartite_upper_bound(r: usize, a: u32, n: u64) -> Rational {
    let nn = from_u64(n);
    Pow::pow(nn.clone(), (2 * r - 2) as u32) * Pow::pow(nn / from_u64(2), 2 * a)
}

/// Sizes of the pendant sets in the ten-vertex path family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fig4Profile {
    pub a2: u32,
    pub a9: u32,
    pub b1: u32,
    pub b4: u32,
    pub b7: u32,
    pub b10: u32,
}

impl Fig4Profile {
    /// Sizes in the order `A2, A9, B1, B4, B7, B10`.
    pub fn from_slice(s: &[u32]) -> Result<Self> {
        match *s {
            [a2, a9, b1, b4, b7, b10] => {
                let p = Fig4Profile {
                    a2,
                    a9,
                    b1,
                    b4,
                    b7,
                    b10,
                };
                if p.sizes().contains(&0) {
                    return invalid("pendant set sizes must be positive");
                }
                Ok(p)
            }
            _ => invalid("expected six sizes: A2, A9, B1, B4, B7, B10"),
        }
    }

    pub fn uniform(size: u32) -> Self {
        Fig4Profile {
            a2: size,
            a9: size,
            b1: size,
            b4: size,
            b7: size,
            b10: size,
        }
    }

    fn sizes(&self) -> [u32; 6] {
        [self.a2, self.a9, self.b1, self.b4, self.b7, self.b10]
    }

    /// Path vertex (0-based) each pendant set hangs from, same order as `sizes`.
    const ANCHORS: [usize; 6] = [1, 8, 0, 3, 6, 9];

    /// Path `0..10` plus one representative per pendant set, weighted by
    /// the set size.
    pub fn pattern(&self) -> WeightedPattern {
        let mut g = Graph::path(10).expect("10 vertices");
        let mut grown = Graph::empty(16).expect("16 vertices");
        for (u, v) in g.edges() {
            grown.add_edge(u, v).unwrap();
        }
        for (i, &anchor) in Self::ANCHORS.iter().enumerate() {
            grown.add_edge(anchor, 10 + i).unwrap();
        }
        g = grown;
        let mut weights = vec![1; 10];
        weights.extend(self.sizes());
        WeightedPattern::new(g, weights).expect("positive sizes")
    }
}

/// The explicit tree: path `v1..v10` with independent pendant sets on
/// `v2, v9` (the A sets) and `v1, v4, v7, v10` (the B sets).
pub fn fig4_h(profile: &Fig4Profile) -> Result<Graph> {
    let total = 10 + profile.sizes().iter().map(|&s| s as usize).sum::<usize>();
    let mut g = Graph::empty(total)?;
    for v in 1..10 {
        g.add_edge(v - 1, v)?;
    }
    let mut next = 10;
    for (anchor, size) in Fig4Profile::ANCHORS.iter().zip(profile.sizes()) {
        for _ in 0..size {
            g.add_edge(*anchor, next)?;
            next += 1;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{
        chromatic_number, clique_number, diameter, is_bipartite, proper_colorings, Distance,
    };
    use crate::rational::parse_rational;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn h_for_r3() {
        let h = counterexample_h(3, 2).unwrap();
        assert_eq!(h.pattern(), &Graph::path(6).unwrap());
        assert_eq!(h.weights(), &[2, 1, 1, 1, 1, 2]);
        let x = h.explicit().unwrap();
        assert_eq!(x.order(), 8);
        assert_eq!(chromatic_number(&x), 2);
    }

    #[test]
    fn h_with_a1_is_plain_power() {
        let h = counterexample_h(4, 1).unwrap();
        assert_eq!(h.explicit().unwrap(), Graph::path(8).unwrap().power(2));
    }

    #[test]
    fn terminal_twins_get_distinct_colours() {
        for r in 3..=5 {
            let h = counterexample_h(r, 1).unwrap();
            let cols = proper_colorings(h.pattern(), r - 1);
            assert!(!cols.is_empty());
            assert!(cols.iter().all(|c| c[0] != c[2 * r - 1]), "r = {r}");
            // Unique up to renaming the r-1 colours.
            let names: usize = (1..r).product();
            assert_eq!(cols.len(), names, "r = {r}");
        }
    }

    #[test]
    fn r3_broom_diameter_is_five() {
        for a in 1..=4 {
            let x = counterexample_h(3, a).unwrap().explicit().unwrap();
            assert!(is_bipartite(&x));
            assert_eq!(diameter(&x), Distance::Finite(5));
        }
    }

    #[test]
    fn g_weights() {
        let g = counterexample_g(3, &q("1/16"), 160).unwrap();
        assert_eq!(g.pattern(), &Graph::cycle(5).unwrap());
        assert_eq!(g.weights(), &[120, 10, 10, 10, 10]);
        let g4 = counterexample_g(4, &q("1/20"), 200).unwrap();
        assert_eq!(g4.pattern(), &Graph::cycle(7).unwrap().power(2));
        assert_eq!(g4.weights(), &[140, 10, 10, 10, 10, 10, 10]);
        assert_eq!(g4.total_weight(), 200);
        assert!(counterexample_g(3, &q("1/16"), 15).is_err());
        assert!(counterexample_g(3, &q("1/12"), 100).is_err());
    }

    #[test]
    fn g_patterns_are_kr_free_but_contain_kr_minus_1() {
        for r in 3..=5 {
            let g = counterexample_g(r, &Rational::new(1.into(), (8 * r).into()), 1000).unwrap();
            assert_eq!(clique_number(g.pattern()), r - 1, "r = {r}");
        }
    }

    #[test]
    fn choose_a_values() {
        assert_eq!(choose_a(3, &q("1/16")).unwrap(), 13);
        assert!(!constant_condition_holds(3, &q("1/16"), 12));
        assert!(constant_condition_holds(3, &q("1/16"), 13));
        let a = choose_a(3, &q("1/13")).unwrap();
        assert!(constant_condition_holds(3, &q("1/13"), a));
        assert!(!constant_condition_holds(3, &q("1/13"), a - 1));
        assert!(choose_a(3, &q("1/12")).is_err());
        assert!(choose_a(2, &q("1/100")).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(CounterexampleParams::new(3, q("1/16"), 13, 160).is_ok());
        assert!(CounterexampleParams::new(3, q("1/16"), 12, 160).is_err());
        assert!(CounterexampleParams::new(3, q("1/16"), 13, 8).is_err());
    }

    #[test]
    fn upper_bound_arithmetic() {
        assert_eq!(multipartite_upper_bound(3, 1, 4), from_u64(1024));
        let ratio = multipartite_upper_bound(3, 2, 14) / multipartite_upper_bound(3, 2, 7);
        assert_eq!(ratio, from_u64(1 << 8));
        assert_eq!(format_rational(&multipartite_upper_bound(3, 1, 3)), "729/4");
    }

    #[test]
    fn fig4_tree() {
        let g = fig4_h(&Fig4Profile::uniform(1)).unwrap();
        assert_eq!((g.order(), g.size()), (16, 15));
        assert!(is_bipartite(&g));
        assert_eq!(diameter(&g), Distance::Finite(11));
        let p = Fig4Profile::from_slice(&[2, 2, 3, 3, 3, 3]).unwrap();
        assert!(is_bipartite(&fig4_h(&p).unwrap()));
        assert!(p.pattern().is_reduced());
        assert_eq!(p.pattern().total_weight(), 26);
        assert!(Fig4Profile::from_slice(&[1, 1, 1]).is_err());
        assert!(fig4_h(&Fig4Profile::uniform(10)).is_err());
    }

    #[test]
    fn fig4_pattern_blows_up_to_tree() {
        let p = Fig4Profile::from_slice(&[2, 1, 1, 2, 1, 3]).unwrap();
        let a = crate::counting::automorphism_count(&p.pattern().explicit().unwrap());
        let b = crate::counting::automorphism_count(&fig4_h(&p).unwrap());
        assert_eq!(a, b);
        assert_eq!(
            p.pattern().explicit().unwrap().size(),
            fig4_h(&p).unwrap().size()
        );
    }
}
