use super::{best_bipartite_split, ser_display, Relation, Verdict};
use crate::blowup::{
    aut_count_blowup, copies_in_blowup_poly, BlowupPolynomial, PartMaximum, WeightedPattern,
};
use crate::budget::Budget;
use crate::constructions::{
    constant_condition_holds, counterexample_g, counterexample_h, host_part_sizes,
    multipartite_upper_bound, CounterexampleParams,
};
use crate::counting::falling_factorial;
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::par;
use crate::rational::{format_rational, from_count, Rational};
use crate::BigCount;
use num_traits::Pow;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Theorem1Options {
    /// For `r = 3`, also maximize labeled copies over all `K_{m, n-m}`.
    pub exact_bipartite: bool,
    pub budget: Budget,
}

impl Default for Theorem1Options {
    fn default() -> Self {
        Theorem1Options {
            exact_bipartite: true,
            budget: Budget::default(),
        }
    }
}

/// Everything needed to check the counterexample at any `n`: the copy
/// polynomial of `H` over the host pattern does not depend on `n`.
#[derive(Clone, Debug)]
pub struct Theorem1Instance {
    r: usize,
    epsilon: Rational,
    a: u32,
    h: WeightedPattern,
    host: BlowupPolynomial,
    bipartite: Option<BlowupPolynomial>,
    aut_h: BigCount,
}

/// Exact comparison at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub r: usize,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: Rational,
    pub a: u32,
    pub n: u64,
    /// `floor(eps n)` and the size of the large part.
    pub part_sizes: (u64, u64),
    /// Labeled copies of `H` in `G`.
    #[serde(serialize_with = "ser_display")]
    pub labeled: BigCount,
    /// `2 floor(eps n)^{2r-2} (big)_{2a}`: copies using only the two
    /// homomorphisms that send every terminal copy into the large part.
    #[serde(serialize_with = "ser_display")]
    pub main_term: BigCount,
    /// `n^{2r-2} (n/2)^{2a}`.
    #[serde(serialize_with = "ser_rational")]
    pub bound: Rational,
    #[serde(serialize_with = "ser_display")]
    pub aut_h: BigCount,
    /// `|Aut(H)| n^{2r-2} (n/2)^{2a}`.
    #[serde(serialize_with = "ser_rational")]
    pub aut_scaled_bound: Rational,
    pub exceeds_bound: bool,
    pub exceeds_aut_scaled_bound: bool,
    pub bipartite_max: Option<PartMaximum>,
    pub exceeds_bipartite_max: Option<bool>,
}

fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

impl Theorem1Report {
    /// Labeled copies in `G` beat the bound for every complete
    /// `(r-1)`-partite host, and the exact bipartite maximum when computed.
    pub fn outcome(&self) -> bool {
        self.exceeds_bound && self.exceeds_bipartite_max != Some(false)
    }

    pub fn verdict(&self) -> Verdict {
        let mut v = Verdict::new(
            "labeled copies of H in G exceed n^{2r-2} (n/2)^{2a}",
            Relation::Greater,
            from_count(&self.labeled),
            self.bound.clone(),
        )
        .param("r", self.r)
        .param("eps", format_rational(&self.epsilon))
        .param("a", self.a)
        .param("n", self.n)
        .note(format!(
            "host parts: {} x {} and one part of {}",
            2 * self.r - 2,
            self.part_sizes.0,
            self.part_sizes.1
        ))
        .note(format!(
            "main term 2 floor(eps n)^(2r-2) (big)_(2a) = {}",
            self.main_term
        ))
        .note(format!("|Aut(H)| = {}", self.aut_h))
        .note(format!(
            "|Aut(H)| n^(2r-2) (n/2)^(2a) = {}; exceeded: {}",
            format_rational(&self.aut_scaled_bound),
            self.exceeds_aut_scaled_bound
        ));
        if let (Some(best), Some(ok)) = (&self.bipartite_max, self.exceeds_bipartite_max) {
            v = v.note(format!(
                "max over K_(m,n-m): {} at sizes {:?}; exceeded: {ok}",
                best.count, best.sizes
            ));
            v.outcome &= ok;
        }
        v
    }
}

impl Theorem1Instance {
    pub fn new(r: usize, epsilon: Rational, a: u32, opts: Theorem1Options) -> Result<Self> {
        if r < 3 {
            return invalid("r must be at least 3");
        }
        if !constant_condition_holds(r, &epsilon, a) {
            return invalid(format!(
                "constant condition fails for r = {r}, eps = {}, a = {a}",
                format_rational(&epsilon)
            ));
        }
        let h = counterexample_h(r, a)?;
        let host_pattern = Graph::cycle(2 * r - 1)?.power(r - 2);
        let host = copies_in_blowup_poly(&h, &host_pattern, opts.budget)?;
        let bipartite = if r == 3 && opts.exact_bipartite {
            Some(copies_in_blowup_poly(
                &h,
                &Graph::complete(2)?,
                opts.budget,
            )?)
        } else {
            None
        };
        let aut_h = aut_count_blowup(&h)?;
        Ok(Theorem1Instance {
            r,
            epsilon,
            a,
            h,
            host,
            bipartite,
            aut_h,
        })
    }

    pub fn from_params(params: &CounterexampleParams, opts: Theorem1Options) -> Result<Self> {
        Self::new(params.r, params.epsilon.clone(), params.a, opts)
    }

    pub fn pattern(&self) -> &WeightedPattern {
        &self.h
    }

    pub fn host_polynomial(&self) -> &BlowupPolynomial {
        &self.host
    }

    pub fn aut_h(&self) -> &BigCount {
        &self.aut_h
    }

    /// Smallest `n` at which `G` is well defined: `floor(eps n) >= 1` and the
    /// large part is nonempty.
    pub fn min_n(&self) -> u64 {
        (1..)
            .find(|&n| host_part_sizes(self.r, &self.epsilon, n).is_ok())
            .expect("some n is admissible")
    }

    pub fn report(&self, n: u64) -> Result<Theorem1Report> {
        self.report_with(n, true)
    }

    /// As [`Self::report`], skipping the bipartite scan when `bipartite` is
    /// false.
    pub fn report_with(&self, n: u64, bipartite: bool) -> Result<Theorem1Report> {
        let g = counterexample_g(self.r, &self.epsilon, n)?;
        let (small, big) = host_part_sizes(self.r, &self.epsilon, n)?;
        let sizes: Vec<u64> = g.weights().iter().map(|&w| u64::from(w)).collect();
        let labeled = self.host.evaluate(&sizes)?;
        let main_term = BigCount::from(2u32)
            * BigCount::from(small).pow((2 * self.r - 2) as u32)
            * falling_factorial(big, 2 * u64::from(self.a));
        let bound = multipartite_upper_bound(self.r, self.a, n);
        let aut_scaled_bound = from_count(&self.aut_h) * &bound;
        let l = from_count(&labeled);
        let exceeds_bound = l > bound;
        let exceeds_aut_scaled_bound = l > aut_scaled_bound;
        let bipartite_max = match &self.bipartite {
            Some(p) if bipartite => Some(best_bipartite_split(p, n)?),
            _ => None,
        };
        let exceeds_bipartite_max = bipartite_max.as_ref().map(|b| labeled > b.count);
        Ok(Theorem1Report {
            r: self.r,
            epsilon: self.epsilon.clone(),
            a: self.a,
            n,
            part_sizes: (small, big),
            labeled,
            main_term,
            bound,
            aut_h: self.aut_h.clone(),
            aut_scaled_bound,
            exceeds_bound,
            exceeds_aut_scaled_bound,
            bipartite_max,
            exceeds_bipartite_max,
        })
    }
}

/// Verifies the counterexample at the given parameters.
pub fn verify_theorem1(
    params: &CounterexampleParams,
    opts: Theorem1Options,
) -> Result<Theorem1Report> {
    Theorem1Instance::from_params(params, opts)?.report(params.n)
}

/// Scans `n` upward over multiples of the denominator of `eps` (where
/// `floor(eps n)` is exact) and returns the first report accepted by
/// `accept`, or `None` once `max_n` is passed. `accept` first sees a report
/// without the bipartite maximum and, if it passes, the full report.
/// Candidates are evaluated in parallel batches; the result is the smallest
/// accepted `n` either way.
pub fn find_threshold<F>(
    instance: &Theorem1Instance,
    max_n: u64,
    accept: F,
) -> Result<Option<Theorem1Report>>
where
    F: Fn(&Theorem1Report) -> bool + Sync + Send,
{
    let q: u64 = instance
        .epsilon
        .denom()
        .try_into()
        .map_err(|_| crate::Error::InvalidArgument("eps denominator too large".into()))?;
    let start = instance.min_n().div_ceil(q) * q;
    let batch = 4 * batch_width();
    let mut n = start;
    while n <= max_n {
        let candidates: Vec<u64> = (0..batch as u64)
            .map(|i| n + i * q)
            .take_while(|&m| m <= max_n)
            .collect();
        let Some(&last) = candidates.last() else {
            break;
        };
        let found = par::map_collect(candidates, |m| -> Result<Option<Theorem1Report>> {
            let quick = instance.report_with(m, false)?;
            if !accept(&quick) {
                return Ok(None);
            }
            let full = instance.report(m)?;
            Ok(accept(&full).then_some(full))
        });
        for rep in found {
            if let Some(rep) = rep? {
                return Ok(Some(rep));
            }
        }
        n = last + q;
    }
    Ok(None)
}

fn batch_width() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::labeled_copies;
    use num_bigint::BigInt;
    use num_traits::One;

    fn eps(q: u64) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(q))
    }

    fn opts() -> Theorem1Options {
        Theorem1Options {
            exact_bipartite: true,
            budget: Budget::unlimited(),
        }
    }

    #[test]
    fn small_instance_matches_explicit_count() {
        // a = 2 breaks the constant condition, so build the pieces directly.
        let h = counterexample_h(3, 2).unwrap();
        let g = counterexample_g(3, &eps(16), 32).unwrap();
        let poly = copies_in_blowup_poly(&h, g.pattern(), Budget::unlimited()).unwrap();
        let sizes: Vec<u64> = g.weights().iter().map(|&w| u64::from(w)).collect();
        assert_eq!(sizes, vec![24, 2, 2, 2, 2]);
        assert_eq!(
            poly.evaluate(&sizes).unwrap(),
            labeled_copies(&h.explicit().unwrap(), &g.explicit().unwrap())
        );
    }

    #[test]
    fn rejects_small_a() {
        assert!(Theorem1Instance::new(3, eps(16), 12, opts()).is_err());
        assert!(CounterexampleParams::new(3, eps(16), 12, 1600).is_err());
    }

    #[test]
    fn main_term_is_a_lower_bound() {
        let inst = Theorem1Instance::new(3, eps(16), 13, opts()).unwrap();
        for n in [160, 480, 1600] {
            let rep = inst.report(n).unwrap();
            assert!(rep.labeled >= rep.main_term);
            let best = rep.bipartite_max.as_ref().unwrap();
            // The closed form bounds every bipartite host.
            assert!(from_count(&best.count) <= rep.bound);
        }
    }

    #[test]
    fn aut_of_h() {
        let inst = Theorem1Instance::new(3, eps(16), 13, opts()).unwrap();
        let f13: BigCount = (1..=13u32).map(BigCount::from).product();
        assert_eq!(inst.aut_h(), &(BigCount::from(2u32) * &f13 * &f13));
    }
}
