use super::{oracle_ex, OracleConfig, Relation, Verdict};
use crate::blowup::{copies_in_blowup_poly, maximize_over_parts, WeightedPattern};
use crate::budget::Budget;
use crate::counting::automorphism_count;
use crate::error::{invalid, Result};
use crate::graph::{chromatic_number, diameter, to_graph6, Distance, Graph};
use crate::rational::from_count;
use serde::Serialize;

/// Diameter and chromatic hypotheses of the bounded-diameter conjecture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conjecture2Report {
    pub graph6: String,
    pub r: usize,
    pub diameter: Distance,
    pub diameter_limit: usize,
    pub chromatic_number: usize,
    pub diameter_ok: bool,
    pub chromatic_ok: bool,
    pub hypotheses_hold: bool,
}

/// Reports whether `diam(H) <= 2r - 2` and `chi(H) < r`. A disconnected `H`
/// has infinite diameter and fails the first hypothesis.
pub fn conjecture2_hypotheses(h: &Graph, r: usize) -> Conjecture2Report {
    let diameter = diameter(h);
    let chromatic = chromatic_number(h);
    let limit = (2 * r).saturating_sub(2);
    let diameter_ok = diameter.at_most(limit);
    let chromatic_ok = chromatic < r;
    Conjecture2Report {
        graph6: to_graph6(h),
        r,
        diameter,
        diameter_limit: limit,
        chromatic_number: chromatic,
        diameter_ok,
        chromatic_ok,
        hypotheses_hold: diameter_ok && chromatic_ok,
    }
}

/// Compares `ex(n, H, K_r)` (exhaustive oracle) with the best complete
/// `(r-1)`-partite host on `n` vertices. The multipartite conjecture predicts
/// equality; the verdict holds when the oracle does not exceed the
/// multipartite maximum.
pub fn conjecture1_check(n: usize, h: &Graph, r: usize, config: OracleConfig) -> Result<Verdict> {
    if r < 2 || n < r - 1 {
        return invalid("need r >= 2 and n >= r - 1");
    }
    let kr = Graph::complete(r)?;
    let oracle = oracle_ex(n, h, &kr, config)?;
    let parts = Graph::complete(r - 1)?;
    let poly = copies_in_blowup_poly(&WeightedPattern::unit(h.clone()), &parts, Budget::default())?;
    let best = maximize_over_parts(&poly, n as u64)?;
    let aut = automorphism_count(h);
    let multipartite = &best.count / &aut;
    Ok(Verdict::new(
        "ex(n,H,K_r) <= max over complete (r-1)-partite hosts",
        Relation::AtMost,
        from_count(&oracle.max),
        from_count(&multipartite),
    )
    .param("n", n)
    .param("H", to_graph6(h))
    .param("r", r)
    .note(format!(
        "best part sizes {:?} (exact: {})",
        best.sizes, best.exact
    ))
    .note(format!(
        "oracle extremal graphs: {}",
        oracle.extremal.join(" ")
    )))
}
