//! End-to-end checks: verdicts for the counterexample family, the
//! pendant-edge reduction, hypothesis reports and the small-`n` oracle.

mod conjecture;
mod oracle;
mod pendant;
mod theorem1;

pub use conjecture::{conjecture1_check, conjecture2_hypotheses, Conjecture2Report};
pub use oracle::{canonical_form, oracle_ex, OracleConfig, OracleResult};
pub use pendant::{
    best_complete_bipartite, build_pendant_h, double_star, double_star_bookkeeping,
    double_star_power_bound, muirhead_check_s, muirhead_check_x, muirhead_strict_expected,
    theorem2_report, BipartiteBest, PendantProfile, Theorem2Report,
};
pub use theorem1::{
    find_threshold, verify_theorem1, Theorem1Instance, Theorem1Options, Theorem1Report,
};

use crate::blowup::{BlowupPolynomial, PartMaximum};
use crate::error::{invalid, Result};
use crate::par;
use crate::rational::{format_rational, Rational};
use crate::BigCount;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt::Display;

pub(crate) fn ser_display<T: Display, S: Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_rational<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

/// Which inequality a [`Verdict`] asserts between `lhs` and `rhs`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Greater,
    AtMost,
    Equal,
}

/// Outcome of checking one exact inequality or identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub claim: String,
    pub params: BTreeMap<String, String>,
    #[serde(serialize_with = "ser_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub rhs: Rational,
    pub outcome: bool,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(claim: impl Into<String>, relation: Relation, lhs: Rational, rhs: Rational) -> Self {
        let outcome = match relation {
            Relation::Greater => lhs > rhs,
            Relation::AtMost => lhs <= rhs,
            Relation::Equal => lhs == rhs,
        };
        Verdict {
            claim: claim.into(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            outcome,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    /// Whether both sides are equal, regardless of the claimed relation.
    pub fn is_tight(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// First `m` in `1..n` maximizing `p(m, n - m)`.
pub(crate) fn best_bipartite_split(p: &BlowupPolynomial, n: u64) -> Result<PartMaximum> {
    if n < 2 {
        return invalid("need n >= 2 for a bipartite split");
    }
    let values = par::map_collect((1..n).collect(), |m| p.evaluate(&[m, n - m]));
    let mut best: Option<(u64, BigCount)> = None;
    for (m, v) in (1..n).zip(values) {
        let v = v?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((m, v));
        }
    }
    let (m, count) = best.expect("n >= 2");
    Ok(PartMaximum {
        sizes: vec![m, n - m],
        count,
        exact: true,
    })
}
