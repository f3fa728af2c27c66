//! Continuous relaxation of blow-up copy counts.
//!
//! For part fractions `x` on the simplex, copies of `H` in `blowup(F, x n)`
//! grow like `f(x) n^{v(H)}`, where `f` is a homogeneous polynomial of degree
//! `v(H)`. Terms are stored as a monomial times powers of linear forms
//! `(sum_{u in S} x_u)^w`, which keeps heavy pendant sets from exploding the
//! term count.
//!
//! Floating point lives only here; anything that feeds an exact verdict is
//! re-checked with integer arithmetic by the caller.

use crate::blowup::{copies_in_blowup_poly, BlowupPolynomial, FiberPlan, WeightedPattern};
use crate::budget::{Budget, Meter};
use crate::error::{Error, Result};
use crate::graph::{bits, clique_number, to_graph6, Graph};
use crate::par;
use crate::BigCount;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::HashMap;

/// Stopping tolerance on the projected log-gradient step.
pub const TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 20_000;
pub const DEFAULT_RESTARTS: usize = 50;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityTerm {
    pub coeff: f64,
    pub exponents: Vec<u32>,
    /// `(vertex mask S, power w)` meaning `(sum_{u in S} x_u)^w`.
    pub factors: Vec<(u64, u32)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityForm {
    order: usize,
    terms: Vec<DensityTerm>,
}

impl DensityForm {
    /// Leading-order form of an exact copy polynomial.
    pub fn from_polynomial(p: &BlowupPolynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| DensityTerm {
                coeff: c.to_f64().unwrap_or(f64::INFINITY),
                exponents: m.to_vec(),
                factors: Vec::new(),
            })
            .collect();
        DensityForm {
            order: p.order(),
            terms,
        }
    }

    pub fn from_terms(order: usize, terms: Vec<DensityTerm>) -> Result<Self> {
        for t in &terms {
            if t.exponents.len() != order
                || t.factors
                    .iter()
                    .any(|&(m, _)| order < 64 && m >> order != 0)
            {
                return Err(Error::InvalidArgument(
                    "term does not match form order".into(),
                ));
            }
        }
        Ok(DensityForm { order, terms })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[DensityTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    /// Total degree of the first term (all terms share it for forms built
    /// from a single pattern).
    pub fn degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| {
            t.exponents.iter().sum::<u32>() + t.factors.iter().map(|f| f.1).sum::<u32>()
        })
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| term_value(t, x)).sum()
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.order];
        for t in &self.terms {
            add_term_gradient(t, x, &mut g);
        }
        g
    }
}

fn linear(mask: u64, x: &[f64]) -> f64 {
    bits(mask).map(|u| x[u]).sum()
}

fn term_value(t: &DensityTerm, x: &[f64]) -> f64 {
    let mono: f64 = t
        .exponents
        .iter()
        .zip(x)
        .filter(|(&e, _)| e > 0)
        .map(|(&e, &xi)| xi.powi(e as i32))
        .product();
    let facs: f64 = t
        .factors
        .iter()
        .map(|&(m, w)| linear(m, x).powi(w as i32))
        .product();
    t.coeff * mono * facs
}

fn add_term_gradient(t: &DensityTerm, x: &[f64], g: &mut [f64]) {
    let n = x.len();
    let lin: Vec<f64> = t.factors.iter().map(|&(m, _)| linear(m, x)).collect();
    let powers: Vec<f64> = t
        .factors
        .iter()
        .zip(&lin)
        .map(|(&(_, w), &l)| l.powi(w as i32))
        .collect();
    let facs: f64 = powers.iter().product();
    let mono_parts: Vec<f64> = (0..n).map(|u| x[u].powi(t.exponents[u] as i32)).collect();
    let mono: f64 = mono_parts.iter().product();

    // d/dx_v of the monomial, without dividing by a possibly zero x_v.
    for v in 0..n {
        let e = t.exponents[v];
        if e == 0 {
            continue;
        }
        let rest: f64 = (0..n).filter(|&u| u != v).map(|u| mono_parts[u]).product();
        let d = f64::from(e) * x[v].powi(e as i32 - 1) * rest;
        g[v] += t.coeff * d * facs;
    }
    // Product rule over the linear-form powers.
    for (k, &(mask, w)) in t.factors.iter().enumerate() {
        let others: f64 = powers
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| p)
            .product();
        let d = f64::from(w) * lin[k].powi(w as i32 - 1) * others * mono * t.coeff;
        for u in bits(mask) {
            g[u] += d;
        }
    }
}

/// Leading-order density of `h` over blow-ups of `host`.
pub fn density_form(h: &WeightedPattern, host: &Graph, budget: Budget) -> Result<DensityForm> {
    let plan = FiberPlan::new(h, host);
    let meter = Meter::new(budget);
    type Key = (Vec<u32>, Vec<(u64, u32)>);
    let acc = plan.fold(
        &meter,
        HashMap::<Key, BigCount>::new,
        |acc, rec| {
            let mut factors: Vec<(u64, u32)> = Vec::with_capacity(rec.deferred.len());
            let mut exps = rec.fiber.to_vec();
            for &(mask, w) in rec.deferred {
                if mask.count_ones() == 1 {
                    exps[mask.trailing_zeros() as usize] += w;
                } else {
                    factors.push((mask, w));
                }
            }
            factors.sort_unstable();
            *acc.entry((exps, factors)).or_default() += rec.coeff;
            Ok(())
        },
        |total, part| {
            for (k, c) in part {
                *total.entry(k).or_default() += c;
            }
        },
    )?;
    let mut keyed: Vec<(Key, BigCount)> = acc.into_iter().collect();
    keyed.sort();
    let terms = keyed
        .into_iter()
        .map(|((exponents, factors), c)| DensityTerm {
            coeff: c.to_f64().unwrap_or(f64::INFINITY),
            exponents,
            factors,
        })
        .collect();
    Ok(DensityForm {
        order: host.order(),
        terms,
    })
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut css = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        css += uj;
        let t = (css - 1.0) / (j as f64 + 1.0);
        if uj - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&vi| (vi - theta).max(0.0)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityMax {
    pub weights: Vec<f64>,
    pub value: f64,
    pub restarts: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Multistart projected gradient ascent of `f` on the simplex.
///
/// Restart 0 starts at the barycentre, the others at uniformly random
/// simplex points drawn from a ChaCha stream derived from `seed`. Each run
/// ascends `log f` with Armijo backtracking until the projected step is below
/// [`TOLERANCE`]. The best run wins; ties go to the lower restart index.
pub fn maximize_density(f: &DensityForm, restarts: usize, seed: u64) -> DensityMax {
    let k = f.order();
    if f.is_zero() || k == 0 {
        return DensityMax {
            weights: vec![1.0 / k.max(1) as f64; k],
            value: 0.0,
            restarts,
            seed,
            note: Some("no homomorphism: the form is identically zero".into()),
        };
    }
    let runs = par::map_collect((0..restarts.max(1)).collect(), |i| {
        let start = if i == 0 {
            vec![1.0 / k as f64; k]
        } else {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let e: Vec<f64> = (0..k).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
            let s: f64 = e.iter().sum();
            e.into_iter().map(|v| v / s).collect()
        };
        ascend(f, start)
    });
    let (weights, value) = runs
        .into_iter()
        .fold(None::<(Vec<f64>, f64)>, |best, (x, v)| match best {
            Some((bx, bv)) if bv >= v => Some((bx, bv)),
            _ => Some((x, v)),
        })
        .expect("at least one restart");
    DensityMax {
        weights,
        value,
        restarts,
        seed,
        note: None,
    }
}

fn ascend(f: &DensityForm, mut x: Vec<f64>) -> (Vec<f64>, f64) {
    let mut fx = f.value(&x);
    if fx <= 0.0 {
        return (x, fx.max(0.0));
    }
    let mut step = 1.0;
    for _ in 0..MAX_ITERATIONS {
        let g: Vec<f64> = f.gradient(&x).into_iter().map(|d| d / fx).collect();
        let probe: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + b).collect();
        let residual = project_to_simplex(&probe)
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if residual < TOLERANCE {
            break;
        }
        let log_fx = fx.ln();
        let mut accepted = None;
        while step > 1e-20 {
            let trial: Vec<f64> = project_to_simplex(
                &x.iter()
                    .zip(&g)
                    .map(|(a, b)| a + step * b)
                    .collect::<Vec<_>>(),
            );
            let ft = f.value(&trial);
            let gain: f64 = g
                .iter()
                .zip(trial.iter().zip(&x))
                .map(|(gi, (t, xi))| gi * (t - xi))
                .sum();
            if ft > 0.0 && ft.ln() >= log_fx + 1e-4 * gain && trial != x {
                accepted = Some((trial, ft));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((t, ft)) => {
                x = t;
                fx = ft;
                step = (step * 2.0).min(1e6);
            }
            None => break,
        }
    }
    (x, fx)
}

/// One row of a catalog search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub graph6: String,
    pub value: f64,
    pub weights: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogReport {
    pub r: usize,
    /// Sorted by decreasing value.
    pub entries: Vec<CatalogEntry>,
}

impl CatalogReport {
    pub fn winner(&self) -> Option<&CatalogEntry> {
        self.entries.first()
    }

    pub fn value_of(&self, name: &str) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.name == name)
            .map(|e| e.value)
    }
}

/// `K_2`, `C_5`, `C_7` and the Petersen graph.
pub fn default_catalog() -> Vec<(String, Graph)> {
    vec![
        ("K2".into(), Graph::complete(2).unwrap()),
        ("C5".into(), Graph::cycle(5).unwrap()),
        ("C7".into(), Graph::cycle(7).unwrap()),
        ("Petersen".into(), Graph::petersen()),
    ]
}

#[derive(Clone, Copy, Debug)]
pub struct CatalogOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Part total used to break near-ties by exact integer counts.
    pub tie_break_n: u64,
    pub budget: Budget,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            tie_break_n: 100,
            budget: Budget::default(),
        }
    }
}

/// Maximizes the density of `h` over each `K_r`-free catalog pattern and
/// ranks the patterns by the value reached.
pub fn pattern_catalog_search(
    h: &WeightedPattern,
    r: usize,
    catalog: &[(String, Graph)],
    opts: CatalogOptions,
) -> Result<CatalogReport> {
    for (name, g) in catalog {
        if clique_number(g) >= r {
            return Err(Error::NotCliqueFree {
                name: name.clone(),
                r,
            });
        }
    }
    let mut entries = Vec::with_capacity(catalog.len());
    for (name, g) in catalog {
        let form = density_form(h, g, opts.budget)?;
        let best = maximize_density(&form, opts.restarts, opts.seed);
        entries.push(CatalogEntry {
            name: name.clone(),
            graph6: to_graph6(g),
            value: best.value,
            weights: best.weights,
            note: best.note,
        });
    }
    // Near-ties are settled by exact counts at the rounded optimum.
    let mut exact: HashMap<usize, BigCount> = HashMap::new();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs());
    for i in 0..entries.len() {
        for j in 0..entries.len() {
            if i != j && entries[i].value > 0.0 && close(entries[i].value, entries[j].value) {
                for idx in [i, j] {
                    if let std::collections::hash_map::Entry::Vacant(e) = exact.entry(idx) {
                        let poly = copies_in_blowup_poly(h, &catalog[idx].1, opts.budget)?;
                        let n = opts.tie_break_n.max(entries[idx].weights.len() as u64);
                        let sizes = crate::blowup::round_to_sum(&entries[idx].weights, n);
                        e.insert(poly.evaluate(&sizes)?);
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let (va, vb) = (entries[a].value, entries[b].value);
        if close(va, vb) {
            match (exact.get(&a), exact.get(&b)) {
                (Some(x), Some(y)) => y.cmp(x).then(a.cmp(&b)),
                _ => a.cmp(&b),
            }
        } else {
            vb.total_cmp(&va)
        }
    });
    let entries = order.into_iter().map(|i| entries[i].clone()).collect();
    Ok(CatalogReport { r, entries })
}
